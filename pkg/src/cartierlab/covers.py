"""Kummer covers S = R[z]/(z^n - f) with exact trace and verifiers.

A Kummer cover of degree n prime to p is free over its base with basis
1, z, ..., z^(n-1), so the field trace is the trace of an explicit
multiplication matrix and the twisted module z^(-(n-1)) * S is the trace
dual of S.  On top of that structure this module checks, at desk scale:

  * the transformation rule sending the cover-side stabilized sum to the
    base-side one through the trace,
  * the multiplier-ideal transformation for monomial pairs under covers
    along a coordinate, with the ramification term subtracted on the cover
    side (a different convention from the rule above; they are never mixed),
  * that trace images of the twisted module are stable under the Frobenius
    trace and contain the base test module.

Covers along a coordinate are rewritten into an honest polynomial ring;
other supported branch shapes go through the hypersurface-quotient route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .groebner import (
    DEFAULT_SPAIR_CAP,
    Ideal,
    MonomialOrder,
    ideal_contains,
    ideal_equal,
    normal_form,
)
from .frobenius import image_ideal_generators
from .multoracle import divisor_multiplier_exponent, monomial_exponent_of
from .polyring import Polynomial, Ring
from .testideal import (
    AmbientRing,
    PrincipalPair,
    TauResult,
    polynomial_ambient,
    quotient_ambient,
    tau,
    tau_polynomial,
)

_COVER_VAR_CANDIDATES = ("z", "u", "v", "s", "r0", "r1", "r2")


class UnsupportedCoverError(ValueError):
    """Cover or pair shape outside the supported family."""


@dataclass(frozen=True)
class RamificationDivisor:
    """(multiplicity) * div(variable); the derivative n*z^(n-1) contributes
    the unit n, so the divisor is (n-1) * div(z)."""

    variable: str
    multiplicity: int
    derivative_unit: int


@dataclass
class FractionalIdealData:
    """numerator * denominator_element^(-exponent) inside the fraction field.

    Normalized so that no positive exponent remains once every numerator
    generator is divisible by the denominator element.
    """

    numerator: Ideal
    denominator_element: Polynomial | None = None
    exponent: int = 0

    def normalize(self) -> "FractionalIdealData":
        num, d, k = self.numerator, self.denominator_element, self.exponent
        if d is None or k == 0:
            return self
        gens = list(num.generators)
        while k > 0 and gens:
            quots = [exact_divide(g, d) for g in gens]
            if any(q is None for q in quots):
                break
            gens = quots
            k -= 1
        return FractionalIdealData(
            Ideal(num.ring, gens, num.order, num.spair_cap), d, k
        )


def exact_divide(u: Polynomial, d: Polynomial) -> Polynomial | None:
    """u / d when the division is exact, else None."""
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = u.ring
    order = MonomialOrder.grevlex(ring.nvars)
    from .groebner import leading_monomial, monomial_div, monomial_divides

    lt = leading_monomial(d, order)
    lc_inv = ring.field.inv(d.terms[lt])
    quotient = ring.zero()
    rem = u
    while rem:
        m = leading_monomial(rem, order)
        if not monomial_divides(lt, m):
            return None
        c = (rem.terms[m] * lc_inv) % ring.p
        piece = ring.monomial(monomial_div(m, lt), c)
        quotient = quotient + piece
        rem = rem - piece * d
    return quotient


def _pick_cover_var(base: Ring) -> str:
    for name in _COVER_VAR_CANDIDATES:
        if name not in base.variables:
            return name
    i = 0
    while f"w{i}" in base.variables:
        i += 1
    return f"w{i}"


def _single_coordinate(f: Polynomial):
    """(index, coefficient) when f = c * x_i, else None."""
    if len(f.terms) != 1:
        return None
    ((exps, c),) = f.terms.items()
    nonzero = [(i, e) for i, e in enumerate(exps) if e]
    if len(nonzero) == 1 and nonzero[0][1] == 1:
        return nonzero[0][0], c
    return None


def _squarefree_monomial(f: Polynomial):
    """Variable indices when f = c * (product of distinct coordinates), else None."""
    if len(f.terms) != 1:
        return None
    ((exps, _),) = f.terms.items()
    if not any(exps) or any(e > 1 for e in exps):
        return None
    return tuple(i for i, e in enumerate(exps) if e)


class KummerCover:
    """The degree-n cover z^n = f of a base ring, free with basis z^i."""

    def __init__(self, base, n: int, f: Polynomial, *,
                 assert_irreducible: bool = False, cover_var: str | None = None,
                 spair_cap: int = DEFAULT_SPAIR_CAP):
        if isinstance(base, Ring):
            base = polynomial_ambient(base)
        ring = base.ring
        if f.ring != ring:
            raise UnsupportedCoverError("branch element outside the base ring")
        if n < 2:
            raise UnsupportedCoverError(f"cover degree must be >= 2, got {n}")
        if math.gcd(n, ring.p) != 1:
            raise UnsupportedCoverError(
                f"degree {n} shares a factor with the characteristic {ring.p}"
            )
        f_reduced = base.reduce(f)
        if not f_reduced or f_reduced.is_unit():
            raise UnsupportedCoverError("branch element must be a nonzero non-unit")
        coord = _single_coordinate(f) if not base.is_quotient else None
        sqfree = _squarefree_monomial(f)
        if coord is None and sqfree is None and not assert_irreducible:
            raise UnsupportedCoverError(
                "branch must be a coordinate, a squarefree monomial, or asserted irreducible"
            )
        self.base = base
        self.n = n
        self.f = f
        self.spair_cap = spair_cap
        self.cover_var = cover_var or _pick_cover_var(ring)
        if self.cover_var in ring.variables:
            raise UnsupportedCoverError(f"cover variable {self.cover_var!r} collides with the base")
        self._coord = coord

        # Presentation ambient: cover variable first, then the base variables.
        self.ambient_ring = Ring(ring.field, (self.cover_var, *ring.variables))
        self.relation = self.ambient_ring.variable(self.cover_var).power(n) - self.lift(f)
        self._lex_z = MonomialOrder.lex_first(self.ambient_ring, self.cover_var)
        if coord is not None:
            i, c = coord
            others = tuple(v for j, v in enumerate(ring.variables) if j != i)
            self.cover_poly_ring = Ring(ring.field, (self.cover_var, *others))
        else:
            self.cover_poly_ring = None

    # -- presentation plumbing -------------------------------------------------

    @property
    def base_ring(self) -> Ring:
        return self.base.ring

    @property
    def is_coordinate_cover(self) -> bool:
        return self._coord is not None

    def lift(self, poly: Polynomial) -> Polynomial:
        """Base polynomial viewed in the presentation ambient (z-degree 0)."""
        terms = {(0, *m): c for m, c in poly.terms.items()}
        return Polynomial(self.ambient_ring, terms)

    def to_cover_poly(self, poly: Polynomial) -> Polynomial:
        """Base polynomial rewritten in the cover polynomial ring (coordinate covers)."""
        if self.cover_poly_ring is None:
            raise UnsupportedCoverError("cover is not along a coordinate")
        i, c = self._coord
        P = self.cover_poly_ring
        z_power = P.variable(self.cover_var).power(self.n).scale(P.field.inv(c))
        images = []
        k = 1
        for j in range(self.base_ring.nvars):
            if j == i:
                images.append(z_power)
            else:
                images.append(P.variable(P.variables[k]))
                k += 1
        return poly.map_to(P, images)

    def base_coordinates(self, poly: Polynomial) -> list[Polynomial]:
        """Coordinates over the basis 1, z, ..., z^(n-1) of a polynomial in
        either cover presentation; quotient presentations are reduced mod
        the relation first."""
        R = self.base_ring
        coords = [R.zero() for _ in range(self.n)]
        if self.cover_poly_ring is not None and poly.ring == self.cover_poly_ring:
            i, c = self._coord
            others = [j for j in range(R.nvars) if j != i]
            for m, coeff in poly.terms.items():
                a, rest = m[0], m[1:]
                u, r = divmod(a, self.n)
                exps = [0] * R.nvars
                exps[i] = u
                for pos, e in zip(others, rest):
                    exps[pos] = e
                coords[r] = coords[r] + R.monomial(exps, coeff * pow(c, u, R.p))
            return coords
        if poly.ring != self.ambient_ring:
            raise UnsupportedCoverError("polynomial outside the cover presentation")
        reduced = normal_form(poly, [self.relation], self._lex_z)
        for m, coeff in reduced.terms.items():
            a, rest = m[0], m[1:]
            if a >= self.n:
                raise AssertionError("normal form left a high cover-variable power")
            coords[a] = coords[a] + self.base.reduce(Polynomial(R, {rest: coeff}))
        return coords

    # -- the free-module element algebra ---------------------------------------

    def element(self, coords) -> "CoverElement":
        return CoverElement(self, tuple(coords))

    def zero_element(self) -> "CoverElement":
        return self.element([self.base_ring.zero()] * self.n)

    def one_element(self) -> "CoverElement":
        R = self.base_ring
        return self.element([R.one()] + [R.zero()] * (self.n - 1))

    def generator_power(self, k: int) -> "CoverElement":
        """The element z^k for k >= 0."""
        R = self.base_ring
        u, r = divmod(k, self.n)
        coords = [R.zero()] * self.n
        coords[r] = self.base.reduce(self.f.power(u)) if u else R.one()
        return self.element(coords)


@dataclass(frozen=True)
class CoverElement:
    """sum coords[i] * z^i with coordinates in the base ring."""

    cover: KummerCover
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.cover.n:
            raise ValueError("coordinate vector length must equal the cover degree")
        for a in self.coords:
            if a.ring != self.cover.base_ring:
                raise ValueError("coordinate outside the base ring")

    def __add__(self, other: "CoverElement") -> "CoverElement":
        return self.cover.element([a + b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, other):
        cover = self.cover
        if isinstance(other, Polynomial):
            return cover.element([other * a for a in self.coords])
        n = cover.n
        raw = [cover.base_ring.zero() for _ in range(2 * n - 1)]
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(other.coords):
                if b:
                    raw[i + j] = raw[i + j] + a * b
        f = cover.f
        for k in range(2 * n - 2, n - 1, -1):
            if raw[k]:
                raw[k - n] = raw[k - n] + f * raw[k]
        return cover.element([cover.base.reduce(c) for c in raw[:n]])

    __rmul__ = __mul__


def field_trace(cover: KummerCover, s: CoverElement) -> Polynomial:
    """Trace of the multiplication-by-s matrix on the basis 1, ..., z^(n-1)."""
    if s.cover is not cover and s.cover.relation != cover.relation:
        raise ValueError("element belongs to a different cover")
    total = cover.base_ring.zero()
    column = s
    for j in range(cover.n):
        total = total + column.coords[j]
        if j + 1 < cover.n:
            column = column * cover.generator_power(1)
    return cover.base.reduce(total)


def trace_fractional(cover: KummerCover, s: CoverElement, denominator_exponent: int) -> Polynomial:
    """Trace of z^(-d) * s for 0 <= d < n, computed as Tr(z^(n-d) * s) / f."""
    d = denominator_exponent
    if d == 0:
        return field_trace(cover, s)
    if not 0 < d < cover.n:
        raise ValueError(f"denominator exponent must lie in [0, n), got {d}")
    lifted = s * cover.generator_power(cover.n - d)
    tr = field_trace(cover, lifted)
    if not tr:
        return tr
    quotient = exact_divide(tr, cover.f)
    if quotient is None:
        raise ArithmeticError("trace of a twisted element fell outside the base ring")
    return quotient


def ramification_divisor(cover: KummerCover) -> RamificationDivisor:
    return RamificationDivisor(
        variable=cover.cover_var,
        multiplicity=cover.n - 1,
        derivative_unit=cover.n % cover.base_ring.p,
    )


# -- pullback and the stabilized-sum transformation rule -----------------------


def _branch_coordinate_indices(cover: KummerCover):
    sq = _squarefree_monomial(cover.f)
    if sq is not None:
        return sq
    return None


def _coprime_to_branch(cover: KummerCover, g: Polynomial, assert_coprime: bool) -> bool:
    idxs = _branch_coordinate_indices(cover)
    if idxs is not None:
        for i in idxs:
            if all(m[i] > 0 for m in g.terms):
                return False  # shares the coordinate divisor x_i
        return True
    return assert_coprime


def pullback_pair(cover: KummerCover, pair: PrincipalPair, *,
                  assert_coprime: bool = False) -> PrincipalPair:
    """Pull a principal pair back along the cover.

    For g equal to the branch element, t * div(g) becomes (t*n) * div(z);
    for g coprime to the branch it transfers unchanged.  No ramification
    term is subtracted here: that convention belongs to the multiplier-side
    verifier only.
    """
    if pair.ambient.is_quotient or pair.ambient.ring != cover.base_ring:
        raise UnsupportedCoverError("pair must live on the cover's polynomial base")
    if cover.cover_poly_ring is not None:
        P = cover.cover_poly_ring
        ambient = polynomial_ambient(P)
        z = P.variable(cover.cover_var)
        if pair.g == cover.f:
            return PrincipalPair(ambient, z, pair.t * cover.n)
        if _coprime_to_branch(cover, pair.g, assert_coprime):
            return PrincipalPair(ambient, cover.to_cover_poly(pair.g), pair.t)
        raise UnsupportedCoverError("pair element neither equals the branch nor is coprime to it")
    A = cover.ambient_ring
    ambient = quotient_ambient(A, cover.relation)
    if pair.g == cover.f:
        return PrincipalPair(ambient, A.variable(cover.cover_var), pair.t * cover.n)
    if _coprime_to_branch(cover, pair.g, assert_coprime):
        return PrincipalPair(ambient, cover.lift(pair.g), pair.t)
    raise UnsupportedCoverError("pair element neither equals the branch nor is coprime to it")


@dataclass
class TransformReport:
    lhs: Ideal
    rhs: Ideal
    equal: bool
    cover_side: FractionalIdealData
    cover_result: TauResult | None = None
    base_result: TauResult | None = None


def verify_tau_transform(cover: KummerCover, pair: PrincipalPair, *,
                         assert_coprime: bool = False,
                         window: int = 2, e_max: int = 10) -> TransformReport:
    """Check that the trace sends the cover-side stabilized sum, twisted into
    z^(-(n-1)) * S, onto the base-side one.

    The cover-side module is z^(-(n-1)) * T where T is the stabilized sum of
    the pulled-back pair on S; its trace is generated by all basis
    coordinates of T's generators.
    """
    cap = cover.spair_cap
    pair_s = pullback_pair(cover, pair, assert_coprime=assert_coprime)
    cover_result = tau(pair_s, window=window, e_max=e_max, spair_cap=cap)
    lhs_gens = []
    for gen in cover_result.ideal.groebner_basis():
        for coord in cover.base_coordinates(gen):
            if coord:
                lhs_gens.append(coord)
    lhs = Ideal(cover.base_ring, lhs_gens, spair_cap=cap)
    base_result = tau_polynomial(pair, window=window, e_max=e_max, spair_cap=cap)
    rhs = base_result.ideal
    z_elem = (cover.cover_poly_ring or cover.ambient_ring).variable(cover.cover_var)
    cover_side = FractionalIdealData(cover_result.ideal, z_elem, cover.n - 1)
    return TransformReport(
        lhs=lhs,
        rhs=rhs,
        equal=ideal_equal(lhs, rhs),
        cover_side=cover_side,
        cover_result=cover_result,
        base_result=base_result,
    )


# -- trace image of the twisted module and its certificates --------------------


def trace_image(cover: KummerCover) -> FractionalIdealData:
    """The base module generated by traces of z^(-(n-1)) * z^i, i < n."""
    gens = []
    for i in range(cover.n):
        tr = trace_fractional(cover, cover.generator_power(i), cover.n - 1)
        if tr:
            gens.append(tr)
    numerator = Ideal(cover.base_ring, gens, spair_cap=cover.spair_cap)
    return FractionalIdealData(numerator, None, 0)


def _with_relation(cover: KummerCover, ideal: Ideal) -> Ideal:
    if not cover.base.is_quotient:
        return ideal
    w = cover.base.relation
    return Ideal(ideal.ring, list(ideal.generators) + [w], ideal.order, ideal.spair_cap)


def frobenius_stable(cover: KummerCover, data: FractionalIdealData) -> bool:
    """Certificate that the trace of Frobenius maps the module into itself."""
    ideal = _with_relation(cover, data.numerator)
    ring = cover.base_ring
    pre = ring.one() if not cover.base.is_quotient else cover.base.relation.power(ring.p - 1)
    for gen in ideal.groebner_basis():
        for part in image_ideal_generators(pre * gen, 1):
            if not ideal_contains(ideal, part):
                return False
    return True


def verify_containment_tau_in_image(cover: KummerCover, *,
                                    window: int = 2, e_max: int = 10) -> bool:
    """Check tau(omega_base) <= trace image of the twisted cover module."""
    R = cover.base_ring
    trivial = PrincipalPair(cover.base, R.one(), Fraction(0))
    tau_module = tau(trivial, window=window, e_max=e_max, spair_cap=cover.spair_cap)
    image = _with_relation(cover, trace_image(cover).numerator)
    return all(ideal_contains(image, g) for g in tau_module.ideal.groebner_basis())


# -- multiplier-side transformation (prime-to-p monomial case) -----------------


@dataclass
class MultiplierTransformReport:
    lhs: Ideal
    rhs: Ideal
    equal: bool
    cover_side: FractionalIdealData


def verify_multiplier_transform(cover: KummerCover, pair: PrincipalPair) -> MultiplierTransformReport:
    """Check Tr(J(S; pullback - ramification)) = J(R; pair) for monomial pairs.

    Unlike the stabilized-sum rule, the cover-side divisor here subtracts
    the ramification divisor (n-1) * div(z); the cover must run along a
    coordinate so both sides stay monomial.
    """
    if cover.cover_poly_ring is None or cover.base.is_quotient:
        raise UnsupportedCoverError("multiplier transform needs a cover along a coordinate")
    if pair.ambient.ring != cover.base_ring or pair.ambient.is_quotient:
        raise UnsupportedCoverError("pair must live on the cover's polynomial base")
    v = monomial_exponent_of(pair.g)
    t = pair.t
    R = cover.base_ring
    i, c = cover._coord
    n = cover.n

    # Cover-side divisor coefficients per variable of the cover ring
    # (z first, then the base variables except x_i).
    z_coeff = t * n * v[i] - (n - 1)
    other_coeffs = [t * v[j] for j in range(R.nvars) if j != i]
    exps = divisor_multiplier_exponent([z_coeff, *other_coeffs])
    a_z, a_rest = exps[0], exps[1:]

    P = cover.cover_poly_ring
    numerator_exps = (max(a_z, 0), *a_rest)
    numerator = Ideal(P, [P.monomial(numerator_exps)], spair_cap=cover.spair_cap)
    denominator_exp = max(0, -a_z)
    cover_side = FractionalIdealData(numerator, P.variable(cover.cover_var), denominator_exp)

    # Trace of the cover-side module: push each basis multiple through the
    # (possibly fractional) trace.
    rest_positions = [j for j in range(R.nvars) if j != i]
    rest_exps = [0] * R.nvars
    for pos, e in zip(rest_positions, a_rest):
        rest_exps[pos] = e
    rest_monomial = R.monomial(rest_exps)
    lhs_gens = []
    for k in range(n):
        power = a_z + k
        if power >= 0:
            tr = field_trace(cover, cover.generator_power(power) * rest_monomial)
        else:
            tr = trace_fractional(cover, cover.generator_power(0) * rest_monomial, -power)
        if tr:
            lhs_gens.append(tr)
    lhs = Ideal(R, lhs_gens, spair_cap=cover.spair_cap)

    rhs_exps = divisor_multiplier_exponent([t * vj for vj in v])
    rhs = Ideal(R, [R.monomial(rhs_exps)], spair_cap=cover.spair_cap)
    return MultiplierTransformReport(lhs=lhs, rhs=rhs, equal=ideal_equal(lhs, rhs),
                                     cover_side=cover_side)


# -- the root-adjunction presentation ------------------------------------------


@dataclass
class RootCoverPresentation:
    """Presentation adjoining a root whose divisor is an n-th part of div(f).

    The defining relation is alpha^n + f*alpha + f; the identity
    alpha^n = relation - f*(alpha + 1) certifies both that alpha + 1 is a
    unit wherever the relation holds (1 = (alpha+1) - alpha lies in the
    radical of (alpha+1)) and that n * div(alpha) = div(f) up to that unit.
    Normalization of the resulting ring is not computed.
    """

    ring: Ring
    relation: Polynomial
    unit_witness: Polynomial
    root_power_cofactor: Polynomial
    degree: int
    branch: Polynomial

    def certificate_holds(self) -> bool:
        alpha_power = self.ring.variable("alpha").power(self.degree)
        return self.relation + self.unit_witness * self.root_power_cofactor == alpha_power


def root_cover_presentation(f: Polynomial, n: int) -> RootCoverPresentation:
    if n < 2:
        raise ValueError(f"degree must be >= 2, got {n}")
    if not f or f.is_unit():
        raise ValueError("branch element must be a nonzero non-unit")
    base = f.ring
    if "alpha" in base.variables:
        raise ValueError("base ring already uses the name 'alpha'")
    ring = Ring(base.field, (*base.variables, "alpha"))
    lifted = Polynomial(ring, {(*m, 0): c for m, c in f.terms.items()})
    alpha = ring.variable("alpha")
    relation = alpha.power(n) + lifted * alpha + lifted
    return RootCoverPresentation(
        ring=ring,
        relation=relation,
        unit_witness=alpha + ring.one(),
        root_power_cofactor=-lifted,
        degree=n,
        branch=lifted,
    )
