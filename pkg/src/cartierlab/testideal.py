"""Test ideals of principal pairs by stabilizing sums of trace images.

For a pair (R, t * div g) on a polynomial ring the engine sums, over
iteration levels e, the image ideals of the trace operator premultiplied
by a power of g.  Two exponent schemes are supported:

  classical      exponent ceil(t * p^e), no extra premultiplier
  premultiplied  exponent ceil(t * (p^e - 1)) together with c^N

The chain of partial sums is ascending; stabilization is declared after a
window of equal consecutive sums, and running out of levels raises with
the partial chain attached.  Hypersurface quotients A/(w) are handled in
the ambient polynomial ring with the extra premultiplier w^(p^e - 1), all
ideals being represented by their full preimages (w adjoined).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .frobenius import image_ideal_generators
from .groebner import (
    DEFAULT_SPAIR_CAP,
    Ideal,
    MonomialOrder,
    ideal_contains,
    ideal_equal,
    ideal_sum,
    normal_form,
)
from .polyring import Polynomial, Ring, ceil_scale

SCHEME_CLASSICAL = "classical"
SCHEME_PREMULTIPLIED = "premultiplied"

DEFAULT_WINDOW = 2
DEFAULT_E_MAX = 10


class NotStabilizedError(RuntimeError):
    """The ascending chain did not stabilize within the level budget."""

    def __init__(self, e_max: int, chain):
        super().__init__(
            f"chain of partial sums not stable after e = {e_max}"
        )
        self.e_max = e_max
        self.chain = list(chain)


@dataclass(frozen=True)
class AmbientRing:
    """A polynomial ring, or a hypersurface quotient presented inside one."""

    ring: Ring
    relation: Polynomial | None = None

    def __post_init__(self):
        w = self.relation
        if w is not None:
            if w.ring != self.ring:
                raise ValueError("relation outside the ambient polynomial ring")
            if not w or w.is_unit():
                raise ValueError("relation must be a nonzero non-unit")

    @property
    def is_quotient(self) -> bool:
        return self.relation is not None

    @property
    def kind(self) -> str:
        return "hypersurface_quotient" if self.is_quotient else "polynomial"

    def reduce(self, f: Polynomial) -> Polynomial:
        """Canonical representative modulo the relation (identity if polynomial)."""
        if self.relation is None:
            return f
        order = MonomialOrder.grevlex(self.ring.nvars)
        return normal_form(f, [self.relation], order)

    def unit_ideal(self, spair_cap: int = DEFAULT_SPAIR_CAP) -> Ideal:
        return Ideal(self.ring, [self.ring.one()], spair_cap=spair_cap)


def polynomial_ambient(ring: Ring) -> AmbientRing:
    return AmbientRing(ring)


def quotient_ambient(ring: Ring, relation: Polynomial) -> AmbientRing:
    return AmbientRing(ring, relation)


@dataclass(frozen=True)
class PrincipalPair:
    """The pair (X, t * div g) with X given by an AmbientRing."""

    ambient: AmbientRing
    g: Polynomial
    t: Fraction

    def __post_init__(self):
        if self.g.ring != self.ambient.ring:
            raise ValueError("pair element outside the ambient ring")
        if self.t < 0:
            raise ValueError(f"exponent must be nonnegative, got {self.t}")
        if not self.ambient.reduce(self.g):
            raise ValueError("pair element is zero in the ambient ring")


@dataclass
class TauResult:
    """Stationary value of the chain plus its per-level contributions."""

    ideal: Ideal
    stabilized_at_e: int
    terms: tuple = field(default_factory=tuple)
    scheme: str = SCHEME_CLASSICAL

    def partial_sum(self, e: int) -> Ideal:
        out = self.terms[0]
        for term in self.terms[1 : e + 1]:
            out = ideal_sum(out, term)
        return out


def default_power_n(t: Fraction) -> int:
    """Smallest premultiplier power keeping every chain term inside the
    target ideal: with c = g this is ceil(t), floored at 1."""
    return max(1, ceil_scale(t, 1))


def _unit_result(ambient: AmbientRing, spair_cap: int, scheme: str) -> TauResult:
    unit = ambient.unit_ideal(spair_cap)
    return TauResult(ideal=unit, stabilized_at_e=0, terms=(unit,), scheme=scheme)


def _canonical(ideal: Ideal) -> Ideal:
    gb = ideal.groebner_basis()
    return Ideal(ideal.ring, list(gb), ideal.order, ideal.spair_cap)


def _run_chain(term_of_e, ambient: AmbientRing, window: int, e_max: int,
               spair_cap: int, scheme: str) -> TauResult:
    if window < 1:
        raise ValueError("stabilization window must be >= 1")
    terms = []
    sums = []
    current = None
    last_change = 0
    for e in range(e_max + 1):
        term = term_of_e(e)
        terms.append(term)
        current = _canonical(term) if current is None else _canonical(ideal_sum(current, term))
        sums.append(current)
        if e > 0 and ideal_equal(sums[e], sums[e - 1]):
            if e - last_change >= window:
                return TauResult(
                    ideal=sums[last_change],
                    stabilized_at_e=last_change,
                    terms=tuple(terms),
                    scheme=scheme,
                )
        else:
            last_change = e
    raise NotStabilizedError(e_max, sums)


def _term_exponent(scheme: str, t: Fraction, p: int, e: int) -> int:
    if scheme == SCHEME_CLASSICAL:
        return ceil_scale(t, p**e)
    if scheme == SCHEME_PREMULTIPLIED:
        return ceil_scale(t, p**e - 1)
    raise ValueError(f"unknown scheme {scheme!r}")


def tau_polynomial(pair: PrincipalPair, *, scheme: str = SCHEME_CLASSICAL,
                   c: Polynomial | None = None, N: int | None = None,
                   window: int = DEFAULT_WINDOW, e_max: int = DEFAULT_E_MAX,
                   spair_cap: int = DEFAULT_SPAIR_CAP) -> TauResult:
    """Stationary value of the ascending chain of premultiplied trace images
    for a principal pair on a polynomial ring.

    The classical scheme uses exponents ceil(t * p^e) with no extra
    premultiplier; the premultiplied scheme uses ceil(t * (p^e - 1)) with
    c^N (defaults c = g, N = max(1, ceil(t))).
    """
    if pair.ambient.is_quotient:
        raise ValueError("quotient ambient passed to the polynomial-ring routine")
    ring = pair.ambient.ring
    if pair.t == 0 or pair.g.is_unit():
        return _unit_result(pair.ambient, spair_cap, scheme)

    p = ring.p
    g = pair.g
    t = pair.t
    if scheme == SCHEME_PREMULTIPLIED:
        pre = (c if c is not None else g).power(N if N is not None else default_power_n(t))
    elif scheme == SCHEME_CLASSICAL:
        if c is not None or N is not None:
            raise ValueError("premultiplier options apply to the premultiplied scheme only")
        pre = ring.one()
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    def term_of_e(e: int) -> Ideal:
        h = pre * g.power(_term_exponent(scheme, t, p, e))
        return Ideal(ring, image_ideal_generators(h, e), spair_cap=spair_cap)

    return _run_chain(term_of_e, pair.ambient, window, e_max, spair_cap, scheme)


def tau_quotient(pair: PrincipalPair, *, c: Polynomial | None = None,
                 N: int | None = None, window: int = DEFAULT_WINDOW,
                 e_max: int = DEFAULT_E_MAX,
                 spair_cap: int = DEFAULT_SPAIR_CAP) -> TauResult:
    """As tau_polynomial, for a hypersurface quotient A/(w): each level-e
    term gains the premultiplier w^(p^e - 1) realizing the quotient's trace
    inside A, and every ideal carries (w) as part of its preimage."""
    ambient = pair.ambient
    if not ambient.is_quotient:
        raise ValueError("polynomial ambient passed to the quotient routine")
    ring = ambient.ring
    w = ambient.relation
    if pair.t == 0 or ambient.reduce(pair.g).is_unit():
        return _unit_result(ambient, spair_cap, SCHEME_PREMULTIPLIED)

    p = ring.p
    g = pair.g
    t = pair.t
    pre = (c if c is not None else g).power(N if N is not None else default_power_n(t))

    def term_of_e(e: int) -> Ideal:
        h = w.power(p**e - 1) * pre * g.power(_term_exponent(SCHEME_PREMULTIPLIED, t, p, e))
        gens = image_ideal_generators(h, e)
        gens = [ambient.reduce(u) for u in gens]
        return Ideal(ring, [u for u in gens if u] + [w], spair_cap=spair_cap)

    return _run_chain(term_of_e, ambient, window, e_max, spair_cap, SCHEME_PREMULTIPLIED)


def tau(pair: PrincipalPair, **options) -> TauResult:
    """Dispatch on the ambient kind."""
    if pair.ambient.is_quotient:
        options.pop("scheme", None)
        return tau_quotient(pair, **options)
    return tau_polynomial(pair, **options)


def cross_checked_tau(pair: PrincipalPair, *, window: int = DEFAULT_WINDOW,
                      e_max: int = DEFAULT_E_MAX,
                      spair_cap: int = DEFAULT_SPAIR_CAP):
    """Compute both exponent schemes and report whether they agree.

    Returns (classical_result, premultiplied_result, agree).  Only defined
    for polynomial ambients; quotients have a single scheme.
    """
    classical = tau_polynomial(pair, scheme=SCHEME_CLASSICAL, window=window,
                               e_max=e_max, spair_cap=spair_cap)
    premult = tau_polynomial(pair, scheme=SCHEME_PREMULTIPLIED, window=window,
                             e_max=e_max, spair_cap=spair_cap)
    return classical, premult, ideal_equal(classical.ideal, premult.ideal)


def nu_value(g: Polynomial, e: int) -> int:
    """Largest r with g^r outside the Frobenius power (x_1^q, ..., x_n^q),
    q = p^e.  Requires g in the maximal ideal at the origin."""
    if e < 1:
        raise ValueError(f"iteration count must be >= 1, got {e}")
    if not g:
        raise ValueError("zero element has no nu value")
    if g.constant_term() != 0:
        raise ValueError("element must lie in the maximal ideal at the origin")
    ring = g.ring
    q = ring.p ** e

    def reduce_mod_frobenius_power(f: Polynomial) -> Polynomial:
        kept = {m: c for m, c in f.terms.items() if all(a < q for a in m)}
        return Polynomial._raw(ring, kept)

    r = 0
    power = reduce_mod_frobenius_power(ring.one())
    while True:
        nxt = reduce_mod_frobenius_power(power * g)
        if not nxt:
            return r
        power = nxt
        r += 1


def _simplest_fraction_in(lo: Fraction, hi: Fraction, max_den: int) -> Fraction | None:
    """Fraction with the smallest denominator in the half-open interval (lo, hi]."""
    for den in range(1, max_den + 1):
        num = (lo.numerator * den) // lo.denominator + 1
        cand = Fraction(num, den)
        if lo < cand <= hi:
            return cand
    return None


def fpt_search(g: Polynomial, e_max: int, denominator_bound: int = 100, *,
               spair_cap: int = DEFAULT_SPAIR_CAP) -> tuple[Fraction, Fraction]:
    """Bracket the threshold where tau(g^t) stops being the unit ideal.

    Returns (lo, hi) with hi - lo <= 1/p^e_max, tau(g^lo) = (1) and
    tau(g^hi) != (1).  The candidate hi is the simplest fraction inside the
    nu-value bracket (nu/q, (nu+1)/q], demoted to (nu+1)/q when the unit
    test rejects it.
    """
    if e_max < 1:
        raise ValueError(f"level budget must be >= 1, got {e_max}")
    ring = g.ring
    q = ring.p ** e_max
    nu = nu_value(g, e_max)
    lo = Fraction(nu, q)
    hi_fallback = Fraction(nu + 1, q)
    ambient = polynomial_ambient(ring)

    def tau_is_unit(t: Fraction) -> bool:
        result = tau_polynomial(PrincipalPair(ambient, g, t),
                                e_max=max(DEFAULT_E_MAX, e_max + 2),
                                spair_cap=spair_cap)
        return result.ideal.is_unit()

    hi = _simplest_fraction_in(lo, hi_fallback, denominator_bound)
    if hi is None or tau_is_unit(hi):
        hi = hi_fallback
    if lo > 0 and not tau_is_unit(lo):
        raise AssertionError(f"nu bracket violated: tau(g^{lo}) is not the unit ideal")
    return lo, hi
