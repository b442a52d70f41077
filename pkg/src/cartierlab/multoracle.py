"""Newton-polyhedron multiplier oracle for monomial pairs.

For a single monomial g = x^v and exponent t, membership x^a in the
multiplier ideal reduces to the componentwise strict inequalities
a_i + 1 > t * v_i, so the ideal is principal with generator exponent
floor(t * v_i) in each coordinate.  The same evaluation extends to signed
coordinate divisors (used on the cover side of the multiplier
transformation rule), where negative entries produce fractional ideals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .groebner import DEFAULT_SPAIR_CAP, Ideal, ideal_contains, ideal_equal
from .polyring import Polynomial, Ring
from .testideal import PrincipalPair, tau_polynomial


@dataclass(frozen=True)
class NewtonData:
    """Exponent vector of a monomial g, the scaling t, and the dimension."""

    exponents: tuple[int, ...]
    t: Fraction

    def __post_init__(self):
        if any(v < 0 for v in self.exponents):
            raise ValueError("monomial exponents must be nonnegative")
        if self.t < 0:
            raise ValueError("scaling must be nonnegative")
        if self.t > 0 and not any(self.exponents):
            raise ValueError("the pair (1, t) with t > 0 has no Newton data")

    @property
    def dimension(self) -> int:
        return len(self.exponents)


def monomial_exponent_of(g: Polynomial) -> tuple[int, ...]:
    if len(g.terms) != 1:
        raise ValueError("oracle requires a single monomial")
    (exps,) = g.terms
    return exps


def divisor_multiplier_exponent(coeffs) -> tuple[int, ...]:
    """Generator exponent of the multiplier ideal of the coordinate divisor
    sum_i coeffs[i] * div(x_i): the smallest integer vector a with
    a_i + 1 > coeffs[i], i.e. a_i = floor(coeffs[i]).  Entries may be
    negative, in which case the result indexes a fractional ideal."""
    out = []
    for c in coeffs:
        c = Fraction(c)
        out.append(c.numerator // c.denominator)
    return tuple(out)


def howald_multiplier(data: NewtonData, ring: Ring,
                      spair_cap: int = DEFAULT_SPAIR_CAP) -> Ideal:
    """Monomial multiplier ideal of (ring, t * div x^v) via the polyhedral
    membership test; the unit ideal exactly when t * v_i < 1 for all i."""
    if ring.nvars != data.dimension:
        raise ValueError("Newton data dimension does not match the ring")
    coeffs = [data.t * v for v in data.exponents]
    exps = divisor_multiplier_exponent(coeffs)
    return Ideal(ring, [ring.monomial(exps)], spair_cap=spair_cap)


def multiplier_of_pair(pair: PrincipalPair,
                       spair_cap: int = DEFAULT_SPAIR_CAP) -> Ideal:
    if pair.ambient.is_quotient:
        raise ValueError("the oracle covers polynomial ambients only")
    data = NewtonData(monomial_exponent_of(pair.g), pair.t)
    return howald_multiplier(data, pair.ambient.ring, spair_cap)


@dataclass
class ComparisonReport:
    tau: Ideal
    multiplier: Ideal
    contained: bool
    equal: bool


def compare_tau_multiplier(pair: PrincipalPair, *,
                           spair_cap: int = DEFAULT_SPAIR_CAP) -> ComparisonReport:
    """Compute tau by the stabilizing sum and J by the polyhedral oracle,
    then record the containment tau <= J and whether they coincide."""
    tau_ideal = tau_polynomial(pair, spair_cap=spair_cap).ideal
    mult_ideal = multiplier_of_pair(pair, spair_cap)
    contained = all(ideal_contains(mult_ideal, u) for u in tau_ideal.groebner_basis())
    equal = contained and ideal_equal(tau_ideal, mult_ideal)
    return ComparisonReport(tau=tau_ideal, multiplier=mult_ideal,
                            contained=contained, equal=equal)
