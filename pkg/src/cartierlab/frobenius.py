"""Frobenius pushforward decomposition and the premultiplied trace operator.

Over R = F_p[x_1, ..., x_n] the e-iterated Frobenius makes R a free module
over its subring of q-th powers (q = p^e) with basis the residue monomials
x^b, b in [0, q)^n.  The trace operator normalized here sends the corner
basis monomial x^(q-1, ..., q-1) to 1 and every other residue monomial to
0; a CartierMap premultiplies by a fixed h before extracting that corner
digit.  Ideals computed downstream are independent of the unit ambiguity
in this normalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .polyring import Polynomial, Ring, RingMismatchError

# Iteration counts are capped so q = p^e stays well inside guarded exponents.
DEFAULT_E_CAP = 12


class IterationCapExceeded(ValueError):
    """e exceeds the configured iteration cap."""


class SearchCapExceeded(RuntimeError):
    """An exhaustive search grew beyond the configured budget."""


def _check_e(e: int, cap: int = DEFAULT_E_CAP):
    if e < 1:
        raise ValueError(f"iteration count must be >= 1, got {e}")
    if e > cap:
        raise IterationCapExceeded(f"iteration count {e} exceeds the cap {cap}")


@dataclass(frozen=True)
class FrobeniusDecomposition:
    """Digit split f = sum_b parts[b]^(p^e) * x^b over residues b in [0, p^e)^n."""

    ring: Ring
    e: int
    parts: dict

    def reconstruct(self) -> Polynomial:
        q = self.ring.p ** self.e
        out = self.ring.zero()
        for b, fb in self.parts.items():
            out = out + fb.frobenius_power(q).shift(b)
        return out


def decompose(f: Polynomial, e: int, e_cap: int = DEFAULT_E_CAP) -> FrobeniusDecomposition:
    """Unique base-p^e digit split of every exponent vector of f."""
    _check_e(e, e_cap)
    ring = f.ring
    q = ring.p ** e
    raw: dict = {}
    for m, c in f.terms.items():
        residue = tuple(a % q for a in m)
        quotient = tuple(a // q for a in m)
        bucket = raw.setdefault(residue, {})
        s = (bucket.get(quotient, 0) + c) % ring.p
        if s:
            bucket[quotient] = s
        else:
            bucket.pop(quotient, None)
    parts = {
        b: Polynomial._raw(ring, terms)
        for b, terms in sorted(raw.items())
        if terms
    }
    return FrobeniusDecomposition(ring, e, parts)


class CartierMap:
    """The p^(-e)-linear operator f -> corner digit of h * f at level e."""

    __slots__ = ("ring", "e", "premultiplier")

    def __init__(self, ring: Ring, e: int, premultiplier: Polynomial, e_cap: int = DEFAULT_E_CAP):
        _check_e(e, e_cap)
        if premultiplier.ring != ring:
            raise RingMismatchError("premultiplier outside the map's ring")
        if not premultiplier:
            raise ValueError("premultiplier must be nonzero")
        self.ring = ring
        self.e = e
        self.premultiplier = premultiplier

    def __eq__(self, other):
        return (
            isinstance(other, CartierMap)
            and self.ring == other.ring
            and self.e == other.e
            and self.premultiplier == other.premultiplier
        )

    def __repr__(self):
        return f"CartierMap(e={self.e}, h={self.premultiplier})"


def cartier_apply(m: CartierMap, f: Polynomial) -> Polynomial:
    """Apply the operator: additive in f, and a^(p^e)-semilinear."""
    if f.ring != m.ring:
        raise RingMismatchError("operand outside the map's ring")
    ring = m.ring
    q = ring.p ** m.e
    hf = m.premultiplier * f
    corner = q - 1
    out: dict = {}
    p = ring.p
    for mono, c in hf.terms.items():
        if all(a % q == corner for a in mono):
            key = tuple((a - corner) // q for a in mono)
            s = (out.get(key, 0) + c) % p
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return Polynomial._raw(ring, out)


def compose(m1: CartierMap, m2: CartierMap, e_cap: int = DEFAULT_E_CAP) -> CartierMap:
    """The map applying m1 first and m2 second, as a single CartierMap.

    Semilinearity pulls m2's premultiplier through m1's level:
    m2(m1(f)) uses premultiplier h2^(p^e1) * h1 at level e1 + e2.
    """
    if m1.ring != m2.ring:
        raise RingMismatchError("composition across rings")
    q1 = m1.ring.p ** m1.e
    h = m2.premultiplier.frobenius_power(q1) * m1.premultiplier
    return CartierMap(m1.ring, m1.e + m2.e, h, e_cap=e_cap)


def image_ideal_generators(h: Polynomial, e: int, e_cap: int = DEFAULT_E_CAP) -> list:
    """Generators of the image ideal of f -> cartier_apply((e, h), f) over all f.

    The image is generated by the digit parts of h: each residue b recovers
    its part as the corner digit of h * x^(q-1-b).
    """
    if e == 0:
        return [h] if h else []
    return list(decompose(h, e, e_cap).parts.values())


def _all_polys_up_to_degree(ring: Ring, d: int):
    """Every univariate polynomial of degree <= d over the ring's field."""
    p = ring.p
    coeff_space = product(range(p), repeat=d + 1)
    out = []
    for coeffs in coeff_space:
        out.append(Polynomial(ring, {(i,): c for i, c in enumerate(coeffs)}))
    return out


def span_check(e: int, ring: Ring, degree_cap: int, search_cap: int = 2_000_000) -> bool:
    """Exhaustively verify that every p^(-e)-linear map on polynomials of
    degree <= degree_cap is realized by some premultiplier h.

    A candidate map is determined by free choices of images (degree <=
    degree_cap) on the residue monomials x^b with b <= min(q-1, degree_cap);
    images of higher monomials x^(qj+b) are forced to x^j * image(x^b).
    Premultipliers are searched up to degree q*(degree_cap+1) - 1, the exact
    degree window whose digits parametrize such maps.
    """
    if ring.nvars != 1:
        raise ValueError("span check runs on one-variable rings only")
    if degree_cap < 0:
        raise ValueError("degree cap must be >= 0")
    p = ring.p
    q = p ** e
    d = degree_cap
    h_degree = q * (d + 1) - 1
    residues = list(range(min(q - 1, d) + 1))
    n_maps = p ** ((d + 1) * len(residues))
    n_h = p ** (h_degree + 1)
    if n_maps + n_h > search_cap:
        raise SearchCapExceeded(f"{n_maps} maps and {n_h} premultipliers exceed {search_cap}")

    # Image tuple on x^0..x^d achieved by each premultiplier.
    monomials = [ring.monomial((a,)) for a in range(d + 1)]
    achievable = {tuple(ring.zero() for _ in monomials)}  # h = 0 gives the zero map
    for h in _all_polys_up_to_degree(ring, h_degree):
        if not h:
            continue
        cm = CartierMap(ring, e, h)
        achievable.add(tuple(cartier_apply(cm, xa) for xa in monomials))

    x = ring.variable(ring.variables[0])
    image_space = _all_polys_up_to_degree(ring, d)
    for images in product(image_space, repeat=len(residues)):
        full = []
        for a in range(d + 1):
            j, b = divmod(a, q)
            forced = images[b] * x.power(j) if j else images[b]
            full.append(forced)
        if tuple(full) not in achievable:
            return False
    return True
