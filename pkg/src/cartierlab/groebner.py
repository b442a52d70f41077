"""Buchberger-based ideal engine over F_p[x_1, ..., x_n].

Reduced Groebner bases are the canonical identity for ideals everywhere in
this package: membership, equality and sums all reduce to basis
computations.  The pair queue uses the Gebauer-Moeller elimination
criteria and a hard S-pair budget; exceeding the budget raises instead of
silently truncating.
"""

from __future__ import annotations

from dataclasses import dataclass

from .polyring import (
    Polynomial,
    Ring,
    RingMismatchError,
    grevlex_key,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)

DEFAULT_SPAIR_CAP = 100_000


class SPairCapExceeded(RuntimeError):
    """The configured S-pair budget was exhausted before the basis completed."""

    def __init__(self, cap: int):
        super().__init__(f"S-pair budget of {cap} exceeded")
        self.cap = cap


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: grevlex or lex on a permutation of the variables."""

    kind: str
    perm: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"invalid variable permutation {self.perm}")

    @staticmethod
    def grevlex(nvars: int) -> "MonomialOrder":
        return MonomialOrder("grevlex", tuple(range(nvars)))

    @staticmethod
    def lex(nvars: int, perm=None) -> "MonomialOrder":
        return MonomialOrder("lex", tuple(perm) if perm is not None else tuple(range(nvars)))

    @staticmethod
    def lex_first(ring: Ring, name: str) -> "MonomialOrder":
        """Lex order with the named variable heaviest; used for cover-variable elimination."""
        i = ring.var_index(name)
        rest = [j for j in range(ring.nvars) if j != i]
        return MonomialOrder("lex", (i, *rest))

    def key(self, exps):
        if self.kind == "grevlex":
            permuted = [exps[i] for i in self.perm]
            return (sum(permuted), tuple(-e for e in reversed(permuted)))
        return tuple(exps[i] for i in self.perm)


def leading_monomial(f: Polynomial, order: MonomialOrder):
    if not f.terms:
        raise ValueError("zero polynomial has no leading monomial")
    return max(f.terms, key=order.key)


def leading_coefficient(f: Polynomial, order: MonomialOrder) -> int:
    return f.terms[leading_monomial(f, order)]


def monic(f: Polynomial, order: MonomialOrder) -> Polynomial:
    lc = leading_coefficient(f, order)
    if lc == 1:
        return f
    return f.scale(f.ring.field.inv(lc))


def normal_form(f: Polynomial, basis, order: MonomialOrder) -> Polynomial:
    """Remainder of f on full division by basis: no remainder term is
    divisible by any basis leading term, and f - result lies in (basis)."""
    basis = [b for b in basis if b]
    if not basis:
        return f
    ring = f.ring
    p = ring.p
    inv = ring.field.inv
    lts = [(leading_monomial(b, order), b) for b in basis]
    work = dict(f.terms)
    remainder: dict = {}
    key = order.key
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for lt, b in lts:
            if monomial_divides(lt, m):
                quot = monomial_div(m, lt)
                factor = (c * inv(b.terms[lt])) % p
                for bm, bc in b.terms.items():
                    if bm == lt:
                        continue
                    mm = monomial_mul(bm, quot)
                    s = (work.get(mm, 0) - factor * bc) % p
                    if s:
                        work[mm] = s
                    else:
                        work.pop(mm, None)
                break
        else:
            remainder[m] = c
    return Polynomial._raw(ring, remainder)


def _s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    lf = leading_monomial(f, order)
    lg = leading_monomial(g, order)
    l = monomial_lcm(lf, lg)
    inv = f.ring.field.inv
    a = f.shift(monomial_div(l, lf), inv(f.terms[lf]))
    b = g.shift(monomial_div(l, lg), inv(g.terms[lg]))
    return a - b


def minimal_monomials(monos):
    """Minimal elements of a set of exponent vectors under divisibility."""
    out = []
    for m in sorted(set(monos), key=grevlex_key):
        if not any(monomial_divides(k, m) for k in out):
            out.append(m)
    return out


def _interreduce(gens, order: MonomialOrder):
    gens = sorted(set(g for g in gens if g), key=lambda g: order.key(leading_monomial(g, order)))
    changed = True
    while changed:
        changed = False
        for i in range(len(gens)):
            others = gens[:i] + gens[i + 1 :]
            r = normal_form(gens[i], others, order)
            if r != gens[i]:
                changed = True
                if r:
                    gens[i] = r
                else:
                    gens.pop(i)
                gens = sorted(set(g for g in gens if g), key=lambda g: order.key(leading_monomial(g, order)))
                break
    return gens


def _gm_update(G, lts, pairs, h, order):
    """Gebauer-Moeller pair update when appending h to the basis G."""
    t = len(G)
    lt_h = leading_monomial(h, order)
    lcms = {i: monomial_lcm(lts[i], lt_h) for i in range(t)}

    # Criteria M and F among the new pairs (i, t).
    D = []
    for i in range(t):
        li = lcms[i]
        coprime = li == monomial_mul(lts[i], lt_h)
        dominated = False
        if not coprime:
            for j in range(t):
                if j == i:
                    continue
                lj = lcms[j]
                if lj == li:
                    if j < i:
                        dominated = True
                        break
                elif monomial_divides(lj, li):
                    dominated = True
                    break
        if not dominated:
            D.append((i, coprime))

    # Product criterion: coprime leading terms need no S-pair.
    new_pairs = {(i, t): lcms[i] for i, coprime in D if not coprime}

    # Prune old pairs whose lcm is strictly covered through h.
    for (i, j), lij in list(pairs.items()):
        if (
            monomial_divides(lt_h, lij)
            and lcms[i] != lij
            and lcms[j] != lij
        ):
            del pairs[(i, j)]

    pairs.update(new_pairs)
    G.append(h)
    lts.append(lt_h)


def buchberger(gens, order: MonomialOrder, spair_cap: int = DEFAULT_SPAIR_CAP):
    """Reduced Groebner basis of (gens), sorted by leading monomial descending.

    Deterministic for a given input.  Raises SPairCapExceeded when more than
    spair_cap S-polynomials would need reduction.
    """
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens[1:]:
        if g.ring != ring:
            raise RingMismatchError("generators live in different rings")
    if any(g.is_unit() for g in gens):
        return [ring.one()]
    if all(len(g.terms) == 1 for g in gens):
        mins = minimal_monomials([next(iter(g.terms)) for g in gens])
        basis = [ring.monomial(m) for m in mins]
        basis.sort(key=lambda g: order.key(leading_monomial(g, order)), reverse=True)
        return basis

    work = _interreduce(gens, order)
    if not work:
        return []
    if any(g.is_unit() for g in work):
        return [ring.one()]

    G: list[Polynomial] = []
    lts: list = []
    pairs: dict = {}
    for g in work:
        _gm_update(G, lts, pairs, monic(g, order), order)

    processed = 0
    while pairs:
        (i, j), lij = min(pairs.items(), key=lambda kv: (order.key(kv[1]), kv[0]))
        del pairs[(i, j)]
        processed += 1
        if processed > spair_cap:
            raise SPairCapExceeded(spair_cap)
        s = _s_polynomial(G[i], G[j], order)
        r = normal_form(s, G, order)
        if r:
            if r.is_unit():
                return [ring.one()]
            _gm_update(G, lts, pairs, monic(r, order), order)

    return _reduce_basis(G, order)


def _reduce_basis(G, order: MonomialOrder):
    by_lt = sorted((g for g in G if g), key=lambda g: order.key(leading_monomial(g, order)))
    minimal = []
    minimal_lts = []
    for g in by_lt:
        lt = leading_monomial(g, order)
        if not any(monomial_divides(m, lt) for m in minimal_lts):
            minimal.append(g)
            minimal_lts.append(lt)
    changed = True
    while changed:
        changed = False
        for i in range(len(minimal)):
            others = minimal[:i] + minimal[i + 1 :]
            r = monic(normal_form(minimal[i], others, order), order)
            if r != minimal[i]:
                minimal[i] = r
                changed = True
    minimal.sort(key=lambda g: order.key(leading_monomial(g, order)), reverse=True)
    return minimal


class Ideal:
    """An ideal given by generators, with a lazily cached reduced basis."""

    __slots__ = ("ring", "generators", "order", "spair_cap", "_gb")

    def __init__(self, ring: Ring, generators, order: MonomialOrder | None = None,
                 spair_cap: int = DEFAULT_SPAIR_CAP):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatchError("generator outside the ideal's ring")
            if g:
                gens.append(g)
        self.generators = tuple(gens)
        self.order = order if order is not None else MonomialOrder.grevlex(ring.nvars)
        self.spair_cap = spair_cap
        self._gb = None

    def groebner_basis(self) -> tuple:
        if self._gb is None:
            self._gb = tuple(buchberger(list(self.generators), self.order, self.spair_cap))
        return self._gb

    def is_zero(self) -> bool:
        return not self.groebner_basis()

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_unit()

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.generators) + ")"


def ideal_contains(I: Ideal, f: Polynomial) -> bool:
    if f.ring != I.ring:
        raise RingMismatchError("membership test across rings")
    return not normal_form(f, I.groebner_basis(), I.order)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    if I.ring != J.ring:
        raise RingMismatchError("equality test across rings")
    if I.order != J.order:
        raise ValueError("equality test requires a common monomial order")
    return I.groebner_basis() == J.groebner_basis()


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    if I.ring != J.ring:
        raise RingMismatchError("sum of ideals across rings")
    return Ideal(I.ring, I.generators + J.generators, I.order, I.spair_cap)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    if I.ring != J.ring:
        raise RingMismatchError("product of ideals across rings")
    gens = [a * b for a in I.generators for b in J.generators]
    return Ideal(I.ring, gens, I.order, I.spair_cap)
