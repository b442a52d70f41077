"""Exact arithmetic over F_p and sparse multivariate polynomials.

Coefficients are machine integers reduced mod p, monomials are exponent
tuples, and every polynomial is kept in canonical form (no zero
coefficients, one term map per polynomial).  All values are immutable
after construction and safe to share between threads.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

# Exponents are guarded so products stay far from overflow even after the
# repeated doubling done by Frobenius decompositions.
EXPONENT_LIMIT = 1 << 62


class RingMismatchError(ValueError):
    """Raised when operands live in different rings."""


class ExponentOverflowError(OverflowError):
    """Raised when exponent arithmetic would exceed the guarded limit."""


class ParseError(ValueError):
    """Syntax or name error in polynomial text, with a 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


class PrimeField:
    """The prime field Z/pZ, elements represented as ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or not (2 <= p <= 2**31 - 1):
            raise ValueError(f"modulus must be a prime in [2, 2^31-1], got {p!r}")
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    def reduce(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a prime field")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Ring:
    """Descriptor for F_p[x_1, ..., x_n]: a prime field plus named variables."""

    __slots__ = ("field", "variables", "_index")

    def __init__(self, field, variables):
        if isinstance(field, int):
            field = PrimeField(field)
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        for v in variables:
            if not _NAME_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        self.field = field
        self.variables = variables
        self._index = {v: i for i, v in enumerate(variables)}

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def var_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self!r}") from None

    def zero(self) -> "Polynomial":
        return Polynomial._raw(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial._raw(self, {(0,) * self.nvars: c})

    def variable(self, name: str) -> "Polynomial":
        exps = [0] * self.nvars
        exps[self.var_index(name)] = 1
        return Polynomial._raw(self, {tuple(exps): 1})

    def monomial(self, exps, coeff: int = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError(f"expected {self.nvars} exponents, got {len(exps)}")
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        coeff %= self.p
        if coeff == 0:
            return self.zero()
        return Polynomial._raw(self, {exps: coeff})

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.field == other.field
            and self.variables == other.variables
        )

    def __hash__(self):
        return hash((self.field, self.variables))

    def __repr__(self):
        return f"Ring(p={self.p}, variables={list(self.variables)})"


def grevlex_key(exps):
    """Sort key realizing graded reverse lexicographic order (identity permutation)."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def monomial_mul(a, b):
    out = []
    for x, y in zip(a, b):
        s = x + y
        if s >= EXPONENT_LIMIT:
            raise ExponentOverflowError(f"exponent {s} exceeds guarded limit")
        out.append(s)
    return tuple(out)


def monomial_divides(a, b) -> bool:
    """True when x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a, b):
    """Exponent vector of x^a / x^b; requires b | a."""
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _binom_table(p: int):
    # Pascal triangle mod p, rows 0..p-1; only built for small p.
    rows = [[1]]
    for n in range(1, p):
        prev = rows[-1]
        row = [1]
        for k in range(1, n):
            row.append((prev[k - 1] + prev[k]) % p)
        row.append(1)
        rows.append(row)
    return rows


_BINOM_CACHE: dict[int, list] = {}


def binomial_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem (digit-wise in base p)."""
    if k < 0 or k > n:
        return 0
    if p not in _BINOM_CACHE:
        _BINOM_CACHE[p] = _binom_table(p)
    table = _BINOM_CACHE[p]
    out = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        out = (out * table[nd][kd]) % p
        n //= p
        k //= p
    return out


class Polynomial:
    """Sparse multivariate polynomial over a prime field, in canonical form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms):
        p = ring.p
        n = ring.nvars
        canon = {}
        for exps, c in dict(terms).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"monomial {exps} has wrong arity for {ring!r}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c %= p
            if c:
                canon[exps] = c
        self.ring = ring
        self.terms = canon
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "Polynomial":
        # Trusted constructor: terms already canonical.
        self = object.__new__(cls)
        self.ring = ring
        self.terms = terms
        self._hash = None
        return self

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def __bool__(self):
        return bool(self.terms)

    def is_unit(self) -> bool:
        """Nonzero constant."""
        if len(self.terms) != 1:
            return False
        (exps,) = self.terms
        return not any(exps)

    def is_constant(self) -> bool:
        return not self.terms or self.is_unit()

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def total_degree(self) -> int:
        """Maximum term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = (out.get(m, 0) - c) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    def __neg__(self) -> "Polynomial":
        p = self.ring.p
        return Polynomial._raw(self.ring, {m: p - c for m, c in self.terms.items()})

    def scale(self, c: int) -> "Polynomial":
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        p = self.ring.p
        return Polynomial._raw(self.ring, {m: (c * v) % p for m, v in self.terms.items()})

    def shift(self, mono, coeff: int = 1) -> "Polynomial":
        """Multiply by coeff * x^mono."""
        coeff %= self.ring.p
        if coeff == 0:
            return self.ring.zero()
        p = self.ring.p
        out = {}
        for m, c in self.terms.items():
            out[monomial_mul(m, mono)] = (c * coeff) % p
        return Polynomial._raw(self.ring, out)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        p = self.ring.p
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = monomial_mul(m1, m2)
                s = (out.get(m, 0) + c1 * c2) % p
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def power(self, k: int) -> "Polynomial":
        """k-th power; repeated squaring, with a closed binomial form for 2-term inputs."""
        if k < 0:
            raise ValueError("negative power of a polynomial")
        if k == 0:
            return self.ring.one()
        if not self.terms:
            return self.ring.zero()
        p = self.ring.p
        if len(self.terms) == 1:
            ((m, c),) = self.terms.items()
            for e in m:
                if e * k >= EXPONENT_LIMIT:
                    raise ExponentOverflowError(f"exponent {e * k} exceeds guarded limit")
            return Polynomial._raw(
                self.ring, {tuple(e * k for e in m): pow(c, k, p)}
            )
        if len(self.terms) == 2 and k >= 8 and p <= 4096:
            # Binomial expansion with Lucas coefficients: one pass, k+1 terms.
            (m1, c1), (m2, c2) = self.terms.items()
            out = {}
            c1pow = 1
            c2pow = pow(c2, k, p)
            c2inv = self.ring.field.inv(c2)
            for i in range(k + 1):
                coeff = (binomial_mod_p(k, i, p) * c1pow) % p * c2pow % p
                if coeff:
                    m = tuple(a * i + b * (k - i) for a, b in zip(m1, m2))
                    if any(e >= EXPONENT_LIMIT for e in m):
                        raise ExponentOverflowError("exponent exceeds guarded limit")
                    out[m] = coeff
                c1pow = (c1pow * c1) % p
                c2pow = (c2pow * c2inv) % p
            return Polynomial._raw(self.ring, out)
        result = self.ring.one()
        base = self
        e = k
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    __pow__ = power

    def frobenius_power(self, q: int) -> "Polynomial":
        """self^q for q a power of p: exponent scaling, coefficients fixed."""
        out = {}
        for m, c in self.terms.items():
            sm = tuple(e * q for e in m)
            if any(e >= EXPONENT_LIMIT for e in sm):
                raise ExponentOverflowError("exponent exceeds guarded limit")
            out[sm] = c
        return Polynomial._raw(self.ring, out)

    def map_to(self, target: Ring, images) -> "Polynomial":
        """Ring map sending variable i to images[i] (a Polynomial over target)."""
        images = list(images)
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        out = target.zero()
        for m, c in self.terms.items():
            term = target.constant(c)
            for img, e in zip(images, m):
                if e:
                    term = term * img.power(e)
            out = out + term
        return out

    def sorted_terms(self):
        """Terms in descending grevlex order."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple(sorted(self.terms.items()))))
        return self._hash

    def __str__(self):
        return emit_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self.ring.p}; {self})"


def emit_polynomial(poly: Polynomial) -> str:
    """Canonical text form: terms in descending grevlex order, '+'-separated.

    Round-trips exactly through parse_polynomial.
    """
    if not poly.terms:
        return "0"
    names = poly.ring.variables
    chunks = []
    for exps, coeff in poly.sorted_terms():
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            chunks.append(str(coeff))
        elif coeff == 1:
            chunks.append("*".join(factors))
        else:
            chunks.append(f"{coeff}*" + "*".join(factors))
    return " + ".join(chunks)


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^])"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    # Grammar:  poly := term (('+'|'-') term)*
    #           term := coeff ('*' factor)* | factor ('*' factor)*
    #           factor := var ('^' uint)?
    # Unary minus is permitted on the first term only.

    def __init__(self, text: str, ring: Ring):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        negate = False
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            negate = True
        poly = self.parse_term()
        if negate:
            poly = -poly
        while True:
            kind, val, pos = self.peek()
            if kind == "end":
                break
            if kind != "op" or val not in "+-":
                raise ParseError(f"expected '+' or '-', found {val!r}", pos)
            self.advance()
            term = self.parse_term()
            poly = poly - term if val == "-" else poly + term
        return poly

    def parse_term(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "int":
            self.advance()
            poly = self.ring.constant(int(val))
        elif kind == "name":
            poly = self.parse_factor()
        else:
            raise ParseError(f"expected a term, found {val!r}" if val else "expected a term", pos)
        while True:
            kind, val, pos = self.peek()
            if kind != "op" or val != "*":
                break
            self.advance()
            poly = poly * self.parse_factor()
        return poly

    def parse_factor(self) -> Polynomial:
        kind, val, pos = self.advance()
        if kind != "name":
            raise ParseError(f"expected a variable, found {val!r}" if val else "expected a variable", pos)
        if val not in self.ring._index:
            raise ParseError(f"unknown variable {val!r}", pos)
        exp = 1
        kind, nval, npos = self.peek()
        if kind == "op" and nval == "^":
            self.advance()
            kind, ev, epos = self.advance()
            if kind != "int":
                raise ParseError(f"expected an exponent, found {ev!r}" if ev else "expected an exponent", epos)
            exp = int(ev)
        exps = [0] * self.ring.nvars
        exps[self.ring.var_index(val)] = exp
        return self.ring.monomial(exps)


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse the canonical polynomial grammar into a Polynomial over ring."""
    return _Parser(text, ring).parse()


def parse_rational(text: str) -> Fraction:
    """Parse 'num/den' or 'num' into a nonnegative Fraction."""
    text = text.strip()
    if "/" in text:
        num_s, den_s = text.split("/", 1)
        frac = Fraction(int(num_s), int(den_s))
    else:
        frac = Fraction(int(text))
    if frac < 0:
        raise ValueError(f"expected a nonnegative rational, got {text!r}")
    return frac


def format_rational(t: Fraction) -> str:
    if t.denominator == 1:
        return str(t.numerator)
    return f"{t.numerator}/{t.denominator}"


def ceil_scale(t: Fraction, m: int) -> int:
    """ceil(t * m) computed exactly in integer arithmetic; t >= 0, m >= 0."""
    if m < 0:
        raise ValueError(f"scale factor must be nonnegative, got {m}")
    if t < 0:
        raise ValueError(f"exponent must be nonnegative, got {t}")
    num = t.numerator * m
    den = t.denominator
    return -((-num) // den)
