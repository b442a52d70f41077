"""Tests for the Frobenius decomposition and the trace operator."""

import random

import pytest

from cartierlab.frobenius import (
    CartierMap,
    IterationCapExceeded,
    cartier_apply,
    compose,
    decompose,
    image_ideal_generators,
    span_check,
)
from cartierlab.polyring import Polynomial, Ring, parse_polynomial


R2 = Ring(2, ["x"])
R3 = Ring(3, ["x"])
R3xy = Ring(3, ["x", "y"])


def P(text, ring):
    return parse_polynomial(text, ring)


def test_decompose_examples():
    d = decompose(P("x^3 + x^2", R2), 1)
    assert d.parts == {(0,): P("x", R2), (1,): P("x", R2)}

    d = decompose(R3.one(), 1)
    assert d.parts == {(0,): R3.one()}

    d = decompose(P("x^5*y", R3xy), 1)
    assert d.parts == {(2, 1): P("x", R3xy)}


def test_decompose_reconstruction_random():
    rng = random.Random(3)
    for p, e in [(2, 1), (2, 2), (3, 1), (5, 1), (7, 2)]:
        ring = Ring(p, ["x", "y"])
        for _ in range(10):
            terms = {
                (rng.randint(0, 30), rng.randint(0, 30)): rng.randint(1, p - 1)
                for _ in range(rng.randint(0, 6))
            }
            f = Polynomial(ring, terms)
            assert decompose(f, e).reconstruct() == f


def test_cartier_monomial_examples():
    cm = CartierMap(R3, 1, R3.one())
    assert cartier_apply(cm, P("x^2", R3)) == R3.one()
    assert cartier_apply(cm, P("x", R3)) == R3.zero()
    assert cartier_apply(cm, P("x^5", R3)) == P("x", R3)


def test_cartier_additive_and_semilinear():
    rng = random.Random(7)
    for p in (2, 3, 5):
        ring = Ring(p, ["x", "y"])
        for e in (1, 2):
            h = Polynomial(ring, {(1, 0): 1, (0, 2): p - 1})
            cm = CartierMap(ring, e, h)
            q = p**e
            for _ in range(5):
                f = Polynomial(ring, {
                    (rng.randint(0, 12), rng.randint(0, 12)): rng.randint(1, p - 1)
                    for _ in range(4)
                })
                g = Polynomial(ring, {
                    (rng.randint(0, 12), rng.randint(0, 12)): rng.randint(1, p - 1)
                    for _ in range(4)
                })
                a = Polynomial(ring, {(rng.randint(0, 3), rng.randint(0, 3)): 1})
                assert cartier_apply(cm, f + g) == cartier_apply(cm, f) + cartier_apply(cm, g)
                assert cartier_apply(cm, a.frobenius_power(q) * f) == a * cartier_apply(cm, f)


def test_cartier_surjectivity_with_unit_premultiplier():
    for p in (2, 3, 5):
        ring = Ring(p, ["x", "y"])
        for e in (1, 2):
            q = p**e
            cm = CartierMap(ring, e, ring.one())
            a = P("x^2 + 2*y", ring) if p > 2 else P("x^2 + y", ring)
            corner = ring.monomial((q - 1, q - 1))
            assert cartier_apply(cm, corner * a.frobenius_power(q)) == a


def test_compose_examples():
    one2 = CartierMap(R2, 1, R2.one())
    c = compose(one2, one2)
    assert c.e == 2 and c.premultiplier == R2.one()

    mx = CartierMap(R2, 1, P("x", R2))
    c = compose(mx, mx)
    assert c.e == 2
    assert c.premultiplier == P("x^3", R2)
    f = P("x^3", R2)
    assert cartier_apply(c, f) == cartier_apply(mx, cartier_apply(mx, f))


def test_compose_pointwise_random():
    rng = random.Random(13)
    for p in (2, 3):
        ring = Ring(p, ["x", "y"])
        for e1 in (1, 2):
            for e2 in (1, 2):
                h1 = Polynomial(ring, {(1, 1): 1, (0, 0): 1})
                h2 = Polynomial(ring, {(2, 0): 1})
                m1 = CartierMap(ring, e1, h1)
                m2 = CartierMap(ring, e2, h2)
                c = compose(m1, m2)
                for _ in range(5):
                    f = Polynomial(ring, {
                        (rng.randint(0, 20), rng.randint(0, 20)): rng.randint(1, p - 1)
                        for _ in range(3)
                    })
                    assert cartier_apply(c, f) == cartier_apply(m2, cartier_apply(m1, f))


def test_image_ideal_generators_are_digit_parts():
    # corner digits of h * x^(q-1-b) recover exactly the parts of h
    ring = R3
    h = P("x^4 + 2*x^2", ring)
    gens = image_ideal_generators(h, 1)
    parts = decompose(h, 1).parts
    assert sorted(map(str, gens)) == sorted(str(v) for v in parts.values())
    cm = CartierMap(ring, 1, h)
    q = 3
    for b in range(q):
        img = cartier_apply(cm, ring.monomial((q - 1 - b,)))
        assert img == parts.get((b,), ring.zero())


def test_e_bounds():
    with pytest.raises(ValueError):
        CartierMap(R3, 0, R3.one())
    with pytest.raises(IterationCapExceeded):
        CartierMap(R3, 13, R3.one())
    with pytest.raises(ValueError):
        CartierMap(R3, 1, R3.zero())


def test_span_check():
    assert span_check(1, R2, 1)
    assert span_check(1, R2, 2)
    assert span_check(1, R3, 1)
    assert span_check(1, R3, 0)  # degenerate: constants map through h
