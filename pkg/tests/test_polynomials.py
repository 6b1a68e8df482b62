import random
from fractions import Fraction

from tropchow.polynomials import Polynomial, power


def _random_poly(rng, nvars, max_deg=3, max_terms=5):
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        e = tuple(rng.randrange(max_deg + 1) for _ in range(nvars))
        terms[e] = Fraction(rng.randrange(-6, 7), rng.randrange(1, 4))
    return Polynomial(nvars, terms)


def test_basic_arithmetic():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.evaluate((3, 2)) == 5
    assert (p - p).is_zero()
    assert p.degree() == 2
    assert Polynomial.zero(2).degree() == -1


def test_eval_is_ring_hom():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randrange(1, 4)
        p = _random_poly(rng, n)
        q = _random_poly(rng, n)
        pt = tuple(Fraction(rng.randrange(-4, 5), rng.randrange(1, 3)) for _ in range(n))
        assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)
        assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)


def test_compose_linear():
    # p(x, y) = x^2 + y, substitute x = u + v, y = 2u
    p = power(Polynomial.variable(2, 0), 2) + Polynomial.variable(2, 1)
    q = p.compose_linear([[1, 1], [2, 0]])
    u = Polynomial.variable(2, 0)
    v = Polynomial.variable(2, 1)
    assert q == (u + v) * (u + v) + u.scale(2)

    rng = random.Random(5)
    for _ in range(30):
        n = rng.randrange(1, 4)
        m = rng.randrange(1, 4)
        p = _random_poly(rng, n)
        mat = [[rng.randrange(-3, 4) for _ in range(m)] for _ in range(n)]
        pt = tuple(rng.randrange(-3, 4) for _ in range(m))
        image_pt = tuple(sum(mat[i][j] * pt[j] for j in range(m)) for i in range(n))
        assert p.compose_linear(mat).evaluate(pt) == p.evaluate(image_pt)


def test_homogeneous_parts():
    p = Polynomial(2, {(0, 0): 1, (1, 0): 2, (1, 1): 3})
    assert p.homogeneous_component(1) == Polynomial(2, {(1, 0): 2})
    assert p.truncate(1) == Polynomial(2, {(0, 0): 1, (1, 0): 2})
    total = Polynomial.zero(2)
    for k in range(p.degree() + 1):
        total = total + p.homogeneous_component(k)
    assert total == p
