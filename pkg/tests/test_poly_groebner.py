import random

import pytest
from hypothesis import given, strategies as st

from weilkit import GF, QQ, EtaleAlgebra, PolyRing
from weilkit.errors import DegreeBudgetExceeded
from weilkit.groebner import GroebnerBasis, groebner, is_unit_ideal
from weilkit.poly import jacobian, minors


@pytest.fixture
def Rq():
    return PolyRing(QQ, ["x", "y"])


@pytest.fixture
def R2():
    return PolyRing(GF(2), ["x", "y"])


def test_product_and_zero(Rq):
    p = Rq.parse("(x+y)*(x-y)")
    assert p == Rq.parse("x^2 - y^2")
    assert p + Rq.zero() == p


def test_canonical_terms_drop_zeros(R2):
    p = R2.parse("x + x + y")
    assert p == R2.parse("y")
    assert all(len(e) == 2 for e in p.terms)


def test_substitution_is_the_expansion_step(F4):
    RL = PolyRing(F4, ["x"])
    R4 = PolyRing(F4, ["x0", "x1"])
    image = RL.parse("x^2").substitute([R4.parse("x0 + x1*t")])
    assert image == R4.parse("x0^2 + x1^2 + t*x1^2")


def test_reduced_bases(Rq, R2):
    assert list(groebner([Rq.parse("x^2 - 1"), Rq.parse("x - 1")])) == [Rq.parse("x - 1")]
    assert list(groebner([R2.parse("x*y - 1")])) == [R2.parse("x*y + 1")]
    G = groebner([Rq.parse("x^2 + y^2 - 1"), Rq.parse("x - y")])
    assert set(G) == {Rq.parse("x - y"), Rq.parse("y^2 - 1/2")}


def test_normal_forms(Rq, R2):
    G = groebner([Rq.parse("x - 1")])
    assert G.normal_form(Rq.parse("x^2")) == Rq.one()
    assert G.normal_form(Rq.parse("x^3 - x")).is_zero()
    H = groebner([R2.parse("x*y + 1")])
    assert H.normal_form(R2.parse("x^2*y")) == R2.parse("x")


def test_unit_ideal(Rq):
    assert is_unit_ideal([Rq.parse("x"), Rq.parse("x + 1")])
    assert not is_unit_ideal([Rq.parse("x")])
    assert is_unit_ideal([Rq.parse("2*y^2 - 1"), Rq.parse("y")])


def test_jacobians(Rq, R2):
    assert jacobian([R2.parse("x*y - 1")], ["x", "y"]) == [[R2.parse("y"), R2.parse("x")]]
    assert R2.parse("x^2").derivative("x").is_zero()
    assert jacobian([Rq.parse("x^2 + y^2 - 1")], ["x", "y"]) == [[Rq.parse("2*x"), Rq.parse("2*y")]]


def test_minors_and_dimension(R2):
    M = [[R2.parse("y"), R2.parse("x")]]
    assert set(minors(M, 1, R2)) == {R2.parse("y"), R2.parse("x")}
    assert groebner([R2.parse("x*y + 1")]).krull_dimension() == 1
    R3 = PolyRing(GF(3), ["a", "b", "c"])
    assert GroebnerBasis([], R3).krull_dimension() == 3


def test_degree_cap_raises():
    R = PolyRing(QQ, ["x", "y", "z"])
    gens = [R.parse("x^3 - y*z^2"), R.parse("y^3 - x*z^2"), R.parse("z^3 - x*y^2")]
    with pytest.raises(DegreeBudgetExceeded):
        groebner(gens, degree_cap=3)


# -- properties

monomials = st.tuples(st.integers(0, 3), st.integers(0, 3))
coeffs = st.integers(-3, 3)
polys_q = st.dictionaries(monomials, coeffs, max_size=4)


def _poly(R, terms):
    return R.from_terms((e, R.domain.convert(c)) for e, c in terms.items())


@given(st.lists(polys_q, min_size=1, max_size=3), st.randoms())
def test_basis_unique_under_shuffling(gens, rnd):
    R = PolyRing(QQ, ["x", "y"])
    ps = [_poly(R, g) for g in gens]
    G1 = groebner(ps)
    shuffled = ps[:]
    rnd.shuffle(shuffled)
    shuffled = [p.scale(QQ.convert(2)) for p in shuffled]
    assert G1 == groebner(shuffled)
    for p in ps:
        assert G1.normal_form(p).is_zero()


@given(st.lists(polys_q, min_size=1, max_size=2), polys_q)
def test_normal_form_idempotent_and_membership(gens, extra):
    R = PolyRing(QQ, ["x", "y"])
    G = groebner([_poly(R, g) for g in gens])
    q = _poly(R, extra)
    nf = G.normal_form(q)
    assert G.normal_form(nf) == nf
    assert G.contains(q - nf)


@given(polys_q, polys_q, polys_q, polys_q)
def test_substitution_is_a_ring_map(a, b, u, v):
    R = PolyRing(QQ, ["x", "y"])
    a, b, u, v = (_poly(R, t) for t in (a, b, u, v))
    sub = lambda p: p.substitute([u, v])
    assert sub(a + b) == sub(a) + sub(b)
    assert sub(a * b) == sub(a) * sub(b)


@given(st.lists(st.dictionaries(monomials, st.integers(0, 4), max_size=3), min_size=1, max_size=2))
def test_rational_zero_rules_out_unit_ideal(gens):
    R = PolyRing(GF(5), ["x", "y"])
    ps = [_poly(R, g) for g in gens]
    has_zero = any(all(p.evaluate((x, y)) == 0 for p in ps) for x in range(5) for y in range(5))
    if has_zero:
        assert not is_unit_ideal(ps)
