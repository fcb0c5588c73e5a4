import itertools

import pytest
from hypothesis import given, settings, strategies as st

from weilkit import (GF, QQ, AffineScheme, EtaleAlgebra, adjunction_bijection, affine_shadow,
                     affine_space, base_change_compat, counit, distinguished_open,
                     fiber_product_compat, finite_field, galois_decomposition, norm_function,
                     restrict_morphism, restrict_open, restrict_scheme, triangle_identities,
                     twist, unit)
from weilkit.scheme import closed_subscheme, compose, disagreements, identity, make_morphism

import oracles

F8 = EtaleAlgebra(GF(2), [1, 1, 0, 1])


def test_affine_line_restricts_to_plane(F4):
    R = restrict_scheme(affine_space(F4, ["x"])).scheme
    assert R.variables == ("x_0", "x_1") and not R.generators


def test_point_restricts_to_point(F4):
    R = restrict_scheme(affine_space(F4, [])).scheme
    assert R.nvars == 0 and not R.generators


def test_gm_restriction(Gm):
    R = restrict_scheme(Gm).scheme
    assert [str(g) for g in R.generators] == ["x_0*y_0 + x_1*y_1 + 1",
                                             "x_1*y_0 + x_0*y_1 + x_1*y_1"]
    assert oracles.count(R.generators, 4, oracles.BruteRing(2)) == 3


def test_gaussian_cusp_restriction(Qi):
    cusp = AffineScheme(Qi, ["x", "y"], ["y^2 - x^3"])
    R = restrict_scheme(cusp).scheme
    assert [str(g) for g in R.generators] == ["-x_0^3 + 3*x_0*x_1^2 + y_0^2 - y_1^2",
                                             "-3*x_0^2*x_1 + x_1^3 + 2*y_0*y_1"]


def test_component_generators_recombine(Gm, F4):
    # substituting x = x_0 + t x_1 into the source generator gives sum_j G_j t^j
    R = restrict_scheme(Gm)
    back = counit(Gm)
    g = Gm.generators[0].substitute(list(back.images))
    ring = g.ring
    t = ring.const(F4.gen)
    G0, G1 = (G.map_coefficients(F4.embed, ring) for G in R.scheme.generators)
    recombined = G0 + t * G1
    assert g == recombined


def test_squaring_map(F4):
    A1 = affine_space(F4, ["x"])
    f = restrict_morphism(make_morphism(A1, A1, ["x^2"]))
    assert [str(p) for p in f.images] == ["x_0^2 + x_1^2", "x_1^2"]


def test_restricting_identity_is_identity(Gm):
    f = restrict_morphism(identity(Gm))
    assert disagreements(f, identity(f.source)) == []


def test_counit_and_unit(F4, F25):
    A1 = affine_space(F4, ["x"])
    assert [str(p) for p in counit(A1).images] == ["x_0 + t*x_1"]
    u = unit(affine_space(GF(2), ["x"]), F4)
    assert [str(p) for p in u.images] == ["x", "0"]
    cubic = AffineScheme(GF(5), ["x", "y"], ["y^2 - x^3 - x"])
    assert unit(cubic, F25).is_well_defined()


@pytest.mark.parametrize("make", [
    lambda F4, Qi: AffineScheme(F4, ["x", "y"], ["x*y - 1"]),
    lambda F4, Qi: affine_space(F4, []),
    lambda F4, Qi: affine_space(Qi, ["x", "y"]),
    lambda F4, Qi: AffineScheme(Qi, ["x", "y"], ["x^2 + y^2 - 1"]),
])
def test_triangle_identities(make, F4, Qi):
    assert triangle_identities(make(F4, Qi)).holds


def test_base_change(Gm, Qi):
    assert base_change_compat(Gm, affine_space(GF(2), ["u"])).holds
    assert base_change_compat(Gm, affine_space(GF(2), [])).holds
    U, _ = distinguished_open(affine_space(QQ, ["u"]), "u")
    assert base_change_compat(affine_space(Qi, ["x"]), U).holds


def test_fiber_products(Gm, F4):
    A1 = affine_space(F4, ["x"])
    inc = make_morphism(Gm, A1, ["x"])
    assert fiber_product_compat(inc, inc).holds
    pt = affine_space(F4, [])
    to_pt = make_morphism(A1, pt, [])
    c = fiber_product_compat(to_pt, to_pt)
    assert c.holds and c.witness["left_variables"] == 4
    U, j = distinguished_open(A1, "x")
    V, i = closed_subscheme(A1, ["x - 1"])
    assert fiber_product_compat(j, i).holds


def test_norms(F4, Qi):
    assert str(norm_function(affine_space(F4, ["x"]), "x")) == "x_0^2 + x_0*x_1 + x_1^2"
    assert str(norm_function(affine_space(Qi, ["x"]), "x")) == "x_0^2 + x_1^2"
    assert str(norm_function(affine_space(F4, ["x"]), "1")) == "1"


def test_norm_vanishes_exactly_at_zero(F4):
    N, c = restrict_open(affine_space(F4, ["x"]), "x")
    assert c.holds
    R = oracles.BruteRing(2)
    zeros = [pt for pt in itertools.product(R.elements(), repeat=2)
             if oracles.evaluate(N, pt, R) == R.zero]
    assert zeros == [((0,), (0,))]


def test_galois_split_counts(Gm, F4):
    c = galois_decomposition(Gm)
    assert c.holds and c.witness["points"] == {"restriction": 9, "twists": [3, 3]}
    X = AffineScheme(F4, ["x", "y"], ["y^2 - t*x"])
    assert str(twist(X, 1).generators[0]) == "y^2 + (1+t)*x"
    c = galois_decomposition(X)
    assert c.holds and c.witness["points"] == {"restriction": 16, "twists": [4, 4]}


def test_galois_invariant_equations_twist_to_themselves(Gm):
    assert list(twist(Gm, 1).generators) == list(Gm.generators)


def test_affine_shadow(Gm, Qi):
    for n in (1, 2):
        assert affine_shadow(Gm, n).holds
        assert affine_shadow(affine_space(Qi, ["x"]), n).holds


# -- adjunction against the brute oracle

def _adjunction_oracle(X, L, p, s):
    field = oracles.field_moduli(p, s)
    RX = restrict_scheme(X).scheme
    right = oracles.count(RX.generators, RX.nvars, oracles.BruteRing(p, field))
    left = oracles.count(X.generators, X.nvars,
                         oracles.BruteRing(p, field + (("t", L.modulus),)))
    return left, right


@pytest.mark.parametrize("s", [1, 2])
def test_gm_adjunction_matches_oracle(Gm, F4, s):
    c = adjunction_bijection(Gm, finite_field(2, s))
    assert c.holds
    assert (c.witness["left"], c.witness["right"]) == _adjunction_oracle(Gm, F4, 2, s)


def test_circle_adjunction_matches_oracle(circle, F25):
    c = adjunction_bijection(circle, finite_field(5))
    assert c.holds and (c.witness["left"], c.witness["right"]) == (24, 24)
    assert _adjunction_oracle(circle, F25, 5, 1) == (24, 24)


def test_adjunction_over_a_cubic_extension():
    X = AffineScheme(F8, ["x", "y"], ["x*y - t"])
    c = adjunction_bijection(X, finite_field(2))
    assert c.holds and c.witness["left"] == _adjunction_oracle(X, F8, 2, 1)[0]


coeffs4 = st.tuples(st.integers(0, 1), st.integers(0, 1))
# total degree <= 2 keeps the Groebner computations on the restricted side desk-sized
quadratic = st.sampled_from([(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)])
small_terms = st.dictionaries(quadratic, coeffs4, max_size=3)


def _scheme(L, terms_list):
    ring_vars = ["x", "y"]
    X = AffineScheme(L, ring_vars, [])
    polys = [X.ring.from_terms((e, L.element(c)) for e, c in t.items()) for t in terms_list]
    return AffineScheme(L, ring_vars, polys)


@given(st.lists(small_terms, min_size=1, max_size=2))
def test_random_adjunction_counts(terms_list):
    L = EtaleAlgebra(GF(2), [1, 1, 1])
    X = _scheme(L, terms_list)
    c = adjunction_bijection(X, finite_field(2))
    assert c.holds
    assert (c.witness["left"], c.witness["right"]) == _adjunction_oracle(X, L, 2, 1)


@given(st.lists(small_terms, min_size=2, max_size=2), st.lists(small_terms, min_size=2, max_size=2))
def test_restriction_is_functorial(first, second):
    L = EtaleAlgebra(GF(2), [1, 1, 1])
    A2 = affine_space(L, ["x", "y"])
    def morphism(terms):
        return make_morphism(A2, A2, [A2.ring.from_terms((e, L.element(c)) for e, c in t.items())
                                      for t in terms])
    phi, psi = morphism(first), morphism(second)
    lhs = restrict_morphism(compose(psi, phi))
    rhs = compose(restrict_morphism(psi), restrict_morphism(phi))
    assert disagreements(lhs, rhs) == []


@settings(max_examples=15)
@given(st.lists(small_terms, min_size=1, max_size=2))
def test_triangles_on_random_schemes(terms_list):
    L = EtaleAlgebra(GF(2), [1, 1, 1])
    assert triangle_identities(_scheme(L, terms_list)).holds
