import pytest

from weilkit import (GF, QQ, AffineScheme, EtaleAlgebra, affine_space, closed_subscheme,
                     count_points, distinguished_open, fiber_product, finite_field,
                     is_closed_embedding, is_etale_morphism, is_smooth, relative_scheme,
                     tensor_with)
from weilkit.errors import NotWellDefined
from weilkit.scheme import SchemeMorphism, disagreements, identity, make_morphism

import oracles


def test_construction(Gm, Qi):
    assert Gm.variables == ("x", "y") and Gm.dimension() == 1
    pt = AffineScheme(GF(2), [], [])
    assert pt.nvars == 0 and not pt.is_empty()
    assert affine_space(Qi, ["x"]).dimension() == 1


def test_identity_and_inclusion_are_well_defined(Gm, F4):
    assert identity(Gm).is_well_defined()
    A1 = affine_space(F4, ["x"])
    assert make_morphism(Gm, A1, ["x"]).is_well_defined()


def test_arity_mismatch_rejected(Gm, F4):
    with pytest.raises(NotWellDefined):
        make_morphism(affine_space(F4, ["x"]), Gm, ["x"])


def test_image_off_the_target_rejected(F4):
    A1 = affine_space(F4, ["x"])
    V = AffineScheme(F4, ["x"], ["x"])
    with pytest.raises(NotWellDefined):
        make_morphism(A1, V, ["x + 1"])


def test_distinguished_opens(F4):
    A1 = affine_space(F4, ["x"])
    U, _ = distinguished_open(A1, "x")
    assert U.nvars == 2
    assert count_points(U, tensor_with(finite_field(2), F4)) == 3
    V, _ = distinguished_open(A1, "1")
    assert count_points(V, tensor_with(finite_field(2), F4)) == 4
    W, _ = distinguished_open(A1, "0")
    assert W.is_empty()


def test_closed_subschemes(F4):
    A2 = affine_space(F4, ["x", "y"])
    Z, i = closed_subscheme(A2, ["y"])
    assert Z.dimension() == 1
    assert is_closed_embedding(i).holds
    E, _ = closed_subscheme(A2, ["1"])
    assert E.is_empty()


def test_gm_fiber_product_over_a1(Gm, F4):
    inc = make_morphism(Gm, affine_space(F4, ["x"]), ["x"])
    W, p1, p2 = fiber_product(inc, inc)
    assert W.dimension() == 1
    R = oracles.BruteRing(2, [("t", (1, 1, 1))])
    assert count_points(W, tensor_with(finite_field(2), F4)) == 3
    assert oracles.count(W.generators, W.nvars, R) == 3


def test_fiber_product_of_affine_lines_is_a_plane(F4):
    pt = affine_space(F4, [])
    A1 = affine_space(F4, ["x"])
    f = make_morphism(A1, pt, [])
    W, _, _ = fiber_product(f, f)
    assert W.nvars == 2 and W.dimension() == 2


def test_closed_embedding_certificates(Gm, F4):
    c = is_closed_embedding(make_morphism(Gm, affine_space(F4, ["x"]), ["x"]))
    assert not c.holds and c.witness["unreachable"] == "y"
    A2 = affine_space(QQ, ["x", "y"])
    _, i = closed_subscheme(A2, ["y"])
    assert is_closed_embedding(i).witness["expressions"] == {"x": "x", "y": "0"}
    A1 = affine_space(GF(2), ["x"])
    assert not is_closed_embedding(make_morphism(A1, A1, ["x^2"])).holds


def test_smoothness(Gm):
    assert is_smooth(Gm, 1).holds
    cusp = AffineScheme(QQ, ["x", "y"], ["y^2 - x^3"])
    c = is_smooth(cusp, 1)
    assert not c.holds and c.witness["singular_locus"] == ["x^2", "y"]
    assert is_smooth(affine_space(QQ, 3), 3).holds


def test_etale_morphisms(F4, F25):
    U, j = distinguished_open(affine_space(F4, ["x"]), "x")
    assert is_etale_morphism(j).holds
    G = AffineScheme(F25, ["x", "y"], ["x*y - 1"])
    W, cover = relative_scheme(G, ["z"], ["z^2 - x"])
    c = is_etale_morphism(cover)
    assert c.holds and c.witness["relative_jacobian_minors"] == ["2*z"]
    assert is_etale_morphism(identity(G)).holds
    A1 = affine_space(GF(2), ["x"])
    frob = is_etale_morphism(make_morphism(A1, A1, ["x^2"]))
    assert not frob.holds and frob.witness["reason"] == "ramified"
    assert is_etale_morphism(make_morphism(A1, A1, ["x + 1"])).holds


def test_disagreements_detects_a_different_map(F4):
    A1 = affine_space(F4, ["x"])
    assert disagreements(identity(A1), make_morphism(A1, A1, ["x"])) == []
    assert disagreements(identity(A1), make_morphism(A1, A1, ["x^2"]))


def test_point_counts_match_oracle(Gm, F4):
    R = oracles.BruteRing(2, [("t", (1, 1, 1))])
    assert count_points(Gm, tensor_with(finite_field(2), F4)) == oracles.count(Gm.generators, 2, R)
