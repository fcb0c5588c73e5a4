import pytest

from weilkit import (GF, AffineScheme, affine_space, dual_numbers, etale_ring, finite_field,
                     free_bundle, gysin_shadow, step2_check, thom_compare, total_space)
from weilkit.errors import NotLocalAlgebra
from weilkit.thom import (BASEPOINT, ThomPresentation, admissible_algebras, naturality,
                          thom_points, thom_presentation)

import oracles


def _oracle_classes(P, A):
    """Points where no equation is a unit, plus the basepoint."""
    R, _ = oracles.like(A)
    X = P.scheme
    pts = oracles.points(X.generators, X.nvars, R)
    keep = [pt for pt in pts if not any(R.is_unit(oracles.evaluate(h, pt, R)) for h in P.equations)]
    return len(keep) + 1


def test_affine_line_collapses_to_origin_and_basepoint(F4):
    P = ThomPresentation(affine_space(F4, ["x"]), ["x"])
    S = thom_points(P, etale_ring(F4))
    assert len(S) == 2 and S.collapsed == 3
    assert S.labels()[-1] == BASEPOINT
    assert _oracle_classes(P, etale_ring(F4)) == 2


def test_degenerate_subschemes(F4):
    pt = affine_space(F4, [])
    assert len(thom_points(ThomPresentation(pt, []), etale_ring(F4))) == 2
    A1 = affine_space(F4, ["x"])
    assert len(thom_points(ThomPresentation(A1, ["1"]), etale_ring(F4))) == 1


def test_non_local_algebra_rejected(F4):
    P = ThomPresentation(affine_space(F4, ["x"]), ["x"])
    from weilkit import tensor_with
    with pytest.raises(NotLocalAlgebra):
        thom_points(P, tensor_with(finite_field(2, 2), F4))


def test_admissible_algebras(F4, F25):
    assert [A.label for A in admissible_algebras(F4)] == ["GF(2)", "GF(2^3)", "GF(2)[eps]"]
    assert [A.label for A in admissible_algebras(F25)] == ["GF(5)", "GF(5^3)", "GF(5)[eps]"]


def _counts(c):
    return [(a["algebra"], a["restricted_classes"], a["classes"]) for a in c.witness["algebras"]]


def test_free_line_over_a_point(F4):
    c = thom_compare(free_bundle(affine_space(F4, []), 1))
    assert c.holds
    assert _counts(c) == [("GF(2)", 2, 2), ("GF(2^3)", 2, 2), ("GF(2)[eps]", 5, 5)]


def test_free_line_over_gm(Gm):
    E = free_bundle(Gm, 1)
    c = thom_compare(E)
    assert c.holds
    assert _counts(c) == [("GF(2)", 4, 4), ("GF(2^3)", 64, 64), ("GF(2)[eps]", 49, 49)]
    from weilkit import restrict_bundle
    RP = thom_presentation(total_space(restrict_bundle(E)))
    assert _oracle_classes(RP, finite_field(2)) == 4
    assert _oracle_classes(RP, dual_numbers(2)) == 49


def test_step2_on_gm(Gm):
    E = free_bundle(Gm, 1)
    got = [(c.witness["points"], c.witness["in_complement"])
           for c in (step2_check(E, A) for A in admissible_algebras(Gm.base))]
    assert got == [(12, 9), (4032, 3969), (192, 144)]


def test_step2_counts_match_oracle(Gm, F4):
    # R(E)(F_2) = E(F_4): the trivial line over G_m(F_4), and v != 0 off the zero section
    T = total_space(free_bundle(Gm, 1)).scheme
    R = oracles.BruteRing(2, [("t", F4.modulus)])
    pts = oracles.points(T.generators, 3, R)
    assert (len(pts), sum(1 for p in pts if p[2] != R.zero)) == (12, 9)


def test_circle_bundle(circle_bundle):
    c = thom_compare(circle_bundle)
    assert c.holds
    assert _counts(c) == [("GF(5)", 25, 25), ("GF(5)[eps]", 15001, 15001)]
    assert [s["algebra"] for s in c.witness["skipped"]] == ["GF(5^3)"]
    c = step2_check(circle_bundle, dual_numbers(5))
    assert c.holds and (c.witness["points"], c.witness["in_complement"]) == (375000, 360000)


def test_naturality(Gm):
    c = naturality(free_bundle(Gm, 1), finite_field(2), finite_field(2, 3))
    assert c.holds and c.witness["classes"] == 4


@pytest.mark.parametrize("hs, expect", [(["y"], 5), ([], 17), (["1"], 1)])
def test_gysin_shadow(F4, hs, expect):
    A2 = affine_space(F4, ["x", "y"])
    c = gysin_shadow(A2, hs, etale_ring(F4))
    assert c.holds
    assert c.witness["normal_classes"] == c.witness["classes"] == expect


def test_gysin_shadow_on_the_cubic(F25):
    c = gysin_shadow(affine_space(F25, ["x", "y"]), ["y^2 - x^3 - x"], etale_ring(F25))
    assert c.holds and c.witness["classes"] == 32
