"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary (see ``conftest.py``) and, with ``-s``, as the tests run.
"""

import json
import time
from pathlib import Path

import pytest

from weilkit import (AffineScheme, EtaleAlgebra, GF, QQ, adjunction_bijection, affine_shadow,
                     affine_space, finite_field, galois_decomposition, gysin_shadow, is_smooth,
                     normal_compat, parse_session, restrict_bundle, restrict_scheme,
                     restrict_zero_section, step2_check, thom_compare, total_space_compat,
                     triangle_identities)
from weilkit.bundle import _matmul, rank_at_points
from weilkit.errors import BudgetExceeded
from weilkit.fields import tensor_split_failures
from weilkit.groebner import GroebnerBasis
from weilkit.points import etale_ring, test_fields as fields_up_to
from weilkit.report import dumps
from weilkit.runner import run_session
from weilkit.thom import admissible_algebras

from conftest import CORPUS

RESULTS = {}


def record(number, title, ok, detail=""):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    RESULTS[number] = line
    print(line)
    assert ok, line


def _sessions():
    return {p.name: parse_session(p.read_text(encoding="utf-8")) for p in sorted(CORPUS.glob("*.wk"))}


@pytest.fixture(scope="module")
def sessions():
    return _sessions()


def _declared(sessions, kind):
    for fname, s in sessions.items():
        for name, d in s.declarations.items():
            if d.kind == kind:
                yield f"{fname}:{name}", d.value


def _over_algebra(X):
    return isinstance(X.base, EtaleAlgebra)


def _finite(X):
    return _over_algebra(X) and X.base.is_finite


@pytest.fixture(scope="module")
def corpus_runs(sessions):
    first = [dumps(run_session(s), timing=False) for s in sessions.values()]
    second = [dumps(run_session(s), timing=False) for s in _sessions().values()]
    reports = [json.loads(text) for text in first]
    return first, second, [r for rs in reports for r in rs]


def _verified(reports, prefix):
    return [r for r in reports if r["command"].startswith(prefix) and r["status"] == "verified"]


def test_01_affine_space_law():
    algebras = {2: [EtaleAlgebra(GF(2), [1, 1, 1]), EtaleAlgebra(QQ, [1, 0, 1])],
                3: [EtaleAlgebra(GF(2), [1, 1, 0, 1]), EtaleAlgebra(QQ, [1, -3, 0, 1])]}
    bad, slowest = [], 0.0
    for d, Ls in algebras.items():
        for L in Ls:
            for n in (1, 2, 3):
                start = time.perf_counter()
                R = restrict_scheme(affine_space(L, n)).scheme
                ok = (R.nvars == n * d and not R.generators
                      and len(GroebnerBasis(R.generators, R.ring)) == 0)
                elapsed = time.perf_counter() - start
                slowest = max(slowest, elapsed)
                if not ok or elapsed >= 1.0:
                    bad.append((repr(L), n))
    record(1, "affine spaces restrict to affine spaces", not bad,
           f"12 cases, slowest {slowest * 1000:.0f} ms" + (f", failing {bad}" if bad else ""))


def test_02_universal_property(sessions):
    bad, rows, skipped, slowest = [], 0, 0, 0.0
    for label, X in _declared(sessions, "scheme"):
        if not _over_algebra(X):
            continue
        start = time.perf_counter()
        if not triangle_identities(X).holds:
            bad.append(f"{label} triangles")
        if _finite(X):
            R = restrict_scheme(X)
            fields = fields_up_to(X.base, 625)
            for k, A in enumerate(fields):
                try:
                    c = adjunction_bijection(X, A, R)
                except BudgetExceeded:
                    skipped += len(fields) - k  # larger fields exceed the budgets too
                    break
                rows += 1
                if not c.holds or c.witness["left"] != c.witness["right"]:
                    bad.append(f"{label} over {A.label}")
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        if elapsed >= 10:
            bad.append(f"{label} took {elapsed:.1f} s")
    record(2, "triangle identities and adjunction counts", not bad,
           f"{rows} field comparisons, {skipped} over the point or work budget, slowest scheme {slowest:.1f} s" + (f", failing {bad}" if bad else ""))


def test_03_base_change_and_fiber_products(corpus_runs):
    reports = corpus_runs[2]
    bc = _verified(reports, "verify base-change")
    fp = _verified(reports, "verify fiber-product")
    failed = [r["command"] for r in reports
              if r["command"].startswith(("verify base-change", "verify fiber-product"))
              and r["status"] != "verified"]
    record(3, "base change and fiber product comparisons", len(bc) >= 3 and len(fp) >= 3 and not failed,
           f"{len(bc)} base changes, {len(fp)} fiber products verified")


def test_04_preservation(sessions, corpus_runs):
    reports = corpus_runs[2]
    notes = []
    ok = True
    for name in ("gm_f4.wk", "circle_f25.wk"):
        s = sessions[name]
        X = s.get("G" if name == "gm_f4.wk" else "C")
        good = is_smooth(X).holds and is_smooth(restrict_scheme(X).scheme, X.dimension() * X.base.degree).holds
        ok &= good
        notes.append(f"{name[:-3]} smooth {good}")
    cubic = sessions["cubic_f25.wk"].get("E")
    good = is_smooth(cubic).holds and is_smooth(restrict_scheme(cubic).scheme, 2).holds
    ok &= good
    notes.append(f"cubic smooth {good}")
    for X in (sessions["cusp.wk"].get("C"), sessions["cusp.wk"].get("Cq")):
        a, b = is_smooth(X, 1), is_smooth(restrict_scheme(X).scheme, 2)
        refuted = not a.holds and not b.holds and a.witness.get("singular_locus") and b.witness.get("singular_locus")
        ok &= bool(refuted)
    notes.append("cusp refuted with singular locus")
    for prefix in ("verify preserves-closed", "verify preserves-etale", "verify norm-open",
                   "verify preserves-smooth"):
        rs = [r for r in reports if r["command"].startswith(prefix)]
        ok &= bool(rs) and all(r["status"] == "verified" for r in rs)
        notes.append(f"{prefix.split()[1]} x{len(rs)}")
    etale = [r for r in reports if r["command"] == "verify preserves-etale cover"]
    ok &= bool(etale) and etale[0]["witnesses"]["source_holds"] and etale[0]["witnesses"]["restricted_holds"]
    record(4, "closed, smooth, etale and open preservation", ok, ", ".join(notes))


def test_05_bundles(sessions):
    notes, ok = [], True
    for label, E in _declared(sessions, "bundle"):
        RE = restrict_bundle(E, check_points=False)
        ring = RE.base.ring
        sq = _matmul(RE.matrix, RE.matrix, ring)
        idem = all(RE.base.contains(sq[i][j] - RE.matrix[i][j])
                   for i in range(RE.ambient_rank) for j in range(RE.ambient_rank))
        L = E.base.base
        ranks = RE.rank == E.rank * L.degree
        if L.is_finite:
            fine, count, _ = rank_at_points(RE, finite_field(L.base.p))
            ranks = ranks and fine and count > 0
        compat = total_space_compat(E, RE).holds
        ok &= idem and ranks and compat
        notes.append(f"{label} idempotent={idem} rank={ranks} total={compat}")
    record(5, "restricted bundles", ok, "; ".join(notes))


def test_06_normal_bundles():
    F4 = EtaleAlgebra(GF(2), [1, 1, 1])
    F25 = EtaleAlgebra(GF(5), [3, 0, 1])
    cases = [
        (affine_space(F4, ["x", "y"]), ["y"], [finite_field(2), finite_field(2, 2)]),
        (affine_space(F4, ["x", "y", "z"]), ["y - x^2", "z - x^3"], [finite_field(2), finite_field(2, 2)]),
        (affine_space(F25, ["x", "y"]), ["y^2 - x^3 - x"], [finite_field(5)]),
        (affine_space(F25, ["x", "y"]), ["x^2 + y^2 - 1"], [finite_field(5)]),
    ]
    ok, points = True, 0
    for X, hs, fields in cases:
        c = normal_compat(X, hs, fields)
        ci = c.witness["presentation"]["mode"] == "complete intersection"
        ok &= c.holds and ci and len(c.witness["fiberwise"]) == len(fields)
        points += sum(f["points"] for f in c.witness["fiberwise"])
    record(6, "normal bundles of complete intersections", ok,
           f"{len(cases)} examples, {points} rational points checked")


def test_07_zero_sections(sessions):
    bundles = list(_declared(sessions, "bundle"))
    bad = [label for label, E in bundles if not restrict_zero_section(E).holds]
    record(7, "zero sections", not bad and bool(bundles), f"{len(bundles)} bundles")


def test_08_thom(sessions):
    start = time.perf_counter()
    notes, ok = [], True
    for label, E in _declared(sessions, "bundle"):
        L = E.base.base
        if not L.is_finite:
            continue
        RE = restrict_bundle(E, check_points=False)
        c = thom_compare(E)
        ok &= c.holds and bool(c.witness["algebras"])
        for A in admissible_algebras(L):
            try:
                ok &= step2_check(E, A, RE=RE).holds
            except BudgetExceeded:
                continue
        notes.append(f"{label} on {len(c.witness['algebras'])} algebras")
    for label, Z in _declared(sessions, "scheme"):
        if Z.provenance.kind == "closed" and _finite(Z):
            X, hs = Z.provenance.data["parent"], list(Z.provenance.data["extra"])
            c = gysin_shadow(X, hs, etale_ring(X.base))
            ok &= c.holds and c.witness["normal_classes"] == c.witness["classes"]
            notes.append(f"gysin {label} {c.witness['classes']}")
    elapsed = time.perf_counter() - start
    record(8, "Thom classes, step 2 and Gysin shadow", ok and elapsed < 30,
           f"{'; '.join(notes)}; {elapsed:.1f} s")


def test_09_galois_decomposition(sessions):
    notes, ok = [], True
    algebras = {repr(d.value): d.value for s in sessions.values()
                for d in s.declarations.values() if d.kind == "algebra"}
    for L in algebras.values():
        ok &= tensor_split_failures(L) == []
    for label, X in _declared(sessions, "scheme"):
        if _finite(X) and X.base.base.p == 2 and X.base.degree == 2 and X.relative is None:
            try:
                c = galois_decomposition(X)
            except BudgetExceeded:
                continue
            pts = c.witness["points"]
            product = 1
            for n in pts["twists"]:
                product *= n
            ok &= c.holds and pts["restriction"] == product
            notes.append(f"{label} {pts['restriction']}={'*'.join(map(str, pts['twists']))}")
    record(9, "Galois splitting", ok, f"{len(algebras)} algebras; " + ", ".join(notes))


def test_10_affine_shadow(sessions):
    bad, count = [], 0
    for label, X in _declared(sessions, "scheme"):
        if not _over_algebra(X):
            continue
        for n in (1, 2):
            count += 1
            if not affine_shadow(X, n).holds:
                bad.append(f"{label} n={n}")
    record(10, "restriction of X x A^n", not bad, f"{count} cases" + (f", failing {bad}" if bad else ""))


def test_11_determinism(corpus_runs):
    first, second, _ = corpus_runs
    goldens = [(CORPUS / name).with_suffix(".json").read_text(encoding="utf-8")
               for name in sorted(p.name for p in CORPUS.glob("*.wk"))]
    same = first == second
    record(11, "byte-identical corpus runs", same and first == goldens,
           f"{len(first)} files, golden files {'match' if first == goldens else 'differ'}")
