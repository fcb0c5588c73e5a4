"""Execute parsed session commands and produce reports."""

import time

from .config import overrides
from .errors import (BudgetExceeded, DegreeBudgetExceeded, NonLocalTensor, UnsupportedBaseChange,
                     WeilkitError)
from .fields import EtaleAlgebra, tensor_split_failures
from .points import (dual_numbers, enumerate_points, etale_ring, finite_field, tensor_is_local,
                     tensor_with, test_fields)
from .report import Report
from .scheme import is_closed_embedding, is_etale_morphism, is_smooth

_BUDGET = (BudgetExceeded, DegreeBudgetExceeded)
_SKIP = (NonLocalTensor, UnsupportedBaseChange)
MAX_TEST_FIELD = 625
SHOWN_POINTS = 20


class CommandError(WeilkitError):
    """A command that cannot apply to its arguments (wrong base, not a subscheme, ...)."""


def _algebra(X):
    if not isinstance(X.base, EtaleAlgebra):
        raise CommandError(f"{X.name or 'the scheme'} is not defined over an algebra k[t]/(f)")
    return X.base


def _finite_algebra(X):
    L = _algebra(X)
    if not L.is_finite:
        raise CommandError(f"{L!r} is not finite, so it has no point counts")
    return L


def _ring(session, spec):
    if spec.kind == "algebra":
        return etale_ring(session.get(spec.algebra))
    if spec.kind == "dual":
        return dual_numbers(spec.p, spec.s)
    return finite_field(spec.p, spec.s)


def _check_prime(A, L):
    if A.p != L.base.p:
        raise CommandError(f"{A.label} is not an algebra over {L.base!r}")


def _closed_parts(Z):
    if Z.provenance.kind != "closed":
        raise CommandError(f"{Z.name} is not declared as a closed subscheme X/(h, ...)")
    return Z.provenance.data["parent"], list(Z.provenance.data["extra"])


def _with_check(c, **extra):
    w = dict(c.witness)
    w.update(extra)
    if c.empty:
        w["empty"] = True
    return c.holds, w


def _per_field(run, rings, explicit, increasing=False):
    """Run ``run(A)`` per test ring.

    Over-budget rings are skipped with a notice; on a default list of
    increasing size the remaining (larger) rings are not attempted.
    """
    results, skipped, holds = [], [], True
    for A in rings:
        try:
            c = run(A)
        except _BUDGET + _SKIP as exc:
            skipped.append({"algebra": A.label, "reason": str(exc)})
            if increasing and not explicit and isinstance(exc, _BUDGET):
                break
            continue
        results.append(c.witness)
        holds = holds and c.holds
    if not results and skipped:
        status = "budget-exceeded" if explicit else "skipped"
        return status, {"results": results, "skipped": skipped}
    return holds, {"results": results, "skipped": skipped}


# -- verbs


def do_restrict(session, cmd):
    from .weilres import restrict_scheme
    X = session.get(cmd.args[0])
    L = _algebra(X)
    R = restrict_scheme(X)
    return True, {"source": cmd.args[0], "degree": L.degree, "base": repr(L.base),
                  "variables": list(R.scheme.variables),
                  "generators": [str(g) for g in R.scheme.generators]}


def do_points(session, cmd):
    X = session.get(cmd.args[0])
    A = _ring(session, cmd.fields[0])
    if isinstance(X.base, EtaleAlgebra) and cmd.fields[0].kind != "algebra":
        _check_prime(A, X.base)
        A = tensor_with(A, X.base)
    pts = enumerate_points(X, A)
    shown = [[A.format(x) for x in row] for row in pts.points[:SHOWN_POINTS]]
    return True, {"scheme": cmd.args[0], "algebra": A.label, "count": len(pts), "points": shown}


def _default_fields(L):
    return test_fields(L, MAX_TEST_FIELD)


def verify_adjunction(session, cmd):
    from .points import adjunction_bijection
    from .weilres import restrict_scheme
    X = session.get(cmd.args[0])
    L = _finite_algebra(X)
    R = restrict_scheme(X)
    rings = [_ring(session, f) for f in cmd.fields] if cmd.fields else _default_fields(L)
    for A in rings:
        _check_prime(A, L)
    return _per_field(lambda A: adjunction_bijection(X, A, R), rings, bool(cmd.fields),
                      increasing=True)


def verify_triangles(session, cmd):
    from .weilres import triangle_identities
    return _with_check(triangle_identities(session.get(cmd.args[0])))


def verify_base_change(session, cmd):
    from .weilres import base_change_compat
    return _with_check(base_change_compat(session.get(cmd.args[0]), session.get(cmd.args[1])))


def verify_fiber_product(session, cmd):
    from .weilres import fiber_product_compat
    return _with_check(fiber_product_compat(session.get(cmd.args[0]), session.get(cmd.args[1])))


def _preserves(test, source, restricted):
    """``test`` holds before restriction exactly when it holds after."""
    a, b = test(source), test(restricted)
    w = {"source": a.witness, "restricted": b.witness, "source_holds": a.holds,
         "restricted_holds": b.holds}
    return a.holds == b.holds, w


def verify_preserves_closed(session, cmd):
    from .weilres import restrict_morphism
    f = session.get(cmd.args[0])
    return _preserves(is_closed_embedding, f, restrict_morphism(f))


def verify_preserves_etale(session, cmd):
    from .weilres import restrict_morphism
    f = session.get(cmd.args[0])
    return _preserves(is_etale_morphism, f, restrict_morphism(f))


def verify_preserves_smooth(session, cmd):
    from .weilres import restrict_scheme
    X = session.get(cmd.args[0])
    L = _algebra(X)
    r = cmd.args[1] if len(cmd.args) > 1 else X.dimension()
    RX = restrict_scheme(X).scheme
    holds, w = _preserves(lambda Y: is_smooth(Y, r if Y is X else r * L.degree), X, RX)
    w["relative_dimension"] = r
    return holds, w


def verify_norm_open(session, cmd):
    from .weilres import restrict_open
    X = session.get(cmd.args[0])
    _algebra(X)
    _, c = restrict_open(X, cmd.args[1])
    return _with_check(c)


def _bundle_rings(session, cmd, E):
    if cmd.fields:
        return [_ring(session, f) for f in cmd.fields]
    L = E.base.base
    return [finite_field(L.base.p)] if L.is_finite else []


def verify_bundle(session, cmd):
    from .bundle import rank_at_points, restrict_bundle, total_space_compat
    E = session.get(cmd.args[0])
    L = _algebra(E.base)
    RE = restrict_bundle(E, check_points=False)
    w = {"rank": E.rank, "restricted_rank": RE.rank, "ambient_rank": RE.ambient_rank,
         "idempotent": True}
    holds = True
    ranks = []
    for A in _bundle_rings(session, cmd, E):
        _check_prime(A, L)
        ok, count, bad = rank_at_points(RE, A)
        entry = {"algebra": A.label, "points": count, "rank_ok": ok}
        if bad is not None:
            entry["point"] = bad
        ranks.append(entry)
        holds = holds and ok
    w["rank_at_points"] = ranks
    c = total_space_compat(E, RE)
    w["total_space"] = c.witness
    return holds and c.holds, w


def verify_zero_section(session, cmd):
    from .bundle import restrict_zero_section
    return _with_check(restrict_zero_section(session.get(cmd.args[0])))


def verify_normal(session, cmd):
    from .bundle import normal_compat
    X, hs = _closed_parts(session.get(cmd.args[0]))
    L = _algebra(X)
    if cmd.fields:
        rings = [_ring(session, f) for f in cmd.fields]
    elif L.is_finite:
        rings = [finite_field(L.base.p, s) for s in (1, 2)]
    else:
        rings = []
    return _with_check(normal_compat(X, hs, rings))


def _thom_rings(session, cmd, L):
    from .thom import admissible_algebras
    if cmd.fields:
        return [_ring(session, f) for f in cmd.fields]
    return admissible_algebras(L)


def verify_thom(session, cmd):
    from .thom import thom_compare
    E = session.get(cmd.args[0])
    L = _finite_algebra(E.base)
    c = thom_compare(E, _thom_rings(session, cmd, L))
    if not c.witness["algebras"] and c.witness["skipped"]:
        return "skipped", c.witness
    return _with_check(c)


def verify_step2(session, cmd):
    from .bundle import restrict_bundle
    from .thom import step2_check
    E = session.get(cmd.args[0])
    L = _finite_algebra(E.base)
    RE = restrict_bundle(E, check_points=False)
    rings = _thom_rings(session, cmd, L)
    return _per_field(lambda A: step2_check(E, A, RE=RE), rings, bool(cmd.fields))


def verify_gysin_shadow(session, cmd):
    from .thom import gysin_shadow
    X, hs = _closed_parts(session.get(cmd.args[0]))
    L = _finite_algebra(X)
    rings = []
    for spec in cmd.fields or ():
        A = _ring(session, spec)
        if spec.kind != "algebra":
            _check_prime(A, L)
            if not tensor_is_local(A, L):
                raise NonLocalTensor(f"{A.label} (x) L is not a field")
            A = tensor_with(A, L)
        rings.append(A)
    rings = rings or [etale_ring(L)]
    return _per_field(lambda F: gysin_shadow(X, hs, F), rings, bool(cmd.fields))


def verify_galois_split(session, cmd):
    from .weilres import galois_decomposition
    X = session.get(cmd.args[0])
    L = _algebra(X)
    holds, w = _with_check(galois_decomposition(X))
    bad = tensor_split_failures(L)
    w["idempotent_failures"] = bad
    return holds and not bad, w


def verify_affine_shadow(session, cmd):
    from .weilres import affine_shadow
    X = session.get(cmd.args[0])
    _algebra(X)
    ns = cmd.args[1:] or [1, 2]
    cases, holds = [], True
    for n in ns:
        c = affine_shadow(X, n)
        entry = {"n": n, "holds": c.holds, "variables": len(c.witness["variables"]),
                 "generators": len(c.witness["generators"])}
        for key in ("right_variables", "right_generators"):
            if key in c.witness:
                entry[key] = c.witness[key]
        cases.append(entry)
        holds = holds and c.holds
    return holds, {"cases": cases}


VERIFIERS = {
    "adjunction": verify_adjunction,
    "triangles": verify_triangles,
    "base-change": verify_base_change,
    "fiber-product": verify_fiber_product,
    "preserves-closed": verify_preserves_closed,
    "preserves-smooth": verify_preserves_smooth,
    "preserves-etale": verify_preserves_etale,
    "norm-open": verify_norm_open,
    "bundle": verify_bundle,
    "zero-section": verify_zero_section,
    "normal": verify_normal,
    "thom": verify_thom,
    "step2": verify_step2,
    "gysin-shadow": verify_gysin_shadow,
    "galois-split": verify_galois_split,
    "affine-shadow": verify_affine_shadow,
}


def _dispatch(session, cmd):
    if cmd.verb == "restrict":
        return do_restrict(session, cmd)
    if cmd.verb == "points":
        return do_points(session, cmd)
    return VERIFIERS[cmd.target](session, cmd)


def _error(exc):
    return {"error": type(exc).__name__, "message": str(exc)}


def run_command(session, cmd):
    """Run one command; library errors become statuses rather than exceptions."""
    start = time.perf_counter()
    opts = session.options
    with overrides(point_budget=opts.get("point_budget"), gb_degree_cap=opts.get("gb_degree_cap"),
                   height_bound=opts.get("height_bound")):
        try:
            holds, witnesses = _dispatch(session, cmd)
            if isinstance(holds, str):
                status = holds
            else:
                status = "verified" if holds else "refuted"
        except _BUDGET as exc:
            status, witnesses = "budget-exceeded", _error(exc)
        except _SKIP as exc:
            status, witnesses = "skipped", _error(exc)
        except WeilkitError as exc:
            status, witnesses = "refuted", _error(exc)
    elapsed = (time.perf_counter() - start) * 1000
    return Report(cmd.text, status, witnesses, elapsed)


def run_session(session):
    """Reports for every command, in file order."""
    return [run_command(session, cmd) for cmd in session.commands]

