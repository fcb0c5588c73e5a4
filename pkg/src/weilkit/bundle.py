"""Vector bundles on affine schemes as idempotent matrices, and normal bundles."""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotCompleteIntersection, NotIdempotent, RankMismatch
from .fields import EtaleAlgebra, PrimeField
from .groebner import GroebnerBasis
from .scheme import (Check, SchemeMorphism, closed_subscheme, disagreements, fresh_name, is_smooth,
                     relative_scheme)
from .weilres import _comparison, _mult_matrix_poly, restrict_morphism, restrict_scheme


@dataclass
class BundlePresentation:
    base: object  # AffineScheme
    matrix: list  # N x N polynomials on base
    rank: int

    @property
    def ambient_rank(self):
        return len(self.matrix)

    def __repr__(self):
        rows = ["[" + ", ".join(str(p) for p in row) + "]" for row in self.matrix]
        return f"BundlePresentation(rank {self.rank}, P = [{', '.join(rows)}])"


def _matmul(A, B, ring):
    n, m, k = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = ring.zero()
            for l in range(m):
                if A[i][l] and B[l][j]:
                    acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def _smallest_test_ring(X):
    from .points import etale_ring, finite_field
    B = X.base
    if isinstance(B, PrimeField):
        return finite_field(B.p)
    if isinstance(B, EtaleAlgebra) and isinstance(B.base, PrimeField):
        return etale_ring(B)
    return None


def fp_rank(ring, matrix):
    """Rank over ``F_p`` of a matrix of ring elements acting by multiplication."""
    from .points import _rref_mod_p
    M = np.asarray(matrix, dtype=np.int64)
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return 0
    big = ring.mult_matrices(M).transpose(0, 2, 1, 3).reshape(rows * ring.dim, cols * ring.dim)
    return len(_rref_mod_p(big, ring.p)[1])


def rank_at_points(E, ring=None, budget=None):
    """Check the evaluated idempotent has rank ``r`` at every point; ``(ok, count, bad point)``."""
    from .points import enumerate_points, evaluate_polys
    X = E.base
    ring = ring or _smallest_test_ring(X)
    if ring is None:
        return True, 0, None
    pts = enumerate_points(X, ring, budget)
    N = E.ambient_rank
    if N == 0:
        return E.rank == 0, len(pts), None
    flat = [p for row in E.matrix for p in row]
    vals = evaluate_polys(flat, pts.points, ring).reshape(len(pts), N, N)
    for pt, M in zip(pts.points, vals):
        if fp_rank(ring, M) != E.rank * ring.dim:
            return False, len(pts), [ring.format(x) for x in pt]
    return True, len(pts), None


def make_bundle(X, P, r, check_points=True, budget=None):
    """Validate an idempotent presentation of generic rank ``r``."""
    ring = X.ring
    P = [[ring.parse(e) if isinstance(e, str) else ring.coerce(e) for e in row] for row in P]
    N = len(P)
    if any(len(row) != N for row in P):
        raise ValueError("the presentation matrix must be square")
    sq = _matmul(P, P, ring)
    for i in range(N):
        for j in range(N):
            if not X.contains(sq[i][j] - P[i][j]):
                raise NotIdempotent(f"entry ({i}, {j}) of P^2 - P is nonzero on the base", (i, j))
    E = BundlePresentation(X, P, r)
    if X.base.characteristic == 0:
        trace = ring.zero()
        for i in range(N):
            trace = trace + P[i][i]
        if not X.contains(trace - r):
            raise RankMismatch(f"trace of P is {X.normal_form(trace)}, not {r}", None)
    elif check_points:
        ok, _, bad = rank_at_points(E, budget=budget)
        if not ok:
            raise RankMismatch(f"rank differs from {r} at {bad}", bad)
    return E


def free_bundle(X, r):
    ring = X.ring
    P = [[ring.one() if i == j else ring.zero() for j in range(r)] for i in range(r)]
    return BundlePresentation(X, P, r)


@dataclass
class TotalSpace:
    bundle: BundlePresentation
    scheme: object
    fiber_variables: tuple
    zero_section: SchemeMorphism
    projection: SchemeMorphism

    def zero_section_ideal(self):
        """The fiber coordinates, which cut out the zero section."""
        return [self.scheme.ring.var(v) for v in self.fiber_variables]


def total_space(E, fiber_prefix="v"):
    """``Spec Sym`` of the dual: fiber coordinates ``v`` with ``(I - P) v = 0``."""
    X = E.base
    N = E.ambient_rank
    names = []
    for a in range(N):
        names.append(fresh_name(list(X.variables) + names, f"{fiber_prefix}{a + 1}"))
    from .poly import PolyRing
    R = PolyRing(X.base, X.variables + tuple(names))
    lift = [R.var(x) for x in X.variables]
    v = [R.var(n) for n in names]
    rows = []
    for a in range(N):
        acc = v[a]
        for b in range(N):
            if E.matrix[a][b]:
                acc = acc - E.matrix[a][b].substitute(lift, R) * v[b]
        if acc:
            rows.append(acc)
    Tot, proj = relative_scheme(X, names, rows, kind="total")
    Tot.provenance.data["bundle"] = E
    zero = SchemeMorphism(X, Tot, X.ring.gens() + [X.ring.zero()] * N)
    return TotalSpace(E, Tot, tuple(names), zero, proj)


def restricted_matrix(E):
    """The ``Nd x Nd`` block idempotent: each entry replaced by its multiplication matrix."""
    X = E.base
    L = X.base
    R = restrict_scheme(X)
    ring = R.scheme.ring
    d = L.degree
    N = E.ambient_rank
    big = [[ring.zero() for _ in range(N * d)] for _ in range(N * d)]
    for a in range(N):
        for b in range(N):
            parts = [p.rename(ring) for p in R.expansion.split(E.matrix[a][b])]
            M = _mult_matrix_poly(parts, L, ring)
            for i in range(d):
                for j in range(d):
                    big[a * d + i][b * d + j] = M[i][j]
    return big


def restrict_bundle(E, check_points=True, budget=None):
    RX = restrict_scheme(E.base).scheme
    return make_bundle(RX, restricted_matrix(E), E.rank * E.base.base.degree, check_points, budget)


def total_space_compat(E, RE=None):
    """``Tot(R(E))`` against ``R(Tot(E))``, with positional coordinate maps both ways."""
    RE = RE or restrict_bundle(E, check_points=False)
    lhs = total_space(RE).scheme
    rhs = restrict_scheme(total_space(E).scheme).scheme
    return _comparison(lhs, rhs, lhs.ring.gens(), rhs.ring.gens())


def restrict_zero_section(E, RE=None):
    """``R(s_E)`` and ``s_{R(E)}`` agree coordinatewise on ``R(X)``."""
    RE = RE or restrict_bundle(E, check_points=False)
    Rs = restrict_morphism(total_space(E).zero_section)
    s = total_space(RE).zero_section
    bad = []
    for name, a, b in zip(s.target.variables, Rs.images, s.images):
        diff = s.source.normal_form(a - b)
        if diff:
            bad.append({"coordinate": name, "difference": str(diff)})
    return Check(not bad, {"coordinates": len(s.images), "failures": bad})


# -- normal bundles of complete intersections


@dataclass
class ConormalPresentation:
    ambient: object
    subscheme: object
    equations: tuple
    is_complete_intersection: bool
    rank: int
    normal_bundle: BundlePresentation = None
    smoothness: dict = field(default_factory=dict)


def independence_failures(X, hs):
    """Equations lying in the ideal of ``X`` plus the remaining ones."""
    bad = []
    for i, h in enumerate(hs):
        others = list(X.generators) + [g for j, g in enumerate(hs) if j != i]
        if GroebnerBasis(others, X.ring).contains(h):
            bad.append(str(h))
    return bad


def complete_intersection_defect(X, hs):
    """``None`` if ``V(hs)`` is a complete intersection of codimension ``len(hs)`` in ``X``."""
    bad = independence_failures(X, hs)
    if bad:
        return {"dependent": bad}
    Z, _ = closed_subscheme(X, hs)
    if Z.is_empty():
        return None
    codim = X.dimension() - Z.dimension()
    if codim != len(hs):
        return {"codimension": codim, "equations": len(hs)}
    return None


def normal_presentation(X, hs, require_smooth=True):
    """Free normal bundle of rank ``c`` on ``Z = V(hs)``, basis dual to the ``h``'s."""
    hs = [X.ring.parse(h) if isinstance(h, str) else X.ring.coerce(h) for h in hs]
    Z, _ = closed_subscheme(X, hs)
    smooth = {}
    if require_smooth:
        sx, sz = is_smooth(X), is_smooth(Z)
        smooth = {"ambient": sx.holds, "subscheme": sz.holds}
        if not (sx.holds and sz.holds):
            raise NotCompleteIntersection(f"smoothness not certified: {smooth}")
    defect = complete_intersection_defect(X, hs)
    if defect is not None:
        raise NotCompleteIntersection(f"not a complete intersection: {defect}")
    return ConormalPresentation(X, Z, tuple(hs), True, len(hs), free_bundle(Z, len(hs)), smooth)


def _kernel_fp(ring, matrix, ncols):
    from .points import solve_affine_mod_p
    M = np.asarray(matrix, dtype=np.int64).reshape(-1, ncols)
    D = ring.dim
    if M.shape[0] == 0:
        return np.eye(ncols * D, dtype=np.int64)
    big = ring.mult_matrices(M).transpose(0, 2, 1, 3).reshape(M.shape[0] * D, ncols * D)
    x0, basis = solve_affine_mod_p(big, np.zeros(big.shape[0], dtype=np.int64), ring.p)
    return basis


def _span_rank(vectors, p):
    from .points import _rref_mod_p
    if len(vectors) == 0:
        return 0
    return len(_rref_mod_p(np.asarray(vectors, dtype=np.int64), p)[1])


def fiberwise_normal_check(X, hs, A, budget=None):
    """At each ``A``-point of ``R(Z)``, the counit derivative identifies the normal spaces."""
    from .points import enumerate_points, jacobian_values, restriction_to_tensor, tensor_with
    L = X.base
    Z, _ = closed_subscheme(X, hs)
    RX = restrict_scheme(X).scheme
    RZ = restrict_scheme(Z).scheme
    AL = tensor_with(A, L)
    pts = enumerate_points(RZ, A, budget)
    n, d = X.nvars, L.degree
    p = A.p
    zpts = restriction_to_tensor(pts.points, A, AL, d, L.name)
    # counit derivative on F_p-coordinates: delta_{i,j} (in A) -> sum_j delta_{i,j} t^j (in A(x)L)
    emb = AL.factor_embedding(A)
    tj = [AL.mult_matrix(AL.monomial(**{L.name: j})) for j in range(d)]
    C = np.zeros((n * AL.dim, n * d * A.dim), dtype=np.int64)
    for i in range(n):
        for j in range(d):
            for a in range(A.dim):
                col = np.zeros(AL.dim, dtype=np.int64)
                col[emb[a]] = 1
                C[i * AL.dim:(i + 1) * AL.dim, (i * d + j) * A.dim + a] = tj[j] @ col % p
    JRX = jacobian_values(RX, pts.points, A)
    JRZ = jacobian_values(RZ, pts.points, A)
    JX = jacobian_values(X, zpts, AL)
    JZ = jacobian_values(Z, zpts, AL)
    normal_dims = set()
    for k in range(len(pts)):
        out = {}
        for label, Jr, Jl, ring_r, ring_l in (("ambient", JRX[k], JX[k], A, AL),
                                              ("subscheme", JRZ[k], JZ[k], A, AL)):
            Kr = _kernel_fp(ring_r, Jr, n * d)
            Kl = _kernel_fp(ring_l, Jl, n)
            image = (Kr @ C.T) % p if len(Kr) else Kr
            lands = not len(image) or not np.any(
                (ring_l.mult_matrices(np.asarray(Jl, dtype=np.int64).reshape(-1, n))
                 .transpose(0, 2, 1, 3).reshape(-1, n * ring_l.dim) @ image.T) % p)
            out[label] = (len(Kr), len(Kl), _span_rank(image, p), lands)
        ok = all(kr == kl == rk and lands for kr, kl, rk, lands in out.values())
        if not ok:
            return Check(False, {"algebra": A.label, "point": [A.format(x) for x in pts.points[k]],
                                 "dimensions": {k2: list(v[:3]) for k2, v in out.items()}})
        normal_dims.add((out["ambient"][0] - out["subscheme"][0]) // A.dim)
    return Check(True, {"algebra": A.label, "points": len(pts), "normal_ranks": sorted(normal_dims)})


def jacobian_identity_failures(X, hs):
    """``d(component_k h_a) / d x_{i,j}`` must equal component ``k`` of ``t^j dh_a/dx_i``."""
    R = restrict_scheme(X)
    ex = R.expansion
    L = X.base
    d = L.degree
    tpow = [L.power(L.gen, j) for j in range(d)]
    bad = []
    for h in hs:
        comps = ex.split(h)
        for i, x in enumerate(X.variables):
            dh = ex.expand(h.derivative(i))
            for j in range(d):
                target = [c for c in _split_scaled(dh, tpow[j], ex.ring_k)]
                for k in range(d):
                    if comps[k].derivative(f"{x}_{j}") != target[k]:
                        bad.append({"equation": str(h), "variable": f"{x}_{j}", "component": k})
    return bad


def _split_scaled(P, c, ring_k):
    from .weilres import components
    return components(P.scale(c), ring_k)


def normal_compat(X, hs, fields=(), budget=None):
    """Normal bundle of ``R(Z) -> R(X)`` against the restriction of ``N_{Z/X}``.

    Presentation level (complete intersections): the ``c*d`` components of
    the equations are again a complete intersection, both normal bundles are
    free of rank ``c*d``, and the canonical map is the identity on the dual
    bases, as certified by the Jacobian identity.  Fiberwise: the counit
    derivative identifies tangent and normal spaces at every point.
    """
    hs = [X.ring.parse(h) if isinstance(h, str) else X.ring.coerce(h) for h in hs]
    L = X.base
    d = L.degree
    witness = {"codimension": len(hs), "degree": d}
    holds = True
    try:
        N = normal_presentation(X, hs)
    except NotCompleteIntersection as exc:
        N = None
        witness["presentation"] = {"mode": "fiberwise only", "reason": str(exc)}
    if N is not None:
        RXr = restrict_scheme(X)
        RX = RXr.scheme
        comps = [c for h in hs for c in RXr.expansion.split(h)]
        comps = [c.rename(RX.ring) for c in comps]
        Z, _ = closed_subscheme(X, hs)
        RZ = restrict_scheme(Z).scheme
        cut, _ = closed_subscheme(RX, comps)
        same = (GroebnerBasis(cut.generators, RX.ring).basis
                == GroebnerBasis([g.rename(RX.ring) for g in RZ.generators], RX.ring).basis)
        defect = complete_intersection_defect(RX, [c for c in comps if c]) if len([c for c in comps if c]) == len(comps) \
            else {"zero_component": True}
        ident = jacobian_identity_failures(X, hs)
        RN = restrict_bundle(N.normal_bundle, check_points=False)
        free_rank = len(comps)
        identity_block = all(
            RZ.contains(RN.matrix[i][j] - (1 if i == j else 0))
            for i in range(free_rank) for j in range(free_rank)) and RN.rank == free_rank
        ok = same and defect is None and not ident and identity_block
        witness["presentation"] = {"mode": "complete intersection", "restricted_ideal_matches": same,
                                   "components_independent": defect is None,
                                   "normal_rank": free_rank, "jacobian_identity_failures": ident,
                                   "restricted_normal_is_free": identity_block}
        holds = holds and ok
    fiber = []
    for A in fields:
        c = fiberwise_normal_check(X, hs, A, budget)
        fiber.append(c.witness)
        holds = holds and c.holds
    witness["fiberwise"] = fiber
    return Check(holds, witness)
