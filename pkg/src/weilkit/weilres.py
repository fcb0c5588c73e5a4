"""Restriction of scalars along ``L = k[t]/(f)`` by coefficient expansion.

Each coordinate ``x`` of a scheme over ``L`` is replaced by ``d`` coordinates
``x_0, ..., x_{d-1}`` over ``k`` via ``x = sum_j x_j t^j``.  Substituting into
an equation and reading off the power-basis coordinates of every coefficient
gives ``d`` equations over ``k``.
"""

from dataclasses import dataclass

from .errors import RingMismatch, UnsupportedBaseChange
from .fields import EtaleAlgebra, galois_group, tensor_split
from .poly import PolyRing, Poly, adjugate, poly_det
from .scheme import (AffineScheme, Check, Provenance, SchemeMorphism, affine_space, base_change,
                     base_change_morphism, compose, disagreements, fiber_product, identity, product,
                     relative_scheme)


def expanded_names(variables, d):
    return [f"{x}_{j}" for x in variables for j in range(d)]


def _algebra_of(X):
    L = X.base
    if not isinstance(L, EtaleAlgebra):
        raise RingMismatch(f"{X!r} is not a scheme over an etale algebra")
    return L


def components(P, ring_k):
    """Split a polynomial with ``L``-coefficients into its ``d`` power-basis parts."""
    d = P.ring.domain.degree
    parts = [{} for _ in range(d)]
    for e, c in P.terms.items():
        for j, cj in enumerate(c):
            if not ring_k.domain.is_zero(cj):
                parts[j][e] = cj
    return [Poly(ring_k, t) for t in parts]


def combine(parts, ring_L):
    """Inverse of :func:`components`: ``sum_j parts[j] t^j`` over ``L``."""
    L = ring_L.domain
    out = {}
    for j, p in enumerate(parts):
        for e, c in p.terms.items():
            v = out.get(e, [L.base.zero] * L.degree)
            v[j] = L.base.add(v[j], c)
            out[e] = v
    return ring_L.from_terms((e, tuple(v)) for e, v in out.items())


class Expansion:
    """The substitution ``x_i -> sum_j x_{i,j} t^j`` for a fixed variable list.

    Variables listed in ``inert`` are kept as they are; they stand for
    coordinates of a base over which the restriction is taken.
    """

    def __init__(self, ring, inert=()):
        self.source_ring = ring
        self.algebra = L = ring.domain
        d = L.degree
        names = []
        for x in ring.variables:
            names.extend([x] if x in inert else [f"{x}_{j}" for j in range(d)])
        self.ring_k = PolyRing(L.base, names)
        self.ring_L = PolyRing(L, names)
        tpow = [L.power(L.gen, j) for j in range(d)]
        self.images = []
        for x in ring.variables:
            if x in inert:
                self.images.append(self.ring_L.var(x))
            else:
                img = self.ring_L.zero()
                for j in range(d):
                    img = img + self.ring_L.var(f"{x}_{j}").scale(tpow[j])
                self.images.append(img)

    def expand(self, p):
        return p.substitute(self.images, self.ring_L)

    def split(self, p):
        return components(self.expand(p), self.ring_k)


@dataclass
class RestrictionResult:
    source: AffineScheme
    scheme: AffineScheme
    expansion: Expansion
    components: tuple  # per source generator, its d parts
    kept: tuple  # (generator index, component index) pairs actually used

    @property
    def variables(self):
        return self.scheme.variables


def _has_private_variable(p, others):
    """``p = c*v + (terms without v)`` for a constant ``c`` and a ``v`` unused by ``others``.

    Then ``p`` lies in the ideal of ``others`` only if that ideal is the unit
    ideal, so it is worth keeping without a Groebner basis test.
    """
    used = set()
    for q in others:
        used.update(q.support())
    for v in set(p.support()) - used:
        if p.degree_in([v]) == 1 and all(e[v] == 0 or sum(e) == 1 for e in p.terms):
            return True
    return False


def _prune(polys, ring):
    """Drop zero polynomials and those lying in the ideal of the others (greedy, in order)."""
    from .groebner import GroebnerBasis
    keep = [i for i, p in enumerate(polys) if not p.is_zero()]
    for i in list(keep):
        others = [polys[j] for j in keep if j != i]
        if not others or _has_private_variable(polys[i], others):
            continue
        if GroebnerBasis(others, ring).contains(polys[i]):
            keep.remove(i)
    return keep


def restrict_scheme(X, inert=(), prune=True):
    """Weil restriction ``R(X)`` of an affine scheme over an etale algebra."""
    key = (tuple(inert), prune)
    cache = X.__dict__.setdefault("_restrictions", {})
    if key in cache:
        return cache[key]
    _algebra_of(X)
    ex = Expansion(X.ring, inert)
    comps = tuple(tuple(ex.split(g)) for g in X.generators)
    if X.relative is not None and not inert:
        parent, new_vars, rels = X.relative
        Rp = restrict_scheme(parent, prune=prune).scheme
        nv = [v for v in ex.ring_k.variables if v not in Rp.variables]
        rel_parts = [c for p in rels for c in ex.split(p)]
        scheme, _ = relative_scheme(Rp, nv, rel_parts, kind=X.provenance.kind)
        m = len(parent.generators)
        kept = tuple((m + a, j) for a in range(len(rels)) for j in range(ex.algebra.degree))
    else:
        flat = [(a, j, c) for a, parts in enumerate(comps) for j, c in enumerate(parts)]
        polys = [c for _, _, c in flat]
        idx = _prune(polys, ex.ring_k) if prune else [i for i, p in enumerate(polys) if not p.is_zero()]
        kept = tuple((flat[i][0], flat[i][1]) for i in idx)
        scheme = AffineScheme(ex.ring_k.domain, ex.ring_k.variables, [polys[i] for i in idx])
    scheme.provenance = Provenance("restriction", {"source": X, "kept": kept})
    result = RestrictionResult(X, scheme, ex, comps, kept)
    cache[key] = result
    return result


def restrict_morphism(phi):
    """``R(phi): R(X) -> R(Y)``; each new coordinate is a component of a pulled-back one."""
    RX = restrict_scheme(phi.source)
    RY = restrict_scheme(phi.target)
    images = []
    for im in phi.images:
        images.extend(RX.expansion.split(im))
    return SchemeMorphism(RX.scheme, RY.scheme, images)


def counit(X):
    """``R(X)_L -> X``, ``x_i -> sum_j x_{i,j} t^j``."""
    R = restrict_scheme(X)
    source = base_change(R.scheme, X.base)
    images = [p.rename(source.ring) for p in R.expansion.images]
    return SchemeMorphism(source, X, images)


def unit(Y, L):
    """``Y -> R(Y_L)``, ``y_{u,0} -> y_u`` and ``y_{u,j} -> 0`` for ``j > 0``."""
    YL = base_change(Y, L)
    R = restrict_scheme(YL)
    images = []
    for v in Y.variables:
        images.append(Y.ring.var(v))
        images.extend([Y.ring.zero()] * (L.degree - 1))
    return SchemeMorphism(Y, R.scheme, images)


def triangle_identities(X, Y=None):
    """Both triangle identities of the adjunction, as normal-form identities.

    (a) ``R(counit_X) o unit_{R(X)} = id`` on ``R(X)``;
    (b) ``counit_{Y_L} o (unit_Y)_L = id`` on ``Y_L`` (with ``Y = R(X)`` if omitted).
    """
    L = _algebra_of(X)
    RX = restrict_scheme(X).scheme
    left = compose(restrict_morphism(counit(X)), unit(RX, L))
    bad_a = disagreements(left, identity(RX))
    Y = RX if Y is None else Y
    YL = base_change(Y, L)
    right = compose(counit(YL), base_change_morphism(unit(Y, L), L))
    bad_b = disagreements(right, identity(YL))
    witness = {
        "restriction_side": {"coordinates": len(RX.variables), "failures": bad_a},
        "base_change_side": {"coordinates": len(YL.variables), "failures": bad_b},
    }
    return Check(not bad_a and not bad_b, witness)


def _mutually_inverse(phi, psi):
    """Both composites of two opposite morphisms are identities modulo the ideals."""
    bad1 = disagreements(compose(psi, phi), identity(phi.source))
    bad2 = disagreements(compose(phi, psi), identity(psi.source))
    return bad1 + bad2


def _validated(source, target, images):
    m = SchemeMorphism(source, target, images, validate=False)
    bad = m.first_bad_generator()
    return m, (None if bad is None else str(bad))


def _comparison(lhs, rhs, forward, backward, extra=None):
    phi, bad_f = _validated(lhs, rhs, forward)
    psi, bad_b = _validated(rhs, lhs, backward)
    witness = {"left_variables": len(lhs.variables), "right_variables": len(rhs.variables)}
    if extra:
        witness.update(extra)
    if bad_f or bad_b:
        witness["ill_defined"] = bad_f or bad_b
        return Check(False, witness)
    fails = _mutually_inverse(phi, psi)
    if fails:
        witness["failures"] = fails
    return Check(not fails, witness)


def _base_shape(T):
    """``'affine'`` for affine space, ``'open'`` for ``D(h)`` in affine space, else ``None``."""
    kind = T.provenance.kind
    if kind == "affine" or (not T.generators and kind == "raw"):
        return "affine"
    if kind == "open" and T.relative is not None:
        parent = T.relative[0]
        if parent.provenance.kind == "affine" or not parent.generators:
            return "open"
    return None


def base_change_compat(X, T):
    """``R_{T_L/T}(X x_L T_L)`` against ``R(X) x_k T`` for ``T`` an affine space or ``D(h)``."""
    L = _algebra_of(X)
    if T.base != L.base:
        raise RingMismatch("the base-change scheme must live over k")
    shape = _base_shape(T)
    if shape is None:
        raise UnsupportedBaseChange("only affine spaces and distinguished opens of them are supported")
    XT, _, _ = product(X, base_change(T, L))
    inert = XT.variables[X.nvars:]
    lhs = restrict_scheme(XT, inert=inert).scheme
    rhs, _, _ = product(restrict_scheme(X).scheme, T)
    fwd = lhs.ring.gens()
    bwd = rhs.ring.gens()
    return _comparison(lhs, rhs, fwd, bwd, {"shape": shape, "base_variables": len(T.variables)})


def fiber_product_compat(f, g):
    """``R(X x_Z Y)`` against ``R(X) x_{R(Z)} R(Y)``."""
    W, p1, p2 = fiber_product(f, g)
    RW = restrict_scheme(W).scheme
    V, q1, q2 = fiber_product(restrict_morphism(f), restrict_morphism(g))
    rp1, rp2 = restrict_morphism(p1), restrict_morphism(p2)
    forward = list(rp1.images) + list(rp2.images)
    # the inverse: the point of W determined by the pair (q1, q2)
    backward = list(q1.images) + list(q2.images)
    return _comparison(RW, V, forward, backward)


def _mult_matrix_poly(parts, L, ring):
    """Matrix over ``ring`` of multiplication by ``sum_j parts[j] t^j`` on the power basis."""
    d = L.degree
    M = [[ring.zero() for _ in range(d)] for _ in range(d)]
    for j, pj in enumerate(parts):
        if pj.is_zero():
            continue
        T = L.mult_matrix(L.power(L.gen, j))
        for a in range(d):
            for b in range(d):
                if not L.base.is_zero(T[a][b]):
                    M[a][b] = M[a][b] + pj.scale(T[a][b])
    return M


def norm_function(X, g):
    """``N(g) = det`` of multiplication by the expanded ``g``, a function on ``R(X)``."""
    L = _algebra_of(X)
    if isinstance(g, str):
        g = X.ring.parse(g)
    R = restrict_scheme(X)
    M = _mult_matrix_poly(R.expansion.split(g), L, R.expansion.ring_k)
    return poly_det(M, R.expansion.ring_k)


def restrict_open(X, g, points=True, budget=None):
    """``R(D(g))`` against ``D(N(g))`` inside ``R(X)``; returns ``(N(g), Check)``."""
    from .scheme import distinguished_open
    L = _algebra_of(X)
    if isinstance(g, str):
        g = X.ring.parse(g)
    R = restrict_scheme(X)
    ring = R.expansion.ring_k
    N = norm_function(X, g)
    U, _ = distinguished_open(X, g)
    RU = restrict_scheme(U)
    yname = U.variables[-1]
    V, _ = _open_in(R.scheme, N)
    # R(U) -> D(N): w -> N(y), the norm of the inverse
    ring_U = RU.scheme.ring
    y_parts = [ring_U.var(f"{yname}_{j}") for j in range(L.degree)]
    N_y = poly_det(_mult_matrix_poly(y_parts, L, ring_U), ring_U)
    lift = [ring_U.var(v) for v in ring.variables]
    forward = lift + [N_y]
    # D(N) -> R(U): y_j -> w * adj(M)[j][0], the coordinates of g^{-1}
    ring_V = V.ring
    g_parts = [p.substitute([ring_V.var(v) for v in ring.variables], ring_V) for p in R.expansion.split(g)]
    adj = adjugate(_mult_matrix_poly(g_parts, L, ring_V), ring_V)
    w = ring_V.var(V.variables[-1])
    backward = [ring_V.var(v) for v in ring.variables] + [w * adj[j][0] for j in range(L.degree)]
    check = _comparison(RU.scheme, V, forward, backward, {"norm": str(N)})
    if points and check.holds and L.is_finite:
        pc = norm_points_check(X, g, N, budget)
        check.witness["points"] = pc.witness
        check.holds = pc.holds
    return N, check


def _open_in(Y, h):
    from .scheme import distinguished_open, fresh_name
    return distinguished_open(Y, h, var=fresh_name(Y.variables, "w"))


def norm_points_check(X, g, N, budget=None):
    """``N(g)`` vanishes at a k-point of ``R(X)`` iff the L-point of ``X`` lies in ``V(g)``."""
    import numpy as np
    from .points import enumerate_points, etale_ring, evaluate_polys, finite_field, tensor_with, \
        restriction_to_tensor
    L = X.base
    A = finite_field(L.base.p)
    AL = tensor_with(A, L)
    R = restrict_scheme(X).scheme
    pts = enumerate_points(R, A, budget)
    nvals = evaluate_polys([N], pts.points, A)[:, 0]
    lpts = restriction_to_tensor(pts.points, A, AL, L.degree, L.name)
    gvals = evaluate_polys([g], lpts, AL)[:, 0]
    agree = (nvals == 0) == (gvals == 0)
    witness = {"points": len(pts), "in_V(g)": int((gvals == 0).sum())}
    if not agree.all():
        bad = int(np.flatnonzero(~agree)[0])
        witness["mismatch"] = [A.format(x) for x in pts.points[bad]]
        return Check(False, witness)
    return Check(True, witness)


def twist(X, sigma, G=None):
    """``X^sigma``: apply an automorphism (index into ``G``) to every coefficient."""
    L = _algebra_of(X)
    G = G or galois_group(L)
    gens = [p.map_coefficients(lambda c: G.apply(sigma, c), X.ring) for p in X.generators]
    return AffineScheme(L, X.variables, gens, Provenance("twist", {"source": X, "sigma": sigma}))


def galois_decomposition(X, points=True, budget=None):
    """``R(X)_L`` against the product of all twists ``X^sigma`` over ``L``.

    Forward: ``x^(sigma)_i -> sum_j sigma(t)^j x_{i,j}``.  Backward: the
    idempotent ``e_sigma = sum c_ab t^a (x) t^b`` of ``L (x) L`` projects onto
    the ``sigma`` factor, so ``x_{i,b} -> sum_sigma sum_a c^sigma_ab t^a x^(sigma)_i``.
    """
    L = _algebra_of(X)
    G = galois_group(L)
    E = tensor_split(L, G)
    d = L.degree
    R = restrict_scheme(X)
    S = base_change(R.scheme, L)
    twists = [twist(X, s, G) for s in range(len(G))]
    names = [f"{x}_g{s}" for s in range(len(G)) for x in X.variables]
    PR = PolyRing(L, names)
    gens = []
    for s, Xs in enumerate(twists):
        block = [PR.var(f"{x}_g{s}") for x in X.variables]
        gens.extend(p.substitute(block, PR) for p in Xs.generators)
    P = AffineScheme(L, names, gens, Provenance("product", {"twists": twists}))
    forward = []
    for s in range(len(G)):
        rpow = [L.power(G.images[s], j) for j in range(d)]
        for x in X.variables:
            acc = S.ring.zero()
            for j in range(d):
                acc = acc + S.ring.var(f"{x}_{j}").scale(rpow[j])
            forward.append(acc)
    tpow = [L.power(L.gen, a) for a in range(d)]
    backward = []
    for x in X.variables:
        for b in range(d):
            acc = PR.zero()
            for s in range(len(G)):
                c = L.zero
                for a in range(d):
                    c = L.add(c, L.mul(L.embed(E[s][a][b]), tpow[a]))
                acc = acc + PR.var(f"{x}_g{s}").scale(c)
            backward.append(acc)
    check = _comparison(S, P, forward, backward, {"automorphisms": len(G)})
    if points and check.holds and L.is_finite:
        from .points import count_points, etale_ring
        A = etale_ring(L, name="s")
        left = count_points(R.scheme, A, budget)
        B = etale_ring(L)
        counts = [count_points(Xs, B, budget) for Xs in twists]
        prod = 1
        for c in counts:
            prod *= c
        check.witness["points"] = {"restriction": left, "twists": counts}
        check.holds = left == prod
    return check


def affine_shadow(X, n):
    """``R(X x A^n)`` and ``R(X) x A^{nd}`` have the same presentation."""
    from .scheme import fresh_name
    L = _algebra_of(X)
    names = []
    for i in range(n):
        names.append(fresh_name(list(X.variables) + names, f"a{i + 1}"))
    left_src, _, _ = product(X, affine_space(L, names))
    left = restrict_scheme(left_src).scheme
    RX = restrict_scheme(X).scheme
    right, _, _ = product(RX, affine_space(L.base, expanded_names(names, L.degree)))
    same_vars = left.variables == right.variables
    same_gens = [str(p) for p in left.generators] == [str(p) for p in right.generators]
    witness = {"variables": list(left.variables), "generators": [str(p) for p in left.generators]}
    if not same_vars:
        witness["right_variables"] = list(right.variables)
    if not same_gens:
        witness["right_generators"] = [str(p) for p in right.generators]
    return Check(same_vars and same_gens, witness)
