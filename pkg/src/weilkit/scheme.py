"""Affine schemes of finite presentation and polynomial morphisms between them."""

from dataclasses import dataclass, field

from .config import settings
from .errors import NoRelativePresentation, NotWellDefined, RingMismatch
from .fields import EtaleAlgebra
from .groebner import GroebnerBasis
from .poly import PolyRing, block_order, jacobian, minors


@dataclass(frozen=True)
class Provenance:
    """How a scheme was built; ``data`` holds kind-specific references."""
    kind: str = "raw"
    data: dict = field(default_factory=dict, compare=False)


@dataclass
class Check:
    """Outcome of a predicate: truth value, a witness payload and an empty-scheme flag."""
    holds: bool
    witness: dict = field(default_factory=dict)
    empty: bool = False

    def __bool__(self):
        return self.holds


class AffineScheme:
    """``Spec base[variables]/(generators)``; the Groebner basis is computed lazily."""

    def __init__(self, base, variables, generators=(), provenance=None, name=None, relative=None):
        self.base = base
        self.ring = PolyRing(base, variables)
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = self.ring.parse(g)
            gens.append(self.ring.coerce(g))
        self.generators = tuple(gens)
        self.provenance = provenance or Provenance()
        self.name = name
        # (parent, new variable names, relations) for presentations X = parent[z]/(J)
        self.relative = relative
        self._gb = None

    @property
    def variables(self):
        return self.ring.variables

    @property
    def nvars(self):
        return self.ring.nvars

    @property
    def gb(self):
        if self._gb is None:
            self._gb = GroebnerBasis(self.generators, self.ring, degree_cap=settings.gb_degree_cap)
        return self._gb

    def poly(self, text):
        return self.ring.parse(text)

    def normal_form(self, p):
        return self.gb.normal_form(p)

    def contains(self, p):
        return self.gb.contains(p)

    def is_empty(self):
        return self.gb.is_unit

    def dimension(self):
        return self.gb.krull_dimension()

    def __repr__(self):
        label = self.name or "AffineScheme"
        gens = ", ".join(str(g) for g in self.generators)
        return f"{label}(over {self.base!r}: [{', '.join(self.variables)}]/({gens}))"


def make_scheme(base, variables, generators=(), name=None):
    return AffineScheme(base, variables, generators, name=name)


def affine_space(base, n_or_names, prefix="x"):
    names = n_or_names if not isinstance(n_or_names, int) else [f"{prefix}{i + 1}" for i in range(n_or_names)]
    return AffineScheme(base, names, (), Provenance("affine", {}))


def fresh_name(existing, stem):
    existing = set(existing)
    if stem not in existing:
        return stem
    i = 1
    while f"{stem}{i}" in existing:
        i += 1
    return f"{stem}{i}"


class SchemeMorphism:
    """A morphism ``source -> target`` given by the pull-backs of the target coordinates."""

    def __init__(self, source, target, images, validate=True, name=None):
        if source.base != target.base:
            raise RingMismatch(f"source over {source.base!r}, target over {target.base!r}")
        images = list(images)
        if len(images) != target.nvars:
            raise NotWellDefined(
                f"{len(images)} coordinate images for a target with {target.nvars} variables")
        self.source = source
        self.target = target
        self.images = tuple(source.ring.parse(im) if isinstance(im, str) else source.ring.coerce(im)
                            for im in images)
        self.name = name
        if validate:
            bad = self.first_bad_generator()
            if bad is not None:
                raise NotWellDefined(f"generator {bad} does not pull back into the source ideal", bad)

    def pullback(self, p):
        return p.substitute(list(self.images), self.source.ring)

    def first_bad_generator(self):
        for g in self.target.generators:
            if not self.source.contains(self.pullback(g)):
                return g
        return None

    def is_well_defined(self):
        return self.first_bad_generator() is None

    def __repr__(self):
        ims = ", ".join(str(p) for p in self.images)
        return f"SchemeMorphism({', '.join(self.target.variables)} <- {ims})"


def make_morphism(source, target, images, name=None):
    return SchemeMorphism(source, target, images, name=name)


def identity(X):
    return SchemeMorphism(X, X, X.ring.gens(), validate=False)


def compose(psi, phi, validate=False):
    """``psi o phi`` for ``phi: X -> Y`` and ``psi: Y -> Z``."""
    if phi.target.ring != psi.source.ring:
        raise RingMismatch("morphisms are not composable")
    images = [phi.pullback(im) for im in psi.images]
    return SchemeMorphism(phi.source, psi.target, images, validate=validate)


def disagreements(m1, m2):
    """Target coordinates on which two parallel morphisms differ modulo the source ideal."""
    out = []
    for name, a, b in zip(m1.target.variables, m1.images, m2.images):
        diff = m1.source.normal_form(a - b)
        if not diff.is_zero():
            out.append({"coordinate": name, "difference": str(diff)})
    return out


def is_identity(m):
    return not disagreements(m, identity(m.source)) if m.source.ring == m.target.ring else False


def rename_apart(names, taken):
    """Rename entries of ``names`` colliding with ``taken`` by appending primes."""
    taken = set(taken)
    out = []
    for n in names:
        new = n
        while new in taken:
            new += "'"
        taken.add(new)
        out.append(new)
    return out


def fiber_product(f, g):
    """``X x_Z Y`` with its two projections, for ``f: X -> Z`` and ``g: Y -> Z``."""
    X, Y = f.source, g.source
    if f.target.ring != g.target.ring or X.base != Y.base:
        raise RingMismatch("fiber product needs morphisms to a common target")
    ynames = rename_apart(Y.variables, X.variables)
    P = PolyRing(X.base, X.variables + tuple(ynames))
    n = X.nvars
    xin = [P.var(v) for v in X.variables]
    yin = [P.var(v) for v in ynames]
    gens = [p.substitute(xin, P) for p in X.generators]
    gens += [p.substitute(yin, P) for p in Y.generators]
    for a, b in zip(f.images, g.images):
        gens.append(a.substitute(xin, P) - b.substitute(yin, P))
    W = AffineScheme(X.base, P.variables, gens, Provenance("product", {"left": f, "right": g}))
    pr1 = SchemeMorphism(W, X, [W.ring.var(v) for v in P.variables[:n]], validate=False)
    pr2 = SchemeMorphism(W, Y, [W.ring.var(v) for v in P.variables[n:]], validate=False)
    return W, pr1, pr2


def structure_point(base):
    return AffineScheme(base, (), (), Provenance("affine", {}))


def to_point(X):
    return SchemeMorphism(X, structure_point(X.base), [], validate=False)


def product(X, Y):
    """``X x Y`` over the base field, with projections."""
    return fiber_product(to_point(X), to_point(Y))


def relative_scheme(parent, new_vars, relations, kind="relative"):
    """``parent[new_vars]/(relations)`` together with its projection to ``parent``."""
    new_vars = list(new_vars)
    clash = set(new_vars) & set(parent.variables)
    if clash:
        raise ValueError(f"variables {sorted(clash)} already used by the parent")
    R = PolyRing(parent.base, parent.variables + tuple(new_vars))
    lift = [R.var(v) for v in parent.variables]
    rels = [R.parse(r) if isinstance(r, str) else r for r in relations]
    gens = [p.substitute(lift, R) for p in parent.generators] + rels
    X = AffineScheme(parent.base, R.variables, gens,
                     Provenance(kind, {"parent": parent, "relations": rels}),
                     relative=(parent, tuple(new_vars), tuple(rels)))
    proj = SchemeMorphism(X, parent, [X.ring.var(v) for v in parent.variables], validate=False)
    return X, proj


def distinguished_open(X, g, var=None):
    """``D(g)`` presented by adjoining ``y`` with ``y*g - 1``, plus its inclusion into ``X``."""
    if isinstance(g, str):
        g = X.ring.parse(g)
    y = var or fresh_name(X.variables, "y")
    R = PolyRing(X.base, X.variables + (y,))
    rel = R.var(y) * g.substitute([R.var(v) for v in X.variables], R) - 1
    U, inc = relative_scheme(X, [y], [rel], kind="open")
    U.provenance.data["g"] = g
    return U, inc


def closed_subscheme(X, extra):
    extra = [X.ring.parse(e) if isinstance(e, str) else X.ring.coerce(e) for e in extra]
    Z = AffineScheme(X.base, X.variables, list(X.generators) + extra,
                     Provenance("closed", {"parent": X, "extra": extra}))
    inc = SchemeMorphism(Z, X, Z.ring.gens(), validate=False)
    return Z, inc


def base_change(Y, L):
    """Read a k-scheme over ``L`` through the coefficient inclusion ``k -> L``."""
    if Y.base == L:
        return Y
    if not isinstance(L, EtaleAlgebra) or L.base != Y.base:
        raise RingMismatch(f"cannot base change from {Y.base!r} to {L!r}")
    R = PolyRing(L, Y.variables)
    gens = [p.map_coefficients(L.embed, R) for p in Y.generators]
    return AffineScheme(L, Y.variables, gens, Provenance("base-change", {"source": Y}))


def base_change_morphism(m, L):
    S, T = base_change(m.source, L), base_change(m.target, L)
    ims = [p.map_coefficients(L.embed, S.ring) for p in m.images]
    return SchemeMorphism(S, T, ims, validate=False)


# -- predicates


def is_closed_embedding(m):
    """Surjectivity of the coordinate-ring map, decided by elimination.

    Every source coordinate must have a normal form, for an order eliminating
    the source variables, that only involves the tagged target coordinates.
    """
    X, Y = m.source, m.target
    if X.is_empty():
        return Check(True, {}, empty=True)
    tags = [fresh_name(X.variables + tuple(f"_T{j}" for j in range(i)), f"_T{i}") for i in range(Y.nvars)]
    R = PolyRing(X.base, X.variables + tuple(tags))
    xs = [R.var(v) for v in X.variables]
    gens = [p.substitute(xs, R) for p in X.generators]
    gens += [R.var(tag) - im.substitute(xs, R) for tag, im in zip(tags, m.images)]
    G = GroebnerBasis(gens, R, block_order(X.nvars), settings.gb_degree_cap)
    n = X.nvars
    Yring = Y.ring
    expressions = {}
    for i, v in enumerate(X.variables):
        nf = G.normal_form(R.var(v))
        if any(j < n for j in nf.support()):
            return Check(False, {"unreachable": v, "normal_form": str(nf)})
        expr = {e[n:]: c for e, c in nf.terms.items()}
        expressions[v] = str(Yring.from_terms(expr.items()))
    return Check(True, {"expressions": expressions})


def is_smooth(X, r=None):
    """Jacobian criterion: dimension ``r`` and ``I + (n-r)-minors`` is the unit ideal."""
    if X.is_empty():
        return Check(True, {"reason": "empty scheme"}, empty=True)
    dim = X.dimension()
    if r is None:
        r = dim
    if dim != r:
        return Check(False, {"reason": "dimension", "dimension": dim, "expected": r})
    c = X.nvars - r
    J = jacobian(X.generators, X.variables)
    ms = minors(J, c, X.ring)
    G = GroebnerBasis(list(X.generators) + ms, X.ring, degree_cap=settings.gb_degree_cap)
    if G.is_unit:
        return Check(True, {"dimension": dim, "minor_size": c, "minors": len(ms),
                            "certificate": ["1"]})
    return Check(False, {"reason": "singular", "dimension": dim, "minor_size": c,
                         "singular_locus": [str(p) for p in G.basis]})


def relative_presentation(m):
    """``(new_vars, relations)`` exhibiting ``m.source = m.target[z]/(J)``."""
    X, Y = m.source, m.target
    if X is Y and all(im == X.ring.var(v) for im, v in zip(m.images, X.variables)):
        return (), ()
    if X.relative is None:
        raise NoRelativePresentation("the source carries no relative presentation")
    parent, new_vars, rels = X.relative
    if parent.ring != Y.ring or list(parent.generators) != list(Y.generators):
        raise NoRelativePresentation("the recorded relative presentation is over another scheme")
    if any(im != X.ring.var(v) for im, v in zip(m.images, Y.variables)):
        raise NoRelativePresentation("the morphism is not the structural projection")
    return new_vars, rels


def _graph_etale(m):
    """Test through the graph ``X = Y[x]/(I_X, y - phi(x))``.

    A Jacobian of rank below ``n`` somewhere means ``X -> Y`` is ramified.
    Full rank certifies etale only when the presentation is standard.
    """
    X = m.source
    rels = list(X.generators) + list(m.images)
    n = X.nvars
    if X.is_empty():
        return Check(True, {"reason": "empty scheme"}, empty=True)
    ms = minors(jacobian(rels, X.variables), n, X.ring) if n else [X.ring.one()]
    G = GroebnerBasis(list(X.generators) + ms, X.ring, degree_cap=settings.gb_degree_cap)
    witness = {"graph_jacobian_minors": [str(p) for p in ms]}
    if not G.is_unit:
        witness["reason"] = "ramified"
        witness["ramification_locus"] = [str(p) for p in G.basis]
        return Check(False, witness)
    if len(rels) != n:
        raise NoRelativePresentation("unramified, but the graph presentation is not standard")
    witness["fitting_ideal"] = ["1"]
    return Check(True, witness)


def is_etale_morphism(m):
    """Standard-etale test: the relative Jacobian is invertible on the source."""
    try:
        new_vars, rels = relative_presentation(m)
    except NoRelativePresentation:
        return _graph_etale(m)
    X = m.source
    if len(rels) != len(new_vars):
        raise NoRelativePresentation(
            f"{len(rels)} relations in {len(new_vars)} new variables is not a standard presentation")
    if not new_vars:
        return Check(True, {"relative_dimension": 0, "fitting_ideal": ["1"]})
    if X.is_empty():
        return Check(True, {"reason": "empty scheme"}, empty=True)
    J = jacobian(rels, new_vars)
    ms = minors(J, len(new_vars), X.ring)
    G = GroebnerBasis(list(X.generators) + ms, X.ring, degree_cap=settings.gb_degree_cap)
    witness = {"relative_jacobian_minors": [str(p) for p in ms]}
    if G.is_unit:
        witness["fitting_ideal"] = ["1"]
        return Check(True, witness)
    witness["fitting_ideal"] = [str(p) for p in G.basis]
    return Check(False, witness)
