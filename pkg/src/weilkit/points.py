"""Exhaustive functor-of-points enumeration over small finite test algebras.

Every test algebra is a finite ``F_p``-algebra presented as a tensor product
of univariate quotients ``F_p[u]/(m(u)) (x) F_p[t]/(f(t)) (x) ...``.  Elements
are integers: the base-``p`` digits of an index are its coordinates in the
monomial basis, first factor least significant.  So ``0`` and ``1`` are the
ring's zero and one, and ``c < p`` is the image of ``c`` in ``F_p``.

Enumeration brute-forces only the variables that occur nonlinearly.  The
remaining variables enter every generator jointly linearly; for each base
point they are solved as an ``F_p``-linear system, each ring coefficient
acting by its multiplication matrix.  That works uniformly for fields,
dual numbers and split products, so no CRT factorisation is needed.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import settings
from .errors import BudgetExceeded, RingMismatch
from .fields import EtaleAlgebra, PrimeField, is_irreducible_mod_p

_TABLE_LIMIT = 4096  # larger rings compute products from coordinates
_RING_LIMIT = 2**20
_WORK_LIMIT = 2**23  # base assignments times dim^2, for rings without tables
_CHUNK = 2**14


def _poly_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    d = len(m) - 1
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for j in range(d + 1):
                prod[k - d + j] = (prod[k - d + j] - c * m[j]) % p
    return (prod + [0] * d)[:d]


def _structure_constants(m, p):
    """``C[i, j, k]``: coefficient of ``x^k`` in ``x^i * x^j mod m``."""
    d = len(m) - 1
    C = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            a = [0] * i + [1]
            b = [0] * j + [1]
            C[i, j] = _poly_mulmod(a, b, m, p)
    return C


def smallest_irreducible(p, s):
    """Lexicographically first monic irreducible polynomial of degree ``s`` over F_p."""
    for tail in itertools.product(range(p), repeat=s):
        f = tuple(reversed(tail)) + (1,)
        if is_irreducible_mod_p(f, p):
            return f
    raise ValueError(f"no irreducible polynomial of degree {s} over F_{p}")


def _batch_solve_mod_p(M, b, p):
    """Solve ``M[n] x = b[n]`` for a stack of square matrices; ``(solvable mask, x)``."""
    dtype = np.int16 if p < 128 else np.int64
    M = (M % p).astype(dtype)
    b = (b % p).astype(dtype)
    N, D, _ = M.shape
    inv_p = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=dtype)
    ok = np.ones(N, dtype=bool)
    ar = np.arange(N)
    for col in range(D):
        nz = M[:, col:, col] != 0
        ok &= nz.any(axis=1)
        k = col + np.argmax(nz, axis=1)
        rc, rk = M[ar, col].copy(), M[ar, k].copy()
        M[ar, col], M[ar, k] = rk, rc
        bc, bk = b[ar, col].copy(), b[ar, k].copy()
        b[ar, col], b[ar, k] = bk, bc
        f = inv_p[M[:, col, col]]
        M[:, col] = (M[:, col] * f[:, None]) % p
        b[:, col] = (b[:, col] * f) % p
        factor = M[:, :, col].copy()
        factor[:, col] = 0
        M = (M - factor[:, :, None] * M[:, col][:, None, :]) % p
        b = (b - factor * b[:, col][:, None]) % p
    return ok, b.astype(np.int64)


class FiniteRing:
    """A finite commutative ``F_p``-algebra.

    Up to ``_TABLE_LIMIT`` elements the operations are dense lookup tables;
    beyond that they are computed from coordinates and structure constants.
    """

    def __init__(self, p, factors, label=None, kind="ring"):
        self.p = p
        self.factors = tuple((name, tuple(int(c) % p for c in m)) for name, m in factors)
        names = [n for n, _ in self.factors]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate factor names {names}")
        self.dims = tuple(len(m) - 1 for _, m in self.factors)
        self.dim = int(np.prod(self.dims)) if self.dims else 1
        self.size = p**self.dim
        self.label = label or "x".join(f"F{p}[{n}]/({m})" for n, m in self.factors) or f"GF({p})"
        self.kind = kind
        # exponent tuples of the monomial basis, first factor varying fastest
        self.basis = [tuple(reversed(e)) for e in itertools.product(*[range(d) for d in reversed(self.dims)])]
        self._basis_index = {e: i for i, e in enumerate(self.basis)}
        self.radix = p ** np.arange(self.dim, dtype=np.int64)
        C = np.ones((1, 1, 1), dtype=np.int64)
        for _, m in self.factors:
            Ci = _structure_constants(m, p)
            C = np.einsum("abc,ijk->aibjck", C, Ci).reshape(
                C.shape[0] * Ci.shape[0], C.shape[1] * Ci.shape[1], C.shape[2] * Ci.shape[2])
        # einsum above makes earlier factors the slow index; reorder to ours
        order = [self._kron_position(e) for e in self.basis]
        self.structure = C[np.ix_(order, order, order)]

    def _kron_position(self, e):
        pos = 0
        for x, d in zip(e, self.dims):
            pos = pos * d + x
        return pos

    def __repr__(self):
        return self.label

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and (self.p, self.factors) == (other.p, other.factors)

    def __hash__(self):
        return hash((self.p, self.factors))

    # -- element encoding

    def coords(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.radix) % self.p

    def index(self, coords):
        return (np.asarray(coords, dtype=np.int64) % self.p) @ self.radix

    def monomial(self, **exps):
        e = tuple(exps.get(name, 0) for name, _ in self.factors)
        return int(self.radix[self._basis_index[e]])

    def format(self, idx):
        parts = []
        for c, e in zip(self.coords(int(idx)).tolist(), self.basis):
            if not c:
                continue
            mon = "*".join(n if k == 1 else f"{n}^{k}" for (n, _), k in zip(self.factors, e) if k)
            parts.append(str(c) if not mon else (mon if c == 1 else f"{c}*{mon}"))
        return "+".join(parts) if parts else "0"

    # -- tables

    @property
    def tabulated(self):
        return self.size <= _TABLE_LIMIT

    def _check_size(self):
        if not self.tabulated:
            raise BudgetExceeded(f"{self.label} has {self.size} elements; tables stop at {_TABLE_LIMIT}")

    @cached_property
    def all_coords(self):
        return self.coords(np.arange(self.size))

    @cached_property
    def add_table(self):
        self._check_size()
        p = self.p
        digit = np.add.outer(np.arange(p), np.arange(p)) % p
        out = np.zeros((1, 1), dtype=np.int64)
        # index digits are independent: grow the table one digit at a time
        for k in range(self.dim):
            w = p**k
            out = (digit[:, None, :, None] * w + out[None, :, None, :]).reshape(w * p, w * p)
        return out

    def _products(self, b):
        """Indices of ``a * b`` for every ``a`` (rows) and each ``b`` in the list (columns)."""
        X = self.all_coords
        Y = self.coords(b)
        Mb = np.einsum("bj,ijk->bik", Y, self.structure)  # multiplication by each b
        Z = np.einsum("ai,bik->abk", X, Mb) % self.p
        return Z @ self.radix

    @cached_property
    def mul_table(self):
        self._check_size()
        # a*b is additive in b: split b into low and high digits and add the two products
        low = self.dim // 2
        P = self.p**low
        lo = self._products(np.arange(P))
        hi = self._products(np.arange(self.size // P) * P)
        return self.add_table[hi[:, :, None], lo[:, None, :]].reshape(self.size, self.size)

    @cached_property
    def neg_table(self):
        return ((-self.all_coords) % self.p) @ self.radix

    @cached_property
    def _structure_flat(self):
        # float64 for BLAS; every partial sum stays far below 2^53
        return self.structure.reshape(self.dim * self.dim, self.dim).astype(np.float64)

    def _mul_coords(self, x, y):
        x, y = np.broadcast_arrays(x, y)
        shape = x.shape
        x = x.reshape(-1, self.dim)
        y = y.reshape(-1, self.dim)
        out = np.empty(x.shape, dtype=np.int64)
        step = max(1, 2**22 // (self.dim * self.dim))
        for s in range(0, len(x), step):
            outer = (x[s:s + step, :, None] * y[s:s + step, None, :]).reshape(-1, self.dim * self.dim)
            prod = outer.astype(np.float64) @ self._structure_flat
            out[s:s + step] = np.rint(prod).astype(np.int64) % self.p
        return out.reshape(shape)

    def add(self, a, b):
        if self.tabulated:
            return self.add_table[a, b]
        return self.index(self.coords(a) + self.coords(b))

    def mul(self, a, b):
        if self.tabulated:
            return self.mul_table[a, b]
        return self.index(self._mul_coords(self.coords(a), self.coords(b)))

    def neg(self, a):
        if self.tabulated:
            return self.neg_table[a]
        return self.index(-self.coords(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _solve_by(self, a):
        """Solvability and solution of ``a x = 1`` for each element of ``a``."""
        a = np.asarray(a, dtype=np.int64)
        flat = a.reshape(-1)
        ok = np.zeros(len(flat), dtype=bool)
        x = np.zeros(len(flat), dtype=np.int64)
        one = self.coords(1)
        for s in range(0, len(flat), _CHUNK):
            part = flat[s:s + _CHUNK]
            mats = self.mult_matrices(part)
            good, sol = _batch_solve_mod_p(mats, np.broadcast_to(one, (len(part), self.dim)).copy(), self.p)
            ok[s:s + _CHUNK] = good
            x[s:s + _CHUNK] = self.index(sol)
        return ok.reshape(a.shape), np.where(ok, x, 0).reshape(a.shape)

    def unit_inverse(self, a):
        """Unit mask and inverses (0 off the units) in one pass."""
        if self.tabulated:
            return self.units[a], self._inverse_table[a]
        return self._solve_by(a)

    def is_unit(self, a):
        if self.tabulated:
            return self.units[a]
        if self.kind == "field":
            return np.asarray(a) != 0
        return self._solve_by(a)[0]

    def inverse(self, a):
        """Inverses of units (0 where ``a`` is not a unit)."""
        if self.tabulated:
            return self._inverse_table[a]
        return self._solve_by(a)[1]

    @cached_property
    def units(self):
        if self.tabulated:
            return (self.mul_table == 1).any(axis=1)
        return self.is_unit(np.arange(self.size))

    @cached_property
    def _inverse_table(self):
        inv = np.zeros(self.size, dtype=np.int64)
        uu = np.flatnonzero(self.units)
        inv[uu] = np.argmax(self.mul_table[uu] == 1, axis=1)
        return inv

    @cached_property
    def is_field(self):
        if self.kind == "field":
            return True
        return int(self.units.sum()) == self.size - 1

    @cached_property
    def idempotents(self):
        every = np.arange(self.size)
        return np.flatnonzero(self.mul(every, every) == every)

    @cached_property
    def is_local(self):
        """A finite commutative ring is local iff 0 and 1 are its only idempotents."""
        return len(self.idempotents) == 2

    def mult_matrix(self, a):
        """``F_p`` matrix of multiplication by ``a`` (columns: images of basis vectors)."""
        c = self.coords(int(a))
        return np.einsum("i,ijk->kj", c, self.structure) % self.p

    def mult_matrices(self, a):
        """Stacked multiplication matrices for an array of elements."""
        c = self.coords(np.asarray(a))
        return np.einsum("...i,ijk->...kj", c, self.structure) % self.p

    # -- maps into this ring

    def factor_embedding(self, other):
        """Basis map from a ring whose factors are a subset of ours."""
        mine = dict(self.factors)
        for name, m in other.factors:
            if mine.get(name) != m or other.p != self.p:
                raise RingMismatch(f"{other.label} does not embed into {self.label}")
        names = [n for n, _ in self.factors]
        pos = [names.index(n) for n, _ in other.factors]
        targets = []
        for e in other.basis:
            full = [0] * len(names)
            for k, x in zip(pos, e):
                full[k] = x
            targets.append(self._basis_index[tuple(full)])
        return np.array(targets, dtype=np.int64)

    def embed(self, other, idx):
        """Image of elements of ``other`` under the inclusion of tensor factors."""
        targets = self.factor_embedding(other)
        c = other.coords(np.asarray(idx))
        out = np.zeros(c.shape[:-1] + (self.dim,), dtype=np.int64)
        out[..., targets] = c
        return self.index(out)

    def coefficient(self, domain, c):
        """Index of a polynomial coefficient living in ``domain``."""
        if isinstance(domain, PrimeField):
            if domain.p != self.p:
                raise RingMismatch(f"{domain!r} coefficients in {self.label}")
            return int(c) % self.p
        if isinstance(domain, EtaleAlgebra) and isinstance(domain.base, PrimeField):
            name = domain.name
            if dict(self.factors).get(name) != tuple(domain.modulus):
                raise RingMismatch(f"{self.label} is not an algebra over {domain!r}")
            acc = 0
            for j, x in enumerate(c):
                acc += (int(x) % self.p) * self.monomial(**{name: j})
            return acc
        raise RingMismatch(f"cannot evaluate {domain!r} coefficients in {self.label}")


# -- test algebras


def finite_field(p, s=1):
    """``F_{p^s}`` as ``F_p[u]/(m)`` with ``m`` the first irreducible of degree ``s``."""
    if s == 1:
        F = FiniteRing(p, (), label=f"GF({p})", kind="field")
    else:
        F = FiniteRing(p, [("u", smallest_irreducible(p, s))], label=f"GF({p}^{s})", kind="field")
    F.residue_degree = s
    return F


def dual_numbers(p, s=1):
    F = finite_field(p, s)
    D = FiniteRing(p, F.factors + (("eps", (0, 0, 1)),), label=f"{F.label}[eps]", kind="dual")
    D.residue_degree = s
    return D


def tensor_is_local(A, L):
    """Whether ``A (x)_k L`` is local, for ``A`` a field or dual numbers over one.

    ``F_{p^s} (x) k[t]/(f)`` is local iff ``f`` stays irreducible over
    ``F_{p^s}``, i.e. ``f`` is irreducible and ``gcd(s, deg f) = 1``.
    """
    import math
    s = getattr(A, "residue_degree", None)
    if s is None:
        return tensor_with(A, L).is_local
    if not is_irreducible_mod_p(L.modulus, L.base.p):
        return False
    return math.gcd(s, L.degree) == 1


def etale_ring(L, name=None):
    """The finite algebra ``L`` itself as a test algebra over its prime field."""
    if not (isinstance(L.base, PrimeField)):
        raise RingMismatch("only algebras over a prime field are finite")
    name = name or L.name
    return FiniteRing(L.base.p, [(name, tuple(L.modulus))], label=repr(L), kind="etale")


def tensor_with(A, L):
    """``A (x)_k L`` with ``L``'s generator as the factor named after it."""
    if L.name in dict(A.factors):
        raise RingMismatch(f"factor name {L.name!r} already used by {A.label}")
    if L.base.p != A.p:
        raise RingMismatch(f"{A.label} is not an algebra over {L.base!r}")
    kind = A.kind if A.kind == "dual" else "ring"
    if A.kind == "field" and tensor_is_local(A, L):
        kind = "field"  # reduced and local
    return FiniteRing(A.p, A.factors + ((L.name, tuple(L.modulus)),), label=f"{A.label}(x){L!r}", kind=kind)


def test_fields(L, max_size=625, budget=None, nvars=None):
    """Prime-power fields ``F_{p^s}`` with at most ``max_size`` elements."""
    p = L.base.p
    out = []
    s = 1
    while p**s <= max_size:
        if nvars is None or budget is None or (p**s) ** nvars <= budget:
            out.append(finite_field(p, s))
        s += 1
    return out


# -- enumeration


@dataclass
class PointSet:
    scheme: object
    ring: FiniteRing
    points: np.ndarray  # (count, nvars) element indices, sorted, unique

    def __len__(self):
        return len(self.points)

    def as_tuples(self):
        return [tuple(int(x) for x in row) for row in self.points]

    def formatted(self):
        return [tuple(self.ring.format(x) for x in row) for row in self.points]


class _CompiledPoly:
    """A polynomial as coefficient indices and exponent arrays in a finite ring."""

    def __init__(self, poly, ring):
        self.exps = np.array(list(poly.terms.keys()), dtype=np.int64).reshape(len(poly.terms), poly.ring.nvars)
        self.coeffs = np.array([ring.coefficient(poly.ring.domain, c) for c in poly.terms.values()],
                               dtype=np.int64)
        self.ring = ring

    def evaluate(self, values, powers):
        R = self.ring
        acc = np.zeros(values.shape[0], dtype=np.int64)
        for e, c in zip(self.exps, self.coeffs):
            term = np.full(values.shape[0], c, dtype=np.int64)
            for i in np.flatnonzero(e):
                term = R.mul(term, powers[values[:, i], e[i]])
            acc = R.add(acc, term)
        return acc


def linear_variables(gens, nvars):
    """Greedy set of variables (scanning from the last) in which all generators are jointly affine."""
    chosen = []
    for i in range(nvars - 1, -1, -1):
        trial = chosen + [i]
        if all(g.degree_in(trial) <= 1 for g in gens):
            chosen = trial
    return sorted(chosen)


def _split_linear(g, lin):
    """``g = sum_s coeff[s] * x_s + const`` with coefficient polys free of ``lin``."""
    ring = g.ring
    coeffs = [dict() for _ in lin]
    const = {}
    for e, c in g.terms.items():
        hit = [k for k, i in enumerate(lin) if e[i]]
        if not hit:
            const[e] = c
        else:
            k = hit[0]
            ne = list(e)
            ne[lin[k]] = 0
            coeffs[k][tuple(ne)] = c
    from .poly import Poly
    return [Poly(ring, t) for t in coeffs], Poly(ring, const)


def _rref_mod_p(M, p):
    M = M.copy() % p
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if not len(nz):
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        others = np.flatnonzero(M[:, c])
        others = others[others != r]
        if len(others):
            M[others] = (M[others] - np.outer(M[others, c], M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def solve_affine_mod_p(A, b, p):
    """Solutions of ``A x = b`` over F_p as ``(particular, kernel_basis)`` or ``None``."""
    rows, cols = A.shape
    aug = np.concatenate([A % p, (b % p).reshape(-1, 1)], axis=1)
    R, pivots = _rref_mod_p(aug, p)
    if cols in pivots:
        return None
    x0 = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x0[c] = R[r, cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r, f]) % p
        basis.append(v)
    return x0, np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def _span(x0, basis, p):
    k = len(basis)
    if k == 0:
        return x0[None, :]
    grid = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)
    return (x0[None, :] + grid @ basis) % p


def unique_rows(rows, base):
    """Sorted, duplicate-free rows of integers in ``range(base)`` (lexicographic order)."""
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[1]
    if len(rows) == 0 or n == 0:
        return rows[:1] if n == 0 and len(rows) else rows
    if base ** n < 2**62:
        radix = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
        keys = np.unique(rows @ radix)
        out = np.empty((len(keys), n), dtype=np.int64)
        for j in range(n - 1, -1, -1):
            out[:, j] = keys % base
            keys = keys // base
        return out
    return np.unique(rows, axis=0)


def _assignments(ring_size, count, start, stop):
    """Rows ``start..stop`` of the lexicographic product ``range(ring_size)^count``."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), count), dtype=np.int64)
    for j in range(count - 1, -1, -1):
        out[:, j] = idx % ring_size
        idx //= ring_size
    return out


def _check_work(R, count, what):
    if not R.tabulated and count * R.dim ** 2 > _WORK_LIMIT:
        raise BudgetExceeded(f"{count} {what} over {R.label} without tables exceed the work budget {_WORK_LIMIT}")


def enumerate_points(X, A, budget=None):
    """All ``A``-points of ``X``: sorted, duplicate-free rows of element indices."""
    budget = settings.point_budget if budget is None else budget
    R = A
    n = X.nvars
    gens = [g for g in X.generators if not g.is_zero()]
    compiled_consts = [g for g in gens if g.is_constant()]
    for g in compiled_consts:
        if R.coefficient(X.base, g.constant_term()) != 0:
            return PointSet(X, R, np.zeros((0, n), dtype=np.int64))
    gens = [g for g in gens if not g.is_constant()]
    if n == 0:
        return PointSet(X, R, np.zeros((1, 0), dtype=np.int64))
    if R.size > _RING_LIMIT:
        raise BudgetExceeded(f"{R.label} has {R.size} elements, more than {_RING_LIMIT}")
    lin = linear_variables(gens, n)
    base = [i for i in range(n) if i not in lin]
    total = R.size ** len(base)
    if total > budget:
        raise BudgetExceeded(
            f"{R.size}^{len(base)} = {total} base assignments over {R.label} exceed the budget {budget}")
    _check_work(R, total, "base assignments")
    maxdeg = max([g.degree() for g in gens], default=1)
    powers = np.empty((R.size, maxdeg + 1), dtype=np.int64)
    powers[:, 0] = 1
    for k in range(1, maxdeg + 1):
        powers[:, k] = R.mul(powers[:, k - 1], np.arange(R.size))
    pure = [_CompiledPoly(g, R) for g in gens if not (g.support() & set(lin))]
    mixed = [g for g in gens if g.support() & set(lin)]
    # survivors of the equations without linear variables
    chunk = 2**18
    survivors = []
    for start in range(0, total, chunk):
        vals = np.zeros((min(chunk, total - start), n), dtype=np.int64)
        if base:
            vals[:, base] = _assignments(R.size, len(base), start, min(start + chunk, total))
        mask = np.ones(len(vals), dtype=bool)
        for cp in pure:
            mask &= cp.evaluate(vals, powers) == 0
        survivors.append(vals[mask])
    vals = np.concatenate(survivors) if survivors else np.zeros((0, n), dtype=np.int64)
    if not lin:
        return PointSet(X, R, unique_rows(vals, R.size))
    if not mixed:
        # linear variables are unconstrained
        free = R.size ** len(lin)
        if free * len(vals) > budget:
            raise BudgetExceeded(f"{free * len(vals)} points exceed the budget {budget}")
        _check_work(R, free * len(vals), "points")
        fill = _assignments(R.size, len(lin), 0, free)
        rows = np.repeat(vals, free, axis=0)
        rows[:, lin] = np.tile(fill, (len(vals), 1))
        return PointSet(X, R, unique_rows(rows, R.size))
    split = [_split_linear(g, lin) for g in mixed]
    coeff_c = [[_CompiledPoly(c, R) for c in cs] for cs, _ in split]
    const_c = [_CompiledPoly(k, R) for _, k in split]
    if len(vals):
        coeff_vals = np.stack([np.stack([c.evaluate(vals, powers) for c in row], axis=1)
                               for row in coeff_c], axis=1)  # (P, g, s)
        const_vals = np.stack([c.evaluate(vals, powers) for c in const_c], axis=1)  # (P, g)
    if not len(vals):
        return PointSet(X, R, np.zeros((0, n), dtype=np.int64))
    sols, owners = solve_linear_batch(R, coeff_vals, const_vals, budget)
    rows = vals[owners]
    rows[:, lin] = sols
    return PointSet(X, R, unique_rows(rows, R.size))


def _fp_solutions(R, M, c):
    """All solutions of ``M x = -c`` over ``R`` via the ``F_p``-linearisation."""
    D, p = R.dim, R.p
    g, s = M.shape
    big = R.mult_matrices(M).transpose(0, 2, 1, 3).reshape(g * D, s * D)
    rhs = (-R.coords(c)).reshape(-1) % p
    sol = solve_affine_mod_p(big, rhs, p)
    if sol is None:
        return np.zeros((0, s), dtype=np.int64)
    x0, kb = sol
    return _span(x0, kb, p).reshape(-1, s, D) @ R.radix


def solve_linear_batch(R, M, c, budget):
    """Solve ``M[b] x + c[b] = 0`` over ``R`` for every batch index ``b``.

    Gaussian elimination with unit pivots runs on all batches at once.  A batch whose leftover rows still hold nonzero
    non-units is handed to the exact ``F_p``-linear solver.  Returns the
    solutions and, for each, the batch it belongs to.
    """
    M = M.copy()
    c = c.copy()
    B, g, s = M.shape
    add, mul = R.add, R.mul
    rank = np.zeros(B, dtype=np.int64)
    pivcols = np.full((B, min(g, s)), -1, dtype=np.int64)
    rows_idx = np.arange(g)
    for col in range(s):
        unit, inv = R.unit_inverse(M[:, :, col])
        cand = unit & (rows_idx[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        bsel = np.flatnonzero(has)
        r = rank[bsel]
        k = np.argmax(cand[bsel], axis=1)
        rowr, rowk = M[bsel, r].copy(), M[bsel, k].copy()
        M[bsel, r], M[bsel, k] = rowk, rowr
        cr, ck = c[bsel, r].copy(), c[bsel, k].copy()
        c[bsel, r], c[bsel, k] = ck, cr
        f = inv[bsel, k]
        M[bsel, r] = mul(M[bsel, r], f[:, None])
        c[bsel, r] = mul(c[bsel, r], f)
        factor = R.neg(M[bsel, :, col])
        factor[np.arange(len(bsel)), r] = 0
        M[bsel] = add(M[bsel], mul(factor[:, :, None], M[bsel, r][:, None, :]))
        c[bsel] = add(c[bsel], mul(factor, c[bsel, r][:, None]))
        pivcols[bsel, r] = col
        rank[bsel] += 1
    leftover = rows_idx[None, :] >= rank[:, None]
    stuck = ((M != 0).any(axis=2) & leftover).any(axis=1)
    bad_rhs = ((c != 0) & leftover).any(axis=1)
    sols, owners = [], []
    produced = 0
    for b in np.flatnonzero(stuck):
        x = _fp_solutions(R, M[b], c[b])
        produced += len(x)
        sols.append(x)
        owners.append(np.full(len(x), b, dtype=np.int64))
    clean = np.flatnonzero(~stuck & ~bad_rhs)
    if len(clean):
        patterns, inverse = np.unique(pivcols[clean], axis=0, return_inverse=True)
        for gi, pat in enumerate(patterns):
            members = clean[inverse.reshape(-1) == gi]
            piv = [int(x) for x in pat if x >= 0]
            free = [j for j in range(s) if j not in piv]
            nfree = R.size ** len(free)
            produced += nfree * len(members)
            if produced > budget:
                raise BudgetExceeded(f"more than {budget} points over {R.label}")
            _check_work(R, produced, "points")
            grid = _assignments(R.size, len(free), 0, nfree)
            x = np.zeros((len(members), nfree, s), dtype=np.int64)
            x[:, :, free] = grid[None, :, :]
            for r, pc in enumerate(piv):
                acc = np.broadcast_to(R.neg(c[members, r])[:, None], (len(members), nfree)).copy()
                for f_ in free:
                    term = mul(M[members, r, f_][:, None], x[:, :, f_])
                    acc = add(acc, R.neg(term))
                x[:, :, pc] = acc
            sols.append(x.reshape(-1, s))
            owners.append(np.repeat(members, nfree))
    if produced > budget:
        raise BudgetExceeded(f"more than {budget} points over {R.label}")
    if not sols:
        return np.zeros((0, s), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(sols), np.concatenate(owners)


def count_points(X, A, budget=None):
    return len(enumerate_points(X, A, budget))


def evaluate_polys(polys, points, ring):
    """Values of each polynomial at each point (``(len(points), len(polys))`` indices)."""
    pts = np.asarray(points, dtype=np.int64)
    if not polys:
        return np.zeros((len(pts), 0), dtype=np.int64)
    maxdeg = max(1, max(p.degree() for p in polys))
    powers = np.empty((ring.size, maxdeg + 1), dtype=np.int64)
    powers[:, 0] = 1
    for k in range(1, maxdeg + 1):
        powers[:, k] = ring.mul(powers[:, k - 1], np.arange(ring.size))
    return np.stack([_CompiledPoly(p, ring).evaluate(pts, powers) for p in polys], axis=1)


def restriction_to_tensor(points, A, AL, d, gen_name):
    """Send ``alpha`` in ``R(X)(A)`` to ``sum_j alpha_{i,j} t^j`` in ``X(A (x) L)``.

    ``points`` has ``n*d`` columns ordered variable-major, basis-minor.
    """
    pts = np.asarray(points, dtype=np.int64)
    count = pts.shape[0]
    n = pts.shape[1] // d if d else 0
    emb = AL.embed(A, pts).reshape(count, n, d)
    tpow = np.array([AL.monomial(**{gen_name: j}) for j in range(d)], dtype=np.int64)
    acc = np.zeros((count, n), dtype=np.int64)
    for j in range(d):
        acc = AL.add(acc, AL.mul(emb[:, :, j], tpow[j]))
    return acc


def _row_set(arr):
    return {tuple(int(x) for x in row) for row in arr}


def adjunction_bijection(X, A, restriction=None, budget=None):
    """Compare ``R(X)(A)`` with ``X(A (x) L)`` through the coordinate expansion."""
    from .scheme import Check
    from .weilres import restrict_scheme

    L = X.base
    res = restriction or restrict_scheme(X)
    AL = tensor_with(A, L)
    left = enumerate_points(res.scheme, A, budget)
    right = enumerate_points(X, AL, budget)
    image = restriction_to_tensor(left.points, A, AL, L.degree, L.name)
    witness = {"algebra": A.label, "left": len(left), "right": len(right)}
    rset = _row_set(right.points)
    for a, b in zip(left.points, image):
        if tuple(int(x) for x in b) not in rset:
            witness["not_a_point"] = [A.format(x) for x in a]
            return Check(False, witness)
    if len(_row_set(image)) != len(left):
        witness["collision"] = True
        return Check(False, witness)
    if len(left) != len(right):
        missing = sorted(rset - _row_set(image))[0]
        witness["missed"] = [AL.format(x) for x in missing]
        return Check(False, witness)
    return Check(True, witness)


def tangent_points(X, q_or_ring):
    """``X(F_q[eps])`` as pairs ``(point, tangent vector)`` of ``F_q``-coordinates."""
    if isinstance(q_or_ring, FiniteRing):
        D = q_or_ring
    else:
        q = q_or_ring
        p = _prime_of(q)
        s = round(np.log(q) / np.log(p))
        D = dual_numbers(p, s)
    pts = enumerate_points(X, D)
    q = int(round(D.size ** 0.5))
    base = pts.points % q
    tang = pts.points // q
    return D, [(tuple(int(x) for x in b), tuple(int(x) for x in v)) for b, v in zip(base, tang)]


def _prime_of(q):
    for p in range(2, q + 1):
        if q % p == 0:
            return p
    raise ValueError(q)


def jacobian_values(X, points, ring):
    """Evaluated Jacobian of the generators, shape ``(points, generators, variables)``."""
    pts = np.asarray(points, dtype=np.int64).reshape(-1, X.nvars)
    gens = list(X.generators)
    entries = [g.derivative(i) for g in gens for i in range(X.nvars)]
    if not entries:
        return np.zeros((len(pts), len(gens), X.nvars), dtype=np.int64)
    vals = evaluate_polys(entries, pts, ring)
    return vals.reshape(len(pts), len(gens), X.nvars)
