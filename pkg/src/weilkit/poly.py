"""Sparse multivariate polynomials over an exact coefficient domain.

A polynomial is a dict from exponent tuples to nonzero raw coefficients.
Term order only matters for display and for Groebner computations, which
take an explicit :class:`MonomialOrder` (graded reverse lex by default).
"""

import itertools

from .errors import RingMismatch


class MonomialOrder:
    """A term order given by a sort key on exponent tuples (larger key wins)."""

    def __init__(self, name, key):
        self.name = name
        self.key = key

    def __repr__(self):
        return f"MonomialOrder({self.name})"


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


def _lex_key(e):
    return e


GREVLEX = MonomialOrder("grevlex", _grevlex_key)
LEX = MonomialOrder("lex", _lex_key)


def block_order(k):
    """Elimination order: grevlex on the first ``k`` variables, then grevlex on the rest."""
    def key(e):
        return (_grevlex_key(e[:k]), _grevlex_key(e[k:]))
    return MonomialOrder(f"block({k})", key)


class PolyRing:
    def __init__(self, domain, variables):
        self.domain = domain
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        self.nvars = len(self.variables)
        self._index = {v: i for i, v in enumerate(self.variables)}

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.domain == other.domain
                and self.variables == other.variables)

    def __hash__(self):
        return hash((self.domain, self.variables))

    def __repr__(self):
        return f"{self.domain!r}[{', '.join(self.variables)}]"

    def index(self, name):
        return self._index[name]

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(self.domain.one)

    def const(self, c):
        dom = self.domain
        if dom.is_zero(c):
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def from_int(self, n):
        return self.const(self.domain.from_int(n))

    def var(self, name):
        e = [0] * self.nvars
        e[self._index[name]] = 1
        return Poly(self, {tuple(e): self.domain.one})

    def gens(self):
        return [self.var(v) for v in self.variables]

    def monomial(self, exp, coeff=None):
        coeff = self.domain.one if coeff is None else coeff
        return Poly(self, {tuple(exp): coeff}) if not self.domain.is_zero(coeff) else self.zero()

    def from_terms(self, terms):
        dom = self.domain
        out = {}
        for e, c in terms:
            e = tuple(e)
            c = dom.add(out.get(e, dom.zero), c)
            if dom.is_zero(c):
                out.pop(e, None)
            else:
                out[e] = c
        return Poly(self, out)

    def parse(self, text):
        from .dsl import parse_poly
        return parse_poly(text, self)

    def coerce(self, x):
        if isinstance(x, Poly):
            if x.ring != self:
                raise RingMismatch(f"{x.ring!r} is not {self!r}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        return self.const(self.domain.convert(x))


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- arithmetic

    def _other(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch(f"cannot combine {self.ring!r} and {other.ring!r}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        dom = self.ring.domain
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = dom.add(out[e], c)
                if dom.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        dom = self.ring.domain
        return Poly(self.ring, {e: dom.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        dom = self.ring.domain
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = dom.mul(c1, c2)
                if e in out:
                    c = dom.add(out[e], c)
                    if dom.is_zero(c):
                        del out[e]
                        continue
                out[e] = c
        return Poly(self.ring, {e: c for e, c in out.items() if not dom.is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        dom = self.ring.domain
        if dom.is_zero(c):
            return self.ring.zero()
        out = {}
        for e, a in self.terms.items():
            v = dom.mul(c, a)
            if not dom.is_zero(v):
                out[e] = v
        return Poly(self.ring, out)

    # -- comparison

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.domain.zero)

    # -- structure

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, indices):
        return max((sum(e[i] for i in indices) for e in self.terms), default=-1)

    def support(self):
        """Indices of the variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return used

    def leading_monomial(self, order=GREVLEX):
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order=GREVLEX):
        return self.terms[self.leading_monomial(order)]

    def monic(self, order=GREVLEX):
        if not self.terms:
            return self
        return self.scale(self.ring.domain.inv(self.leading_coefficient(order)))

    def derivative(self, var):
        i = var if isinstance(var, int) else self.ring.index(var)
        dom = self.ring.domain
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = dom.mul(dom.from_int(e[i]), c)
                if not dom.is_zero(v):
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = v
        return Poly(self.ring, out)

    def substitute(self, images, target=None, coeff_map=None):
        """Ring homomorphism sending variable i to ``images[i]``.

        ``target`` is the codomain ring (defaults to the ring of the images);
        ``coeff_map`` carries coefficients into the target's domain.
        """
        if target is None:
            target = images[0].ring if images else self.ring
        if len(images) != self.ring.nvars:
            raise RingMismatch(f"need {self.ring.nvars} images, got {len(images)}")
        images = [target.coerce(im) for im in images]
        powers = [[target.one()] for _ in images]
        result = target.zero()
        for e, c in self.terms.items():
            if coeff_map is not None:
                c = coeff_map(c)
            term = target.const(c)
            if term.is_zero():
                continue
            for i, k in enumerate(e):
                if k:
                    pw = powers[i]
                    while len(pw) <= k:
                        pw.append(pw[-1] * images[i])
                    term = term * pw[k]
            result = result + term
        return result

    def map_coefficients(self, fn, ring):
        dom = ring.domain
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not dom.is_zero(v):
                out[e] = v
        return Poly(ring, out)

    def rename(self, ring):
        """Same terms in a ring with equally many variables."""
        if ring.nvars != self.ring.nvars:
            raise RingMismatch("variable counts differ")
        return Poly(ring, dict(self.terms))

    def evaluate(self, point, dom=None):
        """Evaluate at raw domain values (one per variable)."""
        dom = dom or self.ring.domain
        acc = dom.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                for _ in range(k):
                    term = dom.mul(term, x)
            acc = dom.add(acc, term)
        return acc

    # -- display

    def sorted_terms(self, order=GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        dom = self.ring.domain
        names = self.ring.variables
        out = []
        for e, c in self.sorted_terms():
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = dom.format(c)
            neg = False
            if cs.startswith("-") and all(ch not in cs[1:] for ch in "+-"):
                neg, cs = True, cs[1:]
            if any(ch in cs for ch in "+-/") and mon:
                cs = f"({cs})"
            if not mon:
                piece = cs
            elif cs == "1":
                piece = mon
            else:
                piece = f"{cs}*{mon}"
            out.append(("- " if neg else "+ ") + piece)
        text = " ".join(out)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"Poly({self})"


def jacobian(gens, variables):
    """Matrix of formal partial derivatives ``[dg_a/dx_i]``."""
    return [[g.derivative(v) for v in variables] for g in gens]


def poly_det(matrix, ring):
    """Determinant by cofactor expansion along the first row."""
    n = len(matrix)
    if n == 0:
        return ring.one()
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = ring.zero()
    for j in range(n):
        entry = matrix[0][j]
        if entry.is_zero():
            continue
        sub = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * poly_det(sub, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def minors(matrix, size, ring):
    """All ``size x size`` minors, zero minors dropped, duplicates removed."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if size == 0:
        return [ring.one()]
    if size > min(rows, cols):
        return []
    out = []
    seen = set()
    for rs in itertools.combinations(range(rows), size):
        for cs in itertools.combinations(range(cols), size):
            m = poly_det([[matrix[r][c] for c in cs] for r in rs], ring)
            if m and m not in seen:
                seen.add(m)
                out.append(m)
    return out


def adjugate(matrix, ring):
    n = len(matrix)
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [row[:j] + row[j + 1:] for k, row in enumerate(matrix) if k != i]
            c = poly_det(sub, ring)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj
