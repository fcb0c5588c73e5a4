"""Buchberger's algorithm, reduced Groebner bases and normal forms."""

import heapq
import itertools

from .errors import DegreeBudgetExceeded
from .poly import GREVLEX, Poly

DEFAULT_DEGREE_CAP = 40


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class _Entry:
    __slots__ = ("terms", "lm", "lcinv")

    def __init__(self, terms, lm, lcinv):
        self.terms = terms
        self.lm = lm
        self.lcinv = lcinv


def _negated(k):
    """A flat tuple ordering opposite to the (possibly nested) sort key ``k``."""
    if isinstance(k, tuple):
        out = ()
        for x in k:
            out += _negated(x)
        return out
    return (-k,)


def _reduce_terms(terms, basis, key, dom, full=True):
    """Remainder of ``terms`` modulo the entries of ``basis``."""
    p = dict(terms)
    memo = {}

    def rank(m):
        r = memo.get(m)
        if r is None:
            r = memo[m] = _negated(key(m))
        return r

    heap = [(rank(m), m) for m in p]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        if m not in p:
            continue
        c = p[m]
        for g in basis:
            if _divides(g.lm, m):
                q = tuple(x - y for x, y in zip(m, g.lm))
                coef = dom.mul(c, g.lcinv)
                for e, a in g.terms.items():
                    ne = tuple(x + y for x, y in zip(e, q))
                    old = p.get(ne)
                    v = dom.sub(dom.zero if old is None else old, dom.mul(coef, a))
                    if dom.is_zero(v):
                        p.pop(ne, None)
                    else:
                        p[ne] = v
                        if old is None:
                            heapq.heappush(heap, (rank(ne), ne))
                break
        else:
            rem[m] = c
            del p[m]
            if not full:
                rem.update(p)
                break
    return rem


def _entry(terms, key, dom):
    lm = max(terms, key=key)
    return _Entry(terms, lm, dom.inv(terms[lm]))


def _spoly(f, g, dom):
    lcm = _lcm(f.lm, g.lm)
    out = {}
    for h, sign in ((f, dom.one), (g, dom.neg(dom.one))):
        q = tuple(x - y for x, y in zip(lcm, h.lm))
        coef = dom.mul(sign, h.lcinv)
        for e, a in h.terms.items():
            ne = tuple(x + y for x, y in zip(e, q))
            v = dom.add(out.get(ne, dom.zero), dom.mul(coef, a))
            if dom.is_zero(v):
                out.pop(ne, None)
            else:
                out[ne] = v
    return out


def _update(G, B, h, entries):
    """Gebauer-Moeller installation of the new basis element ``h``."""
    lh = entries[h].lm
    C = list(G)
    D = []
    while C:
        g1 = C.pop(0)
        l1 = _lcm(lh, entries[g1].lm)
        if _coprime(lh, entries[g1].lm) or not any(
                _divides(_lcm(lh, entries[g2].lm), l1) for g2 in C + D):
            D.append(g1)
    E = [(h, g) for g in D if not _coprime(lh, entries[g].lm)]
    B_new = []
    for g1, g2 in B:
        l12 = _lcm(entries[g1].lm, entries[g2].lm)
        if (_divides(lh, l12) and _lcm(entries[g1].lm, lh) != l12
                and _lcm(entries[g2].lm, lh) != l12):
            continue
        B_new.append((g1, g2))
    B_new.extend(E)
    G_new = [g for g in G if not _divides(lh, entries[g].lm)]
    G_new.append(h)
    return G_new, B_new


def buchberger(polys, order=GREVLEX, degree_cap=DEFAULT_DEGREE_CAP):
    """Reduced Groebner basis of the ideal generated by ``polys`` (list of Poly)."""
    if not polys:
        return []
    ring = polys[0].ring
    dom = ring.domain
    key = order.key
    entries = []
    G, B = [], []
    for p in polys:
        if p.is_zero():
            continue
        r = _reduce_terms(p.terms, [entries[g] for g in G], key, dom)
        if not r:
            continue
        entries.append(_entry(r, key, dom))
        G, B = _update(G, B, len(entries) - 1, entries)
        if not any(entries[len(entries) - 1].lm):
            return [ring.one()]
    while B:
        B.sort(key=lambda pr: key(_lcm(entries[pr[0]].lm, entries[pr[1]].lm)))
        g1, g2 = B.pop(0)
        lcm = _lcm(entries[g1].lm, entries[g2].lm)
        if sum(lcm) > degree_cap:
            raise DegreeBudgetExceeded(
                f"S-polynomial degree {sum(lcm)} exceeds the cap {degree_cap}")
        s = _spoly(entries[g1], entries[g2], dom)
        r = _reduce_terms(s, [entries[g] for g in G], key, dom)
        if not r:
            continue
        entries.append(_entry(r, key, dom))
        if not any(entries[-1].lm):
            return [ring.one()]
        G, B = _update(G, B, len(entries) - 1, entries)
    # minimal basis, then inter-reduce and normalise
    lms = [entries[g].lm for g in G]
    keep = [g for g, lm in zip(G, lms)
            if not any(_divides(o, lm) and (o != lm or h < g) for h, o in zip(G, lms) if h != g)]
    minimal = [entries[g] for g in keep]
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = {e: c for e, c in g.terms.items() if e != g.lm}
        tail = _reduce_terms(tail, others, key, dom)
        terms = {e: dom.mul(g.lcinv, c) for e, c in tail.items()}
        terms[g.lm] = dom.one
        reduced.append(Poly(ring, terms))
    reduced.sort(key=lambda p: key(p.leading_monomial(order)), reverse=True)
    return reduced


class GroebnerBasis:
    """A reduced Groebner basis together with the ideal it was computed from."""

    def __init__(self, generators, ring, order=GREVLEX, degree_cap=DEFAULT_DEGREE_CAP):
        self.ring = ring
        self.order = order
        self.generators = tuple(generators)
        self.basis = tuple(buchberger(list(generators), order, degree_cap))
        self._entries = [_entry(p.terms, order.key, ring.domain) for p in self.basis]
        self._dimension = None

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.ring == other.ring
                and self.basis == other.basis)

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(str(p) for p in self.basis)}])"

    @property
    def is_unit(self):
        return len(self.basis) == 1 and self.basis[0].is_constant() and not self.basis[0].is_zero()

    def normal_form(self, p):
        p = self.ring.coerce(p)
        return Poly(self.ring, _reduce_terms(p.terms, self._entries, self.order.key, self.ring.domain))

    def contains(self, p):
        return self.normal_form(p).is_zero()

    def leading_monomials(self):
        return [p.leading_monomial(self.order) for p in self.basis]

    def krull_dimension(self):
        """Size of a largest variable set independent modulo the leading ideal."""
        if self._dimension is None:
            self._dimension = _dimension_from_leading(self.leading_monomials(), self.ring.nvars,
                                                      self.is_unit)
        return self._dimension


def _dimension_from_leading(lms, n, unit):
    if unit:
        return -1
    supports = [frozenset(i for i, x in enumerate(m) if x) for m in lms]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1


def groebner(generators, ring=None, order=GREVLEX, degree_cap=DEFAULT_DEGREE_CAP):
    generators = list(generators)
    if ring is None:
        if not generators:
            raise ValueError("ring is required for an empty generator list")
        ring = generators[0].ring
    return GroebnerBasis(generators, ring, order, degree_cap)


def normal_form(p, G):
    return G.normal_form(p)


def is_unit_ideal(generators, ring=None, degree_cap=DEFAULT_DEGREE_CAP):
    return groebner(generators, ring, degree_cap=degree_cap).is_unit


def krull_dimension(G):
    return G.krull_dimension()
