"""Brute-force reference computations, independent of the library's table machinery.

Ring elements are tuples of coefficients over F_p in the monomial basis of
F_p[g_1, ..., g_m]/(m_1(g_1), ..., m_m(g_m)); every product is expanded as a
dictionary and reduced one variable at a time.  Slow on purpose.
"""

import itertools
from fractions import Fraction


class BruteRing:
    def __init__(self, p, moduli=()):
        # moduli: sequence of (name, coefficients low to high, monic)
        self.p = p
        self.names = [n for n, _ in moduli]
        self.moduli = [tuple(c % p for c in m) for _, m in moduli]
        self.degs = [len(m) - 1 for m in self.moduli]
        self.basis = list(itertools.product(*[range(d) for d in self.degs]))
        self.size = p ** len(self.basis)

    def _reduce(self, terms):
        terms = {e: c % self.p for e, c in terms.items() if c % self.p}
        for i, (m, d) in enumerate(zip(self.moduli, self.degs)):
            while True:
                high = [e for e in terms if e[i] >= d]
                if not high:
                    break
                e = max(high, key=lambda e: e[i])
                c = terms.pop(e)
                for j in range(d):
                    f = list(e)
                    f[i] = e[i] - d + j
                    f = tuple(f)
                    terms[f] = (terms.get(f, 0) - c * m[j]) % self.p
                    if not terms[f]:
                        del terms[f]
        return tuple(terms.get(e, 0) for e in self.basis)

    def _terms(self, a):
        return {e: c for e, c in zip(self.basis, a) if c}

    def elements(self):
        return list(itertools.product(range(self.p), repeat=len(self.basis)))

    def const(self, c):
        return self._reduce({tuple(0 for _ in self.degs): c})

    def gen(self, name):
        e = tuple(1 if n == name else 0 for n in self.names)
        return self._reduce({e: 1})

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        out = {}
        for e, c in self._terms(a).items():
            for f, k in self._terms(b).items():
                g = tuple(x + y for x, y in zip(e, f))
                out[g] = out.get(g, 0) + c * k
        return self._reduce(out)

    def power(self, a, n):
        r = self.one
        for _ in range(n):
            r = self.mul(r, a)
        return r

    @property
    def zero(self):
        return tuple(0 for _ in self.basis)

    @property
    def one(self):
        return self.const(1)

    def is_unit(self, a):
        return any(self.mul(a, b) == self.one for b in self.elements())

    def is_local(self):
        nonunits = [a for a in self.elements() if not self.is_unit(a)]
        return all(not self.is_unit(self.add(a, b)) for a in nonunits for b in nonunits)


def coefficient_value(c, R, gen_name):
    """An integer or an algebra element (tuple of integers in powers of ``gen_name``)."""
    if isinstance(c, (tuple, list)):
        acc = R.zero
        g = R.gen(gen_name)
        for j, cj in enumerate(c):
            acc = R.add(acc, R.mul(R.const(_int(cj, R.p)), R.power(g, j)))
        return acc
    return R.const(_int(c, R.p))


def _int(c, p):
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, p)
    return int(c)


def evaluate(poly, point, R, gen_name="t"):
    acc = R.zero
    for exp, c in poly.terms.items():
        term = coefficient_value(c, R, gen_name)
        for x, k in zip(point, exp):
            term = R.mul(term, R.power(x, k))
        acc = R.add(acc, term)
    return acc


def points(polys, nvars, R, gen_name="t"):
    """All zeros in ``R^nvars`` of the given polynomials."""
    out = []
    for pt in itertools.product(R.elements(), repeat=nvars):
        if all(evaluate(g, pt, R, gen_name) == R.zero for g in polys):
            out.append(pt)
    return out


def count(polys, nvars, R, gen_name="t"):
    return len(points(polys, nvars, R, gen_name))


def field_moduli(p, s):
    """A monic irreducible of degree ``s`` over F_p, found by exhaustive root-free search."""
    if s == 1:
        return ()
    for tail in itertools.product(range(p), repeat=s):
        m = tail + (1,)
        if _is_irreducible(m, p):
            return (("u", m),)
    raise ValueError


def _is_irreducible(m, p):
    # degree <= 3 only: irreducible iff no root
    assert len(m) - 1 <= 3
    return all(sum(c * pow(x, i, p) for i, c in enumerate(m)) % p for x in range(p))


def matrix_rank_mod_p(rows, p):
    rows = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def det(M, add, sub, mul, zero, one):
    """Laplace expansion along the first row over any commutative ring."""
    if not M:
        return one
    total = zero
    for j in range(len(M)):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = mul(M[0][j], det(minor, add, sub, mul, zero, one))
        total = add(total, term) if j % 2 == 0 else sub(total, term)
    return total


def like(A):
    """A brute ring on the same moduli as the library ring ``A``, with an index translator."""
    R = BruteRing(A.p, A.factors)
    position = {e: i for i, e in enumerate(R.basis)}

    def translate(idx):
        out = [0] * len(R.basis)
        for c, e in zip(A.coords(int(idx)).tolist(), A.basis):
            out[position[tuple(e)]] = c
        return tuple(out)

    return R, translate
