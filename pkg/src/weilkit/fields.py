"""Exact base fields and monogenic etale algebras ``L = k[t]/(f)``.

Every coefficient domain exposes the same small duck-typed surface used by
the polynomial code: ``zero``, ``one``, ``add``, ``sub``, ``neg``, ``mul``,
``inv``, ``is_zero``, ``from_int``, ``convert`` and ``format``.  Values are
raw Python objects: ``Fraction`` for QQ, ``int`` in ``[0, p)`` for GF(p),
and tuples of base values (power-basis coordinates) for an etale algebra.
"""

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from . import linalg
from .errors import NotGalois, NotInvertible, NotMonic, NotSeparable, SearchExhausted

DEFAULT_HEIGHT_BOUND = 10**6


class RationalField:
    characteristic = 0
    is_finite = False
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise NotInvertible("division by zero in QQ")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def convert(self, c):
        if isinstance(c, (int, Fraction)):
            return Fraction(c)
        raise TypeError(f"cannot coerce {c!r} into QQ")

    def format(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    is_finite = True
    is_field = True
    zero = 0
    one = 1

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, isqrt(p) + 1)):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.p = p
        self.order = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise NotInvertible(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def convert(self, c):
        if isinstance(c, int):
            return c % self.p
        if isinstance(c, Fraction):
            return c.numerator * self.inv(c.denominator % self.p) % self.p
        raise TypeError(f"cannot coerce {c!r} into GF({self.p})")

    def format(self, a):
        return str(a)

    def elements(self):
        return range(self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


# -- univariate polynomials over a base field: coefficient lists, low degree first


def utrim(a, dom):
    a = list(a)
    while a and dom.is_zero(a[-1]):
        a.pop()
    return a


def uadd(a, b, dom):
    n = max(len(a), len(b))
    a = list(a) + [dom.zero] * (n - len(a))
    b = list(b) + [dom.zero] * (n - len(b))
    return utrim([dom.add(x, y) for x, y in zip(a, b)], dom)


def usub(a, b, dom):
    return uadd(a, [dom.neg(y) for y in b], dom)


def umul(a, b, dom):
    if not a or not b:
        return []
    out = [dom.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if dom.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = dom.add(out[i + j], dom.mul(x, y))
    return utrim(out, dom)


def udivmod(a, b, dom):
    a = utrim(a, dom)
    b = utrim(b, dom)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = dom.inv(b[-1])
    q = [dom.zero] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        c = dom.mul(r[-1], inv)
        shift = len(r) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = dom.sub(r[shift + i], dom.mul(c, y))
        r = utrim(r, dom)
    return utrim(q, dom), r


def umonic(a, dom):
    a = utrim(a, dom)
    if not a:
        return a
    inv = dom.inv(a[-1])
    return [dom.mul(inv, x) for x in a]


def ugcd(a, b, dom):
    a, b = utrim(a, dom), utrim(b, dom)
    while b:
        a, b = b, udivmod(a, b, dom)[1]
    return umonic(a, dom)


def uderiv(a, dom):
    return utrim([dom.mul(dom.from_int(i), c) for i, c in enumerate(a)][1:], dom)


def upowmod(a, e, m, dom):
    result = [dom.one]
    base = udivmod(a, m, dom)[1]
    while e:
        if e & 1:
            result = udivmod(umul(result, base, dom), m, dom)[1]
        base = udivmod(umul(base, base, dom), m, dom)[1]
        e >>= 1
    return result


def is_irreducible_mod_p(f, p):
    """Rabin-style test for a monic polynomial over GF(p)."""
    dom = GF(p)
    f = utrim([c % p for c in f], dom)
    d = len(f) - 1
    if d <= 0:
        return False
    x = [0, 1]
    xp = x
    for _ in range(1, d // 2 + 1):
        xp = upowmod(xp, p, f, dom)
        if len(ugcd(f, usub(xp, x, dom), dom)) > 1:
            return False
    return True


class EtaleAlgebra:
    """The algebra ``k[t]/(f)`` for a monic separable ``f``.

    Elements are tuples of ``degree`` base-field values in the power basis.
    The algebra doubles as a coefficient domain for polynomial rings.
    """

    def __init__(self, base, f, name="t"):
        coeffs = [base.convert(c) for c in f]
        coeffs = utrim(coeffs, base)
        if len(coeffs) < 2:
            raise NotMonic("the defining polynomial must have degree >= 1")
        if coeffs[-1] != base.one:
            raise NotMonic(f"leading coefficient {base.format(coeffs[-1])} is not 1")
        if len(ugcd(coeffs, uderiv(coeffs, base), base)) > 1:
            raise NotSeparable("gcd(f, f') != 1")
        self.base = base
        self.modulus = tuple(coeffs)
        self.degree = d = len(coeffs) - 1
        self.name = name
        self.characteristic = base.characteristic
        self.is_finite = base.is_finite
        self.order = base.order**d if base.is_finite else None
        self.zero = tuple([base.zero] * d)
        self.one = tuple([base.one] + [base.zero] * (d - 1))
        self.gen = tuple(base.one if j == 1 else base.zero for j in range(d)) if d > 1 else (
            base.neg(coeffs[0]),)
        # reduction_table[k] holds the coordinates of t^(d+k)
        table = []
        row = [base.neg(c) for c in coeffs[:d]]
        for _ in range(max(d - 1, 0)):
            table.append(tuple(row))
            top = row[-1]
            row = [base.zero] + row[:-1]
            row = [base.sub(r, base.mul(top, c)) for r, c in zip(row, coeffs[:d])]
        self.reduction_table = tuple(table)
        self._fast = isinstance(base, PrimeField)

    # -- domain interface

    @property
    def is_field(self):
        if self.base.is_finite:
            return is_irreducible_mod_p(self.modulus, self.base.p)
        return None

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def mul(self, a, b):
        d = self.degree
        if self._fast:
            p = self.base.p
            prod = [0] * (2 * d - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            prod[i + j] += x * y
            res = prod[:d]
            for k, c in enumerate(prod[d:]):
                if c:
                    row = self.reduction_table[k]
                    for m in range(d):
                        res[m] += c * row[m]
            return tuple(r % p for r in res)
        B = self.base
        prod = [B.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not B.is_zero(y):
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        res = prod[:d]
        for k, c in enumerate(prod[d:]):
            if not B.is_zero(c):
                row = self.reduction_table[k]
                res = [B.add(r, B.mul(c, s)) for r, s in zip(res, row)]
        return tuple(res)

    def inv(self, a):
        sol = None
        try:
            sol = linalg.solve(self.mult_matrix(a), list(self.one), self.base)
        except NotInvertible:
            sol = None
        if sol is None:
            raise NotInvertible(f"{self.format(a)} is not a unit", self.zero_divisor_witness(a))
        return tuple(sol)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def embed(self, c):
        """Image of a base-field value under ``k -> L``."""
        return tuple([c] + [self.base.zero] * (self.degree - 1))

    def convert(self, c):
        if isinstance(c, tuple):
            if len(c) != self.degree:
                raise ValueError("coordinate vector has the wrong length")
            return tuple(self.base.convert(x) for x in c)
        return self.embed(self.base.convert(c))

    def element(self, coeffs):
        """Build an element from low-to-high power-basis coordinates (padded)."""
        coeffs = list(coeffs) + [0] * (self.degree - len(coeffs))
        if len(coeffs) > self.degree:
            return self.reduce_poly(coeffs)
        return tuple(self.base.convert(c) for c in coeffs)

    def reduce_poly(self, coeffs):
        """Reduce an arbitrary univariate coefficient list modulo f."""
        B = self.base
        coeffs = [B.convert(c) for c in coeffs]
        r = udivmod(coeffs, list(self.modulus), B)[1]
        return tuple(r + [B.zero] * (self.degree - len(r)))

    def power(self, a, e):
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def evaluate(self, coeffs, a):
        """Evaluate a univariate polynomial with base coefficients at ``a``."""
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, a), self.embed(c))
        return acc

    def format(self, a):
        B = self.base
        parts = []
        for j, c in enumerate(a):
            if B.is_zero(c):
                continue
            mon = "" if j == 0 else (self.name if j == 1 else f"{self.name}^{j}")
            cs = B.format(c)
            if not mon:
                parts.append(cs)
            elif c == B.one:
                parts.append(mon)
            else:
                parts.append(f"({cs})*{mon}" if "/" in cs or "-" in cs else f"{cs}*{mon}")
        return "+".join(parts) if parts else "0"

    def elements(self):
        if not self.base.is_finite:
            raise ValueError("only finite algebras can be enumerated")
        for c in itertools.product(range(self.base.p), repeat=self.degree):
            yield tuple(c)

    # -- structure

    def mult_matrix(self, a):
        """Column j holds the coordinates of ``a * t^j``."""
        cols = []
        col = a
        for _ in range(self.degree):
            cols.append(col)
            col = self.mul(col, self.gen)
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def norm(self, a):
        return linalg.det(self.mult_matrix(a), self.base)

    def trace(self, a):
        m = self.mult_matrix(a)
        acc = self.base.zero
        for i in range(self.degree):
            acc = self.base.add(acc, m[i][i])
        return acc

    def zero_divisor_witness(self, a):
        B = self.base
        g = ugcd(utrim(list(a), B), list(self.modulus), B)
        if len(g) <= 1:
            return None
        h = udivmod(list(self.modulus), g, B)[0]
        return (tuple(g), tuple(h))

    def format_modulus(self):
        B = self.base
        parts = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if B.is_zero(c):
                continue
            mon = "" if i == 0 else (self.name if i == 1 else f"{self.name}^{i}")
            cs = B.format(c)
            neg = cs.startswith("-")
            cs = cs.lstrip("-")
            piece = cs if not mon else (mon if cs == "1" else f"{cs}*{mon}")
            parts.append(("- " if neg else "+ ") + piece)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"{self.base!r}[{self.name}]/({self.format_modulus()})"

    def __eq__(self, other):
        return isinstance(other, EtaleAlgebra) and other.base == self.base and other.modulus == self.modulus

    def __hash__(self):
        return hash((self.base, self.modulus))


def make_etale_algebra(base, f):
    return EtaleAlgebra(base, f)


def algebra_arith(L, a, b=None, op="add"):
    if op == "add":
        return L.add(a, b)
    if op == "mul":
        return L.mul(a, b)
    if op == "inv":
        return L.inv(a)
    raise ValueError(f"unknown operation {op!r}")


def mult_matrix(L, a):
    return L.mult_matrix(a)


def norm_and_trace(L, a):
    return L.norm(a), L.trace(a)


class GaloisGroup:
    """Automorphisms of ``L/k`` recorded by the images of the generator ``t``.

    Index 0 is always the identity.
    """

    def __init__(self, algebra, images):
        self.algebra = algebra
        self.images = tuple(images)
        self._powers = []
        for r in self.images:
            pw = [algebra.one]
            for _ in range(algebra.degree - 1):
                pw.append(algebra.mul(pw[-1], r))
            self._powers.append(pw)

    def __len__(self):
        return len(self.images)

    def apply(self, i, a):
        L = self.algebra
        acc = L.zero
        for c, pw in zip(a, self._powers[i]):
            if not L.base.is_zero(c):
                acc = L.add(acc, L.mul(L.embed(c), pw))
        return acc

    def index(self, image):
        return self.images.index(image)

    def compose(self, i, j):
        """Index of ``sigma_i o sigma_j``."""
        return self.index(self.apply(i, self.images[j]))

    def inverse(self, i):
        return next(j for j in range(len(self)) if self.compose(i, j) == 0)

    def is_group(self):
        try:
            for i in range(len(self)):
                for j in range(len(self)):
                    self.compose(i, j)
                self.inverse(i)
        except (ValueError, StopIteration):
            return False
        return True


def _order_roots(L, roots):
    rest = sorted(r for r in set(roots) if r != L.gen)
    return [L.gen] + rest


def galois_group(L, height_bound=None):
    """All roots of f in L, provided there are exactly ``degree`` of them."""
    if L.base.is_finite:
        if not is_irreducible_mod_p(L.modulus, L.base.p):
            raise NotGalois("f is reducible, so L is not a field")
        roots = [a for a in L.elements() if L.is_zero(L.evaluate(L.modulus, a))]
        if len(roots) != L.degree:
            raise NotGalois(f"found {len(roots)} roots of f in L, need {L.degree}")
        return GaloisGroup(L, _order_roots(L, roots))
    if height_bound is None:
        from .config import settings
        height_bound = settings.height_bound
    roots, complete = _rational_roots_in_algebra(L, height_bound)
    if len(roots) == L.degree:
        return GaloisGroup(L, _order_roots(L, roots))
    if complete:
        raise NotGalois(f"f has exactly {len(roots)} roots in L, need {L.degree}")
    raise SearchExhausted(
        f"found {len(roots)} roots with height <= {height_bound}; larger roots are not excluded")


# -- root search over QQ: p-adic lifting plus rational reconstruction


def _discriminant(f, dom):
    """Discriminant up to sign via the resultant of f and f' (Sylvester)."""
    fp = uderiv(f, dom)
    m, n = len(f) - 1, len(fp) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([dom.zero] * i + list(reversed(f)) + [dom.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([dom.zero] * i + list(reversed(fp)) + [dom.zero] * (size - n - 1 - i))
    return linalg.det(rows, dom)


def _rational_reconstruct(x, m, bound):
    """a/b == x mod m with |a|, b <= bound, or None."""
    r0, r1 = m, x % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    frac = Fraction(r1, s1)
    if (frac.numerator - x * frac.denominator) % m:
        return None
    return frac


def _a_priori_height(f):
    """Bound the height of the coordinates of any root of monic f in Q[t]/(f).

    A root is integral over Z after scaling ``t`` to clear denominators, so its
    coordinates have denominators dividing ``den * disc``; the numerators are
    bounded through Cramer's rule on the Vandermonde system and Hadamard.
    """
    den = 1
    for c in f:
        den = den * c.denominator // gcd(den, c.denominator)
    d = len(f) - 1
    g = [int(c * den ** (d - i)) for i, c in enumerate(f)]  # g(s) = den^d f(s/den)
    disc = abs(int(_discriminant([Fraction(c) for c in g], QQ)))
    root_bound = 1 + max(abs(c) for c in g[:-1])
    hadamard = (isqrt(d**d) + 1) * root_bound ** (d * (d - 1) // 2 + 1)
    coeff_bound = hadamard // max(isqrt(disc), 1) + 1
    den_bound = den * disc
    return (coeff_bound * den_bound + 1) * den ** max(d - 1, 0), disc, den


def _rational_roots_in_algebra(L, height_bound):
    f = list(L.modulus)
    d = L.degree
    bound_apriori, disc, den = _a_priori_height(f)
    bound = min(height_bound, bound_apriori)
    complete = bound_apriori <= height_bound
    p = 2
    while True:
        p += 1
        if any(p % q == 0 for q in range(2, isqrt(p) + 1)):
            continue
        if (disc * den) % p == 0 or any(c.denominator % p == 0 for c in f):
            continue
        if p**d > 10**5:
            raise SearchExhausted("no small auxiliary prime available")
        fp = [int(c.numerator * pow(c.denominator, -1, p)) % p for c in f]
        if len(ugcd(fp, uderiv(fp, GF(p)), GF(p))) == 1:
            break
    Lp = EtaleAlgebra(GF(p), fp)
    seeds = [a for a in Lp.elements() if Lp.is_zero(Lp.evaluate(Lp.modulus, a))]
    modulus = p
    while modulus <= 2 * bound * bound:
        modulus *= modulus
    roots = []
    for seed in seeds:
        lifted = _hensel_lift(f, seed, p, modulus)
        coords = [_rational_reconstruct(x, modulus, bound) for x in lifted]
        if any(c is None for c in coords):
            continue
        r = tuple(coords)
        if L.is_zero(L.evaluate(L.modulus, r)) and r not in roots:
            roots.append(r)
    return roots, complete


def _hensel_lift(f, seed, p, modulus):
    """Newton-lift a root of f in (Z/p)[t]/(f) to (Z/modulus)[t]/(f)."""
    d = len(f) - 1

    def reduce_coeffs(coeffs, mod):
        return [c.numerator * pow(c.denominator, -1, mod) % mod for c in coeffs]

    fm = reduce_coeffs(f, modulus)
    dm = reduce_coeffs([i * c for i, c in enumerate(f)][1:], modulus)

    def mul(a, b):
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k] % modulus
            if c:
                for i in range(d):
                    prod[k - d + i] -= c * fm[i]
        return [x % modulus for x in prod[:d]]

    def ev(coeffs, a):
        acc = [0] * d
        for c in reversed(coeffs):
            acc = mul(acc, a)
            acc[0] = (acc[0] + c) % modulus
        return acc

    def refine(inv, a):
        corr = [-x % modulus for x in mul(ev(dm, a), inv)]
        corr[0] = (corr[0] + 2) % modulus
        return mul(inv, corr)

    Lp = EtaleAlgebra(GF(p), reduce_coeffs(f, p))
    inv = list(Lp.inv(tuple(x % p for x in ev(dm, list(seed)))))
    r = list(seed)
    for _ in range(64):
        value = ev(fm, r)
        if not any(value):
            break
        r = [(x - y) % modulus for x, y in zip(r, mul(value, inv))]
        inv = refine(refine(inv, r), r)
    return r


def tensor_mul(L, x, y):
    """Product in ``L (x)_k L``; entry ``[a][b]`` is the coefficient of t^a (x) t^b."""
    B = L.base
    d = L.degree
    out = [[B.zero] * d for _ in range(d)]
    basis = [L.power(L.gen, j) for j in range(2 * d - 1)]
    for a1, b1 in itertools.product(range(d), repeat=2):
        c1 = x[a1][b1]
        if B.is_zero(c1):
            continue
        for a2, b2 in itertools.product(range(d), repeat=2):
            c2 = y[a2][b2]
            if B.is_zero(c2):
                continue
            c = B.mul(c1, c2)
            left, right = basis[a1 + a2], basis[b1 + b2]
            for a, la in enumerate(left):
                if B.is_zero(la):
                    continue
                for b, rb in enumerate(right):
                    if not B.is_zero(rb):
                        out[a][b] = B.add(out[a][b], B.mul(c, B.mul(la, rb)))
    return out


def tensor_one(L):
    B = L.base
    return [[B.one if a == b == 0 else B.zero for b in range(L.degree)] for a in range(L.degree)]


def tensor_split(L, G=None):
    """Orthogonal idempotents ``e_sigma`` of ``L (x)_k L``, one per automorphism.

    With the right factor written ``u = 1 (x) t``, ``L (x) L = L[u]/(f(u))`` and
    ``e_sigma`` is the Lagrange idempotent vanishing at ``u = tau(t)`` for
    ``tau != sigma``; it satisfies ``(1 (x) a - sigma(a) (x) 1) e_sigma = 0``.
    """
    if G is None:
        G = galois_group(L)
    d = L.degree
    out = []
    for s, root in enumerate(G.images):
        num = [L.one]  # polynomial in u with L coefficients
        den = L.one
        for tau, other in enumerate(G.images):
            if tau == s:
                continue
            num = umul(num, [L.neg(other), L.one], L)
            den = L.mul(den, L.sub(root, other))
        scale = L.inv(den)
        num = [L.mul(scale, c) for c in num] + [L.zero] * (d - len(num))
        out.append([[num[b][a] for b in range(d)] for a in range(d)])
    return out


def tensor_split_failures(L, E=None, G=None):
    """Violations of the idempotent identities for ``tensor_split`` output.

    Checks ``e_s^2 = e_s``, ``e_s e_r = 0`` for ``s != r``, ``sum e_s = 1`` and
    ``(1 (x) t - s(t) (x) 1) e_s = 0``.
    """
    G = G or galois_group(L)
    E = E if E is not None else tensor_split(L, G)
    B = L.base
    d = L.degree
    zero = [[B.zero] * d for _ in range(d)]
    bad = []
    for s in range(len(E)):
        for r in range(len(E)):
            prod = tensor_mul(L, E[s], E[r])
            want = E[s] if s == r else zero
            if prod != want:
                bad.append(f"e{s}*e{r}")
    total = zero
    for e in E:
        total = [[B.add(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(total, e)]
    if total != tensor_one(L):
        bad.append("sum")
    for s, e in enumerate(E):
        diag = [[B.zero] * d for _ in range(d)]
        if d > 1:
            diag[0][1] = B.one
        else:
            diag[0][0] = L.gen[0]
        root = G.images[s]
        for a in range(d):
            diag[a][0] = B.sub(diag[a][0], root[a])
        if tensor_mul(L, diag, e) != zero:
            bad.append(f"diagonal{s}")
    return bad
