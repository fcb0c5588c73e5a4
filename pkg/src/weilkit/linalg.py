"""Dense linear algebra over any exact coefficient domain.

Matrices are lists of rows; entries are raw domain values.  The domain
must be a field for the elimination routines (inversion is attempted and
``NotInvertible`` propagates otherwise).
"""


def rref(matrix, dom):
    """Return ``(R, pivots)`` with R the reduced row echelon form."""
    m = [list(row) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if not dom.is_zero(m[i][c])), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = dom.inv(m[r][c])
        m[r] = [dom.mul(inv, x) for x in m[r]]
        for i in range(rows):
            if i != r and not dom.is_zero(m[i][c]):
                factor = m[i][c]
                m[i] = [dom.sub(a, dom.mul(factor, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix, dom):
    if not matrix:
        return 0
    return len(rref(matrix, dom)[1])


def det(matrix, dom):
    m = [list(row) for row in matrix]
    n = len(m)
    result = dom.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not dom.is_zero(m[i][c])), None)
        if piv is None:
            return dom.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = dom.neg(result)
        result = dom.mul(result, m[c][c])
        inv = dom.inv(m[c][c])
        for i in range(c + 1, n):
            if not dom.is_zero(m[i][c]):
                factor = dom.mul(m[i][c], inv)
                m[i] = [dom.sub(a, dom.mul(factor, b)) for a, b in zip(m[i], m[c])]
    return result


def solve(matrix, rhs, dom):
    """One solution of ``matrix @ x = rhs`` or ``None`` if inconsistent."""
    n = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, dom)
    if n in pivots:
        return None
    x = [dom.zero] * n
    for row, c in zip(red, pivots):
        x[c] = row[n]
    return x


def kernel(matrix, ncols, dom):
    """Basis of the right kernel as a list of column vectors."""
    if not matrix:
        return [[dom.one if i == j else dom.zero for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(matrix, dom)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [dom.zero] * ncols
        v[f] = dom.one
        for row, c in zip(red, pivots):
            v[c] = dom.neg(row[f])
        basis.append(v)
    return basis


def matmul(a, b, dom):
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = dom.zero
            for k in range(inner):
                if not dom.is_zero(row[k]) and not dom.is_zero(b[k][j]):
                    acc = dom.add(acc, dom.mul(row[k], b[k][j]))
            new.append(acc)
        out.append(new)
    return out
