"""Dense exact linear algebra over a :class:`~ainftykit.novikov.Field`.

Matrices are lists of rows.  Sizes here are desk-scale (tens of rows), so
plain Gaussian elimination is adequate.
"""

from __future__ import annotations

from .novikov import Field


def zeros(rows: int, cols: int, field: Field):
    return [[field.zero] * cols for _ in range(rows)]


def identity(n: int, field: Field):
    m = zeros(n, n, field)
    for i in range(n):
        m[i][i] = field.one
    return m


def matmul(a, b, field: Field):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols, field)
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(inner):
            x = row[k]
            if not x:
                continue
            brow = b[k]
            for j in range(cols):
                y = brow[j]
                if y:
                    orow[j] = orow[j] + x * y
    return out


def add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a, c):
    return [[x * c for x in row] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)] if a else []


def is_zero(a) -> bool:
    return all(not x for row in a for x in row)


def rref(a, field: Field):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    m = [list(r) for r in a]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = field.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                ri = m[i]
                rr = m[r]
                m[i] = [x - f * y for x, y in zip(ri, rr)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, field: Field) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a, field)[1])


def nullspace(a, field: Field, ncols: int | None = None):
    """Basis (list of column vectors) of ``{x : a x = 0}``."""
    if not a:
        n = ncols or 0
        return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    r, piv = rref(a, field)
    n = len(a[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [field.zero] * n
        v[f] = field.one
        for i, pc in enumerate(piv):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def solve(a, b, field: Field):
    """A solution ``x`` of ``a x = b`` (b a matrix), or None if inconsistent."""
    rows = len(a)
    n = len(a[0]) if a else 0
    k = len(b[0]) if b else 0
    aug = [list(a[i]) + list(b[i]) for i in range(rows)]
    r, piv = rref(aug, field)
    if any(p >= n for p in piv):
        return None
    x = zeros(n, k, field)
    for i, pc in enumerate(piv):
        for j in range(k):
            x[pc][j] = r[i][n + j]
    return x


def inverse(a, field: Field):
    n = len(a)
    x = solve(a, identity(n, field), field)
    if x is None or rank(a, field) < n:
        raise ZeroDivisionError("matrix is singular")
    return x


def column(a, j):
    return [row[j] for row in a]


def from_columns(cols, nrows: int, field: Field):
    if not cols:
        return [[] for _ in range(nrows)]
    return [[c[i] for c in cols] for i in range(nrows)]
