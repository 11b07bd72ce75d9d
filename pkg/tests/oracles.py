"""Independent reference computations used by the tests.

Nothing here goes through the bar-complex or tree machinery of the package;
each oracle is a direct loop over small dense data.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def novikov_product(a: dict, b: dict, cutoff) -> dict:
    """Dense convolution of ``{(lam, n): c}`` dictionaries."""
    out: dict = {}
    for (l1, n1), c1 in a.items():
        for (l2, n2), c2 in b.items():
            if l1 + l2 < cutoff:
                key = (l1 + l2, n1 + n2)
                out[key] = out.get(key, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def dga_ops(elements, d, mul):
    """``m1`` and ``m2`` of a DGA written out from the sign rule, as plain dicts."""
    deg = dict(elements)
    m1 = {}
    for x, v in d.items():
        s = -1 if deg[x] % 2 else 1
        m1[(x,)] = {y: s * c for y, c in v.items()}
    m2 = {}
    for (x, y), v in mul.items():
        s = -1 if (deg[x] * (deg[y] + 1)) % 2 else 1
        m2[(x, y)] = {z: s * c for z, c in v.items()}
    return m1, m2


def _apply(table, word):
    return table.get(tuple(word), {})


def ainfty_relation(elements, ops: dict, word) -> dict:
    """``sum (-1)^{deg' of x_1..x_i} m(x_1..x_i, m(x_{i+1}..x_j), x_{j+1}..)`` for ops
    ``{k: {word: {out: c}}}`` with no energy, written as a triple loop."""
    deg = {x: d - 1 for x, d in elements}
    k = len(word)
    out: dict = {}
    for i in range(k + 1):
        for j in range(i, k + 1):
            inner = _apply(ops.get(j - i, {}), word[i:j])
            if not inner:
                continue
            s = sum(deg[a] for a in word[:i])
            sign = -1 if s % 2 else 1
            for y, c in inner.items():
                outer_word = tuple(word[:i]) + (y,) + tuple(word[j:])
                for z, e in _apply(ops.get(len(outer_word), {}), outer_word).items():
                    out[z] = out.get(z, 0) + sign * c * e
    return {z: c for z, c in out.items() if c}


def dga_relations_vanish(elements, d, mul, max_k: int = 3) -> list:
    """Words of length <= max_k (at least 1) whose relation is nonzero."""
    m1, m2 = dga_ops(elements, d, mul)
    ops = {1: m1, 2: m2}
    names = [x for x, _ in elements]
    bad = []
    for k in range(1, max_k + 1):
        for w in itertools.product(names, repeat=k):
            if ainfty_relation(elements, ops, w):
                bad.append(w)
    return bad


def matrix(lin: dict, rows: list, cols: list) -> list:
    return [[Fraction(lin.get(c, {}).get(r, 0)) for c in cols] for r in rows]


def matmul(a: list, b: list) -> list:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(m)), Fraction(0)) for j in range(p)]
            for i in range(n)]


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rank_mod(mat: list, p: int | None) -> int:
    """Row reduction over Q (p=None) or F_p, from scratch."""
    rows = [[(Fraction(x) if p is None else int(x) % p) for x in r] for r in mat]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = (1 / rows[r][c]) if p is None else pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) if p is None else (x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [(x - f * y) if p is None else (x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def simplicial_betti(simplices: list, p: int | None = None) -> tuple:
    """Betti numbers from boundary matrices built directly from vertex tuples."""
    by_dim: dict = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(tuple(s))
    top = max(by_dim)
    ranks = {}
    for k in range(1, top + 1):
        rows = {s: i for i, s in enumerate(by_dim[k - 1])}
        mat = [[0] * len(by_dim[k]) for _ in rows]
        for j, s in enumerate(by_dim[k]):
            for i in range(len(s)):
                mat[rows[s[:i] + s[i + 1:]]][j] = (-1) ** i
        ranks[k] = rank_mod(mat, p)
    return tuple(len(by_dim[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(top + 1))


def count_trees(k: int, levels: list, budget) -> dict:
    """``{energy: number of trees}`` with ``k`` leaves and energy below ``budget``.

    Brute force: pick the root level, its number of children and a composition
    of the leaves among them.  A vertex at level 0 needs at least two children.
    """
    from functools import lru_cache

    levels = tuple(Fraction(x) for x in levels)
    lam1 = levels[1] if len(levels) > 1 else None

    def compositions(n, parts):
        if parts == 0:
            if n == 0:
                yield ()
            return
        for first in range(n + 1):
            for rest in compositions(n - first, parts - 1):
                yield (first,) + rest

    @lru_cache(maxsize=None)
    def trees(k, budget):
        out = {}
        if k == 1:
            out[Fraction(0)] = 1
        for eta, lam in enumerate(levels):
            if lam >= budget:
                break
            # each leafless child costs at least lam1, which bounds the arity
            max_arity = k + (int((budget - lam) / lam1) + 1 if lam1 else 0)
            for a in range(0 if eta else 2, max_arity + 1):
                for comp in compositions(k, a):
                    if lam1 is None and 0 in comp:
                        continue
                    acc = {lam: 1}
                    for i, kk in enumerate(comp):
                        # keep room for the leafless siblings still to come
                        reserve = (lam1 or 0) * sum(1 for x in comp[i + 1:] if x == 0)
                        nxt = {}
                        for e, c in acc.items():
                            for e2, c2 in trees(kk, budget - e - reserve).items():
                                if e + e2 < budget:
                                    nxt[e + e2] = nxt.get(e + e2, 0) + c * c2
                        acc = nxt
                        if not acc:
                            break
                    for e, c in acc.items():
                        out[e] = out.get(e, 0) + c
        return out

    return trees(k, Fraction(budget))


def _matrices(T):
    cn = list(T.C.names)
    P, G, M = (matrix(m, cn, cn) for m in (T.proj, T.G, T.m1))
    return cn, P, G, M


def assert_transfer_identities(T):
    """The transfer-data equations as dense matrix identities."""
    cn, P, G, M = _matrices(T)
    n = len(cn)
    I = identity(n)
    lhs = [[I[i][j] - P[i][j] for j in range(n)] for i in range(n)]
    mg, gm = matmul(M, G), matmul(G, M)
    rhs = [[-(mg[i][j] + gm[i][j]) for j in range(n)] for i in range(n)]
    assert lhs == rhs
    assert matmul(P, P) == P
    zero = [[0] * n for _ in range(n)]
    assert matmul(G, G) == zero
    assert matmul(P, G) == zero
    hn = list(T.H.names)
    iota = matrix(T.iota, cn, hn)
    assert matmul(G, iota) == [[0] * len(hn) for _ in range(n)]
    assert matmul(P, iota) == iota
