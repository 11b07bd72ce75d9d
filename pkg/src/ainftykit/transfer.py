"""Homotopy transfer to a subcomplex by summation over decorated trees."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping

from . import linalg
from .ainfty import (
    AInfinityHom, FilteredAInfinity, verify_ainfty, verify_homomorphism,
)
from .complex import GradedBasis, accumulate
from .novikov import QQ, ZERO_GAP, Field, Gap
from .trees import LEAF, Tree, enumerate_trees


class TransferDataError(ValueError):
    def __init__(self, msg: str, where=None):
        super().__init__(msg)
        self.where = where


class TransferVerificationError(RuntimeError):
    def __init__(self, msg: str, reports):
        super().__init__(msg)
        self.reports = reports


# ---------------------------------------------------------------------------
# sparse linear maps {source: {target: c}}


def lmap_apply(m: Mapping, vec: Mapping) -> dict:
    out: dict = {}
    for x, c in vec.items():
        for y, a in m.get(x, {}).items():
            accumulate(out, y, c * a)
    return out


def lmap_compose(a: Mapping, b: Mapping) -> dict:
    """``a o b``."""
    return {x: v for x, v in ((x, lmap_apply(a, bx)) for x, bx in b.items()) if v}


def lmap_add(a: Mapping, b: Mapping, sign: int = 1) -> dict:
    out = {x: dict(v) for x, v in a.items()}
    for x, v in b.items():
        row = out.setdefault(x, {})
        for y, c in v.items():
            accumulate(row, y, c if sign > 0 else -c)
    return {x: v for x, v in out.items() if v}


def lmap_identity(names, field: Field) -> dict:
    return {x: {x: field.one} for x in names}


def lmap_clean(m: Mapping, field: Field) -> dict:
    out = {}
    for x, v in m.items():
        row: dict = {}
        for y, c in v.items():
            accumulate(row, y, field(c))
        if row:
            out[x] = row
    return out


def _to_matrix(m: Mapping, src: list, tgt: list, field: Field):
    idx = {y: i for i, y in enumerate(tgt)}
    mat = linalg.zeros(len(tgt), len(src), field)
    for j, x in enumerate(src):
        for y, c in m.get(x, {}).items():
            mat[idx[y]][j] = c
    return mat


# ---------------------------------------------------------------------------
# transfer data


class TransferData:
    """Inclusion, projection and homotopy on a finite complex.

    ``m1`` is the differential in the A-infinity sign convention (``m_{1,0}``).
    ``iota`` sends each name of ``H`` to a vector of ``C``; ``proj`` and
    ``homotopy`` are endomorphisms of ``C``.
    """

    def __init__(self, C: GradedBasis, H: GradedBasis, iota: Mapping, proj: Mapping,
                 homotopy: Mapping, m1: Mapping, field: Field = QQ, check: bool = True):
        self.C, self.H, self.field = C, H, field
        self.iota = lmap_clean(iota, field)
        self.proj = lmap_clean(proj, field)
        self.G = lmap_clean(homotopy, field)
        self.m1 = lmap_clean(m1, field)
        self.p = self._coordinates()
        if check:
            problems = self.check()
            if problems:
                raise TransferDataError("; ".join(problems[:5]), problems)

    def _coordinates(self) -> dict:
        """``p: C -> H`` with ``iota o p = Pi``; None entries mean Pi leaves span(iota)."""
        hn = list(self.H.names)
        cn = list(self.C.names)
        I = _to_matrix(self.iota, hn, cn, self.field)
        P = _to_matrix(self.proj, cn, cn, self.field)
        if not hn:
            return {}
        X = linalg.solve(I, P, self.field)
        if X is None:
            return None
        return {c: {h: X[i][j] for i, h in enumerate(hn) if X[i][j]} for j, c in enumerate(cn)}

    def check(self, side: bool = False) -> list:
        """Return the list of violated invariants (empty if all hold)."""
        F, C, H = self.field, self.C, self.H
        out = []
        for h, v in self.iota.items():
            H.require(h, "inclusion")
            for c in v:
                C.require(c, "inclusion")
                if C.degree(c) != H.degree(h):
                    out.append(f"iota({h}) has a component {c} of degree {C.degree(c)} != {H.degree(h)}")
        for name, m, shift in (("Pi", self.proj, 0), ("G", self.G, -1), ("m1", self.m1, 1)):
            for x, v in m.items():
                C.require(x, name)
                for y in v:
                    C.require(y, name)
                    if C.degree(y) != C.degree(x) + shift:
                        out.append(f"{name}({x}) has component {y} of the wrong degree")
        if out:
            return out
        hn, cn = list(H.names), list(C.names)
        I = _to_matrix(self.iota, hn, cn, F)
        if linalg.rank(I, F) != len(hn):
            out.append("iota is not injective")
        if self.p is None:
            out.append("image of Pi is not contained in span(H)")
            return out
        PP = lmap_compose(self.proj, self.proj)
        bad = _diff_witness(PP, self.proj, cn)
        if bad:
            out.append(f"Pi o Pi != Pi at {bad}")
        Pi_iota = lmap_compose(self.proj, self.iota)
        bad = _diff_witness(Pi_iota, self.iota, hn)
        if bad:
            out.append(f"Pi o iota != iota at {bad}")
        m1_iota = lmap_compose(self.m1, self.iota)
        back = lmap_compose(self.iota, lmap_compose(self.p, m1_iota))
        bad = _diff_witness(back, m1_iota, hn)
        if bad:
            out.append(f"m1(H) is not contained in span(H) at {bad}")
        lhs = lmap_add(lmap_identity(cn, F), self.proj, -1)
        rhs = lmap_add(lmap_compose(self.m1, self.G), lmap_compose(self.G, self.m1))
        rhs = {x: {y: -c for y, c in v.items()} for x, v in rhs.items()}
        bad = _diff_witness(lhs, rhs, cn)
        if bad:
            out.append(f"id - Pi != -(m1 G + G m1) at basis element {bad} (degree {C.degree(bad)})")
        GG = lmap_compose(self.G, self.G)
        if GG:
            out.append(f"G o G != 0 at {sorted(GG)[0]}")
        if side:
            PG = lmap_compose(self.proj, self.G)
            if PG:
                out.append(f"Pi o G != 0 at {sorted(PG)[0]}")
            Gi = lmap_compose(self.G, self.iota)
            if Gi:
                out.append(f"G o iota != 0 at {sorted(Gi)[0]}")
        return out

    def side_conditions(self) -> bool:
        return not lmap_compose(self.proj, self.G) and not lmap_compose(self.G, self.iota)

    def h_differential(self) -> dict:
        """``p o m1 o iota`` on H."""
        return lmap_compose(self.p, lmap_compose(self.m1, self.iota))

    def dump_parts(self) -> dict:
        return {"iota": self.iota, "proj": self.proj, "homotopy": self.G}


def _diff_witness(a: Mapping, b: Mapping, names) -> str | None:
    for x in names:
        u, v = a.get(x, {}), b.get(x, {})
        for y in set(u) | set(v):
            if u.get(y, 0) != v.get(y, 0):
                return x
    return None


def check_homotopy_equation(C: GradedBasis, proj: Mapping, G: Mapping, m1: Mapping,
                            field: Field) -> str | None:
    cn = list(C.names)
    lhs = lmap_add(lmap_identity(cn, field), proj, -1)
    rhs = lmap_add(lmap_compose(m1, G), lmap_compose(G, m1))
    rhs = {x: {y: -c for y, c in v.items()} for x, v in rhs.items()}
    return _diff_witness(lhs, rhs, cn)


def normalize_homotopy(C: GradedBasis, H: GradedBasis, iota: Mapping, proj: Mapping,
                       G_raw: Mapping, m1: Mapping, field: Field = QQ,
                       side_conditions: bool = False) -> TransferData:
    """Adjust ``G_raw`` so that ``G o G = 0`` while keeping ``id - Pi = -(m1 G + G m1)``.

    With ``side_conditions`` the result also satisfies ``Pi G = 0`` and ``G iota = 0``.
    """
    iota, proj = lmap_clean(iota, field), lmap_clean(proj, field)
    G = lmap_clean(G_raw, field)
    m1 = lmap_clean(m1, field)
    bad = check_homotopy_equation(C, proj, G, m1, field)
    if bad:
        raise TransferDataError(
            f"homotopy equation fails at basis element {bad} (degree {C.degree(bad)})", bad)
    T = TransferData(C, H, iota, proj, G, m1, field, check=False)
    done = not lmap_compose(G, G) and (not side_conditions or T.side_conditions())
    if not done:
        cn = list(C.names)
        P = lmap_add(lmap_identity(cn, field), proj, -1)
        h = {x: {y: -c for y, c in v.items()} for x, v in G.items()}
        h1 = lmap_compose(P, lmap_compose(h, P))
        h2 = lmap_compose(h1, lmap_compose(m1, h1))
        G2 = {x: {y: -c for y, c in v.items()} for x, v in h2.items()}
        T2 = TransferData(C, H, iota, proj, G2, m1, field, check=False)
        if T2.check(side=True):
            G2 = splitting_homotopy(C, proj, m1, field)
            T2 = TransferData(C, H, iota, proj, G2, m1, field, check=False)
        T = T2
    problems = T.check(side=side_conditions)
    if problems:
        raise TransferDataError("; ".join(problems), problems)
    return T


def _complement(vectors: list, ambient: list, n: int, field: Field, rng=None) -> list:
    """Vectors from ``ambient`` (optionally shuffled) extending ``vectors`` to a basis."""
    basis = [list(v) for v in vectors]
    out = []
    cand = list(ambient)
    if rng is not None:
        rng.shuffle(cand)
    r = linalg.rank(linalg.transpose(basis), field) if basis else 0
    for v in cand:
        trial = basis + [list(v)]
        r2 = linalg.rank(linalg.transpose(trial), field)
        if r2 > r:
            basis, r = trial, r2
            out.append(list(v))
    return out


def splitting_homotopy(C: GradedBasis, proj: Mapping, m1: Mapping, field: Field) -> dict:
    """A homotopy built from a splitting of the acyclic complement ``ker Pi``."""
    F = field
    cn = list(C.names)
    G: dict = {}
    # per degree: K_d = ker Pi; B_d = m1(K_{d-1}); S_d complement of ker(m1|K_d) in K_d
    by_deg = {d: C.in_degree(d) for d in C.degree_range()}

    def vec_of(col, names):
        return {names[i]: c for i, c in enumerate(col) if c}

    kernels = {}
    for d, names in by_deg.items():
        if not names:
            kernels[d] = []
            continue
        Pm = _to_matrix(proj, names, names, F)
        kernels[d] = linalg.nullspace(Pm, F, len(names))
    for d, names in by_deg.items():
        K = kernels[d]
        if not K:
            continue
        tgt = by_deg.get(d + 1, [])
        M = _to_matrix(m1, names, tgt, F) if tgt else []
        images = [linalg.column(linalg.matmul(M, [[c] for c in v], F), 0) for v in K] if tgt else []
        # choose S: subset of K mapping injectively
        S, imgs = [], []
        for v, im in zip(K, images):
            if linalg.rank(linalg.transpose(imgs + [im]), F) > len(imgs):
                S.append(v)
                imgs.append(im)
        if not S:
            continue
        # h on B_{d+1} = span(imgs): h(imgs[i]) = S[i]; extend by zero on a complement of B in C_{d+1}
        n = len(tgt)
        comp = _complement(imgs, [[F.one if i == j else F.zero for i in range(n)] for j in range(n)],
                           n, F)
        # h sends imgs -> S, comp -> 0; need h on standard basis: solve [imgs|comp] X = I
        Bmat = linalg.transpose(imgs + comp)
        inv = linalg.inverse(Bmat, F)
        for j, y in enumerate(tgt):
            coords = linalg.column(inv, j)
            val = [F.zero] * len(names)
            for i, c in enumerate(coords[:len(S)]):
                if c:
                    val = [a + c * b for a, b in zip(val, S[i])]
            v = vec_of(val, names)
            if v:
                G[y] = {x: -c for x, c in v.items()}
    # restrict to ker Pi: compose with (id - Pi) on the right
    P = lmap_add(lmap_identity(cn, F), proj, -1)
    return lmap_compose(G, P)


def hodge_transfer_data(A_or_C, m1: Mapping | None = None, field: Field | None = None, *,
                        rng: random.Random | None = None, extra_pairs: int = 0) -> TransferData:
    """Transfer data from a splitting ``C = H + B + S`` of the differential.

    ``h`` inverts ``m1: S -> B`` and vanishes on ``H + S``; ``G = -h`` and
    ``Pi = id - m1 h - h m1``.  With ``rng`` the complements are random; with
    ``extra_pairs`` that many acyclic pairs ``(s, m1 s)`` are kept inside
    ``H`` so that ``m1|H`` is nonzero.
    """
    if isinstance(A_or_C, FilteredAInfinity):
        C, m1, field = A_or_C.basis, A_or_C.m1bar(), A_or_C.field
    else:
        C = A_or_C
    F = field or QQ
    m1 = lmap_clean(m1 or {}, F)
    degs = list(C.degree_range())
    names = {d: list(C.in_degree(d)) for d in degs}

    def std(n):
        return [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]

    def mix(vecs):
        # random invertible recombination of a list of vectors
        if rng is None or len(vecs) < 2:
            return vecs
        n = len(vecs)
        while True:
            R = [[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            if linalg.rank(R, F) == n:
                break
        return [[sum((R[i][j] * vecs[j][t] for j in range(n)), F.zero) for t in range(len(vecs[0]))]
                for i in range(n)]

    def mat(d):
        src, tgt = names.get(d, []), names.get(d + 1, [])
        return _to_matrix(m1, src, tgt, F) if src and tgt else None

    def image(d, v):
        M = mat(d)
        if M is None:
            return []
        return linalg.column(linalg.matmul(M, [[c] for c in v], F), 0)

    Hv, Sv = {}, {}
    for d in degs:
        n = len(names[d])
        M = mat(d)
        Z = linalg.nullspace(M, F, n) if M is not None else std(n)
        B = []
        Mprev = mat(d - 1)
        if Mprev is not None:
            r, piv = linalg.rref(linalg.transpose(Mprev), F)
            B = [row for row in r if any(row)]
        Hv[d] = _complement(B, mix(Z), n, F)
        Sv[d] = _complement(Z, mix(std(n)), n, F)
    extra = {d: [] for d in degs}
    keepS = {}
    left = extra_pairs
    for d in degs:
        keepS[d] = []
        for s in Sv[d]:
            if left > 0 and d + 1 in names:
                extra[d].append(s)
                extra[d + 1].append(image(d, s))
                left -= 1
            else:
                keepS[d].append(s)
    h: dict = {}
    for d in degs:
        if d + 1 not in names or not names[d + 1] or not Sv[d]:
            continue
        tgt = names[d + 1]
        kept = [image(d, s) for s in keepS[d]]
        moved = [image(d, s) for s in Sv[d] if s not in keepS[d]]
        cols = kept + moved + Hv[d + 1] + Sv[d + 1]
        inv = linalg.inverse(linalg.transpose(cols), F)
        for j, y in enumerate(tgt):
            coords = linalg.column(inv, j)
            val = [F.zero] * len(names[d])
            for i, s in enumerate(keepS[d]):
                if coords[i]:
                    val = [a + coords[i] * b for a, b in zip(val, s)]
            v = {names[d][i]: c for i, c in enumerate(val) if c}
            if v:
                h[y] = v
    G = {x: {y: -c for y, c in v.items()} for x, v in h.items()}
    cn = list(C.names)
    proj = lmap_add(lmap_identity(cn, F), lmap_add(lmap_compose(m1, h), lmap_compose(h, m1)), -1)
    H_elems, iota, used = [], {}, set()
    i = 0
    for d in degs:
        for v in Hv[d] + extra[d]:
            vec = {names[d][j]: c for j, c in enumerate(v) if c}
            only = next(iter(vec)) if len(vec) == 1 else None
            if only is not None and vec[only] == F.one and only not in used:
                nm = only
            else:
                nm = f"h{d}_{i}"
            used.add(nm)
            H_elems.append((nm, d))
            iota[nm] = vec
            i += 1
    H = GradedBasis(H_elems, allow_negative=True)
    return TransferData(C, H, iota, proj, G, m1, F)


# ---------------------------------------------------------------------------
# tree evaluation


class _Evaluator:
    """Memoised ``f_Gamma`` / ``m_Gamma`` evaluation for one (A, T) pair."""

    def __init__(self, A: FilteredAInfinity, T: TransferData):
        self.A, self.T = A, T
        self.levels = A.monoid.levels
        self.iota = {h: {(c, 0): a for c, a in v.items()} for h, v in T.iota.items()}
        # m_{l,i}: list of (e exponent, table) per (arity, level index)
        self.vertex_ops: dict = {}
        for (k, beta), table in A.ops.ops.items():
            i = A.monoid.level_index(beta.lam)
            self.vertex_ops.setdefault((k, i), []).append((beta.e, table))
        self.memo: dict = {}

    def _vertex(self, tree: Tree, word: tuple) -> dict:
        """``m_{l,eta}(f_{child_1}(w_1), ..., f_{child_l}(w_l))`` as ``{(name, n): c}``."""
        ops = self.vertex_ops.get((len(tree.children), tree.eta))
        if not ops:
            return {}
        pos = 0
        vals = []
        for ch in tree.children:
            v = self.f(ch, word[pos:pos + ch.leaves])
            pos += ch.leaves
            if not v:
                return {}
            vals.append(list(v.items()))
        out: dict = {}
        for combo in itertools.product(*vals):
            names = tuple(key[0] for key, _ in combo)
            n0 = 0
            c0 = self.A.field.one
            for key, c in combo:
                n0 += key[1]
                c0 = c0 * c
            for e, table in ops:
                res = table.get(names)
                if res:
                    for z, a in res.items():
                        accumulate(out, (z, n0 + e), c0 * a)
        return out

    def f(self, tree: Tree, word: tuple) -> dict:
        if tree is LEAF:
            return self.iota[word[0]]
        key = (tree.key, word)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        for (x, n), c in self._vertex(tree, word).items():
            for y, a in self.T.G.get(x, {}).items():
                accumulate(out, (y, n), c * a)
        self.memo[key] = out
        return out

    def m(self, tree: Tree, word: tuple) -> dict:
        """Value in H coordinates."""
        p = self.T.p
        if tree is LEAF:
            src: dict = {}
            for x, c in self.T.iota[word[0]].items():
                for y, a in self.T.m1.get(x, {}).items():
                    accumulate(src, (y, 0), c * a)
        else:
            src = self._vertex(tree, word)
        out: dict = {}
        for (x, n), c in src.items():
            for h, a in p.get(x, {}).items():
                accumulate(out, (h, n), c * a)
        return out


def eval_tree(tree: Tree, inputs, T: TransferData, A: FilteredAInfinity, mode: str = "m") -> dict:
    """``m_Gamma`` (in H coordinates) or ``f_Gamma`` (in C) on a word of H names.

    The result maps ``(name, e exponent)`` to a coefficient; the energy is ``E(Gamma)``.
    """
    word = tuple(inputs)
    if len(word) != tree.leaves:
        raise ValueError(f"tree has {tree.leaves} leaves but {len(word)} inputs were given")
    ev = _Evaluator(A, T)
    if mode == "m":
        return ev.m(tree, word)
    if mode == "f":
        return ev.f(tree, word)
    raise ValueError("mode must be 'm' or 'f'")


@dataclass
class CanonicalModelResult:
    algebra: FilteredAInfinity
    hom: AInfinityHom
    data: TransferData
    ledger: dict = field(default_factory=dict)
    trees: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    def ledger_sum(self, mode: str = "m") -> dict:
        """Reassemble ``{(k, beta): {word: {name: c}}}`` from the ledger."""
        ops: dict = {}
        for key, entry in self.ledger.items():
            E = entry["energy"]
            for w, vec in entry[mode].items():
                for (z, n), c in vec.items():
                    row = ops.setdefault((len(w), Gap(E, 2 * n)), {}).setdefault(w, {})
                    accumulate(row, z, c)
        ops = {k: {w: r for w, r in t.items() if r} for k, t in ops.items()}
        return {k: t for k, t in ops.items() if t}


def transfer(A: FilteredAInfinity, T: TransferData, *, arity_cutoff: int | None = None,
             verify: bool = True, keep_ledger: bool = True, check_level: str = "full") -> CanonicalModelResult:
    """Canonical-model style transfer of ``A`` to ``T.H``."""
    if T.C != A.basis:
        raise ValueError("transfer data lives on a different complex")
    if T.m1 != A.m1bar():
        raise TransferDataError("transfer data differential differs from m_{1,0} of the algebra")
    K = arity_cutoff if arity_cutoff is not None else A.arity_cutoff
    if K is None:
        raise ValueError("an arity cutoff is required to truncate the transferred structure")
    if A.arity_cutoff is not None and K > A.arity_cutoff:
        K = A.arity_cutoff
    E = A.energy_cutoff
    ev = _Evaluator(A, T)
    mops: dict = {}
    fops: dict = {}
    ledger: dict = {}
    trees: dict = {}
    Hn = T.H.names
    for k in range(K + 1):
        for tree, energy in enumerate_trees(k, A.monoid, E, K):
            trees[tree.key] = (tree, energy)
            entry = {"energy": energy, "m": {}, "f": {}}
            for w in itertools.product(Hn, repeat=k):
                mv = ev.m(tree, w)
                fv = ev.f(tree, w)
                if mv:
                    for (z, n), c in mv.items():
                        row = mops.setdefault((k, Gap(energy, 2 * n)), {}).setdefault(w, {})
                        accumulate(row, z, c)
                    if keep_ledger:
                        entry["m"][w] = mv
                if fv:
                    for (z, n), c in fv.items():
                        row = fops.setdefault((k, Gap(energy, 2 * n)), {}).setdefault(w, {})
                        accumulate(row, z, c)
                    if keep_ledger:
                        entry["f"][w] = fv
            if keep_ledger:
                ledger[tree.key] = entry
    mops = {k: {w: r for w, r in t.items() if r} for k, t in mops.items()}
    fops = {k: {w: r for w, r in t.items() if r} for k, t in fops.items()}
    mops = {k: t for k, t in mops.items() if t}
    fops = {k: t for k, t in fops.items() if t}
    A2 = FilteredAInfinity(T.H, mops, A.field, E, K, A.monoid, name=(A.name + "'") if A.name else "")
    f = AInfinityHom(A2, A, fops, K, name="transfer")
    res = CanonicalModelResult(A2, f, T, ledger, trees)
    if verify:
        r1 = verify_ainfty(A2, check_level=check_level)
        r2 = verify_homomorphism(f, check_level=check_level)
        res.reports = [r1, r2]
        if not (r1.ok and r2.ok):
            raise TransferVerificationError(
                "transferred structure failed verification:\n" + r1.render() + "\n" + r2.render(),
                [r1, r2])
    return res


# ---------------------------------------------------------------------------
# independent low-arity oracle


def oracle_transfer_low_arity(A: FilteredAInfinity, T: TransferData, k: int) -> dict:
    """``m'_k`` for an unfiltered algebra by the explicit formulas up to k = 3.

    Returns ``{word: {h: c}}``.  Written against dense per-word loops and not
    the tree machinery.
    """
    if k > 3 or k < 0:
        raise ValueError("the oracle covers 0 <= k <= 3")
    if any(beta != ZERO_GAP for (_, beta) in A.ops.ops):
        raise ValueError("the oracle is for unfiltered algebras")
    F = A.field
    ops = {kk: t for (kk, _), t in A.ops.ops.items()}

    def mk(n, vecs):
        out: dict = {}
        table = ops.get(n, {})
        for combo in itertools.product(*[list(v.items()) for v in vecs]):
            names = tuple(x for x, _ in combo)
            c = F.one
            for _, a in combo:
                c = c * a
            for z, a in table.get(names, {}).items():
                accumulate(out, z, c * a)
        return out

    def lin(m, v):
        out: dict = {}
        for x, c in v.items():
            for y, a in m.get(x, {}).items():
                accumulate(out, y, c * a)
        return out

    result = {}
    for w in itertools.product(T.H.names, repeat=k):
        xs = [T.iota[h] for h in w]
        if k == 0:
            val = {}
        elif k == 1:
            val = lin(T.m1, xs[0])
        elif k == 2:
            val = mk(2, xs)
        else:
            a = lin(T.G, mk(2, xs[:2]))
            b = lin(T.G, mk(2, xs[1:]))
            val = mk(3, xs)
            for z, c in mk(2, [a, xs[2]]).items():
                accumulate(val, z, c)
            for z, c in mk(2, [xs[0], b]).items():
                accumulate(val, z, c)
        hv = lin(T.p, val)
        if hv:
            result[w] = hv
    return result


def transferred_tensor(res: CanonicalModelResult, k: int) -> dict:
    """Energy-zero ``m'_k`` as ``{word: {h: c}}``."""
    return {w: dict(v) for w, v in res.algebra.ops[(k, ZERO_GAP)].items()}
