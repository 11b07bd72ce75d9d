"""Random and classical test inputs: DGAs, gapped homomorphisms, filtered algebras.

The filtered generator pushes an unfiltered DGA forward along a random
gapped coalgebra automorphism ``f`` with ``f_{1,0} = id``.  The resulting
operations satisfy the A-infinity relations by construction, so they make
verification inputs with nonzero ``m_0`` and many energy levels, and
``f_0(1)`` is a Maurer-Cartan element of the result.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import linalg
from .ainfty import AInfinityHom, FilteredAInfinity, from_dga, region_ok
from .complex import GradedBasis, OpFamily, accumulate, apply_total, coalgebra_word, coderivation
from .novikov import QQ, ZERO_GAP, Field, Gap, gap, monoid_closure


class DGA:
    """Plain DGA data: ``elements`` [(name, degree)], ``d`` {x: {y: c}}, ``mul`` {(x, y): {z: c}}."""

    def __init__(self, elements, d, mul, field: Field = QQ, name: str = ""):
        self.elements = list(elements)
        self.d = {x: dict(v) for x, v in d.items() if v}
        self.mul = {k: dict(v) for k, v in mul.items() if v}
        self.field = field
        self.name = name

    @property
    def basis(self) -> GradedBasis:
        return GradedBasis(self.elements)

    def degree(self, x):
        return dict(self.elements)[x]

    def to_ainfty(self, energy_cutoff=1) -> FilteredAInfinity:
        return from_dga(self.basis, self.d, self.mul, self.field, energy_cutoff, name=self.name)

    def __len__(self):
        return len(self.elements)


def _sort_sign(seq, order):
    seq = list(seq)
    s = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if order[seq[j]] > order[seq[j + 1]]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                s = -s
    return s, seq


def exterior_dga(gens: list, dgen: dict, field: Field = QQ, name: str = "") -> DGA:
    """Exterior algebra on degree-1 generators with ``d`` given on generators (values in degree 2).

    ``dgen[g]`` maps pairs ``(a, b)`` with a < b to coefficients of ``a b``.
    """
    order = {g: i for i, g in enumerate(gens)}
    monos = []
    for r in range(len(gens) + 1):
        monos.extend(itertools.combinations(gens, r))
    nm = {m: ("".join(m) if m else "1") for m in monos}
    elements = [(nm[m], len(m)) for m in monos]
    mul = {}
    for a in monos:
        for b in monos:
            if set(a) & set(b):
                continue
            s, seq = _sort_sign(a + b, order)
            mul[(nm[a], nm[b])] = {nm[tuple(seq)]: s}

    def mulv(u, v):
        out: dict = {}
        for x, c in u.items():
            for y, e in v.items():
                for z, f in mul.get((x, y), {}).items():
                    accumulate(out, z, field(c) * field(e) * f)
        return out

    def dmono(m):
        # Leibniz: d(g1...gr) = sum (-1)^{i} g1..d(gi)..gr
        out: dict = {}
        for i, g in enumerate(m):
            dg = {nm[tuple(sorted(p, key=order.get))]: c for p, c in dgen.get(g, {}).items()}
            if not dg:
                continue
            left = {nm[m[:i]]: 1}
            right = {nm[m[i + 1:]]: 1}
            term = mulv(mulv(left, dg), right)
            for z, c in term.items():
                accumulate(out, z, c if i % 2 == 0 else -c)
        return out

    d = {nm[m]: dmono(m) for m in monos}
    return DGA(elements, d, mul, field, name)


def heisenberg_dga(field: Field = QQ, a=1) -> DGA:
    """``Lambda(x, y, z)``, all of degree 1, with ``dz = a x y``."""
    return exterior_dga(["x", "y", "z"], {"z": {("x", "y"): a}}, field, "heisenberg")


def truncated_dga(n: int, field: Field = QQ) -> DGA:
    """``Lambda(y) (x) k[x]/x^n`` with ``deg x = 2``, ``deg y = 1``, ``dy = x``."""
    def xn(i):
        return "1" if i == 0 else ("x" if i == 1 else f"x{i}")

    def yxn(i):
        return "y" if i == 0 else f"y{xn(i)}"

    elements = [(xn(i), 2 * i) for i in range(n)] + [(yxn(i), 2 * i + 1) for i in range(n)]
    mul, d = {}, {}
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mul[(xn(i), xn(j))] = {xn(i + j): 1}
                mul[(xn(i), yxn(j))] = {yxn(i + j): 1}
                mul[(yxn(i), xn(j))] = {yxn(i + j): 1}
        if i + 1 < n:
            d[yxn(i)] = {xn(i + 1): 1}
    return DGA(elements, d, mul, field, f"trunc{n}")


def tensor_dga(A: DGA, B: DGA, name: str = "") -> DGA:
    """Graded tensor product with the Koszul sign."""
    F = A.field
    da, db = dict(A.elements), dict(B.elements)

    def nm(a, b):
        if a == "1":
            return b
        if b == "1":
            return a
        return f"{a}.{b}"

    elements = [(nm(a, b), da[a] + db[b]) for a, _ in A.elements for b, _ in B.elements]
    mul, d = {}, {}
    for (a1, _), (b1, _), (a2, _), (b2, _) in itertools.product(A.elements, B.elements,
                                                                  A.elements, B.elements):
        pa = A.mul.get((a1, a2), {})
        pb = B.mul.get((b1, b2), {})
        if not pa or not pb:
            continue
        s = -1 if (db[b1] * da[a2]) % 2 else 1
        out = {}
        for x, c in pa.items():
            for y, e in pb.items():
                accumulate(out, nm(x, y), F(s) * F(c) * F(e))
        if out:
            mul[(nm(a1, b1), nm(a2, b2))] = out
    for a, _ in A.elements:
        for b, _ in B.elements:
            out = {}
            for x, c in A.d.get(a, {}).items():
                accumulate(out, nm(x, b), F(c))
            s = -1 if da[a] % 2 else 1
            for y, c in B.d.get(b, {}).items():
                accumulate(out, nm(a, y), F(s) * F(c))
            if out:
                d[nm(a, b)] = out
    return DGA(elements, d, mul, F, name or f"{A.name}x{B.name}")


def product_dga(A: DGA, B: DGA, name: str = "") -> DGA:
    """Direct product ``A x B`` (componentwise operations, disjoint names)."""
    ren = lambda tag: (lambda x: f"{tag}{x}")
    ra, rb = ren("a_"), ren("b_")
    elements = [(ra(x), dg) for x, dg in A.elements] + [(rb(x), dg) for x, dg in B.elements]
    d, mul = {}, {}
    for D, r in ((A, ra), (B, rb)):
        for x, v in D.d.items():
            d[r(x)] = {r(y): c for y, c in v.items()}
        for (x, y), v in D.mul.items():
            mul[(r(x), r(y))] = {r(z): c for z, c in v.items()}
    return DGA(elements, d, mul, A.field, name or f"{A.name}+{B.name}")


def basis_change(A: DGA, rng: random.Random, rename: str = "e") -> DGA:
    """Random degree-preserving change of basis; structure constants become dense."""
    F = A.field
    by_deg: dict = {}
    for x, dg in A.elements:
        by_deg.setdefault(dg, []).append(x)
    # new basis vector j of degree dg = sum_i P[i][j] old_i
    old_of_new, new_of_old = {}, {}
    elements = []
    for dg, olds in sorted(by_deg.items()):
        n = len(olds)
        while True:
            P = [[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            if linalg.rank(P, F) == n:
                break
        Q = linalg.inverse(P, F)
        news = [f"{rename}{dg}_{j}" for j in range(n)]
        for j, nn in enumerate(news):
            old_of_new[nn] = {olds[i]: P[i][j] for i in range(n) if P[i][j]}
            elements.append((nn, dg))
        for i, o in enumerate(olds):
            new_of_old[o] = {news[j]: Q[j][i] for j in range(n) if Q[j][i]}

    def to_new(v):
        out: dict = {}
        for o, c in v.items():
            for nn, a in new_of_old[o].items():
                accumulate(out, nn, F(c) * a)
        return out

    d, mul = {}, {}
    for nn, v in old_of_new.items():
        acc: dict = {}
        for o, c in v.items():
            for y, e in A.d.get(o, {}).items():
                accumulate(acc, y, c * F(e))
        out = to_new(acc)
        if out:
            d[nn] = out
    for n1, v1 in old_of_new.items():
        for n2, v2 in old_of_new.items():
            acc = {}
            for o1, c1 in v1.items():
                for o2, c2 in v2.items():
                    for z, e in A.mul.get((o1, o2), {}).items():
                        accumulate(acc, z, c1 * c2 * F(e))
            out = to_new(acc)
            if out:
                mul[(n1, n2)] = out
    return DGA(elements, d, mul, F, A.name + "*")


def random_dga(rng: random.Random, field: Field = QQ, max_dim: int = 8, change_basis: bool = True) -> DGA:
    """A random DGA with nonzero differential and dimension at most ``max_dim`` (at least 4)."""
    if max_dim < 4:
        raise ValueError("no DGA with nonzero differential has dimension below 4 here")
    choices = []
    if max_dim >= 8:
        choices.append(lambda: heisenberg_dga(field, rng.choice([1, 2, -1, 3])))
        choices.append(lambda: exterior_dga(["a", "b", "c"], {"c": {("a", "b"): rng.choice([1, -2])}},
                                            field, "ext3"))
        choices.append(lambda: tensor_dga(truncated_dga(2, field), exterior_dga(["u"], {}, field, "u")))
    for n in range(1, max_dim // 2 + 1):
        if n >= 1:
            choices.append(lambda n=n: truncated_dga(n + 1 if 2 * (n + 1) <= max_dim else n, field))
    if max_dim >= 6:
        choices.append(lambda: product_dga(truncated_dga(2, field), exterior_dga(["u"], {}, field, "u")))
        choices.append(lambda: product_dga(exterior_dga(["u", "v"], {}, field, "uv"), truncated_dga(1, field)))
    if max_dim >= 8:
        choices.append(lambda: tensor_dga(truncated_dga(2, field), truncated_dga(2, field)))
        choices.append(lambda: product_dga(truncated_dga(2, field), exterior_dga(["u", "v"], {}, field, "uv")))
    while True:
        A = rng.choice(choices)()
        if A.d and len(A) <= max_dim:
            break
    if change_basis:
        A = basis_change(A, rng)
    return A


# ---------------------------------------------------------------------------
# gapped homomorphisms and filtered algebras


def random_gapped_family(rng: random.Random, basis: GradedBasis, classes: list, arities=(0, 1, 2),
                         density: float = 0.3, field: Field = QQ, zero_energy_higher: bool = True) -> dict:
    """Random degree-0 gapped family ``{(k, beta): {word: {name: c}}}`` without ``f_{1,0}``."""
    ops: dict = {}
    by_sdeg: dict = {}
    for x in basis:
        by_sdeg.setdefault(basis.sdeg[x], []).append(x)
    keys = [(k, b) for k in arities for b in classes if b != ZERO_GAP]
    if zero_energy_higher:
        keys += [(k, ZERO_GAP) for k in arities if k >= 2]
    for k, beta in keys:
        for w in itertools.product(basis.names, repeat=k):
            want = sum(basis.sdeg[a] for a in w) - beta.mu
            targets = by_sdeg.get(want, [])
            if not targets or rng.random() > density:
                continue
            z = rng.choice(targets)
            c = rng.choice([1, -1, 2, Fraction(1, 2), -3])
            ops.setdefault((k, beta), {}).setdefault(tuple(w), {})[z] = field(c)
    return ops


def pushforward(A0: FilteredAInfinity, fops: dict, energy_cutoff, arity_cutoff: int,
                generators) -> tuple:
    """Structure ``m'`` on the same basis making ``id + fops`` an A-infinity homomorphism A0 -> A'.

    Returns ``(A', f)``.
    """
    F = A0.field
    E = Fraction(energy_cutoff)
    K = arity_cutoff
    one = F.one
    full = dict(fops)
    full[(1, ZERO_GAP)] = {(x,): {x: one} for x in A0.basis}
    ffam = OpFamily(full, F)
    betas = {b for (_, b) in full} | {b for (_, b) in A0.ops.ops}
    monoid = monoid_closure(set(generators) | betas, E)
    lam1 = monoid.gap_energy
    sdeg = A0.basis.sdeg
    memo: dict = {}

    def budget_for(k):
        if lam1 is None:
            return E if k <= K else Fraction(0)
        return min(E, (K - k + 1) * lam1) if k <= K else Fraction(0)

    def mprime(word: tuple, budget: Fraction) -> dict:
        key = (word, budget)
        if key in memo:
            return memo[key]
        w = {(word, Fraction(0), 0): one}
        out = apply_total(ffam, coderivation(A0.ops, w, sdeg, budget), budget)
        rest = coalgebra_word(ffam, word, budget, F)
        rest.pop((word, Fraction(0), 0), None)
        for (w2, lam, n), c in rest.items():
            b2 = min(budget - lam, budget_for(len(w2)))
            if b2 <= 0:
                continue
            for (z, l2, n2), c2 in mprime(w2, b2).items():
                accumulate(out, (z, lam + l2, n + n2), -c * c2)
        memo[key] = out
        return out

    ops: dict = {}
    for k in range(K + 1):
        b = budget_for(k)
        if b <= 0:
            continue
        for word in itertools.product(A0.basis.names, repeat=k):
            for (z, lam, n), c in mprime(word, b).items():
                if region_ok(k, lam, K, lam1):
                    ops.setdefault((k, Gap(lam, 2 * n)), {}).setdefault(word, {})[z] = c
    A1 = FilteredAInfinity(A0.basis, ops, F, E, K, monoid, name=(A0.name or "A") + "'")
    f = AInfinityHom(A0, A1, full, K, name="pushforward")
    return A1, f


def random_filtered_algebra(rng: random.Random, field: Field = QQ, max_dim: int = 6,
                            generators=None, energy_cutoff=3, arity_cutoff: int = 4,
                            density: float = 0.25, dga: DGA | None = None) -> tuple:
    """A verified-by-construction gapped filtered algebra and the homomorphism that made it.

    Returns ``(A', f, A0)`` where ``f: A0 -> A'`` and ``A0`` is an unfiltered DGA.
    """
    if generators is None:
        generators = [gap(1, 0), gap(Fraction(3, 2), 2)]
    A0 = (dga or random_dga(rng, field, max_dim)).to_ainfty(energy_cutoff)
    classes = sorted(monoid_closure(generators, energy_cutoff).classes)
    fops = random_gapped_family(rng, A0.basis, classes, (0, 1, 2), density, field)
    A1, f = pushforward(A0, fops, energy_cutoff, arity_cutoff, generators)
    return A1, f, A0
