"""Gapped filtered A-infinity algebras and homomorphisms.

An algebra stores its operations per ``(k, beta)`` as field-valued sparse
tensors; the Novikov weight ``T^lam e^{mu/2}`` is implicit in ``beta``.
A finite ``arity_cutoff`` K means the data is only trusted on the region
``k + floor(lam / lam_1) <= K`` where ``lam_1`` is the smallest positive
energy of the monoid; that region is closed under every construction in
this package (each ``m_0`` insertion costs at least ``lam_1``).
``arity_cutoff=None`` means all operations are listed and the missing
ones vanish, which is the natural reading for DGAs.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import floor
from typing import Iterable, Mapping

from .complex import (
    Chain, GradedBasis, OpFamily, accumulate, apply_total, coalgebra_apply, coderivation,
    vec_add,
)
from .novikov import QQ, ZERO_GAP, Field, Gap, GapMonoid, NovElement, as_energy, monoid_closure
from .report import Report, residuals_from_vec


class RelationError(ValueError):
    """Input data violates a structural identity; ``witness`` names the failing elements."""

    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotWeakSolution(ValueError):
    def __init__(self, support: list, residual: Chain):
        super().__init__(f"Maurer-Cartan residual is supported on {support}, not on the unit alone")
        self.support = support
        self.residual = residual


class MissingOperation(ValueError):
    pass


def region_ok(k: int, lam: Fraction, arity_cutoff: int | None, lam1: Fraction | None) -> bool:
    if arity_cutoff is None:
        return True
    if lam == 0 or lam1 is None:
        return k <= arity_cutoff
    return k + floor(lam / lam1) <= arity_cutoff


def region_cutoff(k: int, energy_cutoff: Fraction, arity_cutoff: int | None,
                  lam1: Fraction | None) -> Fraction:
    """Energy bound of the trusted region for arity ``k``; nothing above it is ever reported."""
    if arity_cutoff is None or lam1 is None:
        return energy_cutoff
    return min(energy_cutoff, (arity_cutoff - k + 1) * lam1)


def min_positive(*levels) -> Fraction | None:
    vals = [x for x in levels if x is not None and x > 0]
    return min(vals) if vals else None


def _check_entries(fam: OpFamily, src: GradedBasis, tgt: GradedBasis, shift: int, what: str):
    """Homogeneity: ``deg'(out) = shift - mu + sum deg'(inputs)``."""
    for (k, beta), table in fam.ops.items():
        if not isinstance(beta, Gap):
            raise TypeError(f"{what}: gap class must be a Gap, got {beta!r}")
        for word, out in table.items():
            if len(word) != k:
                raise ValueError(f"{what}: entry {word} has arity {len(word)} in the k={k} table")
            for a in word:
                src.require(a, what)
            want = shift - beta.mu + sum(src.sdeg[a] for a in word)
            for name in out:
                tgt.require(name, what)
                if tgt.sdeg[name] != want:
                    raise ValueError(
                        f"{what}: m_{{{k},{beta}}}({','.join(word)}) -> {name} breaks homogeneity "
                        f"(shifted degree {tgt.sdeg[name]}, expected {want})")


class FilteredAInfinity:
    """Gapped filtered A-infinity algebra on a finite graded basis."""

    def __init__(self, basis: GradedBasis, ops, field: Field = QQ, energy_cutoff=1,
                 arity_cutoff: int | None = None, monoid: GapMonoid | None = None,
                 ank: tuple | None = None, name: str = ""):
        self.basis = basis
        self.field = field
        self.energy_cutoff = as_energy(energy_cutoff)
        if self.energy_cutoff <= 0:
            raise ValueError("energy cutoff must be positive")
        if arity_cutoff is not None and arity_cutoff < 0:
            raise ValueError("arity cutoff must be nonnegative")
        self.arity_cutoff = arity_cutoff
        fam = ops if isinstance(ops, OpFamily) else OpFamily(ops, field)
        fam = OpFamily({key: t for key, t in fam.ops.items() if key[1].lam < self.energy_cutoff},
                       field)
        if (0, ZERO_GAP) in fam.ops:
            raise ValueError("m_{0,(0,0)} must vanish")
        _check_entries(fam, basis, basis, 1, "operation")
        betas = fam.betas()
        if monoid is None:
            monoid = monoid_closure(betas, self.energy_cutoff)
        else:
            if monoid.cutoff != self.energy_cutoff:
                monoid = monoid.with_cutoff(self.energy_cutoff)
            stray = sorted(b for b in betas if b not in monoid)
            if stray:
                raise ValueError(f"gap classes {', '.join(map(str, stray))} are not in the monoid")
        self.monoid = monoid
        self.ops = fam
        self.ank = ank
        self.name = name
        self.verified = False

    # -- bookkeeping -------------------------------------------------------

    @property
    def lam1(self) -> Fraction | None:
        return self.monoid.gap_energy

    def complete(self, k: int, lam: Fraction) -> bool:
        return region_ok(k, lam, self.arity_cutoff, self.lam1)

    def max_relation_arity(self) -> int:
        if self.arity_cutoff is not None:
            return self.arity_cutoff
        return max(2 * self.ops.max_arity - 1, 0)

    def op(self, k: int, beta: Gap) -> dict:
        return self.ops[(k, beta)]

    def keys(self) -> list:
        return self.ops.keys()

    def m1bar(self) -> dict:
        """``m_{1,0}`` as a field-linear map ``{x: {y: c}}``."""
        return {w[0]: dict(out) for w, out in self.ops[(1, ZERO_GAP)].items()}

    def is_canonical(self) -> bool:
        return not self.ops[(1, ZERO_GAP)]

    def unfiltered(self) -> "FilteredAInfinity":
        return FilteredAInfinity(self.basis, {k: t for k, t in self.ops.ops.items() if k[1] == ZERO_GAP},
                                 self.field, self.energy_cutoff, self.arity_cutoff, name=self.name)

    def with_ops(self, ops, **kw) -> "FilteredAInfinity":
        args = dict(field=self.field, energy_cutoff=self.energy_cutoff,
                    arity_cutoff=self.arity_cutoff, monoid=self.monoid, ank=self.ank, name=self.name)
        args.update(kw)
        return FilteredAInfinity(self.basis, ops, **args)

    def restricted(self) -> "FilteredAInfinity":
        """Drop components outside the trusted region."""
        ops = {key: t for key, t in self.ops.ops.items() if self.complete(key[0], key[1].lam)}
        return self.with_ops(ops)

    def apply(self, word: Iterable[str], lam=0) -> Chain:
        """``m_*`` of a single basis word, as a Novikov chain."""
        vec = apply_total(self.ops, {(tuple(word), as_energy(lam), 0): self.field.one},
                          self.energy_cutoff)
        return Chain(self.basis, vec, self.energy_cutoff, self.field)

    def dhat(self, vec: Mapping, cutoff: Fraction | None = None) -> dict:
        E = self.energy_cutoff if cutoff is None else cutoff
        return coderivation(self.ops, vec, self.basis.sdeg, E)

    def __eq__(self, other):
        return (isinstance(other, FilteredAInfinity) and self.basis == other.basis
                and self.ops == other.ops and self.field == other.field
                and self.energy_cutoff == other.energy_cutoff
                and self.arity_cutoff == other.arity_cutoff)

    def __repr__(self):
        return (f"FilteredAInfinity(dim={len(self.basis)}, ops={len(self.ops)}, "
                f"E={self.energy_cutoff}, K={self.arity_cutoff}, field={self.field.name})")


# ---------------------------------------------------------------------------
# DGA import


def from_dga(basis: GradedBasis, d: Mapping, product: Mapping, field: Field = QQ,
             energy_cutoff=1, name: str = "") -> FilteredAInfinity:
    """Unfiltered A-infinity algebra of a DGA.

    ``d`` maps a basis name to ``{name: coeff}``; ``product`` maps a pair of
    names to ``{name: coeff}``.  Checks d^2 = 0, associativity and Leibniz.
    """
    D = {x: {y: field(c) for y, c in d.get(x, {}).items() if field(c)} for x in basis}
    P = {}
    for (x, y), out in product.items():
        o = {z: field(c) for z, c in out.items() if field(c)}
        if o:
            P[(x, y)] = o
    for x, out in D.items():
        basis.require(x, "differential")
        for y in out:
            basis.require(y, "differential")
            if basis.degree(y) != basis.degree(x) + 1:
                raise RelationError(f"d({x}) contains {y} of the wrong degree", (x,))
    for (x, y), out in P.items():
        for z in out:
            basis.require(z, "product")
            if basis.degree(z) != basis.degree(x) + basis.degree(y):
                raise RelationError(f"{x}*{y} contains {z} of the wrong degree", (x, y))

    def lin(m, v):
        out: dict = {}
        for a, c in v.items():
            for b, e in m.get(a, {}).items():
                accumulate(out, b, c * e)
        return out

    def mul(u, v):
        out: dict = {}
        for a, c in u.items():
            for b, e in v.items():
                for z, f in P.get((a, b), {}).items():
                    accumulate(out, z, c * e * f)
        return out

    one = field.one
    for x in basis:
        if lin(D, D.get(x, {})):
            raise RelationError(f"d^2 != 0 on {x}", (x,))
    for x, y in itertools.product(basis, repeat=2):
        lhs = lin(D, P.get((x, y), {}))
        rhs = mul(D.get(x, {}), {y: one})
        sign = -one if basis.degree(x) % 2 else one
        for z, c in mul({x: one}, D.get(y, {})).items():
            accumulate(rhs, z, sign * c)
        if vec_add(lhs, rhs, -1):
            raise RelationError(f"Leibniz rule fails on ({x}, {y})", (x, y))
    for x, y, z in itertools.product(basis, repeat=3):
        if vec_add(mul(P.get((x, y), {}), {z: one}), mul({x: one}, P.get((y, z), {})), -1):
            raise RelationError(f"product is not associative on ({x}, {y}, {z})", (x, y, z))

    m1, m2 = {}, {}
    for x, out in D.items():
        s = -one if basis.degree(x) % 2 else one
        if out:
            m1[(x,)] = {y: s * c for y, c in out.items()}
    for (x, y), out in P.items():
        s = -one if (basis.degree(x) * (basis.degree(y) + 1)) % 2 else one
        m2[(x, y)] = {z: s * c for z, c in out.items()}
    ops = {}
    if m1:
        ops[(1, ZERO_GAP)] = m1
    if m2:
        ops[(2, ZERO_GAP)] = m2
    A = FilteredAInfinity(basis, ops, field, energy_cutoff, None, name=name)
    A.verified = True
    return A


# ---------------------------------------------------------------------------
# relation checks


def _words(basis: GradedBasis, k: int, check_level: str, rng: random.Random, sample: int):
    if check_level == "full" or len(basis) ** k <= sample:
        return itertools.product(basis.names, repeat=k)
    return [tuple(rng.choice(basis.names) for _ in range(k)) for _ in range(sample)]


def relation_residual(A: FilteredAInfinity, word: tuple, cutoff: Fraction | None = None) -> dict:
    """``m_*(d-hat(word))`` as a chain vector, all energies below ``cutoff`` (default E)."""
    E = A.energy_cutoff if cutoff is None else cutoff
    bar = A.dhat({(tuple(word), Fraction(0), 0): A.field.one}, E)
    return apply_total(A.ops, bar, E)


def verify_ainfty(A: FilteredAInfinity, *, check_level: str = "full", seed: int = 0,
                  sample: int = 200) -> Report:
    """Residuals of ``d-hat o d-hat = 0`` on basis words, per arity and energy level."""
    rep = Report("A-infinity relations")
    rng = random.Random(seed)
    for k in range(A.max_relation_arity() + 1):
        cut = region_cutoff(k, A.energy_cutoff, A.arity_cutoff, A.lam1)
        for w in _words(A.basis, k, check_level, rng, sample):
            r = relation_residual(A, w, cut)
            if r:
                for res in residuals_from_vec(r, k, w, lambda lam, k=k: A.complete(k, lam)):
                    rep.add(res)
    if A.arity_cutoff is not None:
        rep.notes.append(f"checked on k + floor(lambda/{A.lam1}) <= {A.arity_cutoff}"
                         if A.lam1 else f"checked on k <= {A.arity_cutoff}")
    if rep.ok and check_level == "full":
        A.verified = True
    return rep.sort()


def m0_identity_residual(A: FilteredAInfinity, x: str) -> Chain:
    """``m1 m1 x + m2(m0, x) + (-1)^{deg' x} m2(x, m0)`` computed term by term.

    Deliberately independent of the coderivation code.
    """
    E = A.energy_cutoff
    one = A.field.one

    def m(k):
        comps = []
        for (kk, beta), table in A.ops.ops.items():
            if kk == k:
                comps.append((beta, table))
        return comps

    def apply(k, inputs):
        # inputs: list of chain vectors {(name, lam, n): c}
        out: dict = {}
        for beta, table in m(k):
            for combo in itertools.product(*[list(v.items()) for v in inputs]):
                names = tuple(key[0] for key, _ in combo)
                lam = beta.lam + sum((key[1] for key, _ in combo), Fraction(0))
                if lam >= E:
                    continue
                n = beta.e + sum(key[2] for key, _ in combo)
                c = one
                for _, cc in combo:
                    c = c * cc
                for z, a in table.get(names, {}).items():
                    accumulate(out, (z, lam, n), c * a)
        return out

    xv = {(x, Fraction(0), 0): one}
    m0 = apply(0, [])
    total = apply(1, [apply(1, [xv])])
    total = vec_add(total, apply(2, [m0, xv]))
    sgn = -1 if A.basis.sdeg[x] % 2 else 1
    total = vec_add(total, apply(2, [xv, m0]), sgn)
    return Chain(A.basis, total, E, A.field)


# ---------------------------------------------------------------------------
# A_{n,K}


def beta_norm(beta: Gap, monoid: GapMonoid) -> int:
    """``||beta||``: longest decomposition into nonzero classes, plus floor(lambda), minus one."""
    if beta == ZERO_GAP:
        return -1
    if beta not in monoid:
        raise ValueError(f"{beta} is not in the monoid")
    nonzero = sorted(b for b in monoid.classes if b != ZERO_GAP)
    best = {ZERO_GAP: 0}
    for b in sorted(monoid.classes, key=lambda g: (g.lam, g.mu)):
        if b == ZERO_GAP or b.lam > beta.lam:
            continue
        cand = [best[Gap(b.lam - g.lam, b.mu - g.mu)] + 1 for g in nonzero
                if g.lam <= b.lam and Gap(b.lam - g.lam, b.mu - g.mu) in best]
        if cand:
            best[b] = max(cand)
    if beta not in best:
        raise ValueError(f"{beta} has no decomposition in the monoid")
    return best[beta] + floor(beta.lam) - 1


def ank_compare(a: tuple, b: tuple, monoid: GapMonoid) -> str:
    """Compare ``(beta, k)`` pairs: returns '>', '<' or '~'."""
    na, nb = beta_norm(a[0], monoid), beta_norm(b[0], monoid)
    sa, sb = na + a[1], nb + b[1]
    if sa != sb:
        return ">" if sa > sb else "<"
    if na != nb:
        return ">" if na > nb else "<"
    return "~"


def ank_precedes(beta: Gap, k: int, n: int, K: int, monoid: GapMonoid) -> bool:
    nb = beta_norm(beta, monoid)
    return nb + k < n + K or (nb + k == n + K and nb < n)


def verify_ank(A: FilteredAInfinity, n: int, K: int, *, check_level: str = "full",
               seed: int = 0) -> Report:
    """Relation components ``(beta, k)`` with ``(beta, k) < (n, K)``; absent ops count as zero."""
    if A.ank is not None:
        n0, K0 = A.ank
        if (n, K) != (n0, K0) and not _pair_leq(n, K, n0, K0):
            raise MissingOperation(f"structure is declared A_{{{n0},{K0}}}; cannot check A_{{{n},{K}}}")
    for beta in A.monoid:
        for k in range(0, n + K + 2):
            if (beta, k) != (ZERO_GAP, 0) and ank_precedes(beta, k, n, K, A.monoid) \
                    and not A.complete(k, beta.lam):
                raise MissingOperation(
                    f"operation m_{{{k},{beta}}} is required for A_{{{n},{K}}} but lies outside the "
                    f"stored region (arity cutoff {A.arity_cutoff})")
    rep = Report(f"A_{{{n},{K}}} relations")
    rng = random.Random(seed)
    kmax = n + K + 1
    for k in range(kmax + 1):
        for w in _words(A.basis, k, check_level, rng, 200):
            r = relation_residual(A, w)
            kept = {}
            for (x, lam, e), c in r.items():
                beta = Gap(lam, 2 * e)
                if beta in A.monoid and ank_precedes(beta, k, n, K, A.monoid):
                    kept[(x, lam, e)] = c
                elif beta not in A.monoid:
                    kept[(x, lam, e)] = c
            for res in residuals_from_vec(kept, k, w, lambda lam: True):
                rep.add(res)
    return rep.sort()


def _pair_leq(n: int, K: int, n0: int, K0: int) -> bool:
    return n + K < n0 + K0 or (n + K == n0 + K0 and n <= n0)


# ---------------------------------------------------------------------------
# Maurer-Cartan


def _check_b(A: FilteredAInfinity, b: Chain) -> Fraction:
    if b.basis != A.basis:
        raise ValueError("b lives on a different basis")
    v = b.valuation()
    if v is None:
        return None
    if v <= 0:
        raise ValueError("b must have strictly positive energy valuation")
    if not b.is_homogeneous(0):
        raise ValueError("b must have shifted degree 0")
    return v


def reliable_cutoff(A: FilteredAInfinity, v: Fraction | None) -> Fraction:
    """Energy below which insertions of an element of valuation ``v`` only see trusted ops."""
    if A.arity_cutoff is None:
        return A.energy_cutoff
    m = min_positive(v, A.lam1)
    if m is None:
        return A.energy_cutoff
    return min(A.energy_cutoff, (A.arity_cutoff + 1) * m)


def exp_b(b_terms: Mapping, cutoff: Fraction, field: Field) -> dict:
    """Bar vector of ``e^b = 1 + b + b(x)b + ...`` truncated below ``cutoff``."""
    out = {((), Fraction(0), 0): field.one}
    layer = dict(out)
    items = list(b_terms.items())
    while layer:
        nxt: dict = {}
        for (w, lam, n), c in layer.items():
            for (x, l2, n2), c2 in items:
                if lam + l2 < cutoff:
                    accumulate(nxt, (w + (x,), lam + l2, n + n2), c * c2)
        for k, c in nxt.items():
            accumulate(out, k, c)
        layer = nxt
    return out


def interleave_b(word: tuple, b_terms: Mapping, cutoff: Fraction, field: Field,
                 eb: dict | None = None) -> dict:
    """``Phi^b(x_1...x_k) = e^b x_1 e^b ... x_k e^b`` truncated."""
    if eb is None:
        eb = exp_b(b_terms, cutoff, field)
    cur = dict(eb)
    for x in word:
        nxt: dict = {}
        for (w, lam, n), c in cur.items():
            for (w2, l2, n2), c2 in eb.items():
                if lam + l2 < cutoff:
                    accumulate(nxt, (w + (x,) + w2, lam + l2, n + n2), c * c2)
        cur = nxt
    return cur


def mc_residual(A: FilteredAInfinity, b: Chain) -> Chain:
    """``m_0(1) + m_1(b) + m_2(b,b) + ...``, truncated below the trusted cutoff."""
    v = _check_b(A, b)
    E = reliable_cutoff(A, v)
    vec = apply_total(A.ops, exp_b(b.terms, E, A.field), E)
    return Chain(A.basis, vec, E, A.field)


def is_mc_solution(A: FilteredAInfinity, b: Chain) -> bool:
    return not mc_residual(A, b)


def deform_by_b(A: FilteredAInfinity, b: Chain) -> FilteredAInfinity:
    """``m^b_k = m_* o Phi^b``; the monoid is enlarged by the classes of b."""
    v = _check_b(A, b)
    if v is None:
        return A
    E = A.energy_cutoff
    classes = {Gap(lam, 2 * n) for _, lam, n in b.terms}
    monoid = A.monoid.enlarged(classes)
    lam1 = monoid.gap_energy
    kmax = A.arity_cutoff if A.arity_cutoff is not None else A.ops.max_arity
    eb = exp_b(b.terms, E, A.field)
    ops: dict = {}
    for k in range(kmax + 1):
        for w in itertools.product(A.basis.names, repeat=k):
            vec = apply_total(A.ops, interleave_b(w, b.terms, E, A.field, eb), E)
            for (z, lam, n), c in vec.items():
                if region_ok(k, lam, A.arity_cutoff, lam1):
                    ops.setdefault((k, Gap(lam, 2 * n)), {}).setdefault(w, {})[z] = c
    return FilteredAInfinity(A.basis, ops, A.field, E, A.arity_cutoff, monoid, name=A.name + "^b")


def potential(A: FilteredAInfinity, b: Chain, unit: str) -> NovElement:
    """The coefficient c with ``MC(b) = c * unit``; raises NotWeakSolution otherwise."""
    A.basis.require(unit, "potential unit")
    r = mc_residual(A, b)
    support = r.support()
    if any(x != unit for x in support):
        raise NotWeakSolution([x for x in support if x != unit], r)
    return r.coefficient(unit)


# ---------------------------------------------------------------------------
# homomorphisms


class AInfinityHom:
    """Gapped family ``f_{k,beta}: B_k(source) -> target`` of degree 0."""

    def __init__(self, source: FilteredAInfinity, target: FilteredAInfinity, ops,
                 arity_cutoff: int | None = None, name: str = ""):
        if source.field != target.field:
            raise ValueError("source and target fields differ")
        self.source = source
        self.target = target
        self.field = source.field
        self.energy_cutoff = min(source.energy_cutoff, target.energy_cutoff)
        fam = ops if isinstance(ops, OpFamily) else OpFamily(ops, self.field)
        fam = OpFamily({key: t for key, t in fam.ops.items() if key[1].lam < self.energy_cutoff},
                       self.field)
        if (0, ZERO_GAP) in fam.ops:
            raise ValueError("f_{0,(0,0)} must vanish")
        for (k, beta) in fam.ops:
            if beta.lam < 0:
                raise ValueError("homomorphism components must have nonnegative energy")
        _check_entries(fam, source.basis, target.basis, 0, "homomorphism")
        self.ops = fam
        self.arity_cutoff = arity_cutoff
        self.name = name

    @property
    def lam1(self) -> Fraction | None:
        return min_positive(self.source.lam1, self.target.lam1,
                            *[b.lam for b in self.ops.betas()])

    def f1bar(self) -> dict:
        return {w[0]: dict(out) for w, out in self.ops[(1, ZERO_GAP)].items()}

    def effective_arity_cutoff(self) -> int | None:
        cuts = [c for c in (self.arity_cutoff, self.source.arity_cutoff, self.target.arity_cutoff)
                if c is not None]
        return min(cuts) if cuts else None

    def complete(self, k: int, lam: Fraction) -> bool:
        return region_ok(k, lam, self.effective_arity_cutoff(), self.lam1)

    def apply_hat(self, vec: Mapping) -> dict:
        return coalgebra_apply(self.ops, vec, self.energy_cutoff, self.field)

    def apply(self, word: Iterable[str]) -> Chain:
        vec = apply_total(self.ops, {(tuple(word), Fraction(0), 0): self.field.one},
                          self.energy_cutoff)
        return Chain(self.target.basis, vec, self.energy_cutoff, self.field)

    def __eq__(self, other):
        return isinstance(other, AInfinityHom) and self.ops == other.ops

    def __repr__(self):
        return f"AInfinityHom({len(self.source.basis)} -> {len(self.target.basis)}, ops={len(self.ops)})"


def identity_hom(A: FilteredAInfinity) -> AInfinityHom:
    one = A.field.one
    return AInfinityHom(A, A, {(1, ZERO_GAP): {(x,): {x: one} for x in A.basis}})


def _hom_max_arity(f: AInfinityHom) -> int:
    K = f.effective_arity_cutoff()
    if K is not None:
        return K
    mf = max(f.ops.max_arity, 1)
    mA = max(f.source.ops.max_arity, 1)
    mB = max(f.target.ops.max_arity, 1)
    return max(mf + mA - 1, mf * mB)


def hom_residual(f: AInfinityHom, word: tuple, cutoff: Fraction | None = None) -> dict:
    """``f_*(d-hat w) - m'_*(f-hat w)`` as a chain vector, energies below ``cutoff`` (default E)."""
    E = f.energy_cutoff if cutoff is None else cutoff
    w = {(tuple(word), Fraction(0), 0): f.field.one}
    lhs = apply_total(f.ops, coderivation(f.source.ops, w, f.source.basis.sdeg, E), E)
    rhs = apply_total(f.target.ops, coalgebra_apply(f.ops, w, E, f.field), E)
    return vec_add(lhs, rhs, -1)


def verify_homomorphism(f: AInfinityHom, A: FilteredAInfinity | None = None,
                        A2: FilteredAInfinity | None = None, *, check_level: str = "full",
                        seed: int = 0, sample: int = 200) -> Report:
    """Residuals of ``d-hat' o f-hat = f-hat o d-hat`` projected to the target, per (k, energy)."""
    if A is not None and A is not f.source and A != f.source:
        raise ValueError("homomorphism source does not match")
    if A2 is not None and A2 is not f.target and A2 != f.target:
        raise ValueError("homomorphism target does not match")
    rep = Report("A-infinity homomorphism")
    rng = random.Random(seed)
    for k in range(_hom_max_arity(f) + 1):
        cut = region_cutoff(k, f.energy_cutoff, f.effective_arity_cutoff(), f.lam1)
        for w in _words(f.source.basis, k, check_level, rng, sample):
            r = hom_residual(f, w, cut)
            if r:
                for res in residuals_from_vec(r, k, w, lambda lam, k=k: f.complete(k, lam),
                                              kind="homomorphism"):
                    rep.add(res)
    return rep.sort()


def compose_homomorphisms(f: AInfinityHom, g: AInfinityHom) -> AInfinityHom:
    """``g o f`` with ``(g o f)_k = g_* o f-hat`` on words of length k."""
    if f.target.basis != g.source.basis:
        raise ValueError("cannot compose: target of f is not the source of g")
    E = min(f.energy_cutoff, g.energy_cutoff)
    cuts = [c for c in (f.effective_arity_cutoff(), g.effective_arity_cutoff()) if c is not None]
    K = min(cuts) if cuts else None
    kmax = K if K is not None else max(f.ops.max_arity, 1) * max(g.ops.max_arity, 1)
    lam1 = min_positive(f.lam1, g.lam1)
    ops: dict = {}
    for k in range(kmax + 1):
        for w in itertools.product(f.source.basis.names, repeat=k):
            bar = coalgebra_apply(f.ops, {(w, Fraction(0), 0): f.field.one}, E, f.field)
            for (z, lam, n), c in apply_total(g.ops, bar, E).items():
                if region_ok(k, lam, K, lam1):
                    ops.setdefault((k, Gap(lam, 2 * n)), {}).setdefault(w, {})[z] = c
    return AInfinityHom(f.source, g.target, ops, K, name=f"{g.name}o{f.name}")


def hom_from_vec_table(source, target, table: Mapping, arity_cutoff=None) -> AInfinityHom:
    """Build a homomorphism from ``{word: {(name, lam, n): c}}``."""
    ops: dict = {}
    for w, vec in table.items():
        for (z, lam, n), c in vec.items():
            ops.setdefault((len(w), Gap(lam, 2 * n)), {}).setdefault(tuple(w), {})[z] = c
    return AInfinityHom(source, target, ops, arity_cutoff)


def ops_from_vec_table(table: Mapping) -> dict:
    ops: dict = {}
    for w, vec in table.items():
        for (z, lam, n), c in vec.items():
            ops.setdefault((len(w), Gap(lam, 2 * n)), {}).setdefault(tuple(w), {})[z] = c
    return ops
