"""Gapped filtered A-infinity bimodules and their homomorphisms.

A bimodule word is a triple ``(x, y, z)``: a word ``x`` in the left
algebra, one module letter ``y`` and a word ``z`` in the right algebra.
Vectors are keyed by ``((x, y, z), lam, n)`` as elsewhere.  The stored
operation ``n_{k1,k0,beta}`` sends ``(x, y, z)`` with ``|x| = k1``,
``|z| = k0`` to the module, and a finite arity cutoff K trusts the
components with ``k1 + k0 + 1 + floor(lam / lam_1) <= K``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .ainfty import (
    AInfinityHom, FilteredAInfinity, RelationError, _check_b, deform_by_b, exp_b, interleave_b,
    min_positive, region_ok,
)
from .complex import Chain, GradedBasis, accumulate, coalgebra_apply, coderivation
from .novikov import QQ, ZERO_GAP, Field, Gap, as_energy
from .report import Report, residuals_from_vec


class EnergyLossError(ValueError):
    def __init__(self, msg: str, index):
        super().__init__(msg)
        self.index = index


def bimodule_word_label(x: tuple, y: str, z: tuple) -> tuple:
    return tuple(x) + (f"<{y}>",) + tuple(z)


def _index_ops(ops: Mapping, field: Field) -> dict:
    """``{(k1, k0): [(beta, table)]}`` with zero entries dropped."""
    out: dict = {}
    for (k1, k0, beta), table in ops.items():
        clean = {}
        for w, o in table.items():
            o = {z: field(c) for z, c in o.items() if field(c)}
            if o:
                clean[tuple(w[0]), w[1], tuple(w[2])] = o
        if clean:
            out.setdefault((k1, k0), []).append((beta, clean))
    return out


class FilteredBimodule:
    """Operations ``n_{k1,k0,beta}: B_{k1}(C1[1]) (x) D[1] (x) B_{k0}(C0[1]) -> D[1]``."""

    def __init__(self, basis: GradedBasis, left: FilteredAInfinity, right: FilteredAInfinity,
                 ops: Mapping, field: Field = QQ, energy_cutoff=None,
                 arity_cutoff: int | None = None, name: str = ""):
        if left.field != field or right.field != field:
            raise ValueError("field mismatch between bimodule and algebras")
        self.basis = basis
        self.left = left
        self.right = right
        self.field = field
        E = min(left.energy_cutoff, right.energy_cutoff)
        self.energy_cutoff = min(E, as_energy(energy_cutoff)) if energy_cutoff is not None else E
        self.arity_cutoff = arity_cutoff
        self.name = name
        table: dict = {}
        for (k1, k0, beta), t in ops.items():
            if not isinstance(beta, Gap):
                raise TypeError("gap class must be a Gap")
            if beta.lam >= self.energy_cutoff:
                continue
            for (x, y, z), out in t.items():
                if len(x) != k1 or len(z) != k0:
                    raise ValueError(f"entry {(x, y, z)} does not have arities ({k1}, {k0})")
                for a in x:
                    left.basis.require(a, "bimodule left word")
                for a in z:
                    right.basis.require(a, "bimodule right word")
                basis.require(y, "bimodule")
                want = (1 - beta.mu + basis.sdeg[y] + sum(left.basis.sdeg[a] for a in x)
                        + sum(right.basis.sdeg[a] for a in z))
                for o in out:
                    basis.require(o, "bimodule output")
                    if basis.sdeg[o] != want:
                        raise ValueError(f"n_{{{k1},{k0},{beta}}}{(x, y, z)} -> {o} breaks homogeneity")
            table[(k1, k0, beta)] = t
        self.ops = table
        self._index = _index_ops(table, field)
        self.lam1 = min_positive(left.lam1, right.lam1, *[b.lam for (_, _, b) in table])

    def max_total_arity(self) -> int:
        return max((k1 + k0 for (k1, k0) in self._index), default=0)

    def complete(self, k1: int, k0: int, lam) -> bool:
        ok = region_ok(k1 + k0 + 1, lam, self.arity_cutoff, self.lam1)
        if self.left.arity_cutoff is not None:
            ok = ok and region_ok(k1, lam, self.left.arity_cutoff, self.lam1)
        if self.right.arity_cutoff is not None:
            ok = ok and region_ok(k0, lam, self.right.arity_cutoff, self.lam1)
        return ok

    def max_relation_arity(self) -> int:
        """Bound on ``k1 + k0`` beyond which every relation component vanishes or is untrusted."""
        if self.arity_cutoff is not None:
            return self.arity_cutoff - 1
        mn = self.max_total_arity()
        ma = max(self.left.ops.max_arity, self.right.ops.max_arity, 1)
        return mn + max(ma - 1, mn)

    def apply(self, vec: Mapping, cutoff: Fraction | None = None) -> dict:
        """``n_{*,*}`` on a bimodule bar vector; returns a module chain vector."""
        E = self.energy_cutoff if cutoff is None else cutoff
        out: dict = {}
        for ((x, y, z), lam, n), c in vec.items():
            for beta, table in self._index.get((len(x), len(z)), ()):
                l2 = lam + beta.lam
                if l2 >= E:
                    continue
                for o, a in table.get((x, y, z), {}).items():
                    accumulate(out, (o, l2, n + beta.e), c * a)
        return out

    def dhat(self, vec: Mapping, cutoff: Fraction | None = None) -> dict:
        """The coderivation ``d-hat_n`` on ``B(C1[1]) (x) D[1] (x) B(C0[1])``."""
        E = self.energy_cutoff if cutoff is None else cutoff
        L, R = self.left, self.right
        out: dict = {}
        for ((x, y, z), lam, n), c in vec.items():
            for (x2, l2, n2), c2 in coderivation(L.ops, {(x, lam, n): c}, L.basis.sdeg, E).items():
                accumulate(out, ((x2, y, z), l2, n2), c2)
            s = 0
            for i in range(len(x) + 1):
                if i:
                    s += L.basis.sdeg[x[i - 1]]
                for j in range(len(z) + 1):
                    inner = self.apply({((x[i:], y, z[:j]), lam, n): c}, E)
                    for (o, l2, n2), c2 in inner.items():
                        accumulate(out, ((x[:i], o, z[j:]), l2, n2), -c2 if s % 2 else c2)
            s = sum(L.basis.sdeg[a] for a in x) + self.basis.sdeg[y]
            for (z2, l2, n2), c2 in coderivation(R.ops, {(z, lam, n): c}, R.basis.sdeg, E).items():
                accumulate(out, ((x, y, z2), l2, n2), -c2 if s % 2 else c2)
        return out

    def words(self, total: int):
        for k1 in range(total + 1):
            k0 = total - k1
            for x in itertools.product(self.left.basis.names, repeat=k1):
                for y in self.basis:
                    for z in itertools.product(self.right.basis.names, repeat=k0):
                        yield x, y, z

    def __repr__(self):
        return f"FilteredBimodule(dim={len(self.basis)}, ops={len(self.ops)}, E={self.energy_cutoff})"


def bimodule_relation_residual(D: FilteredBimodule, x: tuple, y: str, z: tuple) -> dict:
    one = D.field.one
    return D.apply(D.dhat({((tuple(x), y, tuple(z)), Fraction(0), 0): one}))


def verify_bimodule(D: FilteredBimodule) -> Report:
    """Residuals of ``d-hat_n o d-hat_n = 0`` projected to the module."""
    rep = Report("bimodule relations")
    for total in range(D.max_relation_arity() + 1):
        for x, y, z in D.words(total):
            r = bimodule_relation_residual(D, x, y, z)
            if r:
                keep = lambda lam, x=x, z=z: D.complete(len(x), len(z), lam)
                for res in residuals_from_vec(r, total, bimodule_word_label(x, y, z), keep, "bimodule"):
                    rep.add(res)
    return rep.sort()


def n00_identity_residual(D: FilteredBimodule, y: str) -> Chain:
    """``n00 n00 y + n10(m0(1), y) + (-1)^{deg' y} n01(y, m0(1))``, written out directly."""
    E = D.energy_cutoff
    one = D.field.one

    def n(k1, k0, x, yy, z):
        out: dict = {}
        for beta, table in D._index.get((k1, k0), ()):
            for o, a in table.get((x, yy, z), {}).items():
                accumulate(out, (o, beta.lam, beta.e), a)
        return out

    def m0(A):
        out = []
        for (k, beta), table in A.ops.items():
            if k == 0:
                for o, a in table.get((), {}).items():
                    out.append((o, beta.lam, beta.e, a))
        return out

    total: dict = {}
    for (o, lam, e), c in n(0, 0, (), y, ()).items():
        for (o2, l2, e2), c2 in n(0, 0, (), o, ()).items():
            if lam + l2 < E:
                accumulate(total, (o2, lam + l2, e + e2), c * c2)
    for (a, lam, e, c) in m0(D.left):
        for (o, l2, e2), c2 in n(1, 0, (a,), y, ()).items():
            if lam + l2 < E:
                accumulate(total, (o, lam + l2, e + e2), c * c2)
    sign = -one if D.basis.sdeg[y] % 2 else one
    for (a, lam, e, c) in m0(D.right):
        for (o, l2, e2), c2 in n(0, 1, (), y, (a,)).items():
            if lam + l2 < E:
                accumulate(total, (o, lam + l2, e + e2), sign * c * c2)
    return Chain(D.basis, total, E, D.field)


# ---------------------------------------------------------------------------
# constructions


def regular_bimodule(A: FilteredAInfinity) -> FilteredBimodule:
    """``A`` as a bimodule over itself, ``n_{k1,k0} = m_{k1+k0+1}``."""
    ops: dict = {}
    for (k, beta), table in A.ops.items():
        for w, out in table.items():
            for i in range(k):
                ops.setdefault((i, k - 1 - i, beta), {})[(w[:i], w[i], w[i + 1:])] = dict(out)
    return FilteredBimodule(A.basis, A, A, ops, A.field, A.energy_cutoff, A.arity_cutoff,
                            name=f"reg({A.name})")


def from_dg_bimodule(basis: GradedBasis, left: FilteredAInfinity, right: FilteredAInfinity,
                     d: Mapping, left_action: Mapping, right_action: Mapping,
                     field: Field = QQ, name: str = "") -> FilteredBimodule:
    """Bimodule of a DG bimodule, with the same signs as the DGA import.

    ``left_action[(a, y)]`` and ``right_action[(y, a)]`` are ``{name: coeff}``.
    """
    one = field.one

    def sgn(e):
        return -one if e % 2 else one

    n00, n10, n01 = {}, {}, {}
    for y, out in d.items():
        if out:
            n00[((), y, ())] = {o: sgn(basis.degree(y)) * field(c) for o, c in out.items()}
    for (a, y), out in left_action.items():
        s = sgn(left.basis.degree(a) * (basis.degree(y) + 1))
        if out:
            n10[((a,), y, ())] = {o: s * field(c) for o, c in out.items()}
    for (y, a), out in right_action.items():
        s = sgn(basis.degree(y) * (right.basis.degree(a) + 1))
        if out:
            n01[((), y, (a,))] = {o: s * field(c) for o, c in out.items()}
    ops = {}
    for key, t in (((0, 0, ZERO_GAP), n00), ((1, 0, ZERO_GAP), n10), ((0, 1, ZERO_GAP), n01)):
        if t:
            ops[key] = t
    D = FilteredBimodule(basis, left, right, ops, field, name=name)
    rep = verify_bimodule(D)
    if not rep.ok:
        bad = rep.lowest()
        raise RelationError(f"not a DG bimodule: {bad.render()}", bad.word)
    return D


def deform_bimodule(D: FilteredBimodule, b0: Chain, b1: Chain) -> FilteredBimodule:
    """``n^{b0,b1}(x, y, z) = n_{*,*}(Phi^{b1}(x) (x) y (x) Phi^{b0}(z))`` over the deformed algebras."""
    v0 = _check_b(D.right, b0)
    v1 = _check_b(D.left, b1)
    if v0 is None and v1 is None:
        return D
    E = D.energy_cutoff
    F = D.field
    L = deform_by_b(D.left, b1)
    R = deform_by_b(D.right, b0)
    lam1 = min_positive(D.lam1, v0, v1)
    eb1, eb0 = exp_b(b1.terms, E, F), exp_b(b0.terms, E, F)
    kmax = D.arity_cutoff - 1 if D.arity_cutoff is not None else D.max_total_arity()
    ops: dict = {}
    for total in range(kmax + 1):
        for x, y, z in D.words(total):
            px = interleave_b(x, b1.terms, E, F, eb1)
            pz = interleave_b(z, b0.terms, E, F, eb0)
            vec: dict = {}
            for (wx, lx, nx), cx in px.items():
                for (wz, lz, nz), cz in pz.items():
                    if lx + lz < E:
                        accumulate(vec, ((wx, y, wz), lx + lz, nx + nz), cx * cz)
            for (o, lam, n), c in D.apply(vec).items():
                if region_ok(total + 1, lam, D.arity_cutoff, lam1):
                    ops.setdefault((len(x), len(z), Gap(lam, 2 * n)), {}).setdefault((x, y, z), {})[o] = c
    return FilteredBimodule(D.basis, L, R, ops, F, E, D.arity_cutoff, name=D.name + "^b")


def deformed_differential(D: FilteredBimodule, b0: Chain, b1: Chain) -> dict:
    """``n00^{b0,b1}`` as ``{y: {(o, lam, n): c}}``."""
    Db = deform_bimodule(D, b0, b1)
    one = D.field.one
    return {y: Db.apply({(((), y, ()), Fraction(0), 0): one}) for y in D.basis}


def square_of_deformed_differential(D: FilteredBimodule, b0: Chain, b1: Chain) -> Report:
    """Residual of ``n00^{b0,b1} o n00^{b0,b1}`` per module basis element."""
    Db = deform_bimodule(D, b0, b1)
    one = D.field.one
    rep = Report("deformed differential squared")
    for y in D.basis:
        first = Db.apply({(((), y, ()), Fraction(0), 0): one})
        second = Db.apply({(((), o, ()), lam, n): c for (o, lam, n), c in first.items()})
        if second:
            keep = lambda lam: Db.complete(0, 0, lam)
            for res in residuals_from_vec(second, 0, (f"<{y}>",), keep, "n00^b o n00^b"):
                rep.add(res)
    return rep.sort()


# ---------------------------------------------------------------------------
# homomorphisms


class BimoduleHom:
    """``phi_{k1,k0,beta'}`` over algebra homomorphisms ``f1`` (left) and ``f0`` (right).

    ``beta'`` may have negative energy down to ``-energy_loss``.
    """

    def __init__(self, source: FilteredBimodule, target: FilteredBimodule, ops: Mapping,
                 f1: AInfinityHom, f0: AInfinityHom, energy_loss=0, name: str = ""):
        self.source = source
        self.target = target
        self.f1 = f1
        self.f0 = f0
        self.field = source.field
        self.energy_loss = as_energy(energy_loss)
        if f1.source.basis != source.left.basis or f1.target.basis != target.left.basis:
            raise ValueError("left homomorphism does not match the bimodule algebras")
        if f0.source.basis != source.right.basis or f0.target.basis != target.right.basis:
            raise ValueError("right homomorphism does not match the bimodule algebras")
        E = min(source.energy_cutoff, target.energy_cutoff)
        self.energy_cutoff = E
        for (k1, k0, beta), t in ops.items():
            if not t:
                continue
            if beta.lam < -self.energy_loss:
                raise EnergyLossError(
                    f"phi_{{{k1},{k0},{beta}}} shifts the filtration by {-beta.lam}, more than the "
                    f"declared energy loss {self.energy_loss}", (k1, k0, beta))
            for (x, y, z), out in t.items():
                want = (-beta.mu + source.basis.sdeg[y] + sum(source.left.basis.sdeg[a] for a in x)
                        + sum(source.right.basis.sdeg[a] for a in z))
                for o in out:
                    target.basis.require(o, "bimodule homomorphism output")
                    if target.basis.sdeg[o] != want:
                        raise ValueError(f"phi_{{{k1},{k0},{beta}}}{(x, y, z)} -> {o} is not degree 0")
        self.ops = {k: t for k, t in ops.items() if k[2].lam < E}
        self._index = _index_ops(self.ops, self.field)
        self.name = name

    def apply(self, vec: Mapping, cutoff: Fraction) -> dict:
        out: dict = {}
        for ((x, y, z), lam, n), c in vec.items():
            for beta, table in self._index.get((len(x), len(z)), ()):
                l2 = lam + beta.lam
                if l2 >= cutoff:
                    continue
                for o, a in table.get((x, y, z), {}).items():
                    accumulate(out, (o, l2, n + beta.e), c * a)
        return out

    def apply_hat(self, vec: Mapping, cutoff: Fraction) -> dict:
        """``f1-hat (x) phi (x) f0-hat`` over all splittings, no signs (degree 0 maps)."""
        F = self.field
        out: dict = {}
        for ((x, y, z), lam, n), c in vec.items():
            for i in range(len(x) + 1):
                left = coalgebra_apply(self.f1.ops, {(x[:i], Fraction(0), 0): F.one}, cutoff + self.energy_loss, F)
                for j in range(len(z) + 1):
                    mid = self.apply({((x[i:], y, z[:j]), lam, n): c}, cutoff + self.energy_loss)
                    if not mid:
                        continue
                    right = coalgebra_apply(self.f0.ops, {(z[j:], Fraction(0), 0): F.one},
                                            cutoff + self.energy_loss, F)
                    for (o, lm, nm), cm in mid.items():
                        for (wl, ll, nl), cl in left.items():
                            for (wr, lr, nr), cr in right.items():
                                tot = lm + ll + lr
                                if tot < cutoff:
                                    accumulate(out, ((wl, o, wr), tot, nm + nl + nr), cm * cl * cr)
        return out


def bimodule_hom_residual(phi: BimoduleHom, x: tuple, y: str, z: tuple) -> dict:
    """``n'_*(phi-hat w) - phi_*(d-hat_n w)`` below the trusted energy ``E - c``."""
    E = phi.energy_cutoff - phi.energy_loss
    w = {((tuple(x), y, tuple(z)), Fraction(0), 0): phi.field.one}
    lhs = phi.target.apply(phi.apply_hat(w, E), E)
    rhs = phi.apply(phi.source.dhat(w, phi.energy_cutoff), E)
    for key, c in rhs.items():
        accumulate(lhs, key, -c)
    return lhs


def verify_bimodule_hom(phi: BimoduleHom, D: FilteredBimodule | None = None,
                        D2: FilteredBimodule | None = None) -> Report:
    if D is not None and D is not phi.source:
        raise ValueError("source bimodule does not match")
    if D2 is not None and D2 is not phi.target:
        raise ValueError("target bimodule does not match")
    rep = Report("bimodule homomorphism")
    if phi.energy_loss:
        rep.notes.append(f"energy loss {phi.energy_loss}: checked below "
                         f"{phi.energy_cutoff - phi.energy_loss}")
    src = phi.source
    kmax = src.max_relation_arity()
    mphi = max((k1 + k0 for (k1, k0) in phi._index), default=0)
    kmax = max(kmax, mphi + max(src.left.ops.max_arity, src.right.ops.max_arity, src.max_total_arity()))
    if src.arity_cutoff is not None:
        kmax = src.arity_cutoff - 1
    for total in range(kmax + 1):
        for x, y, z in src.words(total):
            r = bimodule_hom_residual(phi, x, y, z)
            if r:
                keep = lambda lam, x=x, z=z: src.complete(len(x), len(z), max(lam, Fraction(0)))
                for res in residuals_from_vec(r, total, bimodule_word_label(x, y, z), keep,
                                              "bimodule homomorphism"):
                    rep.add(res)
    return rep.sort()


def identity_bimodule_hom(D: FilteredBimodule) -> BimoduleHom:
    from .ainfty import identity_hom
    one = D.field.one
    ops = {(0, 0, ZERO_GAP): {((), y, ()): {y: one} for y in D.basis}}
    return BimoduleHom(D, D, ops, identity_hom(D.left), identity_hom(D.right), 0, name="id")
