"""The interval model ``C (+) C[-1] (+) C`` and witness-based homotopy checks.

Basis names of the model are ``I0:x``, ``I:x`` and ``I1:x`` for the three
copies of ``x``; the middle copy sits one degree higher.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .ainfty import (
    AInfinityHom, FilteredAInfinity, _check_b, compose_homomorphisms, mc_residual,
    verify_ainfty, verify_homomorphism,
)
from .complex import Chain, GradedBasis, accumulate, apply_total, vec_add
from .homology import block, compose_lin, is_quasi_isomorphism
from .novikov import ZERO_GAP
from .report import Report, Residual, residuals_from_vec

TAGS = ("I0", "I", "I1")


def tag(t: str, x: str) -> str:
    return f"{t}:{x}"


def untag(name: str) -> tuple:
    t, _, x = name.partition(":")
    return t, x


@dataclass
class IntervalModel:
    algebra: FilteredAInfinity
    source: FilteredAInfinity
    incl: AInfinityHom
    eval0: AInfinityHom
    eval1: AInfinityHom

    def evaluations(self):
        return (self.eval0, self.eval1)


def interval_basis(basis: GradedBasis) -> GradedBasis:
    els = [(tag("I0", x), basis.degree(x)) for x in basis]
    els += [(tag("I", x), basis.degree(x) + 1) for x in basis]
    els += [(tag("I1", x), basis.degree(x)) for x in basis]
    return GradedBasis(els)


def build_interval_model(A: FilteredAInfinity) -> IntervalModel:
    F = A.field
    one = F.one
    sdeg = A.basis.sdeg
    ops: dict = {}

    def put(key, word, out, sign=1):
        tbl = ops.setdefault(key, {}).setdefault(word, {})
        for z, c in out.items():
            accumulate(tbl, z, c if sign == 1 else -c)

    for (k, beta), table in A.ops.items():
        for w, out in table.items():
            put((k, beta), tuple(tag("I0", a) for a in w), {tag("I0", z): c for z, c in out.items()})
            put((k, beta), tuple(tag("I1", a) for a in w), {tag("I1", z): c for z, c in out.items()})
            for j in range(k):
                word = (tuple(tag("I0", a) for a in w[:j]) + (tag("I", w[j]),)
                        + tuple(tag("I1", a) for a in w[j + 1:]))
                s = sum(sdeg[a] for a in w[j + 1:])
                put((k, beta), word, {tag("I", z): c for z, c in out.items()}, -1 if s % 2 else 1)
    for x in A.basis:
        s = -one if sdeg[x] % 2 else one
        put((1, ZERO_GAP), (tag("I0", x),), {tag("I", x): s})
        put((1, ZERO_GAP), (tag("I1", x),), {tag("I", x): -s})
    ops = {key: {w: o for w, o in t.items() if o} for key, t in ops.items()}
    ops = {key: t for key, t in ops.items() if t}
    M = FilteredAInfinity(interval_basis(A.basis), ops, F, A.energy_cutoff, A.arity_cutoff,
                          A.monoid, name=f"[0,1]x{A.name}" if A.name else "[0,1]xC")
    incl = AInfinityHom(A, M, {(1, ZERO_GAP): {(x,): {tag("I0", x): one, tag("I1", x): one}
                                               for x in A.basis}}, name="Incl")
    ev0 = AInfinityHom(M, A, {(1, ZERO_GAP): {(tag("I0", x),): {x: one} for x in A.basis}},
                       name="Eval0")
    ev1 = AInfinityHom(M, A, {(1, ZERO_GAP): {(tag("I1", x),): {x: one} for x in A.basis}},
                       name="Eval1")
    return IntervalModel(M, A, incl, ev0, ev1)


def _axiom(kind: str, word=(), arity: int = 1, energy=Fraction(0), terms=()) -> Residual:
    return Residual(arity, energy, tuple(word), tuple(terms), kind)


def verify_model_axioms(model: IntervalModel, A: FilteredAInfinity | None = None) -> Report:
    """The four defining properties of a model of ``[0,1] x C``."""
    A = A or model.source
    M = model.algebra
    F = A.field
    rep = Report("interval model axioms")
    maps = {"Incl": model.incl, "Eval0": model.eval0, "Eval1": model.eval1}
    for name, f in maps.items():
        for (k, beta), table in f.ops.items():
            if (k, beta) != (1, ZERO_GAP) and table:
                rep.add(_axiom("concentration", (name,), k, beta.lam))
    dA, dM = A.m1bar(), M.m1bar()
    if not is_quasi_isomorphism(model.incl.f1bar(), A.basis, dA, M.basis, dM, F):
        rep.add(_axiom("quasi-isomorphism", ("Incl",)))
    if not is_quasi_isomorphism(model.eval0.f1bar(), M.basis, dM, A.basis, dA, F):
        rep.add(_axiom("quasi-isomorphism", ("Eval0",)))
    for name in ("Eval0", "Eval1"):
        comp = compose_lin(maps[name].f1bar(), model.incl.f1bar())
        for x in A.basis:
            v = dict(comp.get(x, {}))
            accumulate(v, x, -F.one)
            if v:
                rep.add(_axiom(f"{name} o Incl != id", (x,),
                               terms=tuple(((y, 0), c) for y, c in sorted(v.items()))))
    e0, e1 = model.eval0.f1bar(), model.eval1.f1bar()
    for d in A.basis.degree_range():
        here = A.basis.in_degree(d)
        if not here:
            continue
        cols = M.basis.in_degree(d)
        top = block(e0, cols, here, F)
        bot = block(e1, cols, here, F)
        if linalg.rank(top + bot, F) < 2 * len(here):
            rep.add(_axiom("Eval0 + Eval1 not surjective", (f"degree {d}",)))
    return rep


def hom_difference(f: AInfinityHom, g: AInfinityHom, kind: str = "mismatch") -> Report:
    """Componentwise comparison of two homomorphisms on the region trusted by both."""
    if f.source.basis != g.source.basis or f.target.basis != g.target.basis:
        raise ValueError("homomorphisms have different sources or targets")
    rep = Report(kind)
    E = min(f.energy_cutoff, g.energy_cutoff)
    kmax = max(f.ops.max_arity, g.ops.max_arity)
    one = f.field.one
    for k in range(kmax + 1):
        for w in itertools.product(f.source.basis.names, repeat=k):
            vec = {(w, Fraction(0), 0): one}
            diff = vec_add(apply_total(f.ops, vec, E), apply_total(g.ops, vec, E), -1)
            if diff:
                keep = lambda lam, k=k: f.complete(k, lam) and g.complete(k, lam)
                for r in residuals_from_vec(diff, k, w, keep, kind):
                    rep.add(r)
    return rep.sort()


def check_homotopy(f0: AInfinityHom, f1: AInfinityHom, Fh: AInfinityHom,
                   model: IntervalModel) -> Report:
    """``Fh: C1 -> model`` is a homomorphism with ``Eval_i o Fh = f_i``."""
    rep = Report("homotopy")
    if Fh.target.basis != model.algebra.basis:
        raise ValueError("the witness does not land in the model")
    rep.extend(verify_homomorphism(Fh), prefix="witness ")
    for i, (fi, ev) in enumerate(((f0, model.eval0), (f1, model.eval1))):
        comp = compose_homomorphisms(Fh, ev)
        rep.extend(hom_difference(fi, comp, f"f{i} != Eval{i} o F"))
    return rep.sort()


def evaluate_chain(f: AInfinityHom, b: Chain) -> Chain:
    """Image of a chain under the linear part ``f_{1,*}`` plus ``f_0`` insertions via ``f_*(e^b)``."""
    from .ainfty import exp_b
    E = f.energy_cutoff
    vec = apply_total(f.ops, exp_b(b.terms, E, f.field), E)
    return Chain(f.target.basis, vec, E, f.field)


def check_gauge_equivalence(b: Chain, b1: Chain, bt: Chain, model: IntervalModel) -> Report:
    """``bt`` solves Maurer-Cartan in the model and evaluates to ``b`` and ``b1``."""
    M = model.algebra
    v = _check_b(M, bt)
    if v is None and (b or b1):
        raise ValueError("the witness is zero but the endpoints are not")
    rep = Report("gauge equivalence")
    r = mc_residual(M, bt)
    if r:
        for res in residuals_from_vec(r.terms, 0, (), lambda lam: True, "witness Maurer-Cartan"):
            rep.add(res)
    for i, (target, ev) in enumerate(((b, model.eval0), (b1, model.eval1))):
        got = evaluate_chain(ev, bt)
        cut = min(got.cutoff, target.cutoff)
        diff = vec_add(got.truncate(cut).terms, target.truncate(cut).terms, -1)
        for res in residuals_from_vec(diff, 0, (), lambda lam: True, f"Eval{i}(witness) != b{i}"):
            rep.add(res)
    return rep.sort()


def is_weak_homotopy_equivalence(f: AInfinityHom, A: FilteredAInfinity | None = None,
                                 A2: FilteredAInfinity | None = None) -> bool:
    """``f_{1,0}`` induces an isomorphism on ``m_{1,0}``-cohomology."""
    A = A or f.source
    A2 = A2 or f.target
    return is_quasi_isomorphism(f.f1bar(), A.basis, A.m1bar(), A2.basis, A2.m1bar(), f.field)


def model_report(model: IntervalModel) -> Report:
    """Everything the construction promises, in one report."""
    rep = Report("interval model")
    rep.extend(verify_ainfty(model.algebra), prefix="model ")
    rep.extend(verify_model_axioms(model))
    for f in (model.incl, model.eval0, model.eval1):
        rep.extend(verify_homomorphism(f), prefix=f"{f.name} ")
    return rep
