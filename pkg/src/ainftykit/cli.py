"""Command-line interface.

Exit status: 0 when every report is empty, 1 when a report has residuals,
2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import io
from .ainfty import (
    FilteredAInfinity, MissingOperation, NotWeakSolution, RelationError,
    deform_by_b, mc_residual, potential, verify_ainfty, verify_ank,
)
from .bimodule import deform_bimodule, square_of_deformed_differential, verify_bimodule
from .complex import Chain
from .homotopy import build_interval_model, check_gauge_equivalence, check_homotopy, model_report
from .morse import (
    ComplexError, DiscOpsError, MatchingError, boundary_operator, build_matching, morse_flow_data,
    morse_transfer, render_trace,
)
from .novikov import ZERO_GAP, Field
from .report import Report, residuals_from_vec
from .transfer import TransferDataError, TransferVerificationError, hodge_transfer_data, transfer


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# loading helpers


def _read(path: str | None, what: str):
    if not path:
        raise InputError(f"missing --{what}")
    if not Path(path).exists():
        raise InputError(f"{what} file {path} does not exist")
    return io.read(path)


def _field(args) -> Field | None:
    return Field.parse(args.field) if args.field else None


def _algebra(args, ops_flag: str = "ops", complex_flag: str = "complex") -> FilteredAInfinity:
    F = _field(args)
    dga = getattr(args, "dga", None)
    if dga and ops_flag == "ops":
        A = io.load_dga(_read(dga, "dga"), F, args.energy_cutoff or 1, where=dga)
        if args.arity_cutoff is not None:
            A = FilteredAInfinity(A.basis, A.ops.ops, A.field, A.energy_cutoff, args.arity_cutoff,
                                  name=A.name)
        return A
    path = getattr(args, ops_flag)
    doc = _read(path, ops_flag.replace("_", "-"))
    basis = None
    cpath = getattr(args, complex_flag, None) if complex_flag else None
    if cpath:
        basis = io.load_basis(_read(cpath, "complex"), where=cpath)
    return io.load_algebra(doc, basis, F, args.energy_cutoff, args.arity_cutoff, where=path)


def _chain(args, flag: str, A: FilteredAInfinity) -> Chain:
    path = getattr(args, flag)
    if not path:
        return Chain(A.basis, {}, A.energy_cutoff, A.field)
    return io.load_chain(_read(path, flag), A.basis, A.field, A.energy_cutoff, where=path)


def _emit(args, doc) -> None:
    if args.emit:
        io.write(args.emit, doc)


def _finish(args, reports: list, field: Field, out=sys.stdout) -> int:
    ok = all(r.ok for r in reports)
    for r in reports:
        print(r.render(limit=args.limit), file=out)
    if args.report:
        io.write(args.report, io.dump_report(_merge(reports), field))
    return 0 if ok else 1


def _merge(reports: list) -> Report:
    if len(reports) == 1:
        return reports[0]
    rep = Report(" + ".join(r.title for r in reports))
    for r in reports:
        rep.extend(r, prefix=f"{r.title}: ")
    return rep


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> int:
    A = _algebra(args)
    _emit(args, io.dump_algebra(A))
    return _finish(args, [verify_ainfty(A, check_level=args.check_level, seed=args.seed)], A.field)


def cmd_verify_ank(args) -> int:
    A = _algebra(args)
    try:
        rep = verify_ank(A, args.n, args.K, check_level=args.check_level, seed=args.seed)
    except MissingOperation as e:
        raise InputError(str(e)) from None
    return _finish(args, [rep], A.field)


def cmd_transfer(args) -> int:
    A = _algebra(args)
    if args.arity_cutoff is None and A.arity_cutoff is None:
        raise InputError("transfer needs --arity-cutoff (the input has none)")
    if args.subspace:
        if not (args.proj and args.homotopy):
            raise InputError("--subspace needs --proj and --homotopy")
        T = io.load_transfer_data(A.basis, A.m1bar(), A.field, _read(args.subspace, "subspace"),
                                  _read(args.proj, "proj"), _read(args.homotopy, "homotopy"))
    else:
        T = hodge_transfer_data(A, rng=random.Random(args.seed))
    try:
        res = transfer(A, T, arity_cutoff=args.arity_cutoff, check_level=args.check_level)
    except TransferVerificationError as e:
        return _finish(args, e.reports, A.field)
    _emit(args, io.dump_algebra(res.algebra))
    if args.emit_hom:
        io.write(args.emit_hom, io.dump_hom(res.hom))
    if args.ledger:
        io.write(args.ledger, io.dump_ledger(res))
    return _finish(args, res.reports, A.field)


def cmd_interval_model(args) -> int:
    A = _algebra(args)
    model = build_interval_model(A)
    _emit(args, io.dump_algebra(model.algebra))
    return _finish(args, [model_report(model)], A.field)


def cmd_check_homotopy(args) -> int:
    A1 = _algebra(args, "source", None)
    A2 = _algebra(args, "target", None)
    model = build_interval_model(A2)
    f0 = io.load_hom(_read(args.f0, "f0"), A1, A2, where=args.f0)
    f1 = io.load_hom(_read(args.f1, "f1"), A1, A2, where=args.f1)
    W = io.load_hom(_read(args.witness, "witness"), A1, model.algebra, where=args.witness)
    return _finish(args, [check_homotopy(f0, f1, W, model)], A1.field)


def cmd_check_gauge(args) -> int:
    A = _algebra(args)
    model = build_interval_model(A)
    b0, b1 = _chain(args, "b0", A), _chain(args, "b1", A)
    bt = _chain(args, "witness", model.algebra)
    return _finish(args, [check_gauge_equivalence(b0, b1, bt, model)], A.field)


def _mc_report(A: FilteredAInfinity, b: Chain) -> Report:
    rep = Report("Maurer-Cartan")
    r = mc_residual(A, b)
    for res in residuals_from_vec(r.terms, 0, ("b",), lambda lam: True, "MC(b)"):
        rep.add(res)
    rep.notes.append(f"checked below energy {r.cutoff}")
    return rep


def cmd_mc_check(args) -> int:
    A = _algebra(args)
    return _finish(args, [_mc_report(A, _chain(args, "b", A))], A.field)


def cmd_deform(args) -> int:
    A = _algebra(args)
    b = _chain(args, "b", A)
    mc = _mc_report(A, b)
    Ab = deform_by_b(A, b)
    _emit(args, io.dump_algebra(Ab))
    return _finish(args, [mc, verify_ainfty(Ab, check_level=args.check_level, seed=args.seed)],
                   A.field)


def cmd_potential(args) -> int:
    A = _algebra(args)
    b = _chain(args, "b", A)
    try:
        c = potential(A, b, args.unit)
    except NotWeakSolution as e:
        rep = Report("weak Maurer-Cartan")
        for res in residuals_from_vec({k: v for k, v in e.residual.terms.items() if k[0] != args.unit},
                                      0, ("b",), lambda lam: True, "MC(b) off the unit"):
            rep.add(res)
        return _finish(args, [rep], A.field)
    except KeyError as e:
        raise InputError(str(e)) from None
    print(f"potential: {c!r}")
    if args.emit:
        io.write(args.emit, io._header("novikov", field=A.field.name, value=c.dump()))
    return 0


def _bimodule(args):
    L = _algebra(args, "left", None)
    R = _algebra(args, "right", None)
    D = io.load_bimodule(_read(args.bimodule, "bimodule"), L, R, where=args.bimodule)
    return L, R, D


def cmd_bimodule_verify(args) -> int:
    L, R, D = _bimodule(args)
    return _finish(args, [verify_bimodule(D)], D.field)


def cmd_bimodule_deform(args) -> int:
    L, R, D = _bimodule(args)
    b1 = _chain(args, "b1", L)
    b0 = _chain(args, "b0", R)
    reps = [_mc_report(L, b1), _mc_report(R, b0)]
    reps[0].title, reps[1].title = "Maurer-Cartan (left, b1)", "Maurer-Cartan (right, b0)"
    Db = deform_bimodule(D, b0, b1)
    _emit(args, io.dump_bimodule(Db))
    reps.append(square_of_deformed_differential(D, b0, b1))
    return _finish(args, reps, D.field)


def cmd_morse(args) -> int:
    F = _field(args) or Field()
    K = io.load_complex(_read(args.complex, "complex"), where=args.complex)
    if args.matching:
        M = io.load_matching(_read(args.matching, "matching"), K, where=args.matching)
    else:
        M = build_matching(K)
    pkg = morse_flow_data(K, M, F)
    E = args.energy_cutoff or 1
    Kmax = args.arity_cutoff if args.arity_cutoff is not None else 3
    m1 = {(x,): v for x, v in boundary_operator(K, F).items()}
    if args.disc_ops:
        doc = _read(args.disc_ops, "disc-ops")
        A = io.load_algebra(doc, pkg.basis, F, E, Kmax, where=args.disc_ops)
        if not A.ops[(1, ZERO_GAP)]:
            ops = dict(A.ops.ops)
            ops[(1, ZERO_GAP)] = m1
            A = A.with_ops(ops)
    else:
        A = FilteredAInfinity(pkg.basis, {(1, ZERO_GAP): m1}, F, E, Kmax, name="discs")
    print(f"critical cells by dimension: {pkg.critical_counts()}")
    print(f"Morse homology ranks: {pkg.homology_ranks()}")
    print(f"simplicial homology ranks: {pkg.simplicial_ranks()}")
    res = morse_transfer(K, M, A, energy_cutoff=E, arity_cutoff=Kmax, field=F,
                         check_level=args.check_level)
    _emit(args, io.dump_algebra(res.algebra))
    if args.emit_matching:
        io.write(args.emit_matching, io.dump_matching(M, K))
    if args.ledger:
        io.write(args.ledger, io.dump_ledger(res))
    if args.trace:
        print(render_trace(res.ledger, res.hom.target.monoid, args.trace, _inputs(args.inputs)))
    return _finish(args, res.reports, F)


def _inputs(s: str | None) -> list:
    """Split on commas outside brackets, so simplex names like ``[a,b]`` survive."""
    out, cur, depth = [], "", 0
    for ch in s or "":
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += (ch == "[") - (ch == "]")
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def cmd_trace(args) -> int:
    ledger, monoid = io.load_ledger(_read(args.ledger, "ledger"), where=args.ledger)
    if not args.tree:
        for key, entry in sorted(ledger.items(), key=lambda kv: (kv[1]["energy"], kv[0])):
            nz = sum(1 for v in entry["m"].values() if v)
            print(f"{key}  energy {entry['energy']}  nonzero m-values {nz}")
        return 0
    try:
        print(render_trace(ledger, monoid, args.tree, _inputs(args.inputs)))
    except (KeyError, ValueError) as e:
        raise InputError(e.args[0] if e.args else str(e)) from None
    return 0


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", help="Q (default) or F_p")
    p.add_argument("--energy-cutoff", help="energy cutoff E (exact rational, e.g. 3 or 5/2)")
    p.add_argument("--arity-cutoff", type=int, help="arity cutoff K")
    p.add_argument("--check-level", choices=("fast", "full"), default="full")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks and random choices")
    p.add_argument("--emit", help="write the primary result here")
    p.add_argument("--report", help="write the report as JSON here")
    p.add_argument("--limit", type=int, default=20, help="residuals to print per report")


def _alg_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--complex", help="basis file (needed when the operations file has no basis)")
    p.add_argument("--ops", help="operations or algebra file")
    p.add_argument("--dga", help="DGA file, imported with the A-infinity sign convention")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ainftykit", description="Filtered A-infinity toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help, alg=True):
        p = sub.add_parser(name, help=help)
        _common(p)
        if alg:
            _alg_inputs(p)
        p.set_defaults(func=func)
        return p

    add("verify", cmd_verify, "check the A-infinity relations")
    p = add("verify-ank", cmd_verify_ank, "check the A_{n,K} relations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p = add("transfer", cmd_transfer, "transfer to a subcomplex (canonical model)")
    p.add_argument("--subspace")
    p.add_argument("--proj")
    p.add_argument("--homotopy")
    p.add_argument("--ledger", help="write the per-tree ledger here")
    p.add_argument("--emit-hom", help="write the homomorphism to the input here")
    add("interval-model", cmd_interval_model, "build and check the interval model")
    p = add("check-homotopy", cmd_check_homotopy, "check a homotopy witness", alg=False)
    for flag in ("source", "target", "f0", "f1", "witness"):
        p.add_argument(f"--{flag}", required=True)
    p = add("check-gauge", cmd_check_gauge, "check a gauge-equivalence witness")
    for flag in ("b0", "b1", "witness"):
        p.add_argument(f"--{flag}", required=flag == "witness")
    p = add("mc-check", cmd_mc_check, "Maurer-Cartan residual of b")
    p.add_argument("--b", required=True)
    p = add("deform", cmd_deform, "deform the structure by b")
    p.add_argument("--b", required=True)
    p = add("potential", cmd_potential, "potential of a weak solution")
    p.add_argument("--b", required=True)
    p.add_argument("--unit", required=True, help="name of the unit basis element")
    for name, func, help in (("bimodule-verify", cmd_bimodule_verify, "check the bimodule relations"),
                             ("bimodule-deform", cmd_bimodule_deform, "deform a bimodule by b0, b1")):
        p = add(name, func, help, alg=False)
        p.add_argument("--left", required=True)
        p.add_argument("--right", required=True)
        p.add_argument("--bimodule", required=True)
        if name == "bimodule-deform":
            p.add_argument("--b0", help="chain of the right algebra")
            p.add_argument("--b1", help="chain of the left algebra")
    p = add("morse", cmd_morse, "discrete Morse transfer on a simplicial complex", alg=False)
    p.add_argument("--complex", required=True)
    p.add_argument("--matching")
    p.add_argument("--disc-ops")
    p.add_argument("--ledger")
    p.add_argument("--emit-matching")
    p.add_argument("--trace", help="tree id to render")
    p.add_argument("--inputs", help="comma separated critical cells for --trace")
    p = add("trace", cmd_trace, "render one tree contribution from a ledger", alg=False)
    p.add_argument("--ledger", required=True)
    p.add_argument("--tree")
    p.add_argument("--inputs")
    return ap


INPUT_ERRORS = (InputError, io.FormatError, ValueError, KeyError, TypeError, RelationError,
                TransferDataError, ComplexError, MatchingError, DiscOpsError, OSError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiscOpsError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except INPUT_ERRORS as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
