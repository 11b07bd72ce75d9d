"""JSON file formats.

Every emitted document is an object with ``"format"`` and ``"version"``
keys.  Scalars are ``"a/b"`` strings (or ints) over Q and ints over F_p;
energies are ``"p/q"`` strings.  Emission is deterministic: lists are
sorted and ``json.dumps`` runs with sorted keys.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .ainfty import AInfinityHom, FilteredAInfinity
from .bimodule import FilteredBimodule
from .complex import Chain, GradedBasis
from .morse import GradientMatching, SimplicialComplex, check_matching
from .novikov import QQ, Field, Gap, GapMonoid, NovElement, as_energy, dump_energy, gap
from .report import Report
from .transfer import CanonicalModelResult, TransferData

VERSION = 1


class FormatError(ValueError):
    """Malformed input; ``where`` is a path into the document (or a line number)."""

    def __init__(self, msg: str, where: str = ""):
        super().__init__(f"{where}: {msg}" if where else msg)
        self.where = where


# ---------------------------------------------------------------------------
# low level


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write(path, doc) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read(path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", f"{path}:{e.lineno}:{e.colno}") from None


def _header(kind: str, **extra) -> dict:
    doc = {"format": kind, "version": VERSION}
    doc.update(extra)
    return doc


def _expect(doc, kind: str, where: str = "") -> dict:
    if not isinstance(doc, dict):
        raise FormatError(f"expected a {kind} document (JSON object)", where)
    if doc.get("format") != kind:
        raise FormatError(f"expected format {kind!r}, found {doc.get('format')!r}", where)
    if doc.get("version", VERSION) != VERSION:
        raise FormatError(f"unsupported version {doc.get('version')}", where)
    return doc


def _scalar(field: Field, x, where: str):
    try:
        return field(x)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad scalar {x!r}: {e}", where) from None


def _energy(x, where: str, allow_negative: bool = False) -> Fraction:
    try:
        return as_energy(x, allow_negative=allow_negative)
    except (TypeError, ValueError) as e:
        raise FormatError(str(e), where) from None


def _gap(d, where: str, allow_negative: bool = False) -> Gap:
    try:
        return gap(d["lambda"], d.get("mu", 0), allow_negative=allow_negative)
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad gap class {d!r}: {e}", where) from None


def _vec_dump(field: Field, v: Mapping) -> list:
    return [{"basis": z, "coeff": field.dump(c)} for z, c in sorted(v.items())]


def _vec_load(field: Field, basis: GradedBasis, data, where: str) -> dict:
    out: dict = {}
    if not isinstance(data, list):
        raise FormatError("expected a list of {basis, coeff}", where)
    for i, t in enumerate(data):
        w = f"{where}[{i}]"
        try:
            name = t["basis"]
        except (KeyError, TypeError):
            raise FormatError("entry needs a 'basis' key", w) from None
        if name not in basis:
            raise FormatError(f"unknown basis element {name!r}", w)
        c = _scalar(field, t.get("coeff", 1), w)
        out[name] = out.get(name, field.zero) + c
    return {k: c for k, c in out.items() if c}


# ---------------------------------------------------------------------------
# basis, Novikov elements, chains


def dump_basis(basis: GradedBasis) -> dict:
    return _header("basis", basis=basis.dump())


def load_basis(doc, where: str = "basis", allow_negative: bool = False) -> GradedBasis:
    items = doc["basis"] if isinstance(doc, dict) and "basis" in doc else doc
    if isinstance(doc, dict) and "format" in doc:
        _expect(doc, "basis", where)
    if not isinstance(items, list):
        raise FormatError("expected a list of {name, degree}", where)
    for i, el in enumerate(items):
        if not isinstance(el, dict) or "name" not in el or "degree" not in el:
            raise FormatError("basis entry needs 'name' and 'degree'", f"{where}[{i}]")
        if isinstance(el["degree"], int) and el["degree"] < 0 and not allow_negative:
            raise FormatError(f"basis element {el['name']!r} has negative degree {el['degree']}",
                              f"{where}[{i}]")
    try:
        return GradedBasis(items, allow_negative=allow_negative)
    except ValueError as e:
        raise FormatError(str(e), where) from None


def dump_nov(x: NovElement) -> list:
    return x.dump()


def load_nov(data, cutoff, field: Field = QQ) -> NovElement:
    return NovElement.load(data, cutoff, field)


def dump_chain(b: Chain) -> dict:
    return _header("chain", field=b.field.name, energy_cutoff=dump_energy(b.cutoff),
                   chain=b.dump())


def load_chain(doc, basis: GradedBasis, field: Field | None = None, cutoff=None,
               where: str = "chain") -> Chain:
    _expect(doc, "chain", where)
    F = field or Field.parse(doc.get("field"))
    E = _energy(cutoff if cutoff is not None else doc.get("energy_cutoff", 1), where)
    data = doc.get("chain", [])
    for i, t in enumerate(data):
        if t.get("basis") not in basis:
            raise FormatError(f"unknown basis element {t.get('basis')!r}", f"{where}.chain[{i}]")
    try:
        return Chain.load(basis, data, E, F)
    except (TypeError, ValueError, KeyError) as e:
        raise FormatError(str(e), where) from None


# ---------------------------------------------------------------------------
# operation tables


def _ops_dump(field: Field, ops: Mapping) -> list:
    out = []
    for (k, beta) in sorted(ops):
        table = ops[(k, beta)]
        entries = [{"inputs": list(w), "output": _vec_dump(field, v)}
                   for w, v in sorted(table.items()) if v]
        if entries:
            out.append({"k": k, "beta": beta.dump(), "entries": entries})
    return out


def _ops_load(field: Field, src: GradedBasis, tgt: GradedBasis, data, where: str,
              allow_negative: bool = False) -> dict:
    ops: dict = {}
    if isinstance(data, dict):
        _expect(data, "operations", where)
        data = data.get("operations", [])
    if not isinstance(data, list):
        raise FormatError("operations must be a list", where)
    for i, op in enumerate(data):
        w = f"{where}[{i}]"
        if not isinstance(op, dict) or ("k" not in op and "arity" not in op):
            raise FormatError("operation needs 'k'", w)
        k = op.get("k", op.get("arity"))
        if not isinstance(k, int) or k < 0:
            raise FormatError(f"bad arity {k!r}", w)
        beta = _gap(op.get("beta", {"lambda": 0, "mu": 0}), w, allow_negative)
        table = ops.setdefault((k, beta), {})
        for j, ent in enumerate(op.get("entries", [])):
            we = f"{w}.entries[{j}]"
            inputs = ent.get("inputs", [])
            if len(inputs) != k:
                raise FormatError(f"entry has {len(inputs)} inputs but arity is {k}", we)
            for a in inputs:
                if a not in src:
                    raise FormatError(f"unknown basis element {a!r}", we)
            vec = _vec_load(field, tgt, ent.get("output", []), we + ".output")
            row = table.setdefault(tuple(inputs), {})
            for z, c in vec.items():
                row[z] = row.get(z, field.zero) + c
    return {key: {w: v for w, v in t.items() if v} for key, t in ops.items()}


def _monoid_dump(m: GapMonoid) -> dict:
    return {"generators": [g.dump() for g in m.generators],
            "classes": [b.dump() for b in sorted(m.classes)]}


def _monoid_load(doc, cutoff, where: str) -> GapMonoid | None:
    if not doc:
        return None
    classes = [_gap(b, where) for b in doc.get("classes", [])]
    gens = [_gap(b, where) for b in doc.get("generators", [])]
    return GapMonoid(classes, cutoff, gens)


# ---------------------------------------------------------------------------
# algebras and homomorphisms


def dump_algebra(A: FilteredAInfinity) -> dict:
    doc = _header("algebra", name=A.name, field=A.field.name,
                  energy_cutoff=dump_energy(A.energy_cutoff), arity_cutoff=A.arity_cutoff,
                  basis=A.basis.dump(), monoid=_monoid_dump(A.monoid),
                  operations=_ops_dump(A.field, A.ops.ops))
    if A.ank is not None:
        doc["ank"] = list(A.ank)
    return doc


def load_algebra(doc, basis: GradedBasis | None = None, field: Field | None = None,
                 energy_cutoff=None, arity_cutoff=None, where: str = "algebra") -> FilteredAInfinity:
    """Algebra document; ``basis`` is required when the document does not embed one.

    Explicit arguments override the values stored in the document.
    """
    if isinstance(doc, list) or (isinstance(doc, dict) and doc.get("format") == "operations"):
        doc = {"format": "algebra", "operations": doc}
    _expect(doc, "algebra", where)
    F = field or Field.parse(doc.get("field"))
    if "basis" in doc:
        B = load_basis(doc["basis"], where + ".basis")
        if basis is not None and basis != B:
            raise FormatError("embedded basis differs from the given complex", where)
        basis = B
    if basis is None:
        raise FormatError("no basis: pass a complex file or embed 'basis'", where)
    E = _energy(energy_cutoff if energy_cutoff is not None else doc.get("energy_cutoff", 1), where)
    K = arity_cutoff if arity_cutoff is not None else doc.get("arity_cutoff")
    ops = _ops_load(F, basis, basis, doc.get("operations", []), where + ".operations")
    E_doc = _energy(doc.get("energy_cutoff", E), where)
    monoid = _monoid_load(doc.get("monoid"), E_doc, where + ".monoid")
    ank = tuple(doc["ank"]) if doc.get("ank") else None
    try:
        return FilteredAInfinity(basis, ops, F, E, K, monoid, ank=ank, name=doc.get("name", ""))
    except (KeyError, ValueError, TypeError) as e:
        raise FormatError(str(e), where) from None


def dump_operations(field: Field, ops) -> dict:
    """Bare operations file, for use together with a separate basis file."""
    fam = ops.ops if hasattr(ops, "ops") else ops
    return _header("operations", field=field.name, operations=_ops_dump(field, fam))


def load_dga(doc, field: Field | None = None, energy_cutoff=1, where: str = "dga") -> FilteredAInfinity:
    """``{basis, differential: [{source, image}], product: [{inputs: [a, b], output}]}``."""
    from .ainfty import RelationError, from_dga
    _expect(doc, "dga", where)
    F = field or Field.parse(doc.get("field"))
    B = load_basis(doc.get("basis", []), where + ".basis")
    d = _lmap_load(F, B, B, doc.get("differential", []), where + ".differential")
    prod = {}
    for i, ent in enumerate(doc.get("product", [])):
        w = f"{where}.product[{i}]"
        inputs = ent.get("inputs", [])
        if len(inputs) != 2:
            raise FormatError("a product entry needs exactly two inputs", w)
        for a in inputs:
            if a not in B:
                raise FormatError(f"unknown basis element {a!r}", w)
        prod[tuple(inputs)] = _vec_load(F, B, ent.get("output", []), w + ".output")
    try:
        return from_dga(B, d, prod, F, _energy(energy_cutoff, where), name=doc.get("name", ""))
    except RelationError as e:
        raise FormatError(str(e), where) from None


def dump_dga(basis: GradedBasis, d: Mapping, product: Mapping, field: Field, name: str = "") -> dict:
    return _header("dga", name=name, field=field.name, basis=basis.dump(),
                   differential=_lmap_dump(field, d),
                   product=[{"inputs": list(k), "output": _vec_dump(field, v)}
                            for k, v in sorted(product.items()) if v])


def dump_hom(f: AInfinityHom) -> dict:
    return _header("homomorphism", name=f.name, field=f.field.name,
                   source_basis=f.source.basis.dump(), target_basis=f.target.basis.dump(),
                   arity_cutoff=f.arity_cutoff, operations=_ops_dump(f.field, f.ops.ops))


def load_hom(doc, source: FilteredAInfinity, target: FilteredAInfinity,
             where: str = "homomorphism") -> AInfinityHom:
    _expect(doc, "homomorphism", where)
    if "source_basis" in doc and load_basis(doc["source_basis"]) != source.basis:
        raise FormatError("source basis does not match the source algebra", where)
    if "target_basis" in doc:
        tb = load_basis(doc["target_basis"], allow_negative=True)
        if tb != target.basis:
            raise FormatError("target basis does not match the target algebra", where)
    ops = _ops_load(source.field, source.basis, target.basis, doc.get("operations", []),
                    where + ".operations")
    try:
        return AInfinityHom(source, target, ops, doc.get("arity_cutoff"), name=doc.get("name", ""))
    except (KeyError, ValueError) as e:
        raise FormatError(str(e), where) from None


# ---------------------------------------------------------------------------
# transfer data


def _lmap_dump(field: Field, m: Mapping) -> list:
    return [{"source": x, "image": _vec_dump(field, v)} for x, v in sorted(m.items()) if v]


def _lmap_load(field: Field, src: GradedBasis, tgt: GradedBasis, data, where: str) -> dict:
    if isinstance(data, dict):
        _expect(data, "linear-map", where)
        data = data.get("map", [])
    out = {}
    for i, ent in enumerate(data):
        w = f"{where}[{i}]"
        x = ent.get("source")
        if x not in src:
            raise FormatError(f"unknown basis element {x!r}", w)
        out[x] = _vec_load(field, tgt, ent.get("image", []), w + ".image")
    return out


def dump_linear_map(field: Field, m: Mapping) -> dict:
    return _header("linear-map", field=field.name, map=_lmap_dump(field, m))


def dump_subspace(T: TransferData) -> dict:
    return _header("subspace", field=T.field.name,
                   basis=[{"name": h, "degree": T.H.degree(h),
                           "vector": _vec_dump(T.field, T.iota.get(h, {}))} for h in T.H])


def load_subspace(doc, C: GradedBasis, field: Field, where: str = "subspace") -> tuple:
    _expect(doc, "subspace", where)
    els, iota = [], {}
    for i, ent in enumerate(doc.get("basis", [])):
        w = f"{where}.basis[{i}]"
        if "name" not in ent or "degree" not in ent:
            raise FormatError("subspace entry needs 'name' and 'degree'", w)
        els.append((ent["name"], ent["degree"]))
        iota[ent["name"]] = _vec_load(field, C, ent.get("vector", []), w + ".vector")
    return GradedBasis(els, allow_negative=True), iota


def load_transfer_data(C: GradedBasis, m1: Mapping, field: Field, subspace, proj, homotopy):
    from .transfer import normalize_homotopy
    H, iota = load_subspace(subspace, C, field)
    P = _lmap_load(field, C, C, proj, "proj")
    G = _lmap_load(field, C, C, homotopy, "homotopy")
    return normalize_homotopy(C, H, iota, P, G, m1, field)


# ---------------------------------------------------------------------------
# transfer output


def dump_ledger(res: CanonicalModelResult) -> dict:
    F = res.algebra.field
    trees = []
    for key in sorted(res.ledger, key=lambda k: (res.ledger[k]["energy"], k)):
        entry = res.ledger[key]
        row = {"id": key, "energy": dump_energy(entry["energy"])}
        for mode in ("m", "f"):
            row[mode] = [{"inputs": list(w),
                          "output": [{"basis": z, "e": n, "coeff": F.dump(c)}
                                     for (z, n), c in sorted(v.items())]}
                         for w, v in sorted(entry[mode].items())]
        trees.append(row)
    return _header("ledger", field=F.name, monoid=_monoid_dump(res.algebra.monoid),
                   energy_cutoff=dump_energy(res.algebra.energy_cutoff),
                   trees=trees, homomorphism=dump_hom(res.hom))


def load_ledger(doc, where: str = "ledger") -> tuple:
    """``(ledger, monoid)`` in the in-memory layout used by ``CanonicalModelResult``."""
    _expect(doc, "ledger", where)
    F = Field.parse(doc.get("field"))
    E = _energy(doc.get("energy_cutoff", 1), where)
    monoid = _monoid_load(doc.get("monoid"), E, where + ".monoid")
    ledger = {}
    for i, row in enumerate(doc.get("trees", [])):
        entry = {"energy": _energy(row["energy"], f"{where}.trees[{i}]"), "m": {}, "f": {}}
        for mode in ("m", "f"):
            for ent in row.get(mode, []):
                entry[mode][tuple(ent["inputs"])] = {(o["basis"], int(o.get("e", 0))): F(o["coeff"])
                                                     for o in ent["output"]}
        ledger[row["id"]] = entry
    return ledger, monoid


# ---------------------------------------------------------------------------
# bimodules


def dump_bimodule(D: FilteredBimodule) -> dict:
    F = D.field
    ops = []
    for (k1, k0, beta) in sorted(D.ops):
        entries = [{"left": list(x), "middle": y, "right": list(z), "output": _vec_dump(F, v)}
                   for (x, y, z), v in sorted(D.ops[(k1, k0, beta)].items()) if v]
        if entries:
            ops.append({"left_arity": k1, "right_arity": k0, "beta": beta.dump(), "entries": entries})
    return _header("bimodule", name=D.name, field=F.name, energy_cutoff=dump_energy(D.energy_cutoff),
                   arity_cutoff=D.arity_cutoff, basis=D.basis.dump(), operations=ops)


def load_bimodule(doc, left: FilteredAInfinity, right: FilteredAInfinity,
                  where: str = "bimodule") -> FilteredBimodule:
    _expect(doc, "bimodule", where)
    F = left.field
    basis = load_basis(doc["basis"], where + ".basis")
    ops: dict = {}
    for i, op in enumerate(doc.get("operations", [])):
        w = f"{where}.operations[{i}]"
        k1, k0 = op.get("left_arity"), op.get("right_arity")
        beta = _gap(op.get("beta", {"lambda": 0, "mu": 0}), w)
        table = ops.setdefault((k1, k0, beta), {})
        for j, ent in enumerate(op.get("entries", [])):
            we = f"{w}.entries[{j}]"
            x, y, z = tuple(ent.get("left", [])), ent.get("middle"), tuple(ent.get("right", []))
            if len(x) != k1 or len(z) != k0:
                raise FormatError("entry arities do not match the operation", we)
            for a in x:
                if a not in left.basis:
                    raise FormatError(f"unknown left algebra element {a!r}", we)
            for a in z:
                if a not in right.basis:
                    raise FormatError(f"unknown right algebra element {a!r}", we)
            if y not in basis:
                raise FormatError(f"unknown module element {y!r}", we)
            table[(x, y, z)] = _vec_load(F, basis, ent.get("output", []), we + ".output")
    E = doc.get("energy_cutoff")
    try:
        return FilteredBimodule(basis, left, right, ops, F, E, doc.get("arity_cutoff"),
                                name=doc.get("name", ""))
    except (KeyError, ValueError, TypeError) as e:
        raise FormatError(str(e), where) from None


# ---------------------------------------------------------------------------
# simplicial complexes and matchings


def dump_complex(K: SimplicialComplex) -> dict:
    return _header("simplicial-complex", **K.dump())


def load_complex(doc, where: str = "complex") -> SimplicialComplex:
    if doc.get("format", "simplicial-complex") != "simplicial-complex":
        raise FormatError(f"expected a simplicial complex, found {doc.get('format')!r}", where)
    try:
        return SimplicialComplex(doc["vertices"], doc["simplices"], close=True)
    except KeyError as e:
        raise FormatError(f"missing key {e}", where) from None
    except ValueError as e:
        raise FormatError(str(e), where) from None


def dump_matching(M: GradientMatching, K: SimplicialComplex) -> dict:
    return _header("matching", pairs=M.dump(K))


def load_matching(doc, K: SimplicialComplex, where: str = "matching") -> GradientMatching:
    pairs = doc.get("pairs", []) if isinstance(doc, dict) else doc
    try:
        return check_matching(K, [(tuple(a), tuple(b)) for a, b in pairs])
    except (TypeError, ValueError) as e:
        raise FormatError(str(e), where) from None


# ---------------------------------------------------------------------------
# reports


def dump_report(rep: Report, field: Field) -> dict:
    doc = _header("report")
    doc.update(rep.dump(field))
    return doc
