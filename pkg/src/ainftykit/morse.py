"""Discrete Morse theory on simplicial complexes as a source of transfer data.

Simplices are sorted vertex tuples (sorted by the global vertex order) and
are named ``[a,b,c]``.  A simplex of dimension ``k`` in a complex of
dimension ``n`` sits in cochain degree ``n - k`` and the differential is
``(-1)^n`` times the simplicial boundary.

A matching pairs a simplex with a codimension-one coface.  The homotopy is
``h = j D^{-1} p``, where ``D`` is the block of the differential from
matched cofaces to matched faces (invertible exactly when the matching is
acyclic), ``G = -h`` and ``Pi = id - m1 h - h m1``.  The inclusion sends a
critical simplex ``c`` to ``Pi(c)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Iterable

from . import linalg
from .ainfty import FilteredAInfinity, verify_ainfty
from .complex import GradedBasis, accumulate
from .homology import cohomology_ranks
from .novikov import QQ, ZERO_GAP, Field
from .report import Report
from .transfer import (
    CanonicalModelResult, TransferData, lmap_add, lmap_compose, lmap_identity, normalize_homotopy,
    transfer,
)
from .trees import LEAF, Tree, parse_tree


class ComplexError(ValueError):
    pass


class MatchingError(ValueError):
    def __init__(self, msg: str, cycle=None):
        super().__init__(msg)
        self.cycle = cycle


class DiscOpsError(ValueError):
    def __init__(self, msg: str, report: Report):
        super().__init__(msg)
        self.report = report


def simplex_name(s: tuple) -> str:
    return "[" + ",".join(s) + "]"


class SimplicialComplex:
    def __init__(self, vertices: Iterable[str], simplices: Iterable[Iterable[str]], *,
                 close: bool = False):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ComplexError("duplicate vertex names")
        self.order = {v: i for i, v in enumerate(self.vertices)}
        given = set()
        for s in simplices:
            s = [str(v) for v in s]
            for v in s:
                if v not in self.order:
                    raise ComplexError(f"simplex {s} uses unknown vertex {v!r}")
            if len(set(s)) != len(s) or not s:
                raise ComplexError(f"simplex {s} is empty or repeats a vertex")
            given.add(self._sort(s))
        given |= {(v,) for v in self.vertices}
        if close:
            closed = set()
            for s in given:
                for r in range(1, len(s) + 1):
                    closed.update(itertools.combinations(s, r))
            given = closed
        else:
            for s in given:
                for f in self.faces(s):
                    if f not in given:
                        raise ComplexError(f"face {simplex_name(f)} of {simplex_name(s)} is missing")
        self.simplices = sorted(given, key=lambda s: (len(s), [self.order[v] for v in s]))
        self.dim = max(len(s) for s in self.simplices) - 1 if self.simplices else -1
        self.names = {s: simplex_name(s) for s in self.simplices}
        self.by_name = {n: s for s, n in self.names.items()}

    def _sort(self, s) -> tuple:
        return tuple(sorted(s, key=self.order.get))

    @staticmethod
    def faces(s: tuple) -> list:
        if len(s) == 1:
            return []
        return [s[:i] + s[i + 1:] for i in range(len(s))]

    def cofaces(self, s: tuple) -> list:
        return [t for t in self.simplices if len(t) == len(s) + 1 and set(s) <= set(t)]

    def degree(self, s: tuple) -> int:
        return self.dim - (len(s) - 1)

    def basis(self) -> GradedBasis:
        return GradedBasis([(self.names[s], self.degree(s)) for s in self.simplices])

    def counts(self) -> tuple:
        return tuple(sum(1 for s in self.simplices if len(s) == k + 1) for k in range(self.dim + 1))

    def dump(self) -> dict:
        top = [list(s) for s in self.simplices if not self.cofaces(s)]
        return {"vertices": list(self.vertices), "simplices": top}

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, f-vector={self.counts()})"


def boundary_operator(K: SimplicialComplex, field: Field = QQ) -> dict:
    """``m1 = (-1)^{dim} d`` as ``{name: {name: c}}``."""
    glob = -1 if K.dim % 2 else 1
    out = {}
    for s in K.simplices:
        v: dict = {}
        for i, f in enumerate(K.faces(s)):
            accumulate(v, K.names[f], field(glob * (-1 if i % 2 else 1)))
        if v:
            out[K.names[s]] = v
    return out


def incidence(K: SimplicialComplex, face: tuple, coface: tuple) -> int:
    i = next(j for j, v in enumerate(coface) if v not in face)
    return -1 if i % 2 else 1


# ---------------------------------------------------------------------------
# matchings


@dataclass
class GradientMatching:
    pairs: list          # [(face, coface)] as vertex tuples
    critical: list       # unmatched simplices, in complex order

    def dump(self, K: SimplicialComplex) -> list:
        return [[list(a), list(b)] for a, b in self.pairs]


def _flow_graph(K: SimplicialComplex, pairs) -> dict:
    """Directed graph of V-paths: ``s -> V(s)`` and ``V(s) -> other faces``."""
    up = dict(pairs)
    graph: dict = {}
    for s, t in up.items():
        graph.setdefault(t, set()).add(s)   # edge s -> t stored as predecessor
        for f in K.faces(t):
            if f != s:
                graph.setdefault(f, set()).add(t)
    return graph


def find_cycle(K: SimplicialComplex, pairs) -> list | None:
    try:
        tuple(TopologicalSorter(_flow_graph(K, pairs)).static_order())
    except CycleError as e:
        return list(e.args[1])
    return None


def check_matching(K: SimplicialComplex, pairs) -> GradientMatching:
    seen = set()
    norm = []
    for a, b in pairs:
        a, b = K._sort(a), K._sort(b)
        if a not in K.names or b not in K.names:
            raise MatchingError(f"pair {a}, {b} is not in the complex")
        if len(b) != len(a) + 1 or not set(a) <= set(b):
            raise MatchingError(f"{simplex_name(b)} is not a codimension-one coface of {simplex_name(a)}")
        for s in (a, b):
            if s in seen:
                raise MatchingError(f"{simplex_name(s)} is matched twice")
            seen.add(s)
        norm.append((a, b))
    cyc = find_cycle(K, norm)
    if cyc:
        raise MatchingError("matching has a closed V-path: " + " -> ".join(simplex_name(s) for s in cyc),
                            [simplex_name(s) for s in cyc])
    return GradientMatching(norm, [s for s in K.simplices if s not in seen])


def build_matching(K: SimplicialComplex, strategy: str = "greedy", pairs=None) -> GradientMatching:
    """Greedy: each unmatched simplex in lexicographic order takes its first free coface that keeps
    the matching acyclic."""
    if strategy == "user":
        if pairs is None:
            raise ValueError("a user matching needs pairs")
        return check_matching(K, pairs)
    if strategy != "greedy":
        raise ValueError(f"unknown strategy {strategy!r}")
    matched: set = set()
    out: list = []
    for s in K.simplices:
        if s in matched:
            continue
        for t in K.cofaces(s):
            if t in matched:
                continue
            if find_cycle(K, out + [(s, t)]) is None:
                out.append((s, t))
                matched.update((s, t))
                break
    return GradientMatching(out, [s for s in K.simplices if s not in matched])


# ---------------------------------------------------------------------------
# Morse package


@dataclass
class MorsePackage:
    complex: SimplicialComplex
    matching: GradientMatching
    basis: GradedBasis
    m1: dict
    data: TransferData
    field: Field

    @property
    def critical_names(self) -> list:
        return list(self.data.H.names)

    def critical_counts(self) -> tuple:
        K = self.complex
        return tuple(sum(1 for s in self.matching.critical if len(s) == k + 1) for k in range(K.dim + 1))

    def homology_ranks(self) -> tuple:
        """Ranks of the Morse complex indexed by simplex dimension."""
        H = self.data.H
        r = cohomology_ranks(H, self.data.h_differential(), self.field)
        return tuple(r.get(self.complex.dim - k, 0) for k in range(self.complex.dim + 1))

    def simplicial_ranks(self) -> tuple:
        r = cohomology_ranks(self.basis, self.m1, self.field)
        return tuple(r.get(self.complex.dim - k, 0) for k in range(self.complex.dim + 1))


def morse_flow_data(K: SimplicialComplex, matching: GradientMatching, field: Field = QQ) -> MorsePackage:
    C = K.basis()
    m1 = boundary_operator(K, field)
    faces = [K.names[a] for a, _ in matching.pairs]
    cofaces = [K.names[b] for _, b in matching.pairs]
    h: dict = {}
    if faces:
        # D: span(cofaces) -> span(faces), the matched block of m1
        row = {f: i for i, f in enumerate(faces)}
        D = linalg.zeros(len(faces), len(cofaces), field)
        for j, t in enumerate(cofaces):
            for y, c in m1.get(t, {}).items():
                if y in row:
                    D[row[y]][j] = c
        Dinv = linalg.inverse(D, field)
        for i, f in enumerate(faces):
            v = {cofaces[j]: Dinv[j][i] for j in range(len(cofaces)) if Dinv[j][i]}
            if v:
                h[f] = v
    names = list(C.names)
    proj = lmap_add(lmap_identity(names, field),
                    lmap_add(lmap_compose(m1, h), lmap_compose(h, m1)), -1)
    G = {x: {y: -c for y, c in v.items()} for x, v in h.items()}
    crit = [K.names[s] for s in matching.critical]
    H = GradedBasis([(c, C.degree(c)) for c in crit])
    iota = {c: dict(proj.get(c, {})) for c in crit}
    T = normalize_homotopy(C, H, iota, proj, G, m1, field, side_conditions=True)
    return MorsePackage(K, matching, C, m1, T, field)


def flow_projection_oracle(K: SimplicialComplex, matching: GradientMatching, field: Field = QQ,
                           max_iter: int = 1000) -> dict:
    """``Pi`` by iterating the one-step discrete flow ``Phi = id - m1 V - V m1`` until it stabilises.

    ``V`` sends a matched face to its coface divided by the incidence, so no
    matrix inversion is involved.
    """
    m1 = boundary_operator(K, field)
    V: dict = {}
    for a, b in matching.pairs:
        e = m1[K.names[b]][K.names[a]]
        V[K.names[a]] = {K.names[b]: field.one / e}
    names = [K.names[s] for s in K.simplices]
    phi = lmap_add(lmap_identity(names, field), lmap_add(lmap_compose(m1, V), lmap_compose(V, m1)), -1)
    cur = lmap_identity(names, field)
    for _ in range(max_iter):
        nxt = lmap_compose(phi, cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise RuntimeError("discrete flow did not stabilise")


def vpath_counts(K: SimplicialComplex, matching: GradientMatching, field: Field = QQ) -> dict:
    """Signed V-path count from each critical cell's boundary faces to critical cells one dimension down.

    Returns the Morse boundary ``{crit: {crit': c}}`` in the homological direction.
    """
    up = {a: b for a, b in matching.pairs}
    crit = set(matching.critical)
    out: dict = {}
    for c in matching.critical:
        acc: dict = {}
        stack = [(f, incidence(K, f, c) * field.one) for f in K.faces(c)]
        while stack:
            s, w = stack.pop()
            if s in crit:
                accumulate(acc, K.names[s], w)
                continue
            t = up.get(s)
            if t is None:
                continue
            # s -> t -> faces of t other than s, weight -<dt, s'> / <dt, s>
            e = incidence(K, s, t)
            for f in K.faces(t):
                if f != s:
                    stack.append((f, -w * incidence(K, f, t) / e))
        if acc:
            out[K.names[c]] = acc
    return out


def morse_transfer(K: SimplicialComplex, matching: GradientMatching, disc_ops, *,
                   energy_cutoff=1, arity_cutoff: int = 3, field: Field = QQ,
                   check_level: str = "full") -> CanonicalModelResult:
    """Transfer user ``disc_ops`` on the simplicial basis to the Morse complex."""
    pkg = morse_flow_data(K, matching, field)
    if isinstance(disc_ops, FilteredAInfinity):
        A = disc_ops
    else:
        A = FilteredAInfinity(pkg.basis, disc_ops, field, energy_cutoff, arity_cutoff, name="discs")
    if A.basis != pkg.basis:
        raise DiscOpsError("disc operations live on a different basis", Report("basis"))
    if A.m1bar() != pkg.m1:
        raise DiscOpsError("m_{1,0} of the disc operations is not the boundary operator",
                           Report("m_{1,0}"))
    rep = verify_ainfty(A, check_level=check_level)
    if not rep.ok:
        raise DiscOpsError("disc operations fail the A-infinity relations:\n" + rep.render(), rep)
    return transfer(A, pkg.data, arity_cutoff=arity_cutoff, check_level=check_level)


def boundary_algebra(K: SimplicialComplex, field: Field = QQ, energy_cutoff=1,
                     arity_cutoff: int | None = None) -> FilteredAInfinity:
    m1 = boundary_operator(K, field)
    return FilteredAInfinity(K.basis(), {(1, ZERO_GAP): {(x,): v for x, v in m1.items()}},
                             field, energy_cutoff, arity_cutoff, name="boundary")


def fundamental_cycle(K: SimplicialComplex, field: Field = QQ) -> dict:
    """A nonzero top-dimensional cycle ``{name: c}`` (orientable pseudo-manifolds), else None."""
    top = [s for s in K.simplices if len(s) == K.dim + 1]
    names = [K.names[s] for s in top]
    m1 = boundary_operator(K, field)
    rows = sorted({y for x in names for y in m1.get(x, {})})
    M = linalg.zeros(len(rows), len(names), field)
    ri = {y: i for i, y in enumerate(rows)}
    for j, x in enumerate(names):
        for y, c in m1.get(x, {}).items():
            M[ri[y]][j] = c
    ns = linalg.nullspace(M, field, len(names))
    if not ns:
        return None
    v = ns[0]
    return {names[i]: c for i, c in enumerate(v) if c}


# ---------------------------------------------------------------------------
# traces


def trace_configuration(result: CanonicalModelResult, tree, inputs) -> str:
    """Human-readable configuration of one tree contribution."""
    return render_trace(result.ledger, result.hom.target.monoid, tree, inputs)


def render_trace(ledger: dict, monoid, tree, inputs) -> str:
    """Same as ``trace_configuration`` but from a bare ledger (e.g. one read from disk)."""
    key = tree.key if isinstance(tree, Tree) else str(tree)
    if key not in ledger:
        raise KeyError(f"tree {key} is not in the ledger")
    t = parse_tree(key)
    inputs = tuple(inputs)
    if len(inputs) != t.leaves:
        raise ValueError(f"tree {key} has {t.leaves} inputs, got {len(inputs)}")
    levels = monoid.levels
    entry = ledger[key]
    out_vec = entry["m"].get(inputs, {})
    energy = entry["energy"]

    def weight():
        if not out_vec:
            return "0"
        parts = []
        for (z, n), c in sorted(out_vec.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            mono = f"T^{energy}" + (f" e^{n}" if n else "")
            parts.append(f"{c}*{mono}*{z}")
        return " + ".join(parts)

    if t is LEAF:
        return f"input {inputs[0]} -> m1bar -> output {weight()}"
    lines = [f"tree {key}, energy {energy}"]
    pos = [0]

    def walk(node: Tree, depth: int, via_edge: bool):
        pad = "  " * depth
        if node is LEAF:
            lines.append(f"{pad}input {inputs[pos[0]]} (critical cell) -> iota")
            pos[0] += 1
            return
        lam = levels[node.eta]
        classes = ", ".join(str(b) for b in monoid.classes_at(lam)) or "none"
        arity = len(node.children)
        kind = "tadpole disc" if arity == 0 else "disc"
        lines.append(f"{pad}{kind} at level {lam} (classes {classes}), {arity} boundary inputs"
                     + (" -> G (broken flow line)" if via_edge else ""))
        for ch in node.children:
            walk(ch, depth + 1, True)

    walk(t, 1, False)
    lines.append(f"  root: Pi -> output {weight()}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# standard complexes


def hexagon() -> SimplicialComplex:
    vs = [f"v{i}" for i in range(6)]
    return SimplicialComplex(vs, [[vs[i], vs[(i + 1) % 6]] for i in range(6)])


def boundary_of_simplex(n: int) -> SimplicialComplex:
    vs = [f"v{i}" for i in range(n + 2)]
    return SimplicialComplex(vs, [list(c) for c in itertools.combinations(vs, n + 1)], close=True)


def simplex(n: int) -> SimplicialComplex:
    vs = [f"v{i}" for i in range(n + 1)]
    return SimplicialComplex(vs, [vs], close=True)


def torus7() -> SimplicialComplex:
    """Seven-vertex torus: triangles ``{i, i+1, i+3}`` and ``{i, i+2, i+3}`` mod 7."""
    vs = [f"v{i}" for i in range(7)]
    tris = []
    for i in range(7):
        tris.append([vs[i], vs[(i + 1) % 7], vs[(i + 3) % 7]])
        tris.append([vs[i], vs[(i + 2) % 7], vs[(i + 3) % 7]])
    return SimplicialComplex(vs, tris, close=True)


def rp2_6() -> SimplicialComplex:
    """Six-vertex real projective plane."""
    vs = [f"v{i}" for i in range(1, 7)]
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
            (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return SimplicialComplex(vs, [[f"v{a}" for a in t] for t in tris], close=True)
