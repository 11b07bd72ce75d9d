"""Rank computations for finite cochain complexes over a field.

A complex is a ``GradedBasis`` with a degree +1 map ``{x: {y: c}}``; a map
between complexes is given the same way.
"""

from __future__ import annotations

from typing import Mapping

from . import linalg
from .complex import GradedBasis, accumulate
from .novikov import Field


def block(lin: Mapping, src: list, tgt: list, field: Field) -> list:
    """Matrix of ``lin`` restricted to ``src`` columns and ``tgt`` rows."""
    row = {y: i for i, y in enumerate(tgt)}
    m = linalg.zeros(len(tgt), len(src), field)
    for j, x in enumerate(src):
        for y, c in lin.get(x, {}).items():
            if y in row:
                m[row[y]][j] = m[row[y]][j] + field(c)
    return m


def compose_lin(g: Mapping, f: Mapping) -> dict:
    """``g o f`` for sparse linear maps."""
    out: dict = {}
    for x, v in f.items():
        acc: dict = {}
        for y, c in v.items():
            for z, e in g.get(y, {}).items():
                accumulate(acc, z, c * e)
        if acc:
            out[x] = acc
    return out


def cohomology_ranks(basis: GradedBasis, d: Mapping, field: Field) -> dict:
    """``{degree: dim H^degree}`` for every degree carrying basis elements."""
    out = {}
    for n in basis.degree_range():
        here = basis.in_degree(n)
        if not here:
            continue
        r_out = linalg.rank(block(d, here, basis.in_degree(n + 1), field), field)
        r_in = linalg.rank(block(d, basis.in_degree(n - 1), here, field), field)
        out[n] = len(here) - r_out - r_in
    return out


def is_chain_map(f: Mapping, d1: Mapping, d2: Mapping) -> bool:
    return not _diff(compose_lin(f, d1), compose_lin(d2, f))


def _diff(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for x in set(a) | set(b):
        v = dict(a.get(x, {}))
        for y, c in b.get(x, {}).items():
            accumulate(v, y, -c)
        if v:
            out[x] = v
    return out


def is_quasi_isomorphism(f: Mapping, B1: GradedBasis, d1: Mapping, B2: GradedBasis,
                         d2: Mapping, field: Field) -> bool:
    """Chain map test plus acyclicity of the mapping cone."""
    if not is_chain_map(f, d1, d2):
        return False
    elements, d = [], {}
    for x in B1:
        elements.append(("s:" + x, B1.degree(x) - 1))
        v: dict = {}
        for y, c in d1.get(x, {}).items():
            accumulate(v, "s:" + y, -field(c))
        for y, c in f.get(x, {}).items():
            accumulate(v, "t:" + y, field(c))
        d["s:" + x] = v
    for y in B2:
        elements.append(("t:" + y, B2.degree(y)))
        d["t:" + y] = {"t:" + z: field(c) for z, c in d2.get(y, {}).items()}
    cone = GradedBasis(elements, allow_negative=True)
    return all(r == 0 for r in cohomology_ranks(cone, d, field).values())
