"""Graded bases, Novikov-valued chains and the bar coalgebra.

Sparse vectors are plain dicts.  A chain is keyed by ``(name, lam, n)`` and
a bar element by ``(word, lam, n)``, where ``word`` is a tuple of basis
names and ``T^lam e^n`` is the Novikov monomial of the term.  Because
``T`` and ``e`` have even degree, every Koszul sign depends only on the
shifted degrees of the basis letters that an operator passes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .novikov import QQ, Field, Gap, NovElement, as_energy, dump_energy


def accumulate(d: dict, key, c) -> None:
    """``d[key] += c`` dropping zero entries."""
    if not c:
        return
    v = d.get(key)
    if v is None:
        d[key] = c
        return
    v = v + c
    if v:
        d[key] = v
    else:
        del d[key]


class GradedBasis:
    """Ordered basis of a finite graded module, degrees in the original grading."""

    def __init__(self, elements: Iterable, *, allow_negative: bool = False):
        names, degrees = [], []
        for el in elements:
            if isinstance(el, Mapping):
                name, deg = el["name"], el["degree"]
            else:
                name, deg = el
            name = str(name)
            if not isinstance(deg, int) or isinstance(deg, bool):
                raise ValueError(f"degree of {name!r} must be an integer, got {deg!r}")
            if deg < 0 and not allow_negative:
                raise ValueError(f"basis element {name!r} has negative degree {deg}")
            names.append(name)
            degrees.append(deg)
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate basis names: {dup}")
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self._deg = dict(zip(names, degrees))
        self._idx = {n: i for i, n in enumerate(names)}
        self.sdeg = {n: d - 1 for n, d in self._deg.items()}

    def degree(self, name: str) -> int:
        return self._deg[name]

    def shifted(self, name: str) -> int:
        return self._deg[name] - 1

    def index(self, name: str) -> int:
        return self._idx[name]

    def __contains__(self, name) -> bool:
        return name in self._deg

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return (isinstance(other, GradedBasis) and self.names == other.names
                and self.degrees == other.degrees)

    def __hash__(self):
        return hash((self.names, self.degrees))

    def __repr__(self):
        return "GradedBasis(" + ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees)) + ")"

    def in_degree(self, d: int) -> list[str]:
        return [n for n in self.names if self._deg[n] == d]

    def degree_range(self) -> range:
        if not self.names:
            return range(0)
        return range(min(self.degrees), max(self.degrees) + 1)

    def words(self, k: int):
        return itertools.product(self.names, repeat=k)

    def dump(self) -> list:
        return [{"name": n, "degree": d} for n, d in zip(self.names, self.degrees)]

    def require(self, name: str, context: str = "") -> None:
        if name not in self._deg:
            where = f" in {context}" if context else ""
            raise KeyError(f"unknown basis element {name!r}{where}")


def shifted_degree(basis: GradedBasis, x, e_shifts: Sequence[int] | None = None) -> int:
    """Shifted degree ``deg - 1`` of a basis element, or the total of a word.

    ``e_shifts`` gives an e-exponent per letter; each contributes ``2 n``.
    """
    if isinstance(x, str):
        return basis.shifted(x) + (2 * e_shifts[0] if e_shifts else 0)
    total = sum(basis.shifted(a) for a in x)
    if e_shifts:
        total += 2 * sum(e_shifts)
    return total


class OpFamily:
    """Sparse gapped family of multilinear maps over the ground field.

    ``ops[(k, beta)]`` maps input words (k-tuples of source names) to a
    dict ``{target name: coefficient}``.  The Novikov weight
    ``T^lam e^{mu/2}`` of each component is implicit in ``beta``.
    """

    def __init__(self, ops: Mapping, field: Field = QQ):
        self.field = field
        clean = {}
        for (k, beta), table in ops.items():
            t = {}
            for word, out in table.items():
                o = {}
                for name, c in out.items():
                    accumulate(o, name, field(c))
                if o:
                    t[tuple(word)] = o
            if t:
                clean[(int(k), beta)] = t
        self.ops = clean
        by_arity: dict[int, list] = {}
        for (k, beta), table in sorted(clean.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            by_arity.setdefault(k, []).append((beta.lam, beta.mu // 2, table))
        self.by_arity = by_arity
        self.max_arity = max(by_arity, default=-1)

    def __getitem__(self, key):
        return self.ops.get(key, {})

    def keys(self):
        return sorted(self.ops)

    def items(self):
        return sorted(self.ops.items(), key=lambda kv: kv[0])

    def betas(self) -> set:
        return {b for _, b in self.ops}

    def __eq__(self, other):
        return isinstance(other, OpFamily) and self.ops == other.ops

    def __hash__(self):
        return hash(tuple(sorted(self.ops)))

    def __len__(self):
        return len(self.ops)


# ---------------------------------------------------------------------------
# core sparse algorithms


def coderivation(family: OpFamily, vec: Mapping, sdeg: Mapping, cutoff: Fraction,
                 *, arities: Iterable[int] | None = None) -> dict:
    """Apply the coderivation extension of ``family`` to a bar vector.

    Each block ``x_i..x_{i+k-1}`` is replaced by ``m_k`` of it with sign
    ``(-1)^(deg' x_1 + ... + deg' x_{i-1})``; ``m_0`` is inserted in every gap.
    """
    out: dict = {}
    ars = sorted(family.by_arity) if arities is None else sorted(arities)
    for (word, lam0, n0), c0 in vec.items():
        N = len(word)
        prefix = [0]
        for a in word:
            prefix.append(prefix[-1] + sdeg[a])
        for k in ars:
            if k > N:
                break
            comps = family.by_arity.get(k)
            if not comps:
                continue
            for i in range(N - k + 1):
                sub = word[i:i + k]
                c = -c0 if prefix[i] & 1 else c0
                head, tail = word[:i], word[i + k:]
                for lam, n, table in comps:
                    lam1 = lam0 + lam
                    if lam1 >= cutoff:
                        continue
                    res = table.get(sub)
                    if not res:
                        continue
                    n1 = n0 + n
                    for name, a in res.items():
                        accumulate(out, (head + (name,) + tail, lam1, n1), c * a)
    return out


def apply_total(family: OpFamily, vec: Mapping, cutoff: Fraction) -> dict:
    """``m_*``: apply ``m_k`` to each whole word of length k; returns a chain vector."""
    out: dict = {}
    for (word, lam0, n0), c0 in vec.items():
        comps = family.by_arity.get(len(word))
        if not comps:
            continue
        for lam, n, table in comps:
            lam1 = lam0 + lam
            if lam1 >= cutoff:
                continue
            res = table.get(word)
            if not res:
                continue
            for name, a in res.items():
                accumulate(out, (name, lam1, n0 + n), c0 * a)
    return out


def zero_arity_terms(family: OpFamily) -> list:
    """``f_0(1)`` as a list of ``(name, lam, n, c)``; it must have positive energy."""
    terms = []
    for lam, n, table in family.by_arity.get(0, []):
        for name, c in table.get((), {}).items():
            if lam <= 0:
                raise ValueError("f_0(1) has a zero-energy term; the series e^{f_0} diverges")
            terms.append((name, lam, n, c))
    return terms


def _tensor_powers(f0: list, budget: Fraction, field: Field) -> list:
    """``1 + f0 + f0 (x) f0 + ...`` truncated below ``budget``."""
    out = [((), Fraction(0), 0, field.one)]
    layer = out
    while layer and f0:
        nxt: dict = {}
        for w, lam, n, c in layer:
            for name, l2, n2, c2 in f0:
                if lam + l2 < budget:
                    accumulate(nxt, (w + (name,), lam + l2, n + n2), c * c2)
        layer = [(w, lam, n, c) for (w, lam, n), c in nxt.items()]
        out.extend(layer)
    return out


def coalgebra_word(family: OpFamily, word: tuple, budget: Fraction, field: Field,
                   f0: list | None = None) -> dict:
    """``f-hat`` of a single word (coefficient 1), truncated below ``budget``."""
    if f0 is None:
        f0 = zero_arity_terms(family)
    k = len(word)
    memo: dict = {}
    powers_memo: dict = {}

    def powers(b):
        if b not in powers_memo:
            powers_memo[b] = _tensor_powers(f0, b, field)
        return powers_memo[b]

    def suffix(i: int, b: Fraction) -> dict:
        key = (i, b)
        if key in memo:
            return memo[key]
        res: dict = {}
        for pw, pl, pn, pc in powers(b):
            if i == k:
                accumulate(res, (pw, pl, pn), pc)
                continue
            for m in range(1, k - i + 1):
                comps = family.by_arity.get(m)
                if not comps:
                    continue
                sub = word[i:i + m]
                for lam, n, table in comps:
                    l1 = pl + lam
                    if l1 >= b:
                        continue
                    out = table.get(sub)
                    if not out:
                        continue
                    rest = suffix(i + m, b - l1)
                    for name, a in out.items():
                        head = pw + (name,)
                        ca = pc * a
                        for (rw, rl, rn), rc in rest.items():
                            accumulate(res, (head + rw, l1 + rl, pn + n + rn), ca * rc)
        memo[key] = res
        return res

    return suffix(0, budget)


def coalgebra_apply(family: OpFamily, vec: Mapping, cutoff: Fraction, field: Field) -> dict:
    """``f-hat`` applied to a bar vector."""
    f0 = zero_arity_terms(family)
    out: dict = {}
    for (word, lam0, n0), c0 in vec.items():
        for (w, lam, n), c in coalgebra_word(family, word, cutoff - lam0, field, f0).items():
            accumulate(out, (w, lam0 + lam, n0 + n), c0 * c)
    return out


def split_words(word: tuple, parts: int) -> list:
    """All ordered splittings of ``word`` into ``parts`` consecutive (possibly empty) words."""
    if parts == 1:
        return [(word,)]
    out = []
    for i in range(len(word) + 1):
        for rest in split_words(word[i:], parts - 1):
            out.append((word[:i],) + rest)
    return out


def coproduct_split(word: Sequence, parts: int = 2) -> list:
    """Terms of the iterated coproduct: ``Delta`` for parts=2, ``Delta^2`` for parts=3."""
    if parts < 1:
        raise ValueError("parts must be >= 1")
    return split_words(tuple(word), parts)


def delta(vec: Mapping) -> dict:
    """Coproduct of a bar vector as ``{((w1, w2), lam, n): c}``."""
    out: dict = {}
    for (word, lam, n), c in vec.items():
        for w1, w2 in split_words(word, 2):
            accumulate(out, ((w1, w2), lam, n), c)
    return out


def vec_add(a: Mapping, b: Mapping, sign: int = 1) -> dict:
    out = dict(a)
    for k, c in b.items():
        accumulate(out, k, c if sign > 0 else -c)
    return out


def vec_scale(a: Mapping, c) -> dict:
    out: dict = {}
    for k, v in a.items():
        accumulate(out, k, v * c)
    return out


def vec_truncate(a: Mapping, cutoff: Fraction) -> dict:
    return {k: c for k, c in a.items() if k[1] < cutoff}


def vec_mul_monomial(a: Mapping, lam: Fraction, n: int, c, cutoff: Fraction) -> dict:
    out: dict = {}
    for (x, l0, n0), v in a.items():
        if l0 + lam < cutoff:
            accumulate(out, (x, l0 + lam, n0 + n), v * c)
    return out


def apply_linear(matrix: Mapping, vec: Mapping) -> dict:
    """Apply a field-linear map ``{source: {target: coeff}}`` to a chain vector."""
    out: dict = {}
    for (name, lam, n), c in vec.items():
        for tgt, a in matrix.get(name, {}).items():
            accumulate(out, (tgt, lam, n), c * a)
    return out


# ---------------------------------------------------------------------------
# public value types


class Chain:
    """Element of ``C[1] (x) Lambda_0`` truncated below ``cutoff``."""

    __slots__ = ("basis", "terms", "cutoff", "field", "floor")

    def __init__(self, basis: GradedBasis, terms: Mapping | None = None, cutoff=1,
                 field: Field = QQ, floor=0):
        self.basis = basis
        self.cutoff = as_energy(cutoff, allow_negative=True)
        self.floor = as_energy(floor, allow_negative=True)
        self.field = field
        clean: dict = {}
        for (name, lam, n), c in (terms or {}).items():
            basis.require(name, "chain")
            lam = as_energy(lam, allow_negative=True)
            if lam < self.floor:
                raise ValueError(f"energy {lam} below floor {self.floor}")
            if lam < self.cutoff:
                accumulate(clean, (name, lam, int(n)), field(c))
        self.terms = clean

    @classmethod
    def from_coeffs(cls, basis: GradedBasis, coeffs: Mapping[str, NovElement], cutoff=None,
                    field: Field | None = None) -> "Chain":
        terms: dict = {}
        for name, nov in coeffs.items():
            cutoff = nov.cutoff if cutoff is None else cutoff
            field = nov.field if field is None else field
            for (lam, n), a in nov.terms.items():
                accumulate(terms, (name, lam, n), a)
        return cls(basis, terms, cutoff if cutoff is not None else 1, field or QQ)

    @classmethod
    def basis_element(cls, basis: GradedBasis, name: str, cutoff=1, field: Field = QQ,
                      lam=0, n: int = 0, coeff=1) -> "Chain":
        return cls(basis, {(name, as_energy(lam), n): coeff}, cutoff, field)

    def coefficient(self, name: str) -> NovElement:
        return NovElement({(lam, n): c for (x, lam, n), c in self.terms.items() if x == name},
                          self.cutoff, self.field, self.floor)

    def coefficients(self) -> dict:
        return {name: self.coefficient(name) for name in self.support()}

    def support(self) -> list:
        names = {x for x, _, _ in self.terms}
        return [n for n in self.basis.names if n in names]

    def valuation(self) -> Fraction | None:
        return min((lam for _, lam, _ in self.terms), default=None)

    def energies(self) -> list:
        return sorted({lam for _, lam, _ in self.terms})

    def at_energy(self, lam: Fraction) -> "Chain":
        return Chain(self.basis, {k: c for k, c in self.terms.items() if k[1] == lam},
                     self.cutoff, self.field, self.floor)

    def shifted_degrees(self) -> set:
        return {self.basis.shifted(x) + 2 * n for x, _, n in self.terms}

    def is_homogeneous(self, sdeg: int | None = None) -> bool:
        ds = self.shifted_degrees()
        if sdeg is None:
            return len(ds) <= 1
        return ds <= {sdeg}

    def truncate(self, cutoff) -> "Chain":
        return Chain(self.basis, self.terms, cutoff, self.field, self.floor)

    def _check(self, other):
        if not isinstance(other, Chain):
            raise TypeError("expected Chain")
        if other.basis != self.basis:
            raise ValueError("chains live on different bases")
        if other.cutoff != self.cutoff or other.field != self.field:
            raise ValueError("cutoff/field mismatch")

    def __add__(self, other):
        self._check(other)
        return Chain(self.basis, vec_add(self.terms, other.terms), self.cutoff, self.field,
                     min(self.floor, other.floor))

    def __sub__(self, other):
        self._check(other)
        return Chain(self.basis, vec_add(self.terms, other.terms, -1), self.cutoff, self.field,
                     min(self.floor, other.floor))

    def __neg__(self):
        return Chain(self.basis, vec_scale(self.terms, -self.field.one), self.cutoff, self.field,
                     self.floor)

    def __mul__(self, c):
        if isinstance(c, NovElement):
            out: dict = {}
            for (lam, n), a in c.terms.items():
                for k, v in vec_mul_monomial(self.terms, lam, n, a, self.cutoff).items():
                    accumulate(out, k, v)
            return Chain(self.basis, out, self.cutoff, self.field, self.floor + c.floor)
        return Chain(self.basis, vec_scale(self.terms, self.field(c)), self.cutoff, self.field,
                     self.floor)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.basis == other.basis and self.cutoff == other.cutoff
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def dump(self) -> list:
        out = []
        for name in self.support():
            out.append({"basis": name, "coeff": self.coefficient(name).dump()})
        return out

    @classmethod
    def load(cls, basis: GradedBasis, data: list, cutoff, field: Field = QQ, floor=0) -> "Chain":
        terms: dict = {}
        for entry in data:
            name = entry["basis"]
            basis.require(name, "chain")
            coeff = entry["coeff"]
            if isinstance(coeff, list):
                for t in coeff:
                    accumulate(terms, (name, as_energy(t["lambda"], allow_negative=True),
                                       int(t.get("e", 0))), field(t["coeff"]))
            else:
                accumulate(terms, (name, Fraction(0), 0), field(coeff))
        return cls(basis, terms, cutoff, field, floor)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (x, lam, n), c in sorted(self.terms.items(),
                                     key=lambda kv: (kv[0][1], kv[0][2], self.basis.index(kv[0][0]))):
            mono = "".join([f"T^{dump_energy(lam)}" if lam else "", f"e^{n}" if n else ""])
            parts.append(f"{c}*{mono + '*' if mono else ''}{x}")
        return " + ".join(parts)


class BarElement:
    """Element of the completed bar coalgebra ``B(C[1])``, truncated below ``cutoff``."""

    __slots__ = ("basis", "terms", "cutoff", "field")

    def __init__(self, basis: GradedBasis, terms: Mapping | None = None, cutoff=1,
                 field: Field = QQ):
        self.basis = basis
        self.cutoff = as_energy(cutoff)
        self.field = field
        clean: dict = {}
        for (word, lam, n), c in (terms or {}).items():
            word = tuple(word)
            for a in word:
                basis.require(a, "bar word")
            lam = as_energy(lam)
            if lam < self.cutoff:
                accumulate(clean, (word, lam, int(n)), field(c))
        self.terms = clean

    @classmethod
    def word(cls, basis: GradedBasis, word: Sequence[str], cutoff=1, field: Field = QQ,
             lam=0, n: int = 0, coeff=1) -> "BarElement":
        return cls(basis, {(tuple(word), as_energy(lam), n): coeff}, cutoff, field)

    @classmethod
    def unit(cls, basis: GradedBasis, cutoff=1, field: Field = QQ) -> "BarElement":
        return cls.word(basis, (), cutoff, field)

    def __add__(self, other):
        return BarElement(self.basis, vec_add(self.terms, other.terms), self.cutoff, self.field)

    def __sub__(self, other):
        return BarElement(self.basis, vec_add(self.terms, other.terms, -1), self.cutoff, self.field)

    def __neg__(self):
        return BarElement(self.basis, vec_scale(self.terms, -self.field.one), self.cutoff,
                          self.field)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, BarElement):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def lengths(self) -> set:
        return {len(w) for w, _, _ in self.terms}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w, lam, n), c in sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
            mono = "".join([f"T^{dump_energy(lam)}" if lam else "", f"e^{n}" if n else ""])
            parts.append(f"{c}*{mono}[{','.join(w)}]")
        return " + ".join(parts)


def _as_family(op, field: Field) -> OpFamily:
    if isinstance(op, OpFamily):
        return op
    if hasattr(op, "family"):
        return op.family
    if hasattr(op, "as_family"):
        return op.as_family()
    raise TypeError(f"cannot use {type(op).__name__} as an operation family")


def coderivation_extend(op, w, basis: GradedBasis, cutoff=1, field: Field = QQ) -> BarElement:
    """Graded coderivation extension of an operation (or family) applied to a word or bar element."""
    fam = _as_family(op, field)
    vec = w.terms if isinstance(w, BarElement) else {(tuple(w), Fraction(0), 0): field.one}
    if isinstance(w, BarElement):
        cutoff = w.cutoff
    cutoff = as_energy(cutoff)
    return BarElement(basis, coderivation(fam, vec, basis.sdeg, cutoff), cutoff, field)


def coalgebra_extend(f, w, target: GradedBasis, cutoff=1, field: Field = QQ) -> BarElement:
    """Coalgebra-homomorphism extension ``f-hat`` applied to a word or bar element."""
    fam = _as_family(f, field)
    vec = w.terms if isinstance(w, BarElement) else {(tuple(w), Fraction(0), 0): field.one}
    if isinstance(w, BarElement):
        cutoff = w.cutoff
    cutoff = as_energy(cutoff)
    return BarElement(target, coalgebra_apply(fam, vec, cutoff, field), cutoff, field)


def gap_from_key(lam: Fraction, n: int) -> Gap:
    return Gap(lam, 2 * n)
