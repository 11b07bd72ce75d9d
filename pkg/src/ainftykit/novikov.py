"""Exact scalars, energies and the truncated universal Novikov ring.

Everything here is immutable.  Energies are :class:`fractions.Fraction`
values; the ground field is either the rationals or a prime field, chosen
once per session through a :class:`Field` instance that every structure
carries around.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple


class ModP:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o, self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """The ground field: ``Field()`` is Q, ``Field(p)`` is F_p."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @classmethod
    def parse(cls, spec: str | None) -> "Field":
        if spec in (None, "", "Q", "QQ", "q"):
            return cls()
        s = str(spec).upper().replace("GF", "F").replace("(", "_").replace(")", "")
        if s.startswith("F"):
            s = s[1:].lstrip("_")
        try:
            return cls(int(s))
        except ValueError:
            raise ValueError(f"unknown field {spec!r}; use Q or F_p") from None

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F_{self.p}"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __call__(self, x):
        """Coerce an int, Fraction, ModP or ``"a/b"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        elif isinstance(x, float):
            raise TypeError("floating point scalars are not accepted")
        if self.p is None:
            if isinstance(x, ModP):
                raise TypeError("cannot coerce an F_p element into Q")
            return Fraction(x)
        if isinstance(x, ModP):
            if x.p != self.p:
                raise ValueError(f"element of F_{x.p} used over {self.name}")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return ModP(int(x), self.p)

    def dump(self, c):
        """JSON-friendly form of a scalar: ``"a/b"`` over Q, an int over F_p."""
        if self.p is None:
            c = Fraction(c)
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return int(self(c))

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.name})"


QQ = Field()


def as_energy(x, *, allow_negative: bool = False) -> Fraction:
    """Exact rational energy; floats are refused because equality must be decidable."""
    if isinstance(x, bool):
        raise TypeError("boolean is not an energy")
    if isinstance(x, float):
        raise TypeError(f"energy {x!r} given as float; pass an int, Fraction or 'p/q' string")
    if isinstance(x, str):
        x = x.strip()
    try:
        e = Fraction(x)
    except (ValueError, TypeError):
        raise ValueError(f"energy {x!r} is not an exact rational") from None
    if e < 0 and not allow_negative:
        raise ValueError(f"energy {e} is negative")
    return e


def dump_energy(e: Fraction) -> str:
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


class Gap(NamedTuple):
    """A gap class beta = (energy, Maslov index) with even Maslov index."""

    lam: Fraction
    mu: int

    @property
    def e(self) -> int:
        return self.mu // 2

    def __add__(self, other):  # type: ignore[override]
        return Gap(self.lam + other.lam, self.mu + other.mu)

    def dump(self) -> dict:
        return {"lambda": dump_energy(self.lam), "mu": self.mu}

    def __str__(self):
        return f"({dump_energy(self.lam)},{self.mu})"


ZERO_GAP = Gap(Fraction(0), 0)


def gap(lam, mu: int = 0, *, allow_negative: bool = False) -> Gap:
    lam = as_energy(lam, allow_negative=allow_negative)
    mu = int(mu)
    if mu % 2:
        raise ValueError(f"Maslov index {mu} is odd")
    if lam == 0 and mu != 0:
        raise ValueError(f"class ({lam},{mu}) has zero energy but nonzero Maslov index")
    return Gap(lam, mu)


def parse_gap(d: Mapping, *, allow_negative: bool = False) -> Gap:
    return gap(d["lambda"], d.get("mu", 0), allow_negative=allow_negative)


class GapMonoid:
    """Finite truncation ``{beta in G : pr_1(beta) < cutoff}`` of a gap monoid."""

    def __init__(self, classes: Iterable[Gap], cutoff, generators: Iterable[Gap] = ()):
        self.cutoff = as_energy(cutoff)
        cls = set(classes) | {ZERO_GAP}
        for b in cls:
            if b.lam >= self.cutoff:
                raise ValueError(f"class {b} is not below the cutoff {self.cutoff}")
        self.classes = frozenset(cls)
        self.generators = tuple(sorted(set(generators)))
        self.levels = tuple(sorted({b.lam for b in cls}))

    @property
    def gap_energy(self) -> Fraction | None:
        """Smallest positive level, or None for the trivial monoid."""
        return self.levels[1] if len(self.levels) > 1 else None

    def level_index(self, lam: Fraction) -> int:
        return self.levels.index(lam)

    def classes_at(self, lam: Fraction) -> list[Gap]:
        return sorted(b for b in self.classes if b.lam == lam)

    def __contains__(self, b) -> bool:
        return b in self.classes

    def __iter__(self):
        return iter(sorted(self.classes))

    def __len__(self):
        return len(self.classes)

    def __eq__(self, other):
        return (isinstance(other, GapMonoid) and self.classes == other.classes
                and self.cutoff == other.cutoff)

    def __hash__(self):
        return hash((self.classes, self.cutoff))

    def __repr__(self):
        return f"GapMonoid({', '.join(map(str, sorted(self.classes)))}; cutoff={self.cutoff})"

    def with_cutoff(self, cutoff) -> "GapMonoid":
        return monoid_closure(self.generators or [b for b in self.classes if b != ZERO_GAP], cutoff)

    def enlarged(self, extra: Iterable[Gap]) -> "GapMonoid":
        gens = set(self.generators or [b for b in self.classes if b != ZERO_GAP])
        gens |= {b for b in extra if b != ZERO_GAP}
        return monoid_closure(gens, self.cutoff)


def monoid_closure(generators: Iterable[Gap], cutoff) -> GapMonoid:
    """All finite sums of ``generators`` with energy below ``cutoff``, plus (0,0)."""
    cutoff = as_energy(cutoff)
    gens = []
    for g in generators:
        g = gap(g[0], g[1]) if not isinstance(g, Gap) else g
        if g.lam == 0:
            if g.mu != 0:
                raise ValueError(f"generator {g} has zero energy and nonzero Maslov index")
            continue
        gens.append(g)
    gens = sorted(set(gens))
    found = {ZERO_GAP}
    frontier = [ZERO_GAP]
    while frontier:
        new = []
        for b in frontier:
            for g in gens:
                s = b + g
                if s.lam < cutoff and s not in found:
                    found.add(s)
                    new.append(s)
        frontier = new
    # keep only the indecomposable generators
    pos = found - {ZERO_GAP}
    minimal = [g for g in gens
               if not any(Gap(g.lam - a.lam, g.mu - a.mu) in pos for a in pos if a.lam < g.lam)]
    return GapMonoid(found, cutoff, minimal)


class NovElement:
    """Truncated element of the Novikov ring: sum of ``a * T^lam * e^n`` with ``lam < cutoff``.

    ``floor`` is the lowest admissible energy; it is 0 for the ring itself and
    negative only for the Laurent-type coefficients used by bimodule
    homomorphisms with energy loss.
    """

    __slots__ = ("_terms", "cutoff", "field", "floor")

    def __init__(self, terms: Mapping | None = None, cutoff=1, field: Field = QQ, floor=0):
        self.cutoff = as_energy(cutoff, allow_negative=True)
        self.floor = as_energy(floor, allow_negative=True)
        self.field = field
        clean = {}
        for key, a in (terms or {}).items():
            lam, n = key
            lam = as_energy(lam, allow_negative=True)
            if lam < self.floor:
                raise ValueError(f"energy {lam} below the floor {self.floor}")
            if lam >= self.cutoff:
                continue
            a = field(a)
            k = (lam, int(n))
            a = clean.get(k, field.zero) + a
            if a:
                clean[k] = a
            else:
                clean.pop(k, None)
        self._terms = clean

    @classmethod
    def monomial(cls, lam=0, n: int = 0, coeff=1, cutoff=1, field: Field = QQ, floor=0):
        return cls({(lam, n): coeff}, cutoff, field, floor)

    @classmethod
    def one(cls, cutoff, field: Field = QQ):
        return cls({(0, 0): 1}, cutoff, field)

    @classmethod
    def zero(cls, cutoff, field: Field = QQ, floor=0):
        return cls({}, cutoff, field, floor)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def _check(self, other: "NovElement"):
        if not isinstance(other, NovElement):
            raise TypeError(f"expected NovElement, got {type(other).__name__}")
        if other.cutoff != self.cutoff:
            raise ValueError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field.name} vs {other.field.name}")

    def __add__(self, other):
        self._check(other)
        t = dict(self._terms)
        for k, a in other._terms.items():
            t[k] = t.get(k, self.field.zero) + a
        return NovElement(t, self.cutoff, self.field, min(self.floor, other.floor))

    def __neg__(self):
        return NovElement({k: -a for k, a in self._terms.items()}, self.cutoff, self.field, self.floor)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, NovElement):
            c = self.field(other)
            return NovElement({k: a * c for k, a in self._terms.items()},
                              self.cutoff, self.field, self.floor)
        self._check(other)
        t = {}
        zero = self.field.zero
        for (l1, n1), a in self._terms.items():
            for (l2, n2), b in other._terms.items():
                lam = l1 + l2
                if lam >= self.cutoff:
                    continue
                k = (lam, n1 + n2)
                t[k] = t.get(k, zero) + a * b
        return NovElement(t, self.cutoff, self.field, self.floor + other.floor)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, NovElement):
            return NotImplemented
        return (self.cutoff == other.cutoff and self.field == other.field
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.cutoff, frozenset(self._terms.items())))

    def __bool__(self):
        return bool(self._terms)

    def valuation(self) -> Fraction | None:
        """Lowest energy present, or None for zero (valuation +infinity)."""
        return min((lam for lam, _ in self._terms), default=None)

    def truncate(self, cutoff) -> "NovElement":
        cutoff = as_energy(cutoff, allow_negative=True)
        return NovElement({k: a for k, a in self._terms.items() if k[0] < cutoff},
                          cutoff, self.field, self.floor)

    def dump(self) -> list:
        return [{"lambda": dump_energy(lam), "e": n, "coeff": self.field.dump(a)}
                for (lam, n), a in self.items()]

    @classmethod
    def load(cls, data: list, cutoff, field: Field = QQ, floor=0) -> "NovElement":
        terms = {}
        for t in data:
            k = (as_energy(t["lambda"], allow_negative=True), int(t.get("e", 0)))
            terms[k] = terms.get(k, field.zero) + field(t["coeff"])
        return cls(terms, cutoff, field, floor)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for (lam, n), a in self.items():
            mono = "".join([f"T^{dump_energy(lam)}" if lam else "",
                            f"e^{n}" if n else ""]) or "1"
            parts.append(f"{a}*{mono}" if mono != "1" else f"{a}")
        return " + ".join(parts)
