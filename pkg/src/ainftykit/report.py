"""Residual reports shared by every verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .novikov import dump_energy


@dataclass(frozen=True)
class Residual:
    """One failing relation component.

    ``terms`` maps ``(basis name, e exponent)`` to a nonzero scalar; the
    energy of every term is ``energy``.
    """

    arity: int
    energy: Fraction
    word: tuple
    terms: tuple
    kind: str = "relation"
    severity: str = "error"

    def render(self) -> str:
        body = " + ".join(f"{c}*{'e^%d*' % n if n else ''}{x}" for (x, n), c in self.terms)
        w = ",".join(str(a) for a in self.word)
        return (f"[{self.severity}] {self.kind} k={self.arity} "
                f"lambda={dump_energy(self.energy)} word=({w}): {body}")

    def dump(self, field) -> dict:
        return {
            "kind": self.kind,
            "severity": self.severity,
            "arity": self.arity,
            "lambda": dump_energy(self.energy),
            "word": [str(a) for a in self.word],
            "residual": [{"basis": x, "e": n, "coeff": field.dump(c)} for (x, n), c in self.terms],
        }


@dataclass
class Report:
    """Ordered collection of residuals; empty means the check passed."""

    title: str = "report"
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def add(self, r: Residual) -> None:
        self.entries.append(r)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for r in other.entries:
            if prefix:
                r = Residual(r.arity, r.energy, r.word, r.terms, prefix + r.kind, r.severity)
            self.entries.append(r)
        self.notes.extend(other.notes)

    def sort(self) -> "Report":
        self.entries.sort(key=lambda r: (r.energy, r.arity, r.kind, tuple(map(str, r.word))))
        return self

    def lowest(self) -> Residual | None:
        return min(self.entries, key=lambda r: (r.energy, r.arity), default=None)

    def energies(self) -> list:
        return sorted({r.energy for r in self.entries})

    def render(self, limit: int = 20) -> str:
        if self.ok:
            return f"{self.title}: PASS" + "".join(f"\n  note: {n}" for n in self.notes)
        lines = [f"{self.title}: FAIL ({len(self.entries)} residual components)"]
        for r in self.entries[:limit]:
            lines.append("  " + r.render())
        if len(self.entries) > limit:
            lines.append(f"  ... {len(self.entries) - limit} more")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)

    def dump(self, field) -> dict:
        return {"title": self.title, "pass": self.ok, "notes": list(self.notes),
                "entries": [r.dump(field) for r in self.entries]}


def residuals_from_vec(vec: dict, arity: int, word: tuple, keep, kind: str = "relation") -> list:
    """Split a chain vector ``{(name, lam, n): c}`` into per-energy residuals.

    ``keep(lam)`` decides whether an energy level is inside the checked region.
    """
    by_energy: dict = {}
    for (x, lam, n), c in vec.items():
        if keep(lam):
            by_energy.setdefault(lam, []).append(((x, n), c))
    return [Residual(arity, lam, tuple(word), tuple(sorted(t, key=lambda kv: (kv[0][0], kv[0][1]))), kind)
            for lam, t in sorted(by_energy.items())]
