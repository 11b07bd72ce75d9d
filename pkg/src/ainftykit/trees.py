"""Decorated planar rooted trees.

A tree is either the bare leaf or an interior vertex carrying an energy
level index ``eta`` and an ordered tuple of children.  The root exterior
vertex is implicit: it sits above the top node.  So ``LEAF`` on its own is
the two-vertex tree with no interior vertex, and a childless interior
vertex is a tadpole.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor
from typing import Sequence


class Tree:
    __slots__ = ("eta", "children", "key", "leaves", "levels", "_hash")

    _interned: dict = {}

    def __new__(cls, eta: int | None, children: tuple = ()):
        children = tuple(children)
        if eta is None and children:
            raise ValueError("a leaf has no children")
        key = "L" if eta is None else f"v{eta}(" + ",".join(c.key for c in children) + ")"
        t = cls._interned.get(key)
        if t is not None:
            return t
        t = object.__new__(cls)
        t.eta = eta
        t.children = children
        t.key = key
        t.leaves = 1 if eta is None else sum(c.leaves for c in children)
        t.levels = () if eta is None else (eta,) + tuple(x for c in children for x in c.levels)
        t._hash = hash(key)
        cls._interned[key] = t
        return t

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, Tree) and self.key == other.key)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"Tree({self.key})"

    @property
    def is_leaf(self) -> bool:
        return self.eta is None

    @property
    def arity(self) -> int:
        return len(self.children)

    def energy(self, levels: Sequence[Fraction]) -> Fraction:
        return sum((levels[i] for i in self.levels), Fraction(0))

    def interior_count(self) -> int:
        return len(self.levels)

    def tadpoles(self) -> int:
        if self.eta is None:
            return 0
        return (1 if not self.children else 0) + sum(c.tadpoles() for c in self.children)

    def interior_edges(self) -> int:
        if self.eta is None:
            return 0
        return sum((0 if c.is_leaf else 1) + c.interior_edges() for c in self.children)

    def parent_array(self) -> tuple:
        """Preorder parent array (-1 for the top node) and per-node labels."""
        parents, labels = [], []

        def walk(t, p):
            i = len(parents)
            parents.append(p)
            labels.append("L" if t.eta is None else t.eta)
            for c in t.children:
                walk(c, i)

        walk(self, -1)
        return tuple(parents), tuple(labels)

    def valid(self) -> bool:
        """Membership in G+: valency-1 or valency-2 interior vertices need positive level."""
        if self.eta is None:
            return True
        if len(self.children) <= 1 and self.eta == 0:
            return False
        return all(c.valid() for c in self.children)


LEAF = Tree(None)


def parse_tree(key: str) -> Tree:
    """Inverse of ``Tree.key``."""
    pos = 0

    def node():
        nonlocal pos
        if key.startswith("L", pos):
            pos += 1
            return LEAF
        if key[pos] != "v":
            raise ValueError(f"bad tree id {key!r} at {pos}")
        j = key.index("(", pos)
        eta = int(key[pos + 1:j])
        pos = j + 1
        kids = []
        while key[pos] != ")":
            kids.append(node())
            if key[pos] == ",":
                pos += 1
        pos += 1
        return Tree(eta, tuple(kids))

    try:
        t = node()
    except IndexError:
        raise ValueError(f"truncated tree id {key!r}") from None
    if pos != len(key):
        raise ValueError(f"trailing characters in tree id {key!r}")
    return t


class TreeEnumerator:
    """Enumerates trees by leaf count and energy with memoisation."""

    def __init__(self, levels: Sequence[Fraction]):
        self.levels = tuple(levels)
        self._all: dict = {}
        self._seq: dict = {}

    def rooted(self, k: int, budget: Fraction) -> list:
        """All valid trees with ``k`` leaves and energy ``< budget`` (LEAF included for k=1)."""
        key = (k, budget)
        if key in self._all:
            return self._all[key]
        out = []
        if k == 1 and budget > 0:
            out.append((LEAF, Fraction(0)))
        for eta, lam in enumerate(self.levels):
            if lam >= budget:
                break
            # a vertex of valency <= 2 needs positive level
            for kids, e in self.sequences(k, budget - lam, 2 if eta == 0 else 0):
                out.append((Tree(eta, kids), lam + e))
        self._all[key] = out
        return out

    def sequences(self, k: int, budget: Fraction, min_len: int = 0) -> list:
        """Ordered children tuples of length >= ``min_len`` with ``k`` leaves and energy ``< budget``."""
        key = (k, budget, min_len)
        if key in self._seq:
            return self._seq[key]
        lam1 = self.levels[1] if len(self.levels) > 1 else None
        out = []
        if min_len == 0 and k == 0:
            out.append(((), Fraction(0)))
        if budget > 0:
            for k1 in range(k + 1):
                b1 = budget
                if min_len >= 2 and k1 == k:
                    # the remaining children carry no leaves, so they cost at least lam1
                    if lam1 is None:
                        continue
                    b1 = budget - lam1
                for t, e in self.rooted(k1, b1):
                    for rest, e2 in self.sequences(k - k1, budget - e, max(min_len - 1, 0)):
                        out.append(((t,) + rest, e + e2))
        self._seq[key] = out
        return out


def enumerate_trees(k: int, monoid, energy_cutoff, arity_cutoff: int | None = None) -> list:
    """Trees of G+_{k+1} with ``E < energy_cutoff`` inside the arity/energy region.

    Returned as ``(tree, energy)`` pairs in canonical order.
    """
    levels = monoid.levels if hasattr(monoid, "levels") else tuple(monoid)
    cutoff = Fraction(energy_cutoff)
    lam1 = levels[1] if len(levels) > 1 else None
    en = TreeEnumerator(levels)
    out = []
    for t, e in en.rooted(k, cutoff):
        if arity_cutoff is not None:
            if k + (floor(e / lam1) if lam1 and e else 0) > arity_cutoff:
                continue
        out.append((t, e))
    out.sort(key=lambda te: (te[1], te[0].interior_count(), te[0].key))
    return out
