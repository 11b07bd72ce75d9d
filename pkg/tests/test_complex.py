from fractions import Fraction

import pytest

from ainftykit.complex import (
    BarElement, Chain, GradedBasis, OpFamily, coalgebra_apply, coderivation, coproduct_split,
    delta, split_words,
)
from ainftykit.novikov import QQ, ZERO_GAP, gap

B = GradedBasis([("a", 1), ("b", 2), ("c", 0)])


def test_basis_validation():
    with pytest.raises(ValueError):
        GradedBasis([("a", -1)])
    with pytest.raises(ValueError):
        GradedBasis([("a", 0), ("a", 1)])
    assert B.sdeg == {"a": 0, "b": 1, "c": -1}
    with pytest.raises(KeyError):
        B.require("z")


def test_chain_arithmetic_and_roundtrip():
    x = Chain(B, {("a", 1, 0): 2, ("b", Fraction(1, 2), 1): -1}, 3)
    y = Chain(B, {("a", 1, 0): -2}, 3)
    assert (x + y).terms == {("b", Fraction(1, 2), 1): -1}
    assert Chain.load(B, x.dump(), 3) == x
    assert x.valuation() == Fraction(1, 2)
    with pytest.raises(KeyError):
        Chain(B, {("zz", 0, 0): 1}, 3)


def test_split_words_counts():
    w = ("a", "b", "c")
    assert len(split_words(w, 2)) == 4
    assert len(coproduct_split(w, 3)) == 10
    assert all(sum(map(len, parts)) == 3 for parts in split_words(w, 3))


def test_coproduct_is_coassociative():
    vec = {(("a", "b", "a"), Fraction(0), 0): 1}
    left = {}
    for ((w1, w2), lam, n), c in delta(vec).items():
        for ((u, v), _, _), _ in delta({(w1, lam, n): c}).items():
            left[(u, v, w2)] = left.get((u, v, w2), 0) + c
    right = {}
    for ((w1, w2), lam, n), c in delta(vec).items():
        for ((u, v), _, _), _ in delta({(w2, lam, n): c}).items():
            right[(w1, u, v)] = right.get((w1, u, v), 0) + c
    assert left == right


def test_coderivation_signs():
    # m1(a) = b; a has shifted degree 0, b has shifted degree 1
    fam = OpFamily({(1, ZERO_GAP): {("a",): {"b": 1}}, (1, gap(1, 2)): {("b",): {"c": 3}}})
    vec = {(("b", "a"), Fraction(0), 0): 1}
    out = coderivation(fam, vec, B.sdeg, Fraction(2))
    # passing b (odd) flips the sign of m1 acting on a
    assert out == {(("b", "b"), Fraction(0), 0): -1, (("c", "a"), Fraction(1), 1): 3}


def test_coderivation_inserts_m0_in_every_gap():
    fam = OpFamily({(0, gap(1, 0)): {(): {"a": 1}}})
    out = coderivation(fam, {(("b",), Fraction(0), 0): 1}, B.sdeg, Fraction(2))
    # b is odd: inserting after it costs a sign
    assert out == {(("a", "b"), Fraction(1), 0): 1, (("b", "a"), Fraction(1), 0): -1}


def test_coalgebra_hat_with_f0():
    fam = OpFamily({(0, gap(1, 0)): {(): {"a": 1}}, (1, ZERO_GAP): {("b",): {"b": 1}}})
    out = coalgebra_apply(fam, {(("b",), Fraction(0), 0): 1}, Fraction(2), QQ)
    # f-hat(b) = e^{f0} f1(b) e^{f0}, truncated below energy 2
    assert out == {(("b",), Fraction(0), 0): 1, (("a", "b"), Fraction(1), 0): 1,
                   (("b", "a"), Fraction(1), 0): 1}


def test_bar_element_basics():
    w = BarElement.word(B, ["a", "b"], 2)
    assert w.lengths() == {2}
    assert (w - w) == 0
    assert BarElement.unit(B).lengths() == {0}
