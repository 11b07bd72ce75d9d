import random
from collections import Counter
from fractions import Fraction

import pytest

from ainftykit import (
    TransferData, TransferDataError, hodge_transfer_data, normalize_homotopy,
    oracle_transfer_low_arity, transfer, verify_ainfty, verify_homomorphism,
)
from ainftykit.novikov import ZERO_GAP, GapMonoid, gap, monoid_closure
from ainftykit.testing import heisenberg_dga, random_dga, random_filtered_algebra, truncated_dga
from ainftykit.transfer import lmap_compose, transferred_tensor
from ainftykit.trees import LEAF, enumerate_trees, parse_tree
from oracles import assert_transfer_identities, count_trees


def test_tree_counts_unfiltered():
    M = GapMonoid([], 1)
    assert [len(enumerate_trees(k, M, 1)) for k in range(1, 6)] == [1, 1, 3, 11, 45]


@pytest.mark.parametrize("k", range(5))
def test_tree_counts_against_brute_force(k):
    M = monoid_closure([gap(1, 0), gap(Fraction(3, 2), 2)], 3)
    got = Counter(e for _, e in enumerate_trees(k, M, 3))
    assert dict(got) == count_trees(k, M.levels, 3)


def test_tree_ids_roundtrip():
    M = monoid_closure([gap(1, 0)], 3)
    for k in range(4):
        for t, _ in enumerate_trees(k, M, 3, 4):
            assert parse_tree(t.key) is t
    assert parse_tree("L") is LEAF
    with pytest.raises(ValueError):
        parse_tree("v0(L,L")


def test_region_truncation_of_trees():
    M = monoid_closure([gap(1, 0)], 5)
    for k in range(4):
        for t, e in enumerate_trees(k, M, 5, 3):
            assert k + int(e) <= 3


def test_hodge_data_satisfies_transfer_equations():
    rng = random.Random(0)
    for _ in range(10):
        A = random_dga(rng).to_ainfty()
        T = hodge_transfer_data(A, rng=rng, extra_pairs=rng.choice([0, 1]))
        assert T.check(side=True) == []
        assert_transfer_identities(T)


def test_bad_transfer_data_rejected():
    A = heisenberg_dga().to_ainfty()
    T = hodge_transfer_data(A)
    G = {x: dict(v) for x, v in T.G.items()}
    G["xy"] = {"z": 2}
    with pytest.raises(TransferDataError) as e:
        normalize_homotopy(A.basis, T.H, T.iota, T.proj, G, T.m1, A.field)
    assert "homotopy equation fails" in str(e.value)
    with pytest.raises(TransferDataError):
        TransferData(A.basis, T.H, T.iota, T.proj, G, T.m1, A.field)


def test_normalization_restores_side_conditions():
    A = truncated_dga(3).to_ainfty()
    T = hodge_transfer_data(A)
    # adding m1 K m1 with K of degree -3 keeps the homotopy equation but spoils G^2 = 0
    cn = list(A.basis.names)
    K = {"x2": {"y": 1}}
    bump = lmap_compose(T.m1, lmap_compose(K, T.m1))
    G2 = {x: dict(T.G.get(x, {})) for x in cn}
    for x, v in bump.items():
        for y, c in v.items():
            G2.setdefault(x, {})[y] = G2.get(x, {}).get(y, 0) + c
    raw = TransferData(A.basis, T.H, T.iota, T.proj, G2, T.m1, A.field, check=False)
    assert raw.check(side=True) != []
    T2 = normalize_homotopy(A.basis, T.H, T.iota, T.proj, G2, T.m1, A.field, side_conditions=True)
    assert T2.check(side=True) == []


def test_heisenberg_massey_product():
    A = heisenberg_dga().to_ainfty()
    T = hodge_transfer_data(A)
    res = transfer(A, T, arity_cutoff=3)
    assert not res.algebra.ops[(1, ZERO_GAP)]
    # by hand: m2(x, y) = xy, G(xy) = z, m2(x, z) = xz, and m2(x, x) = 0
    assert transferred_tensor(res, 3)[("x", "x", "y")] == {"xz": 1}
    assert transferred_tensor(res, 3) == oracle_transfer_low_arity(A, T, 3)


@pytest.mark.parametrize("seed", range(8))
def test_matches_low_arity_oracle(seed):
    rng = random.Random(100 + seed)
    A = random_dga(rng).to_ainfty()
    T = hodge_transfer_data(A, rng=rng, extra_pairs=seed % 2)
    res = transfer(A, T, arity_cutoff=3, verify=False)
    for k in range(4):
        assert transferred_tensor(res, k) == oracle_transfer_low_arity(A, T, k)


def test_non_minimal_subspace_keeps_m1():
    rng = random.Random(5)
    A = truncated_dga(3).to_ainfty()
    T = hodge_transfer_data(A, rng=rng, extra_pairs=1)
    res = transfer(A, T, arity_cutoff=3)
    assert res.algebra.ops[(1, ZERO_GAP)]
    assert all(r.ok for r in res.reports)


@pytest.mark.parametrize("seed", range(3))
def test_filtered_transfer_verifies(seed):
    rng = random.Random(seed)
    A, f, _ = random_filtered_algebra(rng, max_dim=6)
    T = hodge_transfer_data(A, rng=rng)
    res = transfer(A, T)
    assert verify_ainfty(res.algebra).ok
    assert verify_homomorphism(res.hom).ok
    assert res.ledger_sum("m") == res.algebra.ops.ops
    assert res.ledger_sum("f") == res.hom.ops.ops


def test_transfer_requires_arity_cutoff():
    A = heisenberg_dga().to_ainfty()
    with pytest.raises(ValueError):
        transfer(A, hodge_transfer_data(A))


def test_transfer_rejects_foreign_data():
    A = heisenberg_dga().to_ainfty()
    B = truncated_dga(2).to_ainfty()
    with pytest.raises(ValueError):
        transfer(A, hodge_transfer_data(B), arity_cutoff=3)
