import random
from fractions import Fraction

import pytest

from ainftykit import (
    AInfinityHom, FilteredAInfinity, MissingOperation, NotWeakSolution, RelationError,
    compose_homomorphisms, deform_by_b, from_dga, identity_hom, is_mc_solution, mc_residual,
    potential, verify_ainfty, verify_ank, verify_homomorphism,
)
from ainftykit.ainfty import beta_norm, m0_identity_residual, region_ok
from ainftykit.complex import Chain, GradedBasis
from ainftykit.novikov import QQ, ZERO_GAP, Field, gap, monoid_closure
from ainftykit.testing import heisenberg_dga, random_dga, random_filtered_algebra, truncated_dga
from oracles import dga_ops, dga_relations_vanish
from samples import curved_trunc2, m1_squared, mc_element_of_pushforward, mutate


@pytest.mark.parametrize("seed", range(6))
def test_dga_import_matches_sign_rule(seed):
    rng = random.Random(seed)
    D = random_dga(rng)
    A = D.to_ainfty()
    m1, m2 = dga_ops(D.elements, D.d, D.mul)
    got1 = {w: dict(v) for w, v in A.ops[(1, ZERO_GAP)].items()}
    got2 = {w: dict(v) for w, v in A.ops[(2, ZERO_GAP)].items()}
    clean = lambda t: {w: {z: c for z, c in v.items() if c} for w, v in t.items() if any(v.values())}
    assert got1 == clean(m1)
    assert got2 == clean(m2)
    # the sign rule itself satisfies the relations, checked by a plain triple loop
    assert dga_relations_vanish(D.elements, D.d, D.mul) == []


def test_dga_import_over_f2():
    A = heisenberg_dga(Field(2)).to_ainfty()
    assert verify_ainfty(A).ok


def test_from_dga_rejects_bad_differentials():
    D = truncated_dga(2)
    with pytest.raises(RelationError):
        from_dga(D.basis, {"y": {"yx": 1}}, D.mul)          # wrong degree
    with pytest.raises(RelationError):
        from_dga(D.basis, {"y": {"x": 1}, "yx": {"x": 0}, "1": {"y": 1}}, D.mul)  # d^2 != 0


def test_mutation_is_localized():
    A = heisenberg_dga().to_ainfty()
    B = mutate(A, (2, ZERO_GAP), ("x", "y"), "xy", 1)
    rep = verify_ainfty(B)
    assert not rep.ok
    assert rep.lowest().arity in (2, 3)
    assert all(r.energy == 0 for r in rep)


def test_filtered_mutation_reports_energy_level():
    rng = random.Random(4)
    A, f, _ = random_filtered_algebra(rng, max_dim=4, arity_cutoff=3)
    assert verify_ainfty(A).ok
    x = A.basis.names[0]
    # shift m_{1,(1,0)}: the first broken relation sits at energy 1
    y = next(z for z in A.basis if A.basis.degree(z) == A.basis.degree(x) + 1)
    B = mutate(A, (1, gap(1, 0)), (x,), y)
    rep = verify_ainfty(B)
    assert not rep.ok
    assert min(r.energy for r in rep) == 1


def test_m0_identity_independent_loop():
    A, b = curved_trunc2()
    for x in A.basis:
        assert not m0_identity_residual(A, x)


def test_region_rule():
    assert region_ok(4, Fraction(0), 4, Fraction(1))
    assert not region_ok(4, Fraction(1), 4, Fraction(1))
    assert region_ok(2, Fraction(5, 2), 4, Fraction(1))
    assert region_ok(9, Fraction(9), None, Fraction(1))


def test_maurer_cartan_and_potential():
    A, b = curved_trunc2()
    assert verify_ainfty(A).ok
    r = mc_residual(A, b)
    assert r.support() == ["1"]
    c = potential(A, b, "1")
    assert c.terms == {(Fraction(1), 1): 1}
    A2, b2 = curved_trunc2(weak=False)
    assert is_mc_solution(A2, b2)
    assert not is_mc_solution(A2, Chain(A2.basis, {}, 3))
    with pytest.raises(NotWeakSolution):
        potential(A2, Chain(A2.basis, {}, 3), "1")


def test_b_must_have_positive_energy_and_degree_zero():
    A, _ = curved_trunc2()
    with pytest.raises(ValueError):
        mc_residual(A, Chain(A.basis, {("y", 0, 0): 1}, 3))
    with pytest.raises(ValueError):
        mc_residual(A, Chain(A.basis, {("x", 1, 0): 1}, 3))


@pytest.mark.parametrize("seed", [1, 2, 5])
def test_deformation_by_mc_element(seed):
    rng = random.Random(seed)
    A, f, _ = random_filtered_algebra(rng, max_dim=6)
    b = mc_element_of_pushforward(f)
    assert is_mc_solution(A, b)
    Ab = deform_by_b(A, b)
    assert m1_squared(Ab) == {}
    assert verify_ainfty(Ab, check_level="fast", sample=60).ok


def test_non_mc_b_gives_curvature():
    A, b = curved_trunc2(weak=False)
    c = Chain(A.basis, {("y", Fraction(1), 0): 2}, 3)
    assert not is_mc_solution(A, c)
    Ab = deform_by_b(A, c)
    assert Ab.ops[(0, gap(1, 0))]


def test_homomorphisms_and_composition():
    rng = random.Random(7)
    A, f, A0 = random_filtered_algebra(rng, max_dim=4, arity_cutoff=3)
    assert verify_homomorphism(f).ok
    g = compose_homomorphisms(identity_hom(A0), f)
    assert verify_homomorphism(g).ok
    trusted = lambda h: {k: t for k, t in h.ops.ops.items() if h.complete(k[0], k[1].lam)}
    assert trusted(g) == trusted(f)
    # a broken component is caught
    ops = {k: {w: dict(v) for w, v in t.items()} for k, t in f.ops.ops.items()}
    x = A0.basis.names[1]
    ops[(1, ZERO_GAP)][(x,)] = {x: 2}
    bad = AInfinityHom(A0, A, ops, f.arity_cutoff)
    assert not verify_homomorphism(bad).ok


def test_beta_norm_and_ank():
    M = monoid_closure([gap(1, 0), gap(Fraction(3, 2), 2)], 3)
    assert beta_norm(ZERO_GAP, M) == -1
    # longest decomposition + floor(energy) - 1
    assert beta_norm(gap(1, 0), M) == 1
    assert beta_norm(gap(Fraction(3, 2), 2), M) == 1
    assert beta_norm(gap(2, 0), M) == 3
    assert beta_norm(gap(Fraction(5, 2), 2), M) == 3
    A, _, _ = random_filtered_algebra(random.Random(3), max_dim=4, arity_cutoff=4)
    assert verify_ank(A, 0, 3).ok
    with pytest.raises(MissingOperation):
        verify_ank(A, 3, 4)


def test_energy_and_degree_validation():
    B = GradedBasis([("a", 1), ("b", 2)])
    with pytest.raises(ValueError):
        FilteredAInfinity(B, {(1, ZERO_GAP): {("a",): {"a": 1}}}, QQ, 1)
    with pytest.raises(ValueError):
        FilteredAInfinity(B, {(0, ZERO_GAP): {(): {"b": 1}}}, QQ, 1)
    with pytest.raises(TypeError):
        FilteredAInfinity(B, {}, QQ, 0.5)
