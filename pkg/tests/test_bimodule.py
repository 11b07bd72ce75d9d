import random
from fractions import Fraction

import pytest

from ainftykit.ainfty import RelationError, identity_hom, is_mc_solution
from ainftykit.bimodule import (
    BimoduleHom, EnergyLossError, FilteredBimodule, deform_bimodule, from_dg_bimodule,
    identity_bimodule_hom, n00_identity_residual, regular_bimodule,
    square_of_deformed_differential, verify_bimodule, verify_bimodule_hom,
)
from ainftykit.complex import Chain
from ainftykit.novikov import ZERO_GAP, gap
from ainftykit.testing import heisenberg_dga, random_filtered_algebra, truncated_dga
from samples import curved_trunc2, mc_element_of_pushforward

DGAS = [heisenberg_dga(), truncated_dga(2), truncated_dga(3)]


@pytest.mark.parametrize("dga", DGAS, ids=lambda d: d.name)
def test_regular_bimodule_relations(dga):
    A = dga.to_ainfty(2)
    D = regular_bimodule(A)
    assert verify_bimodule(D).ok
    for y in D.basis:
        assert not n00_identity_residual(D, y)


@pytest.mark.parametrize("dga", DGAS, ids=lambda d: d.name)
def test_dg_bimodule_import(dga):
    A = dga.to_ainfty(2)
    D = from_dg_bimodule(A.basis, A, A, dga.d, dict(dga.mul), dict(dga.mul), name="dg")
    assert verify_bimodule(D).ok
    assert verify_bimodule_hom(identity_bimodule_hom(D)).ok


def test_broken_action_is_reported():
    dga = truncated_dga(2)
    A = dga.to_ainfty(2)
    mul = dict(dga.mul)
    left = {k: v for k, v in mul.items()}
    left[("x", "y")] = {"yx": 2}
    with pytest.raises(RelationError):
        from_dg_bimodule(A.basis, A, A, dga.d, left, mul, name="bad")


def test_filtered_regular_bimodule_and_deformation():
    rng = random.Random(1)
    A, f, _ = random_filtered_algebra(rng, max_dim=4)
    D = regular_bimodule(A)
    assert verify_bimodule(D).ok
    b = mc_element_of_pushforward(f)
    assert is_mc_solution(A, b)
    assert square_of_deformed_differential(D, b, b).ok
    assert verify_bimodule(deform_bimodule(D, b, b)).ok


def test_non_mc_pair_breaks_the_square():
    A, b = curved_trunc2(weak=False)
    D = regular_bimodule(A)
    c = Chain(A.basis, {("y", Fraction(1), 0): 2}, 3)
    assert not is_mc_solution(A, c)
    # with b0 = b1 a central curvature would cancel, so only one side is off
    assert not square_of_deformed_differential(D, b, c).ok


def test_mc_pair_on_curved_algebra():
    A, b = curved_trunc2(weak=False)
    D = regular_bimodule(A)
    assert is_mc_solution(A, b)
    assert square_of_deformed_differential(D, b, b).ok


def _scaled_identity(D, lam, loss):
    one = D.field.one
    ops = {(0, 0, gap(lam, 0, allow_negative=True)): {((), y, ()): {y: one} for y in D.basis}}
    return BimoduleHom(D, D, ops, identity_hom(D.left), identity_hom(D.right), loss)


def test_energy_loss_homomorphism():
    A = truncated_dga(2).to_ainfty(3)
    D = regular_bimodule(A)
    phi = _scaled_identity(D, -1, 1)
    rep = verify_bimodule_hom(phi)
    assert rep.ok
    assert any("energy loss" in n for n in rep.notes)


def test_energy_loss_too_small_is_refused():
    A = truncated_dga(2).to_ainfty(3)
    D = regular_bimodule(A)
    with pytest.raises(EnergyLossError) as e:
        _scaled_identity(D, -1, Fraction(1, 2))
    assert e.value.index[:2] == (0, 0)


def test_broken_bimodule_hom_is_caught():
    A = truncated_dga(2).to_ainfty(2)
    D = regular_bimodule(A)
    one = D.field.one
    # scaling only one basis element does not commute with the action
    ops = {(0, 0, ZERO_GAP): {((), y, ()): {y: (2 * one if y == "x" else one)} for y in D.basis}}
    phi = BimoduleHom(D, D, ops, identity_hom(A), identity_hom(A))
    assert not verify_bimodule_hom(phi).ok


def test_mismatched_algebras_rejected():
    A = truncated_dga(2).to_ainfty(2)
    B = heisenberg_dga().to_ainfty(2)
    D = regular_bimodule(A)
    with pytest.raises(ValueError):
        BimoduleHom(D, D, {}, identity_hom(B), identity_hom(A))
    assert isinstance(D, FilteredBimodule)


def test_zero_pair_leaves_bimodule_unchanged():
    A = truncated_dga(2).to_ainfty(2)
    D = regular_bimodule(A)
    z = Chain(A.basis, {}, 2)
    assert deform_bimodule(D, z, z) is D


def test_first_order_term_of_deformed_differential():
    from ainftykit.bimodule import deformed_differential
    A, b = curved_trunc2(weak=False)
    D = regular_bimodule(A)
    one = D.field.one
    for y in D.basis:
        got = {k: c for k, c in deformed_differential(D, b, b)[y].items() if k[1] == 1 and c}
        # n_{1,0}(b, y) + n_{0,1}(y, b) plus the energy-1 part of n_{0,0}
        want: dict = {}
        for w in ((("y",), y, ()), ((), y, ("y",))):
            vec = {(w, Fraction(1), 0): one}
            for k, c in D.apply(vec).items():
                want[k] = want.get(k, 0) + c
        for k, c in D.apply({(((), y, ()), Fraction(0), 0): one}).items():
            if k[1] == 1:
                want[k] = want.get(k, 0) + c
        assert got == {k: c for k, c in want.items() if c}
