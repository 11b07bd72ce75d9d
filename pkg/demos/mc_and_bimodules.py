"""
Bounding cochains, gauge equivalence and bimodules
==================================================

A curved algebra is rectified by a solution b of the Maurer-Cartan
equation.  Two solutions are compared through the interval model, and the
regular bimodule shows how a pair of solutions deforms the middle
differential.
"""

from fractions import Fraction

from ainftykit import build_interval_model, check_gauge_equivalence, deform_by_b, is_mc_solution
from ainftykit.ainfty import mc_residual, potential
from ainftykit.bimodule import regular_bimodule, square_of_deformed_differential
from ainftykit.complex import Chain, GradedBasis
from ainftykit.ainfty import FilteredAInfinity, from_dga
from ainftykit.novikov import QQ, gap
from ainftykit.testing import truncated_dga

# k[x]/x^2 tensored with an exterior class y, dy = x, plus curvature T x
A0 = truncated_dga(2).to_ainfty(3)
ops = dict(A0.ops.ops)
ops[(0, gap(1, 0))] = {(): {"x": 1}}
A = FilteredAInfinity(A0.basis, ops, QQ, 3, 4, name="curved")
b = Chain(A.basis, {("y", Fraction(1), 0): 1}, 3)
print("MC(b) =", mc_residual(A, b), "solution:", is_mc_solution(A, b))

# adding curvature along the unit gives a weak solution with a potential
ops[(0, gap(1, 2))] = {(): {"1": 1}}
W = FilteredAInfinity(A0.basis, ops, QQ, 3, 4, name="weak")
print("potential:", potential(W, b, "1"))

Ab = deform_by_b(A, b)
print("deformed m1:", {w: v for w, v in Ab.ops[(1, (0, 0))].items()})

# %%
# gauge equivalence: c and 0 are joined by the path c - d(t h)

B = GradedBasis([("1", 0), ("h", 0), ("c", 1)])
mul = {("1", "1"): {"1": 1}, ("1", "h"): {"h": 1}, ("h", "1"): {"h": 1},
       ("1", "c"): {"c": 1}, ("c", "1"): {"c": 1}}
G = from_dga(B, {"h": {"c": 1}}, mul, QQ, 3)
model = build_interval_model(G)
b0 = Chain(B, {("c", 1, 0): 1}, 3)
b1 = Chain(B, {}, 3)
path = Chain(model.algebra.basis, {("I0:c", 1, 0): 1, ("I:h", 1, 0): -1}, 3)
print(check_gauge_equivalence(b0, b1, path, model).render())

# %%
D = regular_bimodule(A)
print(square_of_deformed_differential(D, b, b).render())
