"""
Discrete Morse models of small surfaces
=======================================

A greedy acyclic matching on a triangulation leaves a few critical cells.
The flow along the matching gives a projection and a homotopy, and so a
much smaller complex with the same homology.
"""

from ainftykit.morse import (
    boundary_algebra, build_matching, fundamental_cycle, hexagon, morse_flow_data,
    morse_transfer, rp2_6, torus7, trace_configuration,
)
from ainftykit.novikov import QQ, Field, gap

for name, K in [("circle", hexagon()), ("torus", torus7()), ("RP2", rp2_6())]:
    M = build_matching(K)
    for F in (QQ, Field(2)):
        pkg = morse_flow_data(K, M, F)
        print(f"{name:6s} over {F.name:3s}: cells {K.counts()}, critical {pkg.critical_counts()}, "
              f"ranks {pkg.homology_ranks()}")

# %%
# A synthetic disc of Maslov index 2 on the circle: m0 is three times the
# fundamental cycle at energy 1.  Its image in the Morse model is a single
# critical edge.

K = hexagon()
M = build_matching(K)
ops = dict(boundary_algebra(K, QQ, 2, 3).ops.ops)
ops[(0, gap(1, 2))] = {(): {x: 3 * c for x, c in fundamental_cycle(K).items()}}
res = morse_transfer(K, M, ops, energy_cutoff=2, arity_cutoff=3)
print("m0 on the Morse complex:", res.algebra.ops[(0, gap(1, 2))])
print(trace_configuration(res, "v1()", ()))
