"""
Massey products of the Heisenberg manifold
==========================================

The cochain algebra of the Heisenberg nilmanifold is modelled by an exterior
algebra on x, y, z with dz = xy.  Its minimal model has no differential, but
a nonzero triple product detects the nontrivial Massey product <x, x, y>.
"""

from ainftykit import hodge_transfer_data, transfer, verify_ainfty
from ainftykit.testing import heisenberg_dga
from ainftykit.transfer import transferred_tensor

dga = heisenberg_dga()
A = dga.to_ainfty()
print(A)

# harmonic representatives and a homotopy built from them
T = hodge_transfer_data(A)
print("cohomology basis:", list(T.H.names))

res = transfer(A, T, arity_cutoff=3)
print("m1 on cohomology vanishes:", not res.algebra.ops[(1, (0, 0))])

# the products on cohomology
for word, out in sorted(transferred_tensor(res, 2).items()):
    print("m2", word, "->", out)

# m3 is where the Massey product shows up
m3 = transferred_tensor(res, 3)
for word in [("x", "x", "y"), ("x", "y", "y")]:
    print("m3", word, "->", m3.get(word, {}))

print(verify_ainfty(res.algebra).render())
