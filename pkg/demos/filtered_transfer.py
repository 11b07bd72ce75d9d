"""
Transfer for a gapped filtered algebra
======================================

A random DGA is deformed by a gapped homomorphism with energies 1 and 3/2,
which gives a filtered algebra with curvature.  Transferring it to a
smaller complex keeps track of which decorated tree produced each term.
"""

import random

from ainftykit import hodge_transfer_data, transfer, verify_ainfty, verify_homomorphism
from ainftykit.testing import random_filtered_algebra

rng = random.Random(3)
A, f, A0 = random_filtered_algebra(rng, max_dim=6, energy_cutoff=3, arity_cutoff=4)
print(A)
print("energy levels:", [str(x) for x in A.monoid.levels])

res = transfer(A, hodge_transfer_data(A, rng=rng))
print(res.algebra)

# every operation is a sum over trees, one ledger entry per tree
by_energy: dict = {}
for key, entry in res.ledger.items():
    by_energy.setdefault(entry["energy"], []).append(key)
for lam in sorted(by_energy):
    print(f"energy {lam}: {len(by_energy[lam])} trees, e.g. {sorted(by_energy[lam])[:3]}")

print(verify_ainfty(res.algebra).render())
print(verify_homomorphism(res.hom).render())
