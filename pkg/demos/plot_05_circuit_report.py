"""
What the certificate circuit costs
==================================

Count constraints per relation for a few batch depths and compare with the
6894-constraint circomlib reference build.
"""

from fort.circuit import REFERENCE_BASELINE, REFERENCE_BASELINE_TOTAL, build_certificate_circuit

for depth in (4, 8, 12):
    cs = build_certificate_circuit(depth, 1)
    counts = cs.category_counts()
    parts = ", ".join(f"{k} {v}" for k, v in counts.items())
    print(f"depth {depth:2d}: {cs.num_constraints:6d} constraints ({parts})")

print("reference build:", REFERENCE_BASELINE_TOTAL, REFERENCE_BASELINE)

# Each extra level costs one hash and one conditional swap; the elliptic
# curve work (ownership, signature, commitments) dominates.
d8 = build_certificate_circuit(8, 1).category_counts()["merkle"]
d9 = build_certificate_circuit(9, 1).category_counts()["merkle"]
print("constraints per Merkle level:", d9 - d8)
