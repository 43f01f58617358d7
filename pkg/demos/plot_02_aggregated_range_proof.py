"""
Aggregated range proof
======================

Prove that two committed 64-bit values, 1234 and 5678, lie in
[0, 2^64) with one logarithmic-size proof.
"""

import random
import time

from fort.bulletproofs import RangeStatement, proof_size_elements, prove_range, verify_range
from fort.commit import PedersenParams, commit

rng = random.Random(1)
params = PedersenParams.default()
values = [1234, 5678]
blindings = [rng.randrange(1, 1 << 64) for _ in values]

# The verifier only sees the commitments.
statement = RangeStatement(tuple(commit(params, v, r) for v, r in zip(values, blindings)), 64, params)

t0 = time.perf_counter()
proof = prove_range(statement, values, blindings, rng)
t1 = time.perf_counter()
ok = verify_range(statement, proof)
t2 = time.perf_counter()
print(f"Bulletproof {'verified' if ok else 'REJECTED'}: prove {t1 - t0:.3f} s, verify {t2 - t1:.3f} s")

# Size grows with log2(n*m): 4 + 2*log2(128) = 18 points plus 5 scalars.
points, scalars = proof_size_elements(64, 2)
print(f"{points} group elements, {scalars} scalars, {len(proof.encode())} bytes")

# Doubling the number of values adds one inner-product round: two points.
for m in (1, 2, 4, 8):
    print(f"m={m}: {proof_size_elements(64, m)[0]} group elements")
