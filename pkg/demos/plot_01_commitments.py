"""
Pedersen commitments
====================

Commit to a value, check the homomorphism, and see why the blinding
matters.
"""

import random

from fort.commit import PedersenParams, commit, commit_random

# The two bases come from hashing fixed labels onto the curve, so nobody
# knows a discrete-log relation between them.
params = PedersenParams.default()
print("g =", params.g.encode().hex())
print("h =", params.h.encode().hex())

# Commit(x; r) = x*g + r*h, serialized as a 32-byte compressed point.
c = commit(params, 250, 1234)
print("Commit(250; 1234) =", c.encode().hex())

# Adding commitments adds the openings.
total = commit(params, 5, 7) + commit(params, 6, 8)
print("homomorphic:", total == commit(params, 11, 15))

# The same value under fresh blindings looks unrelated each time.
rng = random.Random(0)
for _ in range(3):
    c, r = commit_random(params, 250, rng)
    print("250 ->", c.encode().hex()[:16], "...")
