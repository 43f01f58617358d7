"""
Reveal a range, not an attribute
================================

A certificate exposes each attribute only as a Pedersen commitment.  The
holder can then convince the verifier that the hidden attribute, here 250,
fits in 8 bits, without revealing it.
"""

import random

from fort.bench import compare_range_approaches
from fort.bulletproofs import RangeProofError
from fort.commit import PedersenParams, commit
from fort.protocol import (
    Challenge,
    sp_issue,
    sp_setup,
    sp_verify_attributes,
    user_create_certificate,
    user_prove_attributes,
)
from fort.registry import Registry
from fort.sig import keygen

rng = random.Random(3)
issuer, _ = keygen(rng)
bob, bob_vk = keygen(rng)

# A small depth-2 batch keeps setup quick.
registry = Registry(depth=2)
age = sp_issue(registry, issuer, [250], bob_vk, True, rng)
big = sp_issue(registry, issuer, [300], bob_vk, True, rng)
registry.close_batch(0)
pk, vk = sp_setup(2, 1, b"demo range crs")

# The circuit emits out4 = 250*G + 1234*H as a public output.
cert, blindings = user_create_certificate(age, bob, Challenge.from_context("gate"), registry, pk, rng,
                                          blindings=[1234])
print("out4 matches Commit(250; 1234):",
      cert.statement.out4[0] == commit(PedersenParams.default(), 250, 1234).point.affine)

proofs = user_prove_attributes(cert, [250], blindings, [8], rng)
print("250 < 2^8 accepted:", sp_verify_attributes(cert.statement.out4, proofs, [8]))

# 300 does not fit in 8 bits, so the prover refuses.
cert300, blind300 = user_create_certificate(big, bob, Challenge.from_context("gate"), registry, pk, rng)
try:
    user_prove_attributes(cert300, [300], blind300, [8], rng)
except RangeProofError as e:
    print("300 refused:", e)

# The same range statement as a small SNARK: far slower to prove.
cmp = compare_range_approaches(bits=8, repeat=2)
print(f"SNARK {cmp['snark_seconds']:.3f} s vs Bulletproof {cmp['bulletproof_seconds']:.4f} s "
      f"({cmp['ratio']:.1f}x, {cmp['snark_constraints']} constraints)")
