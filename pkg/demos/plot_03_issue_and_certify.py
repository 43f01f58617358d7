"""
Issue a right, then prove it anonymously
========================================

An issuer mints a signed token into a batch.  The owner later shows a
zero-knowledge certificate: "I own some token in this batch, signed by this
issuer", plus a nullifier that stops the same token being used twice for
the same event.
"""

import random
import time

from fort.protocol import (
    Challenge,
    NullifierSet,
    sp_issue,
    sp_setup,
    sp_verify_certificate,
    user_create_certificate,
)
from fort.registry import Registry
from fort.sig import keygen

rng = random.Random(2)
issuer, issuer_vk = keygen(rng)
alice, alice_vk = keygen(rng)

# A depth-8 batch holds 256 token ids under one Merkle root.
registry = Registry(depth=8)
ticket = sp_issue(registry, issuer, [250], alice_vk, True, rng)
for _ in range(20):
    sp_issue(registry, issuer, [rng.randrange(256)], keygen(rng)[1], True, rng)
print("batch root:", hex(registry.close_batch(0).root))

# Each issuer runs its own circuit setup.
t0 = time.perf_counter()
pk, vk = sp_setup(8, 1, b"demo issuer crs")
print(f"setup: {pk.cs.num_constraints} constraints in {time.perf_counter() - t0:.1f} s")

# Both sides derive the challenge from the event date, so Alice can build
# her certificate ahead of time.
challenge = Challenge.from_context("2026-10-16")
t0 = time.perf_counter()
cert, blindings = user_create_certificate(ticket, alice, challenge, registry, pk, rng)
print(f"certificate built in {time.perf_counter() - t0:.1f} s, {len(cert.proof.encode())}-byte proof")

seen = NullifierSet()
print("first presentation: ", sp_verify_certificate(cert, challenge, registry, vk, seen, issuer_vk))
print("second presentation:", sp_verify_certificate(cert, challenge, registry, vk, seen, issuer_vk))
other_day = Challenge.from_context("2026-10-17")
print("wrong day:          ", sp_verify_certificate(cert, other_day, registry, vk, seen, issuer_vk))
