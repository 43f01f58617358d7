"""EdDSA-style Schnorr signatures on Jubjub with algebraic-hash challenges.

Messages are single field elements (callers hash first).  With base point B,
secret sk and public A = sk*B:

    nonce  r = hash_many([hash_many([sk, NONCE_TAG]), m]) mod l
    R = r*B,  h = hash_many([R.x, R.y, A.x, A.y, m]),  s = r + h*sk mod l
    accept iff s*B == R + h*A

``h`` is used unreduced so the circuit can consume it as a field element.
Points are subgroup-checked when decoded, so verification is uncofactored.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra.field import SUBGROUP_ORDER, EncodingError, hash_to_field
from .algebra.jubjub import BASE, EdwardsPoint, decode, msm
from .hashmerkle import hash_many

NONCE_TAG = hash_to_field(b"fort/eddsa/nonce")
SIGNATURE_BYTES = 64


@dataclass(frozen=True)
class VerifyingKey:
    A: EdwardsPoint

    def encode(self) -> bytes:
        return self.A.encode()

    @classmethod
    def decode(cls, data: bytes) -> "VerifyingKey":
        return cls(decode(data))

    @property
    def coords(self) -> tuple[int, int]:
        return self.A.affine


@dataclass(frozen=True)
class SigningKey:
    sk: int

    def __post_init__(self):
        if not 1 <= self.sk < SUBGROUP_ORDER:
            raise ValueError("secret key must lie in [1, l)")

    def verifying_key(self) -> VerifyingKey:
        return VerifyingKey(BASE * self.sk)

    def encode(self) -> bytes:
        return self.sk.to_bytes(32, "little")

    @classmethod
    def decode(cls, data: bytes) -> "SigningKey":
        if len(data) != 32:
            raise EncodingError("signing key must be 32 bytes")
        return cls(int.from_bytes(data, "little"))


@dataclass(frozen=True)
class Signature:
    R: EdwardsPoint
    s: int

    def encode(self) -> bytes:
        return self.R.encode() + self.s.to_bytes(32, "little")

    @classmethod
    def decode(cls, data: bytes) -> "Signature":
        if len(data) != SIGNATURE_BYTES:
            raise EncodingError("signature must be 64 bytes")
        R = decode(data[:32])
        s = int.from_bytes(data[32:], "little")
        if s >= SUBGROUP_ORDER:
            raise EncodingError("s not reduced")
        return cls(R, s)


def keygen(rng) -> tuple[SigningKey, VerifyingKey]:
    key = SigningKey(rng.randrange(1, SUBGROUP_ORDER))
    return key, key.verifying_key()


def challenge(R: EdwardsPoint, A: EdwardsPoint, message: int) -> int:
    rx, ry = R.affine
    ax, ay = A.affine
    return hash_many([rx, ry, ax, ay, message])


def sign(key: SigningKey, message: int) -> Signature:
    secret = hash_many([key.sk, NONCE_TAG])
    r = hash_many([secret, message]) % SUBGROUP_ORDER or 1
    R = BASE * r
    A = key.verifying_key().A
    h = challenge(R, A, message)
    return Signature(R, (r + h * key.sk) % SUBGROUP_ORDER)


def verify(vk: VerifyingKey, message: int, sig: Signature) -> bool:
    if not 0 <= sig.s < SUBGROUP_ORDER:
        return False
    h = challenge(sig.R, vk.A, message)
    # s*B - h*A - R == 0
    return (msm([sig.s, SUBGROUP_ORDER - h % SUBGROUP_ORDER], [BASE, vk.A]) - sig.R).is_identity()
