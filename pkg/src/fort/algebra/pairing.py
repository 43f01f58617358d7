"""BLS12-381 pairing groups, backed by arkworks via ``py_arkworks_bls12381``.

The SNARK backend only touches pairing groups through this module, so the
curve arithmetic provider can be swapped without touching the prover.
The scalar field of these groups is ``field.FIELD_MODULUS``, which is also
the base field of the embedded Jubjub curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from py_arkworks_bls12381 import G1Point, G2Point, GT, Scalar

from .field import FIELD_MODULUS, EncodingError

G1_BYTES = 48
G2_BYTES = 96


def to_scalar(x: int) -> Scalar:
    return Scalar(int(x) % FIELD_MODULUS)


def g1() -> G1Point:
    return G1Point()


def g2() -> G2Point:
    return G2Point()


def g1_identity() -> G1Point:
    return G1Point.identity()


def g2_identity() -> G2Point:
    return G2Point.identity()


def g1_multiexp(points: Sequence[G1Point], scalars: Sequence[int]) -> G1Point:
    if not points:
        return G1Point.identity()
    return G1Point.multiexp_unchecked(list(points), [to_scalar(s) for s in scalars])


def g2_multiexp(points: Sequence[G2Point], scalars: Sequence[int]) -> G2Point:
    if not points:
        return G2Point.identity()
    return G2Point.multiexp_unchecked(list(points), [to_scalar(s) for s in scalars])


def encode_g1(p: G1Point) -> bytes:
    return bytes(p.to_compressed_bytes())


def encode_g2(p: G2Point) -> bytes:
    return bytes(p.to_compressed_bytes())


def decode_g1(data: bytes) -> G1Point:
    try:
        return G1Point.from_compressed_bytes(list(data))
    except Exception as exc:  # the binding raises bare exceptions
        raise EncodingError(f"bad G1 encoding: {exc}") from None


def decode_g2(data: bytes) -> G2Point:
    try:
        return G2Point.from_compressed_bytes(list(data))
    except Exception as exc:
        raise EncodingError(f"bad G2 encoding: {exc}") from None


def pairing(p: G1Point, q: G2Point) -> GT:
    return GT.pairing(p, q)


def pairing_product_is_one(g1s: Sequence[G1Point], g2s: Sequence[G2Point]) -> bool:
    """Check prod e(P_i, Q_i) == 1 with a single final exponentiation."""
    return GT.multi_pairing(list(g1s), list(g2s)) == GT.one()


class FixedBaseTable:
    """Windowed precomputation for many multiplications of one base point.

    Each multiplication then costs ``ceil(255 / window)`` group additions.
    """

    def __init__(self, base, window: int = 8, bits: int = 255):
        self.window = window
        self.windows = (bits + window - 1) // window
        identity = type(base).identity()
        self.rows = []
        b = base
        for _ in range(self.windows):
            row = [identity, b]
            for _ in range((1 << window) - 2):
                row.append(row[-1] + b)
            self.rows.append(row)
            b = row[-1] + b
        self._identity = identity

    def mul(self, k: int):
        k = int(k) % FIELD_MODULUS
        mask = (1 << self.window) - 1
        acc = self._identity
        i = 0
        while k:
            d = k & mask
            if d:
                acc = acc + self.rows[i][d]
            k >>= self.window
            i += 1
        return acc


@dataclass(frozen=True)
class PairingGroups:
    """Descriptor bundling the pairing triple used by the SNARK."""

    name: str = "BLS12-381"
    scalar_field: int = FIELD_MODULUS
    g1_bytes: int = G1_BYTES
    g2_bytes: int = G2_BYTES

    @staticmethod
    def g1():
        return G1Point()

    @staticmethod
    def g2():
        return G2Point()

    @staticmethod
    def pair(p, q):
        return GT.pairing(p, q)


BLS12_381 = PairingGroups()
