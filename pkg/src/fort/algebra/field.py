"""Prime-field helpers.

Field elements are plain Python ints kept in ``[0, modulus)``.  Two moduli
matter in this package:

* ``FIELD_MODULUS`` -- the BLS12-381 scalar field.  It is the SNARK scalar
  field *and* the base field of the embedded Jubjub curve.
* ``SUBGROUP_ORDER`` -- the order of Jubjub's prime-order subgroup; Pedersen
  commitments, Bulletproofs and signatures do their exponent arithmetic
  modulo this value.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Sequence

from sympy.ntheory import sqrt_mod

FIELD_MODULUS = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001
SUBGROUP_ORDER = 0x0E7DB4EA6533AFA906673B0101343B00A6682093CCC81082D0970E5ED6F72CB7

SCALAR_BYTES = 32

# 2^32 divides FIELD_MODULUS - 1; 7 generates the multiplicative group.
TWO_ADICITY = 32
MULTIPLICATIVE_GENERATOR = 7


class EncodingError(ValueError):
    """Raised when a byte string is not a canonical encoding."""


def scalar_to_bytes(x: int) -> bytes:
    return int(x).to_bytes(SCALAR_BYTES, "little")


def scalar_from_bytes(data: bytes, modulus: int = FIELD_MODULUS) -> int:
    """Decode a 32-byte little-endian scalar, rejecting non-canonical input."""
    if len(data) != SCALAR_BYTES:
        raise EncodingError(f"expected {SCALAR_BYTES} bytes, got {len(data)}")
    x = int.from_bytes(data, "little")
    if x >= modulus:
        raise EncodingError("scalar not reduced")
    return x


def inv(x: int, modulus: int = FIELD_MODULUS) -> int:
    if x % modulus == 0:
        raise ZeroDivisionError("inverse of zero")
    return pow(x, -1, modulus)


def batch_inverse(values: Sequence[int], modulus: int = FIELD_MODULUS) -> list[int]:
    """Montgomery's trick: n inversions for the price of one."""
    n = len(values)
    if n == 0:
        return []
    prefix = [0] * n
    acc = 1
    for i, v in enumerate(values):
        prefix[i] = acc
        acc = acc * v % modulus
    acc = inv(acc, modulus)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = acc * prefix[i] % modulus
        acc = acc * values[i] % modulus
    return out


def sqrt(x: int, modulus: int = FIELD_MODULUS) -> int | None:
    """Return the smaller square root of ``x`` or None for a non-residue."""
    x %= modulus
    if x == 0:
        return 0
    root = sqrt_mod(x, modulus)
    if root is None:
        return None
    return min(root, modulus - root)


def hash_to_field(*parts: bytes, modulus: int = FIELD_MODULUS) -> int:
    """SHA-512 of length-prefixed parts, reduced (bias < 2^-250)."""
    h = hashlib.sha512()
    for p in parts:
        h.update(len(p).to_bytes(4, "little"))
        h.update(p)
    return int.from_bytes(h.digest(), "little") % modulus


def random_scalar(rng, modulus: int = FIELD_MODULUS) -> int:
    """Uniform element of ``[0, modulus)`` from a ``random.Random``-like source."""
    return rng.randrange(modulus)


def random_nonzero(rng, modulus: int = FIELD_MODULUS) -> int:
    return rng.randrange(1, modulus)


def inner_product(a: Iterable[int], b: Iterable[int], modulus: int) -> int:
    return sum(x * y for x, y in zip(a, b)) % modulus


def root_of_unity(order: int) -> int:
    """Primitive ``order``-th root of unity in the scalar field (order a power of two)."""
    if order & (order - 1) or order > 1 << TWO_ADICITY:
        raise ValueError("order must be a power of two at most 2^32")
    w = pow(MULTIPLICATIVE_GENERATOR, (FIELD_MODULUS - 1) >> TWO_ADICITY, FIELD_MODULUS)
    return pow(w, (1 << TWO_ADICITY) // order, FIELD_MODULUS)
