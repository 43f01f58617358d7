"""Gadgets: R1CS sub-circuits whose output wires equal the native functions.

Points are (x, y) pairs of ``LC`` in affine Edwards coordinates.
Constraint costs: boolean 1, edwards_add 6, fixed-base multiplication
6 per bit after the first, variable-base multiplication 15 per bit,
hash2 243.
"""

from __future__ import annotations

from typing import Sequence

from ..algebra.jubjub import D, EdwardsPoint
from ..hashmerkle import PARAMS as HASH_PARAMS, MAX_INPUTS
from .r1cs import LC, ConstraintSystem, LCLike, lc_sum

Point = tuple[LC, LC]


def _v(*xs):
    vals = [x.value for x in xs]
    return None if any(v is None for v in vals) else vals


def boolean(cs: ConstraintSystem, value: int | None) -> LC:
    b = cs.alloc(value)
    cs.enforce(b, b - 1, 0)
    return b


def boolean_decompose(cs: ConstraintSystem, x: LCLike, width: int) -> list[LC]:
    """Little-endian bits of x, constrained to recompose to x.

    For width <= 253 the decomposition is unique; wider decompositions may
    also represent x + p.
    """
    x = LC.lift(x)
    bits = []
    for i in range(width):
        bits.append(boolean(cs, None if x.value is None else (x.value >> i) & 1))
    cs.enforce(lc_sum(b.scale(1 << i) for i, b in enumerate(bits)), 1, x)
    return bits


def constant_point(p: EdwardsPoint) -> Point:
    x, y = p.affine
    return LC.const(x), LC.const(y)


def edwards_add(cs: ConstraintSystem, p: Point, q: Point) -> Point:
    (x1, y1), (x2, y2) = p, q
    beta = cs.mul(x1, y2)
    gamma = cs.mul(y1, x2)
    delta = cs.mul(x1 + y1, x2 + y2)
    tau = cs.mul(beta, gamma)
    x3 = cs.div(beta + gamma, 1 + tau.scale(D))
    y3 = cs.div(delta - beta - gamma, 1 - tau.scale(D))
    return x3, y3


def _select_constant(bit: LC, p: EdwardsPoint) -> Point:
    """bit ? p : identity, linear in bit."""
    x, y = p.affine
    return bit.scale(x), bit.scale(y - 1) + 1


def _select(cs: ConstraintSystem, bit: LC, p: Point) -> Point:
    x, y = p
    return cs.mul(bit, x), cs.mul(bit, y - 1) + 1


def fixed_base_mul(cs: ConstraintSystem, bits: Sequence[LC], base: EdwardsPoint) -> Point:
    """sum(bit_i * 2^i * base) for a constant base."""
    multiples = []
    b = base
    for _ in bits:
        multiples.append(b)
        b = b.double()
    acc = _select_constant(bits[0], multiples[0])
    for bit, m in zip(bits[1:], multiples[1:]):
        acc = edwards_add(cs, acc, _select_constant(bit, m))
    return acc


def edwards_scalar_mul(cs: ConstraintSystem, bits: Sequence[LC], p: Point | EdwardsPoint) -> Point:
    """LSB-first double-and-add; constant bases take the cheaper fixed-base path."""
    if isinstance(p, EdwardsPoint):
        return fixed_base_mul(cs, bits, p)
    base = p
    acc = _select(cs, bits[0], base)
    for bit in bits[1:]:
        base = edwards_add(cs, base, base)
        acc = edwards_add(cs, acc, _select(cs, bit, base))
    return acc


def _sbox(cs: ConstraintSystem, x: LC) -> LC:
    x2 = cs.mul(x, x)
    x4 = cs.mul(x2, x2)
    return cs.mul(x4, x)


def permute_gadget(cs: ConstraintSystem, state: Sequence[LCLike]) -> list[LC]:
    s = [LC.lift(v) for v in state]
    params = HASH_PARAMS
    mds = params.mds
    for r, rc in enumerate(params.round_constants):
        s = [v + c for v, c in zip(s, rc)]
        if params.is_full_round(r):
            s = [_sbox(cs, v) for v in s]
        else:
            s[0] = _sbox(cs, s[0])
        s = [lc_sum(s[j].scale(mds[i][j]) for j in range(3)) for i in range(3)]
    return s


def hash2_gadget(cs: ConstraintSystem, a: LCLike, b: LCLike) -> LC:
    return permute_gadget(cs, [0, a, b])[0]


def hash_many_gadget(cs: ConstraintSystem, inputs: Sequence[LCLike]) -> LC:
    if not 1 <= len(inputs) <= MAX_INPUTS:
        raise ValueError(f"hash_many takes 1..{MAX_INPUTS} inputs")
    acc: LCLike = len(inputs)
    for x in inputs:
        acc = hash2_gadget(cs, acc, x)
    return LC.lift(acc)


def merkle_gadget(cs: ConstraintSystem, leaf: LCLike, siblings: Sequence[LC],
                  position_bits: Sequence[LC]) -> LC:
    """Root reached from ``leaf``; bit = 1 puts the running node on the right."""
    node = LC.lift(leaf)
    for sib, bit in zip(siblings, position_bits):
        t = cs.mul(bit, sib - node)
        left = node + t
        right = sib - t
        node = hash2_gadget(cs, left, right)
    return node


def sig_verify_gadget(cs: ConstraintSystem, pk: Point, message: LC, r_point: Point,
                      s_bits: Sequence[LC], base: EdwardsPoint) -> LC:
    """Enforce s*B == R + h*A; returns the challenge h.

    h is decomposed into 255 bits, so it may be represented as h + p.
    That changes the effective challenge only to another value the prover
    cannot control (it is fixed by the hash), so no forgery follows.
    """
    h = hash_many_gadget(cs, [r_point[0], r_point[1], pk[0], pk[1], message])
    h_bits = boolean_decompose(cs, h, 255)
    lhs = fixed_base_mul(cs, s_bits, base)
    ha = edwards_scalar_mul(cs, h_bits, pk)
    rhs = edwards_add(cs, r_point, ha)
    cs.enforce_equal(lhs[0], rhs[0])
    cs.enforce_equal(lhs[1], rhs[1])
    return h


def alloc_point(cs: ConstraintSystem, p: EdwardsPoint | None) -> Point:
    if p is None:
        return cs.alloc(None), cs.alloc(None)
    x, y = p.affine
    return cs.alloc(x), cs.alloc(y)


def point_value(p: Point) -> tuple[int, int] | None:
    v = _v(*p)
    return None if v is None else (v[0], v[1])


__all__ = [
    "boolean",
    "boolean_decompose",
    "constant_point",
    "edwards_add",
    "edwards_scalar_mul",
    "fixed_base_mul",
    "hash2_gadget",
    "hash_many_gadget",
    "merkle_gadget",
    "permute_gadget",
    "sig_verify_gadget",
    "alloc_point",
    "point_value",
]
