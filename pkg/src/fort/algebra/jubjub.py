"""Jubjub: a twisted Edwards curve over the BLS12-381 scalar field.

    -x^2 + y^2 = 1 + d x^2 y^2,   d = -10240/10241

The curve has order 8 * SUBGROUP_ORDER.  Every ``EdwardsPoint`` handed out by
the public API lives in the prime-order subgroup; ``decode`` enforces this.
Internally points use extended coordinates (X:Y:Z:T) with x = X/Z, y = Y/Z,
xy = T/Z, and the hot loops work on bare tuples.
"""

from __future__ import annotations

import functools
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .field import (
    FIELD_MODULUS as Q,
    SUBGROUP_ORDER,
    EncodingError,
    batch_inverse,
    hash_to_field,
    inv,
    sqrt,
)

A = Q - 1
D = (-10240 * pow(10241, -1, Q)) % Q
D2 = 2 * D % Q
COFACTOR = 8
POINT_BYTES = 32

_IDENTITY = (0, 1, 1, 0)


def _add(p, q):
    # add-2008-hwcd-3 specialised to a = -1; complete since d is a non-square.
    X1, Y1, Z1, T1 = p
    X2, Y2, Z2, T2 = q
    a = (Y1 - X1) * (Y2 - X2) % Q
    b = (Y1 + X1) * (Y2 + X2) % Q
    c = T1 * D2 % Q * T2 % Q
    d = 2 * Z1 * Z2 % Q
    e, f, g, h = b - a, d - c, d + c, b + a
    return (e * f % Q, g * h % Q, f * g % Q, e * h % Q)


def _double(p):
    X1, Y1, Z1, _ = p
    a = X1 * X1 % Q
    b = Y1 * Y1 % Q
    c = 2 * Z1 * Z1 % Q
    e = ((X1 + Y1) * (X1 + Y1) - a - b) % Q
    g = b - a
    f = g - c
    h = -a - b
    return (e * f % Q, g * h % Q, f * g % Q, e * h % Q)


def _neg(p):
    X, Y, Z, T = p
    return (-X % Q, Y, Z, -T % Q)


def _is_identity(p) -> bool:
    X, Y, Z, _ = p
    return X % Q == 0 and (Y - Z) % Q == 0


def _mul_window(k: int, p, width: int = 4):
    """Fixed-window scalar multiplication on raw coordinates."""
    if k == 0:
        return _IDENTITY
    table = [_IDENTITY, p]
    for _ in range((1 << width) - 2):
        table.append(_add(table[-1], p))
    acc = _IDENTITY
    mask = (1 << width) - 1
    nwin = (k.bit_length() + width - 1) // width
    for i in range(nwin - 1, -1, -1):
        for _ in range(width):
            acc = _double(acc)
        digit = (k >> (i * width)) & mask
        if digit:
            acc = _add(acc, table[digit])
    return acc


class EdwardsPoint:
    """Immutable Jubjub point."""

    __slots__ = ("_c",)

    def __init__(self, coords):
        object.__setattr__(self, "_c", coords)

    def __setattr__(self, name, value):
        raise AttributeError("EdwardsPoint is immutable")

    @classmethod
    def from_affine(cls, x: int, y: int, check: bool = True) -> "EdwardsPoint":
        x %= Q
        y %= Q
        if check and not is_on_curve(x, y):
            raise ValueError("point not on curve")
        return cls((x, y, 1, x * y % Q))

    @classmethod
    def identity(cls) -> "EdwardsPoint":
        return cls(_IDENTITY)

    @property
    def affine(self) -> tuple[int, int]:
        X, Y, Z, _ = self._c
        zi = inv(Z)
        return X * zi % Q, Y * zi % Q

    @property
    def x(self) -> int:
        return self.affine[0]

    @property
    def y(self) -> int:
        return self.affine[1]

    def is_identity(self) -> bool:
        return _is_identity(self._c)

    def __add__(self, other: "EdwardsPoint") -> "EdwardsPoint":
        return EdwardsPoint(_add(self._c, other._c))

    def __neg__(self) -> "EdwardsPoint":
        return EdwardsPoint(_neg(self._c))

    def __sub__(self, other: "EdwardsPoint") -> "EdwardsPoint":
        return EdwardsPoint(_add(self._c, _neg(other._c)))

    def double(self) -> "EdwardsPoint":
        return EdwardsPoint(_double(self._c))

    def __mul__(self, k: int) -> "EdwardsPoint":
        k = int(k)
        if k < 0:
            return (-self) * (-k)
        return EdwardsPoint(_mul_window(k, self._c))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdwardsPoint):
            return NotImplemented
        X1, Y1, Z1, _ = self._c
        X2, Y2, Z2, _ = other._c
        return (X1 * Z2 - X2 * Z1) % Q == 0 and (Y1 * Z2 - Y2 * Z1) % Q == 0

    def __hash__(self) -> int:
        return hash(self.affine)

    def __repr__(self) -> str:
        x, y = self.affine
        return f"EdwardsPoint(x={x:#x}, y={y:#x})"

    def in_subgroup(self) -> bool:
        return _is_identity(_mul_window(SUBGROUP_ORDER, self._c))

    def encode(self) -> bytes:
        x, y = self.affine
        return (y | ((x & 1) << 255)).to_bytes(POINT_BYTES, "little")

    def __bytes__(self) -> bytes:
        return self.encode()


# The prime-order subgroup doubles as the commitment group.
GroupElement = EdwardsPoint


def is_on_curve(x: int, y: int) -> bool:
    xx, yy = x * x % Q, y * y % Q
    return (A * xx + yy - 1 - D * xx % Q * yy) % Q == 0


def _recover_x(y: int, sign: int) -> int | None:
    yy = y * y % Q
    x = sqrt((yy - 1) * inv((D * yy + 1) % Q) % Q)
    if x is None:
        return None
    if x == 0 and sign:
        return None
    if x & 1 != sign:
        x = Q - x
    return x


def decode(data: bytes, check_subgroup: bool = True) -> EdwardsPoint:
    """Parse the 32-byte compressed form (y with x's parity in bit 255)."""
    if len(data) != POINT_BYTES:
        raise EncodingError(f"expected {POINT_BYTES} bytes, got {len(data)}")
    v = int.from_bytes(data, "little")
    sign, y = v >> 255, v & ((1 << 255) - 1)
    if y >= Q:
        raise EncodingError("y coordinate not reduced")
    x = _recover_x(y, sign)
    if x is None:
        raise EncodingError("not a curve point")
    p = EdwardsPoint.from_affine(x, y, check=False)
    if check_subgroup and not p.in_subgroup():
        raise EncodingError("point outside prime-order subgroup")
    return p


def edwards_mul(k: int, p: EdwardsPoint) -> EdwardsPoint:
    """Double-and-add that performs the same operation sequence for every k < 2^256."""
    acc = _IDENTITY
    base = p._c
    for i in range(255, -1, -1):
        acc = _double(acc)
        added = _add(acc, base)
        acc = added if (k >> i) & 1 else acc
    return EdwardsPoint(acc)


@functools.lru_cache(maxsize=None)
def _derive_one(label: bytes, index: int) -> EdwardsPoint:
    counter = 0
    while True:
        y = hash_to_field(b"fort/derive-generator", label,
                          index.to_bytes(8, "little"), counter.to_bytes(4, "little"))
        counter += 1
        x = _recover_x(y, 0)
        if x is None:
            continue
        p = EdwardsPoint.from_affine(x, y, check=False) * COFACTOR
        if not p.is_identity():
            return p


def derive_generators(label: bytes | str, count: int) -> list[EdwardsPoint]:
    """Nothing-up-my-sleeve subgroup generators, independent per (label, index).

    Index i's point does not depend on ``count``, so longer requests extend
    shorter ones.
    """
    if isinstance(label, str):
        label = label.encode()
    if not label:
        raise ValueError("label must be non-empty")
    if count < 1:
        raise ValueError("count must be positive")
    return [_derive_one(label, i) for i in range(count)]


BASE = derive_generators(b"fort/jubjub-base", 1)[0]


# --- multi-scalar multiplication -------------------------------------------

def _window_bits(n: int) -> int:
    if n < 4:
        return 2
    return max(2, (2 * n.bit_length()) // 3)


def _pippenger(scalars: Sequence[int], coords: Sequence[tuple]) -> tuple:
    c = _window_bits(len(coords))
    nbits = max((s.bit_length() for s in scalars), default=0)
    if nbits == 0:
        return _IDENTITY
    mask = (1 << c) - 1
    windows = (nbits + c - 1) // c
    acc = _IDENTITY
    for w in range(windows - 1, -1, -1):
        for _ in range(c):
            acc = _double(acc)
        buckets = [None] * (mask + 1)
        shift = w * c
        for s, p in zip(scalars, coords):
            digit = (s >> shift) & mask
            if digit:
                b = buckets[digit]
                buckets[digit] = p if b is None else _add(b, p)
        running = _IDENTITY
        total = _IDENTITY
        for j in range(mask, 0, -1):
            b = buckets[j]
            if b is not None:
                running = _add(running, b)
            total = _add(total, running)
        acc = _add(acc, total)
    return acc


_POOLS: dict[int, ProcessPoolExecutor] = {}

# Below this many terms the pickling round-trip costs more than it saves.
PARALLEL_THRESHOLD = 64


def _pool(workers: int) -> ProcessPoolExecutor:
    if workers not in _POOLS:
        _POOLS[workers] = ProcessPoolExecutor(max_workers=workers)
    return _POOLS[workers]


def msm(scalars: Sequence[int], points: Sequence[EdwardsPoint], workers: int = 1) -> EdwardsPoint:
    """Return sum(s_i * P_i) over subgroup points.

    Scalars are reduced modulo the subgroup order.  With ``workers > 1`` the
    terms are split across worker processes; the result is the same group
    element either way.
    """
    if len(scalars) != len(points):
        raise ValueError(f"length mismatch: {len(scalars)} scalars, {len(points)} points")
    if not scalars:
        raise ValueError("msm needs at least one term")
    ss = [int(s) % SUBGROUP_ORDER for s in scalars]
    cs = [p._c for p in points]
    if workers > 1 and len(ss) >= PARALLEL_THRESHOLD:
        step = (len(ss) + workers - 1) // workers
        chunks = [(ss[i:i + step], cs[i:i + step]) for i in range(0, len(ss), step)]
        futures = [_pool(workers).submit(_pippenger, s, c) for s, c in chunks]
        acc = _IDENTITY
        for f in futures:
            acc = _add(acc, f.result())
        return EdwardsPoint(acc)
    return EdwardsPoint(_pippenger(ss, cs))


def default_workers() -> int:
    return os.cpu_count() or 1


# --- fixed-base precomputation ---------------------------------------------

def _madd(p, n):
    # Extended + precomputed (y-x, y+x, 2dxy) with Z2 = 1: 7 multiplications.
    X1, Y1, Z1, T1 = p
    ym, yp, t2d = n
    a = (Y1 - X1) * ym % Q
    b = (Y1 + X1) * yp % Q
    c = T1 * t2d % Q
    d = 2 * Z1
    e, f, g, h = b - a, d - c, d + c, b + a
    return (e * f % Q, g * h % Q, f * g % Q, e * h % Q)


class FixedBaseTable:
    """Signed-window multiples of one base: rows[i][d-1] = d * 2^(8i) * P for d in 1..128.

    A scalar multiplication is at most 33 mixed additions and no doublings.
    Each table holds about 4k points, so keep them for small, hot base sets.
    """

    WINDOW = 8
    ROWS = 33

    def __init__(self, point: EdwardsPoint):
        half = 1 << (self.WINDOW - 1)
        raw = []
        base = point._c
        for _ in range(self.ROWS):
            row = [base]
            for _ in range(half - 1):
                row.append(_add(row[-1], base))
            raw.append(row)
            base = _add(row[-1], row[-1])  # 256 * previous row base
        flat = [c for row in raw for c in row]
        zinv = batch_inverse([c[2] for c in flat], Q)
        niels = []
        for (X, Y, _, _), zi in zip(flat, zinv):
            x, y = X * zi % Q, Y * zi % Q
            niels.append(((y - x) % Q, (y + x) % Q, D2 * x % Q * y % Q))
        self.rows = [niels[i * half:(i + 1) * half] for i in range(self.ROWS)]

    def accumulate(self, acc, k: int):
        """acc + k*P for 0 <= k < 2^256 on raw coordinates."""
        rows = self.rows
        i = 0
        while k:
            d = k & 0xFF
            k >>= 8
            if d > 128:
                d -= 256
                k += 1
            if d > 0:
                acc = _madd(acc, rows[i][d - 1])
            elif d < 0:
                ym, yp, t2d = rows[i][-d - 1]
                acc = _madd(acc, (yp, ym, -t2d))
            i += 1
        return acc

    def mul(self, k: int) -> EdwardsPoint:
        return EdwardsPoint(self.accumulate(_IDENTITY, k % SUBGROUP_ORDER))


@functools.lru_cache(maxsize=48)
def fixed_base_table(point: EdwardsPoint) -> FixedBaseTable:
    return FixedBaseTable(point)


def fixed_base_msm(scalars: Sequence[int], points: Sequence[EdwardsPoint]) -> EdwardsPoint:
    """Same result as :func:`msm`, through cached per-base tables."""
    if len(scalars) != len(points):
        raise ValueError(f"length mismatch: {len(scalars)} scalars, {len(points)} points")
    acc = _IDENTITY
    for s, p in zip(scalars, points):
        acc = fixed_base_table(p).accumulate(acc, int(s) % SUBGROUP_ORDER)
    return EdwardsPoint(acc)
