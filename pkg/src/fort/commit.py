"""Pedersen commitments over the Jubjub prime-order subgroup.

Written additively: ``Commit(x; r) = x*g + r*h``.  The bases come from
``derive_generators`` so nobody knows log_g(h).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra.field import SUBGROUP_ORDER
from .algebra.jubjub import EdwardsPoint, decode, derive_generators, msm

PEDERSEN_LABEL = b"fort/ped"
VECTOR_LABEL = b"fort/bp"


@dataclass(frozen=True)
class PedersenParams:
    g: EdwardsPoint
    h: EdwardsPoint

    @classmethod
    def default(cls) -> "PedersenParams":
        g, h = derive_generators(PEDERSEN_LABEL, 2)
        return cls(g, h)


@dataclass(frozen=True)
class Commitment:
    point: EdwardsPoint

    def __add__(self, other: "Commitment") -> "Commitment":
        return Commitment(self.point + other.point)

    def encode(self) -> bytes:
        return self.point.encode()

    @classmethod
    def decode(cls, data: bytes) -> "Commitment":
        return cls(decode(data))


def commit(params: PedersenParams, x: int, r: int) -> Commitment:
    return Commitment(msm([x, r], [params.g, params.h]))


def commit_random(params: PedersenParams, x: int, rng) -> tuple[Commitment, int]:
    """Commit with a blinding drawn from ``rng``; returns (commitment, blinding)."""
    r = rng.randrange(SUBGROUP_ORDER)
    return commit(params, x, r), r


def vector_generators(n: int) -> tuple[list[EdwardsPoint], list[EdwardsPoint]]:
    """Independent generator vectors (g_vec, h_vec) of length n each."""
    gens = derive_generators(VECTOR_LABEL, 2 * n)
    return gens[0::2], gens[1::2]


def vector_commit(g_vec: Sequence[EdwardsPoint], h_vec: Sequence[EdwardsPoint],
                  a: Sequence[int], b: Sequence[int]) -> EdwardsPoint:
    return msm(list(a) + list(b), list(g_vec) + list(h_vec))
