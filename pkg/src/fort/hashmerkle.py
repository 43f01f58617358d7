"""Algebraic hash over the scalar field and Merkle trees of NFT ids.

The permutation is Poseidon-shaped: width 3, S-box x^5, 8 full rounds split
4 + 4 around 57 partial rounds, Cauchy MDS matrix M[i][j] = 1/(i + j + 3).
Round constants are SHA-512 expansions of ``ROUND_CONSTANT_SEED``.  For a
~255-bit field with t = 3 and alpha = 5 the Poseidon analysis asks for
R_F = 8 and R_P = 56 for 128-bit security, so 57 partial rounds keeps one
round of margin.  Constants are not the reference Poseidon ones; the
interface (``hash2``/``hash_many``) is what the rest of the package uses.

Schedules:

* ``hash2(a, b)``: state [0, a, b] -> permute -> state[0]
* ``hash_many(xs)``: acc = len(xs); acc = hash2(acc, x) for x in xs
* Merkle node: hash2(left, right); empty leaves hold ``ZERO_LEAF = hash2(0, 1)``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra.field import FIELD_MODULUS as P, hash_to_field

WIDTH = 3
FULL_ROUNDS = 8
PARTIAL_ROUNDS = 57
ALPHA = 5
MAX_INPUTS = 16
ROUND_CONSTANT_SEED = b"fort/poseidon-like/v1"


@dataclass(frozen=True)
class AlgebraicHashParams:
    round_constants: tuple[tuple[int, ...], ...]
    mds: tuple[tuple[int, ...], ...]
    full_rounds: int = FULL_ROUNDS
    partial_rounds: int = PARTIAL_ROUNDS
    alpha: int = ALPHA

    @property
    def rounds(self) -> int:
        return self.full_rounds + self.partial_rounds

    def is_full_round(self, r: int) -> bool:
        half = self.full_rounds // 2
        return r < half or r >= half + self.partial_rounds

    @classmethod
    def generate(cls, seed: bytes = ROUND_CONSTANT_SEED) -> "AlgebraicHashParams":
        rounds = FULL_ROUNDS + PARTIAL_ROUNDS
        rc = tuple(
            tuple(hash_to_field(seed, (r * WIDTH + i).to_bytes(4, "little")) for i in range(WIDTH))
            for r in range(rounds)
        )
        mds = tuple(tuple(pow(i + j + WIDTH, -1, P) for j in range(WIDTH)) for i in range(WIDTH))
        return cls(rc, mds)


PARAMS = AlgebraicHashParams.generate()


def permute(state: Sequence[int], params: AlgebraicHashParams = PARAMS) -> list[int]:
    s0, s1, s2 = (v % P for v in state)
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = params.mds
    for r, (c0, c1, c2) in enumerate(params.round_constants):
        s0 = pow(s0 + c0, 5, P)
        if params.is_full_round(r):
            s1 = pow(s1 + c1, 5, P)
            s2 = pow(s2 + c2, 5, P)
        else:
            s1 += c1
            s2 += c2
        s0, s1, s2 = ((m00 * s0 + m01 * s1 + m02 * s2) % P,
                      (m10 * s0 + m11 * s1 + m12 * s2) % P,
                      (m20 * s0 + m21 * s1 + m22 * s2) % P)
    return [s0, s1, s2]


def hash2(a: int, b: int) -> int:
    return permute([0, a, b])[0]


def hash_many(inputs: Sequence[int]) -> int:
    """Length-tagged chain of ``hash2``; accepts 1 to 16 field elements."""
    if not 1 <= len(inputs) <= MAX_INPUTS:
        raise ValueError(f"hash_many takes 1..{MAX_INPUTS} inputs, got {len(inputs)}")
    acc = len(inputs)
    for x in inputs:
        acc = hash2(acc, x)
    return acc


ZERO_LEAF = hash2(0, 1)


class MerkleCapacityError(ValueError):
    pass


@dataclass(frozen=True)
class MerklePath:
    siblings: tuple[int, ...]
    position_bits: tuple[int, ...]  # bit k = 1 when the level-k node is a right child

    @property
    def depth(self) -> int:
        return len(self.siblings)


@dataclass(frozen=True)
class MerkleTree:
    depth: int
    leaves: tuple[int, ...]
    nodes: tuple[tuple[int, ...], ...]  # nodes[0] = leaves, nodes[depth] = (root,)

    @property
    def root(self) -> int:
        return self.nodes[-1][0]

    def index_of(self, leaf: int) -> int:
        return self.leaves.index(leaf)

    def path(self, index: int) -> MerklePath:
        if not 0 <= index < len(self.leaves):
            raise IndexError("leaf index out of range")
        sib, bits = [], []
        for level in range(self.depth):
            sib.append(self.nodes[level][index ^ 1])
            bits.append(index & 1)
            index >>= 1
        return MerklePath(tuple(sib), tuple(bits))


def build_tree(ids: Sequence[int], depth: int) -> MerkleTree:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    cap = 1 << depth
    if len(ids) > cap:
        raise MerkleCapacityError(f"{len(ids)} leaves exceed capacity {cap}")
    level = tuple(ids) + (ZERO_LEAF,) * (cap - len(ids))
    nodes = [level]
    while len(level) > 1:
        level = tuple(hash2(level[i], level[i + 1]) for i in range(0, len(level), 2))
        nodes.append(level)
    return MerkleTree(depth, nodes[0], tuple(nodes))


def root_from_path(leaf: int, path: MerklePath) -> int:
    node = leaf
    for sib, bit in zip(path.siblings, path.position_bits):
        node = hash2(sib, node) if bit else hash2(node, sib)
    return node


def verify_path(root: int, leaf: int, path: MerklePath, depth: int | None = None) -> bool:
    if len(path.position_bits) != len(path.siblings):
        raise ValueError("siblings and position bits differ in length")
    if depth is not None and path.depth != depth:
        raise ValueError(f"path length {path.depth} does not match depth {depth}")
    return root_from_path(leaf, path) == root
