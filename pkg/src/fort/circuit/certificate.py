"""The certificate circuit.

Public inputs, in order::

    out1            Merkle root of the batch holding the NFT
    out2            validity flag, constrained to 1
    out3            nullifier hash_many([nft_id, k, c])
    out4[i].x, .y   Pedersen commitment attr_i*G + blinding_i*H (Jubjub)
    c               challenge
    pk_sp.x, .y     issuer verification key

Enforced groups (constraint categories, in synthesis order):

    ownership   pk_user = k*B
    signature   issuer signature over hash_many([nft_id, attr_digest, pk_user.x, pk_user.y])
    nullifier   out3 = hash_many([nft_id, k, c])
    merkle      nft_id hashes up to out1
    commitment  out4[i] = attr_i*G + blinding_i*H
    flag        out2 = 1

k, signature s, attributes and blindings are decomposed into 252 bits, so
they must be below 2^252 (every value below the subgroup order is).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..algebra.jubjub import BASE, EdwardsPoint
from ..commit import PedersenParams
from ..hashmerkle import MerklePath, hash_many
from ..sig import Signature
from . import gadgets as g
from .r1cs import LC, ConstraintSystem, UnsatisfiedError

SCALAR_BITS = 252
CATEGORIES = ("ownership", "signature", "nullifier", "merkle", "commitment", "flag")

# Reference counts from a circomlib/BN128 build of the same circuit:
# scalar_mul 776, two fixed hashes at 210 each, EdDSA verify 4018,
# depth-8 Merkle path 1680.
REFERENCE_BASELINE = {"scalar_mul": 776, "hash": 2 * 210, "verify_signature": 4018, "merkle_tree": 1680}
REFERENCE_BASELINE_TOTAL = sum(REFERENCE_BASELINE.values())  # 6894


class WitnessError(ValueError):
    def __init__(self, category: str, index: int):
        super().__init__(f"witness fails the {category} constraints (constraint {index})")
        self.category = category
        self.index = index


@dataclass(frozen=True)
class CertificateStatement:
    out1: int
    out2: int
    out3: int
    out4: tuple[tuple[int, int], ...]
    c: int
    pk_sp: tuple[int, int]

    def public_inputs(self) -> list[int]:
        vals = [self.out1, self.out2, self.out3]
        for x, y in self.out4:
            vals += [x, y]
        vals.append(self.c)
        vals += list(self.pk_sp)
        return vals

    @classmethod
    def from_public_inputs(cls, vals: Sequence[int], attr_count: int) -> "CertificateStatement":
        if len(vals) != 6 + 2 * attr_count:
            raise ValueError("public input count does not match attribute count")
        out4 = tuple((vals[3 + 2 * i], vals[4 + 2 * i]) for i in range(attr_count))
        c = vals[3 + 2 * attr_count]
        pk = (vals[4 + 2 * attr_count], vals[5 + 2 * attr_count])
        return cls(vals[0], vals[1], vals[2], out4, c, pk)

    def commitment_points(self) -> list[EdwardsPoint]:
        return [EdwardsPoint.from_affine(x, y) for x, y in self.out4]


@dataclass(frozen=True)
class CertificateWitness:
    nft_id: int
    attributes: tuple[int, ...]
    sig: Signature
    k: int
    merkle_path: MerklePath
    blindings: tuple[int, ...]

    @property
    def pk_user(self) -> EdwardsPoint:
        return BASE * self.k


def attribute_digest(attributes: Sequence[int]) -> int:
    return hash_many(list(attributes))


def signed_message(nft_id: int, attributes: Sequence[int], owner: EdwardsPoint) -> int:
    x, y = owner.affine
    return hash_many([nft_id, attribute_digest(attributes), x, y])


def synthesize(cs: ConstraintSystem, depth: int, attr_count: int,
               statement: CertificateStatement | None = None,
               witness: CertificateWitness | None = None,
               pedersen: PedersenParams | None = None) -> None:
    if depth < 1 or attr_count < 1:
        raise ValueError("depth and attr_count must be positive")
    ped = pedersen or PedersenParams.default()
    st, wt = statement, witness
    if st is not None and len(st.out4) != attr_count:
        raise ValueError("statement carries the wrong number of commitments")
    if wt is not None and (len(wt.attributes) != attr_count or len(wt.blindings) != attr_count
                           or wt.merkle_path.depth != depth):
        raise ValueError("witness shape does not match circuit parameters")

    def val(f):
        return None if st is None else f(st)

    out1 = cs.alloc_input(val(lambda s: s.out1))
    out2 = cs.alloc_input(val(lambda s: s.out2))
    out3 = cs.alloc_input(val(lambda s: s.out3))
    out4 = []
    for i in range(attr_count):
        out4.append((cs.alloc_input(val(lambda s: s.out4[i][0])),
                     cs.alloc_input(val(lambda s: s.out4[i][1]))))
    c = cs.alloc_input(val(lambda s: s.c))
    pk_sp = (cs.alloc_input(val(lambda s: s.pk_sp[0])), cs.alloc_input(val(lambda s: s.pk_sp[1])))

    def w(f):
        return None if wt is None else f(wt)

    nft_id = cs.alloc(w(lambda x: x.nft_id))
    k = cs.alloc(w(lambda x: x.k))
    attrs = [cs.alloc(w(lambda x: x.attributes[i])) for i in range(attr_count)]

    with cs.section("ownership"):
        k_bits = g.boolean_decompose(cs, k, SCALAR_BITS)
        pk_user = g.fixed_base_mul(cs, k_bits, BASE)

    with cs.section("signature"):
        digest = g.hash_many_gadget(cs, attrs)
        msg = g.hash_many_gadget(cs, [nft_id, digest, pk_user[0], pk_user[1]])
        r_point = g.alloc_point(cs, w(lambda x: x.sig.R))
        s = cs.alloc(w(lambda x: x.sig.s))
        s_bits = g.boolean_decompose(cs, s, SCALAR_BITS)
        g.sig_verify_gadget(cs, pk_sp, msg, r_point, s_bits, BASE)

    with cs.section("nullifier"):
        nullifier = g.hash_many_gadget(cs, [nft_id, k, c])
        cs.enforce_equal(nullifier, out3)

    with cs.section("merkle"):
        siblings = [cs.alloc(w(lambda x: x.merkle_path.siblings[j])) for j in range(depth)]
        pos = [g.boolean(cs, w(lambda x: x.merkle_path.position_bits[j])) for j in range(depth)]
        root = g.merkle_gadget(cs, nft_id, siblings, pos)
        cs.enforce_equal(root, out1)

    with cs.section("commitment"):
        for i in range(attr_count):
            blind = cs.alloc(w(lambda x: x.blindings[i]))
            a_bits = g.boolean_decompose(cs, attrs[i], SCALAR_BITS)
            r_bits = g.boolean_decompose(cs, blind, SCALAR_BITS)
            pa = g.fixed_base_mul(cs, a_bits, ped.g)
            pr = g.fixed_base_mul(cs, r_bits, ped.h)
            com = g.edwards_add(cs, pa, pr)
            cs.enforce_equal(com[0], out4[i][0])
            cs.enforce_equal(com[1], out4[i][1])

    with cs.section("flag"):
        cs.enforce(out2, 1, 1)


def build_certificate_circuit(depth: int, attr_count: int) -> ConstraintSystem:
    """Constraint system shape (no witness) for the given batch depth and attribute count."""
    cs = ConstraintSystem(with_witness=False)
    synthesize(cs, depth, attr_count)
    return cs


def generate_witness(statement: CertificateStatement, witness: CertificateWitness,
                     depth: int | None = None) -> ConstraintSystem:
    """Full assignment for (statement, witness); raises WitnessError naming the failing group."""
    depth = depth if depth is not None else witness.merkle_path.depth
    cs = ConstraintSystem(with_witness=True)
    synthesize(cs, depth, len(witness.attributes), statement, witness)
    try:
        cs.check()
    except UnsatisfiedError as e:
        raise WitnessError(e.category, e.index) from None
    return cs


def constraint_report(cs: ConstraintSystem) -> dict:
    return {
        "constraints": cs.num_constraints,
        "variables": cs.num_vars,
        "public_inputs": cs.num_inputs,
        "by_category": cs.category_counts(),
        "reference_baseline": REFERENCE_BASELINE_TOTAL,
    }


__all__ = [
    "CATEGORIES",
    "CertificateStatement",
    "CertificateWitness",
    "LC",
    "REFERENCE_BASELINE",
    "REFERENCE_BASELINE_TOTAL",
    "WitnessError",
    "attribute_digest",
    "build_certificate_circuit",
    "constraint_report",
    "generate_witness",
    "signed_message",
    "synthesize",
]
