"""The three roles end to end: issuer (SP) mints rights, the user builds a
certificate and range proofs, the SP verifies both.

File formats (JSON, hex strings for field elements and binary blobs)::

    certificate  {"version": 1, "batch_index": i, "attr_count": n,
                  "statement": {"out1", "out2", "out3", "out4": [[x, y], ..],
                                "c", "pk_sp": [x, y]},
                  "proof": "<hex of the 197-byte SNARK proof>"}
    range bundle {"version": 1, "ranges": [n_bits, ..], "proofs": ["<hex>", ..]}
"""

from __future__ import annotations

import enum
import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .algebra.field import FIELD_MODULUS, SUBGROUP_ORDER, EncodingError, hash_to_field
from .algebra.jubjub import EdwardsPoint
from .bulletproofs import RangeProof, RangeStatement, prove_range, verify_range
from .circuit.certificate import (
    CertificateStatement,
    CertificateWitness,
    build_certificate_circuit,
    generate_witness,
)
from .commit import Commitment, PedersenParams, commit
from .hashmerkle import build_tree, hash_many
from .registry import BatchOpenError, NftRecord, Registry
from .sig import SigningKey, VerifyingKey
from .snark import ProvingKey, SnarkProof, VerificationKey, prove_cs, setup, verify

FORMAT_VERSION = 1


class DenyReason(str, enum.Enum):
    PROOF = "proof"
    ROOT = "root"
    FLAG = "flag"
    REPLAY = "replay"


class OwnershipError(ValueError):
    pass


class BlindingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Decision:
    granted: bool
    reason: DenyReason | None = None

    def __bool__(self) -> bool:
        return self.granted


@dataclass(frozen=True)
class Challenge:
    """c = H(context); both sides derive it from e.g. the event date."""

    context: bytes

    @classmethod
    def from_context(cls, context: bytes | str) -> "Challenge":
        return cls(context.encode() if isinstance(context, str) else bytes(context))

    @property
    def c(self) -> int:
        return hash_to_field(b"fort/challenge", self.context, modulus=FIELD_MODULUS)


@dataclass(frozen=True)
class Certificate:
    proof: SnarkProof
    statement: CertificateStatement
    batch_index: int

    def to_json(self) -> str:
        st = self.statement
        return json.dumps({
            "version": FORMAT_VERSION,
            "batch_index": self.batch_index,
            "attr_count": len(st.out4),
            "statement": {
                "out1": hex(st.out1),
                "out2": hex(st.out2),
                "out3": hex(st.out3),
                "out4": [[hex(x), hex(y)] for x, y in st.out4],
                "c": hex(st.c),
                "pk_sp": [hex(v) for v in st.pk_sp],
            },
            "proof": self.proof.encode().hex(),
        }, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        doc = json.loads(text)
        if doc.get("version") != FORMAT_VERSION:
            raise EncodingError("unsupported certificate version")
        s = doc["statement"]
        st = CertificateStatement(
            out1=int(s["out1"], 16),
            out2=int(s["out2"], 16),
            out3=int(s["out3"], 16),
            out4=tuple((int(x, 16), int(y, 16)) for x, y in s["out4"]),
            c=int(s["c"], 16),
            pk_sp=(int(s["pk_sp"][0], 16), int(s["pk_sp"][1], 16)),
        )
        for x, y in st.out4:
            EdwardsPoint.from_affine(x, y)  # raises if off-curve
        return cls(SnarkProof.decode(bytes.fromhex(doc["proof"])), st, int(doc["batch_index"]))


class NullifierSet:
    """Seen nullifiers, scoped per (issuer key, challenge context).

    Optional persistence appends one JSON line per insertion.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._seen: set[tuple[str, int]] = set()
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip():
                    doc = json.loads(line)
                    self._seen.add((doc["scope"], int(doc["nullifier"], 16)))

    @staticmethod
    def scope(sp_vk: VerifyingKey, challenge: Challenge) -> str:
        return sp_vk.encode().hex() + ":" + challenge.context.hex()

    def is_seen(self, scope: str, nullifier: int) -> bool:
        return (scope, nullifier) in self._seen

    def check_and_insert(self, scope: str, nullifier: int) -> bool:
        """Insert atomically; False if it was already present."""
        with self._lock:
            key = (scope, nullifier)
            if key in self._seen:
                return False
            self._seen.add(key)
            if self.path is not None:
                with self.path.open("a") as fh:
                    fh.write(json.dumps({"scope": scope, "nullifier": hex(nullifier)}) + "\n")
            return True

    def __len__(self) -> int:
        return len(self._seen)


# --- setup -------------------------------------------------------------------

def sp_setup(depth: int, attr_count: int, seed: bytes) -> tuple[ProvingKey, VerificationKey]:
    """Per-issuer CRS for the certificate circuit of the given shape."""
    return setup(build_certificate_circuit(depth, attr_count), seed)


# --- issuer --------------------------------------------------------------------

def sp_issue(registry: Registry, sp_key: SigningKey, attributes: Sequence[int],
             owner: VerifyingKey, conditions_ok: bool, rng) -> NftRecord:
    return registry.mint(sp_key, attributes, owner, conditions_ok, rng)


# --- user ------------------------------------------------------------------------

def nullifier(nft_id: int, k: int, challenge: Challenge) -> int:
    return hash_many([nft_id, k, challenge.c])


def user_create_certificate(nft: NftRecord, user_key: SigningKey, challenge: Challenge,
                            registry: Registry, pk: ProvingKey, rng,
                            blindings: Sequence[int] | None = None,
                            pedersen: PedersenParams | None = None,
                            check_owner: bool = True) -> tuple[Certificate, tuple[int, ...]]:
    """Build a certificate; returns it with the attribute blindings the user
    must keep to open out4 later."""
    if check_owner and nft.owner != user_key.verifying_key():
        raise OwnershipError("NFT is not owned by this key")
    batch_index, path = registry.path_for(nft.id)
    ped = pedersen or PedersenParams.default()
    if blindings is None:
        blindings = tuple(rng.randrange(SUBGROUP_ORDER) for _ in nft.attributes)
    blindings = tuple(blindings)
    if len(blindings) != len(nft.attributes):
        raise ValueError("one blinding per attribute")
    out4 = tuple(commit(ped, a, r).point.affine for a, r in zip(nft.attributes, blindings))
    statement = CertificateStatement(
        out1=registry.batch(batch_index).root,
        out2=1,
        out3=nullifier(nft.id, user_key.sk, challenge),
        out4=out4,
        c=challenge.c,
        pk_sp=nft.issuer.A.affine,
    )
    witness = CertificateWitness(nft.id, nft.attributes, nft.signature, user_key.sk,
                                 path, blindings)
    cs = generate_witness(statement, witness, registry.depth)
    return Certificate(prove_cs(pk, cs, rng), statement, batch_index), blindings


def user_prove_attributes(certificate: Certificate, attributes: Sequence[int],
                          blindings: Sequence[int], ranges: Sequence[int], rng,
                          pedersen: PedersenParams | None = None) -> list[RangeProof]:
    """One range proof per attribute, each opening the matching out4 commitment."""
    ped = pedersen or PedersenParams.default()
    commitments = certificate.statement.commitment_points()
    if not len(attributes) == len(blindings) == len(ranges) == len(commitments):
        raise ValueError("attributes, blindings, ranges and commitments must align")
    proofs = []
    for a, r, n, point in zip(attributes, blindings, ranges, commitments):
        if commit(ped, a, r).point != point:
            raise BlindingMismatch("blinding does not match the certificate commitment")
        st = RangeStatement((Commitment(point),), n, ped)
        proofs.append(prove_range(st, [a], [r], rng))  # RangeProofError if out of range
    return proofs


# --- verifier ---------------------------------------------------------------------

def sp_verify_certificate(cert: Certificate, challenge: Challenge, registry: Registry,
                          vk: VerificationKey, nulls: NullifierSet,
                          sp_vk: VerifyingKey) -> Decision:
    """Grant iff flag == 1, out1 matches the recomputed batch root, the proof
    verifies under this SP's key and challenge, and out3 is fresh."""
    st = cert.statement
    if st.out2 != 1:
        return Decision(False, DenyReason.FLAG)
    try:
        batch = registry.batch(cert.batch_index)
    except IndexError:
        return Decision(False, DenyReason.ROOT)
    if not batch.closed:
        return Decision(False, DenyReason.ROOT)
    mtree = build_tree(registry.batch_ids(cert.batch_index), registry.depth).root
    if st.out1 != mtree:
        return Decision(False, DenyReason.ROOT)
    public = CertificateStatement(st.out1, 1, st.out3, st.out4, challenge.c, sp_vk.A.affine)
    try:
        ok = verify(vk, public.public_inputs(), cert.proof)
    except ValueError:
        ok = False
    if not ok:
        return Decision(False, DenyReason.PROOF)
    if not nulls.check_and_insert(NullifierSet.scope(sp_vk, challenge), st.out3):
        return Decision(False, DenyReason.REPLAY)
    return Decision(True)


def sp_verify_attributes(commitments: Sequence[tuple[int, int]], proofs: Sequence[RangeProof],
                         ranges: Sequence[int],
                         pedersen: PedersenParams | None = None) -> list[bool]:
    """Per-index accept/reject of range proofs against the certificate's out4."""
    if not len(commitments) == len(proofs) == len(ranges):
        raise ValueError("commitments, proofs and ranges must have equal length")
    ped = pedersen or PedersenParams.default()
    out = []
    for (x, y), proof, n in zip(commitments, proofs, ranges):
        st = RangeStatement((Commitment(EdwardsPoint.from_affine(x, y)),), n, ped)
        out.append(verify_range(st, proof))
    return out


def range_bundle_to_json(proofs: Sequence[RangeProof], ranges: Sequence[int]) -> str:
    return json.dumps({"version": FORMAT_VERSION, "ranges": list(ranges),
                       "proofs": [p.encode().hex() for p in proofs]}, indent=2)


def range_bundle_from_json(text: str) -> tuple[list[RangeProof], list[int]]:
    doc = json.loads(text)
    if doc.get("version") != FORMAT_VERSION:
        raise EncodingError("unsupported range bundle version")
    return [RangeProof.decode(bytes.fromhex(h)) for h in doc["proofs"]], list(doc["ranges"])


__all__ = [
    "BatchOpenError",
    "BlindingMismatch",
    "Certificate",
    "Challenge",
    "Decision",
    "DenyReason",
    "NullifierSet",
    "OwnershipError",
    "nullifier",
    "range_bundle_from_json",
    "range_bundle_to_json",
    "sp_issue",
    "sp_setup",
    "sp_verify_attributes",
    "sp_verify_certificate",
    "user_create_certificate",
    "user_prove_attributes",
]
