"""Simulated ledger of signed NFT records grouped into fixed-size batches.

State is derived from an append-only event log.  On disk the log is JSON
Lines, one event per line, field elements as 0x-prefixed hex::

    {"type": "genesis", "depth": 8, "version": 1}
    {"type": "mint", "id": .., "attributes": [..], "owner": .., "issuer": ..,
     "signature": .., "batch": 0}
    {"type": "batch_close", "batch": 0, "root": ..}
    {"type": "transfer", "id": .., "owner": ..}

Replaying the log reproduces the registry exactly.  Batches close
automatically when a mint finds the open batch full.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from .algebra.field import FIELD_MODULUS
from .circuit.certificate import signed_message
from .hashmerkle import MerklePath, MerkleTree, build_tree
from .sig import Signature, SigningKey, VerifyingKey, sign, verify

DEFAULT_DEPTH = 8


class RegistryError(Exception):
    pass


class ConditionsNotMet(RegistryError):
    pass


class BatchClosedError(RegistryError):
    pass


class BatchOpenError(RegistryError):
    pass


class UnknownNftError(RegistryError, KeyError):
    pass


@dataclass(frozen=True)
class NftRecord:
    id: int
    attributes: tuple[int, ...]
    signature: Signature
    owner: VerifyingKey
    issuer: VerifyingKey
    batch_index: int

    def message(self) -> int:
        return signed_message(self.id, self.attributes, self.owner.A)

    def signature_valid(self) -> bool:
        return verify(self.issuer, self.message(), self.signature)


@dataclass(frozen=True)
class BatchSnapshot:
    batch_index: int
    ids: tuple[int, ...]
    depth: int
    root: int | None
    closed: bool

    @property
    def capacity(self) -> int:
        return 1 << self.depth


@dataclass
class _Batch:
    index: int
    ids: list[int] = field(default_factory=list)
    tree: MerkleTree | None = None

    @property
    def closed(self) -> bool:
        return self.tree is not None


def _hex(x: int) -> str:
    return hex(x)


class Registry:
    """Single-writer registry; readers may query concurrently."""

    def __init__(self, depth: int = DEFAULT_DEPTH, path: str | os.PathLike | None = None):
        if depth < 1:
            raise ValueError("depth must be at least 1")
        self.depth = depth
        self.path = Path(path) if path is not None else None
        self.events: list[dict] = []
        self.records: dict[int, NftRecord] = {}
        self.transferred: set[int] = set()
        self.batches: list[_Batch] = [_Batch(0)]
        self._lock = threading.RLock()
        if self.path is not None and self.path.exists() and self.path.stat().st_size:
            for line in self.path.read_text().splitlines():
                if line.strip():
                    self._apply(json.loads(line), persist=False)
        else:
            self._emit({"type": "genesis", "depth": depth, "version": 1})

    @property
    def capacity(self) -> int:
        return 1 << self.depth

    # -- event plumbing ---------------------------------------------------

    def _emit(self, event: dict) -> None:
        self._apply(event, persist=True)

    def _apply(self, event: dict, persist: bool) -> None:
        kind = event["type"]
        if kind == "genesis":
            if self.events:
                raise RegistryError("genesis must be the first event")
            self.depth = int(event["depth"])
        elif kind == "mint":
            b = int(event["batch"])
            while len(self.batches) <= b:
                self.batches.append(_Batch(len(self.batches)))
            batch = self.batches[b]
            if batch.closed:
                raise BatchClosedError(f"batch {b} is closed")
            rec = NftRecord(
                id=int(event["id"], 16),
                attributes=tuple(int(a, 16) for a in event["attributes"]),
                signature=Signature.decode(bytes.fromhex(event["signature"])),
                owner=VerifyingKey.decode(bytes.fromhex(event["owner"])),
                issuer=VerifyingKey.decode(bytes.fromhex(event["issuer"])),
                batch_index=b,
            )
            batch.ids.append(rec.id)
            self.records[rec.id] = rec
        elif kind == "batch_close":
            batch = self.batches[int(event["batch"])]
            if batch.closed:
                raise BatchClosedError(f"batch {batch.index} is already closed")
            batch.tree = build_tree(batch.ids, self.depth)
            if int(event["root"], 16) != batch.tree.root:
                raise RegistryError("logged root does not match recomputed root")
            if batch.index == len(self.batches) - 1:
                self.batches.append(_Batch(batch.index + 1))
        elif kind == "transfer":
            nft = int(event["id"], 16)
            rec = self.records[nft]
            self.records[nft] = NftRecord(rec.id, rec.attributes, rec.signature,
                                          VerifyingKey.decode(bytes.fromhex(event["owner"])),
                                          rec.issuer, rec.batch_index)
            self.transferred.add(nft)
        else:
            raise RegistryError(f"unknown event type {kind!r}")
        self.events.append(event)
        if persist and self.path is not None:
            with self.path.open("a") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    def log_lines(self) -> list[str]:
        return [json.dumps(e, sort_keys=True) for e in self.events]

    @classmethod
    def replay(cls, lines: Sequence[str]) -> "Registry":
        reg = cls.__new__(cls)
        reg.depth = DEFAULT_DEPTH
        reg.path = None
        reg.events = []
        reg.records = {}
        reg.transferred = set()
        reg.batches = [_Batch(0)]
        reg._lock = threading.RLock()
        for line in lines:
            reg._apply(json.loads(line), persist=False)
        return reg

    # -- operations -------------------------------------------------------

    @property
    def open_batch(self) -> _Batch:
        return self.batches[-1]

    def mint(self, sp_key: SigningKey, attributes: Sequence[int], owner: VerifyingKey,
             conditions_ok: bool, rng) -> NftRecord:
        """Issue, sign and record an NFT for ``owner``; refuses unless conditions_ok."""
        if not conditions_ok:
            raise ConditionsNotMet("issuer conditions not satisfied; nothing minted")
        if not attributes:
            raise ValueError("an NFT needs at least one attribute")
        with self._lock:
            if len(self.open_batch.ids) >= self.capacity:
                self.close_batch(self.open_batch.index)
            nft_id = rng.randrange(FIELD_MODULUS)
            while nft_id in self.records:
                nft_id = rng.randrange(FIELD_MODULUS)
            attrs = tuple(int(a) for a in attributes)
            sig = sign(sp_key, signed_message(nft_id, attrs, owner.A))
            self._emit({
                "type": "mint",
                "id": _hex(nft_id),
                "attributes": [_hex(a) for a in attrs],
                "owner": owner.encode().hex(),
                "issuer": sp_key.verifying_key().encode().hex(),
                "signature": sig.encode().hex(),
                "batch": self.open_batch.index,
            })
            return self.records[nft_id]

    def transfer(self, nft_id: int, new_owner: VerifyingKey) -> NftRecord:
        """Reassign ownership.  The issuer signature binds the original owner,
        so a transferred NFT can no longer back a certificate."""
        with self._lock:
            if nft_id not in self.records:
                raise UnknownNftError(nft_id)
            self._emit({"type": "transfer", "id": _hex(nft_id), "owner": new_owner.encode().hex()})
            return self.records[nft_id]

    def close_batch(self, index: int) -> BatchSnapshot:
        with self._lock:
            if not 0 <= index < len(self.batches):
                raise RegistryError(f"no batch {index}")
            batch = self.batches[index]
            if batch.closed:
                raise BatchClosedError(f"batch {index} is already closed")
            root = build_tree(batch.ids, self.depth).root
            self._emit({"type": "batch_close", "batch": index, "root": _hex(root)})
            return self.batch(index)

    def batch(self, index: int) -> BatchSnapshot:
        b = self.batches[index]
        return BatchSnapshot(b.index, tuple(b.ids), self.depth,
                             b.tree.root if b.tree else None, b.closed)

    def iter_batches(self) -> Iterator[BatchSnapshot]:
        for i in range(len(self.batches)):
            yield self.batch(i)

    def batch_ids(self, index: int) -> tuple[int, ...]:
        return tuple(self.batches[index].ids)

    def record(self, nft_id: int) -> NftRecord:
        try:
            return self.records[nft_id]
        except KeyError:
            raise UnknownNftError(nft_id) from None

    def path_for(self, nft_id: int) -> tuple[int, MerklePath]:
        rec = self.record(nft_id)
        batch = self.batches[rec.batch_index]
        if not batch.closed:
            raise BatchOpenError(f"batch {batch.index} is still open")
        return batch.index, batch.tree.path(batch.ids.index(nft_id))
