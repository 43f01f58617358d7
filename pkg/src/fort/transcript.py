"""Fiat-Shamir transcript.

Hash: SHA-512 in a chained construction.  The state is a 64-byte digest;
``absorb`` replaces it with ``SHA512(state || frame)`` where a frame is
``tag || len(label) || label || len(data) || data`` (lengths u32 LE).
``challenge_scalar`` absorbs a squeeze frame and reduces the new state
modulo the requested order, re-squeezing on zero.  The reduction bias is
below 2^-250 for both moduli used here.
"""

from __future__ import annotations

import hashlib

from .algebra.field import SUBGROUP_ORDER

_ABSORB = b"\x01"
_SQUEEZE = b"\x02"


def _frame(tag: bytes, label: bytes, data: bytes) -> bytes:
    return (tag + len(label).to_bytes(4, "little") + label
            + len(data).to_bytes(4, "little") + data)


class Transcript:
    def __init__(self, domain: bytes | str):
        if isinstance(domain, str):
            domain = domain.encode()
        self.state = hashlib.sha512(_frame(b"\x00", b"fort-transcript-v1", domain)).digest()
        self.log: list[tuple[bytes, bytes]] = [(b"domain", domain)]

    def clone(self) -> "Transcript":
        t = Transcript.__new__(Transcript)
        t.state = self.state
        t.log = list(self.log)
        return t

    def absorb(self, label: bytes | str, data: bytes) -> "Transcript":
        if isinstance(label, str):
            label = label.encode()
        if not label:
            raise ValueError("label must be non-empty")
        self.state = hashlib.sha512(self.state + _frame(_ABSORB, label, bytes(data))).digest()
        self.log.append((label, bytes(data)))
        return self

    def absorb_point(self, label: bytes | str, point) -> "Transcript":
        return self.absorb(label, point.encode())

    def absorb_scalar(self, label: bytes | str, x: int) -> "Transcript":
        return self.absorb(label, int(x).to_bytes(32, "little"))

    def challenge_scalar(self, label: bytes | str, modulus: int = SUBGROUP_ORDER) -> int:
        if isinstance(label, str):
            label = label.encode()
        while True:
            self.state = hashlib.sha512(self.state + _frame(_SQUEEZE, label, b"")).digest()
            c = int.from_bytes(self.state, "little") % modulus
            if c:
                return c
