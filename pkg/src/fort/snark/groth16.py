"""Groth16 over BLS12-381 for the package's R1CS.

QAP rows are the constraints followed by one row per public variable
(including the constant one) with A = x_i, B = C = 0, which keeps the
public-input polynomials linearly independent.

Binary layouts (integers are u32 little-endian, G1 = 48 bytes, G2 = 96
bytes compressed, field elements 32 bytes little-endian):

    proof  "FPRF" | u8 version | A:G1 | B:G2 | C:G1                 (197 bytes)
    vk     "FVKY" | u8 version | u32 num_public
           | alpha:G1 | beta:G2 | gamma:G2 | delta:G2 | u32 n | ic[n]:G1
    pk     "FPKY" | u8 version | u32 num_vars | u32 num_public | u32 domain
           | alpha:G1 | beta:G1 | beta:G2 | delta:G1 | delta:G2
           | (u32 n | G1[n]) for a_query, b_g1_query, h_query, l_query
           | u32 n | G2[n] b_g2_query
           | u32 num_constraints | per constraint, for A, B, C:
             u32 terms | terms * (u32 var | 32-byte coeff)
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from typing import Sequence

from ..algebra import pairing as pg
from ..algebra.field import FIELD_MODULUS as P, EncodingError, hash_to_field
from ..circuit.r1cs import ConstraintSystem, UnsatisfiedError
from .domain import Domain

VERSION = 1
PROOF_MAGIC = b"FPRF"
VK_MAGIC = b"FVKY"
PK_MAGIC = b"FPKY"
PROOF_BYTES = 4 + 1 + pg.G1_BYTES + pg.G2_BYTES + pg.G1_BYTES


class ProvingError(ValueError):
    def __init__(self, index: int, category: str = "main"):
        super().__init__(f"assignment violates constraint {index} ({category})")
        self.index = index
        self.category = category


@dataclass(frozen=True)
class SnarkProof:
    a: object
    b: object
    c: object

    def encode(self) -> bytes:
        return (PROOF_MAGIC + bytes([VERSION]) + pg.encode_g1(self.a)
                + pg.encode_g2(self.b) + pg.encode_g1(self.c))

    @classmethod
    def decode(cls, data: bytes) -> "SnarkProof":
        if len(data) != PROOF_BYTES or data[:4] != PROOF_MAGIC or data[4] != VERSION:
            raise EncodingError("not a version-1 proof")
        o = 5
        a = pg.decode_g1(data[o:o + 48])
        b = pg.decode_g2(data[o + 48:o + 144])
        c = pg.decode_g1(data[o + 144:o + 192])
        return cls(a, b, c)


@dataclass(frozen=True)
class VerificationKey:
    alpha_g1: object
    beta_g2: object
    gamma_g2: object
    delta_g2: object
    ic: tuple

    @property
    def num_public(self) -> int:
        return len(self.ic) - 1

    def encode(self) -> bytes:
        out = io.BytesIO()
        out.write(VK_MAGIC + bytes([VERSION]) + struct.pack("<I", self.num_public))
        out.write(pg.encode_g1(self.alpha_g1))
        for p in (self.beta_g2, self.gamma_g2, self.delta_g2):
            out.write(pg.encode_g2(p))
        out.write(struct.pack("<I", len(self.ic)))
        for p in self.ic:
            out.write(pg.encode_g1(p))
        return out.getvalue()

    @classmethod
    def decode(cls, data: bytes) -> "VerificationKey":
        r = _Reader(data)
        r.header(VK_MAGIC)
        num_public = r.u32()
        alpha = r.g1()
        beta, gamma, delta = r.g2(), r.g2(), r.g2()
        ic = tuple(r.g1() for _ in range(r.u32()))
        r.done()
        if len(ic) != num_public + 1:
            raise EncodingError("ic length does not match public input count")
        return cls(alpha, beta, gamma, delta, ic)


@dataclass(frozen=True)
class ProvingKey:
    cs: ConstraintSystem
    domain_size: int
    alpha_g1: object
    beta_g1: object
    beta_g2: object
    delta_g1: object
    delta_g2: object
    a_query: tuple
    b_g1_query: tuple
    b_g2_query: tuple
    h_query: tuple
    l_query: tuple

    def encode(self) -> bytes:
        cs = self.cs
        out = io.BytesIO()
        out.write(PK_MAGIC + bytes([VERSION]))
        out.write(struct.pack("<III", cs.num_vars, cs.num_inputs, self.domain_size))
        out.write(pg.encode_g1(self.alpha_g1) + pg.encode_g1(self.beta_g1))
        out.write(pg.encode_g2(self.beta_g2))
        out.write(pg.encode_g1(self.delta_g1) + pg.encode_g2(self.delta_g2))
        for q in (self.a_query, self.b_g1_query, self.h_query, self.l_query):
            out.write(struct.pack("<I", len(q)))
            for p in q:
                out.write(pg.encode_g1(p))
        out.write(struct.pack("<I", len(self.b_g2_query)))
        for p in self.b_g2_query:
            out.write(pg.encode_g2(p))
        out.write(struct.pack("<I", cs.num_constraints))
        for row in cs.constraints:
            for terms in row:
                out.write(struct.pack("<I", len(terms)))
                for i, c in terms.items():
                    out.write(struct.pack("<I", i) + c.to_bytes(32, "little"))
        return out.getvalue()

    @classmethod
    def decode(cls, data: bytes, check_points: bool = False) -> "ProvingKey":
        """Parse a proving key; point subgroup checks are skipped unless requested."""
        r = _Reader(data, check_points)
        r.header(PK_MAGIC)
        num_vars, num_inputs, domain_size = r.u32(), r.u32(), r.u32()
        alpha, beta1 = r.g1(), r.g1()
        beta2 = r.g2()
        delta1, delta2 = r.g1(), r.g2()
        queries = [tuple(r.g1() for _ in range(r.u32())) for _ in range(4)]
        b2 = tuple(r.g2() for _ in range(r.u32()))
        cs = ConstraintSystem(with_witness=False)
        cs.values = [None] * num_vars
        cs.values[0] = 1
        cs.num_inputs = num_inputs
        for _ in range(r.u32()):
            row = []
            for _ in range(3):
                terms = {}
                for _ in range(r.u32()):
                    i = r.u32()
                    terms[i] = int.from_bytes(r.take(32), "little")
                row.append(terms)
            cs.constraints.append(tuple(row))
            cs.categories.append("main")
        r.done()
        a_q, b1_q, h_q, l_q = queries
        return cls(cs, domain_size, alpha, beta1, beta2, delta1, delta2, a_q, b1_q, b2, h_q, l_q)


class _Reader:
    def __init__(self, data: bytes, check_points: bool = True):
        self.data = data
        self.pos = 0
        self.check = check_points

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise EncodingError("truncated key")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def header(self, magic: bytes) -> None:
        if self.take(4) != magic or self.take(1)[0] != VERSION:
            raise EncodingError("bad magic or version")

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def g1(self):
        b = self.take(pg.G1_BYTES)
        if self.check:
            return pg.decode_g1(b)
        return pg.G1Point.from_compressed_bytes_unchecked(list(b))

    def g2(self):
        b = self.take(pg.G2_BYTES)
        if self.check:
            return pg.decode_g2(b)
        return pg.G2Point.from_compressed_bytes_unchecked(list(b))

    def done(self) -> None:
        if self.pos != len(self.data):
            raise EncodingError("trailing bytes")


# --- QAP -------------------------------------------------------------------

def _domain_for(cs: ConstraintSystem) -> Domain:
    return Domain.at_least(cs.num_constraints + cs.num_inputs + 1)


def _qap_at(cs: ConstraintSystem, lagrange: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
    """u_i(tau), v_i(tau), w_i(tau) for every variable."""
    n = cs.num_vars
    u, v, w = [0] * n, [0] * n, [0] * n
    for j, (a, b, c) in enumerate(cs.constraints):
        lj = lagrange[j]
        for i, coef in a.items():
            u[i] += coef * lj
        for i, coef in b.items():
            v[i] += coef * lj
        for i, coef in c.items():
            w[i] += coef * lj
    m = cs.num_constraints
    for i in range(cs.num_inputs + 1):
        u[i] += lagrange[m + i]
    return [x % P for x in u], [x % P for x in v], [x % P for x in w]


def _toxic(seed: bytes, label: bytes) -> int:
    x = hash_to_field(b"fort/groth16/setup", seed, label)
    return x or 1


def _batch_mul(table: pg.FixedBaseTable, scalars: Sequence[int]):
    ident = table._identity
    return tuple(table.mul(s) if s else ident for s in scalars)


def setup(cs: ConstraintSystem, seed: bytes) -> tuple[ProvingKey, VerificationKey]:
    """Single-party seeded CRS generation.  Whoever knows ``seed`` can forge proofs."""
    shape = cs.shape() if cs.with_witness else cs
    domain = _domain_for(shape)
    tau, alpha, beta, gamma, delta = (_toxic(seed, lbl) for lbl in
                                      (b"tau", b"alpha", b"beta", b"gamma", b"delta"))
    lag = domain.lagrange_at(tau)
    u, v, w = _qap_at(shape, lag)
    g1t = pg.FixedBaseTable(pg.g1())
    g2t = pg.FixedBaseTable(pg.g2())
    gamma_inv = pow(gamma, -1, P)
    delta_inv = pow(delta, -1, P)
    npub = shape.num_inputs + 1
    combo = [(beta * u[i] + alpha * v[i] + w[i]) % P for i in range(shape.num_vars)]
    ic = _batch_mul(g1t, [c * gamma_inv % P for c in combo[:npub]])
    l_query = _batch_mul(g1t, [c * delta_inv % P for c in combo[npub:]])
    zt = domain.vanishing_at(tau) * delta_inv % P
    h_scalars = []
    acc = zt
    for _ in range(domain.size - 1):
        h_scalars.append(acc)
        acc = acc * tau % P
    pk = ProvingKey(
        cs=shape,
        domain_size=domain.size,
        alpha_g1=g1t.mul(alpha),
        beta_g1=g1t.mul(beta),
        beta_g2=g2t.mul(beta),
        delta_g1=g1t.mul(delta),
        delta_g2=g2t.mul(delta),
        a_query=_batch_mul(g1t, u),
        b_g1_query=_batch_mul(g1t, v),
        b_g2_query=_batch_mul(g2t, v),
        h_query=_batch_mul(g1t, h_scalars),
        l_query=l_query,
    )
    vk = VerificationKey(pk.alpha_g1, pk.beta_g2, g2t.mul(gamma), pk.delta_g2, ic)
    return pk, vk


def _row_evals(cs: ConstraintSystem, w: Sequence[int], size: int):
    a = [0] * size
    b = [0] * size
    c = [0] * size
    for j, (ra, rb, rc) in enumerate(cs.constraints):
        a[j] = sum(coef * w[i] for i, coef in ra.items()) % P
        b[j] = sum(coef * w[i] for i, coef in rb.items()) % P
        c[j] = sum(coef * w[i] for i, coef in rc.items()) % P
    m = cs.num_constraints
    for i in range(cs.num_inputs + 1):
        a[m + i] = w[i]
    return a, b, c


def _h_coefficients(cs: ConstraintSystem, w: Sequence[int], domain: Domain) -> list[int]:
    a, b, c = _row_evals(cs, w, domain.size)
    a = domain.coset_fft(domain.ifft(a))
    b = domain.coset_fft(domain.ifft(b))
    c = domain.coset_fft(domain.ifft(c))
    z_inv = pow(domain.vanishing_at(domain.coset), -1, P)
    h = [(x * y - z) * z_inv % P for x, y, z in zip(a, b, c)]
    return domain.coset_ifft(h)[:domain.size - 1]


def _msm_sparse(points, scalars, multiexp):
    pts, scs = [], []
    for p, s in zip(points, scalars):
        if s:
            pts.append(p)
            scs.append(s)
    return multiexp(pts, scs)


def prove(pk: ProvingKey, statement: Sequence[int], assignment: Sequence[int], rng) -> SnarkProof:
    """Groth16 proof for a full assignment whose public prefix is ``statement``."""
    cs = pk.cs
    w = [x % P for x in assignment]
    if len(w) != cs.num_vars:
        raise ValueError(f"assignment has {len(w)} entries, circuit has {cs.num_vars} variables")
    if w[0] != 1:
        raise ValueError("assignment[0] must be the constant one")
    if list(statement) != w[1:1 + cs.num_inputs]:
        raise ValueError("statement does not match the assignment's public inputs")
    bad = cs.first_unsatisfied(w)
    if bad is not None:
        raise ProvingError(bad, cs.categories[bad])
    domain = Domain(pk.domain_size)
    h = _h_coefficients(cs, w, domain)
    r = rng.randrange(P)
    s = rng.randrange(P)
    a_g1 = pk.alpha_g1 + _msm_sparse(pk.a_query, w, pg.g1_multiexp) + pk.delta_g1 * pg.to_scalar(r)
    b_g2 = pk.beta_g2 + _msm_sparse(pk.b_g2_query, w, pg.g2_multiexp) + pk.delta_g2 * pg.to_scalar(s)
    b_g1 = pk.beta_g1 + _msm_sparse(pk.b_g1_query, w, pg.g1_multiexp) + pk.delta_g1 * pg.to_scalar(s)
    npub = cs.num_inputs + 1
    c_g1 = (_msm_sparse(pk.l_query, w[npub:], pg.g1_multiexp)
            + _msm_sparse(pk.h_query, h, pg.g1_multiexp)
            + a_g1 * pg.to_scalar(s) + b_g1 * pg.to_scalar(r)
            - pk.delta_g1 * pg.to_scalar(r * s))
    return SnarkProof(a_g1, b_g2, c_g1)


def verify(vk: VerificationKey, statement: Sequence[int], proof: SnarkProof) -> bool:
    if len(statement) != vk.num_public:
        raise ValueError(f"expected {vk.num_public} public inputs, got {len(statement)}")
    acc = vk.ic[0] + _msm_sparse(vk.ic[1:], [x % P for x in statement], pg.g1_multiexp)
    return pg.pairing_product_is_one(
        [-proof.a, vk.alpha_g1, acc, proof.c],
        [proof.b, vk.beta_g2, vk.gamma_g2, vk.delta_g2],
    )


def prove_cs(pk: ProvingKey, cs: ConstraintSystem, rng) -> SnarkProof:
    """Convenience wrapper for a constraint system that carries its witness."""
    return prove(pk, cs.public_inputs, cs.assignment, rng)


__all__ = [
    "ProvingError",
    "ProvingKey",
    "SnarkProof",
    "UnsatisfiedError",
    "VerificationKey",
    "prove",
    "prove_cs",
    "setup",
    "verify",
]
