"""Timing harness behind ``fort bench``.

Every measurement is a :class:`BenchRow` with the CSV columns
``operation, n, m, threads, seconds``.  For certificate rows ``n`` is the
batch depth and ``m`` the attribute count.

Also home to the auxiliary SNARK range circuit: the same "committed value is
below 2^n" statement a Bulletproof proves, written as R1CS so the two
approaches can be timed against each other.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bulletproofs import RangeStatement, prove_range, verify_range
from .circuit import gadgets as g
from .circuit.certificate import (
    SCALAR_BITS,
    CertificateStatement,
    CertificateWitness,
    build_certificate_circuit,
    generate_witness,
    signed_message,
)
from .circuit.r1cs import ConstraintSystem
from .commit import PedersenParams, commit
from .hashmerkle import build_tree, hash_many
from .sig import keygen, sign
from .snark import prove_cs, setup, verify

CSV_COLUMNS = ("operation", "n", "m", "threads", "seconds")


@dataclass(frozen=True)
class BenchRow:
    operation: str
    n: int
    m: int
    threads: int
    seconds: float


def to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r.operation, r.n, r.m, r.threads, f"{r.seconds:.6f}"])
    return buf.getvalue()


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def best_of(fn, repeat: int):
    """Run ``fn`` ``repeat`` times; return (last result, fastest wall time)."""
    best, out = float("inf"), None
    for _ in range(max(1, repeat)):
        out, dt = _timed(fn)
        best = min(best, dt)
    return out, best


# --- Bulletproofs ----------------------------------------------------------

def bench_bulletproof(n: int, m: int, threads: int = 1, seed: int = 0,
                      repeat: int = 1, values: Sequence[int] | None = None) -> list[BenchRow]:
    rng = random.Random(seed)
    params = PedersenParams.default()
    if values is None:
        values = [rng.randrange(1 << n) for _ in range(m)]
    blindings = [rng.randrange(1, 1 << 64) for _ in range(m)]
    st = RangeStatement(tuple(commit(params, v, r) for v, r in zip(values, blindings)), n, params)
    proof, tp = best_of(lambda: prove_range(st, values, blindings, rng, workers=threads), repeat)
    ok, tv = best_of(lambda: verify_range(st, proof, workers=threads), repeat)
    if not ok:
        raise RuntimeError("benchmark proof failed to verify")
    return [BenchRow("bulletproof_prove", n, m, threads, tp),
            BenchRow("bulletproof_verify", n, m, threads, tv)]


# --- auxiliary SNARK range proof --------------------------------------------

def range_snark_synthesize(cs: ConstraintSystem, bits: int, commitment: tuple[int, int] | None,
                           value: int | None, blinding: int | None,
                           pedersen: PedersenParams | None = None) -> None:
    """Public: the commitment point.  Private: value < 2^bits and its blinding."""
    ped = pedersen or PedersenParams.default()
    cx = cs.alloc_input(None if commitment is None else commitment[0])
    cy = cs.alloc_input(None if commitment is None else commitment[1])
    v = cs.alloc(value)
    r = cs.alloc(blinding)
    with cs.section("range"):
        v_bits = g.boolean_decompose(cs, v, bits)
    with cs.section("commitment"):
        r_bits = g.boolean_decompose(cs, r, SCALAR_BITS)
        com = g.edwards_add(cs, g.fixed_base_mul(cs, v_bits, ped.g), g.fixed_base_mul(cs, r_bits, ped.h))
        cs.enforce_equal(com[0], cx)
        cs.enforce_equal(com[1], cy)


def range_snark_circuit(bits: int) -> ConstraintSystem:
    cs = ConstraintSystem(with_witness=False)
    range_snark_synthesize(cs, bits, None, None, None)
    return cs


def range_snark_witness(bits: int, value: int, blinding: int,
                        pedersen: PedersenParams | None = None) -> ConstraintSystem:
    ped = pedersen or PedersenParams.default()
    point = commit(ped, value, blinding).point.affine
    cs = ConstraintSystem(with_witness=True)
    range_snark_synthesize(cs, bits, point, value, blinding, ped)
    cs.check()
    return cs


def compare_range_approaches(bits: int = 8, value: int = 250, blinding: int = 1234,
                             seed: int = 0, repeat: int = 3) -> dict:
    """Prover wall time for the same range statement as a Bulletproof and as a SNARK.

    Both timings start from (value, blinding) and end with a proof; SNARK
    setup is excluded since it is one-off.
    """
    rng = random.Random(seed)
    ped = PedersenParams.default()
    st = RangeStatement((commit(ped, value, blinding),), bits, ped)
    bp, t_bp = best_of(lambda: prove_range(st, [value], [blinding], rng), repeat)
    assert verify_range(st, bp)
    pk, vk = setup(range_snark_circuit(bits), b"fort/bench/range-snark")

    def snark_prove():
        cs = range_snark_witness(bits, value, blinding, ped)
        return cs.public_inputs, prove_cs(pk, cs, rng)

    (public, proof), t_snark = best_of(snark_prove, repeat)
    assert verify(vk, public, proof)
    return {"bits": bits, "bulletproof_seconds": t_bp, "snark_seconds": t_snark,
            "snark_constraints": pk.cs.num_constraints, "ratio": t_snark / t_bp}


# --- certificate -------------------------------------------------------------

def certificate_fixture(depth: int, attr_count: int, seed: int = 0):
    """A signed NFT sitting in a full batch, with statement and witness."""
    rng = random.Random(seed)
    sp, sp_vk = keygen(rng)
    user, user_vk = keygen(rng)
    ped = PedersenParams.default()
    attrs = tuple(rng.randrange(256) for _ in range(attr_count))
    nft_id = rng.randrange(1 << 250)
    sig = sign(sp, signed_message(nft_id, attrs, user_vk.A))
    ids = [nft_id] + [rng.randrange(1 << 250) for _ in range((1 << depth) - 1)]
    tree = build_tree(ids, depth)
    blindings = tuple(rng.randrange(1, 1 << 250) for _ in attrs)
    c = rng.randrange(1 << 250)
    st = CertificateStatement(
        out1=tree.root, out2=1, out3=hash_many([nft_id, user.sk, c]),
        out4=tuple(commit(ped, a, r).point.affine for a, r in zip(attrs, blindings)),
        c=c, pk_sp=sp_vk.A.affine)
    wt = CertificateWitness(nft_id, attrs, sig, user.sk, tree.path(0), blindings)
    return st, wt


def bench_certificate(depth: int = 8, attr_count: int = 1, seed: int = 0,
                      repeat: int = 1) -> tuple[list[BenchRow], dict]:
    rng = random.Random(seed)
    st, wt = certificate_fixture(depth, attr_count, seed)
    shape, t_build = _timed(lambda: build_certificate_circuit(depth, attr_count))
    (pk, vk), t_setup = _timed(lambda: setup(shape, b"fort/bench/certificate"))

    def full_prove():
        return prove_cs(pk, generate_witness(st, wt, depth), rng)

    proof, t_prove = best_of(full_prove, repeat)
    ok, t_verify = best_of(lambda: verify(vk, st.public_inputs(), proof), max(repeat, 5))
    if not ok:
        raise RuntimeError("benchmark certificate failed to verify")
    rows = [BenchRow(op, depth, attr_count, 1, t) for op, t in (
        ("certificate_build", t_build), ("certificate_setup", t_setup),
        ("certificate_prove", t_prove), ("certificate_verify", t_verify))]
    return rows, shape.category_counts()


__all__ = [
    "BenchRow",
    "CSV_COLUMNS",
    "bench_bulletproof",
    "bench_certificate",
    "best_of",
    "certificate_fixture",
    "compare_range_approaches",
    "range_snark_circuit",
    "range_snark_witness",
    "to_csv",
]
