import os
import random

import pytest

from fort.algebra import SUBGROUP_ORDER, msm
from fort.algebra.field import inner_product
from fort.bench import bench_bulletproof
from fort.bulletproofs import (
    RangeProof,
    RangeProofError,
    RangeStatement,
    _prove,
    proof_size_elements,
    prove_inner_product,
    prove_range,
    verify_inner_product,
    verify_range,
)
from fort.commit import PedersenParams, commit, vector_generators
from fort.transcript import Transcript

P = PedersenParams.default()
L = SUBGROUP_ORDER


def statement(values, blindings, n):
    return RangeStatement(tuple(commit(P, v, r) for v, r in zip(values, blindings)), n, P)


def prove(values, n, seed=0, workers=1):
    rng = random.Random(seed)
    blindings = [rng.randrange(L) for _ in values]
    st = statement(values, blindings, n)
    return st, prove_range(st, values, blindings, random.Random(seed + 1), workers=workers)


# --- inner-product argument ------------------------------------------------

def _ipp_roundtrip(a, b, label=b"ipp"):
    g_vec, h_vec = vector_generators(len(a))
    q = P.g
    proof = prove_inner_product(Transcript(label), g_vec, h_vec, a, b, q=q)
    c = inner_product(a, b, L)
    P_ = msm(list(a) + list(b) + [c], g_vec + h_vec + [q])
    return proof, verify_inner_product(Transcript(label), g_vec, h_vec, P_, proof, q=q)


def test_ipp_base_case():
    proof, ok = _ipp_roundtrip([3], [4])
    assert ok
    assert proof.L == () and proof.R == ()
    assert (proof.a, proof.b) == (3, 4)


def test_ipp_length_4_random():
    rng = random.Random(0)
    a = [rng.randrange(L) for _ in range(4)]
    b = [rng.randrange(L) for _ in range(4)]
    proof, ok = _ipp_roundtrip(a, b)
    assert ok and len(proof.L) == 2


def test_ipp_length_64_has_six_rounds():
    rng = random.Random(1)
    a = [rng.randrange(L) for _ in range(64)]
    b = [rng.randrange(L) for _ in range(64)]
    proof, ok = _ipp_roundtrip(a, b)
    assert ok
    assert len(proof.L) == len(proof.R) == 6


def test_ipp_wrong_inner_product_rejected():
    a, b = [1, 2, 3, 4], [5, 6, 7, 8]
    g_vec, h_vec = vector_generators(4)
    proof = prove_inner_product(Transcript(b"ipp"), g_vec, h_vec, a, b, q=P.g)
    bad = msm(a + b + [inner_product(a, b, L) + 1], g_vec + h_vec + [P.g])
    assert not verify_inner_product(Transcript(b"ipp"), g_vec, h_vec, bad, proof, q=P.g)


def test_ipp_rejects_non_power_of_two():
    g_vec, h_vec = vector_generators(3)
    with pytest.raises(ValueError):
        prove_inner_product(Transcript(b"ipp"), g_vec, h_vec, [1, 2, 3], [4, 5, 6])


# --- range proofs ----------------------------------------------------------

def test_completeness_100_instances():
    rng = random.Random(2)
    for i in range(100):
        n = rng.choice((8, 16, 32))
        m = rng.choice((1, 1, 2, 3))
        values = [rng.choice((0, (1 << n) - 1, rng.randrange(1 << n))) for _ in range(m)]
        st, proof = prove(values, n, seed=100 + i)
        assert verify_range(st, proof), (n, values)


def test_out4_value_and_identity_commitment():
    st, proof = prove([250], 8)
    assert verify_range(st, proof)
    st0 = statement([0], [0], 8)
    assert st0.commitments[0].point.is_identity()
    assert verify_range(st0, prove_range(st0, [0], [0], random.Random(0)))


def test_out_of_range_prover_refuses_and_forgery_rejects():
    st = statement([256], [5], 8)
    with pytest.raises(RangeProofError):
        prove_range(st, [256], [5], random.Random(0))
    # Bypass the check: the low 8 bits of 256 are all zero.
    forged = _prove(st, [256], [5], random.Random(0))
    assert not verify_range(st, forged)


def test_mismatched_opening_refused():
    st = statement([7], [5], 8)
    with pytest.raises(RangeProofError):
        prove_range(st, [7], [6], random.Random(0))
    with pytest.raises(ValueError):
        prove_range(st, [7, 8], [5, 5], random.Random(0))


def test_aggregation_with_one_bad_value():
    values, blindings = [12, 1 << 16], [3, 4]
    st = statement(values, blindings, 16)
    with pytest.raises(RangeProofError):
        prove_range(st, values, blindings, random.Random(0))
    assert not verify_range(st, _prove(st, values, blindings, random.Random(0)))
    good = statement([12, 13], blindings, 16)
    assert verify_range(good, prove_range(good, [12, 13], blindings, random.Random(0)))


def test_every_group_element_tamper_rejects():
    st, proof = prove([1234, 5678], 16)
    points, scalars = proof.group_elements(), proof.scalars()
    assert len(points) == proof_size_elements(16, 2)[0]
    for i in range(len(points)):
        bad = list(points)
        bad[i] = bad[i] + P.g
        assert not verify_range(st, RangeProof.from_parts(bad, scalars)), i
    for i in range(len(scalars)):
        bad = list(scalars)
        bad[i] = (bad[i] + 1) % L
        assert not verify_range(st, RangeProof.from_parts(points, bad)), i


def test_byte_flips_reject_or_fail_to_parse():
    st, proof = prove([99], 8)
    data = proof.encode()
    for pos in range(0, len(data), 7):
        mutated = bytearray(data)
        mutated[pos] ^= 1 << (pos % 8)
        try:
            bad = RangeProof.decode(bytes(mutated))
        except ValueError:
            continue
        assert not verify_range(st, bad), pos


def test_wrong_statement_rejects():
    st, proof = prove([99], 8)
    assert not verify_range(statement([99], [1], 8), proof)
    assert not verify_range(RangeStatement(st.commitments, 16, P), proof)


def test_proof_size_law():
    assert proof_size_elements(64, 1) == (16, 5)
    assert proof_size_elements(64, 2) == (18, 5)
    assert proof_size_elements(8, 1) == (10, 5)
    assert proof_size_elements(8, 3) == proof_size_elements(8, 4)
    _, p8 = prove([1], 8)
    _, p16 = prove([1, 2], 8)
    assert len(p8.encode()) == 32 * (10 + 5)
    assert len(p16.encode()) - len(p8.encode()) == 2 * 32


def test_encoding_roundtrip():
    _, proof = prove([1, 2, 3], 8)
    assert RangeProof.decode(proof.encode()) == proof
    with pytest.raises(ValueError):
        RangeProof.decode(proof.encode()[:-1])


def test_deterministic_under_seed():
    assert prove([42, 43], 32, seed=9)[1].encode() == prove([42, 43], 32, seed=9)[1].encode()
    assert prove([42], 32, seed=9)[1].encode() != prove([42], 32, seed=10)[1].encode()


def test_thread_count_independence():
    assert prove([42, 43], 64, seed=3)[1] == prove([42, 43], 64, seed=3, workers=2)[1]


def test_statement_validation():
    c = commit(P, 1, 1)
    with pytest.raises(ValueError):
        RangeStatement((c,), 12, P)
    with pytest.raises(ValueError):
        RangeStatement((), 8, P)
    st = RangeStatement((c, c, c), 8, P)
    assert st.m == 4 and st.padded == (False, False, False, True)


# --- benchmark properties ----------------------------------------------------

def _prove_time(n, m):
    return next(r.seconds for r in bench_bulletproof(n, m, repeat=2) if r.operation == "bulletproof_prove")


def test_bench_times_grow_with_nm():
    times = [_prove_time(n, m) for n, m in ((8, 1), (32, 1), (64, 2))]
    assert times == sorted(times)


@pytest.mark.skipif((os.cpu_count() or 1) < 4, reason="needs at least 4 cores")
def test_multithreaded_not_slower_on_four_cores():
    single = next(r.seconds for r in bench_bulletproof(64, 4, threads=1, repeat=2)
                  if r.operation == "bulletproof_prove")
    multi = next(r.seconds for r in bench_bulletproof(64, 4, threads=4, repeat=2)
                 if r.operation == "bulletproof_prove")
    assert multi <= single
