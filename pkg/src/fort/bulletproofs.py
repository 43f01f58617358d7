"""Aggregated Bulletproofs range proofs over Jubjub.

Relations proved (additive notation, g value base, h blinding base):

* inner product: P = <a, G> + <b, H'> + <a, b> Q
* range, m values: V_j = v_j g + gamma_j h  and  0 <= v_j < 2^n

Message schedule (every element is absorbed before the challenge that
depends on it):

    absorb n, m, V_0..V_{m-1}
    absorb A, S            -> y, z
    absorb T1, T2          -> x
    absorb tau_x, mu, t_hat -> w   (IPP base Q = w * B_q)
    per IPP round: absorb L_k, R_k -> u_k
    verifier only: absorb a, b -> batching weight

Wire format: A | S | T1 | T2 | tau_x | mu | t_hat | L_0..L_{k-1} | R_0..R_{k-1} | a | b,
32 bytes per element, k = log2(n*m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra.field import SUBGROUP_ORDER as L, EncodingError, batch_inverse, inner_product
from .algebra.jubjub import EdwardsPoint, decode, derive_generators, fixed_base_msm, msm
from .commit import Commitment, PedersenParams, vector_generators
from .transcript import Transcript

ALLOWED_BITS = (8, 16, 32, 64)
ELEMENT_BYTES = 32

# Provers with n*m at or below this use cached fixed-base tables (about
# 1 MB per generator); larger ones fall back to Pippenger.
FIXED_BASE_MAX_NM = 16


class RangeProofError(ValueError):
    """The prover refused: the witness does not satisfy the statement."""


def _pow2_ceil(m: int) -> int:
    return 1 << (m - 1).bit_length()


def _powers(x: int, n: int) -> list[int]:
    out = [1] * n
    for i in range(1, n):
        out[i] = out[i - 1] * x % L
    return out


def _ipp_base() -> EdwardsPoint:
    return derive_generators(b"fort/ipp-q", 1)[0]


@dataclass(frozen=True)
class InnerProductProof:
    L: tuple[EdwardsPoint, ...]
    R: tuple[EdwardsPoint, ...]
    a: int
    b: int


@dataclass(frozen=True)
class RangeProof:
    A: EdwardsPoint
    S: EdwardsPoint
    T1: EdwardsPoint
    T2: EdwardsPoint
    tau_x: int
    mu: int
    t_hat: int
    ipp: InnerProductProof

    def group_elements(self) -> list[EdwardsPoint]:
        return [self.A, self.S, self.T1, self.T2, *self.ipp.L, *self.ipp.R]

    def scalars(self) -> list[int]:
        return [self.tau_x, self.mu, self.t_hat, self.ipp.a, self.ipp.b]

    @classmethod
    def from_parts(cls, points: Sequence[EdwardsPoint], scalars: Sequence[int]) -> "RangeProof":
        """Inverse of (group_elements(), scalars())."""
        rounds, odd = divmod(len(points) - 4, 2)
        if rounds < 0 or odd or len(scalars) != 5:
            raise ValueError("need 4 + 2k points and 5 scalars")
        A, S, T1, T2 = points[:4]
        ipp = InnerProductProof(tuple(points[4:4 + rounds]), tuple(points[4 + rounds:]),
                                scalars[3], scalars[4])
        return cls(A, S, T1, T2, scalars[0], scalars[1], scalars[2], ipp)

    def encode(self) -> bytes:
        out = [p.encode() for p in (self.A, self.S, self.T1, self.T2)]
        out += [s.to_bytes(32, "little") for s in (self.tau_x, self.mu, self.t_hat)]
        out += [p.encode() for p in self.ipp.L]
        out += [p.encode() for p in self.ipp.R]
        out += [s.to_bytes(32, "little") for s in (self.ipp.a, self.ipp.b)]
        return b"".join(out)

    @classmethod
    def decode(cls, data: bytes) -> "RangeProof":
        if len(data) % ELEMENT_BYTES:
            raise EncodingError("proof length is not a multiple of 32")
        count = len(data) // ELEMENT_BYTES
        rounds, odd = divmod(count - 9, 2)
        if rounds < 0 or odd:
            raise EncodingError(f"bad element count {count}")
        chunks = [data[i:i + 32] for i in range(0, len(data), 32)]

        def scalar(b: bytes) -> int:
            v = int.from_bytes(b, "little")
            if v >= L:
                raise EncodingError("scalar not reduced")
            return v

        A, S, T1, T2 = (decode(c) for c in chunks[:4])
        tau_x, mu, t_hat = (scalar(c) for c in chunks[4:7])
        Ls = tuple(decode(c) for c in chunks[7:7 + rounds])
        Rs = tuple(decode(c) for c in chunks[7 + rounds:7 + 2 * rounds])
        a, b = scalar(chunks[-2]), scalar(chunks[-1])
        return cls(A, S, T1, T2, tau_x, mu, t_hat, InnerProductProof(Ls, Rs, a, b))


@dataclass(frozen=True)
class RangeStatement:
    commitments: tuple[Commitment, ...]
    n: int
    params: PedersenParams = field(default_factory=PedersenParams.default)

    def __post_init__(self):
        if self.n not in ALLOWED_BITS:
            raise ValueError(f"bit width must be one of {ALLOWED_BITS}")
        if not self.commitments:
            raise ValueError("need at least one commitment")
        object.__setattr__(self, "commitments", tuple(self.commitments))

    @property
    def m(self) -> int:
        """Padded aggregation size (a power of two)."""
        return _pow2_ceil(len(self.commitments))

    @property
    def padded(self) -> tuple[bool, ...]:
        """True for dummy slots that hold the identity commitment."""
        k = len(self.commitments)
        return tuple(i >= k for i in range(self.m))

    def padded_points(self) -> list[EdwardsPoint]:
        pts = [c.point for c in self.commitments]
        return pts + [EdwardsPoint.identity()] * (self.m - len(pts))


def proof_size_elements(n: int, m: int) -> tuple[int, int]:
    """(group elements, scalars) in a proof for m values of n bits each."""
    nm = n * _pow2_ceil(m)
    return 4 + 2 * (nm.bit_length() - 1), 5


def _prover_msm(nm: int, workers: int):
    if nm <= FIXED_BASE_MAX_NM:
        return lambda sc, pts: fixed_base_msm(sc, pts)
    return lambda sc, pts: msm(sc, pts, workers)


def _start_transcript(statement: RangeStatement) -> Transcript:
    t = Transcript(b"fort/bulletproofs/range")
    t.absorb(b"n", statement.n.to_bytes(4, "little"))
    t.absorb(b"m", statement.m.to_bytes(4, "little"))
    for p in statement.padded_points():
        t.absorb_point(b"V", p)
    return t


# --- inner-product argument ------------------------------------------------

def prove_inner_product(transcript: Transcript, g_vec: Sequence[EdwardsPoint],
                        h_vec: Sequence[EdwardsPoint], a: Sequence[int], b: Sequence[int],
                        q: EdwardsPoint | None = None, h_factors: Sequence[int] | None = None,
                        workers: int = 1, q_scale: int = 1) -> InnerProductProof:
    """Prove knowledge of a, b with P = <a,G> + <b,H'> + <a,b>Q.

    ``h_factors`` lets callers use H'_i = h_factors[i] * H_i without
    materialising H', and ``q_scale`` likewise stands for Q' = q_scale * Q.
    Generators are never folded: their folding coefficients are tracked and
    every L/R is one multi-scalar product.
    """
    n = len(a)
    if not (len(b) == len(g_vec) == len(h_vec) == n):
        raise ValueError("vector lengths differ")
    if n == 0 or n & (n - 1):
        raise ValueError("vector length must be a power of two")
    q = q if q is not None else _ipp_base()
    mul = _prover_msm(n, workers)
    a = [x % L for x in a]
    b = [x % L for x in b]
    gs = [1] * n
    hs = list(h_factors) if h_factors is not None else [1] * n
    g_vec = list(g_vec)
    h_vec = list(h_vec)
    full = n
    Ls, Rs = [], []
    while n > 1:
        half = n // 2
        a_lo, a_hi = a[:half], a[half:]
        b_lo, b_hi = b[:half], b[half:]
        c_l = inner_product(a_lo, b_hi, L) * q_scale
        c_r = inner_product(a_hi, b_lo, L) * q_scale
        l_sc, l_pt, r_sc, r_pt = [], [], [], []
        for j in range(full):
            i = j % n
            if i < half:
                # G_lo feeds R, H_lo feeds L
                r_sc.append(a_hi[i] * gs[j]); r_pt.append(g_vec[j])
                l_sc.append(b_hi[i] * hs[j]); l_pt.append(h_vec[j])
            else:
                l_sc.append(a_lo[i - half] * gs[j]); l_pt.append(g_vec[j])
                r_sc.append(b_lo[i - half] * hs[j]); r_pt.append(h_vec[j])
        Lk = mul(l_sc + [c_l], l_pt + [q])
        Rk = mul(r_sc + [c_r], r_pt + [q])
        transcript.absorb_point(b"L", Lk)
        transcript.absorb_point(b"R", Rk)
        u = transcript.challenge_scalar(b"u")
        u_inv = pow(u, -1, L)
        a = [(lo * u + hi * u_inv) % L for lo, hi in zip(a_lo, a_hi)]
        b = [(lo * u_inv + hi * u) % L for lo, hi in zip(b_lo, b_hi)]
        for j in range(full):
            if j % n < half:
                gs[j] = gs[j] * u_inv % L
                hs[j] = hs[j] * u % L
            else:
                gs[j] = gs[j] * u % L
                hs[j] = hs[j] * u_inv % L
        Ls.append(Lk)
        Rs.append(Rk)
        n = half
    return InnerProductProof(tuple(Ls), tuple(Rs), a[0], b[0])


def _ipp_challenges(transcript: Transcript, proof: InnerProductProof) -> list[int]:
    us = []
    for Lk, Rk in zip(proof.L, proof.R):
        transcript.absorb_point(b"L", Lk)
        transcript.absorb_point(b"R", Rk)
        us.append(transcript.challenge_scalar(b"u"))
    return us


def _s_vector(us: Sequence[int], n: int) -> list[int]:
    """s_i = prod_k u_k^{+1 if bit k of i (MSB first) else -1}."""
    k = len(us)
    u_invs = batch_inverse(us, L)
    s = [1] * n
    s[0] = 1
    for ui in u_invs:
        s[0] = s[0] * ui % L
    for i in range(1, n):
        # lowest set bit of i corresponds to round k-1-lg
        lg = (i & -i).bit_length() - 1
        u = us[k - 1 - lg]
        s[i] = s[i - (1 << lg)] * u % L * u % L
    return s


def verify_inner_product(transcript: Transcript, g_vec: Sequence[EdwardsPoint],
                         h_vec: Sequence[EdwardsPoint], P: EdwardsPoint,
                         proof: InnerProductProof, q: EdwardsPoint | None = None) -> bool:
    """Check P = <a,G> + <b,H> + <a,b>Q against an inner-product proof."""
    n = len(g_vec)
    if n != len(h_vec) or n == 0 or n & (n - 1):
        raise ValueError("generator vectors must have equal power-of-two length")
    if len(proof.L) != n.bit_length() - 1 or len(proof.R) != len(proof.L):
        return False
    q = q if q is not None else _ipp_base()
    us = _ipp_challenges(transcript, proof)
    s = _s_vector(us, n)
    s_inv = batch_inverse(s, L)
    scalars = [proof.a * si for si in s] + [proof.b * si for si in s_inv]
    scalars.append(proof.a * proof.b)
    points = list(g_vec) + list(h_vec) + [q]
    for u, Lk, Rk in zip(us, proof.L, proof.R):
        scalars += [-u * u, -pow(u, -2, L)]
        points += [Lk, Rk]
    scalars.append(-1)
    points.append(P)
    return msm(scalars, points).is_identity()


# --- range proofs ----------------------------------------------------------

def _bits(v: int, n: int) -> list[int]:
    return [(v >> i) & 1 for i in range(n)]


def prove_range(statement: RangeStatement, values: Sequence[int], blindings: Sequence[int],
                rng, workers: int = 1) -> RangeProof:
    """Prove every committed value lies in [0, 2^n).

    Refuses (RangeProofError) when a value is out of range or does not open
    its commitment; completeness is only promised for true statements.
    """
    k = len(statement.commitments)
    if len(values) != k or len(blindings) != k:
        raise ValueError("need one value and one blinding per commitment")
    params = statement.params
    for j, (v, g, c) in enumerate(zip(values, blindings, statement.commitments)):
        if not 0 <= v < 1 << statement.n:
            raise RangeProofError(f"value {j} is outside [0, 2^{statement.n})")
        if fixed_base_msm([v, g], [params.g, params.h]) != c.point:
            raise RangeProofError(f"value {j} does not open commitment {j}")
    return _prove(statement, values, blindings, rng, workers)


def _prove(statement: RangeStatement, values: Sequence[int], blindings: Sequence[int],
           rng, workers: int = 1) -> RangeProof:
    n, m = statement.n, statement.m
    nm = n * m
    params = statement.params
    pad = m - len(values)
    values = list(values) + [0] * pad
    blindings = list(blindings) + [0] * pad
    g_vec, h_vec = vector_generators(nm)
    mul = _prover_msm(nm, workers)
    t = _start_transcript(statement)

    a_l = []
    for v in values:
        a_l += _bits(v, n)
    a_r = [(x - 1) % L for x in a_l]
    alpha = rng.randrange(L)
    A = mul([alpha] + a_l + a_r, [params.h] + g_vec + h_vec)
    s_l = [rng.randrange(L) for _ in range(nm)]
    s_r = [rng.randrange(L) for _ in range(nm)]
    rho = rng.randrange(L)
    S = mul([rho] + s_l + s_r, [params.h] + g_vec + h_vec)
    t.absorb_point(b"A", A)
    t.absorb_point(b"S", S)
    y = t.challenge_scalar(b"y")
    z = t.challenge_scalar(b"z")

    y_pow = _powers(y, nm)
    two_pow = _powers(2, n)
    z_pow = _powers(z, m + 2)
    l0 = [(x - z) % L for x in a_l]
    l1 = s_l
    r0 = [0] * nm
    r1 = [0] * nm
    for i in range(nm):
        j, bit = divmod(i, n)
        r0[i] = (y_pow[i] * (a_r[i] + z) + z_pow[2 + j] * two_pow[bit]) % L
        r1[i] = y_pow[i] * s_r[i] % L
    t1 = (inner_product(l0, r1, L) + inner_product(l1, r0, L)) % L
    t2 = inner_product(l1, r1, L)
    tau1 = rng.randrange(L)
    tau2 = rng.randrange(L)
    T1 = mul([t1, tau1], [params.g, params.h])
    T2 = mul([t2, tau2], [params.g, params.h])
    t.absorb_point(b"T1", T1)
    t.absorb_point(b"T2", T2)
    x = t.challenge_scalar(b"x")

    tau_x = (tau2 * x * x + tau1 * x) % L
    for j in range(m):
        tau_x = (tau_x + z_pow[2 + j] * blindings[j]) % L
    mu = (alpha + rho * x) % L
    l_vec = [(p + q_ * x) % L for p, q_ in zip(l0, l1)]
    r_vec = [(p + q_ * x) % L for p, q_ in zip(r0, r1)]
    t_hat = inner_product(l_vec, r_vec, L)
    t.absorb_scalar(b"tau_x", tau_x)
    t.absorb_scalar(b"mu", mu)
    t.absorb_scalar(b"t_hat", t_hat)
    w = t.challenge_scalar(b"w")
    q = _ipp_base()

    y_inv_pow = _powers(pow(y, -1, L), nm)
    ipp = prove_inner_product(t, g_vec, h_vec, l_vec, r_vec, q=q, q_scale=w,
                              h_factors=y_inv_pow, workers=workers)
    return RangeProof(A, S, T1, T2, tau_x, mu, t_hat, ipp)


def verify_range(statement: RangeStatement, proof: RangeProof, workers: int = 1) -> bool:
    """Accept iff the proof shows every committed value is in [0, 2^n).

    Both verification equations are folded into one multi-scalar product
    using a transcript-derived weight.
    """
    n, m = statement.n, statement.m
    nm = n * m
    rounds = nm.bit_length() - 1
    if len(proof.ipp.L) != rounds or len(proof.ipp.R) != rounds:
        return False
    params = statement.params
    g_vec, h_vec = vector_generators(nm)
    V = statement.padded_points()
    t = _start_transcript(statement)
    t.absorb_point(b"A", proof.A)
    t.absorb_point(b"S", proof.S)
    y = t.challenge_scalar(b"y")
    z = t.challenge_scalar(b"z")
    t.absorb_point(b"T1", proof.T1)
    t.absorb_point(b"T2", proof.T2)
    x = t.challenge_scalar(b"x")
    t.absorb_scalar(b"tau_x", proof.tau_x)
    t.absorb_scalar(b"mu", proof.mu)
    t.absorb_scalar(b"t_hat", proof.t_hat)
    w = t.challenge_scalar(b"w")
    us = _ipp_challenges(t, proof.ipp)
    t.absorb_scalar(b"a", proof.ipp.a)
    t.absorb_scalar(b"b", proof.ipp.b)
    c = t.challenge_scalar(b"batch")

    y_pow = _powers(y, nm)
    y_inv_pow = _powers(pow(y, -1, L), nm)
    two_pow = _powers(2, n)
    z_pow = _powers(z, m + 3)
    sum_y = sum(y_pow) % L
    sum_2 = sum(two_pow) % L
    delta = ((z - z * z) * sum_y) % L
    for j in range(m):
        delta = (delta - z_pow[3 + j] * sum_2) % L

    a, b = proof.ipp.a, proof.ipp.b
    s = _s_vector(us, nm)
    s_inv = batch_inverse(s, L)
    u_sq = [u * u % L for u in us]
    u_inv_sq = batch_inverse(u_sq, L)

    # IPP check:  a<s,G> + b<s^-1,H'> + ab*wB_q
    #             - (A + xS - z<1,G> + <z y^i + z^{2+j} 2^bit, H'> - mu h + t_hat w B_q)
    #             - sum(u^2 L + u^-2 R) = 0
    # range check (weighted by c):
    #             t_hat g + tau_x h - sum z^{2+j} V_j - delta g - x T1 - x^2 T2 = 0
    scalars: list[int] = []
    points: list[EdwardsPoint] = []
    for i in range(nm):
        scalars.append(a * s[i] + z)
        points.append(g_vec[i])
    for i in range(nm):
        j, bit = divmod(i, n)
        h_coef = (b * s_inv[i] - z * y_pow[i] - z_pow[2 + j] * two_pow[bit]) % L
        scalars.append(h_coef * y_inv_pow[i])
        points.append(h_vec[i])
    scalars.append(w * (a * b - proof.t_hat))
    points.append(_ipp_base())
    scalars += [-1, -x, proof.mu + c * proof.tau_x]
    points += [proof.A, proof.S, params.h]
    scalars.append(c * (proof.t_hat - delta))
    points.append(params.g)
    scalars += [-c * x, -c * x * x]
    points += [proof.T1, proof.T2]
    for j in range(m):
        if not V[j].is_identity():
            scalars.append(-c * z_pow[2 + j])
            points.append(V[j])
    for k in range(rounds):
        scalars += [-u_sq[k], -u_inv_sq[k]]
        points += [proof.ipp.L[k], proof.ipp.R[k]]
    return msm(scalars, points, workers).is_identity()
