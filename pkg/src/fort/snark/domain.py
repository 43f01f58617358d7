"""Radix-2 evaluation domains over the scalar field."""

from __future__ import annotations

from ..algebra.field import FIELD_MODULUS as P, MULTIPLICATIVE_GENERATOR, batch_inverse, root_of_unity


def _bit_reverse(a: list[int]) -> None:
    n = len(a)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]


def _ntt(a: list[int], omega: int) -> list[int]:
    a = list(a)
    n = len(a)
    _bit_reverse(a)
    size = 2
    while size <= n:
        half = size // 2
        w_step = pow(omega, n // size, P)
        twiddles = [1] * half
        for k in range(1, half):
            twiddles[k] = twiddles[k - 1] * w_step % P
        for start in range(0, n, size):
            for k in range(half):
                i = start + k
                u = a[i]
                v = a[i + half] * twiddles[k] % P
                a[i] = (u + v) % P
                a[i + half] = (u - v) % P
        size *= 2
    return a


class Domain:
    """Multiplicative subgroup of order ``size`` (a power of two)."""

    def __init__(self, size: int):
        if size < 2 or size & (size - 1):
            raise ValueError("domain size must be a power of two >= 2")
        self.size = size
        self.omega = root_of_unity(size)
        self.omega_inv = pow(self.omega, -1, P)
        self.size_inv = pow(size, -1, P)
        self.coset = MULTIPLICATIVE_GENERATOR
        self.coset_inv = pow(self.coset, -1, P)

    @classmethod
    def at_least(cls, n: int) -> "Domain":
        size = 2
        while size < n:
            size *= 2
        return cls(size)

    def elements(self) -> list[int]:
        out = [1] * self.size
        for i in range(1, self.size):
            out[i] = out[i - 1] * self.omega % P
        return out

    def fft(self, coeffs: list[int]) -> list[int]:
        return _ntt(coeffs + [0] * (self.size - len(coeffs)), self.omega)

    def ifft(self, evals: list[int]) -> list[int]:
        return [x * self.size_inv % P for x in _ntt(evals, self.omega_inv)]

    def coset_fft(self, coeffs: list[int]) -> list[int]:
        g, acc, shifted = self.coset, 1, []
        for c in coeffs:
            shifted.append(c * acc % P)
            acc = acc * g % P
        return self.fft(shifted)

    def coset_ifft(self, evals: list[int]) -> list[int]:
        coeffs = self.ifft(evals)
        g, acc = self.coset_inv, 1
        for i in range(len(coeffs)):
            coeffs[i] = coeffs[i] * acc % P
            acc = acc * g % P
        return coeffs

    def vanishing_at(self, x: int) -> int:
        return (pow(x, self.size, P) - 1) % P

    def lagrange_at(self, tau: int) -> list[int]:
        """[L_j(tau)] for the Lagrange basis of this domain (tau outside the domain)."""
        z = self.vanishing_at(tau)
        if z == 0:
            raise ValueError("tau lies in the domain")
        elems = self.elements()
        invs = batch_inverse([(tau - w) % P for w in elems])
        scale = z * self.size_inv % P
        return [scale * w % P * iv % P for w, iv in zip(elems, invs)]
