"""Compiled inner loops for point counting and discriminant reduction."""

import numpy as np
from numba import njit

# Independent finite-difference chains per prime; wide enough for the
# compiler to overlap the table loads.
LANES = 64


@njit(cache=True, boundscheck=False, nogil=True)
def _mark_squares(p, sq):
    # sq[v] = 1 for nonzero squares, -1 for non-squares, 0 at v = 0
    sq[:p] = -1
    sq[0] = 0
    h = (p - 1) // 2
    q = h // LANES
    y2 = np.empty(LANES, np.uint32)
    inc = np.empty(LANES, np.uint32)
    for j in range(LANES):
        y = 1 + j * q
        y2[j] = y * y % p
        inc[j] = (2 * y + 1) % p
    p32 = np.uint32(p)
    two = np.uint32(2)
    for _ in range(q):
        for j in range(LANES):
            sq[y2[j]] = 1
        for j in range(LANES):
            s = y2[j] + inc[j]
            y2[j] = min(s, np.uint32(s - p32))
            t = inc[j] + two
            inc[j] = min(t, np.uint32(t - p32))
    for y in range(1 + LANES * q, h + 1):
        sq[y * y % p] = 1


@njit(cache=True, boundscheck=False, nogil=True)
def _legendre_sum(A, B, p, sq, f, d1, d2):
    # sum over x mod p of legendre(x^3 + A x + B, p); sq must be marked for p
    A %= p
    B %= p
    q = p // LANES
    for j in range(LANES):
        x = j * q
        f[j] = ((x * x % p) * x + A * x + B) % p
        d1[j] = (3 * x * x + 3 * x + 1 + A) % p
        d2[j] = (6 * x + 6) % p
    p32 = np.uint32(p)
    six = np.uint32(6)
    s = 0
    for _ in range(q):
        for j in range(LANES):
            s += sq[f[j]]
        for j in range(LANES):
            u = f[j] + d1[j]
            f[j] = min(u, np.uint32(u - p32))
            v = d1[j] + d2[j]
            d1[j] = min(v, np.uint32(v - p32))
            w = d2[j] + six
            d2[j] = min(w, np.uint32(w - p32))
    for x in range(LANES * q, p):
        s += sq[((x * x % p) * x + A * x + B) % p]
    return s


@njit(cache=True, nogil=True)
def ap_kernel(A, B, primes):
    """a_p = -sum_x (x^3+Ax+B / p) for each odd prime in ``primes``."""
    out = np.empty(primes.size, np.int64)
    if primes.size == 0:
        return out
    sq = np.empty(primes.max() + 1, np.int8)
    f = np.empty(LANES, np.uint32)
    d1 = np.empty(LANES, np.uint32)
    d2 = np.empty(LANES, np.uint32)
    for i in range(primes.size):
        p = primes[i]
        _mark_squares(p, sq)
        out[i] = -_legendre_sum(A, B, p, sq, f, d1, d2)
    return out


@njit(cache=True, nogil=True)
def fundamental_kernel(D, base_primes):
    """Fundamental discriminant of Q(sqrt D) for each negative D."""
    out = np.empty(D.size, np.int64)
    for i in range(D.size):
        m = -D[i]
        s = 1
        for k in range(base_primes.size):
            p = base_primes[k]
            if p * p > m:
                break
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e & 1:
                s *= p
        s *= m
        # field discriminant of Q(sqrt(-s)), s > 0 squarefree
        out[i] = -s if s % 4 == 3 else -4 * s
    return out
