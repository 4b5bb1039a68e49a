"""Integer primitives: primes, quadratic symbols, discriminants and Li(x)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ._errors import DomainError

__all__ = [
    "PrimeRange",
    "SEGMENT_LENGTH",
    "is_prime",
    "sieve_primes",
    "primes_between",
    "iter_prime_segments",
    "prime_pi",
    "legendre_symbol",
    "jacobi_symbol",
    "kronecker_symbol",
    "is_fundamental_discriminant",
    "fundamental_discriminant",
    "squarefree_part",
    "sqrt_mod",
    "li",
]

# ~2^20 integers per segment keeps the working mask L2-resident.
SEGMENT_LENGTH = 1 << 20


@dataclass(frozen=True)
class PrimeRange:
    lo: int
    hi: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self):
        return iter(self.primes.tolist())

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.primes, n)
        return bool(i < self.primes.size and self.primes[i] == n)

    def tolist(self) -> list[int]:
        return self.primes.tolist()


def _small_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    mark[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if mark[p]:
            mark[p * p :: 2 * p] = False
    return np.flatnonzero(mark).astype(np.int64)


def iter_prime_segments(
    lo: int, hi: int, segment: int = SEGMENT_LENGTH
) -> Iterator[np.ndarray]:
    """Yield ascending arrays of the primes in ``[lo, hi]``, one per segment.

    Segments are independent of each other, so they can be produced in any
    order or in parallel; concatenating them in segment order gives the
    ascending prime list.
    """
    lo = max(lo, 2)
    if hi < lo:
        return
    base = _small_sieve(math.isqrt(hi))
    start = lo
    while start <= hi:
        stop = min(start + segment, hi + 1)  # exclusive
        mark = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            mark[first - start :: p] = False
        if start <= 1:
            mark[: 2 - start] = False
        yield np.flatnonzero(mark).astype(np.int64) + start
        start = stop


def primes_between(lo: int, hi: int) -> PrimeRange:
    """All primes in the closed interval ``[lo, hi]``."""
    if hi < 2 or hi < lo:
        raise DomainError(f"empty prime range [{lo}, {hi}]")
    parts = list(iter_prime_segments(lo, hi))
    primes = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return PrimeRange(max(lo, 2), hi, primes)


def sieve_primes(limit: int) -> PrimeRange:
    """All primes ``<= limit`` via a segmented sieve of Eratosthenes.

    >>> sieve_primes(10).tolist()
    [2, 3, 5, 7]
    """
    if limit < 2:
        raise DomainError(f"no primes below {limit}")
    return primes_between(2, int(limit))


def prime_pi(x: float) -> int:
    """Number of primes ``<= x`` (0 for x < 2)."""
    n = int(math.floor(x))
    if n < 2:
        return 0
    return sum(int(seg.size) for seg in iter_prime_segments(2, n))


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        y = pow(a, d, n)
        if y in (1, n - 1):
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise DomainError(f"Jacobi symbol needs odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p.

    Raises DomainError when p is even or composite.
    """
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    return jacobi_symbol(a, p)


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for positive n.

    Completely multiplicative in n. For a fundamental discriminant d and an
    odd prime l not dividing d, the value is 1 exactly when l splits in
    Q(sqrt d).
    """
    if n <= 0:
        raise DomainError(f"Kronecker symbol needs positive n, got {n}")
    result = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi_symbol(d, n)


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel s with n = s * t^2."""
    if n == 0:
        raise DomainError("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    m = abs(n)
    s = 1
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e % 2:
            s *= p
        p += 1 if p == 2 else 2
    return sign * s * m


def is_fundamental_discriminant(d: int) -> bool:
    if d == 0 or d == 1:
        return False
    if d % 4 == 1:
        return squarefree_part(d) == d
    if d % 4 == 0:
        q = d // 4
        return q % 4 in (2, 3) and squarefree_part(q) == q
    return False


def fundamental_discriminant(D: int) -> int:
    """Discriminant of the imaginary quadratic field Q(sqrt D).

    >>> fundamental_discriminant(-16)
    -4
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")
    s = squarefree_part(D)
    return s if s % 4 == 1 else 4 * s


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _simpson(f, a, fa, b, fb, m, fm, whole, eps, abs_floor, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= max(15.0 * eps * abs(left + right), abs_floor):
        return left + right + delta / 15.0
    return _simpson(f, a, fa, m, fm, lm, flm, left, eps, abs_floor / 2, depth - 1) + _simpson(
        f, m, fm, b, fb, rm, frm, right, eps, abs_floor / 2, depth - 1
    )


def adaptive_simpson(f, a: float, b: float, rel: float = 1e-11, abs_floor: float = 1e-12) -> float:
    """Adaptive Simpson quadrature of f over [a, b]."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson(f, a, fa, b, fb, m, fm, whole, rel, abs_floor, 48)


def li(x: float) -> float:
    """Offset logarithmic integral, the integral of 1/log t from 2 to x.

    Adaptive Simpson on dyadic panels [2, 4], [4, 8], ... so each panel has a
    bounded integrand ratio.
    """
    if x < 2:
        raise DomainError(f"li needs x >= 2, got {x}")
    total = 0.0
    a = 2.0
    while a < x:
        b = min(2.0 * a, float(x))
        total += adaptive_simpson(lambda t: 1.0 / math.log(t), a, b)
        a = b
    return total
