"""Imaginary quadratic fields via binary quadratic forms.

Elements of the ring of integers O of Q(sqrt d) are written as
``(u + v sqrt d) / 2`` with ``u = d v (mod 2)``, so the norm is
``(u^2 - d v^2) / 4`` and the trace is ``u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._errors import DomainError
from .arith import (
    is_fundamental_discriminant,
    is_prime,
    kronecker_symbol,
    sqrt_mod,
)

__all__ = [
    "QuadraticField",
    "QuadForm",
    "ResidueUnitQuotient",
    "unit_count",
    "units",
    "reduce_form",
    "reduced_forms",
    "class_number",
    "splitting_type",
    "prime_form",
    "ideal_class_of_prime",
    "cornacchia",
    "cornacchia_search",
    "residue_unit_quotient",
    "norm_trace_of_coset",
    "residue_unit_count",
    "ray_class_order",
    "ray_class_count_bruteforce",
    "principal_form",
]


def _check_fundamental(d: int) -> None:
    if d >= 0 or not is_fundamental_discriminant(d):
        raise DomainError(f"{d} is not a negative fundamental discriminant")


def unit_count(d: int) -> int:
    return {-3: 6, -4: 4}.get(d, 2)


def units(d: int) -> list[tuple[int, int]]:
    """Units of O as (u, v) pairs, i.e. solutions of u^2 - d v^2 = 4."""
    out = []
    vmax = math.isqrt(4 // -d) if d < 0 else 0
    for v in range(-vmax, vmax + 1):
        r = 4 + d * v * v
        if r < 0:
            continue
        u = math.isqrt(r)
        if u * u == r:
            out.extend({(u, v), (-u, v)})
    return sorted(out)


@dataclass(frozen=True)
class QuadForm:
    """Positive definite form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y


@dataclass(frozen=True)
class QuadraticField:
    d: int
    h: int
    w: int


def reduce_form(f: QuadForm, count_steps: bool = False):
    """Reduce a positive definite form; optionally also return the step count.

    One step = normalise b into (-a, a], then swap if a > c.
    """
    a, b, c = f.a, f.b, f.c
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise DomainError(f"{f} is not positive definite")
    steps = 0
    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            steps += 1
            continue
        if a == c and b < 0:
            b = -b
        steps += 1
        break
    g = QuadForm(a, b, c)
    return (g, steps) if count_steps else g


def reduced_forms(d: int) -> list[QuadForm]:
    """All reduced primitive forms of discriminant d."""
    out = []
    amax = math.isqrt(-d // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            f = QuadForm(a, b, c)
            if c < a or not f.is_reduced():
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(f)
    return out


@lru_cache(maxsize=None)
def class_number(d: int) -> QuadraticField:
    """Class number by counting reduced forms."""
    _check_fundamental(d)
    return QuadraticField(d, len(reduced_forms(d)), unit_count(d))


def splitting_type(d: int, ell: int) -> str:
    if ell < 3 or not is_prime(ell):
        raise DomainError(f"{ell} is not an odd prime")
    if d % ell == 0:
        return "ramified"
    return "split" if kronecker_symbol(d, ell) == 1 else "inert"


def principal_form(d: int) -> QuadForm:
    return QuadForm(1, d % 2, (d % 2 - d) // 4)


def prime_form(d: int, p: int) -> QuadForm:
    """The form (p, b, (b^2 - d)/4p) attached to a prime above a split p."""
    if p == 2:
        b = 1 if d % 8 == 1 else None
    else:
        r = sqrt_mod(d, p)
        b = None if not r else (r if (r - d) % 2 == 0 else p - r)
    if b is None or (b * b - d) % (4 * p):
        raise DomainError(f"{p} does not split in Q(sqrt {d})")
    return QuadForm(p, b, (b * b - d) // (4 * p))


def ideal_class_of_prime(d: int, p: int) -> str:
    """'principal' iff the primes above the split prime p are principal."""
    _check_fundamental(d)
    if not is_prime(p) or d % p == 0 or kronecker_symbol(d, p) != 1:
        raise DomainError(f"{p} is not split in Q(sqrt {d})")
    g = reduce_form(prime_form(d, p))
    return "principal" if g == principal_form(d) else "nonprincipal"


def cornacchia(d: int, p: int) -> tuple[int, int] | None:
    """Solve u^2 - d v^2 = 4p, giving a generator (u + v sqrt d)/2 of norm p.

    Euclidean descent from a square root of d modulo 4p; returns None when no
    element of norm p exists (p inert, or the primes above p non-principal).
    """
    if p == 2:
        return cornacchia_search(d, p)
    if d % p == 0:
        return None
    x0 = sqrt_mod(d, p)
    if x0 is None:
        return None
    if (x0 - d) % 2:
        x0 = p - x0
    a, b = 2 * p, x0
    bound = math.isqrt(4 * p)
    while b > bound:
        a, b = b, a % b
    rem = 4 * p - b * b
    if rem % -d:
        return None
    v2 = rem // -d
    v = math.isqrt(v2)
    if v * v != v2:
        return None
    return (b, v)


def cornacchia_search(d: int, p: int) -> tuple[int, int] | None:
    """Exhaustive search for u^2 - d v^2 = 4p with u, v >= 0 (test oracle)."""
    vmax = math.isqrt(4 * p // -d)
    for v in range(vmax, -1, -1):
        r = 4 * p + d * v * v
        u = math.isqrt(r)
        if u * u == r:
            return (u, v)
    return None


@dataclass
class ResidueUnitQuotient:
    """(O/lO)^x modulo the image of O^x, for l split in Q(sqrt d).

    Through the two embeddings sqrt d -> +r, -r mod l, O/lO is identified
    with F_l x F_l; a residue (u + v sqrt d)/2 maps to ((u + vr)/2, (u - vr)/2).
    ``coset_of[x, y]`` is the coset index of the pair (x, y) with x, y != 0.
    """

    d: int
    ell: int
    w: int
    r: int
    unit_pairs: list[tuple[int, int]]
    coset_of: np.ndarray
    members: list[list[tuple[int, int]]]

    def __len__(self) -> int:
        return len(self.members)

    def norm(self, k: int) -> int:
        x, y = self.members[k][0]
        return x * y % self.ell

    def traces(self, k: int) -> frozenset[int]:
        return frozenset((x + y) % self.ell for x, y in self.members[k])

    def mul(self, i: int, j: int) -> int:
        x1, y1 = self.members[i][0]
        x2, y2 = self.members[j][0]
        return int(self.coset_of[x1 * x2 % self.ell, y1 * y2 % self.ell])

    def of_element(self, u: int, v: int) -> int:
        """Coset of the residue of (u + v sqrt d)/2."""
        ell, inv2 = self.ell, pow(2, -1, self.ell)
        x = (u + v * self.r) * inv2 % ell
        y = (u - v * self.r) * inv2 % ell
        if x == 0 or y == 0:
            raise DomainError("element is not a unit mod l")
        return int(self.coset_of[x, y])

    def of_scalar(self, a: int) -> int:
        a %= self.ell
        return int(self.coset_of[a, a])


@lru_cache(maxsize=None)
def residue_unit_quotient(d: int, ell: int) -> ResidueUnitQuotient:
    """Enumerate the orbits of the unit action on (F_l^x)^2."""
    _check_fundamental(d)
    if ell < 5 or splitting_type(d, ell) != "split":
        raise DomainError(f"need a split prime >= 5, got l={ell} for d={d}")
    r = sqrt_mod(d, ell)
    inv2 = pow(2, -1, ell)
    us = units(d)
    pairs = [((u + v * r) * inv2 % ell, (u - v * r) * inv2 % ell) for u, v in us]
    coset_of = np.full((ell, ell), -1, dtype=np.int64)
    members: list[list[tuple[int, int]]] = []
    for x in range(1, ell):
        for y in range(1, ell):
            if coset_of[x, y] >= 0:
                continue
            orbit = sorted({(x * a % ell, y * b % ell) for a, b in pairs})
            k = len(members)
            for xy in orbit:
                coset_of[xy] = k
            members.append(orbit)
    return ResidueUnitQuotient(d, ell, len(us), r, pairs, coset_of, members)


def norm_trace_of_coset(q: ResidueUnitQuotient, k: int) -> tuple[int, frozenset[int]]:
    """Norm (well defined on the coset) and the set of traces of its members."""
    norms = {x * y % q.ell for x, y in q.members[k]}
    if len(norms) != 1:
        raise AssertionError(f"norm not constant on coset {k}: {norms}")
    return norms.pop(), q.traces(k)


def _prime_factors(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def residue_unit_count(d: int, m: int) -> int:
    """|(O/mO)^x| from the splitting of each prime power dividing m."""
    total = 1
    for p, e in _prime_factors(m).items():
        chi = kronecker_symbol(d, p)
        local = {1: (p - 1) ** 2, -1: p * p - 1, 0: p * (p - 1)}[chi]
        total *= local * p ** (2 * (e - 1))
    return total


def ray_class_order(d: int, m: int) -> int:
    """|Cl_m| = h |(O/mO)^x| / w, valid for m >= 5."""
    if m < 5:
        raise DomainError(f"ray class order formula needs m >= 5, got {m}")
    K = class_number(d)
    n = K.h * residue_unit_count(d, m)
    if n % K.w:
        raise AssertionError("unit count does not divide")
    return n // K.w


# Brute-force ray class count.  O = Z[w] with w = (delta + sqrt d)/2; an
# element x + y w is the pair (x, y) and an ideal n [A, B + w] the triple
# (n, A, B).  Nothing below uses h, w or the splitting of primes dividing m.


def _ring(d: int) -> tuple[int, int]:
    delta = d % 2
    return delta, (delta - d) // 4  # w^2 = delta w - c0


def _mul(d: int, s: tuple[int, int], t: tuple[int, int]) -> tuple[int, int]:
    delta, c0 = _ring(d)
    x1, y1 = s
    x2, y2 = t
    return (x1 * x2 - c0 * y1 * y2, x1 * y2 + x2 * y1 + delta * y1 * y2)


def _ideals_upto(d: int, bound: int) -> list[tuple[int, int, int]]:
    delta, c0 = _ring(d)
    prim = []
    for A in range(1, bound + 1):
        for B in range(A):
            if (B * B + delta * B + c0) % A == 0:
                prim.append((A, B))
    out = []
    for A, B in prim:
        n = 1
        while n * n * A <= bound:
            out.append((n, A, B))
            n += 1
    out.sort(key=lambda t: (t[0] * t[0] * t[1], t))
    return out


def _contains(ideal: tuple[int, int, int], elt: tuple[int, int]) -> bool:
    n, A, B = ideal
    x, y = elt
    if x % n or y % n:
        return False
    return (x // n - (y // n) * B) % A == 0


def _elements_of_norm(d: int, norm: int):
    delta, _ = _ring(d)
    ymax = math.isqrt(4 * norm // -d)
    for y in range(-ymax, ymax + 1):
        disc = 4 * norm + d * y * y
        if disc < 0:
            continue
        s = math.isqrt(disc)
        if s * s != disc:
            continue
        for root in {s, -s}:
            if (root - delta * y) % 2 == 0:
                yield ((root - delta * y) // 2, y)


def _generator_between(d: int, a, r) -> tuple[int, int] | None:
    """gamma with (gamma) = a * conj(r), i.e. a = (gamma / N(r)) r, or None."""
    na = a[0] ** 2 * a[1]
    nr = r[0] ** 2 * r[1]
    target = (a[0] * nr, a[1], a[2])
    gens = [(r[0] * r[1], 0), (r[0] * r[2], r[0])]
    for g in _elements_of_norm(d, na * nr):
        if all(_contains(target, _mul(d, g, t)) for t in gens):
            return g
    return None


def ray_class_count_bruteforce(d: int, m: int, bound: int | None = None) -> int:
    """Count ray classes mod m met by integral ideals of norm <= bound.

    Each ideal a coprime to m is matched to the first earlier representative
    r of its ideal class with a = beta r; the ray class of a is then fixed by
    (r, beta mod m up to units).  ``bound`` doubles until the count is stable.
    """
    _check_fundamental(d)
    us = [((u - (d % 2) * v) // 2, v) for u, v in units(d)]
    bound = bound or 32 * m

    def count(limit: int) -> int:
        reps: list[tuple[int, int, int]] = []
        seen: set = set()
        for a in _ideals_upto(d, limit):
            if math.gcd(a[0] * a[0] * a[1], m) != 1:
                continue
            for k, r in enumerate(reps):
                g = _generator_between(d, a, r)
                if g is not None:
                    break
            else:
                reps.append(a)
                k, r, g = len(reps) - 1, a, None
            if g is None:
                beta = (1, 0)
            else:
                inv = pow(r[0] ** 2 * r[1], -1, m)
                beta = (g[0] * inv % m, g[1] * inv % m)
            orbit = min(
                (z[0] % m, z[1] % m) for z in (_mul(d, beta, u) for u in us)
            )
            seen.add((k, orbit))
        return len(seen)

    prev = count(bound)
    while True:
        bound *= 2
        cur = count(bound)
        if cur == prev:
            return cur
        prev = cur
