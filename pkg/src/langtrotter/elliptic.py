"""Elliptic curves over Q in short Weierstrass form and their Frobenius traces.

Sign convention: ``a_p = p + 1 - #E(F_p)``, so Frobenius has characteristic
polynomial ``x^2 - a_p x + p``. With this convention a_p is the trace of the
mod-l Galois image of Frob_p.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from . import _kernels
from ._errors import DomainError
from .arith import fundamental_discriminant, is_prime, iter_prime_segments, primes_between

__all__ = [
    "EllipticCurve",
    "ApRecord",
    "ApTable",
    "good_reduction",
    "bad_primes",
    "ap",
    "ap_table",
    "reduction_type",
    "trace_of_power",
    "write_cache",
    "read_cache",
    "cache_path",
    "load_or_compute",
    "cached_table",
    "CACHE_HEADER",
]

CACHE_HEADER = ("p", "a", "ordinary", "D", "d")


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 = x^3 + A x + B over Q."""

    A: int
    B: int

    def __post_init__(self):
        if self.disc == 0:
            raise DomainError(f"singular model y^2 = x^3 + {self.A}x + {self.B}")

    @property
    def disc(self) -> int:
        return -16 * (4 * self.A**3 + 27 * self.B**2)

    def __str__(self) -> str:
        return f"E({self.A},{self.B})"


@dataclass(frozen=True)
class ApRecord:
    p: int
    a: int
    ordinary: bool
    D: int
    d: int

    @classmethod
    def build(cls, p: int, a: int) -> "ApRecord":
        D = a * a - 4 * p
        return cls(p, a, a % p != 0, D, fundamental_discriminant(D))


def good_reduction(E: EllipticCurve, p: int) -> bool:
    """True iff p does not divide the model discriminant."""
    return E.disc % p != 0


def bad_primes(E: EllipticCurve, x: int) -> list[int]:
    """Primes <= x dividing the model discriminant (always includes 2)."""
    out = []
    for seg in iter_prime_segments(2, min(x, abs(E.disc))):
        out.extend(int(p) for p in seg if E.disc % int(p) == 0)
    return out


def ap(E: EllipticCurve, p: int) -> int:
    """Trace of Frobenius at an odd prime of good reduction."""
    if p == 2 or not is_prime(p):
        raise DomainError(f"ap needs an odd prime, got {p}")
    if not good_reduction(E, p):
        raise DomainError(f"{E} has bad reduction at {p}")
    return int(_kernels.ap_kernel(E.A, E.B, np.array([p], dtype=np.int64))[0])


def trace_of_power(a: int, p: int, m: int) -> int:
    """Trace of M^m for a 2x2 matrix M with trace a and determinant p.

    Newton recurrence s_m = a s_{m-1} - p s_{m-2}, s_0 = 2, s_1 = a.
    """
    if m < 1:
        raise DomainError(f"power must be >= 1, got {m}")
    s_prev, s = 2, a
    for _ in range(m - 1):
        s_prev, s = s, a * s - p * s_prev
    return s


def reduction_type(rec: ApRecord) -> str:
    return "ordinary" if rec.a % rec.p != 0 else "supersingular"


@dataclass
class ApTable:
    """Columnar table of a_p records for one curve, ascending in p."""

    curve: EllipticCurve
    x: int
    p: np.ndarray
    a: np.ndarray
    d: np.ndarray

    @property
    def D(self) -> np.ndarray:
        return self.a * self.a - 4 * self.p

    @property
    def ordinary(self) -> np.ndarray:
        return self.a % self.p != 0

    def __len__(self) -> int:
        return int(self.p.size)

    def __getitem__(self, i: int) -> ApRecord:
        p, a = int(self.p[i]), int(self.a[i])
        return ApRecord(p, a, a % p != 0, a * a - 4 * p, int(self.d[i]))

    def __iter__(self) -> Iterator[ApRecord]:
        for i in range(len(self)):
            yield self[i]

    def upto(self, x: int) -> "ApTable":
        """Sub-table of primes <= x (x must not exceed this table's range)."""
        if x > self.x:
            raise DomainError(f"table covers p <= {self.x}, asked for {x}")
        n = int(np.searchsorted(self.p, x, side="right"))
        return ApTable(self.curve, x, self.p[:n], self.a[:n], self.d[:n])

    def equals(self, other: "ApTable") -> bool:
        return (
            self.curve == other.curve
            and np.array_equal(self.p, other.p)
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.d, other.d)
        )


def _fundamental_array(D: np.ndarray) -> np.ndarray:
    if D.size == 0:
        return np.zeros(0, dtype=np.int64)
    bound = math.isqrt(int(-D.min())) + 1
    base = primes_between(2, max(bound, 2)).primes
    return _kernels.fundamental_kernel(D.astype(np.int64), base)


def _compute_shard(A: int, B: int, primes: np.ndarray) -> np.ndarray:
    return _kernels.ap_kernel(A, B, primes)


def ap_table(E: EllipticCurve, x: int, shards: int = 1) -> ApTable:
    """a_p for every odd prime p <= x of good reduction.

    ``shards`` splits the prime list into contiguous pieces computed on a
    thread pool; results are concatenated in shard order, so the table does
    not depend on the shard count.
    """
    x = int(x)
    if x < 3:
        empty = np.zeros(0, dtype=np.int64)
        return ApTable(E, x, empty, empty.copy(), empty.copy())
    primes = primes_between(3, x).primes
    disc = E.disc
    primes = primes[[disc % int(p) != 0 for p in primes]] if primes.size else primes
    shards = max(1, int(shards))
    if shards == 1 or primes.size < 2:
        a = _compute_shard(E.A, E.B, primes)
    else:
        # balance by total work (sum of p), not by prime count
        work = np.cumsum(primes)
        cuts = np.searchsorted(work, work[-1] * np.arange(1, shards) / shards)
        pieces = np.split(primes, cuts)
        with ThreadPoolExecutor(max_workers=shards) as pool:
            parts = list(pool.map(lambda ps: _compute_shard(E.A, E.B, ps), pieces))
        a = np.concatenate(parts)
    d = _fundamental_array(a * a - 4 * primes)
    return ApTable(E, x, primes, a, d)


def write_cache(table: ApTable, path: str | os.PathLike) -> None:
    """Write the table as CSV: header ``p,a,ordinary,D,d``, LF endings."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CACHE_HEADER)
        D = table.D
        ordinary = table.ordinary
        for i in range(len(table)):
            w.writerow(
                (int(table.p[i]), int(table.a[i]), int(ordinary[i]), int(D[i]), int(table.d[i]))
            )


def read_cache(path: str | os.PathLike, curve: EllipticCurve, x: int | None = None) -> ApTable:
    """Read a cache file written by :func:`write_cache`.

    ``x`` defaults to the largest prime in the file.
    """
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or tuple(header) != CACHE_HEADER:
            raise ValueError(f"{path}: bad a_p cache header {header!r}")
        data = [tuple(int(v) for v in row) for row in rows if row]
    arr = np.array(data, dtype=np.int64).reshape(-1, 5)
    p, a, _, _, d = arr.T
    if x is None:
        x = int(p[-1]) if p.size else 2
    return ApTable(curve, int(x), p.copy(), a.copy(), d.copy())


def cache_path(E: EllipticCurve, x: int, cache_dir: str | os.PathLike | None = None) -> Path:
    base = Path(cache_dir or os.environ.get("LT_CACHE_DIR") or Path.home() / ".cache" / "langtrotter")
    return base / f"ap_{E.A}_{E.B}_{int(x)}.csv"


def cached_table(E: EllipticCurve, x: int, cache_dir: str | os.PathLike | None = None) -> ApTable | None:
    """Smallest cached table for E covering x, sliced to x; None if there is none."""
    folder = cache_path(E, x, cache_dir).parent
    if not folder.is_dir():
        return None
    best = None
    for f in folder.glob(f"ap_{E.A}_{E.B}_*.csv"):
        try:
            fx = int(f.stem.rsplit("_", 1)[1])
        except ValueError:
            continue
        if fx >= x and (best is None or fx < best[0]):
            best = (fx, f)
    if best is None:
        return None
    return read_cache(best[1], E, best[0]).upto(int(x))


def load_or_compute(
    E: EllipticCurve, x: int, cache_dir: str | os.PathLike | None = None, shards: int = 1
) -> ApTable:
    """Table up to x, reusing any cached table for the same curve with a larger range."""
    hit = cached_table(E, x, cache_dir)
    if hit is not None:
        return hit
    target = cache_path(E, x, cache_dir)
    table = ap_table(E, x, shards=shards)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_suffix(".tmp")
    write_cache(table, tmp)
    os.replace(tmp, target)
    return table
