"""Counting Frobenius data: Chebotarev counts, smoothed sums, Lang-Trotter functions.

Predicates act on characteristic-polynomial classes (trace, det) mod l.  A
predicate is turned into an l x l boolean mask once, and expected densities
|C|/|G| come from counting matrices in GL_2(F_l) with those invariants.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._errors import DomainError, FitUnavailable, InvariantViolation
from .arith import adaptive_simpson, is_prime, li, prime_pi
from .elliptic import ApRecord, ApTable, EllipticCurve, ap_table, bad_primes, load_or_compute
from .groups import charpoly_class_sizes, gl2_order, square_table
from .quadfield import (
    class_number,
    cornacchia,
    ideal_class_of_prime,
    residue_unit_quotient,
    splitting_type,
)

__all__ = [
    "CharPolyClass",
    "CountReport",
    "SmoothWindow",
    "frob_class",
    "pred_mask",
    "class_fraction",
    "always",
    "det_is",
    "trace_is",
    "in_set_C",
    "resolve_table",
    "pi_C",
    "pi_tilde_C",
    "make_window",
    "smoothed_count",
    "count_PEa",
    "pea_window_diagnostic",
    "count_PEk",
    "count_DE",
    "MixedCheck",
    "mixed_frobenius_check",
    "bound_profile",
    "FitResult",
    "asymptote_fit",
    "charpoly_frequencies",
    "surjectivity_witness",
    "conductor_proxy_M",
    "existence_threshold",
]


@dataclass(frozen=True)
class CharPolyClass:
    ell: int
    t: int
    dt: int

    def __post_init__(self):
        if self.dt % self.ell == 0:
            raise DomainError("determinant must be a unit mod l")


Predicate = Callable[[CharPolyClass], bool]


def frob_class(rec: ApRecord, ell: int) -> CharPolyClass | None:
    """(a_p mod l, p mod l); None when p = l, which is skipped."""
    if rec.p == ell:
        return None
    return CharPolyClass(ell, rec.a % ell, rec.p % ell)


def always(c: CharPolyClass) -> bool:
    return True


def det_is(n: int) -> Predicate:
    return lambda c: c.dt == n % c.ell


def trace_is(a: int) -> Predicate:
    return lambda c: c.t == a % c.ell


def in_set_C(a: int) -> Predicate:
    """Trace a and tr^2 - 4 det a square in F_l (0 counts as a square)."""

    def pred(c: CharPolyClass) -> bool:
        return c.t == a % c.ell and bool(square_table(c.ell)[(c.t * c.t - 4 * c.dt) % c.ell])

    return pred


def pred_mask(ell: int, pred: Predicate) -> np.ndarray:
    mask = np.zeros((ell, ell), dtype=bool)
    for t in range(ell):
        for n in range(1, ell):
            mask[t, n] = bool(pred(CharPolyClass(ell, t, n)))
    return mask


def class_fraction(ell: int, pred: Predicate | np.ndarray) -> Fraction:
    """|C|/|G| for the union of char-poly classes selected by pred."""
    mask = pred if isinstance(pred, np.ndarray) else pred_mask(ell, pred)
    sizes = charpoly_class_sizes(ell)
    return Fraction(int(sizes[mask].sum()), gl2_order(ell))


@dataclass
class CountReport:
    kind: str
    x: float
    observed: float
    expected: float
    fraction: float
    margin: float
    normalizer: float = 1.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CountReport":
        return cls(**json.loads(text))

    @property
    def ratio(self) -> float:
        return self.observed / self.expected if self.expected else math.nan


def resolve_table(E: EllipticCurve | ApTable, x: float) -> ApTable:
    """a_p table up to x: slice a given table, else compute (disk cache if LT_CACHE_DIR is set)."""
    x = int(x)
    if isinstance(E, ApTable):
        return E.upto(x)
    if os.environ.get("LT_CACHE_DIR"):
        return load_or_compute(E, x)
    return ap_table(E, x)


def _unramified(table: ApTable, ell: int) -> np.ndarray:
    return table.p != ell


def pi_C(E, ell: int, x: float, pred: Predicate = always) -> CountReport:
    """Good primes p <= x, p != l, whose Frobenius class satisfies pred."""
    if x < 3:
        raise DomainError("need x >= 3")
    table = resolve_table(E, x)
    mask = pred_mask(ell, pred)
    keep = _unramified(table, ell)
    hits = mask[table.a[keep] % ell, table.p[keep] % ell]
    frac = class_fraction(ell, mask)
    n = int(keep.sum())
    f = float(frac)
    return CountReport(
        kind="pi_C",
        x=float(x),
        observed=float(hits.sum()),
        expected=f * li(x),
        fraction=f,
        margin=math.sqrt(n * f * (1 - f)),
        extra={"ell": ell, "fraction_exact": str(frac), "eligible": n},
    )


def pi_tilde_C(E, ell: int, x: float, pred: Predicate = always, include_ramified: bool = False) -> CountReport:
    """Prime-power count sum over p^m <= x of (1/m) [Frob_p^m in C].

    The class of Frob_p^m has trace s_m (Newton recurrence) and det p^m.
    Ramified primes (bad p and p = l) are left out unless
    ``include_ramified``; then each contributes the inertia average of the
    indicator, which is 1 or 0 when pred selects every class or none, and is
    undetermined otherwise (those primes go into ``margin``).
    """
    if x < 3:
        raise DomainError("need x >= 3")
    table = resolve_table(E, x)
    mask = pred_mask(ell, pred)
    keep = _unramified(table, ell)
    p = table.p[keep]
    a = table.a[keep]
    total = Fraction(int(mask[a % ell, p % ell].sum()))
    first = total
    # m >= 2: only p <= sqrt(x) matter
    small = p <= math.isqrt(int(x))
    p_s = p[small]
    a_s = a[small] % ell
    s_prev = np.full(p_s.size, 2 % ell, dtype=np.int64)
    s_cur = a_s.copy()
    pm = p_s.copy()
    pm_mod = p_s % ell
    m = 1
    while p_s.size:
        m += 1
        s_prev, s_cur = s_cur, (s_cur * a_s - (p_s % ell) * s_prev) % ell
        pm = pm * p_s
        pm_mod = pm_mod * (p_s % ell) % ell
        alive = pm <= x
        p_s, a_s, s_prev, s_cur, pm, pm_mod = (v[alive] for v in (p_s, a_s, s_prev, s_cur, pm, pm_mod))
        total += Fraction(int(mask[s_cur, pm_mod].sum()), m)
    ramified = sorted(set(bad_primes(table.curve, int(x))) | ({ell} if ell <= x and is_prime(ell) else set()))
    full = bool(mask[:, 1:].all())
    empty = not mask.any()
    undetermined = 0
    if include_ramified:
        for q in ramified:
            k, qm = 1, q
            while qm <= x:
                if full:
                    total += Fraction(1, k)
                elif not empty:
                    undetermined += 1
                k += 1
                qm *= q
    b1 = sum(prime_pi(x ** (1.0 / k)) / k for k in range(2, int(math.log2(x)) + 1))
    f = float(class_fraction(ell, mask))
    return CountReport(
        kind="pi_tilde_C",
        x=float(x),
        observed=float(total),
        expected=f * li(x),
        fraction=f,
        margin=b1 + len(ramified) + undetermined,
        extra={
            "ell": ell,
            "exact": str(total),
            "prime_part": int(first),
            "ramified_primes": ramified,
            "include_ramified": include_ramified,
        },
    )


def _bump(s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s, dtype=float)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def _smooth_step(u: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    out[u >= 1] = 1.0
    mid = (u > 0) & (u < 1)
    a = np.exp(-1.0 / u[mid])
    b = np.exp(-1.0 / (1.0 - u[mid]))
    out[mid] = a / (a + b)
    return out


@dataclass
class SmoothWindow:
    kind: str
    c1: float
    c2: float
    integral: float
    integral_error: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "bump":
            s = (2.0 * t - self.c1 - self.c2) / (self.c2 - self.c1)
            return _bump(s)
        up = _smooth_step((t - self.c1) / (0.5 - self.c1))
        down = _smooth_step((self.c2 - t) / (self.c2 - 1.0))
        return up * down


def make_window(kind: str = "bump", c1: float | None = None, c2: float | None = None) -> SmoothWindow:
    """Smooth compactly supported weight on [c1, c2].

    ``bump``: exp(-1/(1 - s^2)) with s rescaled from [c1, c2] to [-1, 1]
    (defaults [1/2, 1]).  ``dominating``: equal to 1 on [1/2, 1] with smooth
    ramps down to 0 at c1 < 1/2 and c2 > 1 (defaults 1/4, 5/4).
    """
    if kind not in ("bump", "dominating"):
        raise DomainError(f"unknown window kind {kind!r}")
    if kind == "bump":
        c1 = 0.5 if c1 is None else c1
        c2 = 1.0 if c2 is None else c2
    else:
        c1 = 0.25 if c1 is None else c1
        c2 = 1.25 if c2 is None else c2
    if c1 <= 0 or c1 >= c2:
        raise DomainError(f"need 0 < c1 < c2, got [{c1}, {c2}]")
    if kind == "dominating" and not (c1 < 0.5 and c2 > 1.0):
        raise DomainError("dominating window needs c1 < 1/2 and c2 > 1")
    w = SmoothWindow(kind, float(c1), float(c2), 0.0, 0.0)
    g = lambda t: float(w(t))
    coarse = adaptive_simpson(g, c1, c2, rel=1e-8, abs_floor=1e-14)
    fine = adaptive_simpson(g, c1, c2, rel=1e-12, abs_floor=1e-16)
    w.integral = fine
    w.integral_error = abs(fine - coarse)
    return w


def smoothed_count(E, ell: int, pred: Predicate, f: SmoothWindow, x: float) -> CountReport:
    """Sum over good p != l of [Frob_p in C] log p f(p/x); main term |C|/|G| x int f."""
    if x < 3:
        raise DomainError("need x >= 3")
    table = resolve_table(E, math.floor(f.c2 * x))
    mask = pred_mask(ell, pred)
    keep = _unramified(table, ell)
    p = table.p[keep]
    sel = mask[table.a[keep] % ell, p % ell]
    p = p[sel]
    terms = np.log(p.astype(float)) * f(p / float(x))
    observed = math.fsum(terms.tolist())  # ascending p, compensated
    frac = float(class_fraction(ell, mask))
    return CountReport(
        kind="smoothed",
        x=float(x),
        observed=observed,
        expected=frac * x * f.integral,
        fraction=frac,
        margin=math.sqrt(x) * math.log(x) ** 2,
        extra={"ell": ell, "window": f.kind, "support": [f.c1, f.c2], "integral": f.integral},
    )


def _legendre_column(D: np.ndarray, ell: int) -> np.ndarray:
    """Legendre symbol (D / l) elementwise, l an odd prime."""
    r = D % ell
    sq = square_table(ell)
    out = np.where(sq[r], 1, -1)
    out[r == 0] = 0
    return out


def count_PEa(E, a: int, x: float, ell: int | None = None, inclusive: bool = False) -> CountReport:
    """Primes p <= x of good reduction with a_p = a.

    With ``ell``: only p with (a^2 - 4p / l) = 1, i.e. l split in Q(pi_p)
    (``inclusive`` also admits the value 0).
    """
    if x < 3:
        raise DomainError("need x >= 3")
    table = resolve_table(E, x)
    hit = table.a == a
    extra: dict = {"a": a}
    if ell is None:
        shape = math.sqrt(x) / math.log(x)
        return CountReport("PEa", float(x), float(hit.sum()), shape, 1.0, math.sqrt(max(hit.sum(), 1)), extra=extra)
    leg = _legendre_column(table.D, ell)
    hit &= (leg >= 0) if inclusive else (leg == 1)
    frac = float(class_fraction(ell, in_set_C(a)))
    extra.update(ell=ell, inclusive=inclusive)
    return CountReport("PEa_ell", float(x), float(hit.sum()), frac * li(x), frac, math.sqrt(max(hit.sum(), 1)), extra=extra)


def pea_window_diagnostic(E, a: int, x: float, y: float) -> dict:
    """P_{E,a}(x, l) for primes l in [y, 2y] against P_{E,a}(x)."""
    table = resolve_table(E, x)
    total = int(count_PEa(table, a, x).observed)
    per = {}
    for ell in range(max(5, math.ceil(y)), int(2 * y) + 1):
        if is_prime(ell):
            per[ell] = int(count_PEa(table, a, x, ell=ell).observed)
    mx = max(per.values()) if per else 0
    return {"P": total, "per_ell": per, "max": mx, "ratio": total / mx if mx else math.inf}


def count_PEk(E, d: int, x: float, check_principal: bool = True) -> CountReport:
    """Good p <= x whose Frobenius field has discriminant d; normalised by h_k."""
    if x < 3:
        raise DomainError("need x >= 3")
    field_ = class_number(d)
    table = resolve_table(E, x)
    idx = np.flatnonzero(table.d == d)
    ordinary = table.ordinary[idx]
    extra: dict = {"d": d, "h": field_.h, "supersingular": table.p[idx[~ordinary]].tolist()}
    if check_principal:
        bad = [
            int(p)
            for p in table.p[idx[ordinary]]
            if splitting_type(d, int(p)) != "split" or ideal_class_of_prime(d, int(p)) != "principal"
        ]
        extra["principal_checked"] = int(ordinary.sum())
        extra["principal_failures"] = bad
    shape = math.sqrt(x) / math.log(x)
    return CountReport("PEk", float(x), float(idx.size), shape / field_.h, 1.0 / field_.h, math.sqrt(max(idx.size, 1)), float(field_.h), extra)


def count_DE(E, x: float) -> CountReport:
    """Number of distinct Frobenius fields among good p <= x.

    ``extra['partition_residual']`` is pi(x) - #bad primes - sum_k P_{E,k}(x),
    which must vanish.
    """
    if x < 3:
        raise DomainError("need x >= 3")
    table = resolve_table(E, x)
    fields, counts = np.unique(table.d, return_counts=True)
    n_bad = len(bad_primes(table.curve, int(x)))
    residual = prime_pi(x) - n_bad - int(counts.sum())
    L = math.log(x)
    shape = x ** (2 / 7) / L ** (10 / 7)
    return CountReport(
        "DE",
        float(x),
        float(fields.size),
        shape,
        1.0,
        0.0,
        extra={"partition_residual": residual, "bad_primes": n_bad, "largest_abs_d": int(-fields.min()) if fields.size else 0},
    )


@dataclass
class MixedCheck:
    checked: int = 0
    norm_failures: list = field(default_factory=list)
    trace_failures: list = field(default_factory=list)
    principal_failures: list = field(default_factory=list)
    max_trace_set: int = 0

    @property
    def violations(self) -> int:
        return len(self.norm_failures) + len(self.trace_failures) + len(self.principal_failures)


def mixed_frobenius_check(E, d: int, ell: int, x: float) -> MixedCheck:
    """Check the coupled Frobenius data for every ordinary p <= x with field d.

    For each such p (p != l): a generator pi = (u + v sqrt d)/2 of a prime
    above p must exist (h = 1), have norm p, and a_p mod l must lie in the
    trace set of the coset of pi in (O/lO)^x / O^x.
    """
    K = class_number(d)
    if K.h != 1:
        raise DomainError(f"class number of {d} is {K.h}, need 1")
    q = residue_unit_quotient(d, ell)
    table = resolve_table(E, x)
    res = MixedCheck()
    for i in np.flatnonzero((table.d == d) & table.ordinary):
        p, a = int(table.p[i]), int(table.a[i])
        if p == ell:
            continue
        res.checked += 1
        gen = cornacchia(d, p)
        if gen is None:
            raise InvariantViolation(f"no generator of norm {p} in Q(sqrt {d})")
        u, v = gen
        if (u * u - d * v * v) != 4 * p or p % ell != (u * u - d * v * v) // 4 % ell:
            res.norm_failures.append(p)
        k = q.of_element(u, v)
        nrm, traces = q.norm(k), q.traces(k)
        res.max_trace_set = max(res.max_trace_set, len(traces))
        if nrm != p % ell:
            res.norm_failures.append(p)
        if a % ell not in traces:
            res.trace_failures.append(p)
        if ideal_class_of_prime(d, p) != "principal":
            res.principal_failures.append(p)
    return res


def bound_profile(x: float, h_k: int | None = None, mode: str = "a-generic") -> tuple[float, float]:
    """The auxiliary parameter y and the bound shape, all constants set to 1."""
    if x < 16:
        raise DomainError("need x >= 16")
    L = math.log(x)
    if mode == "a-generic":
        return x ** 0.2 / L**0.4, x**0.8 / L**0.6
    if mode == "a-zero":
        return x**0.25 / L**0.5, x**0.75 / L**0.5
    if mode == "k-field":
        if h_k is None or h_k < 1:
            raise DomainError("k-field mode needs a class number")
        if h_k <= math.sqrt(x) / L**6:
            y = h_k ** -0.4 * x**0.2 / L**0.4
        else:
            y = L**2
        return y, h_k ** -0.6 * x**0.8 / L**0.6 + math.sqrt(x) * L**3
    raise DomainError(f"unknown mode {mode!r}")


@dataclass
class FitResult:
    constant: float
    exponent: float
    power_constant: float
    rms_residual: float


def asymptote_fit(counts: Sequence[tuple[float, float]]) -> FitResult:
    """Fit P(x) ~ C x^(1/2)/log x, and separately P(x) ~ c x^alpha."""
    pts = [(float(x), float(P)) for x, P in counts]
    if len(pts) < 3:
        raise FitUnavailable("need at least 3 points")
    if any(P <= 0 for _, P in pts):
        raise FitUnavailable("zero counts cannot be fitted on a log scale")
    xs = np.array([x for x, _ in pts])
    Ps = np.array([P for _, P in pts])
    if np.any(np.diff(xs) <= 0):
        raise FitUnavailable("x values must increase")
    base = 0.5 * np.log(xs) - np.log(np.log(xs))
    logC = float(np.mean(np.log(Ps) - base))
    resid = np.log(Ps) - base - logC
    alpha, beta = np.polyfit(np.log(xs), np.log(Ps), 1)
    return FitResult(math.exp(logC), float(alpha), math.exp(beta), float(np.sqrt(np.mean(resid**2))))


def charpoly_frequencies(E, ell: int, x: float) -> tuple[np.ndarray, np.ndarray, int]:
    """Observed counts and enumerated densities per (trace, det) class mod l.

    Returns ``(counts, densities, n)`` as l x l arrays and the number of
    primes used (good p <= x, p != l).
    """
    table = resolve_table(E, x)
    keep = _unramified(table, ell)
    counts = np.zeros((ell, ell), dtype=np.int64)
    np.add.at(counts, (table.a[keep] % ell, table.p[keep] % ell), 1)
    sizes = charpoly_class_sizes(ell)
    return counts, sizes / sizes.sum(), int(keep.sum())


def surjectivity_witness(E, ell: int, x: float) -> bool:
    """True iff every char-poly class of GL_2(F_l) occurs among Frob_p, p <= x."""
    counts, dens, _ = charpoly_frequencies(E, ell, x)
    return bool(((counts > 0) | (dens == 0)).all())


def conductor_proxy_M(E: EllipticCurve, ell: int) -> float:
    """M(L/Q) for L = Q(E[l]) with unit constants: 2 |G| times the ramified primes.

    Ramified primes are taken as the primes dividing disc(E) and l.
    """
    primes = set(bad_primes(E, abs(E.disc))) | {ell}
    return 2.0 * gl2_order(ell) * math.prod(primes)


def existence_threshold(group_order: int, class_size: int, log_M: float, degree: int = 1) -> float:
    """x beyond which a prime with Frobenius in C lies in [x/2, x] (constant 1)."""
    if class_size <= 0:
        raise DomainError("class must be nonempty")
    return group_order**2 / class_size * degree**2 * log_M**2
