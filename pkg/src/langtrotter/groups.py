"""Exhaustive computations in GL_2(F_l) and the mixed group.

Matrices are rows ``(a, b, c, d)`` of an int64 array, meaning [[a, b], [c, d]],
and are packed to integer codes ``((a l + b) l + c) l + d`` for set
operations.  Mixed elements (A, u) pack as ``code(A) * K + u`` where K is the
number of cosets in the residue-unit quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._errors import ContractError, DomainError
from .arith import is_prime
from .quadfield import ResidueUnitQuotient, residue_unit_quotient

__all__ = [
    "encode",
    "decode",
    "mat_mul",
    "mat_inv",
    "det",
    "trace",
    "square_table",
    "gl2_elements",
    "gl2_order",
    "charpoly_class_sizes",
    "BorelData",
    "subgroup_BUH",
    "set_C_a",
    "quotient_image_count",
    "is_normal",
    "MixedGroup",
    "mixed_group",
    "CcalData",
    "set_Ccal",
    "conjugation_stable",
]


def encode(X: np.ndarray, ell: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.int64).reshape(-1, 4)
    return ((X[:, 0] * ell + X[:, 1]) * ell + X[:, 2]) * ell + X[:, 3]


def decode(codes: np.ndarray, ell: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((codes.size, 4), dtype=np.int64)
    c = codes.copy()
    for j in (3, 2, 1, 0):
        out[:, j] = c % ell
        c //= ell
    return out


def mat_mul(X: np.ndarray, Y: np.ndarray, ell: int) -> np.ndarray:
    """Row-wise (broadcasting) product of matrix arrays."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    a, b, c, d = (X[..., i] for i in range(4))
    e, f, g, h = (Y[..., i] for i in range(4))
    return np.stack(
        [(a * e + b * g) % ell, (a * f + b * h) % ell, (c * e + d * g) % ell, (c * f + d * h) % ell],
        axis=-1,
    )


def det(X: np.ndarray, ell: int) -> np.ndarray:
    X = np.asarray(X)
    return (X[..., 0] * X[..., 3] - X[..., 1] * X[..., 2]) % ell


def trace(X: np.ndarray, ell: int) -> np.ndarray:
    X = np.asarray(X)
    return (X[..., 0] + X[..., 3]) % ell


def mat_inv(X: np.ndarray, ell: int) -> np.ndarray:
    X = np.asarray(X)
    dinv = np.array([pow(int(v), -1, ell) for v in range(1, ell)], dtype=np.int64)
    k = dinv[det(X, ell) - 1]
    return np.stack(
        [X[..., 3] * k % ell, -X[..., 1] * k % ell, -X[..., 2] * k % ell, X[..., 0] * k % ell],
        axis=-1,
    )


def square_table(ell: int) -> np.ndarray:
    """Boolean table of squares in F_l, counting 0 as a square."""
    sq = np.zeros(ell, dtype=bool)
    sq[(np.arange(ell) ** 2) % ell] = True
    return sq


def _check_prime(ell: int) -> None:
    if not is_prime(ell):
        raise DomainError(f"{ell} is not prime")


@lru_cache(maxsize=16)
def gl2_elements(ell: int) -> np.ndarray:
    """All invertible 2x2 matrices over F_l, sorted by code."""
    _check_prime(ell)
    grid = np.indices((ell,) * 4).reshape(4, -1).T.astype(np.int64)
    return grid[det(grid, ell) != 0]


@lru_cache(maxsize=None)
def charpoly_class_sizes(ell: int) -> np.ndarray:
    """``sizes[t, n]`` = number of matrices in GL_2(F_l) with trace t, det n.

    Counted by enumeration, one slice of the top-left entry at a time.
    """
    _check_prime(ell)
    sizes = np.zeros((ell, ell), dtype=np.int64)
    b, c, d = np.indices((ell,) * 3).reshape(3, -1).astype(np.int64)
    for a in range(ell):
        n = (a * d - b * c) % ell
        t = (a + d) % ell
        keep = n != 0
        np.add.at(sizes, (t[keep], n[keep]), 1)
    return sizes


def gl2_order(ell: int) -> int:
    """|GL_2(F_l)| by enumeration."""
    return int(charpoly_class_sizes(ell).sum())


def is_normal(N_codes: np.ndarray, G: np.ndarray, ell: int) -> bool:
    """True iff g N g^-1 = N for every g in the matrix array G."""
    N = decode(N_codes, ell)
    conj = mat_mul(mat_mul(G[:, None, :], N[None, :, :], ell), mat_inv(G, ell)[:, None, :], ell)
    return bool(np.isin(encode(conj, ell), N_codes).all())


def conjugation_stable(S: np.ndarray, G: np.ndarray, ell: int, samples: int = 1000, seed: int = 0) -> bool:
    """Check g s g^-1 in S for ``samples`` random (g, s) pairs."""
    rng = np.random.default_rng(seed)
    S_codes = np.unique(encode(S, ell))
    g = G[rng.integers(len(G), size=samples)]
    s = S[rng.integers(len(S), size=samples)]
    conj = mat_mul(mat_mul(g, s, ell), mat_inv(g, ell), ell)
    return bool(np.isin(encode(conj, ell), S_codes).all())


@dataclass
class BorelData:
    ell: int
    B: np.ndarray
    U: np.ndarray
    H: np.ndarray

    @property
    def index_BU(self) -> int:
        return len(self.B) // len(self.U)

    @property
    def index_BH(self) -> int:
        return len(self.B) // len(self.H)


@lru_cache(maxsize=16)
def subgroup_BUH(ell: int) -> BorelData:
    """Upper triangular B, unipotent U and H = scalars * U, all checked."""
    if ell < 3:
        raise DomainError("need l >= 3")
    G = gl2_elements(ell)
    upper = G[G[:, 2] == 0]
    U = upper[(upper[:, 0] == 1) & (upper[:, 3] == 1)]
    H = upper[upper[:, 0] == upper[:, 3]]
    order = gl2_order(ell)
    for name, S in (("B", upper), ("U", U), ("H", H)):
        if order % len(S):
            raise ContractError(f"|{name}| does not divide |G|")
    if len(upper) % len(U) or len(upper) % len(H):
        raise ContractError("Lagrange fails inside B")
    if not is_normal(encode(U, ell), upper, ell) or not is_normal(encode(H, ell), upper, ell):
        raise ContractError("U or H not normal in B")
    return BorelData(ell, upper, U, H)


def set_C_a(ell: int, a: int) -> np.ndarray:
    """Matrices with trace a and square discriminant tr^2 - 4 det (0 allowed)."""
    G = gl2_elements(ell)
    t = trace(G, ell)
    disc = (t * t - 4 * det(G, ell)) % ell
    return G[(t == a % ell) & square_table(ell)[disc]]


def quotient_image_count(S: np.ndarray, N: np.ndarray, ell: int) -> int:
    """Size of the image of S in B/N; requires N S = S.

    The image is also enumerated directly (canonical coset representatives)
    and must agree with |S| / |N|.
    """
    S_codes = np.unique(encode(S, ell))
    prods = encode(mat_mul(N[None, :, :], S[:, None, :], ell), ell).reshape(len(S), len(N))
    if not np.isin(prods, S_codes).all():
        raise ContractError("set is not stable under the subgroup")
    if len(S) % len(N):
        raise ContractError("|S| is not a multiple of |N|")
    image = np.unique(prods.min(axis=1)).size
    if image * len(N) != len(S):
        raise ContractError("coset enumeration disagrees with |S|/|N|")
    return image


@dataclass
class MixedGroup:
    """Pairs (A, u) with det A = N(u); A in GL_2(F_l), u a residue-unit coset."""

    d: int
    ell: int
    quotient: ResidueUnitQuotient
    mats: np.ndarray
    cosets: np.ndarray
    coset_mul: np.ndarray

    def __len__(self) -> int:
        return len(self.cosets)

    @property
    def K(self) -> int:
        return len(self.quotient)

    def codes(self, idx=None) -> np.ndarray:
        mats = self.mats if idx is None else self.mats[idx]
        cos = self.cosets if idx is None else self.cosets[idx]
        return encode(mats, self.ell) * self.K + cos

    def mul(self, A1, u1, A2, u2):
        return mat_mul(A1, A2, self.ell), self.coset_mul[u1, u2]

    def inv(self, A, u):
        inv_coset = np.argmax(self.coset_mul == 0, axis=1)  # coset 0 holds (1, 1)
        return mat_inv(A, self.ell), inv_coset[u]


@lru_cache(maxsize=8)
def mixed_group(ell: int, d: int) -> MixedGroup:
    q = residue_unit_quotient(d, ell)
    if q.members[0][0] != (1, 1):
        raise ContractError("identity coset must be index 0")
    K = len(q)
    coset_mul = np.array([[q.mul(i, j) for j in range(K)] for i in range(K)], dtype=np.int64)
    G = gl2_elements(ell)
    dets = det(G, ell)
    by_det = {n: G[dets == n] for n in range(1, ell)}
    mats, cosets = [], []
    for k in range(K):
        block = by_det[q.norm(k)]
        mats.append(block)
        cosets.append(np.full(len(block), k, dtype=np.int64))
    return MixedGroup(d, ell, q, np.concatenate(mats), np.concatenate(cosets), coset_mul)


@dataclass
class CcalData:
    """The sets of the field-twisted count: C (mask on the mixed group), the
    Borel part, the scalar-unipotent subgroup and the quotient image size."""

    group: MixedGroup
    C_mask: np.ndarray
    B_mask: np.ndarray
    U_idx: np.ndarray
    C_prime: int

    @property
    def C_and_B(self) -> int:
        return int((self.C_mask & self.B_mask).sum())

    @property
    def size_B(self) -> int:
        return int(self.B_mask.sum())

    @property
    def size_U(self) -> int:
        return len(self.U_idx)


def _trace_sets(q: ResidueUnitQuotient) -> np.ndarray:
    tr = np.zeros((len(q), q.ell), dtype=bool)
    for k in range(len(q)):
        tr[k, list(q.traces(k))] = True
    return tr


def set_Ccal(ell: int, d: int) -> CcalData:
    """Enumerate C, B, U in the mixed group and verify the stability facts.

    Checks U inside B, U normal in B, U (C & B) = C & B, and that the
    enumerated image of C & B in B/U has |C & B| / |U| elements.
    """
    G = mixed_group(ell, d)
    q = G.quotient
    A, u = G.mats, G.cosets
    t = trace(A, ell)
    disc = (t * t - 4 * det(A, ell)) % ell
    C_mask = _trace_sets(q)[u, t] & square_table(ell)[disc]
    B_mask = A[:, 2] == 0
    scal_unip = B_mask & (A[:, 0] == A[:, 3])
    scalar_coset = np.array([q.of_scalar(int(x)) for x in range(ell)])
    U_mask = scal_unip & (u == scalar_coset[A[:, 0]])
    U_idx = np.flatnonzero(U_mask)
    codes = G.codes()
    order = np.argsort(codes)
    sorted_codes = codes[order]

    def member(mats, cos, mask):
        c = encode(mats, ell) * G.K + cos
        pos = np.clip(np.searchsorted(sorted_codes, c), 0, len(sorted_codes) - 1)
        hit = sorted_codes[pos] == c
        return hit & mask[order[pos]]

    B_idx = np.flatnonzero(B_mask)
    if len(B_idx) % len(U_idx) or len(G) % len(B_idx):
        raise ContractError("Lagrange fails for the mixed subgroups")
    # U normal in B
    Ab, ub = A[B_idx], u[B_idx]
    Ai, ui = G.inv(Ab, ub)
    X, xu = G.mul(Ab[:, None, :], ub[:, None], A[U_idx][None, :, :], u[U_idx][None, :])
    X, xu = G.mul(X, xu, Ai[:, None, :], ui[:, None])
    if not member(X.reshape(-1, 4), xu.reshape(-1), U_mask).all():
        raise ContractError("U is not normal in B")
    # U (C & B) = C & B, and the image in B/U
    CB_idx = np.flatnonzero(C_mask & B_mask)
    Y, yu = G.mul(A[U_idx][None, :, :], u[U_idx][None, :], A[CB_idx][:, None, :], u[CB_idx][:, None])
    inside = member(Y.reshape(-1, 4), yu.reshape(-1), C_mask & B_mask)
    if not inside.all():
        raise ContractError("C & B is not stable under U")
    ycodes = (encode(Y.reshape(-1, 4), ell) * G.K + yu.reshape(-1)).reshape(len(CB_idx), len(U_idx))
    image = np.unique(ycodes.min(axis=1)).size
    if image * len(U_idx) != len(CB_idx):
        raise ContractError("image of C & B in B/U has the wrong size")
    return CcalData(G, C_mask, B_mask, U_idx, image)
