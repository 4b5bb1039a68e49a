"""Class functions on finite groups given by multiplication tables.

Values are exact (``fractions.Fraction`` or ``int``); any number type with
``conjugate()`` works, complex included.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from ._errors import ContractError
from . import groups as _groups

__all__ = [
    "FiniteGroupTable",
    "ClassFunction",
    "conjugacy_classes",
    "induce",
    "inner_product",
    "lift_from_quotient",
    "quotient_group",
    "frobenius_value",
    "indicator",
    "cyclic_group",
    "symmetric_group",
    "dihedral_group",
    "matrix_group_table",
    "subgroup_indices",
    "read_group_table",
    "write_group_table",
]


@dataclass(eq=False)
class FiniteGroupTable:
    mul: np.ndarray
    name: str = "G"
    labels: list | None = field(default=None, repr=False)

    def __post_init__(self):
        self.mul = np.asarray(self.mul, dtype=np.int64)
        n = self.n
        if self.mul.shape != (n, n) or n == 0:
            raise ContractError("multiplication table must be square and nonempty")
        if self.mul.min() < 0 or self.mul.max() >= n:
            raise ContractError("table entries out of range")
        ids = [e for e in range(n) if (self.mul[e] == np.arange(n)).all() and (self.mul[:, e] == np.arange(n)).all()]
        if len(ids) != 1:
            raise ContractError("no unique identity")
        self.id = ids[0]
        inv = np.argmax(self.mul == self.id, axis=1)
        if not (self.mul[np.arange(n), inv] == self.id).all() or not (self.mul[inv, np.arange(n)] == self.id).all():
            raise ContractError("some element has no two-sided inverse")
        self.inv = inv
        for row in self.mul:
            if np.unique(row).size != n:
                raise ContractError("table is not a Latin square")

    @property
    def n(self) -> int:
        return self.mul.shape[0]

    def __len__(self) -> int:
        return self.n

    def check_associative(self, samples: int | None = None, seed: int = 0) -> bool:
        """Exhaustive for n <= 200, else ``samples`` random triples."""
        m = self.mul
        if samples is None and self.n <= 200:
            lhs = m[m[:, :, None], np.arange(self.n)[None, None, :]]
            rhs = m[np.arange(self.n)[:, None, None], m[None, :, :]]
            return bool((lhs == rhs).all())
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(self.n, size=(3, samples or 10000))
        return bool((m[m[a, b], c] == m[a, m[b, c]]).all())

    @cached_property
    def conj(self) -> np.ndarray:
        """conj[t, g] = t^-1 g t."""
        m = self.mul
        return m[m[self.inv[:, None], np.arange(self.n)[None, :]], np.arange(self.n)[:, None]]

    @cached_property
    def classes(self) -> list[list[int]]:
        return conjugacy_classes(self)

    @cached_property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        for k, cls in enumerate(self.classes):
            out[cls] = k
        return out

    def centralizer_order(self, g: int) -> int:
        return int((self.conj[:, g] == g).sum())


def conjugacy_classes(G: FiniteGroupTable) -> list[list[int]]:
    """Orbits under conjugation, ordered by smallest element."""
    seen = np.zeros(G.n, dtype=bool)
    out = []
    for g in range(G.n):
        if seen[g]:
            continue
        orbit = sorted(set(G.conj[:, g].tolist()))
        seen[orbit] = True
        out.append(orbit)
    for cls in out:
        if G.n % len(cls):
            raise ContractError("class size does not divide |G|")
    return out


@dataclass(eq=False)
class ClassFunction:
    group: FiniteGroupTable
    values: list

    def __post_init__(self):
        if len(self.values) != self.group.n:
            raise ContractError("one value per group element required")
        for cls in self.group.classes:
            v = self.values[cls[0]]
            if any(self.values[g] != v for g in cls):
                raise ContractError("values are not constant on conjugacy classes")

    @classmethod
    def from_classes(cls, G: FiniteGroupTable, class_values: Sequence) -> "ClassFunction":
        return cls(G, [class_values[k] for k in G.class_of])

    @classmethod
    def constant(cls, G: FiniteGroupTable, c=1) -> "ClassFunction":
        return cls(G, [c] * G.n)

    def __call__(self, g: int):
        return self.values[g]

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        _same(self.group, other.group)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def scale(self, c) -> "ClassFunction":
        return ClassFunction(self.group, [c * v for v in self.values])

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassFunction) and other.group is self.group and self.values == other.values

    def support(self) -> set[int]:
        return {g for g, v in enumerate(self.values) if v != 0}


def indicator(G: FiniteGroupTable, elements) -> ClassFunction:
    S = set(int(g) for g in elements)
    return ClassFunction(G, [1 if g in S else 0 for g in range(G.n)])


def _same(G: FiniteGroupTable, H: FiniteGroupTable) -> None:
    if G is not H:
        raise ContractError("class functions live on different groups")


def inner_product(phi: ClassFunction, psi: ClassFunction):
    """<phi, psi> = (1/|G|) sum phi(g) conj(psi(g))."""
    _same(phi.group, psi.group)
    total = sum(a * b.conjugate() for a, b in zip(phi.values, psi.values))
    return Fraction(total, phi.group.n) if isinstance(total, int) else total / phi.group.n


def subgroup_indices(G: FiniteGroupTable, H: Sequence[int]) -> np.ndarray:
    H = np.unique(np.asarray(H, dtype=np.int64))
    if G.id not in H:
        raise ContractError("subset does not contain the identity")
    closed = np.isin(G.mul[np.ix_(H, H)], H).all()
    if not closed:
        raise ContractError("subset is not closed under multiplication")
    return H


def _restrict_table(G: FiniteGroupTable, H: np.ndarray, name: str) -> FiniteGroupTable:
    pos = -np.ones(G.n, dtype=np.int64)
    pos[H] = np.arange(len(H))
    return FiniteGroupTable(pos[G.mul[np.ix_(H, H)]], name=name, labels=H.tolist())


def _induction_counts(G: FiniteGroupTable, H: np.ndarray, Ht: FiniteGroupTable) -> np.ndarray:
    """counts[k, c] = #{t in G : t^-1 g t in H-class c} for g the first element of G-class k."""
    cache = G.__dict__.setdefault("_induction_cache", {})
    key = H.tobytes()
    if key not in cache:
        pos = -np.ones(G.n, dtype=np.int64)
        pos[H] = np.arange(len(H))
        counts = np.zeros((len(G.classes), len(Ht.classes)), dtype=np.int64)
        for k, cls in enumerate(G.classes):
            local = pos[G.conj[:, cls[0]]]
            local = local[local >= 0]
            counts[k] = np.bincount(Ht.class_of[local], minlength=len(Ht.classes))
        cache[key] = counts
    return cache[key]


def induce(G: FiniteGroupTable, H: Sequence[int], phi: ClassFunction) -> ClassFunction:
    """Ind_H^G phi(g) = (1/|H|) sum over t in G with t^-1 g t in H of phi(t^-1 g t).

    ``H`` lists element indices of G, and ``phi`` is defined on the
    restricted table whose element i is ``sorted(H)[i]`` (see :func:`restrict`).
    The conjugation counts per (G-class, H-class) are cached on G.
    """
    H = subgroup_indices(G, H)
    Ht = phi.group
    if Ht.n != len(H):
        raise ContractError("phi is not a class function on H")
    counts = _induction_counts(G, H, Ht)
    h_vals = [phi.values[cls[0]] for cls in Ht.classes]
    class_vals = []
    for row in counts:
        total = sum((int(c) * v for c, v in zip(row, h_vals) if c), 0)
        class_vals.append(Fraction(total, len(H)) if isinstance(total, int) else total / len(H))
    return ClassFunction.from_classes(G, class_vals)


def restrict(G: FiniteGroupTable, H: Sequence[int], name: str = "H") -> FiniteGroupTable:
    """The subgroup H of G as its own table (element i = sorted(H)[i])."""
    return _restrict_table(G, subgroup_indices(G, H), name)


__all__.append("restrict")


def quotient_group(G: FiniteGroupTable, N: Sequence[int]) -> tuple[FiniteGroupTable, np.ndarray]:
    """G/N as a table plus the projection array G -> G/N."""
    N = subgroup_indices(G, N)
    Nset = set(N.tolist())
    for g in range(G.n):
        if any(int(G.conj[g, x]) not in Nset for x in N):
            raise ContractError("subgroup is not normal")
    coset_key = G.mul[:, N].min(axis=1)  # gN as its smallest element
    keys, proj = np.unique(coset_key, return_inverse=True)
    reps = [int(np.flatnonzero(proj == k)[0]) for k in range(len(keys))]
    k = len(keys)
    table = np.array([[proj[G.mul[reps[i], reps[j]]] for j in range(k)] for i in range(k)])
    return FiniteGroupTable(table, name=f"{G.name}/N"), proj


def lift_from_quotient(G: FiniteGroupTable, N: Sequence[int], phi_q: ClassFunction) -> ClassFunction:
    """Compose the projection G -> G/N with a class function on G/N."""
    Q, proj = quotient_group(G, N)
    if phi_q.group.n != Q.n:
        raise ContractError("phi' is not defined on G/N")
    return ClassFunction(G, [phi_q.values[proj[g]] for g in range(G.n)])


def frobenius_value(
    G: FiniteGroupTable,
    phi: ClassFunction,
    decomposition: Sequence[int],
    inertia: Sequence[int],
    frob: int,
    m: int = 1,
):
    """phi(Frob^m) averaged over inertia.

    (1/|I|) sum of phi(g) over g in D with g I = frob^m I.  For trivial
    inertia this is phi(frob^m).
    """
    D = subgroup_indices(G, decomposition)
    I = subgroup_indices(G, inertia)
    if not np.isin(I, D).all():
        raise ContractError("inertia must lie in the decomposition group")
    power = G.id
    for _ in range(m):
        power = int(G.mul[power, frob])
    target = set(G.mul[power, I].tolist())
    total = sum((phi.values[g] for g in D.tolist() if g in target), 0)
    return Fraction(total, len(I)) if isinstance(total, int) else total / len(I)


def cyclic_group(n: int) -> FiniteGroupTable:
    i = np.arange(n)
    return FiniteGroupTable((i[:, None] + i[None, :]) % n, name=f"C{n}")


def _perm_table(perms: list[tuple[int, ...]], name: str) -> FiniteGroupTable:
    index = {p: k for k, p in enumerate(perms)}
    # (p q)(i) = p(q(i))
    table = [[index[tuple(p[q[i]] for i in range(len(q)))] for q in perms] for p in perms]
    return FiniteGroupTable(np.array(table), name=name, labels=perms)


def symmetric_group(n: int) -> FiniteGroupTable:
    return _perm_table(sorted(itertools.permutations(range(n))), f"S{n}")


def dihedral_group(n: int) -> FiniteGroupTable:
    """Symmetries of the n-gon as permutations of its vertices."""
    rots = [tuple((i + k) % n for i in range(n)) for k in range(n)]
    refl = [tuple((k - i) % n for i in range(n)) for k in range(n)]
    return _perm_table(sorted(rots + refl), f"D{n}")


def matrix_group_table(mats: np.ndarray, ell: int, name: str = "G") -> FiniteGroupTable:
    """Multiplication table of a finite matrix group over F_l."""
    codes = _groups.encode(mats, ell)
    order = np.argsort(codes)
    mats = np.asarray(mats)[order]
    codes = codes[order]
    prod = _groups.encode(_groups.mat_mul(mats[:, None, :], mats[None, :, :], ell), ell)
    idx = np.searchsorted(codes, prod)
    if (idx >= len(codes)).any() or not (codes[np.minimum(idx, len(codes) - 1)] == prod).all():
        raise ContractError("matrices are not closed under multiplication")
    return FiniteGroupTable(idx.reshape(len(codes), len(codes)), name=name, labels=mats.tolist())


def write_group_table(G: FiniteGroupTable, path) -> None:
    """Format: first line n, then n rows of n space-separated indices."""
    lines = [str(G.n)] + [" ".join(str(int(v)) for v in row) for row in G.mul]
    Path(path).write_text("\n".join(lines) + "\n")


def read_group_table(path, name: str = "G") -> FiniteGroupTable:
    tokens = Path(path).read_text().split()
    if not tokens:
        raise ContractError("empty group table file")
    n = int(tokens[0])
    if len(tokens) != 1 + n * n:
        raise ContractError(f"expected {n * n} entries, found {len(tokens) - 1}")
    return FiniteGroupTable(np.array(tokens[1:], dtype=np.int64).reshape(n, n), name=name)
