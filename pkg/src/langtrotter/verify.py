"""Exact verification suites, shared by the ``verify`` command and the tests.

Each suite returns a :class:`SuiteResult`; ``ok`` is True only if every check
in the suite holds exactly.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import is_fundamental_discriminant, kronecker_symbol
from .chebotarev import mixed_frobenius_check, resolve_table
from .classfn import (
    ClassFunction,
    FiniteGroupTable,
    indicator,
    induce,
    inner_product,
    matrix_group_table,
    restrict,
    symmetric_group,
)
from .elliptic import EllipticCurve
from .groups import (
    gl2_elements,
    gl2_order,
    quotient_image_count,
    set_C_a,
    set_Ccal,
    subgroup_BUH,
)
from .quadfield import ray_class_count_bruteforce, ray_class_order, unit_count

__all__ = ["SuiteResult", "SUITES", "run_suite", "borel_cardinalities", "mixed_cardinalities",
           "induction_identities", "ray_class_orders", "mixed_frobenius"]

FAULT_ENV = "LT_VERIFY_INJECT_FAULT"


@dataclass
class SuiteResult:
    name: str
    ok: bool = True
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    def check(self, cond: bool, what: str) -> None:
        self.checks += 1
        if not cond:
            self.ok = False
            self.failures.append(what)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = "" if self.ok else "  first failure: " + self.failures[0]
        return f"{status} {self.name} ({self.checks} checks){tail}"


def borel_cardinalities(ells=(5, 7, 11, 13)) -> SuiteResult:
    res = SuiteResult("borel-cardinalities")
    for ell in ells:
        bd = subgroup_BUH(ell)
        res.check(gl2_order(ell) == (ell - 1) ** 2 * (ell + 1) * ell, f"|G| l={ell}")
        res.check(len(gl2_elements(ell)) == gl2_order(ell), f"|G| two ways l={ell}")
        res.check(len(bd.B) == (ell - 1) ** 2 * ell, f"|B| l={ell}")
        res.check(len(bd.U) == ell, f"|U| l={ell}")
        res.check(len(bd.H) == (ell - 1) * ell, f"|H| l={ell}")
        res.check(bd.index_BU == (ell - 1) ** 2, f"|B/U| l={ell}")
        res.check(bd.index_BH == ell - 1, f"|B/H| l={ell}")
        for a in range(ell):
            C = set_C_a(ell, a)
            CB = C[C[:, 2] == 0]
            n_u = quotient_image_count(CB, bd.U, ell)
            res.check(n_u == (ell - 1 if a == 0 else ell - 2), f"|C'| l={ell} a={a}: {n_u}")
            if a == 0:
                res.check(quotient_image_count(CB, bd.H, ell) == 1, f"|C''| l={ell}")
    return res


def mixed_cardinalities(pairs=((-4, 5), (-4, 13), (-7, 11))) -> SuiteResult:
    res = SuiteResult("mixed-cardinalities")
    for d, ell in pairs:
        w = unit_count(d)
        data = set_Ccal(ell, d)  # raises on normality or stability failure
        res.check(len(data.group) == (ell - 1) ** 2 // w * ell * (ell - 1) * (ell + 1), f"|G| d={d} l={ell}")
        res.check(data.C_and_B <= 2 * (ell - 1) ** 2 * ell, f"|C&B| bound d={d} l={ell}")
        res.check(data.C_prime * data.size_U == data.C_and_B, f"|C'| = |C&B|/|U| d={d} l={ell}")
        res.check(data.size_U == ell * (ell - 1), f"|U| d={d} l={ell}")
    return res


def _borel_table(ell: int) -> tuple[FiniteGroupTable, list[int]]:
    G = matrix_group_table(gl2_elements(ell), ell, name=f"GL2(F{ell})")
    B = [i for i, m in enumerate(G.labels) if m[2] == 0]
    return G, B


def induction_pairs(ells=(3, 5)) -> list[tuple[FiniteGroupTable, list[int]]]:
    S3 = symmetric_group(3)
    # C3 inside S3: the even permutations
    C3 = [i for i, p in enumerate(S3.labels) if sum(p[j] > p[k] for j in range(3) for k in range(j + 1, 3)) % 2 == 0]
    return [(S3, C3)] + [_borel_table(ell) for ell in ells]


def induction_identities(pairs=None, samples: int = 100, seed: int = 0) -> SuiteResult:
    """Reciprocity <Ind phi, 1> = <phi, 1>, linearity, and the class-indicator scaling."""
    res = SuiteResult("induction")
    rng = random.Random(seed)
    for G, H in pairs or induction_pairs():
        Ht = restrict(G, H)
        one_G = ClassFunction.constant(G)
        one_H = ClassFunction.constant(Ht)
        k = len(Ht.classes)
        prev = None
        for _ in range(samples):
            phi = ClassFunction.from_classes(Ht, [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(k)])
            ind = induce(G, H, phi)
            res.check(inner_product(ind, one_G) == inner_product(phi, one_H), f"reciprocity on {G.name}")
            if prev is not None:
                lhs = induce(G, H, phi.scale(3) + prev.scale(-2))
                res.check(lhs == ind.scale(3) + induce(G, H, prev).scale(-2), f"linearity on {G.name}")
            prev = phi
        Hsorted = sorted(H)
        for cls in Ht.classes:
            s = Hsorted[cls[0]]
            cG = G.classes[G.class_of[s]]
            lam = Fraction(G.centralizer_order(s), Ht.centralizer_order(cls[0]))
            got = induce(G, H, indicator(Ht, cls))
            res.check(lam >= 1 and got == indicator(G, cG).scale(lam), f"class scaling on {G.name} at {s}")
    return res


def ray_class_orders(dmin: int = -24, ms=range(5, 11)) -> SuiteResult:
    res = SuiteResult("ray-class-orders")
    for d in range(dmin, 0):
        if not is_fundamental_discriminant(d):
            continue
        for m in ms:
            f, b = ray_class_order(d, m), ray_class_count_bruteforce(d, m)
            res.check(f == b, f"d={d} m={m}: formula {f} vs enumeration {b}")
    return res


def mixed_frobenius(curve=(1, 1), d: int = -4, ell: int = 13, x: int = 10**5) -> SuiteResult:
    res = SuiteResult("mixed-frobenius")
    table = resolve_table(EllipticCurve(*curve), x)
    out = mixed_frobenius_check(table, d, ell, x)
    res.check(out.checked > 0, "no matching ordinary primes")
    res.check(not out.norm_failures, f"norm congruence fails at {out.norm_failures[:5]}")
    res.check(not out.trace_failures, f"trace membership fails at {out.trace_failures[:5]}")
    res.check(not out.principal_failures, f"principality fails at {out.principal_failures[:5]}")
    res.check(out.max_trace_set <= unit_count(d), "trace set larger than the unit group")
    res.checks += out.checked
    return res


def _split_field_for(ell: int) -> int:
    for d in (-4, -7, -8, -11, -3, -19, -43, -67, -163):
        if kronecker_symbol(d, ell) == 1:
            return d
    raise ValueError(f"no class-number-one field in which {ell} splits")


def run_suite(name: str, ell: int | None = None) -> SuiteResult:
    if name == "borel-cardinalities":
        res = borel_cardinalities((ell,) if ell else (5, 7, 11, 13))
    elif name == "mixed-cardinalities":
        res = mixed_cardinalities(((_split_field_for(ell), ell),) if ell else ((-4, 5), (-4, 13), (-7, 11)))
    elif name == "induction":
        res = induction_identities(induction_pairs((ell,) if ell in (3, 5) else (3, 5)))
    elif name == "ray-class-orders":
        res = ray_class_orders()
    elif name == "mixed-frobenius":
        res = mixed_frobenius(d=_split_field_for(ell), ell=ell) if ell else mixed_frobenius()
    else:
        raise KeyError(name)
    if os.environ.get(FAULT_ENV) in (name, "all"):
        res.check(False, "injected fault")
    return res


SUITES = ("induction", "ray-class-orders", "mixed-frobenius", "borel-cardinalities", "mixed-cardinalities")
