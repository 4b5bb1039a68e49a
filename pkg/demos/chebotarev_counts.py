"""
Frobenius classes mod l
-----------------------

The pair (a_p mod l, p mod l) is the characteristic polynomial of Frobenius
acting on the l-torsion.  Its frequencies approach the share of GL_2(F_l)
with that characteristic polynomial.
"""

# %%
import numpy as np

from langtrotter import EllipticCurve, ap_table
from langtrotter.chebotarev import (
    always,
    charpoly_frequencies,
    class_fraction,
    det_is,
    in_set_C,
    make_window,
    pi_C,
    pi_tilde_C,
    smoothed_count,
    surjectivity_witness,
)

E = EllipticCurve(1, 1)
T = ap_table(E, 10**5)
ell = 5

# %%
# Densities come from counting matrices, not from a formula.
counts, dens, n = charpoly_frequencies(T, ell, 10**5)
print("every class seen by 1e4:", surjectivity_witness(T, ell, 10**4))
print("worst deviation:", np.abs(counts / n - dens).max())
print("trace 0, det 1: observed", counts[0, 1] / n, "expected", dens[0, 1])

# %%
# Counts for a few predicates against |C|/|G| li(x).
for name, pred in [("all", always), ("det = 2", det_is(2)), ("trace 1, square disc", in_set_C(1))]:
    r = pi_C(T, ell, 10**5, pred)
    print(f"{name:22s} fraction {class_fraction(ell, pred)!s:8s} observed {r.observed:7.0f} expected {r.expected:9.1f}")

# %%
# Prime powers, weighted 1/m, add only a little.
for x in (10**3, 10**4, 10**5):
    print(x, pi_tilde_C(T, ell, x).observed - pi_C(T, ell, x).observed)

# %%
# Smoothed sums of log p f(p/x) track x * integral(f) closely.
f = make_window("bump", 0.5, 1.0)
r = smoothed_count(T, ell, always, f, 10**5)
print("smoothed ratio:", r.observed / r.expected)
