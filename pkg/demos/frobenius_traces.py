"""
Traces of Frobenius
-------------------

Count points on y^2 = x^3 + x + 1 over F_p and look at a_p = p + 1 - #E(F_p).
"""

# %%
# A single prime first.  Over F_5 the curve has 9 points (with infinity),
# so a_5 = 5 + 1 - 9 = -3.
from langtrotter import EllipticCurve, ap, ap_table

E = EllipticCurve(1, 1)
print(E, "disc =", E.disc)
print("a_5 =", ap(E, 5))

# %%
# A whole table.  Primes dividing the discriminant (2 and 31 here) are left out.
import numpy as np

T = ap_table(E, 10**5)
print(len(T), "primes, first records:")
for rec in list(T)[:5]:
    print("  ", rec)

# %%
# The Hasse bound |a_p| < 2 sqrt(p): the normalised traces a_p / (2 sqrt p)
# fill (-1, 1).  A crude text histogram:
theta = T.a / (2 * np.sqrt(T.p))
counts, edges = np.histogram(theta, bins=10, range=(-1, 1))
for c, lo in zip(counts, edges):
    print(f"{lo:+.1f} {'#' * (c // 40)}")

# %%
# Supersingular primes (a_p = 0) are rare: roughly sqrt(x)/log(x) of them.
ss = T.p[T.a == 0]
print("supersingular primes below 1e5:", ss.tolist())

# %%
# Each record also stores the field Q(pi_p) through its fundamental
# discriminant d; a^2 - 4p = d f^2.
rec = T[100]
print(rec.p, rec.a, rec.D, rec.d, "f^2 =", rec.D // rec.d)
