"""
Lang-Trotter counting functions
-------------------------------

Primes with a fixed trace, primes with a fixed Frobenius field, and the number
of distinct fields, with the growth shapes they are compared against.
The sweep at the end writes CSV that any plotting tool can read.
"""

# %%
import csv
import math
import sys

from langtrotter import EllipticCurve, ap_table
from langtrotter.chebotarev import asymptote_fit, bound_profile, count_DE, count_PEa, count_PEk

E = EllipticCurve(1, 1)
T = ap_table(E, 10**5)
xs = [10**3, 3 * 10**3, 10**4, 3 * 10**4, 10**5]

# %%
# P_{E,0}(x), the supersingular count, against sqrt(x)/log(x).
obs = [(x, count_PEa(T, 0, x).observed) for x in xs]
fit = asymptote_fit(obs)
print("fitted constant", round(fit.constant, 3), "pure-power exponent", round(fit.exponent, 3))

# %%
# Restricting to primes where l splits in Q(pi_p) cuts the count down.
for ell in (5, 7, 11, 13):
    strict = count_PEa(T, 0, 10**5, ell=ell).observed
    incl = count_PEa(T, 0, 10**5, ell=ell, inclusive=True).observed
    print(f"l={ell}: strict {strict:.0f}, inclusive {incl:.0f}")

# %%
# Fields: Q(i) and Q(sqrt -23), and how many distinct fields appear.
for d in (-4, -23):
    r = count_PEk(T, d, 10**5)
    print(d, "count", r.observed, "h", r.normalizer, "principality failures", r.extra["principal_failures"])
de = count_DE(T, 10**5)
print("distinct fields:", de.observed, "partition residual:", de.extra["partition_residual"])

# %%
# Sweep written as CSV, with the bound shapes (unit constants) alongside.
w = csv.writer(sys.stdout, lineterminator="\n")
w.writerow(["x", "P_E0", "shape_sqrt_log", "profile_a_zero", "D_E", "shape_D_E"])
for x in xs:
    L = math.log(x)
    w.writerow([x, int(count_PEa(T, 0, x).observed), round(math.sqrt(x) / L, 3),
                round(bound_profile(x, mode="a-zero")[1], 1), int(count_DE(T, x).observed),
                round(x ** (2 / 7) / L ** (10 / 7), 3)])
