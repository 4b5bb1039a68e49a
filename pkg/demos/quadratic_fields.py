"""
Imaginary quadratic fields
--------------------------

Class numbers from reduced forms, generators from Cornacchia, ray class
orders, and a live check that Frobenius traces sit in the right unit cosets.
"""

# %%
from langtrotter.quadfield import (
    class_number,
    cornacchia,
    ideal_class_of_prime,
    ray_class_count_bruteforce,
    ray_class_order,
    reduced_forms,
    residue_unit_quotient,
)

for d in (-3, -4, -23, -47, -71):
    K = class_number(d)
    print(d, "h =", K.h, "w =", K.w, [tuple(vars(f).values()) for f in reduced_forms(d)])

# %%
# Which split primes are norms from Q(sqrt -23)?  Exactly the principal ones.
for p in (3, 13, 29, 31, 41, 47, 59, 71, 73):
    if pow(-23 % p, (p - 1) // 2, p) != 1:
        continue
    print(p, ideal_class_of_prime(-23, p), cornacchia(-23, p))

# %%
# Ray class orders: h |(O/mO)^x| / w, compared with an ideal enumeration.
for d, m in ((-4, 5), (-3, 5), (-15, 7), (-20, 6)):
    print(d, m, ray_class_order(d, m), ray_class_count_bruteforce(d, m))

# %%
# Frobenius of y^2 = x^3 + x + 1 at primes whose field is Q(i): the trace
# a_p mod 13 is one of the traces of the coset of the Gaussian generator.
from langtrotter import EllipticCurve, ap_table
from langtrotter.chebotarev import mixed_frobenius_check

T = ap_table(EllipticCurve(1, 1), 10**5)
q = residue_unit_quotient(-4, 13)
for rec in [r for r in T if r.d == -4 and r.ordinary and r.p != 13][:5]:
    u, v = cornacchia(-4, rec.p)
    k = q.of_element(u, v)
    print(rec.p, rec.a % 13, sorted(q.traces(k)))
print(mixed_frobenius_check(T, -4, 13, 10**5))
