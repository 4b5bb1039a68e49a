"""
Induced class functions
-----------------------

Induction from the Borel subgroup of GL_2(F_5), checked with exact
fractions.
"""

# %%
import random
from fractions import Fraction

from langtrotter.classfn import (
    ClassFunction,
    indicator,
    induce,
    inner_product,
    matrix_group_table,
    restrict,
)
from langtrotter.groups import gl2_elements

G = matrix_group_table(gl2_elements(5), 5, "GL2(F5)")
B = [i for i, m in enumerate(G.labels) if m[2] == 0]
Bt = restrict(G, B, "B")
print(G.n, "elements,", len(G.classes), "classes; B has", Bt.n, "elements,", len(Bt.classes), "classes")

# %%
# Reciprocity: <Ind phi, 1_G> = <phi, 1_B>.
rng = random.Random(0)
phi = ClassFunction.from_classes(Bt, [Fraction(rng.randint(-5, 5)) for _ in Bt.classes])
print(inner_product(induce(G, B, phi), ClassFunction.constant(G)), inner_product(phi, ClassFunction.constant(Bt)))

# %%
# Inducing the indicator of a B-class gives a multiple of the indicator of the
# G-class, and the multiple is a ratio of centraliser orders.
Bs = sorted(B)
for cls in Bt.classes[:6]:
    s = Bs[cls[0]]
    ind = induce(G, B, indicator(Bt, cls))
    value = ind.values[next(iter(ind.support()))]
    print(G.labels[s], "->", value, "=", Fraction(G.centralizer_order(s), Bt.centralizer_order(cls[0])))
