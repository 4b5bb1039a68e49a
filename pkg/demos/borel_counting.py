"""
Counting inside GL_2(F_l)
-------------------------

Upper triangular matrices B, the unipotent U, scalars times U (H), and the
matrices with trace a and square discriminant.  Everything is enumerated.
"""

# %%
from langtrotter.groups import gl2_order, quotient_image_count, set_C_a, subgroup_BUH

for ell in (5, 7, 11, 13):
    bd = subgroup_BUH(ell)
    print(f"l={ell:2d} |G|={gl2_order(ell):6d} |B|={len(bd.B):5d} |U|={len(bd.U):3d} "
          f"|B/U|={bd.index_BU:4d} |B/H|={bd.index_BH:3d}")

# %%
# The trace-a set meets B in a U-stable set; its image in B/U has l-1
# elements for a = 0 and l-2 otherwise.
ell = 7
bd = subgroup_BUH(ell)
for a in range(ell):
    C = set_C_a(ell, a)
    CB = C[C[:, 2] == 0]
    print(f"a={a}: |C|={len(C)}, |C & B|={len(CB)}, image in B/U: {quotient_image_count(CB, bd.U, ell)}")

# %%
# The mixed group: pairs (A, u) with det A = N(u), u in (O/lO)^x / O^x.
from langtrotter.groups import set_Ccal

for d, ell in ((-4, 5), (-4, 13), (-7, 11)):
    c = set_Ccal(ell, d)
    print(f"d={d}, l={ell}: |G|={len(c.group)}, |C & B|={c.C_and_B}, |U|={c.size_U}, image={c.C_prime}")
