"""
VZ groups and the four center shapes
====================================

A VZ group has every nonlinear character vanishing off the center.  The
codegrees of such a group depend on the shape of Z(G).  Each group below
lands in a different case; the case formula, the subgroup-lattice
algorithm and the character table all agree.
"""

from codegree.catalog import abelian, direct_product, heisenberg, heisenberg_gf_p2, phi2_211b
from codegree.chartab import codegrees_bruteforce
from codegree.formulas import NoCaseApplies, cod_vz_case, cod_vz_general, is_vz
from codegree.group import abelian_type, center, derived_subgroup, generator_count

groups = {
    "H(5)": heisenberg(5),
    "H(3) x C3": direct_product(heisenberg(3), abelian(3, (1,))),
    "Heisenberg over GF(9), center extended": heisenberg_gf_p2(3, extend_center=True),
    "H(3) x C9": direct_product(heisenberg(3), abelian(3, (2,))),
    "phi2(211)b x C5": direct_product(phi2_211b(5), abelian(5, (1,))),
    "H(3) x C9 x C3": direct_product(heisenberg(3), abelian(3, (2, 1))),
}

for name, G in groups.items():
    assert is_vz(G)
    Z = center(G)
    shape = abelian_type(G, Z)
    dD = generator_count(G, derived_subgroup(G))
    try:
        rep = cod_vz_case(G)
        case = rep.case
    except NoCaseApplies:
        case = "none (general algorithm only)"
    print(f"{name:42s} Z type {shape}, d(G') = {dD}, case {case}")
    print("    general  ", cod_vz_general(G).cod)
    print("    character", codegrees_bruteforce(G).cod)
