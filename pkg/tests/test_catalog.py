import json

import pytest

from codegree.catalog import (
    CatalogError,
    GroupId,
    build,
    catalog_json,
    catalog_markdown,
    direct_product,
    expected_order,
    heisenberg,
    heisenberg_gf_p2,
    list_catalog,
    load_user,
    paper_rows,
    quadratic_nonresidue,
)
from codegree.group import center, derived_subgroup, is_abelian, quotient_exponent
from codegree.pc import check_consistency, consistency_failures, order_of


def _nonresidue_oracle(p):
    # Euler's criterion, independent of the set-of-squares construction
    return next(v for v in range(2, p) if pow(v, (p - 1) // 2, p) == p - 1)


@pytest.mark.parametrize("p,nu", [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (23, 5)])
def test_quadratic_nonresidue(p, nu):
    assert quadratic_nonresidue(p) == nu == _nonresidue_oracle(p)


def test_quadratic_nonresidue_rejects_non_primes():
    for bad in (1, 2, 9):
        with pytest.raises(ValueError):
            quadratic_nonresidue(bad)


PHI = ["phi2_31", "phi2_211b", "phi3_2111c", "phi4_221a", "phi4_221c", "phi4_221f0"]


@pytest.mark.parametrize("fam", PHI)
@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_phi_presentations_consistent(fam, p):
    # consistency via overlaps only: 11^5 and 13^5 exceed the enumeration guard
    pres = build(GroupId(fam, p))
    assert consistency_failures(pres) == []
    assert pres.order == expected_order(GroupId(fam, p))


@pytest.mark.parametrize("fam", PHI)
def test_phi_at_three_needs_opt_in(fam):
    with pytest.raises(CatalogError):
        build(GroupId(fam, 3))
    check_consistency(build(GroupId(fam, 3, allow_p3=True)))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_small_families_consistent(p):
    for gid in [GroupId("heisenberg", p), GroupId("extraspecial_exp_p", p, rank=2),
                GroupId("extraspecial_exp_p2", p, rank=1), GroupId("extraspecial_exp_p2", p, rank=2),
                GroupId("abelian", p, partition=(3, 2, 1))]:
        check_consistency(build(gid))
    check_consistency(heisenberg_gf_p2(p))
    check_consistency(heisenberg_gf_p2(p, extend_center=True))


@pytest.mark.parametrize("p", [3, 5])
def test_extraspecial_types(p):
    for rank in (1, 2):
        for sq, exp in ((False, p), (True, p * p)):
            pres = build(GroupId("extraspecial_exp_p2" if sq else "extraspecial_exp_p", p, rank=rank))
            Z = center(pres)
            assert Z.order == p and derived_subgroup(pres).members == Z.members
            assert quotient_exponent(pres, Z) == p
            assert max(order_of(pres, pres.generator(i)) for i in range(pres.n)) == exp


def test_phi2_211b_structure():
    pres = build(GroupId("phi2_211b", 5))
    assert center(pres).order == 25
    assert quotient_exponent(pres, derived_subgroup(pres)) == 5


def test_parse_and_label():
    gid = GroupId.parse("abelian:1,2", 5)
    assert gid.partition == (2, 1) and gid.label == "abelian:2,1"
    assert GroupId.parse("extraspecial_exp_p:2", 3).rank == 2
    assert GroupId.parse("phi2_31", 5).label == "phi2_31"
    with pytest.raises(CatalogError):
        GroupId.parse("phi2_31:3", 5)
    with pytest.raises(CatalogError):
        GroupId.parse("nonsense", 5)
    with pytest.raises(CatalogError):
        GroupId("heisenberg", 4)
    with pytest.raises(CatalogError):
        GroupId("abelian", 3, partition=(1, 2))


def test_user_json(tmp_path):
    pres = heisenberg(5)
    path = tmp_path / "h.json"
    path.write_text(pres.to_json())
    assert load_user(path) == pres
    with pytest.raises(CatalogError):
        build(GroupId("user_json", 3, path=str(path)))
    with pytest.raises(CatalogError):
        build(GroupId("user_json", 0, path=str(tmp_path / "missing.json")))


def test_direct_product():
    pres = direct_product(heisenberg(3), heisenberg(3))
    assert pres.order == 3**6 and not is_abelian(pres)
    assert center(pres).order == 9
    with pytest.raises(ValueError):
        direct_product(heisenberg(3), heisenberg(5))


def test_paper_rows_table():
    rows = paper_rows()
    names = {r.name for r in rows}
    assert {"phi_2(31)", "phi_2(211)b", "phi_3(2111)c", "phi_4(221)a"} <= names
    for r in rows:
        assert r.cod_exponents is None or r.cod_exponents[0] == 0
        assert r.constructible == (r.family is not None)
    by = {r.name: r for r in rows}
    assert by["phi_2(31)"].cod_exponents == (0, 1, 2, 3)
    assert by["phi_4(221)c"].cod_exponents == (0, 1, 2)


def test_listing():
    entries = list_catalog()
    templates = {e.template for e in entries}
    assert "phi2_31" in templates and "heisenberg" in templates
    assert any(not e.constructible for e in entries)
    data = json.loads(catalog_json())
    assert data["schema_version"] == 1
    assert catalog_json() == catalog_json()
    assert "phi2_31" in catalog_markdown()
