import dataclasses
import itertools
import json
import math

import numpy as np
import pytest

from codegree.catalog import GroupId, abelian, build, heisenberg
from codegree.chartab import (
    _character_table,
    character_table,
    class_matrix,
    codegrees_bruteforce,
    conjugacy_classes,
    inner_product_times_order,
    orthogonality_violations,
)
from codegree.cyclotomic import equals_integer
from codegree.group import derived_subgroup, enumerate_elements
from codegree.pc import inverse, multiply, presentation


def _orbit_count(pres):
    """Conjugacy classes by scalar collection, independent of the numpy model."""
    elems = enumerate_elements(pres)
    seen, count = set(), 0
    gens = [pres.generator(i) for i in range(pres.n)]
    for x in elems:
        if x in seen:
            continue
        count += 1
        orbit, frontier = {x}, [x]
        while frontier:
            y = frontier.pop()
            for g in gens:
                z = multiply(pres, multiply(pres, inverse(pres, g), y), g)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        seen |= orbit
    return count


@pytest.mark.parametrize("gid,k", [
    (GroupId("heisenberg", 3), 11),
    (GroupId("abelian", 3, partition=(2, 1)), 27),
    (GroupId("phi2_211b", 5), 145),
])
def test_class_counts(gid, k):
    pres = build(gid)
    cl = conjugacy_classes(pres)
    assert len(cl) == k
    if pres.order <= 27:
        assert _orbit_count(pres) == k
    assert sum(cl.class_sizes) == pres.order
    assert cl.class_sizes[0] == 1 and cl.rep_index[0] == 0
    assert all(pres.order % s == 0 for s in cl.class_sizes)


def test_heisenberg_class_sizes():
    cl = conjugacy_classes(heisenberg(3))
    assert sorted(cl.class_sizes) == [1] * 3 + [3] * 8


def test_power_maps():
    pres = build(GroupId("phi2_31", 5))
    cl = conjugacy_classes(pres)
    for j, r in enumerate(cl.representatives):
        for m in (2, 3, 7):
            x = r
            y = pres.identity
            for _ in range(m):
                y = multiply(pres, y, x)
            assert cl.class_of(y) == cl.power_map(m)[j]
    assert (cl.power_map(0) == 0).all()


def test_class_matrix_identity_class():
    cl = conjugacy_classes(heisenberg(3))
    assert (class_matrix(cl, 0) == np.eye(len(cl), dtype=np.int64)).all()


def test_class_matrix_abelian_single_entry_per_column():
    cl = conjugacy_classes(abelian(3, (2, 1)))
    for i in (1, 5, 20):
        m = class_matrix(cl, i)
        assert ((m != 0).sum(axis=0) == 1).all()


def test_class_matrix_inverse_class_coefficient():
    pres = heisenberg(3)
    cl = conjugacy_classes(pres)
    elems = enumerate_elements(pres)
    for i in range(len(cl)):
        if cl.class_sizes[i] != 3:
            continue
        j = int(cl.inverse_class[i])
        # oracle: count pairs (x, y) in C_i x C_j with x y = 1 by scalar collection
        ci = [x for x in elems if cl.class_of(x) == i]
        cj = [y for y in elems if cl.class_of(y) == j]
        direct = sum(multiply(pres, x, y) == pres.identity for x in ci for y in cj)
        assert direct == 3
        assert class_matrix(cl, i)[j, 0] == 3


def test_class_matrix_column_sums():
    cl = conjugacy_classes(build(GroupId("phi2_211b", 5)))
    for i in (1, 30, 144):
        assert (class_matrix(cl, i).sum(axis=0) == cl.class_sizes[i]).all()


def test_cyclic_group_table():
    table = character_table(abelian(5, (1,)))
    assert table.degrees == [1] * 5
    assert sorted(r.codegree for r in table.rows) == [1, 5, 5, 5, 5]


def _dual_codegrees(p, part):
    # chi_(a) has codegree = its order in the dual group, which is max over coordinates
    out = set()
    for a in itertools.product(*[range(p**l) for l in part]):
        o = 1
        for ai, l in zip(a, part):
            o = max(o, p**l // math.gcd(ai, p**l))
        out.add(o)
    return sorted(out)


@pytest.mark.parametrize("p,part", [(3, (2, 1)), (3, (1, 1, 1)), (5, (2,))])
def test_abelian_against_dual_group(p, part):
    rep = codegrees_bruteforce(abelian(p, part))
    assert list(rep.cod) == _dual_codegrees(p, part)


def test_heisenberg5_degrees():
    table = character_table(heisenberg(5))
    degs = sorted(table.degrees)
    assert degs == [1] * 25 + [5] * 4
    assert sum(d * d for d in degs) == 125


def test_heisenberg3_codegrees():
    assert codegrees_bruteforce(heisenberg(3)).cod == (1, 3, 9)


def test_trivial_group():
    assert codegrees_bruteforce(presentation(3, 0)).cod == (1,)


@pytest.mark.parametrize("gid", [GroupId("phi2_31", 5), GroupId("extraspecial_exp_p2", 3, rank=2),
                                 GroupId("abelian", 3, partition=(2, 2))],
                         ids=lambda g: g.label)
def test_table_invariants(gid):
    pres = build(gid)
    table = character_table(pres)
    cl = table.classes
    assert len(table.rows) == len(cl)
    assert sum(r.degree**2 for r in table.rows) == pres.order
    first = table.rows[0]
    assert first.degree == 1 and first.kernel_order == pres.order and first.codegree == 1
    assert sum(r.degree == 1 for r in table.rows) == pres.order // derived_subgroup(pres).order
    common = set(range(len(cl)))
    for r in table.rows:
        common &= set(r.kernel_classes)
        assert (r.mults.sum(axis=1) == r.degree).all()
        assert r.codegree * r.kernel_order * r.degree == pres.order
    assert common == {0}
    assert orthogonality_violations(table) == []


def test_orthogonality_by_complex_arithmetic():
    table = character_table(build(GroupId("extraspecial_exp_p2", 3, rank=1)))
    sizes = np.array(table.classes.class_sizes)
    vals = np.array([[v.to_complex() for v in r.values] for r in table.rows])
    gram = (vals * sizes) @ vals.conj().T
    assert np.allclose(gram, table.order * np.eye(len(vals)), atol=1e-6)


def _corrupt(table, i):
    row = table.rows[i]
    bad = row.mults.copy()
    j = next(j for j in range(1, bad.shape[0]) if bad[j].sum() == 1 and bad[j, 0] == 0)
    bad[j] = np.roll(bad[j], 1)
    rows = list(table.rows)
    rows[i] = dataclasses.replace(row, mults=bad)
    return dataclasses.replace(table, rows=tuple(rows))


def test_violations_match_exact_convolution():
    # oracle: exact multiplicity vectors, tested for equality in Z[zeta_e]
    table = character_table(build(GroupId("extraspecial_exp_p2", 3, rank=1)))
    table = _corrupt(table, next(i for i, r in enumerate(table.rows) if i and r.degree == 1))
    p, n = 3, len(table.rows)
    want = [(a, b) for a in range(n) for b in range(a, n)
            if not equals_integer(inner_product_times_order(table, a, b), table.order if a == b else 0, p)]
    assert want and orthogonality_violations(table) == want


def test_orthogonality_detects_corruption():
    assert orthogonality_violations(_corrupt(character_table(heisenberg(3)), 5))


def test_kernel_subgroup():
    pres = heisenberg(5)
    table = character_table(pres)
    for r in table.rows:
        K = r.kernel(table.classes)
        assert K.order == r.kernel_order
        if r.degree > 1:
            assert K.order == 1


def test_determinism_and_export(tmp_path):
    pres = build(GroupId("phi2_31", 5))
    a = _character_table.__wrapped__(pres, 3).to_json()
    b = _character_table.__wrapped__(pres, 3).to_json()
    assert a == b
    data = json.loads(a)
    assert data["schema_version"] == 1
    # exp(G) = 125: smallest prime 1 mod 125 above 2 sqrt(625) = 50
    assert data["metadata"]["ell"] == 251 and data["metadata"]["seed"] == 3
    assert len(data["rows"]) == len(data["classes"]) == 145
    assert data["rows"][0]["degree"] == 1 and data["rows"][0]["kernel_order"] == 625


def test_report_json():
    rep = codegrees_bruteforce(build(GroupId("phi2_211b", 5)))
    d = json.loads(rep.to_json())
    assert d["cod"] == [1, 5, 125] and d["method"] == "bruteforce"
    assert rep.exponents() == [0, 1, 3]
    assert sum(pv["count"] for pv in d["provenance"]) == 145
    with pytest.raises(ValueError):
        dataclasses.replace(rep, cod=(5, 1))
