"""Acceptance criteria 1-9. Each test reports one PASS/FAIL line (see conftest.py).

Brute-force timings start from cold caches so they measure the full
pipeline: group model, classes, character table.
"""

import random
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from codegree.catalog import (
    GroupId,
    abelian,
    build,
    catalog_ids,
    direct_product,
    heisenberg,
    heisenberg_gf_p2,
    phi2_211b,
)
from codegree.chartab import _character_table, _classes, character_table, codegrees_bruteforce, orthogonality_violations
from codegree.formulas import (
    NoCaseApplies,
    camina_class3_symbolic,
    camina_profile,
    cod_abelian,
    cod_camina,
    cod_formula,
    cod_vz_case,
    cod_vz_general,
    is_vz,
    predict_from_paper,
    summary_envelope,
)
from codegree.group import _lcs, _model, center, derived_subgroup, is_abelian, nilpotency_class, subgroup_exponent, whole_group


def _cold():
    for f in (_character_table, _classes, _model, _lcs):
        f.cache_clear()


def _timed(pres, formula=True):
    _cold()
    t0 = time.perf_counter()
    f = cod_formula(pres) if formula else None
    b = codegrees_bruteforce(pres)
    return f, b, time.perf_counter() - t0


def _issues(problems):
    return ": " + "; ".join(problems) if problems else ""


def _powers(p, *exps):
    return tuple(p**e for e in exps)


def test_criterion_1_order_p3(acceptance):
    problems, worst = [], 0.0
    for p in (3, 5, 7):
        want = _powers(p, 0, 1, 2)
        for gid in (GroupId("heisenberg", p), GroupId("extraspecial_exp_p2", p, rank=1)):
            f, b, dt = _timed(build(gid))
            worst = max(worst, dt)
            if f is None or f.cod != want or b.cod != want or dt >= 1.0:
                problems.append(f"{gid.label} p={p}: formula={f and f.cod} brute={b.cod} {dt:.2f}s")
    acceptance(1, not problems, f"6 groups, max {worst:.2f}s (< 1 s)" + _issues(problems))
    assert not problems


def test_criterion_2_table1(acceptance):
    problems, worst = [], 0.0
    for p in (5, 7):
        for fam, exps in (("phi2_31", (0, 1, 2, 3)), ("phi2_211b", (0, 1, 3))):
            gid = GroupId(fam, p)
            want = _powers(p, *exps)
            f, b, dt = _timed(build(gid))
            worst = max(worst, dt)
            if f is None or f.cod != want or b.cod != want or predict_from_paper(gid).cod != want or dt >= 30:
                problems.append(f"{fam} p={p}: formula={f and f.cod} brute={b.cod} {dt:.1f}s")
    acceptance(2, not problems, f"4 groups, max {worst:.1f}s (< 30 s)" + _issues(problems))
    assert not problems


def test_criterion_3_table3_p5(acceptance):
    expected = {"phi3_2111c": (1, 5, 25, 625), "phi4_221a": (1, 5, 25, 125),
                "phi4_221c": (1, 5, 25), "phi4_221f0": (1, 5, 125)}
    problems, worst = [], 0.0
    for fam, want in expected.items():
        gid = GroupId(fam, 5)
        _, b, dt = _timed(build(gid), formula=False)
        worst = max(worst, dt)
        if b.cod != want or predict_from_paper(gid).cod != want or dt >= 600:
            problems.append(f"{fam}: brute={b.cod} {dt:.1f}s")
    acceptance(3, not problems, f"4 groups of order 3125, max {worst:.1f}s (< 600 s)" + _issues(problems))
    assert not problems


def test_criterion_4_table4_p3(acceptance):
    cases = [(GroupId("heisenberg", 3), (1, 3, 9)), (GroupId("extraspecial_exp_p2", 3, rank=1), (1, 3, 9)),
             (GroupId("extraspecial_exp_p", 3, rank=2), (1, 3, 27)),
             (GroupId("extraspecial_exp_p2", 3, rank=2), (1, 3, 27))]
    problems, worst = [], 0.0
    for gid, want in cases:
        f, b, dt = _timed(build(gid))
        worst = max(worst, dt)
        if f is None or f.cod != want or b.cod != want or dt >= 5:
            problems.append(f"{gid.label}: formula={f and f.cod} brute={b.cod} {dt:.2f}s")
    acceptance(4, not problems, f"orders 27 and 243, max {worst:.2f}s (< 5 s)" + _issues(problems))
    assert not problems


def _random_partition(rng, p):
    budget = 6 if p == 3 else 4
    total = rng.randint(1, budget)
    parts = []
    while total:
        k = rng.randint(1, total)
        parts.append(k)
        total -= k
    return tuple(sorted(parts, reverse=True))


def test_criterion_5_abelian(acceptance):
    rng = random.Random(20240)
    problems = []
    cases = [(p, _random_partition(rng, p)) for p in [3, 5] * 10]
    for p, part in cases:
        want = _powers(p, *range(part[0] + 1))
        f = cod_abelian(p, part).cod
        b = codegrees_bruteforce(abelian(p, part)).cod
        if not f == b == want:
            problems.append(f"p={p} {part}: formula={f} brute={b}")
    acceptance(5, not problems, f"{len(cases)} random partitions" + _issues(problems))
    assert not problems


def _vz_groups():
    out = []
    for p in (3, 5, 7):
        for gid in catalog_ids(p):
            pres = build(gid)
            if not is_abelian(pres) and is_vz(pres):
                out.append((f"{gid.label} p={p}", pres))
    # constructed examples reaching every case of the case theorem
    out += [
        ("H(3) x C3", direct_product(heisenberg(3), abelian(3, (1,)))),
        ("Heisenberg over GF(9)", heisenberg_gf_p2(3)),
        ("Heisenberg over GF(9), extended center", heisenberg_gf_p2(3, extend_center=True)),
        ("H(3) x C9", direct_product(heisenberg(3), abelian(3, (2,)))),
        ("phi2_211b(5) x C5", direct_product(phi2_211b(5), abelian(5, (1,)))),
        ("H(3) x C9 x C3", direct_product(heisenberg(3), abelian(3, (2, 1)))),
    ]
    return out


def test_criterion_6_vz_consistency(acceptance):
    problems, cases = [], set()
    groups = _vz_groups()
    for name, pres in groups:
        general = cod_vz_general(pres).cod
        try:
            rep = cod_vz_case(pres)
            case, by_case = rep.case, rep.cod
        except NoCaseApplies:
            case, by_case = "none", general
        cases.add(case)
        brute = codegrees_bruteforce(pres).cod
        if not general == by_case == brute:
            problems.append(f"{name}: general={general} case {case}={by_case} brute={brute}")
    acceptance(6, not problems, f"{len(groups)} VZ groups, cases {sorted(cases)}" + _issues(problems))
    assert not problems


def test_criterion_7_camina(acceptance):
    problems = []
    for p in (3, 5, 7):
        pres = heisenberg(p)
        prof = camina_profile(pres)
        if not (prof.is_camina and prof.nilpotency_class == 2):
            problems.append(f"H({p}) not detected as class-2 Camina")
            continue
        c = cod_camina(prof, p, pres.order, derived_subgroup(pres).order, center(pres).order).cod
        b = codegrees_bruteforce(pres).cod
        if not c == b == _powers(p, 0, 1, 2):
            problems.append(f"H({p}): camina={c} brute={b}")
    for p, n in ((3, 2), (5, 2), (7, 4)):
        got = camina_class3_symbolic(p, n).cod
        if got != _powers(p, 0, 1, n + 1, 3 * n // 2 + 1):
            problems.append(f"class 3 symbolic p={p} n={n}: {got}")
    detail = ("class 2 on H(3), H(5), H(7); class 3 by symbolic substitution only, since the "
              "smallest class-3 Camina p-group has order at least p^7")
    acceptance(7, not problems, detail + _issues(problems))
    assert not problems


def _is_p_power(c, p):
    while c % p == 0:
        c //= p
    return c == 1


def test_criterion_8_property_suite(acceptance):
    problems, count = [], 0
    groups = [(gid.label, gid.p, build(gid)) for p in (3, 5, 7) for gid in catalog_ids(p)]
    groups += [(name, pres.p, pres) for name, pres in _vz_groups()[-6:]]
    for name, p, pres in groups:
        count += 1
        tag = f"{name} p={p}"
        table = character_table(pres)
        if sum(r.degree**2 for r in table.rows) != pres.order:
            problems.append(f"{tag}: sum of squared degrees")
        bad = orthogonality_violations(table)
        if bad:
            problems.append(f"{tag}: {len(bad)} orthogonality violations")
        cod = {r.codegree for r in table.rows}
        if not all(_is_p_power(c, p) for c in cod):
            problems.append(f"{tag}: non p-power codegree")
        if len(cod) == 2 and not (is_abelian(pres) and subgroup_exponent(pres, whole_group(pres)) == p):
            problems.append(f"{tag}: two codegrees but not elementary abelian")
        if nilpotency_class(pres) >= 3 and len(cod) < 4:
            problems.append(f"{tag}: class >= 3 with {len(cod)} codegrees")
        if not is_abelian(pres):
            env = summary_envelope(p, pres.order)
            if env is not None and frozenset(cod) not in env:
                problems.append(f"{tag}: {sorted(cod)} outside the summary envelope")
    acceptance(8, not problems, f"{count} groups, {len(problems)} violations" + _issues(problems))
    assert not problems


def _verify_all():
    res = subprocess.run([sys.executable, "-m", "codegree", "verify", "all", "--seed", "7"],
                         capture_output=True, check=False)
    return res.returncode, res.stdout


def test_criterion_9_determinism(acceptance):
    with ThreadPoolExecutor(2) as pool:
        (rc1, out1), (rc2, out2) = pool.map(lambda _: _verify_all(), range(2))
    ok = rc1 == rc2 == 0 and out1 == out2 and len(out1) > 0
    acceptance(9, ok, f"verify all --seed 7 twice: exit {rc1}/{rc2}, {len(out1)} bytes, "
                      f"{'identical' if out1 == out2 else 'different'}")
    assert ok
