"""Closed-form codegree sets: abelian, linear part, VZ, extraspecial, Camina.

Each function returns a :class:`CodegreeReport` whose ``method`` names the
rule used, so results can be compared against the brute-force tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import GroupId, PaperRow, paper_rows
from .chartab import CodegreeReport, Provenance, character_table
from .group import (Subgroup, _log_p, abelian_type, center, closure, derived_subgroup,
                    generator_count, is_abelian, model, nilpotency_class, quotient_exponent)
from .pc import PcPresentation


class FormulaError(ValueError):
    """The group does not satisfy the hypothesis of the requested formula."""


class NoCaseApplies(FormulaError):
    """No VZ case formula covers the group; use :func:`cod_vz_general`."""


def _powers(p: int, top: int) -> list[int]:
    return [p**i for i in range(top + 1)]


def _isqrt_exact(m: int) -> int:
    r = math.isqrt(m)
    if r * r != m:
        raise FormulaError(f"{m} is not a perfect square")
    return r


def _report(p, order, method, cod, prov=(), case="") -> CodegreeReport:
    return CodegreeReport(p, order, method, tuple(sorted(set(cod))), tuple(prov), case)


# abelian groups

def cod_abelian(p: int, partition) -> CodegreeReport:
    """{p^i : 0 <= i <= l1}; the empty partition is the trivial group."""
    part = sorted(partition, reverse=True)
    top = part[0] if part else 0
    return _report(p, p ** sum(part), "abelian", _powers(p, top),
                   [Provenance(1, 0, p**i, 0, "linear") for i in range(top + 1)])


@dataclass(frozen=True)
class CyclicQuotientKernel:
    """N = <a_k^(p^c_k)> inside A = C_{p^l1} x ... with A/N cyclic of order p^b.

    ``generators`` pairs each factor index k with the exponent c_k.
    """

    partition: tuple[int, ...]
    b: int
    replaced: int
    generators: tuple[tuple[int, int], ...]

    @property
    def index(self) -> int:
        return self.b

    def subgroup(self, pres: PcPresentation) -> Subgroup:
        """The subgroup inside the catalog presentation ``abelian(p, partition)``."""
        offsets = np.cumsum((0,) + self.partition[:-1]).tolist()
        gens = []
        for k, c in self.generators:
            if c < self.partition[k]:
                # a_k^(p^c) is the refined generator c steps down the chain of a_k
                gens.append(pres.generator(offsets[k] + c))
        return closure(pres, gens)


def lemma21_kernel(p: int, partition, b: int) -> CyclicQuotientKernel:
    """Subgroup N of the abelian group with A/N = C_{p^b}.

    Scans the factors from the last one back to the first and replaces the
    first a_i with l_i >= b by a_i^(p^b), keeping every other generator.
    """
    part = tuple(sorted(partition, reverse=True))
    if not part:
        if b:
            raise FormulaError("the trivial group has only the trivial cyclic quotient")
        return CyclicQuotientKernel(part, 0, -1, ())
    if not 0 <= b <= part[0]:
        raise FormulaError(f"b = {b} outside 0..{part[0]}: no cyclic quotient of that order")
    i = len(part) - 1
    while part[i] < b:
        i -= 1
    gens = tuple((k, b if k == i else 0) for k in range(len(part)))
    return CyclicQuotientKernel(part, b, i, gens)


def cod_lin(pres: PcPresentation) -> CodegreeReport:
    """Codegrees of the linear characters: {p^i : p^i <= exp(G/G')}."""
    top = _log_p(quotient_exponent(pres, derived_subgroup(pres)), pres.p) if pres.n else 0
    return _report(pres.p, pres.order, "linear", _powers(pres.p, top),
                   [Provenance(1, pres.order // pres.p**i, pres.p**i, 0, "linear part")
                    for i in range(top + 1)])


# VZ groups

def _vz_prefilter(pres: PcPresentation) -> bool:
    if is_abelian(pres):
        return False
    G = model(pres)
    Z, D = center(pres), derived_subgroup(pres)
    index = G.order // Z.order
    if _log_p(index, pres.p) % 2:
        return False
    if not D.members <= Z.members:
        return False
    if quotient_exponent(pres, Z) != pres.p:
        return False
    return int(G.element_orders[list(D.members)].max()) == pres.p


def is_vz(pres: PcPresentation, method: str = "classes", seed: int = 0) -> bool:
    """True iff every nonlinear irreducible character vanishes off Z(G).

    ``characters`` tests cd(G) = {1, |G:Z|^(1/2)} on the character table;
    ``classes`` tests Cl(g) = gG' for every non-central g.  Both run after a
    cheap necessary filter.  Abelian groups report False by convention.
    """
    if not _vz_prefilter(pres):
        return False
    G = model(pres)
    Z = center(pres)
    root = _isqrt_exact(G.order // Z.order)
    if method == "characters":
        return set(character_table(pres, seed).degrees) == {1, root}
    if method == "classes":
        D = derived_subgroup(pres)
        return _classes_are_cosets(pres, D, outside=Z)
    raise ValueError(f"unknown method {method!r}")


def _classes_are_cosets(pres: PcPresentation, D: Subgroup, outside: Subgroup) -> bool:
    """Cl(g) = gD for all g outside the subgroup ``outside``.

    Cl(g) is always inside gG' for class-2 sections, so equal sizes suffice when
    D = G'; containment is checked explicitly anyway.
    """
    from .chartab import conjugacy_classes
    G = model(pres)
    cl = conjugacy_classes(pres)
    dmembers = np.array(sorted(D.members), dtype=np.int64)
    omask = outside.mask()
    for j, rep in enumerate(cl.rep_index):
        if omask[rep]:
            continue
        if cl.class_sizes[j] != D.order:
            return False
        coset = G.mul(rep, dmembers)
        if not (cl.labels[coset] == j).all():
            return False
    return True


def subgroups_of_abelian(pres: PcPresentation, A: Subgroup) -> list[Subgroup]:
    """Every subgroup of the abelian subgroup A: cyclic ones, then joins to a fixpoint."""
    G = model(pres)
    found: dict[frozenset, Subgroup] = {}
    for x in sorted(A.members):
        s = closure(pres, [G.element(x)])
        found.setdefault(s.members, s)
    frontier = list(found.values())
    while frontier:
        new = []
        current = list(found.values())
        for s in frontier:
            for t in current:
                if s.members <= t.members or t.members <= s.members:
                    continue
                gens = list(s.generators) + list(t.generators)
                j = closure(pres, gens)
                if j.members not in found:
                    found[j.members] = j
                    new.append(j)
        frontier = new
    return sorted(found.values(), key=lambda s: (s.order, min(s.members - {0}, default=0)))


def _is_cyclic_quotient(pres: PcPresentation, A: Subgroup, N: Subgroup) -> bool:
    # A/N is cyclic iff exp(A/N) = |A/N|
    G = model(pres)
    index = A.order // N.order
    nmask = N.mask()
    cur = np.array(sorted(A.members), dtype=np.int64)
    e = 1
    while not nmask[cur].all():
        cur = G.power(cur, pres.p)
        e *= pres.p
    return e == index


def cod_vz_general(pres: PcPresentation, check: bool = True) -> CodegreeReport:
    """cod_lin together with |G:Z|^(1/2) |Z:N| over N < Z with Z/N cyclic and G' not in N."""
    if check and not is_vz(pres):
        raise FormulaError("group is not VZ")
    G = model(pres)
    Z, D = center(pres), derived_subgroup(pres)
    root = _isqrt_exact(G.order // Z.order)
    lin = cod_lin(pres)
    nl = {}
    for N in subgroups_of_abelian(pres, Z):
        if N.order == Z.order or D.members <= N.members:
            continue
        if _is_cyclic_quotient(pres, Z, N):
            c = root * (Z.order // N.order)
            nl.setdefault(c, N.order)
    prov = list(lin.provenance) + [Provenance(root, ko, c, 0, f"nonlinear, |ker| = {ko}")
                                   for c, ko in sorted(nl.items())]
    return _report(pres.p, pres.order, "vz_general", set(lin.cod) | set(nl), prov)


def _vz_case_name(pres: PcPresentation) -> tuple[str, dict]:
    p = pres.p
    Z, D = center(pres), derived_subgroup(pres)
    ztype = abelian_type(pres, Z)
    dz, dd = len(ztype), generator_count(pres, D)
    if dz == 1:
        return "i", {"ztype": ztype}
    if all(l == 1 for l in ztype):
        return "ii", {"ztype": ztype}
    if dd == dz:
        return "iii", {"ztype": ztype}
    if dd < dz == 2:
        l1, l2 = ztype
        G = model(pres)
        zs = np.array(sorted(Z.members), dtype=np.int64)
        big = zs[G.element_orders[zs] > p**l2]
        case_two = all(D.members <= closure(pres, [G.element(int(z))]).members for z in big)
        return ("iv.II" if case_two else "iv.I"), {"ztype": ztype}
    raise NoCaseApplies(f"d(G') = {dd} < d(Z) = {dz} >= 3: no case formula, use the general algorithm")


def cod_vz_case(pres: PcPresentation, check: bool = True) -> CodegreeReport:
    """The case formulas for VZ groups: cyclic center, elementary abelian center,
    d(G') = d(Z), or d(G') < d(Z) = 2 (two sub-cases)."""
    if check and not is_vz(pres):
        raise FormulaError("group is not VZ")
    p = pres.p
    G = model(pres)
    Z = center(pres)
    case, info = _vz_case_name(pres)
    ztype = info["ztype"]
    root = _isqrt_exact(G.order // Z.order)
    lin = set(cod_lin(pres).cod)
    if case == "i":
        nl = {_isqrt_exact(G.order * Z.order)}
    elif case == "ii":
        nl = {p * root}
    elif case == "iii":
        nl = {p**l * root for l in ztype}
    elif case == "iv.I":
        l1, l2 = ztype
        nl = {p**j * root for j in range(l2, l1 + 1)}
    else:
        nl = {p ** ztype[0] * root}
    prov = [Provenance(root, 0, c, 0, f"nonlinear, case {case}") for c in sorted(nl)]
    return _report(p, pres.order, "vz_case", lin | nl, prov, case=case)


def cod_extraspecial(p: int, order: int) -> CodegreeReport:
    """{1, p, (p |G|)^(1/2)} for |G| = p^(1+2n)."""
    k = _log_p(order, p) if order > 1 else 0
    if k < 3 or k % 2 == 0:
        raise FormulaError(f"order {order} is not p^(1+2n) with n >= 1")
    top = _isqrt_exact(p * order)
    return _report(p, order, "extraspecial", [1, p, top])


# Camina groups

@dataclass(frozen=True)
class CaminaProfile:
    is_camina: bool
    nilpotency_class: int = 0
    n: int = 0


def camina_profile(pres: PcPresentation) -> CaminaProfile:
    """Camina test: Cl(g) = gG' for every g outside G'.  Abelian groups report False."""
    if is_abelian(pres):
        return CaminaProfile(False)
    D = derived_subgroup(pres)
    if not _classes_are_cosets(pres, D, outside=D):
        return CaminaProfile(False)
    cls = nilpotency_class(pres)
    n = 0
    if cls == 3:
        n = _log_p(pres.order // D.order, pres.p) // 2
    return CaminaProfile(True, cls, n)


def cod_camina(profile: CaminaProfile, p: int, order: int, derived_order: int,
               center_order: int) -> CodegreeReport:
    """Class 2: {1, p, p |G/Z|^(1/2)}; class 3 adds p |G/G'|^(1/2)."""
    if not profile.is_camina:
        raise FormulaError("group is not Camina")
    over_z = _isqrt_exact(order // center_order)
    if profile.nilpotency_class == 2:
        return _report(p, order, "camina", [1, p, p * over_z], case="class 2")
    if profile.nilpotency_class == 3:
        over_d = _isqrt_exact(order // derived_order)
        return _report(p, order, "camina", [1, p, p * over_d, p * over_z], case="class 3")
    raise FormulaError(f"Camina p-groups have class 2 or 3, got {profile.nilpotency_class}")


def camina_class3_symbolic(p: int, n: int) -> CodegreeReport:
    """Class-3 Camina formula from the size data |G/G'| = p^(2n), |G'/Z| = p^n, |Z| = p.

    Only the quotient sizes matter, so |Z| is fixed to p for the report.
    """
    if n % 2:
        raise FormulaError("class-3 Camina p-groups have n even")
    order = p ** (3 * n + 1)
    profile = CaminaProfile(True, 3, n)
    return cod_camina(profile, p, order, derived_order=p ** (n + 1), center_order=p)


# dispatch and table predictions

def cod_formula(pres: PcPresentation) -> CodegreeReport | None:
    """The first closed form whose hypothesis holds, or None when none applies."""
    if pres.n == 0:
        return _report(pres.p, 1, "abelian", [1])
    if is_abelian(pres):
        return cod_abelian(pres.p, abelian_type(pres, center(pres)))
    if is_vz(pres):
        try:
            return cod_vz_case(pres, check=False)
        except NoCaseApplies:
            return cod_vz_general(pres, check=False)
    prof = camina_profile(pres)
    if prof.is_camina:
        return cod_camina(prof, pres.p, pres.order, derived_subgroup(pres).order, center(pres).order)
    return None


def predict_from_paper(gid: GroupId) -> CodegreeReport | None:
    """The published cod(G) for a catalog id, or None when the tables do not cover it."""
    p = gid.p
    fam = gid.family
    if fam == "abelian":
        return cod_abelian(p, gid.partition)
    if fam == "user_json":
        return None
    if fam in ("heisenberg", "extraspecial_exp_p", "extraspecial_exp_p2"):
        rank = 1 if fam == "heisenberg" else gid.rank
        rep = cod_extraspecial(p, p ** (1 + 2 * rank))
        return _report(p, rep.order, "table", rep.cod)
    if p == 3:
        return None
    row = _row_for(fam)
    return _report(p, _family_order(fam, p), "table", [p**e for e in row.cod_exponents],
                   case=f"{row.table}: {row.name}")


def _row_for(family: str) -> PaperRow:
    return next(r for r in paper_rows() if r.family == family and r.primes == "p>3")


def _family_order(fam: str, p: int) -> int:
    return p**4 if fam in ("phi2_31", "phi2_211b") else p**5


def summary_envelope(p: int, order: int) -> list[frozenset[int]] | None:
    """Admissible cod(G) sets for non-abelian groups of order p^3, p^4, p^5."""
    k = _log_p(order, p)
    lists = {
        3: [(0, 1, 2)],
        4: [(0, 1, 2), (0, 1, 3), (0, 1, 2, 3)],
        5: [(0, 1, 2), (0, 1, 3), (0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 2, 3, 4)],
    }
    if k not in lists:
        return None
    return [frozenset(p**e for e in es) for es in lists[k]]
