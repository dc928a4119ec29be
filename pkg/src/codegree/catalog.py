"""Constructors for the groups with printed presentations, plus generic families.

Printed presentations are refined by hand so that every generator has
relative order p; the original relations are quoted in each docstring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .pc import PcPresentation, PresentationError, _is_prime, load_presentation, presentation

FAMILIES = (
    "abelian",
    "heisenberg",
    "extraspecial_exp_p",
    "extraspecial_exp_p2",
    "phi2_31",
    "phi2_211b",
    "phi3_2111c",
    "phi4_221a",
    "phi4_221c",
    "phi4_221f0",
    "user_json",
)

PHI_FAMILIES = ("phi2_31", "phi2_211b", "phi3_2111c", "phi4_221a", "phi4_221c", "phi4_221f0")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class GroupId:
    family: str
    p: int
    partition: tuple[int, ...] = ()
    rank: int = 1
    path: str = ""
    allow_p3: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise CatalogError(f"unknown family {self.family!r}")
        if self.family != "user_json" and (self.p == 2 or not _is_prime(self.p)):
            raise CatalogError(f"p must be an odd prime, got {self.p}")
        if self.family == "abelian":
            part = self.partition
            if any(l <= 0 for l in part) or list(part) != sorted(part, reverse=True):
                raise CatalogError(f"partition must be non-increasing positive integers: {part}")
        if self.family.startswith("extraspecial") and self.rank < 1:
            raise CatalogError("extraspecial rank must be >= 1")

    @property
    def label(self) -> str:
        if self.family == "abelian":
            return "abelian:" + ",".join(map(str, self.partition))
        if self.family.startswith("extraspecial"):
            return f"{self.family}:{self.rank}"
        if self.family == "user_json":
            return f"user_json:{self.path}"
        return self.family

    @classmethod
    def parse(cls, text: str, p: int, allow_p3: bool = False) -> "GroupId":
        """Parse ``family[:args]``, e.g. ``abelian:2,1``, ``extraspecial_exp_p:2``, ``user_json:g.json``."""
        family, _, arg = text.partition(":")
        if family == "abelian":
            part = tuple(int(s) for s in arg.split(",") if s) if arg else ()
            return cls(family, p, partition=tuple(sorted(part, reverse=True)))
        if family.startswith("extraspecial"):
            return cls(family, p, rank=int(arg) if arg else 1)
        if family == "user_json":
            if not arg:
                raise CatalogError("user_json needs a path: user_json:<file>")
            return cls(family, p, path=arg)
        if arg:
            raise CatalogError(f"{family} takes no arguments")
        return cls(family, p, allow_p3=allow_p3)


def quadratic_nonresidue(p: int) -> int:
    """Smallest nu >= 2 that is not a square modulo the odd prime p."""
    if p == 2 or not _is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    squares = {x * x % p for x in range(1, p)}
    return next(v for v in range(2, p) if v not in squares)


def _vec(n: int, **entries: int) -> tuple[int, ...]:
    v = [0] * n
    for k, e in entries.items():
        v[int(k[1:])] = e
    return tuple(v)


def abelian(p: int, partition) -> PcPresentation:
    """Direct product of cyclic groups C_{p^l}, each refined into a chain of
    l generators g, g^p, g^{p^2}, ...; p·Σl generators overall."""
    part = sorted(partition, reverse=True)
    n = sum(part)
    powers = {}
    k = 0
    for l in part:
        for t in range(l - 1):
            powers[k + t] = _vec(n, **{f"g{k + t + 1}": 1})
        k += l
    return presentation(p, n, powers, name=f"abelian{tuple(part)}")


def heisenberg(p: int) -> PcPresentation:
    """<a, b, c | [b, a] = c, a^p = b^p = c^p = 1>, extraspecial of order p^3 and exponent p."""
    return presentation(p, 3, commutators={(1, 0): (0, 0, 1)}, name="heisenberg")


def extraspecial(p: int, rank: int, exponent_p2: bool = False) -> PcPresentation:
    """Extraspecial group of order p^(1+2 rank).

    Generators a_1, b_1, ..., a_r, b_r, c with [b_k, a_k] = c and c central.
    The exponent-p^2 type sets a_1^p = c instead of a_1^p = 1.
    """
    n = 2 * rank + 1
    c = _vec(n, **{f"g{n - 1}": 1})
    comms = {(2 * k + 1, 2 * k): c for k in range(rank)}
    powers = {0: c} if exponent_p2 else {}
    kind = "p2" if exponent_p2 else "p"
    return presentation(p, n, powers, comms, name=f"extraspecial_exp_{kind}({rank})")


def direct_product(a: PcPresentation, b: PcPresentation) -> PcPresentation:
    """A x B with the generators of A first; relations are copied and shifted."""
    if a.p != b.p:
        raise PresentationError("factors must share the prime")
    n = a.n + b.n
    powers = {i: v + (0,) * b.n for i, v in enumerate(a.power_rhs)}
    powers.update({a.n + i: (0,) * a.n + v for i, v in enumerate(b.power_rhs)})
    comms = {ji: v + (0,) * b.n for ji, v in a.comm_rhs}
    comms.update({(a.n + j, a.n + i): (0,) * a.n + v for (j, i), v in b.comm_rhs})
    return presentation(a.p, n, powers, comms, name=f"{a.name}x{b.name}")


def heisenberg_gf_p2(p: int, extend_center: bool = False) -> PcPresentation:
    """Heisenberg group over GF(p^2), written over GF(p); order p^6, Z = G' = C_p x C_p.

    GF(p^2) = GF(p)(i) with i^2 = nu, the least non-residue. Generators
    x = 1, i; y = 1, i; z = 1, i, with [y, x] = z the field product.
    ``extend_center`` adjoins w with w^p = z_1, so Z = C_{p^2} x C_p while
    G' stays C_p x C_p (order p^7).
    """
    nu = quadratic_nonresidue(p)
    n = 7 if extend_center else 6
    z1, z2 = f"g{n - 2}", f"g{n - 1}"
    comms = {(2, 0): _vec(n, **{z1: 1}), (2, 1): _vec(n, **{z2: 1}),
             (3, 0): _vec(n, **{z2: 1}), (3, 1): _vec(n, **{z1: nu})}
    powers = {4: _vec(n, **{z1: 1})} if extend_center else {}
    return presentation(p, n, powers, comms, name="heisenberg_gf_p2" + ("_ext" if extend_center else ""))


def phi2_31(p: int) -> PcPresentation:
    """phi_2(31) = <alpha, alpha_1, alpha_2 | [alpha_1, alpha] = alpha^{p^2} = alpha_2,
    alpha_1^p = alpha_2^p = 1>.

    Refined generators: g0 = alpha, g1 = alpha_1, g2 = alpha^p, g3 = alpha_2 = alpha^{p^2}.
    """
    return presentation(p, 4,
                        powers={0: (0, 0, 1, 0), 2: (0, 0, 0, 1)},
                        commutators={(1, 0): (0, 0, 0, 1)}, name="phi2_31")


def phi2_211b(p: int) -> PcPresentation:
    """phi_2(211)b = <alpha, alpha_1, alpha_2, gamma | [alpha_1, alpha] = gamma^p = alpha_2,
    alpha^p = alpha_1^p = alpha_2^p = 1>.

    Refined generators: g0 = alpha, g1 = alpha_1, g2 = gamma, g3 = alpha_2 = gamma^p.
    """
    return presentation(p, 4,
                        powers={2: (0, 0, 0, 1)},
                        commutators={(1, 0): (0, 0, 0, 1)}, name="phi2_211b")


def phi3_2111c(p: int) -> PcPresentation:
    """phi_3(2111)c = <alpha, alpha_1, alpha_2, alpha_3, gamma | [alpha_1, alpha] = alpha_2,
    [alpha_2, alpha] = gamma^p = alpha_3, alpha^p = alpha_i^p = 1 (i = 1, 2, 3)>.

    Refined generators: g0 = alpha, g1 = alpha_1, g2 = alpha_2, g3 = gamma, g4 = alpha_3.
    """
    return presentation(p, 5,
                        powers={3: (0, 0, 0, 0, 1)},
                        commutators={(1, 0): (0, 0, 1, 0, 0), (2, 0): (0, 0, 0, 0, 1)},
                        name="phi3_2111c")


def phi4_221a(p: int) -> PcPresentation:
    """phi_4(221)a = <alpha, alpha_1, alpha_2, beta_1, beta_2 | [alpha_1, alpha] = beta_1 = alpha_1^p,
    [alpha_2, alpha] = beta_2 = alpha^p, alpha_2^p = beta_1^p = beta_2^p = 1>.

    Generators g0..g4 = alpha, alpha_1, alpha_2, beta_1, beta_2.
    """
    return presentation(p, 5,
                        powers={0: (0, 0, 0, 0, 1), 1: (0, 0, 0, 1, 0)},
                        commutators={(1, 0): (0, 0, 0, 1, 0), (2, 0): (0, 0, 0, 0, 1)},
                        name="phi4_221a")


def phi4_221c(p: int) -> PcPresentation:
    """phi_4(221)c = <alpha, alpha_1, alpha_2, beta_1, beta_2 | [alpha_1, alpha] = beta_1 = alpha_1^p,
    [alpha_2, alpha] = beta_2 = alpha_2^p, alpha^p = beta_1^p = beta_2^p = 1>.

    Generators g0..g4 = alpha, alpha_1, alpha_2, beta_1, beta_2.
    """
    return presentation(p, 5,
                        powers={1: (0, 0, 0, 1, 0), 2: (0, 0, 0, 0, 1)},
                        commutators={(1, 0): (0, 0, 0, 1, 0), (2, 0): (0, 0, 0, 0, 1)},
                        name="phi4_221c")


def phi4_221f0(p: int) -> PcPresentation:
    """phi_4(221)f_0 = <alpha, alpha_1, alpha_2, beta_1, beta_2 | [alpha_1, alpha] = beta_1,
    [alpha_2, alpha] = beta_2 = alpha_1^p, alpha_2^p = beta_1^nu, alpha^p = beta_1^p = beta_2^p = 1>,
    nu the least quadratic non-residue mod p.

    Generators g0..g4 = alpha, alpha_1, alpha_2, beta_1, beta_2.
    """
    nu = quadratic_nonresidue(p)
    return presentation(p, 5,
                        powers={1: (0, 0, 0, 0, 1), 2: (0, 0, 0, nu, 0)},
                        commutators={(1, 0): (0, 0, 0, 1, 0), (2, 0): (0, 0, 0, 0, 1)},
                        name="phi4_221f0")


_PHI_BUILDERS = {
    "phi2_31": phi2_31,
    "phi2_211b": phi2_211b,
    "phi3_2111c": phi3_2111c,
    "phi4_221a": phi4_221a,
    "phi4_221c": phi4_221c,
    "phi4_221f0": phi4_221f0,
}


def build(gid: GroupId) -> PcPresentation:
    fam, p = gid.family, gid.p
    if fam == "abelian":
        return abelian(p, gid.partition)
    if fam == "heisenberg":
        return heisenberg(p)
    if fam == "extraspecial_exp_p":
        return extraspecial(p, gid.rank)
    if fam == "extraspecial_exp_p2":
        return extraspecial(p, gid.rank, exponent_p2=True)
    if fam == "user_json":
        try:
            pres = load_presentation(gid.path)
        except OSError as exc:
            raise CatalogError(f"cannot read {gid.path}: {exc}") from None
        except (PresentationError, ValueError) as exc:
            raise CatalogError(f"invalid presentation {gid.path}: {exc}") from None
        if gid.p and pres.p != gid.p:
            raise CatalogError(f"{gid.path} is a presentation at p={pres.p}, not p={gid.p}")
        return pres
    if p == 3 and not gid.allow_p3:
        raise CatalogError(f"{fam} is classified for p > 3; pass allow_p3 (--allow-p3 on the command line) to build it at p = 3")
    return _PHI_BUILDERS[fam](p)


def expected_order(gid: GroupId) -> int:
    p = gid.p
    if gid.family == "abelian":
        return p ** sum(gid.partition)
    if gid.family == "heisenberg":
        return p**3
    if gid.family.startswith("extraspecial"):
        return p ** (1 + 2 * gid.rank)
    if gid.family in ("phi2_31", "phi2_211b"):
        return p**4
    if gid.family in PHI_FAMILIES:
        return p**5
    raise CatalogError("order of a user presentation is only known after loading")


@dataclass(frozen=True)
class PaperRow:
    """One row of the published codegree tables.

    ``cod_exponents`` lists e with p^e in cod(G); ``family`` is the catalog
    template that constructs the group, or None when no presentation is printed.
    """

    name: str
    table: str
    cod_exponents: tuple[int, ...] | None
    family: str | None
    rank: int = 1
    primes: str = "p>3"
    note: str = ""

    @property
    def constructible(self) -> bool:
        return self.family is not None


def paper_rows() -> list[PaperRow]:
    text = resources.files("codegree").joinpath("data/paper_tables.json").read_text(encoding="utf-8")
    rows = []
    for r in json.loads(text)["rows"]:
        cod = r.get("cod_exponents")
        rows.append(PaperRow(name=r["name"], table=r["table"],
                             cod_exponents=tuple(cod) if cod is not None else None,
                             family=r.get("family"), rank=r.get("rank", 1),
                             primes=r.get("primes", "p>3"), note=r.get("note", "")))
    return rows


@dataclass(frozen=True)
class CatalogEntry:
    template: str
    description: str
    paper_row: str
    expected_cod: str
    constructible: bool = True


def _fmt_exponents(exps) -> str:
    def term(e):
        return "1" if e == 0 else "p" if e == 1 else f"p^{e}"
    return "{" + ", ".join(term(e) for e in exps) + "}"


_TEMPLATES = [
    CatalogEntry("abelian:<l1,l2,...>", "abelian C_{p^l1} x C_{p^l2} x ...",
                 "abelian corollary", "{p^i : 0 <= i <= l1}"),
    CatalogEntry("heisenberg", "extraspecial p^3 of exponent p",
                 "order p^3 theorem; Table 4 [27,3]", "{1, p, p^2}"),
    CatalogEntry("extraspecial_exp_p:<n>", "extraspecial p^(1+2n) of exponent p",
                 "extraspecial corollary; Table 2 phi_5(1^5) for n=2", "{1, p, p^(n+1)}"),
    CatalogEntry("extraspecial_exp_p2:<n>", "extraspecial p^(1+2n) of exponent p^2",
                 "extraspecial corollary; Table 2 phi_5(2111) for n=2", "{1, p, p^(n+1)}"),
]

_PHI_DESCRIPTIONS = {
    "phi2_31": ("phi_2(31), order p^4, Z cyclic of order p^2", "Table 1 phi_2(31)"),
    "phi2_211b": ("phi_2(211)b, order p^4, Z cyclic of order p^2", "Table 1 phi_2(211)b"),
    "phi3_2111c": ("phi_3(2111)c, order p^5, class 3, Z cyclic of order p^2", "Table 3 phi_3(2111)c"),
    "phi4_221a": ("phi_4(221)a, order p^5, G' = Z = C_p x C_p", "Table 3 phi_4(221)a"),
    "phi4_221c": ("phi_4(221)c, order p^5, G' = Z = C_p x C_p", "Table 3 phi_4(221)c"),
    "phi4_221f0": ("phi_4(221)f_0, order p^5, G' = Z = C_p x C_p", "Table 3 phi_4(221)f_0"),
}


def list_catalog() -> list[CatalogEntry]:
    """Templates, then constructible table groups, then documentation-only rows."""
    rows = paper_rows()
    out = list(_TEMPLATES)
    for fam, (desc, row) in _PHI_DESCRIPTIONS.items():
        exps = next(r.cod_exponents for r in rows if r.family == fam)
        out.append(CatalogEntry(fam, desc, row, _fmt_exponents(exps)))
    out.append(CatalogEntry("user_json:<path>", "presentation read from a JSON file",
                            "-", "computed only"))
    for r in rows:
        if not r.constructible:
            out.append(CatalogEntry(r.name, "no printed presentation (not_constructible)",
                                    r.table, _fmt_exponents(r.cod_exponents) if r.cod_exponents
                                    else "-", constructible=False))
    return out


def catalog_json() -> str:
    entries = [dict(e.__dict__) for e in list_catalog()]
    return json.dumps({"schema_version": 1, "entries": entries}, indent=2, sort_keys=True)


def catalog_markdown() -> str:
    lines = ["| template | description | table row | expected cod(G) | constructible |",
             "|---|---|---|---|---|"]
    for e in list_catalog():
        lines.append(f"| {e.template} | {e.description} | {e.paper_row} | {e.expected_cod} | "
                     f"{'yes' if e.constructible else 'not_constructible'} |")
    return "\n".join(lines) + "\n"


def catalog_ids(p: int, include_large: bool = True) -> list[GroupId]:
    """Concrete instances used by the property suites at prime p."""
    ids = [GroupId("heisenberg", p), GroupId("extraspecial_exp_p2", p, rank=1)]
    ids += [GroupId("abelian", p, partition=part) for part in ((1,), (2,), (1, 1), (2, 1), (1, 1, 1))]
    if include_large:
        ids += [GroupId("extraspecial_exp_p", p, rank=2), GroupId("extraspecial_exp_p2", p, rank=2)]
    if p > 3:
        ids += [GroupId(f, p) for f in ("phi2_31", "phi2_211b")]
        if include_large:
            ids += [GroupId(f, p) for f in ("phi3_2111c", "phi4_221a", "phi4_221c", "phi4_221f0")]
    return ids


def load_user(path: str | Path) -> PcPresentation:
    return build(GroupId("user_json", 0, path=str(path)))
