"""Power-commutator presentations of finite p-groups and collection.

Every generator has relative order p.  Relations are

    g_i^p = w_i          (w_i a word in generators with index > i)
    [g_j, g_i] = w_ji    (j > i, w_ji a word in generators with index > j)

with the commutator convention [x, y] = x^-1 y^-1 x y, so that
g_j g_i = g_i g_j [g_j, g_i].  Elements are exponent vectors
(e_0, ..., e_{n-1}) with 0 <= e_k < p, standing for g_0^e_0 ... g_{n-1}^e_{n-1}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

GroupElement = tuple[int, ...]


class PresentationError(ValueError):
    """Malformed or inconsistent presentation."""


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class PcPresentation:
    p: int
    n: int
    power_rhs: tuple[GroupElement, ...]
    comm_rhs: tuple[tuple[tuple[int, int], GroupElement], ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        p, n = self.p, self.n
        if not _is_prime(p) or p == 2:
            raise PresentationError(f"p must be an odd prime, got {p}")
        if n < 0:
            raise PresentationError("negative generator count")
        if len(self.power_rhs) != n:
            raise PresentationError("need one power relation per generator")
        for i, v in enumerate(self.power_rhs):
            self._check_vector(v, f"power relation of g{i}")
            if any(v[: i + 1]):
                raise PresentationError(f"g{i}^p may only involve generators after g{i}")
        seen = set()
        for (j, i), v in self.comm_rhs:
            if not (0 <= i < j < n):
                raise PresentationError(f"commutator key ({j},{i}) needs n > j > i >= 0")
            if (j, i) in seen:
                raise PresentationError(f"duplicate commutator ({j},{i})")
            seen.add((j, i))
            self._check_vector(v, f"[g{j}, g{i}]")
            if any(v[: j + 1]):
                raise PresentationError(f"[g{j}, g{i}] may only involve generators after g{j}")

    def _check_vector(self, v: Sequence[int], what: str) -> None:
        if len(v) != self.n:
            raise PresentationError(f"{what}: expected {self.n} exponents, got {len(v)}")
        if any(not isinstance(e, int) or not 0 <= e < self.p for e in v):
            raise PresentationError(f"{what}: exponents must be integers in [0, {self.p})")

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def identity(self) -> GroupElement:
        return (0,) * self.n

    def generator(self, i: int) -> GroupElement:
        if not 0 <= i < self.n:
            raise IndexError(f"generator index {i} out of range for n={self.n}")
        return tuple(int(k == i) for k in range(self.n))

    def commutator_rhs(self, j: int, i: int) -> GroupElement:
        for key, v in self.comm_rhs:
            if key == (j, i):
                return v
        return self.identity

    # JSON exchange format: {"p", "n", "powers": {"i": [...]}, "commutators": {"j,i": [...]}}

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "powers": {str(i): list(v) for i, v in enumerate(self.power_rhs) if any(v)},
            "commutators": {f"{j},{i}": list(v) for (j, i), v in sorted(self.comm_rhs) if any(v)},
        }

    @classmethod
    def from_dict(cls, data: Mapping, name: str = "") -> "PcPresentation":
        try:
            p, n = data["p"], data["n"]
        except KeyError as exc:
            raise PresentationError(f"missing field {exc}") from None
        if not isinstance(p, int) or not isinstance(n, int):
            raise PresentationError("p and n must be integers")
        powers = [(0,) * n for _ in range(n)]
        for key, v in data.get("powers", {}).items():
            i = int(key)
            if not 0 <= i < n:
                raise PresentationError(f"power key {key} out of range")
            powers[i] = tuple(v)
        comms = []
        for key, v in data.get("commutators", {}).items():
            try:
                j, i = (int(s) for s in key.split(","))
            except ValueError:
                raise PresentationError(f"bad commutator key {key!r}") from None
            comms.append(((j, i), tuple(v)))
        return cls(p, n, tuple(powers), tuple(sorted(comms)), name=name)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "PcPresentation":
        return cls.from_dict(json.loads(text), name=name)


def load_presentation(path: str | Path, check: bool = True) -> PcPresentation:
    path = Path(path)
    pres = PcPresentation.from_json(path.read_text(encoding="utf-8"), name=path.stem)
    if check:
        check_consistency(pres)
    return pres


def presentation(p: int, n: int, powers: Mapping[int, Sequence[int]] | None = None,
                 commutators: Mapping[tuple[int, int], Sequence[int]] | None = None,
                 name: str = "") -> PcPresentation:
    """Build a presentation from sparse relation dictionaries.

    Right-hand sides are given as exponent vectors; missing entries are trivial.
    """
    pw = [(0,) * n for _ in range(n)]
    for i, v in (powers or {}).items():
        pw[i] = tuple(v)
    cm = tuple(sorted(((j, i), tuple(v)) for (j, i), v in (commutators or {}).items()))
    return PcPresentation(p, n, tuple(pw), cm, name=name)


def _letters(v: Sequence[int]) -> list[int]:
    out = []
    for k, e in enumerate(v):
        out.extend([k] * e)
    return out


class _Rules:
    __slots__ = ("power", "conj")

    def __init__(self, pres: PcPresentation):
        n = pres.n
        self.power = [_letters(v) for v in pres.power_rhs]
        # conj[j][i]: letters of g_i^-1 g_j g_i = g_j [g_j, g_i]
        self.conj = [[[j] + _letters(pres.commutator_rhs(j, i)) if j > i else None
                      for i in range(n)] for j in range(n)]


_RULES: dict[PcPresentation, _Rules] = {}


def _rules(pres: PcPresentation) -> _Rules:
    r = _RULES.get(pres)
    if r is None:
        r = _RULES[pres] = _Rules(pres)
    return r


def _collect_letters(pres: PcPresentation, exps: list[int], letters: Iterable[int]) -> list[int]:
    """Right-multiply the normal form ``exps`` by a word of positive letters, in place."""
    p, n = pres.p, pres.n
    rules = _rules(pres)
    stack = list(letters)
    stack.reverse()
    while stack:
        i = stack.pop()
        pending: list[int] = []
        for j in range(i + 1, n):
            e = exps[j]
            if e:
                pending.extend(rules.conj[j][i] * e)
                exps[j] = 0
        if pending:
            pending.reverse()
            stack.extend(pending)
        exps[i] += 1
        if exps[i] == p:
            exps[i] = 0
            stack.extend(reversed(rules.power[i]))
    return exps


def _check_element(pres: PcPresentation, x: Sequence[int]) -> None:
    if len(x) != pres.n or any(not 0 <= e < pres.p for e in x):
        raise ValueError(f"{tuple(x)} is not a normal form for this presentation")


def multiply(pres: PcPresentation, x: GroupElement, y: GroupElement) -> GroupElement:
    _check_element(pres, x)
    _check_element(pres, y)
    return tuple(_collect_letters(pres, list(x), _letters(y)))


def power(pres: PcPresentation, x: GroupElement, m: int) -> GroupElement:
    if m < 0:
        return power(pres, inverse(pres, x), -m)
    result = pres.identity
    base = tuple(x)
    while m:
        if m & 1:
            result = multiply(pres, result, base)
        m >>= 1
        if m:
            base = multiply(pres, base, base)
    return result


def order_of(pres: PcPresentation, x: GroupElement) -> int:
    """Least m >= 1 with x^m = 1; always a power of p."""
    _check_element(pres, x)
    o, y = 1, tuple(x)
    while any(y):
        y = power(pres, y, pres.p)
        o *= pres.p
    return o


def inverse(pres: PcPresentation, x: GroupElement) -> GroupElement:
    return power(pres, x, order_of(pres, x) - 1)


def commutator(pres: PcPresentation, x: GroupElement, y: GroupElement) -> GroupElement:
    """[x, y] = x^-1 y^-1 x y."""
    xi, yi = inverse(pres, x), inverse(pres, y)
    return multiply(pres, multiply(pres, xi, yi), multiply(pres, x, y))


def collect(pres: PcPresentation, word: Iterable[tuple[int, int]]) -> GroupElement:
    """Normal form of a word given as (generator index, integer exponent) pairs."""
    result = pres.identity
    for i, m in word:
        if not 0 <= i < pres.n:
            raise IndexError(f"generator index {i} out of range for n={pres.n}")
        result = multiply(pres, result, power(pres, pres.generator(i), m))
    return result


def consistency_failures(pres: PcPresentation) -> list[str]:
    """Run the standard overlap tests; an empty list means the presentation is consistent.

    For a consistent presentation every word has a single normal form, so the
    two bracketings of each overlap must collect to the same vector.
    """
    n, p = pres.n, pres.p
    g = [pres.generator(i) for i in range(n)]
    gp = [pres.power_rhs[i] for i in range(n)]
    bad = []

    def mul(a, b):
        return tuple(_collect_letters(pres, list(a), _letters(b)))

    def pw(a, m):
        r = pres.identity
        for _ in range(m):
            r = mul(r, a)
        return r

    for k in range(n):
        for j in range(k):
            for i in range(j):
                if mul(mul(g[k], g[j]), g[i]) != mul(g[k], mul(g[j], g[i])):
                    bad.append(f"(g{k} g{j}) g{i}")
    for j in range(n):
        for i in range(j):
            # g_j^p g_i == g_j^(p-1) (g_j g_i)
            if mul(gp[j], g[i]) != mul(pw(g[j], p - 1), mul(g[j], g[i])):
                bad.append(f"g{j}^p g{i}")
            # g_j g_i^p == (g_j g_i) g_i^(p-1)
            if mul(g[j], gp[i]) != mul(mul(g[j], g[i]), pw(g[i], p - 1)):
                bad.append(f"g{j} g{i}^p")
    for i in range(n):
        if mul(gp[i], g[i]) != mul(g[i], gp[i]):
            bad.append(f"g{i}^p g{i}")
    return bad


def check_consistency(pres: PcPresentation) -> None:
    bad = consistency_failures(pres)
    if bad:
        raise PresentationError(
            f"inconsistent presentation {pres.name or ''}: overlaps {', '.join(bad[:5])} disagree")
