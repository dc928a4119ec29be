"""Enumerative structure of a pc-presented p-group.

Elements are indexed 0 .. p^n - 1 by reading the exponent vector as a base-p
numeral (g_0 most significant), so index 0 is the identity.  The group is held
as the right-multiplication permutations of the generators; every product,
conjugate and commutator is evaluated vectorised over numpy index arrays.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .pc import GroupElement, PcPresentation, _collect_letters, check_consistency

DEFAULT_ORDER_GUARD = 20000


class OrderGuardError(RuntimeError):
    """The group is too large for the enumerative algorithms."""


def order_guard() -> int:
    return int(os.environ.get("CODEG_ORDER_GUARD", DEFAULT_ORDER_GUARD))


def check_guard(pres: PcPresentation, guard: int | None = None) -> None:
    limit = order_guard() if guard is None else guard
    if pres.order > limit:
        raise OrderGuardError(f"|G| = {pres.order} exceeds the order guard {limit}")


class PcGroup:
    """Explicit model of the group defined by a consistent presentation."""

    def __init__(self, pres: PcPresentation, guard: int | None = None):
        check_guard(pres, guard)
        check_consistency(pres)
        self.pres = pres
        self.p, self.n, self.order = pres.p, pres.n, pres.order
        N, n, p = self.order, self.n, self.p
        idx = np.arange(N, dtype=np.int64)
        self.exps = np.stack([(idx // p ** (n - 1 - k)) % p for k in range(n)], axis=1) if n else \
            np.zeros((1, 0), dtype=np.int64)
        self.radix = np.array([p ** (n - 1 - k) for k in range(n)], dtype=np.int64)

        right = np.empty((n, N), dtype=np.int64)
        for x in range(N):
            ex = [int(e) for e in self.exps[x]]
            for i in range(n):
                right[i, x] = self.index(_collect_letters(pres, list(ex), [i]))
        self.right = right
        self.right_inv = np.empty_like(right)
        for i in range(n):
            self.right_inv[i, right[i]] = idx
        self.inv = self.mul_letters_inverse(np.zeros(N, dtype=np.int64), idx)
        # left multiplication g_i * x, and conjugation x -> g_i^-1 x g_i
        self.left = np.stack([self.mul(np.full(N, self.gen_index(i)), idx) for i in range(n)]) \
            if n else np.empty((0, N), dtype=np.int64)
        self.conj = np.empty_like(right)
        for i in range(n):
            left_inv = np.empty(N, dtype=np.int64)
            left_inv[self.left[i]] = idx
            self.conj[i] = right[i][left_inv]

    # indexing

    def index(self, x: Sequence[int]) -> int:
        return int(np.dot(np.asarray(x, dtype=np.int64), self.radix)) if self.n else 0

    def element(self, k: int) -> GroupElement:
        return tuple(int(e) for e in self.exps[k])

    def gen_index(self, i: int) -> int:
        return int(self.radix[i])

    # vectorised arithmetic on index arrays

    def mul(self, a, b) -> np.ndarray:
        """Elementwise product a[t] * b[t] (broadcast scalars)."""
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        cur = a.copy()
        eb = self.exps[b]
        for i in range(self.n):
            col = eb[..., i]
            for t in range(self.p - 1):
                m = col > t
                if not m.any():
                    break
                cur[m] = self.right[i][cur[m]]
        return cur

    def mul_letters_inverse(self, a, b) -> np.ndarray:
        """Elementwise a[t] * b[t]^-1."""
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        cur = a.copy()
        eb = self.exps[b]
        for i in reversed(range(self.n)):
            col = eb[..., i]
            for t in range(self.p - 1):
                m = col > t
                if not m.any():
                    break
                cur[m] = self.right_inv[i][cur[m]]
        return cur

    def right_perm(self, y: int) -> np.ndarray:
        """Permutation x -> x * y."""
        return self.mul(np.arange(self.order), y)

    def power(self, a, m: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        result = np.zeros_like(a)
        base = a.copy()
        while m:
            if m & 1:
                result = self.mul(result, base)
            m >>= 1
            if m:
                base = self.mul(base, base)
        return result

    def commutator(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        return self.mul(self.mul(self.inv[a], self.inv[b]), self.mul(a, b))

    def conjugate(self, a, g: int) -> np.ndarray:
        """g^-1 a g."""
        return self.mul(self.mul(self.inv[g], a), g)

    @functools.cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        while True:
            alive = cur != 0
            if not alive.any():
                return orders
            orders[alive] *= self.p
            cur = self.power(cur, self.p)

    @functools.cached_property
    def exponent(self) -> int:
        return int(self.element_orders.max())

    # subgroups

    def closure_mask(self, gens: Iterable[int]) -> np.ndarray:
        gens = sorted({int(g) for g in gens} - {0})
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        perms = [self.right_perm(g) for g in gens]
        while frontier.size:
            new = np.unique(np.concatenate([perm[frontier] for perm in perms])) if perms else frontier[:0]
            new = new[~mask[new]]
            mask[new] = True
            frontier = new
        return mask

    def normal_closure_mask(self, gens: Iterable[int]) -> np.ndarray:
        gens = {int(g) for g in gens}
        while True:
            mask = self.closure_mask(gens)
            members = np.flatnonzero(mask)
            outside = set()
            for i in range(self.n):
                img = self.conj[i][members]
                missing = img[~mask[img]]
                if missing.size:
                    outside.add(int(missing[0]))
            if not outside:
                return mask
            gens |= outside

    @functools.cached_property
    def conjugacy_labels(self) -> tuple[np.ndarray, int]:
        N = self.order
        if self.n == 0:
            return np.zeros(1, dtype=np.int64), 1
        rows = np.tile(np.arange(N), self.n)
        cols = self.conj.reshape(-1)
        graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(N, N))
        k, labels = connected_components(graph, directed=True, connection="weak")
        return labels, k

    @functools.cached_property
    def center_mask(self) -> np.ndarray:
        idx = np.arange(self.order)
        mask = np.ones(self.order, dtype=bool)
        for i in range(self.n):
            mask &= self.conj[i] == idx
        return mask


@functools.lru_cache(maxsize=64)
def _model(pres: PcPresentation) -> PcGroup:
    return PcGroup(pres, guard=pres.order)


def model(pres: PcPresentation, guard: int | None = None) -> PcGroup:
    """Cached explicit model of ``pres`` (raises OrderGuardError above the guard)."""
    limit = order_guard() if guard is None else guard
    check_guard(pres, limit)
    return _model(pres)


@dataclass(frozen=True)
class Subgroup:
    pres: PcPresentation
    generators: tuple[GroupElement, ...]
    members: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        if isinstance(x, tuple):
            x = model(self.pres).index(x)
        return int(x) in self.members

    def mask(self) -> np.ndarray:
        m = np.zeros(self.pres.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def elements(self) -> list[GroupElement]:
        G = model(self.pres)
        return [G.element(k) for k in sorted(self.members)]

    def __le__(self, other: "Subgroup") -> bool:
        return self.members <= other.members

    def __lt__(self, other: "Subgroup") -> bool:
        return self.members < other.members


def _from_mask(G: PcGroup, mask: np.ndarray, gens: Iterable[int] = ()) -> Subgroup:
    return Subgroup(G.pres, tuple(G.element(g) for g in gens), frozenset(np.flatnonzero(mask).tolist()))


def _indices(G: PcGroup, elems: Iterable) -> list[int]:
    return [G.index(x) if isinstance(x, (tuple, list)) else int(x) for x in elems]


def enumerate_elements(pres: PcPresentation) -> list[GroupElement]:
    G = model(pres)
    return [G.element(k) for k in range(G.order)]


def closure(pres: PcPresentation, gens: Iterable) -> Subgroup:
    G = model(pres)
    ix = _indices(G, gens)
    return _from_mask(G, G.closure_mask(ix), ix)


def normal_closure(pres: PcPresentation, gens: Iterable) -> Subgroup:
    G = model(pres)
    ix = _indices(G, gens)
    return _from_mask(G, G.normal_closure_mask(ix), ix)


def whole_group(pres: PcPresentation) -> Subgroup:
    G = model(pres)
    return _from_mask(G, np.ones(G.order, dtype=bool), [G.gen_index(i) for i in range(G.n)])


def trivial_subgroup(pres: PcPresentation) -> Subgroup:
    return Subgroup(pres, (), frozenset({0}))


def center(pres: PcPresentation) -> Subgroup:
    G = model(pres)
    return _from_mask(G, G.center_mask, minimal_generators(G, G.center_mask))


def derived_subgroup(pres: PcPresentation) -> Subgroup:
    return lower_central_series(pres)[1] if pres.n else trivial_subgroup(pres)


def is_normal(pres: PcPresentation, sub: Subgroup) -> bool:
    G = model(pres)
    mask = sub.mask()
    members = np.flatnonzero(mask)
    return all(mask[G.conj[i][members]].all() for i in range(G.n))


@functools.lru_cache(maxsize=64)
def _lcs(pres: PcPresentation) -> tuple[Subgroup, ...]:
    G = model(pres)
    series = [whole_group(pres)]
    gens = [G.gen_index(i) for i in range(G.n)]
    current = gens
    while True:
        comms = set()
        for h in current:
            comms.update(int(c) for c in G.commutator(np.full(G.n, h), np.array(gens)))
        mask = G.normal_closure_mask(comms)
        nxt = _from_mask(G, mask, minimal_generators(G, mask))
        if nxt.members == series[-1].members:
            # stalls only for a non-nilpotent input, impossible for p-groups
            raise RuntimeError("lower central series did not terminate")
        series.append(nxt)
        if nxt.order == 1:
            return tuple(series)
        current = sorted(np.flatnonzero(mask).tolist())


def lower_central_series(pres: PcPresentation) -> list[Subgroup]:
    """G = gamma_1 > gamma_2 = G' > ... > 1."""
    if pres.n == 0:
        return [trivial_subgroup(pres)]
    return list(_lcs(pres))


def nilpotency_class(pres: PcPresentation) -> int:
    return len(lower_central_series(pres)) - 1


def is_abelian(pres: PcPresentation) -> bool:
    return bool(model(pres).center_mask.all())


def minimal_generators(G: PcGroup, mask: np.ndarray) -> list[int]:
    """A generating set of the subgroup ``mask`` of minimal size d(H).

    Each pick lies outside the span of Phi(H) and the earlier picks, so the
    span grows by a factor p per pick and the walk stops after
    log_p |H / Phi(H)| = d(H) steps.  Elements of larger order go first.
    """
    members = np.flatnonzero(mask)
    if members.size <= 1:
        return []
    frattini = frattini_mask(G, mask)
    phi_gens = _gens_of(G, frattini)
    orders = G.element_orders[members]
    ranked = members[np.lexsort((members, -orders))]
    gens: list[int] = []
    span = frattini.copy()
    for x in ranked:
        if not span[x]:
            gens.append(int(x))
            span = G.closure_mask(gens + phi_gens)
            if span[members].all():
                break
    return gens


def _gens_of(G: PcGroup, mask: np.ndarray) -> list[int]:
    # small generating set of a subgroup, not necessarily minimal
    gens: list[int] = []
    span = np.zeros(G.order, dtype=bool)
    span[0] = True
    for x in np.flatnonzero(mask):
        if not span[x]:
            gens.append(int(x))
            span = G.closure_mask(gens)
    return gens


def frattini_mask(G: PcGroup, mask: np.ndarray) -> np.ndarray:
    """Phi(H) = H^p [H, H] for a p-group H."""
    members = np.flatnonzero(mask)
    gens = _gens_of(G, mask)
    powers = {int(x) for x in G.power(members, G.p)}
    comms = set()
    for h in gens:
        comms.update(int(c) for c in G.commutator(np.full(len(gens), h), np.array(gens, dtype=np.int64)))
    return G.closure_mask((powers | comms) - {0})


def generator_count(pres: PcPresentation, sub: Subgroup) -> int:
    """d(H): minimal number of generators."""
    G = model(pres)
    mask = sub.mask()
    phi = frattini_mask(G, mask)
    ratio = sub.order // int(phi.sum())
    d = 0
    while ratio > 1:
        ratio //= pres.p
        d += 1
    return d


def _log_p(m: int, p: int) -> int:
    k = 0
    while m > 1:
        if m % p:
            raise ValueError(f"{m} is not a power of {p}")
        m //= p
        k += 1
    return k


def abelian_type(pres: PcPresentation, sub: Subgroup, modulo: Subgroup | None = None) -> list[int]:
    """Partition [l1 >= l2 >= ...] of the abelian section sub/modulo.

    Read off from the counts c_k = |{x : x^(p^k) = 1}|: log_p(c_k / c_{k-1})
    is the number of cyclic factors of order at least p^k.
    """
    G = model(pres)
    members = np.array(sorted(sub.members), dtype=np.int64)
    kmask = np.zeros(G.order, dtype=bool)
    if modulo is None:
        kmask[0] = True
        kord = 1
    else:
        if not modulo.members <= sub.members:
            raise ValueError("modulo must be a subgroup of sub")
        kmask[list(modulo.members)] = True
        kord = modulo.order
    # abelian section: every commutator of members lands in the kernel
    gens = _gens_of(G, sub.mask())
    for h in gens:
        if not kmask[G.commutator(np.full(len(gens), h), np.array(gens, dtype=np.int64))].all():
            raise ValueError("section is not abelian")
    if modulo is not None and not all(kmask[G.conjugate(np.array(sorted(modulo.members)), g)].all()
                                      for g in gens):
        raise ValueError("modulo is not normal in sub")
    counts = [1]
    cur = members.copy()
    total = len(members) // kord
    while counts[-1] < total:
        cur = G.power(cur, pres.p)
        counts.append(int(kmask[cur].sum()) // kord)
    parts_at_least = [_log_p(counts[k] // counts[k - 1], pres.p) for k in range(1, len(counts))]
    partition = []
    for k, m in enumerate(parts_at_least, start=1):
        nxt = parts_at_least[k] if k < len(parts_at_least) else 0
        partition.extend([k] * (m - nxt))
    return sorted(partition, reverse=True)


def quotient_exponent(pres: PcPresentation, normal: Subgroup) -> int:
    """exp(G/N): the largest over g of min{p^k : g^(p^k) in N}."""
    if not is_normal(pres, normal):
        raise ValueError("subgroup is not normal")
    G = model(pres)
    nmask = normal.mask()
    cur = np.arange(G.order)
    e = 1
    while not nmask[cur].all():
        cur = G.power(cur, pres.p)
        e *= pres.p
    return e


def subgroup_exponent(pres: PcPresentation, sub: Subgroup) -> int:
    G = model(pres)
    return int(G.element_orders[list(sub.members)].max())


@dataclass(frozen=True)
class StructuralProfile:
    order: int
    nilpotency_class: int
    center_type: tuple[int, ...]
    derived_type: tuple[int, ...]
    exp_G: int
    exp_G_over_Gprime: int
    d_center: int
    d_derived: int
    is_abelian: bool
    is_vz: bool | None = None
    is_extraspecial: bool = False
    is_camina: bool | None = None


def structural_profile(pres: PcPresentation, with_characters: bool = False) -> StructuralProfile:
    """Structural invariants; VZ and Camina flags need the formulas module and
    are filled in only when ``with_characters`` is set."""
    G = model(pres)
    Z = center(pres)
    D = derived_subgroup(pres)
    abelian = Z.order == G.order
    zt = tuple(abelian_type(pres, Z))
    # derived_type is empty when G' is non-abelian
    dt = tuple(abelian_type(pres, D)) if _is_abelian_sub(G, D) else ()
    extraspecial = (not abelian and Z.members == D.members and Z.order == pres.p
                    and quotient_exponent(pres, Z) == pres.p)
    vz = camina = None
    if with_characters:
        from . import formulas
        vz = formulas.is_vz(pres, method="characters")
        camina = formulas.camina_profile(pres).is_camina
    return StructuralProfile(
        order=G.order,
        nilpotency_class=nilpotency_class(pres),
        center_type=zt,
        derived_type=dt,
        exp_G=G.exponent,
        exp_G_over_Gprime=quotient_exponent(pres, D),
        d_center=generator_count(pres, Z),
        d_derived=generator_count(pres, D),
        is_abelian=abelian,
        is_vz=vz,
        is_extraspecial=extraspecial,
        is_camina=camina,
    )


def _is_abelian_sub(G: PcGroup, sub: Subgroup) -> bool:
    gens = _gens_of(G, sub.mask())
    g = np.array(gens, dtype=np.int64)
    return all((G.commutator(np.full(len(gens), h), g) == 0).all() for h in gens)
