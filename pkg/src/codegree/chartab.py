"""Character tables of p-groups by the Burnside-Dixon-Schneider method.

Central characters are the common eigenvectors of the class matrices,
found over GF(ell) with ell = 1 (mod exp G) and ell > 2 sqrt|G|.  Values
are lifted exactly to multiplicity vectors over the exp(G)-th roots of
unity, so kernels and codegrees never rely on mod-ell equality.
"""

from __future__ import annotations

import functools
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg.blas import zherk

from . import ff
from .cyclotomic import CyclotomicValue, convolve
from .group import PcGroup, Subgroup, model
from .pc import GroupElement, PcPresentation

log = logging.getLogger(__name__)

MAX_SPLIT_RETRIES = 20


class SplittingError(RuntimeError):
    """Common eigenspaces could not be separated (retry with another seed)."""


class LiftError(RuntimeError):
    """A lifted multiplicity fell outside [0, degree]; indicates a bug."""


@dataclass(frozen=True)
class ConjugacyClasses:
    """Classes ordered by (size, smallest element index); class 0 is the identity.

    ``power_maps[j, m]`` is the class of rep_j^m for 0 <= m < exp(G).
    """

    pres: PcPresentation
    rep_index: tuple[int, ...]
    class_sizes: tuple[int, ...]
    labels: np.ndarray = field(repr=False, compare=False)
    power_maps: np.ndarray = field(repr=False, compare=False)
    exponent: int = 1

    @property
    def representatives(self) -> list[GroupElement]:
        G = model(self.pres)
        return [G.element(r) for r in self.rep_index]

    def __len__(self) -> int:
        return len(self.rep_index)

    def class_of(self, x) -> int:
        if isinstance(x, tuple):
            x = model(self.pres).index(x)
        return int(self.labels[x])

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.labels == i)

    def power_map(self, m: int) -> np.ndarray:
        return self.power_maps[:, m % self.exponent]

    @functools.cached_property
    def inverse_class(self) -> np.ndarray:
        return self.power_map(-1)


def conjugacy_classes(pres: PcPresentation) -> ConjugacyClasses:
    return _classes(pres)


@functools.lru_cache(maxsize=32)
def _classes(pres: PcPresentation) -> ConjugacyClasses:
    G = model(pres)
    raw, k = G.conjugacy_labels
    sizes = np.bincount(raw, minlength=k)
    first = np.full(k, G.order, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(G.order))
    order = sorted(range(k), key=lambda c: (sizes[c], first[c]))
    relabel = np.empty(k, dtype=np.int64)
    relabel[order] = np.arange(k)
    labels = relabel[raw]
    reps = first[order]
    e = G.exponent
    pm = np.empty((k, e), dtype=np.int64)
    cur = np.zeros(k, dtype=np.int64)
    for m in range(e):
        pm[:, m] = labels[cur]
        cur = G.mul(cur, reps)
    labels.setflags(write=False)
    pm.setflags(write=False)
    return ConjugacyClasses(pres, tuple(int(r) for r in reps), tuple(int(sizes[c]) for c in order),
                            labels, pm, e)


def class_matrix(classes: ConjugacyClasses, i: int) -> np.ndarray:
    """a[j, k] = #{(x, y) in C_i x C_j : x y = z_k} with z_k the k-th representative.

    Column sums are |C_i| (for each z_k and x in C_i, y = x^-1 z_k is unique).
    """
    G = model(classes.pres)
    k = len(classes)
    xs = classes.members(i)
    reps = np.array(classes.rep_index, dtype=np.int64)
    ys = G.mul(G.inv[xs][:, None], reps[None, :])
    js = classes.labels[ys]
    flat = js * k + np.arange(k)[None, :]
    return np.bincount(flat.ravel(), minlength=k * k).reshape(k, k)


@dataclass(frozen=True, eq=False)
class CharacterRow:
    """One irreducible character. ``mults[j, t]`` counts theta^t in chi(g_j)."""

    degree: int
    mults: np.ndarray
    kernel_classes: tuple[int, ...]
    kernel_order: int
    codegree: int

    @property
    def values(self) -> tuple[CyclotomicValue, ...]:
        e = self.mults.shape[1]
        return tuple(CyclotomicValue(e, tuple(row)) for row in self.mults.tolist())

    def kernel(self, classes: "ConjugacyClasses") -> Subgroup:
        mask = np.isin(classes.labels, self.kernel_classes)
        return Subgroup(classes.pres, (), frozenset(np.flatnonzero(mask).tolist()))


@dataclass(frozen=True)
class CharacterTable:
    classes: ConjugacyClasses
    rows: tuple[CharacterRow, ...]
    ell: int
    theta: int
    seed: int

    @property
    def order(self) -> int:
        return self.classes.pres.order

    @property
    def degrees(self) -> list[int]:
        return [r.degree for r in self.rows]

    def to_dict(self) -> dict:
        cl = self.classes
        G = model(cl.pres)
        return {
            "schema_version": 1,
            "p": cl.pres.p,
            "order": G.order,
            "classes": [{"representative": list(G.element(r)), "size": s}
                        for r, s in zip(cl.rep_index, cl.class_sizes)],
            "rows": [{"degree": r.degree,
                      "values": r.mults.tolist(),
                      "kernel_order": r.kernel_order,
                      "codegree": r.codegree} for r in self.rows],
            "metadata": {"ell": self.ell, "theta": self.theta,
                         "theta_rule": "smallest primitive root of ell raised to (ell-1)/exp(G)",
                         "root_order": cl.exponent, "seed": self.seed},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _Splitter:
    """Simultaneous eigenspace decomposition of the class matrices over GF(ell)."""

    def __init__(self, classes: ConjugacyClasses, ell: int, rng: np.random.Generator):
        self.classes = classes
        self.ell = ell
        self.rng = rng
        self.k = len(classes)

    def matrix(self, i: int) -> np.ndarray:
        # not cached: at order 7^5 the full set of class matrices runs to gigabytes
        return class_matrix(self.classes, i)

    def split(self, basis: np.ndarray, rows: list[int], mat: np.ndarray) -> list[tuple[np.ndarray, list[int]]]:
        """Eigenspaces of mat restricted to the invariant span of ``basis``.

        ``basis[rows]`` is the identity, so the coordinates of ``mat @ basis`` in
        that basis are just its ``rows`` entries. Each piece keeps the property.
        """
        ell = self.ell
        restricted = ff.matmul(mat[rows] % ell, basis, ell)
        dim = basis.shape[1]
        if not restricted.any() or np.array_equal(restricted, restricted[0, 0] * np.eye(dim, dtype=np.int64)):
            return [(basis, rows)]
        roots: set[int] = set()
        start = np.ones(dim, dtype=np.int64)
        pieces: list[np.ndarray] = []
        for attempt in range(MAX_SPLIT_RETRIES):
            poly = ff.krylov_minpoly(restricted, start, ell)
            vals = ff.poly_eval_all(poly, ell)
            roots |= set(np.flatnonzero(vals == 0).tolist())
            pieces = []
            for lam in sorted(roots):
                shifted = (restricted - lam * np.eye(dim, dtype=np.int64)) % ell
                pieces.append(ff.nullspace(shifted, ell, with_free=True))
            if sum(p.shape[1] for p, _ in pieces) == dim:
                break
            start = self.rng.integers(0, ell, dim)
        else:
            raise SplittingError("restricted class matrix is not diagonalisable over GF(ell)")
        return [(ff.matmul(basis, piece, ell), [rows[f] for f in free]) for piece, free in pieces]

    def run(self) -> list[np.ndarray]:
        ell, k = self.ell, self.k
        spaces = [(np.eye(k, dtype=np.int64), list(range(k)))]
        done: list[np.ndarray] = []
        order = sorted(range(1, k), key=lambda i: (self.classes.class_sizes[i], i))

        def refine(mat):
            nonlocal spaces
            nxt = []
            for basis, rows in spaces:
                for piece, prow in self.split(basis, rows, mat):
                    if piece.shape[1] == 1:
                        done.append(piece[:, 0])
                    else:
                        nxt.append((piece, prow))
            spaces = nxt

        for i in order:
            if not spaces:
                break
            refine(self.matrix(i))
        retries = 0
        while spaces:
            # fallback: random combinations of class matrices under the run seed
            retries += 1
            if retries > MAX_SPLIT_RETRIES:
                raise SplittingError(f"{len(spaces)} common eigenspaces left unsplit")
            log.debug("random-combination fallback, %d spaces left", len(spaces))
            coeffs = self.rng.integers(0, ell, len(order))
            combo = np.zeros((k, k), dtype=np.int64)
            for c, i in zip(coeffs, order):
                combo = (combo + int(c) * (self.matrix(i) % ell)) % ell
            refine(combo)
        return done


def character_table(pres: PcPresentation, seed: int = 0) -> CharacterTable:
    return _character_table(pres, seed)


@functools.lru_cache(maxsize=2)
def _character_table(pres: PcPresentation, seed: int) -> CharacterTable:
    G = model(pres)
    classes = conjugacy_classes(pres)
    k = len(classes)
    e = classes.exponent
    order = G.order
    ell = ff.dixon_prime(e, order)
    theta = ff.root_of_unity(ell, e)
    rng = np.random.default_rng(seed)
    sizes = np.array(classes.class_sizes, dtype=np.int64)
    inv_cls = classes.inverse_class

    if k == 1:
        vectors = [np.ones(1, dtype=np.int64)]
    else:
        vectors = _Splitter(classes, ell, rng).run()
    if len(vectors) != k:
        raise SplittingError(f"found {len(vectors)} central characters for {k} classes")

    p = pres.p
    candidates = []
    d = 1
    while d * d <= order:
        candidates.append(d)
        d *= p
    size_inv = np.array([pow(int(s), -1, ell) for s in sizes], dtype=np.int64)

    rows = []
    for vec in vectors:
        omega = vec * pow(int(vec[0]), -1, ell) % ell
        norm = int(np.sum(omega * omega[inv_cls] % ell * size_inv % ell) % ell)
        target = order * pow(norm, -1, ell) % ell
        matches = [d for d in candidates if d * d % ell == target]
        if len(matches) != 1:
            raise LiftError(f"degree recovery failed (candidates {matches})")
        degree = matches[0]
        values = omega * degree % ell * size_inv % ell
        rows.append((degree, values))

    degrees = np.array([d for d, _ in rows], dtype=np.int64)
    vals = np.stack([v for _, v in rows])
    theta_pows = np.array([pow(theta, t, ell) for t in range(e)], dtype=np.int64)
    # multiplicities are at most the degree, itself at most sqrt|G|
    mults = np.zeros((k, k, e), dtype=np.int16)
    dft: dict[int, np.ndarray] = {}
    for j in range(k):
        o = int(G.element_orders[classes.rep_index[j]])
        step = e // o
        if o not in dft:
            # (1/o) theta_o^{-t kk}, theta_o = theta^step
            t = np.arange(o)
            dft[o] = theta_pows[(-np.outer(t, t) * step) % e] * pow(o, -1, ell) % ell
        m = ff.matmul(vals[:, classes.power_maps[j, :o]], dft[o], ell)
        if (m > degrees[:, None]).any():
            raise LiftError(f"multiplicity exceeds the degree on class {j}")
        mults[:, j, ::step] = m
    if not (mults.sum(axis=2) == degrees[:, None]).all():
        raise LiftError("multiplicities do not sum to the degree")

    lifted = []
    for r, degree in enumerate(degrees.tolist()):
        kernel_classes = np.flatnonzero(mults[r, :, 0] == degree)
        kernel_order = int(sizes[kernel_classes].sum())
        codegree = order // (kernel_order * degree)
        lifted.append(CharacterRow(degree, mults[r], tuple(kernel_classes.tolist()), kernel_order, codegree))
    mults.setflags(write=False)

    # big-endian bytes of nonnegative values sort like the value sequences
    lifted.sort(key=lambda r: (r.kernel_order != order, r.degree, r.codegree,
                               r.mults.astype(">i2").tobytes()))
    return CharacterTable(classes, tuple(lifted), ell, theta, seed)


def inner_product_times_order(table: CharacterTable, a: int, b: int) -> np.ndarray:
    """sum_i |C_i| chi_a(g_i) conj(chi_b(g_i)) as an exact multiplicity vector."""
    cl = table.classes
    e = cl.exponent
    acc = np.zeros(e, dtype=np.int64)
    for i, size in enumerate(cl.class_sizes):
        acc += size * convolve(table.rows[a].values[i].vector(), table.rows[b].values[i].conjugate().vector())
    return acc


def _primitive_frequencies(e: int) -> list[int]:
    # one frequency per complex-conjugate pair of primitive e-th roots
    if e == 1:
        return [0]
    return [j for j in range(1, e // 2 + 1) if math.gcd(j, e) == 1]


def _conjugate_values(table: CharacterTable, freqs: list[int]) -> np.ndarray:
    """Complex values (freq, row, class) of the table with zeta_e -> exp(2 pi i j / e)."""
    e = table.classes.exponent
    ang = 2 * np.pi * np.outer(np.arange(e), freqs) / e
    cos, sin = np.cos(ang), np.sin(ang)
    k = len(table.rows)
    out = np.empty((len(freqs), k, k), dtype=np.complex128)
    for a, r in enumerate(table.rows):
        m = r.mults.astype(np.float64)
        out[:, a, :].real = (m @ cos).T
        out[:, a, :].imag = (m @ sin).T
    return out


def _gram_deviations(table: CharacterTable):
    """Yield |sum_i |C_i| chi_a(g_i) conj(chi_b(g_i)) - |G| delta_ab| for a <= b (zero below
    the diagonal), once for each primitive e-th root zeta_e may be sent to."""
    freqs = _primitive_frequencies(table.classes.exponent)
    k = len(table.rows)
    batch = max(1, 2**28 // (16 * k * k))
    root_sizes = np.sqrt(np.asarray(table.classes.class_sizes, dtype=np.float64))
    for i in range(0, len(freqs), batch):
        for vals in _conjugate_values(table, freqs[i:i + batch]):
            gram = zherk(1.0, vals * root_sizes)  # upper triangle of vals @ vals^H
            gram[np.diag_indices_from(gram)] -= table.order
            yield np.abs(gram)


def orthogonality_violations(table: CharacterTable) -> list[tuple[int, int]]:
    """Pairs (a, b), a <= b, breaking sum_i |C_i| chi_a chi_b-bar = |G| delta_ab.

    The difference is an algebraic integer of Q(zeta_e). It vanishes iff every
    Galois conjugate has absolute value below 1, since a nonzero one has norm
    at least 1. Conjugates are evaluated in floating point; rounding error is
    many orders of magnitude below the 1/2 threshold used here.
    """
    bad = np.zeros((len(table.rows),) * 2, dtype=bool)
    for dev in _gram_deviations(table):
        bad |= dev > 0.5
    return [(int(a), int(b)) for a, b in zip(*np.nonzero(bad))]


@dataclass(frozen=True)
class Provenance:
    degree: int
    kernel_order: int
    codegree: int
    count: int
    note: str = ""


@dataclass(frozen=True)
class CodegreeReport:
    p: int
    order: int
    method: str
    cod: tuple[int, ...]
    provenance: tuple[Provenance, ...] = ()
    case: str = ""

    def __post_init__(self):
        if 1 not in self.cod:
            raise ValueError("a codegree set always contains 1")
        if list(self.cod) != sorted(set(self.cod)):
            raise ValueError("codegree set must be sorted and duplicate-free")

    @property
    def cod_set(self) -> frozenset[int]:
        return frozenset(self.cod)

    def exponents(self) -> list[int]:
        out = []
        for c in self.cod:
            e = 0
            while c > 1:
                c //= self.p
                e += 1
            out.append(e)
        return out

    def to_dict(self) -> dict:
        d = {"p": self.p, "order": self.order, "method": self.method, "cod": list(self.cod),
             "provenance": [pr.__dict__ for pr in self.provenance]}
        if self.case:
            d["case"] = self.case
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def codegrees_bruteforce(pres: PcPresentation, seed: int = 0) -> CodegreeReport:
    table = character_table(pres, seed)
    tally: dict[tuple[int, int, int], int] = {}
    for r in table.rows:
        key = (r.degree, r.kernel_order, r.codegree)
        tally[key] = tally.get(key, 0) + 1
    prov = tuple(Provenance(d, ko, c, n, "linear" if d == 1 else "nonlinear")
                 for (d, ko, c), n in sorted(tally.items()))
    cod = tuple(sorted({r.codegree for r in table.rows}))
    return CodegreeReport(pres.p, pres.order, "bruteforce", cod, prov)
