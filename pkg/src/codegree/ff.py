"""Prime-field linear algebra on numpy int64 arrays.

The moduli used here stay far below 2**31, so products of two reduced
entries fit in int64 and a matrix product is reduced once at the end only
when the inner dimension is small; ``matmul`` reduces blockwise to be safe.
"""

from __future__ import annotations

import numpy as np

from .pc import _is_prime

is_prime = _is_prime


def _prime_factors(m: int) -> list[int]:
    out, k = [], 2
    while k * k <= m:
        if m % k == 0:
            out.append(k)
            while m % k == 0:
                m //= k
        k += 1
    if m > 1:
        out.append(m)
    return out


def primitive_root(ell: int) -> int:
    """Smallest generator of the multiplicative group of GF(ell)."""
    qs = _prime_factors(ell - 1)
    for g in range(2, ell):
        if all(pow(g, (ell - 1) // q, ell) != 1 for q in qs):
            return g
    if ell == 2:
        return 1
    raise ValueError(f"{ell} is not prime")


def dixon_prime(exponent: int, order: int) -> int:
    """Smallest prime ell = 1 (mod exponent) with ell > 2 sqrt(order)."""
    ell = exponent + 1
    while not (ell * ell > 4 * order and is_prime(ell)):
        ell += exponent
    return ell


def root_of_unity(ell: int, e: int) -> int:
    """Primitive e-th root of unity: smallest primitive root raised to (ell - 1) / e."""
    if (ell - 1) % e:
        raise ValueError(f"{e} does not divide {ell} - 1")
    return pow(primitive_root(ell), (ell - 1) // e, ell)


def matmul(a: np.ndarray, b: np.ndarray, ell: int) -> np.ndarray:
    """a @ b mod ell through float64 BLAS, chunked so every partial sum stays below 2**53."""
    inner = a.shape[-1]
    step = max(1, (2**53) // (ell * ell))
    af = np.asarray(a, dtype=np.float64)
    bf = np.asarray(b, dtype=np.float64)
    if inner <= step:
        return np.mod(af @ bf, ell).astype(np.int64)
    out = np.zeros((a.shape[0], b.shape[-1]), dtype=np.float64)
    for s in range(0, inner, step):
        out = np.mod(out + af[:, s:s + step] @ bf[s:s + step], ell)
    return out.astype(np.int64)


def rref(a: np.ndarray, ell: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod ell and the pivot columns."""
    m = np.array(a, dtype=np.int64) % ell
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        s = r + nz[0]
        if s != r:
            m[[r, s]] = m[[s, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, ell) % ell
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % ell
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(a: np.ndarray, ell: int, with_free: bool = False):
    """Basis of {v : a v = 0} as columns; the free coordinates carry an identity block.

    With ``with_free`` the free coordinate indices are returned as well.
    """
    cols = a.shape[1]
    red, pivots = rref(a, ell)
    piv = set(pivots)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for t, f in enumerate(free):
        basis[f, t] = 1
        if pivots:
            basis[pivots, t] = (-red[:, f]) % ell
    return (basis, free) if with_free else basis


def poly_eval_all(coeffs: list[int], ell: int) -> np.ndarray:
    """Values of sum coeffs[i] x^i at every x in GF(ell)."""
    x = np.arange(ell, dtype=np.int64)
    acc = np.zeros(ell, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * x + c) % ell
    return acc


def krylov_minpoly(mat: np.ndarray, v: np.ndarray, ell: int) -> list[int]:
    """Monic minimal polynomial of v under mat, low-degree coefficient first."""
    m = mat.shape[0]
    basis: list[tuple[np.ndarray, np.ndarray, int]] = []
    w = v % ell
    t = 0
    while True:
        poly = np.zeros(m + 2, dtype=np.int64)
        poly[t] = 1
        vec = w.copy()
        for bvec, bpoly, piv in basis:
            c = int(vec[piv])
            if c:
                vec = (vec - c * bvec) % ell
                poly = (poly - c * bpoly) % ell
        nz = np.flatnonzero(vec)
        if nz.size == 0:
            return [int(c) for c in poly[: t + 1]]
        piv = int(nz[0])
        inv = pow(int(vec[piv]), -1, ell)
        basis.append((vec * inv % ell, poly * inv % ell, piv))
        w = mat @ w % ell
        t += 1
