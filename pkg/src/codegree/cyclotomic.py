"""Exact character values as multisets of roots of unity.

A value sum_k m_k zeta_e^k is stored as its multiplicity vector.  For a
prime-power e = p^a the cyclotomic polynomial is sum_t x^(t e/p), so an
integer vector represents zero iff it is constant along every coset
r + (e/p) Z / e Z.  All arithmetic here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CyclotomicValue:
    e: int
    mults: tuple[int, ...]

    def __post_init__(self):
        if len(self.mults) != self.e:
            raise ValueError("multiplicity vector must have length e")

    @classmethod
    def integer(cls, value: int, e: int) -> "CyclotomicValue":
        m = [0] * e
        m[0] = value
        return cls(e, tuple(m))

    @property
    def degree_count(self) -> int:
        """Number of roots summed, i.e. the character degree for a character value."""
        return sum(self.mults)

    def conjugate(self) -> "CyclotomicValue":
        m = self.mults
        return CyclotomicValue(self.e, tuple(m[-k % self.e] for k in range(self.e)))

    def vector(self) -> np.ndarray:
        return np.array(self.mults, dtype=np.int64)

    def to_complex(self) -> complex:
        k = np.arange(self.e)
        return complex(np.dot(self.vector(), np.exp(2j * np.pi * k / self.e)))


def convolve(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Product in Z[x]/(x^e - 1)."""
    e = len(u)
    out = np.zeros(e, dtype=np.int64)
    for k in np.flatnonzero(u):
        out += u[k] * np.roll(v, k)
    return out


def is_zero(vec: np.ndarray, p: int) -> bool:
    """True iff sum vec[k] zeta_e^k = 0 for e = len(vec) a power of p."""
    e = len(vec)
    if e == 1:
        return vec[0] == 0
    step = e // p
    blocks = np.asarray(vec).reshape(p, step)
    return bool((blocks == blocks[0]).all())


def equals_integer(vec: np.ndarray, value: int, p: int) -> bool:
    w = np.array(vec, dtype=np.int64)
    w[0] -= value
    return is_zero(w, p)
