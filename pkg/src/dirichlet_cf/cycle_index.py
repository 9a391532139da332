"""Cycle index polynomials of symmetric groups and of arbitrary permutation groups."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .combinatorics import (
    Partition,
    Permutation,
    cycle_structure,
    enumerate_partitions,
    is_closed,
    multinomial_weight,
)

N_MAX = 30


class NotAGroupError(ValueError):
    """Raised when a permutation set is not closed under composition."""


@dataclass(frozen=True)
class CycleIndexPolynomial:
    """Polynomial in t_1..t_n, one monomial t^lam per partition ``lam`` of n."""

    n: int
    terms: Mapping[Partition, Fraction] = field(hash=False)

    def coefficient(self, lam: Partition) -> Fraction:
        return self.terms.get(lam, Fraction(0))

    def items(self):
        """(partition, coefficient) pairs in reverse-lex partition order."""
        order = {lam: i for i, lam in enumerate(enumerate_partitions(self.n))}
        return sorted(self.terms.items(), key=lambda kv: order[kv[0]])

    def evaluate(self, point: Sequence) -> complex:
        """Value at t_j = point[j-1] in complex double precision."""
        if len(point) < self.n:
            raise ValueError(f"need {self.n} evaluation values, got {len(point)}")
        pt = [complex(x) for x in point[: self.n]]
        total = 0j
        for lam, c in self.terms.items():
            mono = 1.0 + 0j
            for i, f in enumerate(lam.freq):
                if f:
                    mono *= pt[i] ** f
            total += float(c) * mono
        return total

    def evaluate_exact(self, point: Sequence):
        """Value with exact arithmetic; ``point`` entries may be Fractions or ints."""
        if len(point) < self.n:
            raise ValueError(f"need {self.n} evaluation values, got {len(point)}")
        total = Fraction(0)
        for lam, c in self.terms.items():
            mono = Fraction(1)
            for i, f in enumerate(lam.freq):
                if f:
                    mono *= point[i] ** f
            total += c * mono
        return total

    def __eq__(self, other):
        if not isinstance(other, CycleIndexPolynomial):
            return NotImplemented
        a = {k: v for k, v in self.terms.items() if v}
        b = {k: v for k, v in other.terms.items() if v}
        return self.n == other.n and a == b


def _check_n(n: int, n_max: int):
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > n_max:
        raise ValueError(f"n={n} exceeds the cap n_max={n_max}")


def cycle_index_direct(n: int, n_max: int = N_MAX) -> CycleIndexPolynomial:
    """Z_n = (1/n!) sum_lam M(lam) t^lam."""
    _check_n(n, n_max)
    nf = factorial(n)
    terms = {lam: Fraction(multinomial_weight(lam), nf) for lam in enumerate_partitions(n)}
    return CycleIndexPolynomial(n, terms)


def _times_t(lam: Partition, j: int) -> Partition:
    """Partition of n+j obtained by adding one part j."""
    freq = list(lam.freq) + [0] * j
    freq[j - 1] += 1
    return Partition(tuple(freq))


@lru_cache(maxsize=None)
def _recurrence(n: int) -> CycleIndexPolynomial:
    if n == 0:
        return CycleIndexPolynomial(0, {Partition(()): Fraction(1)})
    acc: dict[Partition, Fraction] = {}
    for j in range(1, n + 1):
        for lam, c in _recurrence(n - j).terms.items():
            key = _times_t(lam, j)
            acc[key] = acc.get(key, Fraction(0)) + c
    return CycleIndexPolynomial(n, {lam: c / n for lam, c in acc.items()})


def cycle_index_recurrence(n: int, n_max: int = N_MAX) -> CycleIndexPolynomial:
    """Z_n from Z_n = (1/n) sum_{j=1}^n t_j Z_{n-j}, Z_0 = 1 (memoised)."""
    _check_n(n, n_max)
    for m in range(n):  # fill the cache bottom-up to keep recursion shallow
        _recurrence(m)
    return _recurrence(n)


def cycle_index(n: int, n_max: int = N_MAX) -> CycleIndexPolynomial:
    """Cycle index of S_n (recurrence route, cached)."""
    return cycle_index_recurrence(n, n_max)


def cycle_index_group(elements: Sequence[Permutation]) -> CycleIndexPolynomial:
    """Z^G = (1/|G|) sum_{g in G} t^{type(g)}; raises NotAGroupError if not closed."""
    elements = list(dict.fromkeys(elements))
    if not is_closed(elements):
        raise NotAGroupError("permutation set is not closed under composition")
    n = elements[0].n
    counts: dict[Partition, int] = {}
    for g in elements:
        lam = cycle_structure(g)
        counts[lam] = counts.get(lam, 0) + 1
    order = len(elements)
    return CycleIndexPolynomial(n, {lam: Fraction(c, order) for lam, c in counts.items()})


def cycle_index_brute(n: int) -> CycleIndexPolynomial:
    """Cycle index of S_n by walking every permutation (small n only)."""
    from .combinatorics import symmetric_group

    return cycle_index_group(symmetric_group(n)) if n > 0 else cycle_index_direct(0)


def cycle_index_values(power_sums: Sequence, nmax: int) -> np.ndarray:
    """Numeric Z_0..Z_nmax at t_j = power_sums[j-1] via the recurrence kernel."""
    p = np.asarray(power_sums, dtype=complex)
    return _kernels.cycle_index_values(p, int(nmax))
