"""Moments of Dirichlet distributions, Humbert series and their limits.

Moments of ``s . y`` for ``y ~ Dir(alpha)`` are computed three ways: a sum
over multi-indices, the cycle index of S_n at the power sums
p_j = sum_i alpha_i s_i^j, and Monte Carlo.  The Humbert series
Phi2[alpha; c; s] = sum_n Z_n(p) / (c)_n is summed either over multi-indices
per degree or through the numeric cycle-index recurrence, which stays cheap
for many variables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from numbers import Number
from typing import Sequence

import numpy as np

from . import _kernels
from ._parallel import shard_map
from .combinatorics import (
    Partition,
    Permutation,
    SetPartition,
    compositions,
    set_partition_shape,
)
from .cycle_index import N_MAX, cycle_index

DEFAULT_TOL = 1e-13


class SingularParameterError(ValueError):
    """The normalising Pochhammer symbol (|alpha|)_n vanishes."""


class PoleError(ValueError):
    """The lower parameter c is a non-positive integer."""


class TruncationError(ArithmeticError):
    """Series tail bound did not fall below tolerance within the term cap."""

    def __init__(self, msg, partial, bound):
        super().__init__(msg)
        self.partial = partial
        self.bound = bound


@dataclass(frozen=True)
class MomentReport:
    value: complex
    route: str
    stderr: float | None = None
    samples: int | None = None


# -- helpers ---------------------------------------------------------------


def pochhammer(a, n: int):
    """Rising factorial (a)_n; exact for ints and Fractions."""
    out = 1 if isinstance(a, (int, Fraction)) else 1.0
    for j in range(n):
        out *= a + j
    return out


def _vector(x, name: str) -> list:
    try:
        v = list(x)
    except TypeError:
        raise ValueError(f"{name} must be a sequence") from None
    if len(v) == 0:
        raise ValueError(f"{name} must be non-empty")
    for e in v:
        if not isinstance(e, Number):
            raise ValueError(f"{name} has non-numeric entry {e!r}")
    return v


def _check_pair(s, alpha):
    s = _vector(s, "s")
    alpha = _vector(alpha, "alpha")
    if len(s) != len(alpha):
        raise ValueError(f"s has length {len(s)} but alpha has length {len(alpha)}")
    return s, alpha


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"moment order must be a non-negative integer, got {n!r}")
    return int(n)


def _is_real(*vecs) -> bool:
    return all(not isinstance(x, complex) or x.imag == 0 for v in vecs for x in v)


def _normaliser(alpha_sum, n: int):
    """n! / (|alpha|)_n, raising if the denominator vanishes."""
    den = pochhammer(alpha_sum, n)
    if den == 0:
        raise SingularParameterError(
            f"(|alpha|)_{n} vanishes for |alpha| = {alpha_sum}"
        )
    if isinstance(den, (int, Fraction)):
        return Fraction(factorial(n), 1) / den
    return factorial(n) / den


def _out(z: complex, real: bool):
    return float(z.real) if real else complex(z)


# -- moments ---------------------------------------------------------------


def moment_polynomial(alpha: Sequence, n: int) -> dict[tuple[int, ...], object]:
    """Coefficients of E[(s . y)^n] as a polynomial in s.

    Keys are multi-indices m with |m| = n; the coefficient is
    n!/(|alpha|)_n * (alpha)_m / m!.  Exact when alpha is rational.
    """
    alpha = _vector(alpha, "alpha")
    n = _check_n(n)
    norm = _normaliser(sum(alpha), n)
    out = {}
    for m in compositions(n, len(alpha)):
        c = norm
        for a, mi in zip(alpha, m):
            c = c * pochhammer(a, mi) / factorial(mi)
        out[m] = c
    return out


def moment_multiindex(s: Sequence, alpha: Sequence, n: int):
    """E[(s . y)^n] for y ~ Dir(alpha), summed over multi-indices."""
    s, alpha = _check_pair(s, alpha)
    n = _check_n(n)
    norm = _normaliser(sum(alpha), n)
    t = _kernels.degree_sums(np.asarray(alpha, dtype=complex), np.asarray(s, dtype=complex), n)
    return _out(complex(norm * t[n]), _is_real(s, alpha))


def power_sums(s: Sequence, alpha: Sequence, n: int) -> list:
    """p_j = sum_i alpha_i s_i^j for j = 1..n (generic arithmetic)."""
    return [sum(a * x**j for a, x in zip(alpha, s)) for j in range(1, n + 1)]


def moment_cycle_index(s: Sequence, alpha: Sequence, n: int, n_max: int = N_MAX):
    """E[(s . y)^n] as n!/(|alpha|)_n * Z_n(p_1, .., p_n)."""
    s, alpha = _check_pair(s, alpha)
    n = _check_n(n)
    norm = _normaliser(sum(alpha), n)
    p = power_sums([complex(x) for x in s], [complex(a) for a in alpha], n)
    z = cycle_index(n, n_max).evaluate(p)
    return _out(complex(norm * z), _is_real(s, alpha))


def moment_cycle_index_exact(s: Sequence, alpha: Sequence, n: int, n_max: int = N_MAX) -> Fraction:
    """Exact rational moment through the cycle index; entries must be rational."""
    s, alpha = _check_pair(s, alpha)
    n = _check_n(n)
    s = [Fraction(x) for x in s]
    alpha = [Fraction(a) for a in alpha]
    norm = _normaliser(sum(alpha), n)
    p = power_sums(s, alpha, n)
    return norm * cycle_index(n, n_max).evaluate_exact(p)


def moment_multiindex_exact(s: Sequence, alpha: Sequence, n: int) -> Fraction:
    s, alpha = _check_pair(s, alpha)
    s = [Fraction(x) for x in s]
    poly = moment_polynomial([Fraction(a) for a in alpha], n)
    total = Fraction(0)
    for m, c in poly.items():
        term = c
        for x, mi in zip(s, m):
            term *= x**mi
        total += term
    return total


def _check_positive(alpha):
    for a in alpha:
        if isinstance(a, complex) or not a > 0:
            raise ValueError("sampling requires real, strictly positive alpha")


def sample_dirichlet(alpha: Sequence, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` draws from Dir(alpha) by normalised gamma variates."""
    alpha = _vector(alpha, "alpha")
    _check_positive(alpha)
    g = rng.standard_gamma(np.asarray(alpha, dtype=float), size=(size, len(alpha)))
    return g / g.sum(axis=1, keepdims=True)


def moment_monte_carlo(s: Sequence, alpha: Sequence, n: int, samples: int,
                       seed: int | None = None) -> MomentReport:
    """Sample mean of (s . y)^n with its standard error."""
    s, alpha = _check_pair(s, alpha)
    n = _check_n(n)
    _check_positive(alpha)
    if samples < 2:
        raise ValueError("need at least two samples")
    sv = np.asarray(s, dtype=complex if not _is_real(s) else float)

    def shard(count, rng):
        v = (sample_dirichlet(alpha, count, rng) @ sv) ** n
        return v.sum(), (np.real(v) ** 2).sum(), (np.imag(v) ** 2).sum()

    parts = shard_map(shard, samples, seed)
    mean = sum(p[0] for p in parts) / samples
    var = max(sum(p[1] for p in parts) / samples - np.real(mean) ** 2, 0.0)
    var += max(sum(p[2] for p in parts) / samples - np.imag(mean) ** 2, 0.0)
    stderr = math.sqrt(var / (samples - 1))
    value = _out(complex(mean), _is_real(s))
    return MomentReport(value, "montecarlo", stderr, samples)


# -- Humbert series --------------------------------------------------------


def _check_pole(c):
    cc = complex(c)
    if cc.imag == 0 and cc.real <= 0 and cc.real == math.floor(cc.real):
        raise PoleError(f"lower parameter c = {c} is a non-positive integer")


def truncation_order(norm_s: float, a_norm: float, c, tol: float, n_cap: int) -> tuple[int, float]:
    """Number of terms N so that the majorant tail from degree N is below ``tol``.

    The degree-n term is bounded by b_n = ||s||^n (A)_n / (n! |(c)_n|).  For
    n >= n0 with n0 + Re c > 0 the ratio b_{n+1}/b_n is at most
    q = ||s|| max(1, (A+n0)/(n0+1)) / (n0 + Re c), and the tail is at most
    b_N / (1 - q) once q < 1.  Returns (N, tail bound).
    """
    c = complex(c)
    log_b = 0.0  # log b_n
    n = 0
    while True:
        re = n + c.real
        if re > 0:
            q = norm_s * max(1.0, (a_norm + n) / (n + 1)) / re
            if q < 1:
                if log_b == -math.inf:
                    return n, 0.0
                tail = math.exp(log_b) / (1 - q)
                if tail <= tol:
                    return n, tail
        if n >= n_cap:
            bound = math.exp(log_b) / (1 - q) if re > 0 and q < 1 else math.inf
            return -1, bound
        ratio_num = norm_s * (a_norm + n)
        ratio_den = (n + 1) * abs(c + n)
        log_b = log_b + math.log(ratio_num) - math.log(ratio_den) if ratio_num > 0 else -math.inf
        n += 1


def _as_complex_vec(x, name):
    return np.asarray(_vector(x, name), dtype=complex)


def cycle_series(p_scaled: np.ndarray, c: complex, rho: float, nterms: int) -> complex:
    """sum_{n < nterms} Z_n(p) / (c)_n given p_j / rho^j in ``p_scaled``."""
    z = _kernels.cycle_index_values(np.asarray(p_scaled, dtype=complex), nterms - 1)
    return _scaled_sum(z, c, rho, nterms)


def _scaled_sum(z: np.ndarray, c: complex, rho: float, nterms: int) -> complex:
    total = 0j
    poch = 1.0 + 0j  # (c)_n / rho^n
    for n in range(nterms):
        total += z[n] / poch
        poch *= (c + n) / rho
    return total


def _phi2_terms(alpha: np.ndarray, c: complex, s: np.ndarray, nterms: int, method: str) -> complex:
    """sum_{n < nterms} Z_n(p) / (c)_n with a common scale rho to keep magnitudes moderate."""
    rho = max(1.0, abs(c))
    if method == "multiindex":
        z = _kernels.degree_sums(alpha, s, nterms - 1, rho)
        return _scaled_sum(z, c, rho, nterms)
    j = np.arange(1, nterms)
    # p_j / rho^j = sum_i alpha_i (s_i / rho)^j
    p = (alpha[None, :] * (s[None, :] / rho) ** j[:, None]).sum(axis=1) if len(j) else np.zeros(0)
    return cycle_series(p, c, rho, nterms)


def humbert_phi2(alpha: Sequence, c, s: Sequence, tol: float = DEFAULT_TOL,
                 method: str = "auto", n_cap: int = 5000) -> complex:
    """Phi2[alpha; c; s] = sum_m (alpha)_m / (c)_{|m|} s^m / m!.

    ``method`` is "multiindex", "cycleindex" or "auto" (cycle index unless
    the multi-index sum is small).  Truncation uses the majorant bound, so the
    returned value is within ``tol`` of the full series.
    """
    a = _as_complex_vec(alpha, "alpha")
    sv = _as_complex_vec(s, "s")
    if len(a) != len(sv):
        raise ValueError(f"s has length {len(sv)} but alpha has length {len(a)}")
    if method not in ("auto", "multiindex", "cycleindex"):
        raise ValueError(f"unknown method {method!r}")
    _check_pole(c)
    norm_s = float(np.abs(sv).max())
    a_norm = float(np.abs(a).sum())
    nterms, bound = truncation_order(norm_s, a_norm, c, tol, n_cap)
    if nterms < 0:
        partial = _phi2_terms(a, complex(c), sv, n_cap, "cycleindex")
        raise TruncationError(
            f"series did not reach tolerance {tol} within {n_cap} terms", partial, bound
        )
    if method == "auto":
        method = "multiindex" if math.comb(nterms + len(a), len(a)) <= 20_000 else "cycleindex"
    return _phi2_terms(a, complex(c), sv, nterms, method)


def characteristic_functional(alpha: Sequence, s: Sequence, tol: float = DEFAULT_TOL,
                              method: str = "auto") -> complex:
    """E exp(i s . y) for y ~ Dir(alpha), i.e. Phi2[alpha; |alpha|; i s]."""
    a = _vector(alpha, "alpha")
    sv = _as_complex_vec(s, "s")
    return humbert_phi2(a, sum(a), 1j * sv, tol=tol, method=method)


def moment_egf(alpha: Sequence, s: Sequence, t: float, tol: float = DEFAULT_TOL) -> complex:
    """sum_n t^n/n! E[(s . y)^n] = Phi2[alpha; |alpha|; t s]."""
    a = _vector(alpha, "alpha")
    sv = _as_complex_vec(s, "s")
    return humbert_phi2(a, sum(a), t * sv, tol=tol)


# -- limits ------------------------------------------------------------------

_REGIMES = ("beta_to_zero", "beta_to_infinity")


def confluent_limit(alpha: Sequence, s: Sequence, regime: str) -> complex:
    """Limit of Phi2[b alpha; b |alpha|; s] as b -> 0 or b -> infinity."""
    s, alpha = _check_pair(s, alpha)
    a = np.asarray(alpha, dtype=complex)
    sv = np.asarray(s, dtype=complex)
    if regime == "beta_to_zero":
        return complex((a * np.exp(sv)).sum() / a.sum())
    if regime == "beta_to_infinity":
        return complex(np.exp((a * sv).sum() / a.sum()))
    raise ValueError(f"regime must be one of {_REGIMES}")


def asymptotic_moment(s: Sequence, alpha: Sequence, n: int, regime: str):
    """Limit of E[(s . y)^n], y ~ Dir(b alpha), as b -> 0 or b -> infinity."""
    s, alpha = _check_pair(s, alpha)
    n = _check_n(n)
    a = np.asarray(alpha, dtype=complex)
    sv = np.asarray(s, dtype=complex)
    if regime == "beta_to_zero":
        z = (a * sv**n).sum() / a.sum()
    elif regime == "beta_to_infinity":
        z = ((a * sv).sum() / a.sum()) ** n
    else:
        raise ValueError(f"regime must be one of {_REGIMES}")
    return _out(complex(z), _is_real(s, alpha))


# -- maps between simplices ------------------------------------------------


def _check_map(g: Sequence[int]) -> tuple[int, ...]:
    g = tuple(int(x) for x in g)
    k = len(g)
    if k == 0 or any(not 1 <= x <= k for x in g):
        raise ValueError(f"{g} is not a map [k] -> [k]")
    return g


def star_lambda(lam: Partition) -> tuple[int, ...]:
    """Block label of each position 1..k for the contraction of shape ``lam``.

    Blocks are laid out by ascending size: lam_1 singletons first, then
    lam_2 pairs, and so on; positions are filled consecutively.
    """
    out = []
    label = 0
    for size, count in enumerate(lam.freq, start=1):
        for _ in range(count):
            label += 1
            out.extend([label] * size)
    return tuple(out)


def additive_contraction(y: Sequence, lam: Partition) -> list:
    """Sum ``y`` over the blocks of ``star_lambda(lam)``."""
    y = list(y)
    if len(y) != lam.n:
        raise ValueError("length of y must equal the size of lam")
    labels = star_lambda(lam)
    out = [0] * lam.length
    for lab, v in zip(labels, y):
        out[lab - 1] = out[lab - 1] + v
    return out


def decompose_map(g: Sequence[int]) -> tuple[Partition, Permutation, tuple[int, ...]]:
    """Factor g : [k] -> [k] as g = tau o star_lambda o pi.

    The fibres of g form a set partition, ordered canonically; lam is its
    shape, pi sends each element to its position when the blocks are laid
    out in that order, and tau (returned as a tuple) gives the g-value of
    each block.
    """
    g = _check_map(g)
    fibres: dict[int, list[int]] = {}
    for i, v in enumerate(g, start=1):
        fibres.setdefault(v, []).append(i)
    sp = SetPartition.canonical(fibres.values())
    lam = set_partition_shape(sp)
    pos = [0] * len(g)
    p = 0
    for block in sp.blocks:
        for e in block:
            p += 1
            pos[e - 1] = p
    tau = tuple(g[block[0] - 1] for block in sp.blocks)
    return lam, Permutation(tuple(pos)), tau


def pushforward_params(g: Sequence[int], alpha: Sequence) -> tuple[tuple[int, ...], tuple]:
    """Parameters of g(y) for y ~ Dir(alpha): (image labels ascending, summed alpha)."""
    g = _check_map(g)
    alpha = _vector(alpha, "alpha")
    if len(alpha) != len(g):
        raise ValueError("alpha must have one entry per point of the domain")
    acc: dict[int, object] = {}
    for v, a in zip(g, alpha):
        acc[v] = acc.get(v, 0) + a
    labels = tuple(sorted(acc))
    return labels, tuple(acc[v] for v in labels)


def pulled_back_polynomial(g: Sequence[int], alpha: Sequence, n: int) -> dict[tuple[int, ...], object]:
    """Moment polynomial of Dir(alpha) at s o g, written in the image variables.

    Keys are exponent vectors over the image labels (ascending), so this is
    directly comparable with ``moment_polynomial`` of the pushforward.
    """
    g = _check_map(g)
    labels = sorted(set(g))
    index = {v: i for i, v in enumerate(labels)}
    out: dict[tuple[int, ...], object] = {}
    for m, c in moment_polynomial(alpha, n).items():
        e = [0] * len(labels)
        for j, mj in enumerate(m):
            e[index[g[j]]] += mj
        key = tuple(e)
        out[key] = out.get(key, 0) + c
    return out


@dataclass(frozen=True)
class MapCheck:
    g: tuple[int, ...]
    lam: Partition
    pi: Permutation
    tau: tuple[int, ...]
    literal: bool  # star_lambda o pi == g with no relabelling
    relabelled: bool  # tau o star_lambda o pi == g
    contraction: bool  # pushforward through star o pi is the contraction of pi-permuted alpha
    moments: bool  # exact moment polynomials of the pushforward agree up to degree nmax

    @property
    def passed(self) -> bool:
        return self.relabelled and self.contraction and self.moments


def check_map(g: Sequence[int], alpha: Sequence, nmax: int = 4) -> MapCheck:
    """Verify the factorization and pushforward identities for one map g."""
    g = _check_map(g)
    k = len(g)
    alpha = _vector(alpha, "alpha")
    if len(alpha) != k:
        raise ValueError("alpha must have one entry per point of the domain")
    lam, pi, tau = decompose_map(g)
    star = star_lambda(lam)
    comp = tuple(star[pi(i) - 1] for i in range(1, k + 1))
    permuted = [None] * k
    for i in range(1, k + 1):
        permuted[pi(i) - 1] = alpha[i - 1]
    pushed = [0] * lam.length
    for i, c in enumerate(comp):
        pushed[c - 1] += alpha[i]
    _, beta = pushforward_params(g, alpha)
    moments = all(pulled_back_polynomial(g, alpha, n) == moment_polynomial(beta, n)
                  for n in range(nmax + 1))
    return MapCheck(g, lam, pi, tau, comp == g, tuple(tau[c - 1] for c in comp) == g,
                    pushed == additive_contraction(permuted, lam), moments)
