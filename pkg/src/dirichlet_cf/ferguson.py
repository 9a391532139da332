"""Dirichlet-Ferguson random measures on [0, 1].

Covers stick-breaking sampling, partition marginals, the series form of the
characteristic functional

    E exp(i t <eta, f>) = sum_n (i t)^n / (beta)_n  Z_n(nu f, nu f^2, ..., nu f^n),

with nu = beta sigma, its extension Phi[nu, f] to signed measures, the
region operators E_A and E_{A,-B}, and the limiting posterior actions along
dyadic partitions.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import hyp1f1

from . import _kernels
from ._parallel import shard_map
from .dirichlet import TruncationError, cycle_series, humbert_phi2, truncation_order
from .dsa import LatticeVector, Lower, Raise, apply

DEFAULT_EPS = 1e-10
DEFAULT_TOL = 1e-13
N_CAP = 5000


# -- partitions and test functions -------------------------------------------


class BasePartition:
    """Cells X_i = [c_{i-1}, c_i) of [0, 1]; the last cell also holds 1."""

    def __init__(self, cuts: Sequence[float] = ()):
        inner = [float(c) for c in cuts]
        edges = np.array([0.0] + inner + [1.0])
        if np.any(np.diff(edges) <= 0):
            raise ValueError("cut points must be strictly increasing inside (0, 1)")
        self.edges = edges

    @classmethod
    def dyadic(cls, depth: int) -> "BasePartition":
        m = 2**depth
        return cls(np.arange(1, m) / m)

    @property
    def m(self) -> int:
        return len(self.edges) - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def cell_index(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any((x < 0) | (x > 1)):
            raise ValueError("points must lie in [0, 1]")
        return np.minimum(np.searchsorted(self.edges, x, side="right") - 1, self.m - 1)

    def refine(self, other: "BasePartition") -> "BasePartition":
        return BasePartition(np.union1d(self.edges, other.edges)[1:-1])

    def __eq__(self, other):
        return isinstance(other, BasePartition) and np.array_equal(self.edges, other.edges)

    def __repr__(self):
        return f"BasePartition({self.edges[1:-1].tolist()})"


class PiecewiseConstant:
    """Test function with value ``values[i]`` on cell i of ``partition``."""

    def __init__(self, partition: BasePartition, values: Sequence[float]):
        v = np.asarray(values, dtype=float)
        if v.shape != (partition.m,):
            raise ValueError(f"need {partition.m} values, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        self.partition = partition
        self.values = v

    def __call__(self, x):
        return self.values[self.partition.cell_index(x)]

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())


_GRID = np.linspace(0.0, 1.0, 4097)


class ContinuousFunction:
    """Wrapper for a vectorised callable on [0, 1]."""

    def __init__(self, func: Callable):
        self.func = func

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)

    def sup_norm(self) -> float:
        return float(np.abs(self(_GRID)).max())


def as_test_function(f) -> PiecewiseConstant | ContinuousFunction:
    if isinstance(f, (PiecewiseConstant, ContinuousFunction)):
        return f
    if callable(f):
        return ContinuousFunction(f)
    raise TypeError("f must be a PiecewiseConstant or a callable")


# -- measures ----------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _quadrature_points(edges: np.ndarray, panels_per_cell: int = 1):
    """Gauss-Legendre nodes and weights on each interval between ``edges``."""
    if panels_per_cell > 1:
        sub = [np.linspace(a, b, panels_per_cell + 1)[:-1] for a, b in zip(edges[:-1], edges[1:])]
        edges = np.append(np.concatenate(sub), edges[-1])
    a, b = edges[:-1], edges[1:]
    half = (b - a)[:, None] / 2
    x = (a + b)[:, None] / 2 + half * _GL_NODES[None, :]
    w = half * _GL_WEIGHTS[None, :]
    return x, w


class DiscreteMeasure:
    """Finite signed measure sum_i w_i delta_{x_i} on [0, 1]."""

    def __init__(self, atoms: Sequence[float], weights: Sequence[float]):
        x = np.asarray(atoms, dtype=float).ravel()
        w = np.asarray(weights, dtype=float).ravel()
        if x.shape != w.shape:
            raise ValueError("atoms and weights differ in length")
        if np.any((x < 0) | (x > 1)):
            raise ValueError("atoms must lie in [0, 1]")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if len(np.unique(x)) != len(x):
            raise ValueError("atoms must be distinct")
        self.atoms = x
        self.weights = w

    @classmethod
    def merged(cls, atoms, weights) -> "DiscreteMeasure":
        """Build from possibly repeated atoms, summing weights."""
        x = np.asarray(atoms, dtype=float)
        u, inv = np.unique(x, return_inverse=True)
        return cls(u, np.bincount(inv, weights=np.asarray(weights, dtype=float), minlength=len(u)))

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def variation(self) -> float:
        return float(np.abs(self.weights).sum())

    def is_probability(self, tol: float = 1e-12) -> bool:
        return bool(np.all(self.weights >= 0) and abs(self.total_mass - 1) <= tol)

    def plus_atom(self, y: float, c: float = 1.0) -> "DiscreteMeasure":
        return DiscreteMeasure.merged(np.append(self.atoms, y), np.append(self.weights, c))

    def scaled(self, c: float) -> "DiscreteMeasure":
        return DiscreteMeasure(self.atoms, c * self.weights)

    def cell_masses(self, partition: BasePartition) -> np.ndarray:
        return np.bincount(partition.cell_index(self.atoms), weights=self.weights, minlength=partition.m)

    def integrate(self, f) -> float:
        return float((self.weights * as_test_function(f)(self.atoms)).sum())

    def sup_abs(self, f) -> float:
        vals = np.abs(as_test_function(f)(self.atoms[self.weights != 0]))
        return float(vals.max()) if vals.size else 0.0

    def power_moments(self, f, nmax: int, scale: complex = 1.0) -> np.ndarray:
        """sum_i w_i (scale f(x_i))^j for j = 1..nmax."""
        g = scale * as_test_function(f)(self.atoms).astype(complex)
        j = np.arange(1, nmax + 1)
        return (self.weights[None, :] * g[None, :] ** j[:, None]).sum(axis=1)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if not self.is_probability(1e-9):
            raise ValueError("can only sample from a probability measure")
        return rng.choice(self.atoms, size=size, p=self.weights / self.weights.sum())

    def __add__(self, other):
        if isinstance(other, DiscreteMeasure):
            return DiscreteMeasure.merged(np.concatenate([self.atoms, other.atoms]),
                                          np.concatenate([self.weights, other.weights]))
        return SumMeasure([self, other])

    def __repr__(self):
        return f"DiscreteMeasure(atoms={self.atoms.tolist()}, weights={self.weights.tolist()})"


class UniformMeasure:
    """``mass`` times Lebesgue measure on [0, 1]."""

    def __init__(self, mass: float = 1.0):
        if not mass > 0:
            raise ValueError("mass must be positive")
        self.mass = float(mass)

    @property
    def total_mass(self) -> float:
        return self.mass

    @property
    def variation(self) -> float:
        return self.mass

    def cell_masses(self, partition: BasePartition) -> np.ndarray:
        return self.mass * partition.widths

    def integrate(self, f) -> float:
        return complex(self.power_moments(f, 1)[0]).real

    def sup_abs(self, f) -> float:
        return as_test_function(f).sup_norm()

    def power_moments(self, f, nmax: int, scale: complex = 1.0) -> np.ndarray:
        f = as_test_function(f)
        j = np.arange(1, nmax + 1)
        if isinstance(f, PiecewiseConstant):
            g = scale * f.values.astype(complex)
            w = self.mass * f.partition.widths
        else:
            x, w = _quadrature_points(np.linspace(0, 1, 65), panels_per_cell=4)
            g = scale * f(x.ravel()).astype(complex)
            w = self.mass * w.ravel()
        return (w[None, :] * g[None, :] ** j[:, None]).sum(axis=1)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.random(size)

    def __add__(self, other):
        return SumMeasure([self, other])

    def scaled(self, c: float) -> "UniformMeasure":
        return UniformMeasure(c * self.mass)


class SumMeasure:
    """Sum of measures; used for sigma + delta_x."""

    def __init__(self, parts):
        self.parts = list(parts)

    @property
    def total_mass(self) -> float:
        return sum(p.total_mass for p in self.parts)

    @property
    def variation(self) -> float:
        return sum(p.variation for p in self.parts)

    def cell_masses(self, partition):
        return sum(p.cell_masses(partition) for p in self.parts)

    def sup_abs(self, f) -> float:
        return max(p.sup_abs(f) for p in self.parts)

    def power_moments(self, f, nmax, scale=1.0):
        return sum(p.power_moments(f, nmax, scale) for p in self.parts)

    def __add__(self, other):
        return SumMeasure(self.parts + [other])


def delta(x: float, c: float = 1.0) -> DiscreteMeasure:
    return DiscreteMeasure([x], [c])


# -- sampling ----------------------------------------------------------------


def _check_beta_eps(beta, eps):
    if not (isinstance(beta, (int, float)) and math.isfinite(beta) and beta > 0):
        raise ValueError("beta must be a positive finite number")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")


def sample_ferguson(beta: float, base=None, eps: float = DEFAULT_EPS,
                    rng: np.random.Generator | None = None) -> DiscreteMeasure:
    """One stick-breaking draw: w_i = v_i prod_{j<i}(1 - v_j), v ~ Beta(1, beta).

    Stops once the remaining stick is below ``eps`` and adds the remainder to
    the last atom, so the total mass is 1.
    """
    _check_beta_eps(beta, eps)
    base = base if base is not None else UniformMeasure()
    rng = rng if rng is not None else np.random.default_rng()
    weights = []
    rem = 1.0
    while True:
        new_rem = rem * rng.random() ** (1.0 / beta)
        weights.append(rem - new_rem)
        rem = new_rem
        if rem < eps:
            weights[-1] += rem
            break
    atoms = base.sample(rng, len(weights))
    return DiscreteMeasure.merged(atoms, weights)


def marginalize(eta: DiscreteMeasure, partition: BasePartition) -> np.ndarray:
    """(eta X_1, ..., eta X_m)."""
    return eta.cell_masses(partition)


@dataclass
class MarginalSample:
    masses: np.ndarray  # (N, m) cell masses
    first_weight: np.ndarray  # (N,) first stick weight
    atoms: np.ndarray  # (N,) atoms used per draw


def ferguson_marginals(beta: float, partition: BasePartition, samples: int, seed: int | None = 0,
                       base=None, eps: float = DEFAULT_EPS) -> MarginalSample:
    """Cell masses of ``samples`` stick-breaking draws, batched through the kernel.

    Atom locations enter only through their cell, drawn by inverse CDF of the
    base measure's cell masses.  Deterministic per seed.
    """
    _check_beta_eps(beta, eps)
    if samples < 1:
        raise ValueError("samples must be positive")
    base = base if base is not None else UniformMeasure()
    probs = np.asarray(base.cell_masses(partition), dtype=float)
    probs = probs / probs.sum()
    cdf = np.concatenate([[0.0], np.cumsum(probs)])
    cdf[-1] = 1.0
    m = partition.m
    chunk = max(1 << 16, int(4 * (beta * math.log(1 / eps) + 2)) * 64)

    def shard(count, rng):
        out = np.zeros((count, m))
        w1 = np.zeros(count)
        na = np.zeros(count, dtype=np.int64)
        u = rng.random(chunk)
        row = 0
        while True:
            row, used = _kernels.stick_breaking_cells(float(beta), float(eps), cdf, u, out, w1, na, row)
            if row >= count:
                return out, w1, na
            u = np.concatenate([u[used:], rng.random(chunk)])

    parts = shard_map(shard, samples, seed)
    return MarginalSample(np.concatenate([p[0] for p in parts]),
                          np.concatenate([p[1] for p in parts]),
                          np.concatenate([p[2] for p in parts]))


# -- characteristic functional and its extension ------------------------------


def _phi_series(nu, f, scale: complex, tol: float, n_cap: int = N_CAP) -> complex:
    """sum_n Z_n(nu g, .., nu g^n) / (nu X)_n with g = scale * f."""
    f = as_test_function(f)
    mass = nu.total_mass
    norm_g = abs(scale) * nu.sup_abs(f)
    nterms, bound = truncation_order(norm_g, nu.variation, mass, tol, n_cap)
    rho = max(1.0, abs(mass))
    if nterms < 0:
        p = nu.power_moments(f, n_cap - 1, scale / rho)
        raise TruncationError(f"series did not reach tolerance {tol} within {n_cap} terms",
                              cycle_series(p, mass, rho, n_cap), bound)
    p = nu.power_moments(f, nterms - 1, scale / rho)
    return cycle_series(p, mass, rho, nterms)


def cf_series(nu, f, t: float, tol: float = DEFAULT_TOL) -> complex:
    """E exp(i t <eta, f>) for eta ~ D_nu, nu = beta sigma non-negative."""
    mass = nu.total_mass
    if not mass > 0:
        raise ValueError("total mass beta must be positive")
    if isinstance(nu, DiscreteMeasure) and np.any(nu.weights < 0):
        raise ValueError("cf_series needs a non-negative measure")
    return _phi_series(nu, f, 1j * t, tol)


@dataclass(frozen=True)
class MCEstimate:
    value: complex
    stderr_re: float
    stderr_im: float
    samples: int

    @property
    def stderr(self) -> float:
        return max(self.stderr_re, self.stderr_im)


def _mc_from_pairing(pair: np.ndarray, t: float) -> MCEstimate:
    z = np.exp(1j * t * pair)
    n = len(z)
    return MCEstimate(complex(z.mean()), float(z.real.std(ddof=1) / math.sqrt(n)),
                      float(z.imag.std(ddof=1) / math.sqrt(n)), n)


def cf_monte_carlo_grid(beta: float, f, ts: Sequence[float], samples: int, seed: int | None = 0,
                        base=None, eps: float = DEFAULT_EPS) -> list[MCEstimate]:
    """Monte Carlo E exp(i t <eta, f>) on a grid of t, sharing one set of draws."""
    f = as_test_function(f)
    if samples < 2:
        raise ValueError("need at least two samples")
    if isinstance(f, PiecewiseConstant):
        ms = ferguson_marginals(beta, f.partition, samples, seed, base, eps)
        pair = ms.masses @ f.values
    else:
        _check_beta_eps(beta, eps)
        rng = np.random.default_rng(seed)
        pair = np.array([sample_ferguson(beta, base, eps, rng).integrate(f) for _ in range(samples)])
    return [_mc_from_pairing(pair, float(t)) for t in ts]


def cf_monte_carlo(beta: float, f, t: float, samples: int, seed: int | None = 0,
                   base=None, eps: float = DEFAULT_EPS) -> MCEstimate:
    """Monte Carlo E exp(i t <eta, f>), eta ~ D_{beta sigma}; piecewise f uses the batch kernel."""
    return cf_monte_carlo_grid(beta, f, [t], samples, seed, base, eps)[0]


class MajorantViolation(RuntimeError):
    """|Phi[nu, f]| exceeded its hypergeometric majorant."""


def phi_majorant(nu, f, scale: complex = 1j) -> float:
    """1F1[||nu||; nu X; ||scale f||]."""
    return float(hyp1f1(nu.variation, nu.total_mass, abs(scale) * nu.sup_abs(as_test_function(f))))


def phi_extension(nu, f, tol: float = DEFAULT_TOL, scale: complex = 1j) -> complex:
    """Phi[nu, scale f] = sum_n Z_n(nu g, .., nu g^n) / (nu X)_n with g = scale f.

    With the default scale i this extends the characteristic functional: for
    a probability sigma and beta > 0, phi_extension(beta sigma, t f) equals
    cf_series(beta sigma, f, t).  The hypergeometric majorant is checked on
    every call.
    """
    if not nu.total_mass > 0:
        raise ValueError("phi_extension needs positive total mass")
    val = _phi_series(nu, f, scale, tol)
    bound = phi_majorant(nu, f, scale)
    if abs(val) > bound * (1 + 1e-12) + tol:
        raise MajorantViolation(f"|Phi| = {abs(val)} exceeds majorant {bound}")
    return val


# -- region operators --------------------------------------------------------


class Region:
    """Finite union of half-open intervals [a, b) in [0, 1]; b = 1 includes 1."""

    def __init__(self, intervals: Sequence[tuple[float, float]] = ()):
        iv = []
        for a, b in intervals:
            a, b = float(a), float(b)
            if not 0 <= a <= b <= 1:
                raise ValueError(f"bad interval [{a}, {b})")
            if b > a:
                iv.append((a, b))
        self.intervals = tuple(sorted(iv))

    @classmethod
    def parse(cls, text: str) -> "Region":
        """``a:b`` or several joined by commas."""
        out = []
        for part in text.split(","):
            a, _, b = part.partition(":")
            out.append((float(a), float(b)))
        return cls(out)

    @classmethod
    def from_cells(cls, partition: BasePartition, cells: Sequence[int]) -> "Region":
        e = partition.edges
        return cls([(e[i], e[i + 1]) for i in cells])

    def contains(self, x: float) -> bool:
        return any(a <= x < b or (b == 1.0 and x == 1.0) for a, b in self.intervals)

    def covers_cell(self, lo: float, hi: float) -> bool:
        """True if [lo, hi) lies inside the union (checked on the merged intervals)."""
        merged = []
        for a, b in self.intervals:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return any(a <= lo and hi <= b for a, b in merged)

    def minus(self, other: "Region") -> Callable[[float], bool]:
        return lambda x: self.contains(x) and not other.contains(x)


def _atoms_where(nu: DiscreteMeasure, pred: Callable[[float], bool]):
    return [(x, w) for x, w in zip(nu.atoms, nu.weights) if w != 0 and pred(x)]


def raise_region(nu: DiscreteMeasure, f, region: Region, tol: float = DEFAULT_TOL,
                 scale: complex = 1j) -> complex:
    """E_A Phi[nu, f] = sum over atoms y in A of nu({y}) Phi[nu + delta_y, f]."""
    if not isinstance(nu, DiscreteMeasure):
        raise TypeError("region operators need a finitely supported measure")
    if not nu.total_mass > 0:
        raise ValueError("raise_region needs positive total mass")
    total = 0j
    for y, w in _atoms_where(nu, region.contains):
        total += w * phi_extension(nu.plus_atom(y, 1.0), f, tol, scale)
    return total


def raise_lower_region(nu: DiscreteMeasure, f, region_a: Region, region_b: Region,
                       tol: float = DEFAULT_TOL, scale: complex = 1j) -> complex:
    """E_{A,-B} Phi[nu, f]: atoms in A minus B raise, atoms in B minus A lower.

    Needs nu X > 1 so that every nu - delta_y keeps positive mass.
    """
    if not isinstance(nu, DiscreteMeasure):
        raise TypeError("region operators need a finitely supported measure")
    if not nu.total_mass > 1:
        raise ValueError(f"raise_lower_region needs total mass > 1, got {nu.total_mass}")
    total = 0j
    for y, w in _atoms_where(nu, region_a.minus(region_b)):
        total += w * phi_extension(nu.plus_atom(y, 1.0), f, tol, scale)
    for y, w in _atoms_where(nu, region_b.minus(region_a)):
        total += w * phi_extension(nu.plus_atom(y, -1.0), f, tol, scale)
    return total


def _cells_in(region_pred_cover, partition: BasePartition) -> list[int]:
    e = partition.edges
    return [i for i in range(partition.m) if region_pred_cover(e[i], e[i + 1])]


def finite_dimensional_raise(nu, f: PiecewiseConstant, region: Region,
                             tol: float = DEFAULT_TOL) -> complex:
    """sum_{X_i in A} alpha_i Phi2[alpha + e_i; |alpha| + 1; i s], alpha = nu on f's cells."""
    alpha = np.asarray(nu.cell_masses(f.partition), dtype=float)
    s = 1j * f.values
    total = 0j
    for i in _cells_in(region.covers_cell, f.partition):
        if alpha[i] == 0:
            continue
        a = alpha.copy()
        a[i] += 1
        total += alpha[i] * humbert_phi2(a, a.sum(), s, tol=tol)
    return total


def finite_dimensional_raise_lower(nu, f: PiecewiseConstant, region_a: Region, region_b: Region,
                                   tol: float = DEFAULT_TOL) -> complex:
    """Cell-level form of E_{A,-B}: raise on cells of A minus B, lower on cells of B minus A."""
    alpha = np.asarray(nu.cell_masses(f.partition), dtype=float)
    s = 1j * f.values
    e = f.partition.edges
    total = 0j
    for i in range(f.partition.m):
        lo, hi = e[i], e[i + 1]
        in_a, in_b = region_a.covers_cell(lo, hi), region_b.covers_cell(lo, hi)
        if alpha[i] == 0 or in_a == in_b:
            continue
        a = alpha.copy()
        a[i] += 1 if in_a else -1
        total += alpha[i] * humbert_phi2(a, a.sum(), s, tol=tol)
    return total


# -- limiting posterior actions ------------------------------------------------


@dataclass
class LimitingActions:
    depths: list[int]
    x: float
    raise_values: list[complex]
    raise_target: complex
    cartan_values: list[complex]
    cartan_target: complex
    lower_values: list[complex]

    @property
    def raise_errors(self) -> list[float]:
        return [abs(v - self.raise_target) for v in self.raise_values]

    @property
    def cartan_errors(self) -> list[float]:
        return [abs(v - self.cartan_target) for v in self.cartan_values]


def cell_averages(f, partition: BasePartition) -> np.ndarray:
    """Mean of f over each cell (Gauss-Legendre, 16 nodes per cell)."""
    f = as_test_function(f)
    x, w = _quadrature_points(partition.edges)
    return (f(x.ravel()).reshape(x.shape) * w).sum(axis=1) / partition.widths


def _nudge(x: float, depth: int) -> float:
    if (x * 2**depth) % 1 == 0:
        nudged = x + 4 * np.finfo(float).eps if x < 1 else x - 4 * np.finfo(float).eps
        warnings.warn(f"x = {x} lies on a dyadic cut point; using {nudged!r} instead", stacklevel=3)
        return nudged
    return x


def limiting_posterior_action(f, x: float, depths: Sequence[int] = (3, 5, 7),
                              sigma: UniformMeasure | None = None,
                              tol: float = DEFAULT_TOL) -> LimitingActions:
    """Rescaled Raise, Cartan and Lower actions along dyadic partitions at x.

    At depth h, alpha_h are the sigma-masses of the 2^h dyadic cells and s_h
    the cell averages of f.  The actions are computed on the basis element
    f_{alpha_h} and the result is evaluated through the finite-dimensional
    characteristic functional, then divided by alpha_{h, i_h} for the cell
    i_h holding x.  Targets are Phi[sigma + delta_x, f] and Phi[sigma, f].
    """
    sigma = sigma if sigma is not None else UniformMeasure()
    depths = [int(d) for d in depths]
    if sorted(depths) != depths or len(set(depths)) != len(depths):
        raise ValueError("depths must be strictly increasing")
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    f = as_test_function(f)
    x = _nudge(float(x), max(depths))
    raise_vals, cartan_vals, lower_vals = [], [], []
    for d in depths:
        part = BasePartition.dyadic(d)
        alpha = tuple(float(a) for a in sigma.cell_masses(part))
        s = 1j * cell_averages(f, part)
        i = int(part.cell_index(x)) + 1
        v = LatticeVector.basis(alpha)
        out = []
        for op in (Raise(i), Lower(i)):
            w = apply(op, v)
            val = 0j
            for off, c in w.items():
                a = np.asarray(alpha) + np.asarray(off)
                val += c * humbert_phi2(a, a.sum(), s, tol=tol, method="cycleindex")
            out.append(val / alpha[i - 1])
        raise_vals.append(out[0])
        lower_vals.append(out[1])
        # the Cartan action is diagonal with eigenvalue |alpha| + alpha_i - 1
        eig = sum(alpha) + alpha[i - 1] - 1
        phi = humbert_phi2(alpha, sum(alpha), s, tol=tol, method="cycleindex")
        cartan_vals.append(eig * phi / alpha[i - 1])
    target_raise = phi_extension(SumMeasure([sigma, delta(x)]), f, tol)
    target_cartan = phi_extension(sigma, f, tol)
    return LimitingActions(depths, x, raise_vals, target_raise, cartan_vals, target_cartan, lower_vals)
