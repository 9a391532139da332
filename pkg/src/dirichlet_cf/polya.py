"""Polya counting of colorings and shadings.

A shading with palette ``alpha`` (alpha_c shades of color c) is a coloring
with r = |alpha| shades; two shadings are equivalent when the shade
colorings are related by the group.  The generating function by color
content is Z^G evaluated at the weighted power sums sum_c alpha_c t_c^j.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .combinatorics import (
    Permutation,
    cyclic_group,
    dihedral_group,
    symmetric_group,
)
from .cycle_index import CycleIndexPolynomial, cycle_index, cycle_index_group
from .dirichlet import pochhammer

Poly = dict[tuple[int, ...], Fraction]

BRUTE_MAX_N = 8
BRUTE_MAX_COLORINGS = 10**7


class ConsistencyError(ArithmeticError):
    """A counting polynomial came out with non-integer coefficients."""


@dataclass(frozen=True)
class ColoringGF:
    """Polynomial in t_1..t_k; key m counts objects with m_c cells of color c."""

    k: int
    n: int
    terms: Mapping[tuple[int, ...], Fraction] = field(hash=False)

    def coefficient(self, m: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def items(self):
        return sorted(self.terms.items(), reverse=True)

    def evaluate(self, t: Sequence) -> complex:
        out = 0j
        for m, c in self.terms.items():
            mono = 1.0 + 0j
            for x, e in zip(t, m):
                mono *= complex(x) ** e
            out += float(c) * mono
        return out


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def _power_sum_poly(weights: Sequence, j: int) -> Poly:
    k = len(weights)
    out: Poly = {}
    for c, w in enumerate(weights):
        if w:
            e = [0] * k
            e[c] = j
            out[tuple(e)] = Fraction(w)
    return out


def _substitute(z: CycleIndexPolynomial, weights: Sequence) -> Poly:
    """Z evaluated at t_j = sum_c weights_c x_c^j, expanded in x."""
    k = len(weights)
    one: Poly = {(0,) * k: Fraction(1)}
    cache: dict[tuple[int, int], Poly] = {}

    def power(j: int, e: int) -> Poly:
        if (j, e) not in cache:
            cache[(j, e)] = one if e == 0 else _poly_mul(power(j, e - 1), _power_sum_poly(weights, j))
        return cache[(j, e)]

    out: Poly = {}
    for lam, coef in z.terms.items():
        term: Poly = {(0,) * k: coef}
        for j, e in enumerate(lam.freq, start=1):
            if e:
                term = _poly_mul(term, power(j, e))
        for m, c in term.items():
            out[m] = out.get(m, Fraction(0)) + c
    return {m: c for m, c in out.items() if c}


def _require_integral(poly: Poly, what: str):
    bad = [m for m, c in poly.items() if c.denominator != 1]
    if bad:
        raise ConsistencyError(f"{what} has non-integer coefficient at {bad[0]}")


def coloring_gf(z: CycleIndexPolynomial, k: int) -> ColoringGF:
    """Orbit counts of k-colorings by color content: Z^G(p_1, .., p_n), p_j = sum_c t_c^j."""
    if k < 1:
        raise ValueError("need at least one color")
    poly = _substitute(z, [1] * k)
    _require_integral(poly, "coloring generating function")
    return ColoringGF(k, z.n, poly)


def _check_palette(palette: Sequence[int]) -> list[int]:
    pal = [int(a) for a in palette]
    if not pal or any(a < 1 or a != b for a, b in zip(pal, palette)):
        raise ValueError("palette entries must be positive integers")
    return pal


def shading_gf(z: CycleIndexPolynomial, palette: Sequence[int]) -> ColoringGF:
    """Orbit counts of shadings by color content: Z^G at p_j = sum_c alpha_c t_c^j."""
    pal = _check_palette(palette)
    poly = _substitute(z, pal)
    _require_integral(poly, "shading generating function")
    return ColoringGF(len(pal), z.n, poly)


def shading_probability_gf(n: int, palette: Sequence[int]) -> ColoringGF:
    """Shading polynomial of S_n scaled by n!/(|alpha|)_n.

    Its coefficients are those of the degree-n moment polynomial of
    Dir(alpha), so it is not required to be integral.
    """
    pal = _check_palette(palette)
    scale = Fraction(factorial(n), pochhammer(sum(pal), n))
    base = shading_gf(cycle_index(n), pal)
    return ColoringGF(base.k, n, {m: scale * c for m, c in base.terms.items()})


def brute_force_orbit_count(group: Sequence[Permutation], palette: Sequence[int]) -> ColoringGF:
    """Count shading orbits by direct enumeration of all shade colorings.

    Colorings are visited in lexicographic order; each unseen one is the
    least element of its orbit, whose members are then marked.  Limited to
    n <= 8 and at most 10^7 colorings.
    """
    pal = _check_palette(palette)
    group = list(group)
    n = group[0].n
    r = sum(pal)
    if n > BRUTE_MAX_N or r**n > BRUTE_MAX_COLORINGS:
        raise ValueError(f"brute force limited to n <= {BRUTE_MAX_N} and r^n <= {BRUTE_MAX_COLORINGS}")
    perms = np.array([[x - 1 for x in g.images] for g in group], dtype=np.int64)
    reps, _ = _kernels.orbit_representatives(perms, r, n)
    shade_color = np.repeat(np.arange(len(pal)), pal)
    counts: dict[tuple[int, ...], Fraction] = {}
    for code in reps:
        content = [0] * len(pal)
        x = int(code)
        for _ in range(n):
            content[shade_color[x % r]] += 1
            x //= r
        key = tuple(content)
        counts[key] = counts.get(key, Fraction(0)) + 1
    return ColoringGF(len(pal), n, counts)


def parse_group(spec: str) -> list[Permutation]:
    """Group from ``sym:n``, ``cyc:n``, ``dih:n``, ``id:n`` or ``file:<path>``.

    Files hold JSON: either a list of image lists (1-based) or an object
    with an ``elements`` key holding such a list.
    """
    kind, _, arg = spec.partition(":")
    if kind == "file":
        with open(arg) as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            data = data.get("elements")
        if not isinstance(data, list) or not data:
            raise ValueError("group file must hold a non-empty list of permutations")
        return [Permutation(tuple(int(x) for x in p)) for p in data]
    try:
        n = int(arg)
    except ValueError:
        raise ValueError(f"bad group spec {spec!r}") from None
    if n < 1:
        raise ValueError("group degree must be positive")
    builders = {
        "sym": symmetric_group,
        "cyc": cyclic_group,
        "dih": dihedral_group,
        "id": lambda m: [Permutation.identity(m)],
    }
    if kind not in builders:
        raise ValueError(f"unknown group kind {kind!r}")
    if kind == "sym" and n > 9:
        raise ValueError("sym:n limited to n <= 9 (use the closed-form cycle index instead)")
    return builders[kind](n)


def group_cycle_index(spec: str) -> CycleIndexPolynomial:
    if spec.startswith("sym:"):
        n = int(spec[4:])
        return cycle_index(n)
    return cycle_index_group(parse_group(spec))
