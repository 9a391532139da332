"""Ladder operators on the parameter lattice alpha + Z^k.

Vectors are finite combinations of symbolic basis elements f_{alpha'} with
alpha' = base + offset.  The four operator families act by

    Raise(i)    f_a = a_i f_{a+e_i}
    Lower(i)    f_a = (1 - |a|) f_{a-e_i}
    Mixed(i,j)  f_a = a_i f_{a+e_i-e_j}
    Cartan(i)   f_a = (|a| + a_i - 1) f_a

and span a copy of sl_{k+1}.  The verification helpers check the bracket
table, the Chevalley-Serre relations and the structure constants of
sl_{k+1} on random sparse vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .combinatorics import Permutation

PRUNE = 1e-15
TOL = 1e-10

Offset = tuple[int, ...]


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class LatticePoint:
    base: tuple
    offset: Offset

    @property
    def alpha(self) -> tuple:
        return tuple(b + o for b, o in zip(self.base, self.offset))


class LatticeVector:
    """Sparse combination of basis elements f_{base+offset}; immutable."""

    __slots__ = ("base", "_c")

    def __init__(self, base: Sequence, coeffs: Mapping[Offset, object] | None = None):
        self.base = tuple(base)
        c = {}
        for off, v in (coeffs or {}).items():
            off = tuple(int(o) for o in off)
            if len(off) != len(self.base):
                raise ValueError("offset length differs from the anchor dimension")
            if v == 0 or (not _is_exact(v) and abs(v) < PRUNE):
                continue
            c[off] = v
        self._c = c

    @classmethod
    def _raw(cls, base: tuple, coeffs: dict) -> "LatticeVector":
        """Trusted constructor: offsets already tuples of ints; only prunes zeros."""
        obj = cls.__new__(cls)
        obj.base = base
        obj._c = {o: v for o, v in coeffs.items()
                  if not (v == 0 or (not _is_exact(v) and abs(v) < PRUNE))}
        return obj

    @classmethod
    def basis(cls, base: Sequence, offset: Sequence[int] | None = None, coeff=1) -> "LatticeVector":
        k = len(base)
        off = tuple(offset) if offset is not None else (0,) * k
        return cls(base, {off: coeff})

    @property
    def k(self) -> int:
        return len(self.base)

    def items(self):
        return self._c.items()

    def support(self) -> list[LatticePoint]:
        return [LatticePoint(self.base, off) for off in self._c]

    def coefficient(self, offset: Sequence[int]):
        return self._c.get(tuple(offset), 0)

    def __len__(self):
        return len(self._c)

    def _same_anchor(self, other: "LatticeVector"):
        if self.base != other.base:
            raise ValueError("vectors live on different lattices")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._same_anchor(other)
        c = dict(self._c)
        for off, v in other._c.items():
            c[off] = c.get(off, 0) + v
        return LatticeVector._raw(self.base, c)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector._raw(self.base, {o: -v for o, v in self._c.items()})

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return self + (-other)

    def __rmul__(self, scalar) -> "LatticeVector":
        return LatticeVector._raw(self.base, {o: scalar * v for o, v in self._c.items()})

    def max_abs_diff(self, other: "LatticeVector") -> float:
        self._same_anchor(other)
        keys = set(self._c) | set(other._c)
        if not keys:
            return 0.0
        return max(float(abs(self._c.get(o, 0) - other._c.get(o, 0))) for o in keys)

    def __eq__(self, other):
        if not isinstance(other, LatticeVector):
            return NotImplemented
        return self.base == other.base and self._c == other._c

    def __repr__(self):
        return f"LatticeVector(base={self.base}, coeffs={self._c})"


# -- operators -------------------------------------------------------------


@dataclass(frozen=True)
class LadderOperator:
    kind: str  # "raise" | "lower" | "mixed" | "cartan"
    i: int
    j: int = 0

    def __post_init__(self):
        if self.kind not in ("raise", "lower", "mixed", "cartan"):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.i < 1 or (self.kind == "mixed" and (self.j < 1 or self.i == self.j)):
            raise ValueError(f"bad indices for {self.kind}: {self.i}, {self.j}")

    def __call__(self, v: LatticeVector) -> LatticeVector:
        return apply(self, v)

    def __str__(self):
        names = {"raise": "E_{}", "lower": "E_-{}", "cartan": "J_{}"}
        if self.kind == "mixed":
            return f"E_{self.i},-{self.j}"
        return names[self.kind].format(self.i)


def Raise(i: int) -> LadderOperator:
    return LadderOperator("raise", i)


def Lower(i: int) -> LadderOperator:
    return LadderOperator("lower", i)


def Mixed(i: int, j: int) -> LadderOperator:
    return LadderOperator("mixed", i, j)


def Cartan(i: int) -> LadderOperator:
    return LadderOperator("cartan", i)


def apply(op: LadderOperator, v: LatticeVector) -> LatticeVector:
    k = v.k
    if op.i > k or op.j > k:
        raise ValueError(f"operator {op} out of range for k={k}")
    i = op.i - 1
    j = op.j - 1
    base = v.base
    sb = sum(base)
    out: dict[Offset, object] = {}
    for off, c in v.items():
        a_i = base[i] + off[i]
        if op.kind == "raise":
            new = off[:i] + (off[i] + 1,) + off[i + 1:]
            coef = a_i
        elif op.kind == "lower":
            new = off[:i] + (off[i] - 1,) + off[i + 1:]
            coef = 1 - (sb + sum(off))
        elif op.kind == "mixed":
            lst = list(off)
            lst[i] += 1
            lst[j] -= 1
            new = tuple(lst)
            coef = a_i
        else:
            new = off
            coef = sb + sum(off) + a_i - 1
        out[new] = out.get(new, 0) + coef * c
    return LatticeVector._raw(base, out)


Op = Callable[[LatticeVector], LatticeVector]


def commutator(a: Op, b: Op, v: LatticeVector) -> LatticeVector:
    """[a, b] v = a(b(v)) - b(a(v))."""
    return a(b(v)) - b(a(v))


def bracket(a: Op, b: Op) -> Op:
    """The operator [a, b]."""
    return lambda v: commutator(a, b, v)


def combination(terms: Iterable[tuple[object, Op]]) -> Op:
    """Linear combination sum_c c * op."""
    terms = list(terms)

    def run(v: LatticeVector) -> LatticeVector:
        out = LatticeVector._raw(v.base, {})
        for c, op in terms:
            out = out + c * op(v)
        return out

    return run


def zero_op(v: LatticeVector) -> LatticeVector:
    return LatticeVector._raw(v.base, {})


def _raise_or_lower(index: int, sign: int) -> LadderOperator:
    return Raise(index) if sign > 0 else Lower(index)


def _e(i: int, j: int) -> Op:
    """E_{i,-j} with the index-0 conventions E_{i,0} = Raise(i), E_{0,-j} = Lower(j)."""
    if j == 0:
        return Raise(i)
    if i == 0:
        return Lower(j)
    return Mixed(i, j)


def _j(i: int) -> Op:
    return zero_op if i == 0 else Cartan(i)


def _jdiff(i: int, j: int) -> Op:
    return combination([(1, _j(i)), (-1, _j(j))])


# -- verification ------------------------------------------------------------


@dataclass
class RelationCheck:
    relation: str
    max_error: float
    passed: bool
    cases: int = 0

    def as_dict(self) -> dict:
        return {"relation": self.relation, "max_error": self.max_error, "pass": self.passed,
                "cases": self.cases}


def random_lattice_vector(base: Sequence, rng: np.random.Generator, terms: int = 3,
                          radius: int = 2) -> LatticeVector:
    """Sparse vector with ``terms`` random offsets in [-radius, radius]^k and complex coefficients."""
    k = len(base)
    offs = rng.integers(-radius, radius + 1, size=(terms, k))
    coef = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    c: dict[Offset, complex] = {}
    for o, v in zip(offs, coef):
        key = tuple(int(x) for x in o)
        c[key] = c.get(key, 0) + complex(v)
    return LatticeVector(base, c)


def generic_alpha(k: int, seed: int = 0) -> tuple[float, ...]:
    """Normalised random point of the open simplex."""
    a = np.random.default_rng(seed).uniform(0.2, 1.0, size=k)
    return tuple(float(x) for x in a / a.sum())


class _Tracker:
    def __init__(self, tol):
        self.tol = tol
        self.rows: dict[str, RelationCheck] = {}

    def check(self, name: str, lhs: Op, rhs: Op, v: LatticeVector):
        err = lhs(v).max_abs_diff(rhs(v))
        row = self.rows.setdefault(name, RelationCheck(name, 0.0, True))
        row.max_error = max(row.max_error, err)
        row.cases += 1
        row.passed = row.max_error <= self.tol

    def report(self) -> list[RelationCheck]:
        return list(self.rows.values())


def _delta(a: int, b: int) -> int:
    return int(a == b and a != 0)


def verify_commutation_table(alpha: Sequence | None = None, trials: int = 200, seed: int = 0,
                             k: int | None = None, tol: float = TOL) -> list[RelationCheck]:
    """Check every bracket family on ``trials`` random sparse vectors.

    Indices i, j range over 0..k with index 0 standing for the simplex
    corner (E_{i,0} = Raise(i), E_{0,-j} = Lower(j), J_0 = 0); p, q range
    over 1..k.  The Cartan-ladder family uses the factor (1 + delta_ip),
    which is what the basis actions give.
    """
    if alpha is None:
        alpha = generic_alpha(k or 3, seed)
    alpha = tuple(alpha)
    k = len(alpha)
    rng = np.random.default_rng(seed)
    tr = _Tracker(tol)
    idx0 = range(0, k + 1)
    idx1 = range(1, k + 1)
    for _ in range(trials):
        v = random_lattice_vector(alpha, rng)
        # [J_i - J_j, E_{p,-q}] = (d_ip - d_iq - d_jp + d_jq) E_{p,-q}
        for i, j in product(idx0, idx0):
            if i == j:
                continue
            for p, q in product(idx1, idx1):
                if p == q:
                    continue
                c = _delta(i, p) - _delta(i, q) - _delta(j, p) + _delta(j, q)
                tr.check("[J_i-J_j, E_{p,-q}]", bracket(_jdiff(i, j), Mixed(p, q)),
                         combination([(c, Mixed(p, q))]), v)
        # [E_{i,-j}, E_{p,-q}]
        for i, j in product(idx0, idx0):
            if i == j:
                continue
            for p, q in product(idx1, idx1):
                if p == q:
                    continue
                if i == q and j == p:
                    rhs = _jdiff(i, j)
                elif i == q:
                    rhs = combination([(-1, _e(p, j))])
                elif j == p:
                    rhs = _e(i, q)
                else:
                    rhs = zero_op
                tr.check("[E_{i,-j}, E_{p,-q}]", bracket(_e(i, j), Mixed(p, q)), rhs, v)
        for i, p in product(idx1, idx1):
            rhs = Cartan(i) if i == p else Mixed(i, p)
            tr.check("[E_i, E_-p]", bracket(Raise(i), Lower(p)), rhs, v)
            for sign in (1, -1):
                c = sign * (1 + (i == p))
                tr.check("[J_i, E_+-p]", bracket(Cartan(i), _raise_or_lower(p, sign)),
                         combination([(c, _raise_or_lower(p, sign))]), v)
            tr.check("[E_i, E_p]", bracket(Raise(i), Raise(p)), zero_op, v)
            tr.check("[E_-i, E_-p]", bracket(Lower(i), Lower(p)), zero_op, v)
        for i, j, p in product(idx0, idx0, idx1):
            if i != j:
                tr.check("[J_i-J_j, J_p]", bracket(_jdiff(i, j), Cartan(p)), zero_op, v)
    return tr.report()


# -- sl_{k+1} structure ----------------------------------------------------


def rho_elementary(a: int, b: int) -> Op:
    """Image of the elementary matrix E_{ab} (0-based rows, a != b) under the representation."""
    if a == 0:
        return Raise(b)
    if b == 0:
        return Lower(a)
    return combination([(-1, Mixed(b, a))])


def simple_root_generators(k: int) -> tuple[list[Op], list[Op], list[Op]]:
    """Chevalley generators x_j, y_j, h_j = [x_j, y_j] for j = 1..k."""
    xs = [rho_elementary(j - 1, j) for j in range(1, k + 1)]
    ys = [rho_elementary(j, j - 1) for j in range(1, k + 1)]
    hs = [bracket(x, y) for x, y in zip(xs, ys)]
    return xs, ys, hs


def cartan_matrix(k: int) -> np.ndarray:
    a = 2 * np.eye(k, dtype=int)
    for i in range(k - 1):
        a[i, i + 1] = a[i + 1, i] = -1
    return a


def _rho_matrix(m: np.ndarray) -> Op:
    """Image of a traceless (k+1)x(k+1) matrix, via h_{0,i} = E_00 - E_ii -> Cartan(i)."""
    n = m.shape[0]
    terms = []
    for a in range(n):
        for b in range(n):
            if a != b and m[a, b] != 0:
                terms.append((m[a, b], rho_elementary(a, b)))
    for i in range(1, n):
        if m[i, i] != 0:
            terms.append((-m[i, i], Cartan(i)))
    return combination(terms)


def verify_serre(alpha: Sequence | None = None, seed: int = 0, trials: int = 100,
                 k: int | None = None, tol: float = TOL) -> list[RelationCheck]:
    """Chevalley-Serre relations of type A_k plus the sl_{k+1} structure constants."""
    if alpha is None:
        alpha = generic_alpha(k or 3, seed)
    alpha = tuple(alpha)
    k = len(alpha)
    rng = np.random.default_rng(seed)
    xs, ys, hs = simple_root_generators(k)
    a = cartan_matrix(k)
    n = k + 1
    basis = []
    for p in range(n):
        for q in range(n):
            if p != q:
                m = np.zeros((n, n), dtype=int)
                m[p, q] = 1
                basis.append(m)
    for i in range(1, n):
        m = np.zeros((n, n), dtype=int)
        m[0, 0], m[i, i] = 1, -1
        basis.append(m)
    images = [_rho_matrix(m) for m in basis]
    tr = _Tracker(tol)
    for _ in range(trials):
        v = random_lattice_vector(alpha, rng)
        for i in range(k):
            for j in range(k):
                tr.check("[h_i, h_j] = 0", bracket(hs[i], hs[j]), zero_op, v)
                rhs = hs[i] if i == j else zero_op
                tr.check("[x_i, y_j] = delta_ij h_i", bracket(xs[i], ys[j]), rhs, v)
                tr.check("[h_i, x_j] = a_ij x_j", bracket(hs[i], xs[j]),
                         combination([(int(a[i, j]), xs[j])]), v)
                tr.check("[h_i, y_j] = -a_ij y_j", bracket(hs[i], ys[j]),
                         combination([(-int(a[i, j]), ys[j])]), v)
                if i == j:
                    continue
                if a[i, j] == -1:
                    tr.check("ad(x_i)^2 x_j = 0 (adjacent)", bracket(xs[i], bracket(xs[i], xs[j])), zero_op, v)
                    tr.check("ad(y_i)^2 y_j = 0 (adjacent)", bracket(ys[i], bracket(ys[i], ys[j])), zero_op, v)
                else:
                    tr.check("[x_i, x_j] = 0 (non-adjacent)", bracket(xs[i], xs[j]), zero_op, v)
                    tr.check("[y_i, y_j] = 0 (non-adjacent)", bracket(ys[i], ys[j]), zero_op, v)
        # structure constants: rho([X, Y]) = [rho X, rho Y] on a sample of pairs
        for _ in range(4):
            s, t = rng.integers(0, len(basis), size=2)
            mx = basis[s] @ basis[t] - basis[t] @ basis[s]
            tr.check("sl(k+1) brackets", _rho_matrix(mx), bracket(images[s], images[t]), v)
    return tr.report()


def faithfulness_spot_check(alpha: Sequence, offset: Sequence[int] | None = None) -> bool:
    """Distinct basis operators give distinct images of a single basis vector."""
    k = len(alpha)
    v = LatticeVector.basis(alpha, offset)
    ops = [Raise(i) for i in range(1, k + 1)] + [Lower(i) for i in range(1, k + 1)]
    ops += [Cartan(i) for i in range(1, k + 1)]
    ops += [Mixed(i, j) for i in range(1, k + 1) for j in range(1, k + 1) if i != j]
    imgs = [op(v) for op in ops]
    for a in range(len(imgs)):
        if len(imgs[a]) == 0:
            return False
        for b in range(a + 1, len(imgs)):
            if imgs[a].max_abs_diff(imgs[b]) <= TOL if imgs[a].base == imgs[b].base else False:
                return False
    return True


# -- posterior operators, regions, Weyl action ------------------------------


def posterior_operator(p: Sequence[int]) -> tuple[Callable[[Sequence], object], Offset]:
    """Scalar and offset of Raise(1)^{p_1} ... Raise(k)^{p_k} applied to f_alpha.

    The scalar is the multivariate rising factorial (alpha)_p, evaluated
    exactly for rational alpha.
    """
    p = tuple(int(x) for x in p)
    if any(x < 0 for x in p):
        raise ValueError("p must be non-negative")

    def scalar(alpha: Sequence):
        if len(alpha) != len(p):
            raise ValueError("alpha and p have different lengths")
        out = 1
        for a, n in zip(alpha, p):
            for j in range(n):
                out = out * (a + j)
        return out

    return scalar, p


def posterior_word(p: Sequence[int]) -> list[LadderOperator]:
    """Raise operators applied right to left: Raise(k)^{p_k} first."""
    word = []
    for i, n in enumerate(p, start=1):
        word.extend([Raise(i)] * n)
    return word


def apply_word(word: Sequence[Op], v: LatticeVector) -> LatticeVector:
    for op in reversed(word):
        v = op(v)
    return v


@dataclass(frozen=True)
class RegionPredicate:
    kind: str  # "LambdaPlus" | "H" | "IsoplethM"
    level: float | None = None

    def __post_init__(self):
        if self.kind not in ("LambdaPlus", "H", "IsoplethM"):
            raise ValueError(f"unknown region {self.kind!r}")
        if self.kind == "IsoplethM" and self.level is None:
            raise ValueError("IsoplethM needs a level")


def _real(x) -> float:
    return float(x.real) if isinstance(x, complex) else float(x)


SUM_TOL = 1e-12


def region_membership(pt: LatticePoint, pred: RegionPredicate) -> bool:
    """Membership of alpha' = base + offset.

    |alpha'| is |base| plus an integer; |base| of a floating anchor is only
    known up to rounding, so the sign and level tests on |alpha'| allow a
    1e-12 (relative) slack.  Coordinate tests are exact.
    """
    alpha = pt.alpha
    total = _real(sum(pt.base)) + sum(pt.offset)
    slack = SUM_TOL * max(1.0, abs(total))
    if pred.kind == "LambdaPlus":
        return total > slack
    if pred.kind == "H":
        return total > slack and all(_real(a) > 0 for a in alpha)
    return abs(total - pred.level) <= SUM_TOL * max(1.0, abs(pred.level))


def permute_params(pi: Permutation, alpha: Sequence) -> tuple:
    """(pi_# alpha)_{pi(m)} = alpha_m."""
    out = [None] * len(alpha)
    for m, a in enumerate(alpha, start=1):
        out[pi(m) - 1] = a
    return tuple(out)


def weyl_permute(pi: Permutation, v: LatticeVector) -> LatticeVector:
    """f_{alpha'} -> f_{pi_# alpha'}, landing on the lattice anchored at pi_# base."""
    if pi.n != v.k:
        raise ValueError("permutation degree differs from k")
    base = permute_params(pi, v.base)
    return LatticeVector(base, {permute_params(pi, off): c for off, c in v.items()})
