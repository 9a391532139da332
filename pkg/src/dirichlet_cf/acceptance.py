"""End-to-end acceptance checks, shared by the test suite and ``dirichlet-cf verify``.

Each check returns a ``CriterionResult``; nothing here raises on a failed
check.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import dsa
from .combinatorics import Permutation, compositions, cyclic_group, dihedral_group, symmetric_group
from .cycle_index import cycle_index, cycle_index_brute, cycle_index_direct, cycle_index_group, cycle_index_recurrence
from .dirichlet import (
    asymptotic_moment,
    check_map,
    confluent_limit,
    humbert_phi2,
    moment_cycle_index,
    moment_monte_carlo,
    moment_multiindex,
    moment_polynomial,
    pochhammer,
    characteristic_functional,
)
from .ferguson import (
    BasePartition,
    DiscreteMeasure,
    PiecewiseConstant,
    Region,
    UniformMeasure,
    cf_monte_carlo_grid,
    cf_series,
    ferguson_marginals,
    finite_dimensional_raise,
    finite_dimensional_raise_lower,
    limiting_posterior_action,
    raise_lower_region,
    raise_region,
)
from .polya import brute_force_orbit_count, shading_gf, shading_probability_gf


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        info = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items())
        return f"[{status}] criterion {self.number:2d} {self.name} ({self.seconds:.1f}s): {info}"

    def as_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "pass": self.passed,
                "seconds": self.seconds, "details": self.details}


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.3g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _monotone(errs, floor=1e-13) -> bool:
    return all(b < a or b <= floor for a, b in zip(errs, errs[1:]))


def _timed(number, name, fn, limit=None):
    t0 = time.perf_counter()
    passed, details = fn()
    dt = time.perf_counter() - t0
    if limit is not None:
        details["time_limit_s"] = limit
        passed = passed and dt < limit
    return CriterionResult(number, name, bool(passed), dt, details)


# -- 1 -----------------------------------------------------------------------


def check_cycle_index(seed: int = 0) -> CriterionResult:
    def run():
        rec_ok = all(cycle_index_recurrence(n) == cycle_index_direct(n) for n in range(13))
        brute_ok = all(cycle_index_brute(n) == cycle_index_direct(n) == cycle_index_recurrence(n)
                       for n in range(1, 9))
        return rec_ok and brute_ok, {"recurrence_eq_direct_n0_12": rec_ok, "brute_force_n1_8": brute_ok}

    return _timed(1, "cycle-index oracle equivalence", run, limit=5.0)


# -- 2 -----------------------------------------------------------------------


def check_moment_identity(seed: int = 0) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        instances = []
        for _ in range(200):
            k = int(rng.integers(1, 5))
            n = int(rng.integers(0, 9))
            alpha = [float(5 * (1 - rng.random())) for _ in range(k)]
            s = [float(x) for x in rng.uniform(-2, 2, size=k)]
            a = moment_multiindex(s, alpha, n)
            b = moment_cycle_index(s, alpha, n)
            worst = max(worst, abs(a - b) / (1 + abs(a)))
            instances.append((s, alpha, n, a))
        z_max = 0.0
        for j, (s, alpha, n, exact) in enumerate(instances[:20]):
            rep = moment_monte_carlo(s, alpha, n, 10**6, seed=seed * 1000 + j)
            if rep.stderr > 0:
                z_max = max(z_max, abs(rep.value - exact) / rep.stderr)
            elif rep.value != exact and abs(rep.value - exact) > 1e-12:
                z_max = np.inf
        ok = worst <= 1e-12 and z_max <= 4
        return ok, {"max_rel_route_gap": worst, "max_mc_z": z_max}

    return _timed(2, "moment identity (multiindex / cycle index / Monte Carlo)", run, limit=60.0)


# -- 3 -----------------------------------------------------------------------


def check_humbert(seed: int = 0) -> CriterionResult:
    def run():
        worst_exp = 0.0
        pts = list(np.linspace(-5, 5, 41)) + [5 * np.exp(1j * th) for th in np.linspace(0, 2 * np.pi, 13)]
        for a in (0.3, 1.0, 7.0):
            for s in pts:
                for method in ("multiindex", "cycleindex"):
                    v = humbert_phi2([a], a, [s], method=method)
                    worst_exp = max(worst_exp, abs(v - np.exp(s)))
        rng = np.random.default_rng(seed)
        worst_egf = 0.0
        for _ in range(5):
            k = int(rng.integers(1, 4))
            alpha = rng.uniform(0.2, 3, size=k)
            s = rng.uniform(-2, 2, size=k)
            p = [(alpha * s**j).sum() for j in range(1, 31)]
            # Z_n(p) / (|alpha|)_n through the exact cycle-index polynomials
            coef = [cycle_index(n).evaluate(p) / pochhammer(float(alpha.sum()), n) for n in range(31)]
            for t in np.linspace(-2, 2, 21):
                lhs = humbert_phi2(alpha, alpha.sum(), t * s, tol=1e-15, method="multiindex")
                rhs = sum(t**n * c for n, c in enumerate(coef))
                worst_egf = max(worst_egf, abs(lhs - rhs))
        ok = worst_exp <= 1e-10 and worst_egf <= 1e-10
        return ok, {"max_err_vs_exp": worst_exp, "max_err_egf": worst_egf}

    return _timed(3, "Humbert series", run)


# -- 4 -----------------------------------------------------------------------

BETAS_UP = (1e1, 1e2, 1e3, 1e4)
BETAS_DOWN = (1e-1, 1e-2, 1e-3, 1e-4)


def check_limits(seed: int = 0) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        cases = []
        for _ in range(4):
            k = int(rng.integers(2, 5))
            alpha = rng.uniform(0.2, 3, size=k)
            s = rng.uniform(-1, 1, size=k)
            s = 2 * s / np.abs(s).max() * rng.uniform(0.3, 1)
            cases.append((alpha, s))
        cases.append((np.array([1.0, 2.0]), np.array([2.0j, -1.5j])))
        ok = True
        finals = []
        for alpha, s in cases:
            for betas, regime in ((BETAS_UP, "beta_to_infinity"), (BETAS_DOWN, "beta_to_zero")):
                lim = confluent_limit(alpha, s, regime)
                errs = [abs(humbert_phi2(b * alpha, b * alpha.sum(), s) - lim) for b in betas]
                ok &= _monotone(errs) and errs[-1] < 1e-2
                finals.append(errs[-1])
                for n in (2, 3, 4):
                    lim_n = asymptotic_moment(list(s), list(alpha), n, regime)
                    errs = [abs(moment_cycle_index(list(s), list(b * alpha), n) - lim_n) for b in betas]
                    ok &= _monotone(errs) and errs[-1] < 1e-2
                    finals.append(errs[-1])
        # same pattern for the Ferguson characteristic functional
        f = PiecewiseConstant(BasePartition([0.2, 0.5, 0.8]), [2.0, -1.0, 0.5, -2.0])
        w = f.partition.widths
        cf_ok = True
        for t in (0.4, 1.0):
            up = np.exp(1j * t * (w * f.values).sum())
            down = (w * np.exp(1j * t * f.values)).sum()
            e_up = [abs(cf_series(UniformMeasure(b), f, t) - up) for b in BETAS_UP]
            e_down = [abs(cf_series(UniformMeasure(b), f, t) - down) for b in BETAS_DOWN]
            cf_ok &= _monotone(e_up) and _monotone(e_down) and e_up[-1] < 1e-2 and e_down[-1] < 1e-2
            finals += [e_up[-1], e_down[-1]]
        return ok and cf_ok, {"finite_dim": bool(ok), "cf_series": bool(cf_ok), "max_final_error": max(finals)}

    return _timed(4, "confluent / asymptotic limits", run)


# -- 5 -----------------------------------------------------------------------

MAP_ALPHA = (Fraction(1, 2), Fraction(1, 3), Fraction(2), Fraction(5, 4))


def check_mapping(seed: int = 0) -> CriterionResult:
    def run():
        maps = 0
        literal = 0
        relabelled = 0
        contraction = 0
        moments = 0
        for k in (2, 3, 4):
            for g in product(range(1, k + 1), repeat=k):
                res = check_map(g, MAP_ALPHA[:k])
                maps += 1
                literal += res.literal
                relabelled += res.relabelled
                contraction += res.contraction
                moments += res.moments
        ok = literal == maps and relabelled == maps and contraction == maps and moments == maps
        return ok, {"maps": maps, "literal_star_pi_eq_g": literal, "relabelled_eq_g": relabelled,
                    "contraction_ok": contraction, "moment_polys_equal": moments}

    return _timed(5, "mapping theorem", run, limit=10.0)


# -- 6 -----------------------------------------------------------------------


def _region_checks(rng, applications: int = 1000) -> tuple[int, int]:
    """(applications checked, violations) for the subspace-preservation predicates."""
    bad = 0
    done = 0
    while done < applications:
        k = int(rng.integers(2, 5))
        a = rng.uniform(0.2, 1, size=k)
        base = tuple(float(x) for x in a / a.sum())
        off = tuple(int(x) for x in rng.integers(-1, 3, size=k))
        pt = dsa.LatticePoint(base, off)
        v = dsa.LatticeVector.basis(base, off)
        i = int(rng.integers(1, k + 1))
        j = int(rng.choice([x for x in range(1, k + 1) if x != i]))
        kind = done % 4
        op = (dsa.Raise(i), dsa.Cartan(i), dsa.Lower(i), dsa.Mixed(i, j))[kind]
        img = [q for q in dsa.apply(op, v).support()]
        H = dsa.RegionPredicate("H")
        LP = dsa.RegionPredicate("LambdaPlus")
        if dsa.region_membership(pt, H) and kind in (0, 1):
            bad += not all(dsa.region_membership(q, H) for q in img)
        if dsa.region_membership(pt, LP):
            bad += not all(dsa.region_membership(q, LP) for q in img)
        if kind == 3:
            level = float(sum(pt.alpha))
            M = dsa.RegionPredicate("IsoplethM", level)
            bad += not all(dsa.region_membership(q, M) for q in img)
        done += 1
    return done, bad


def check_dsa(seed: int = 0, trials: int = 200) -> CriterionResult:
    def run():
        worst_table = 0.0
        worst_serre = 0.0
        ok = True
        for k in (2, 3, 4):
            alpha = dsa.generic_alpha(k, seed)
            for rep in dsa.verify_commutation_table(alpha, trials=trials, seed=seed):
                worst_table = max(worst_table, rep.max_error)
                ok &= rep.passed
            for rep in dsa.verify_serre(alpha, seed=seed, trials=trials):
                worst_serre = max(worst_serre, rep.max_error)
                ok &= rep.passed
            ok &= dsa.faithfulness_spot_check(tuple(1.5 + 0.25 * i for i in range(k)))
        rng = np.random.default_rng(seed)
        applications, violations = _region_checks(rng)
        # posterior operator, exact rational arithmetic
        post_ok = True
        for _ in range(50):
            k = int(rng.integers(1, 5))
            alpha = tuple(Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20))) for _ in range(k))
            p = tuple(int(x) for x in rng.integers(0, 4, size=k))
            scalar, offset = dsa.posterior_operator(p)
            v = dsa.apply_word(dsa.posterior_word(p), dsa.LatticeVector.basis(alpha))
            expect = 1
            for a, n in zip(alpha, p):
                expect *= pochhammer(a, n)
            post_ok &= dict(v.items()) == {offset: expect} and scalar(alpha) == expect
        # Weyl conjugation
        weyl_err = 0.0
        for _ in range(100):
            k = int(rng.integers(2, 5))
            alpha = dsa.generic_alpha(k, int(rng.integers(0, 10**6)))
            pi = Permutation(tuple(int(x) + 1 for x in rng.permutation(k)))
            anchored = dsa.permute_params(pi, alpha)
            w = dsa.random_lattice_vector(anchored, rng)
            i = int(rng.integers(1, k + 1))
            for op, image in ((dsa.Raise(i), dsa.Raise(pi(i))), (dsa.Cartan(i), dsa.Cartan(pi(i))),
                              (dsa.Lower(i), dsa.Lower(pi(i)))):
                lhs = dsa.weyl_permute(pi, op(dsa.weyl_permute(pi.inverse(), w)))
                weyl_err = max(weyl_err, lhs.max_abs_diff(image(w)))
        passed = ok and violations == 0 and post_ok and weyl_err <= 1e-12
        return passed, {"table_max_err": worst_table, "serre_max_err": worst_serre,
                        "region_applications": applications, "region_violations": violations,
                        "posterior_exact": bool(post_ok), "weyl_max_err": weyl_err}

    return _timed(6, "dynamical symmetry algebra", run)


# -- 7 -----------------------------------------------------------------------


def check_polya(seed: int = 0) -> CriterionResult:
    def run():
        cases = 0
        mismatches = 0
        prob_mismatches = 0
        for n in range(1, 7):
            groups = {"sym": symmetric_group(n), "cyc": cyclic_group(n), "dih": dihedral_group(n)}
            indices = {name: cycle_index_group(g) for name, g in groups.items()}
            for k in range(1, 4):
                for palette in product((1, 2, 3), repeat=k):
                    for name, g in groups.items():
                        cases += 1
                        brute = brute_force_orbit_count(g, palette)
                        mismatches += dict(brute.terms) != dict(shading_gf(indices[name], palette).terms)
                    prob = shading_probability_gf(n, palette)
                    poly = {m: Fraction(c) for m, c in moment_polynomial([Fraction(a) for a in palette], n).items()}
                    prob_mismatches += dict(prob.terms) != {m: c for m, c in poly.items() if c}
        ok = mismatches == 0 and prob_mismatches == 0
        return ok, {"cases": cases, "orbit_mismatches": mismatches, "probability_gf_mismatches": prob_mismatches}

    return _timed(7, "Polya / shading", run)


# -- 8 -----------------------------------------------------------------------

PARTITIONS_8 = (BasePartition([0.3]), BasePartition([0.1, 0.35, 0.7]))


def check_ferguson_marginals(seed: int = 0, samples: int = 10**5) -> CriterionResult:
    def run():
        z_max = 0.0
        w_z = 0.0
        tested = 0
        for b_idx, beta in enumerate((0.5, 1.0, 5.0)):
            for p_idx, part in enumerate(PARTITIONS_8):
                ms = ferguson_marginals(beta, part, samples, seed=seed * 100 + 10 * b_idx + p_idx)
                alpha = beta * part.widths
                y = ms.masses
                for order in (1, 2, 3):
                    for m in compositions(order, part.m):
                        vals = np.prod(y ** np.asarray(m)[None, :], axis=1)
                        exact = np.prod([pochhammer(float(a), mi) for a, mi in zip(alpha, m)])
                        exact /= pochhammer(float(alpha.sum()), order)
                        se = vals.std(ddof=1) / np.sqrt(samples)
                        z_max = max(z_max, abs(vals.mean() - exact) / se)
                        tested += 1
                w = ms.first_weight
                w_z = max(w_z, abs(w.mean() - 1 / (1 + beta)) / (w.std(ddof=1) / np.sqrt(samples)))
        return z_max <= 4 and w_z <= 4, {"moments_tested": tested, "max_moment_z": z_max, "max_w1_z": w_z}

    return _timed(8, "Ferguson marginals", run)


# -- 9 -----------------------------------------------------------------------


def cf_grid():
    """20 (beta, t, f) combinations with piecewise-constant f."""
    f1 = PiecewiseConstant(BasePartition([0.25, 0.5, 0.75]), [1.0, -0.5, 0.3, 0.0])
    f2 = PiecewiseConstant(BasePartition([0.4]), [2.0, -1.0])
    f3 = PiecewiseConstant(BasePartition([0.1, 0.2, 0.6, 0.9]), [-1.5, 0.5, 1.0, -0.2, 2.5])
    grid = []
    for beta, f in ((0.5, f1), (1.0, f2), (5.0, f3), (2.0, f1)):
        for t in (-3.0, -0.5, 0.7, 2.0, 4.0):
            grid.append((beta, t, f))
    return grid


def check_cf(seed: int = 0, samples: int = 10**5) -> CriterionResult:
    def run():
        grid = cf_grid()
        z_max = 0.0
        fd_gap = 0.0
        groups: dict[int, list] = {}
        for idx, (beta, t, f) in enumerate(grid):
            groups.setdefault(id(f) * 31 + hash(beta), []).append((idx, beta, t, f))
        for g_idx, items in enumerate(groups.values()):
            beta, f = items[0][1], items[0][3]
            ests = cf_monte_carlo_grid(beta, f, [it[2] for it in items], samples, seed=seed * 100 + g_idx)
            for (idx, _, t, _), est in zip(items, ests):
                series = cf_series(UniformMeasure(beta), f, t)
                fd = characteristic_functional(beta * f.partition.widths, t * f.values)
                fd_gap = max(fd_gap, abs(series - fd))
                z_max = max(z_max, abs(series.real - est.value.real) / est.stderr_re,
                            abs(series.imag - est.value.imag) / est.stderr_im)
        return z_max <= 4 and fd_gap <= 1e-12, {"combos": len(grid), "max_mc_z": z_max,
                                                 "max_gap_vs_humbert": fd_gap}

    return _timed(9, "characteristic functional", run)


# -- 10 ----------------------------------------------------------------------


def check_region_operators(seed: int = 0) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        f = PiecewiseConstant(BasePartition([0.25, 0.5, 0.75]), [1.0, -0.5, 0.3, 0.8])
        regions = [Region.parse("0.0:0.5"), Region.parse("0.5:1.0"), Region.parse("0.25:0.75"),
                   Region.parse("0.0:0.25,0.75:1.0"), Region.parse("0.0:1.0"), Region()]
        raise_gap = 0.0
        two_path_gap = 0.0
        rejects = True
        for _ in range(5):
            atoms = rng.uniform(0, 1, size=6)
            weights = rng.uniform(0.1, 1.0, size=6)
            nu = DiscreteMeasure(atoms, weights / weights.sum() * 2.0)  # nu X = 2
            for A in regions:
                raise_gap = max(raise_gap, abs(raise_region(nu, f, A) - finite_dimensional_raise(nu, f, A)))
                for B in regions:
                    lhs = raise_lower_region(nu, f, A, B)
                    rhs = finite_dimensional_raise_lower(nu, f, A, B)
                    two_path_gap = max(two_path_gap, abs(lhs - rhs))
        for mass in (1.0, 0.5):
            nu_small = DiscreteMeasure([0.1, 0.4, 0.6, 0.9], [mass / 4] * 4)
            try:
                raise_lower_region(nu_small, f, regions[0], regions[1])
                rejects = False
            except ValueError:
                pass

        def g(y):
            return np.cos(2 * np.pi * y) * np.sin(np.pi * y) ** 2

        # errors measured uniformly over a grid of non-dyadic points
        xs = (np.arange(17) + 0.37) / 17
        runs = [limiting_posterior_action(g, x, (3, 5, 7)) for x in xs]
        raise_err = [max(r.raise_errors[d] for r in runs) for d in range(3)]
        cartan_err = [max(r.cartan_errors[d] for r in runs) for d in range(3)]
        lim_ok = _monotone(raise_err, floor=0) and _monotone(cartan_err, floor=0)
        lower_exact = all(v == 0 for r in runs for v in r.lower_values)
        worst_final = max(raise_err[-1], cartan_err[-1])
        ok = raise_gap <= 1e-12 and two_path_gap <= 1e-12 and rejects and lim_ok and lower_exact
        return ok, {"raise_gap": raise_gap, "raise_lower_gap": two_path_gap, "rejects_mass_le_1": rejects,
                    "limits_decreasing": bool(lim_ok), "raise_errors": [round(e, 6) for e in raise_err],
                    "lower_exactly_zero": bool(lower_exact),
                    "final_limit_error": worst_final}

    return _timed(10, "region operators and limits", run)


CHECKS = {
    1: check_cycle_index,
    2: check_moment_identity,
    3: check_humbert,
    4: check_limits,
    5: check_mapping,
    6: check_dsa,
    7: check_polya,
    8: check_ferguson_marginals,
    9: check_cf,
    10: check_region_operators,
}


def run_all(seed: int = 0, only=None) -> list[CriterionResult]:
    return [CHECKS[n](seed) for n in sorted(CHECKS) if only is None or n in only]
