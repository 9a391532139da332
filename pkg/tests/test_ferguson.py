import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dirichlet_cf.dirichlet import characteristic_functional, humbert_phi2, pochhammer
from dirichlet_cf.ferguson import (
    BasePartition,
    ContinuousFunction,
    DiscreteMeasure,
    MajorantViolation,
    PiecewiseConstant,
    Region,
    SumMeasure,
    UniformMeasure,
    cell_averages,
    cf_monte_carlo,
    cf_monte_carlo_grid,
    cf_series,
    delta,
    ferguson_marginals,
    finite_dimensional_raise,
    finite_dimensional_raise_lower,
    limiting_posterior_action,
    marginalize,
    phi_extension,
    phi_majorant,
    raise_lower_region,
    raise_region,
    sample_ferguson,
)

F4 = PiecewiseConstant(BasePartition([0.25, 0.5, 0.75]), [1.0, -0.5, 0.3, 0.0])


# -- partitions and measures ---------------------------------------------------


def test_partition_basics():
    p = BasePartition([0.3, 0.6])
    assert p.m == 3 and np.allclose(p.widths, [0.3, 0.3, 0.4])
    assert list(p.cell_index(np.array([0.0, 0.3, 0.59, 1.0]))) == [0, 1, 1, 2]
    assert BasePartition.dyadic(2) == BasePartition([0.25, 0.5, 0.75])
    with pytest.raises(ValueError):
        BasePartition([0.5, 0.2])
    with pytest.raises(ValueError):
        PiecewiseConstant(p, [1.0])


def test_discrete_measure_validation():
    with pytest.raises(ValueError):
        DiscreteMeasure([0.2, 0.2], [1, 1])
    with pytest.raises(ValueError):
        DiscreteMeasure([1.5], [1])
    m = DiscreteMeasure.merged([0.2, 0.2, 0.7], [0.25, 0.25, 0.5])
    assert m.is_probability() and len(m.atoms) == 2


def test_marginalize_examples():
    eta = DiscreteMeasure([0.1, 0.6], [0.4, 0.6])
    assert marginalize(eta, BasePartition()).tolist() == [1.0]
    assert marginalize(delta(0.55), BasePartition([0.25, 0.5, 0.75])).tolist() == [0, 0, 1, 0]


def test_uniform_measure_quadrature():
    u = UniformMeasure(2.0)
    pm = u.power_moments(lambda x: x, 3)
    assert np.allclose(pm, [2 / 2, 2 / 3, 2 / 4])
    assert u.integrate(F4) == pytest.approx(2 * 0.2)


# -- sampling -----------------------------------------------------------------


@given(st.floats(0.05, 20), st.integers(0, 2**31))
def test_draws_are_probabilities(beta, seed):
    eta = sample_ferguson(beta, rng=np.random.default_rng(seed))
    assert eta.total_mass == pytest.approx(1, abs=1e-12)
    assert (eta.weights > 0).all()


def test_coarse_eps_few_atoms():
    eta = sample_ferguson(1e-3, eps=0.5, rng=np.random.default_rng(0))
    assert len(eta.atoms) <= 3 and eta.total_mass == pytest.approx(1, abs=1e-15)


def test_bad_parameters():
    for beta, eps in ((0, 1e-3), (-1, 1e-3), (1.0, 0), (1.0, 1.5)):
        with pytest.raises(ValueError):
            sample_ferguson(beta, eps=eps)


@pytest.mark.parametrize("beta", [0.5, 1.0, 5.0])
def test_first_weight_and_cell_means(beta):
    part = BasePartition([0.1, 0.35, 0.7])
    n = 40_000
    ms = ferguson_marginals(beta, part, n, seed=7)
    w = ms.first_weight
    assert abs(w.mean() - 1 / (1 + beta)) < 4 * w.std(ddof=1) / math.sqrt(n)
    z = (ms.masses.mean(axis=0) - part.widths) / (ms.masses.std(axis=0, ddof=1) / math.sqrt(n))
    assert np.abs(z).max() < 4
    assert np.allclose(ms.masses.sum(axis=1), 1)


def test_marginals_match_dirichlet_second_moments():
    beta, part, n = 2.0, BasePartition([0.3]), 50_000
    y = ferguson_marginals(beta, part, n, seed=1).masses[:, 0]
    a = beta * 0.3
    for order in (2, 3):
        exact = pochhammer(a, order) / pochhammer(beta, order)
        se = (y**order).std(ddof=1) / math.sqrt(n)
        assert abs((y**order).mean() - exact) < 4 * se


def test_marginals_agree_with_direct_sampler_in_law():
    beta, part = 1.5, BasePartition([0.4])
    rng = np.random.default_rng(2)
    direct = np.array([marginalize(sample_ferguson(beta, rng=rng), part)[0] for _ in range(4000)])
    batch = ferguson_marginals(beta, part, 4000, seed=3).masses[:, 0]
    se = math.sqrt(direct.var() / 4000 + batch.var() / 4000)
    assert abs(direct.mean() - batch.mean()) < 4 * se


def test_marginals_reproducible():
    part = BasePartition([0.5])
    a = ferguson_marginals(1.0, part, 60_000, seed=9)
    b = ferguson_marginals(1.0, part, 60_000, seed=9)
    assert np.array_equal(a.masses, b.masses) and np.array_equal(a.first_weight, b.first_weight)


def test_mapping_at_measure_level():
    # pushing a draw through the coarsening map of cells gives the coarse marginals,
    # which must be Dir(beta * coarse widths)
    fine = BasePartition([0.2, 0.5, 0.8])
    n, beta = 40_000, 1.3
    ms = ferguson_marginals(beta, fine, n, seed=4).masses
    coarse = np.stack([ms[:, 0] + ms[:, 1], ms[:, 2] + ms[:, 3]], axis=1)
    a = beta * 0.5
    for order in (1, 2):
        exact = pochhammer(a, order) / pochhammer(beta, order)
        v = coarse[:, 0] ** order
        assert abs(v.mean() - exact) < 4 * v.std(ddof=1) / math.sqrt(n)


# -- characteristic functional --------------------------------------------------


def test_cf_series_trivial():
    assert cf_series(UniformMeasure(1.0), F4, 0.0) == 1
    assert cf_monte_carlo(1.0, F4, 0.0, 100, seed=0).value == 1


def test_cf_series_matches_finite_dimensional():
    for beta in (0.5, 1.0, 5.0):
        for t in (-3.0, 0.7, 4.0):
            alpha = beta * F4.partition.widths
            fd = characteristic_functional(alpha, t * F4.values, tol=1e-15)
            assert abs(cf_series(UniformMeasure(beta), F4, t, tol=1e-15) - fd) < 1e-12


def test_cf_series_continuous_f_vs_dyadic_refinement():
    f = ContinuousFunction(lambda x: np.cos(2 * np.pi * x))
    exact = cf_series(UniformMeasure(1.0), f, 1.5)
    part = BasePartition.dyadic(9)
    approx = cf_series(UniformMeasure(1.0), PiecewiseConstant(part, cell_averages(f, part)), 1.5)
    assert abs(exact - approx) < 1e-4


def test_cf_monte_carlo_agrees_with_series():
    ts = [-2.0, 1.0, 3.0]
    for beta in (0.5, 1.0, 5.0):
        mc = cf_monte_carlo_grid(beta, F4, ts, 20_000, seed=5)
        for t, est in zip(ts, mc):
            ref = cf_series(UniformMeasure(beta), F4, t)
            assert abs(est.value.real - ref.real) < 4 * est.stderr_re
            assert abs(est.value.imag - ref.imag) < 4 * est.stderr_im


def test_cf_monte_carlo_callable_f():
    f = ContinuousFunction(lambda x: x**2)
    est = cf_monte_carlo(1.0, f, 2.0, 3000, seed=1)
    ref = cf_series(UniformMeasure(1.0), f, 2.0)
    assert abs(est.value - ref) < 4 * math.hypot(est.stderr_re, est.stderr_im)


def test_large_beta_limit():
    t = 1.3
    target = np.exp(1j * t * UniformMeasure(1.0).integrate(F4))
    errs = [abs(cf_series(UniformMeasure(b), F4, t) - target) for b in (1e2, 1e3, 1e4)]
    assert errs[0] > errs[1] > errs[2]


def test_small_beta_limit():
    t = 2.0
    target = (F4.partition.widths * np.exp(1j * t * F4.values)).sum()
    errs = [abs(cf_series(UniformMeasure(b), F4, t) - target) for b in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]
    est = cf_monte_carlo(1e-2, F4, t, 20_000, seed=2)
    assert abs(est.value - target) < 0.05


def test_narrow_continuity_smoke():
    # nu_n = sum w_i delta_{x_i + 1/n} converges narrowly to nu; continuous f
    f = ContinuousFunction(lambda x: np.sin(3 * x))
    x = np.array([0.1, 0.4, 0.7])
    w = np.array([0.5, 1.0, 0.5])
    limit = cf_series(DiscreteMeasure(x, w), f, 1.0)
    errs = [abs(cf_series(DiscreteMeasure(x + 1 / n, w), f, 1.0) - limit) for n in (10, 100, 1000)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-2


# -- extension to signed measures ------------------------------------------------


def test_phi_extension_examples():
    nu = DiscreteMeasure([0.1, 0.4, 0.8], [0.2, 0.3, 0.5])
    assert phi_extension(nu, F4) == pytest.approx(cf_series(nu, F4, 1.0), abs=1e-13)
    assert phi_extension(nu, PiecewiseConstant(BasePartition(), [0.0])) == 1
    signed = DiscreteMeasure([0.1, 0.6], [1.0, -0.5])
    small = PiecewiseConstant(F4.partition, 0.2 * F4.values)
    val = phi_extension(signed, small)
    assert np.isfinite(val) and abs(val) <= phi_majorant(signed, small)


def test_phi_extension_is_scale_aware():
    nu = DiscreteMeasure([0.2, 0.9], [0.7, 0.6])
    assert phi_extension(nu, F4, scale=2.0) == pytest.approx(
        humbert_phi2(nu.cell_masses(F4.partition), nu.total_mass, 2.0 * F4.values, tol=1e-15), abs=1e-12)


def test_phi_extension_needs_positive_mass():
    with pytest.raises(ValueError):
        phi_extension(DiscreteMeasure([0.1, 0.5], [1.0, -1.0]), F4)


def test_majorant_violation_is_reported():
    assert issubclass(MajorantViolation, RuntimeError)


# -- region operators ------------------------------------------------------------


NU = DiscreteMeasure([0.1, 0.3, 0.6, 0.85], [0.5, 0.5, 0.5, 0.5])


def test_region_parse_and_contains():
    r = Region.parse("0:0.25,0.5:1")
    assert r.contains(0.1) and not r.contains(0.3) and r.contains(1.0)
    assert r.covers_cell(0.5, 0.75) and not r.covers_cell(0.2, 0.3)
    with pytest.raises(ValueError):
        Region([(0.5, 0.2)])


def test_raise_region_examples():
    assert raise_region(NU, F4, Region()) == 0
    a = Region.parse("0:0.5")
    assert abs(raise_region(NU, F4, a) - finite_dimensional_raise(NU, F4, a)) < 1e-12
    whole = Region.parse("0:1")
    sigma = DiscreteMeasure([0.1, 0.3, 0.6], [0.2, 0.3, 0.5])
    direct = sum(w * phi_extension(sigma + delta(x), F4) for x, w in zip(sigma.atoms, sigma.weights))
    assert abs(raise_region(sigma, F4, whole) - direct) < 1e-12


def test_raise_lower_examples():
    a, b = Region.parse("0:0.5"), Region.parse("0.5:1")
    assert raise_lower_region(NU, F4, a, a) == 0
    assert raise_lower_region(NU, F4, a, Region()) == pytest.approx(raise_region(NU, F4, a), abs=1e-15)
    direct = sum(w * phi_extension(NU + delta(x), F4) for x, w in zip(NU.atoms, NU.weights) if x < 0.5)
    direct += sum(w * phi_extension(NU + delta(x, -1.0), F4) for x, w in zip(NU.atoms, NU.weights) if x >= 0.5)
    assert abs(raise_lower_region(NU, F4, a, b) - direct) < 1e-12
    assert abs(raise_lower_region(NU, F4, a, b) - finite_dimensional_raise_lower(NU, F4, a, b)) < 1e-12


def test_raise_lower_needs_mass_above_one():
    light = DiscreteMeasure([0.1, 0.6], [0.25, 0.25])
    with pytest.raises(ValueError):
        raise_lower_region(light, F4, Region.parse("0:0.5"), Region.parse("0.5:1"))
    with pytest.raises(TypeError):
        raise_region(UniformMeasure(), F4, Region.parse("0:1"))


# -- limiting posterior actions ----------------------------------------------------


def test_limit_for_piecewise_f_is_exact_once_resolved():
    # f constant on dyadic quarters: from depth 2 on, the raise action is the target
    res = limiting_posterior_action(F4, 0.37, depths=(2, 3, 4))
    assert max(res.raise_errors) < 1e-10
    assert max(res.cartan_errors) < 1e-10
    assert all(v == 0 for v in res.lower_values)


def test_limit_for_smooth_f_converges():
    f = ContinuousFunction(lambda x: np.cos(2 * np.pi * x))
    xs = (np.arange(9) + 0.37) / 9
    worst = np.zeros(3)
    for x in xs:
        worst = np.maximum(worst, limiting_posterior_action(f, x, depths=(3, 5, 7)).raise_errors)
    assert worst[0] > worst[1] > worst[2]


def test_dyadic_point_is_nudged():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        res = limiting_posterior_action(F4, 0.5, depths=(2, 3))
    assert rec and res.x != 0.5


def test_sum_measure_and_delta():
    m = SumMeasure([UniformMeasure(), delta(0.3)])
    assert m.total_mass == 2
    assert m.cell_masses(BasePartition([0.5])).tolist() == [1.5, 0.5]
