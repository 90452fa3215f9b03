import math

import numpy as np
import pytest

from cxsplit.errors import ReferenceInconsistent, StepFailed
from cxsplit.problems import (REF_MAGIC, FisherProblem, OscillatorProblem,
                              ParabolicProblem, _cache_path, _read_cache,
                              _write_cache, make_problem, reference_solution,
                              rk4_integrate)


def test_make_problem_dispatch():
    assert isinstance(make_problem("osc"), OscillatorProblem)
    assert isinstance(make_problem("parabolic"), ParabolicProblem)
    assert isinstance(make_problem("fisher"), FisherProblem)
    with pytest.raises(ValueError):
        make_problem("heat")


def test_oscillator_rhs_splits_into_parts():
    problem = make_problem("osc")
    u = np.array([0.7, -0.4])
    t = 1.3
    rhs = problem.rhs(t, u)
    assert rhs[0] == pytest.approx(u[1])
    kick_only = problem.b_kick(t, 1.0, u.astype(complex))
    frozen_force = (kick_only[1] - u[1]).real        # -eps * sum sin(...)
    assert rhs[1] == pytest.approx(
        -problem.big_omega(t) ** 2 * u[0] + frozen_force)


def test_oscillator_frozen_exp_is_exact_for_constant_omega():
    problem = make_problem("osc")
    w = problem.big_omega(0.7)
    u = problem.a_frozen_exp((0.7,), (1.0,), 0.2, np.array([1.0, 0.0 + 0j]))
    assert u[0].real == pytest.approx(math.cos(0.2 * w))
    assert u[1].real == pytest.approx(-w * math.sin(0.2 * w))


def test_parabolic_kick_is_pointwise_exponential():
    problem = make_problem("parabolic")
    u = problem.u0()
    tau = 0.02 - 0.01j
    kicked = problem.b_kick(0.4, tau, u)
    assert np.allclose(kicked, u * np.exp(tau * problem.potential(0.4)))


def test_parabolic_apply_laplacian_matches_dense():
    problem = make_problem("parabolic", n_grid=12)
    u = np.cos(2.0 * np.pi * problem.x)
    assert np.allclose(problem.apply_laplacian(u), problem.lap.dense() @ u)


def test_parabolic_exact_flow_matches_quadrature_limit():
    problem = make_problem("parabolic", n_grid=16)
    u = problem.u0()
    out = problem.a_exact_flow(0.1, 0.2, u)
    # brute-force Riemann integral of alpha^2
    s = np.linspace(0.1, 0.3, 20001)
    integral = np.trapezoid([problem.alpha(t) ** 2 for t in s], s)
    from cxsplit.propagators import exp_circulant
    ref = exp_circulant(problem.lap, integral, u)
    assert np.max(np.abs(out - ref)) < 1e-10


def test_fisher_kick_logistic_properties():
    problem = make_problem("fisher")
    ones = np.ones(problem.n_grid, dtype=complex)
    # u = 0 and u = 1 are fixed points of the logistic reaction
    assert np.allclose(problem.b_kick(0.5, 0.3, 0.0 * ones), 0.0)
    assert np.allclose(problem.b_kick(0.5, 0.3, ones), 1.0)
    # gamma > 0 grows states below the carrying capacity
    half = 0.5 * ones
    assert np.all(problem.b_kick(0.5, 1.0, half).real > 0.5)


def test_fisher_kick_singular_denominator_raises():
    problem = make_problem("fisher")
    grow = math.exp(problem.gamma(0.0) * 1.0)
    bad = np.full(problem.n_grid, -1.0 / (grow - 1.0), dtype=complex)
    with pytest.raises(StepFailed):
        problem.b_kick(0.0, 1.0, bad)


def test_fisher_zero_reaction_reduces_to_diffusion():
    problem = make_problem("fisher")
    problem.gamma = lambda t: 0.0
    u = problem.u0()
    assert np.allclose(problem.b_kick(0.3, 0.7, u), u)


def test_rk4_is_fourth_order_on_scalar():
    rhs = lambda t, u: np.atleast_1d(-2.0 * t * u)
    exact = math.exp(-1.0)
    errs = [abs(rk4_integrate(rhs, np.array([1.0]), 0.0, 1.0, n)[0] - exact)
            for n in (10, 20)]
    assert math.log2(errs[0] / errs[1]) == pytest.approx(4.0, abs=0.2)


def test_stiff_rk4_steps_scales_with_grid():
    coarse = make_problem("parabolic", n_grid=100)
    fine = make_problem("parabolic", n_grid=200)
    assert fine.stiff_rk4_steps() == pytest.approx(4 * coarse.stiff_rk4_steps(), rel=0.05)
    # coarse grids hit the accuracy floor instead of the stability bound
    from cxsplit.problems import REF_PDE_RK4_MIN_STEPS
    assert make_problem("parabolic", n_grid=8).stiff_rk4_steps() == REF_PDE_RK4_MIN_STEPS


def test_cache_round_trip(tmp_path):
    problem = make_problem("parabolic", n_grid=8)
    path, digest = _cache_path(problem, tmp_path)
    values = np.linspace(0.0, 1.0, 8)
    _write_cache(path, digest, values)
    assert np.allclose(_read_cache(path, digest), values)
    # corrupted magic is rejected, not trusted
    path.write_bytes(b"XXXXXXXX" + path.read_bytes()[8:])
    assert _read_cache(path, digest) is None


def test_reference_solution_caches(tmp_path):
    problem = make_problem("parabolic", n_grid=8)
    ref1 = reference_solution(problem, cache_dir=tmp_path)
    path, _ = _cache_path(problem, tmp_path)
    assert path.exists()
    assert path.read_bytes()[:8] == REF_MAGIC
    before = path.stat().st_mtime_ns
    ref2 = reference_solution(problem, cache_dir=tmp_path)
    assert path.stat().st_mtime_ns == before       # served from cache
    assert np.array_equal(ref1, ref2)


def test_reference_inconsistency_is_fatal(tmp_path, monkeypatch):
    problem = make_problem("parabolic", n_grid=8)
    import cxsplit.problems as mod
    monkeypatch.setattr(mod, "_classical_oracle",
                        lambda p: np.zeros(p.n_grid))
    with pytest.raises(ReferenceInconsistent):
        reference_solution(problem, cache_dir=tmp_path)


def test_default_params_match_benchmarks():
    osc = make_problem("osc")
    assert osc.epsilon == 0.25 and osc.p0 == 11.2075
    assert osc.omega_j == [7.0, 14.0, 21.0]
    par = make_problem("parabolic")
    assert par.n_grid == 100 and par.alpha(0.0) == pytest.approx(0.25 + 1 / 6)
    fisher = make_problem("fisher")
    assert fisher.gamma(0.0) == pytest.approx(0.01)
