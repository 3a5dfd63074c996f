import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lifespan_lab.bounds import ProblemSpec
from lifespan_lab.errors import BoundaryDominance, InsufficientHistory, NegativeData, NotContracting
from lifespan_lab.field_core import Field, make_grid
from lifespan_lab.profiles import BoundedBump, Constant, SectorPsi0, TruncatedSingular
from lifespan_lab.solver import (
    BlowupInStep,
    EvolveConfig,
    PicardConfig,
    check_necessary_condition,
    estimate_blowup_time,
    evolve,
    nonlinear_substep,
    picard_solve,
    potential_weights,
    solve_lifespan,
)

P11 = ProblemSpec(1, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 5), st.sampled_from([0.5, 1.0, 2.0, 3.0]), st.floats(0.0, 0.9))
def test_substep_is_exact_ode_flow(v, alpha, frac):
    g = make_grid(1, 1.0, 16)
    dt = frac / (alpha * v**alpha)
    out = nonlinear_substep(Field(g, np.full(16, v)), dt, alpha)
    exact = v * (1 - alpha * v**alpha * dt) ** (-1 / alpha)
    assert np.allclose(out.values, exact, rtol=1e-13)
    neg = nonlinear_substep(Field(g, np.full(16, -v)), dt, alpha)
    assert np.allclose(neg.values, -exact, rtol=1e-13)


def test_substep_zero_and_crossing():
    g = make_grid(1, 1.0, 16)
    z = nonlinear_substep(Field(g, np.zeros(16)), 10.0, 1.0)
    assert np.all(z.values == 0)
    hit = nonlinear_substep(Field(g, np.full(16, 2.0)), 0.5, 1.0)
    assert isinstance(hit, BlowupInStep)
    assert hit.time == pytest.approx(0.5)


def test_potential_weights_cell_average_near_origin():
    g = make_grid(1, 1.0, 20)
    w = potential_weights(g, -0.5)
    h = g.spacing
    # average of |x|^-1/2 over [0, h] is 2 h^-1/2
    assert w[10] == pytest.approx(2 * h**-0.5, rel=1e-6)


@pytest.mark.parametrize("alpha,lam", [(1.0, 2.0), (2.0, 1.0)])
def test_constant_blowup_time(alpha, lam):
    g = make_grid(1, 10.0, 100)
    est = evolve(Constant(), lam, ProblemSpec(1, alpha), g, EvolveConfig(horizon=5.0))
    assert est.status == "blowup"
    assert est.T_est == pytest.approx(1 / (alpha * lam**alpha), rel=0.01)
    lo, hi = est.bracket
    assert lo <= est.T_est <= hi


def test_fujita_regime_blows_up():
    est = solve_lifespan(BoundedBump(), 0.5, P11, horizon=1e3)
    assert est.status == "blowup"
    assert est.T_est < 1e3


def test_no_blowup_within_short_horizon():
    g = make_grid(1, 10.0, 100)
    est = evolve(BoundedBump(), 0.1, P11, g, EvolveConfig(horizon=0.5))
    assert est.status == "no_blowup_within_horizon"
    assert est.T_est == math.inf
    assert [p.t for p in est.history] == sorted(p.t for p in est.history)


def test_history_columns():
    g = make_grid(1, 10.0, 100)
    est = evolve(BoundedBump(), 1.0, P11, g, EvolveConfig(horizon=0.2))
    rows = list(est.history_rows())
    assert est.HEADER == ("t", "sup_norm", "l1_norm", "lq_norm", "weighted_norm", "dt")
    assert all(len(r) == 6 for r in rows)


def test_estimate_exact_type_one():
    ts = [0.5, 0.6, 0.7, 0.8]
    hist = [(t, 1 / (1 - t)) for t in ts]
    T, (lo, hi) = estimate_blowup_time(hist, 1.0)
    assert T == pytest.approx(1.0, abs=1e-12)
    assert lo == 0.8 and hi >= T


def test_estimate_constant_history():
    lam, a = 1.5, 2.0
    T0 = 1 / (a * lam**a)
    hist = [(t, lam * (1 - a * lam**a * t) ** (-1 / a)) for t in (0.0, 0.05, 0.1)]
    T, _ = estimate_blowup_time(hist, a)
    assert T == pytest.approx(T0, rel=1e-12)


def test_estimate_noisy_history():
    rng = np.random.default_rng(7)
    for _ in range(50):
        ts = np.linspace(0.5, 0.95, 10)
        ns = 1 / (1 - ts) * (1 + 0.01 * rng.uniform(-1, 1, ts.size))
        T, _ = estimate_blowup_time(list(zip(ts, ns)), 1.0)
        assert T == pytest.approx(1.0, rel=0.02)


def test_estimate_needs_history():
    with pytest.raises(InsufficientHistory):
        estimate_blowup_time([(0, 1), (1, 2)], 1.0)
    with pytest.raises(InsufficientHistory):
        estimate_blowup_time([(0, 1), (1, 2), (1, 3)], 1.0)


def test_necessary_condition_constant():
    lam = 2.0
    ok, worst = check_necessary_condition(Constant(), lam, [0.1, 0.3, 0.5], P11)
    assert worst == pytest.approx(1.0)
    assert ok


def test_necessary_condition_along_trajectory():
    p = BoundedBump()
    est = solve_lifespan(p, 3.0, P11)
    times = [h.t for h in est.history if 0 < h.t < est.T_est]
    ok, worst = check_necessary_condition(p, 3.0, times, P11)
    assert ok and worst <= 1 + 1e-3
    _, worse = check_necessary_condition(p, 30.0, times, P11)
    assert worse > worst
    with pytest.raises(NegativeData):
        check_necessary_condition(Constant(lam=-1.0), 1.0, times, P11)


def test_picard_zero_datum():
    g = make_grid(1, 5.0, 50)
    res = picard_solve(Constant(c=0.0), 1.0, P11, g, PicardConfig(T=0.5, M=1.0, K=0.5))
    assert res.converged and res.iterations == 1


def test_picard_constant_matches_ode():
    g = make_grid(1, 5.0, 50)
    lam, T = 0.1, 0.1
    res = picard_solve(Constant(), lam, P11, g, PicardConfig(T=T, M=0.2, K=0.1))
    assert res.converged and res.condition_satisfied
    exact = lam / (1 - lam * T)
    mid = g.points_per_axis // 2
    assert res.fields[-1].values[mid] == pytest.approx(exact, rel=1e-6)


def test_picard_violated_condition():
    g = make_grid(1, 5.0, 50)
    cfg = PicardConfig(T=2.0, M=1.0, K=1.0, steps=200)
    try:
        res = picard_solve(Constant(), 1.0, P11, g, cfg)
    except NotContracting:
        return
    assert not res.condition_satisfied


def test_picard_agrees_with_evolve():
    g = make_grid(1, 10.0, 200)
    T, tol = 0.2, 1e-10
    res = picard_solve(BoundedBump(), 1.0, P11, g, PicardConfig(T=T, M=3.0, K=1.0, steps=200, tolerance=tol))
    est = evolve(BoundedBump(), 1.0, P11, g, EvolveConfig(horizon=T, dt_initial=1e-3))
    assert res.converged
    dt = res.times[1] - res.times[0]
    top = np.max(np.abs(est.final.values))
    # second time derivative of the pointwise flow is (alpha+1) u^(2 alpha + 1)
    dt2_term = dt**2 * 2 * top**3
    diff = np.max(np.abs(res.fields[-1].values - est.final.values))
    assert diff <= 3 * (tol + dt2_term)


def test_sector_run_stays_odd():
    g = make_grid(1, 8.0, 160)
    spec = ProblemSpec(1, 1.0, m=1)
    est = evolve(SectorPsi0(m=1, gamma=0.5, epsilon=1.0), 1.0, spec, g, EvolveConfig(horizon=0.05))
    v = est.final.values
    assert np.array_equal(v, -v[::-1])


def test_henon_boundary_guard():
    g = make_grid(1, 20.0, 200)
    with pytest.raises(BoundaryDominance):
        evolve(Constant(), 1.0, ProblemSpec(1, 2.0, l=1.0), g, EvolveConfig(horizon=1.0))


def test_comparison_order():
    data = [(BoundedBump(amplitude=1.0), BoundedBump(amplitude=1.5)),
            (TruncatedSingular(gamma=0.5, epsilon=0.5), TruncatedSingular(gamma=0.5, epsilon=1.0)),
            (BoundedBump(width=0.5), BoundedBump(width=1.0))]
    g = make_grid(1, 12.0, 240)
    for lo, hi in data:
        a = evolve(lo, 2.0, P11, g, EvolveConfig(horizon=20.0)).T_est
        b = evolve(hi, 2.0, P11, g, EvolveConfig(horizon=20.0)).T_est
        assert a >= b


def test_refinement_of_constant_case():
    ts = []
    for n, dt in ((50, 0.02), (100, 0.01)):
        g = make_grid(1, 5.0, n)
        ts.append(evolve(Constant(), 1.0, P11, g, EvolveConfig(horizon=3.0, dt_initial=dt)).T_est)
    # halving h and dt moves the estimate by at most O(dt^2)
    assert abs(ts[1] - ts[0]) <= 0.02**2
    assert ts[1] == pytest.approx(1.0, rel=1e-3)


def test_rescaled_solver_history_is_physical():
    p = BoundedBump()
    est = solve_lifespan(p, 4.0, P11)
    assert est.history[0].t == 0
    # nodes closest to the peak sit half a cell away
    assert est.history[0].sup_norm == pytest.approx(4.0, rel=1e-3)
