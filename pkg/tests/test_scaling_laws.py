import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lifespan_lab.bounds import ProblemSpec, report_bounds
from lifespan_lab.errors import DegenerateScaling, InsufficientData
from lifespan_lab.field_core import make_grid
from lifespan_lab.profiles import (
    BoundedBump,
    SingularPower,
    TailPower,
    TruncatedSingular,
    TwoPower,
    dilate,
)
from lifespan_lab.scaling_laws import (
    bound_handle,
    exponent_fit,
    expected_direction,
    homogeneous_identity_check,
    limit_structure_check,
    monotonicity_check,
    scaling_relation,
    solver_handle,
)
from lifespan_lab.solver import EvolveConfig, evolve

P11 = ProblemSpec(1, 1.0)


def test_heat_case_exponent():
    rel = scaling_relation(1, 1)
    assert rel.sigma == 2 and rel.exponent == 2


def test_henon_case_exponent():
    rel = scaling_relation(1, 1, 1)
    assert rel.sigma == 3 and rel.exponent == 1


def test_degenerate():
    with pytest.raises(DegenerateScaling):
        scaling_relation(2, 1)
    with pytest.raises(DegenerateScaling):
        scaling_relation(Fraction(1, 2), 4)


def test_float_heat_formula():
    # heat case written as (1/alpha - gamma/2)^-1
    for a, g in [(1.0, 0.5), (2.0, 0.25), (0.7, 1.3)]:
        assert scaling_relation(a, g).exponent == pytest.approx(1 / (1 / a - g / 2), rel=1e-14)


@given(st.fractions(Fraction(1, 10), 5, max_denominator=50), st.fractions(0, 3, max_denominator=50),
       st.integers(0, 3))
def test_exponent_identity_exact(alpha, gamma, l):
    sigma = Fraction(2 + l) / alpha
    if gamma == sigma:
        return
    rel = scaling_relation(alpha, gamma, l)
    assert isinstance(rel.exponent, Fraction)
    assert rel.exponent * (rel.gamma - rel.sigma) == -2


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 20))
def test_mu_and_lam_are_inverse(lam):
    rel = scaling_relation(1.0, 0.5)
    assert rel.lam(rel.mu(lam)) == pytest.approx(lam, rel=1e-12)


def test_bound_identity_spread_is_zero():
    psi = SingularPower(gamma=0.5)
    spread = homogeneous_identity_check(psi, [1, 2, 4, 8, 100], P11, solver=bound_handle)
    assert spread <= 1e-12
    assert homogeneous_identity_check(psi, [1], P11, solver=bound_handle) == 0


@pytest.mark.parametrize("p", [TruncatedSingular(gamma=0.5, epsilon=1.0), TailPower(gamma=0.5),
                               TwoPower(gamma1=0.25, gamma2=0.75)])
@pytest.mark.parametrize("mu", [0.25, 2.0, 7.0])
def test_dilated_bounds_in_ratio_mu_squared(p, mu):
    # T(lam phi) with lam = mu^(gamma - sigma) equals mu^2 T(mu^gamma D_mu phi) at the formula level
    gamma = 0.5
    rel = scaling_relation(1.0, gamma)
    lam = rel.lam(mu)
    a = report_bounds(p, lam, P11).lower
    b = report_bounds(dilate(p, mu, gamma), 1.0, P11).lower
    assert [x.name for x in a] == [y.name for y in b]
    checked = 0
    for x, y in zip(a, b):
        if x.name == "supersolution" or x.T is None:
            continue  # numerical table, not a closed formula
        assert x.T == pytest.approx(mu**2 * y.T, rel=1e-12)
        checked += 1
    assert checked >= 1


def test_numerical_homogeneous_spread():
    spread = homogeneous_identity_check(SingularPower(gamma=0.5), [1, 2, 4, 8], P11)
    assert spread <= 0.10


def test_fixed_grid_spread_shrinks_with_spacing():
    # without rescaling the identity holds only up to discretization error, which halves with h
    spreads = []
    for n in (2000, 4000):
        g = make_grid(1, 20.0, n)
        run = lambda p, lam, sp: evolve(p, lam, sp, g, EvolveConfig(horizon=5.0)).T_est
        spreads.append(homogeneous_identity_check(SingularPower(gamma=0.5), [1, 2, 4, 8], P11, run))
    assert spreads[0] <= 0.10
    assert spreads[1] < 0.6 * spreads[0]


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 0.9), st.lists(st.floats(0.02, 30), min_size=1, max_size=10))
def test_monotonicity_truncated(gamma, xs):
    res = monotonicity_check(TruncatedSingular(gamma=gamma), gamma, [0.25, 0.5, 1, 2], xs)
    assert res.passed and res.direction == "nonincreasing"


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 0.9), st.lists(st.floats(0.02, 30), min_size=1, max_size=10))
def test_monotonicity_tail(gamma, xs):
    res = monotonicity_check(TailPower(gamma=gamma), gamma, [0.25, 0.5, 1, 2], xs)
    assert res.passed and res.direction == "nondecreasing"


def test_monotonicity_two_power():
    p = TwoPower(gamma1=0.25, gamma2=0.75)
    xs = np.geomspace(1e-3, 1e3, 200)
    mus = [0.25, 0.5, 1, 2, 4]
    assert monotonicity_check(p, 0.25, mus, xs).direction == "nonincreasing"
    assert monotonicity_check(p, 0.25, mus, xs).passed
    assert monotonicity_check(p, 0.75, mus, xs).direction == "nondecreasing"
    assert monotonicity_check(p, 0.75, mus, xs).passed


def test_monotonicity_reports_wrong_direction():
    res = monotonicity_check(TruncatedSingular(gamma=0.5), 0.5, [0.5, 1, 2], [0.1, 0.7, 3.0],
                             direction="nondecreasing")
    assert not res.passed
    assert res.worst_pair is not None and res.worst_violation > 0


def test_unknown_direction():
    assert expected_direction(BoundedBump(), 0.0) == "unknown"
    with pytest.raises(ValueError):
        monotonicity_check(BoundedBump(), 0.0, [1, 2], [0.5])


def test_fit_two_points():
    fit = exponent_fit([(1, 1), (10, 0.01)])
    assert fit.slope == pytest.approx(-2, abs=1e-14)
    assert fit.half_width == math.inf


def test_fit_exact_power_law():
    lams = np.geomspace(1, 100, 5)
    fit = exponent_fit([(x, 3.7 * x ** (-4 / 3)) for x in lams])
    assert abs(fit.slope + 4 / 3) <= 1e-12
    assert fit.half_width <= 1e-12


def test_fit_noisy():
    rng = np.random.default_rng(3)
    lams = np.geomspace(1, 100, 12)
    for _ in range(100):
        noise = 1 + 0.05 * rng.uniform(-1, 1, lams.size)
        fit = exponent_fit(list(zip(lams, 2.0 * lams**-1.5 * noise)))
        assert abs(fit.slope + 1.5) <= 0.1
        assert fit.within(-1.5, 0.1 / 1.5)


def test_fit_errors():
    with pytest.raises(InsufficientData):
        exponent_fit([(1, 1)])
    with pytest.raises(InsufficientData):
        exponent_fit([(1, 1), (2, -1)])
    with pytest.raises(InsufficientData):
        exponent_fit([(2, 1), (2, 3), (2, 4)])
    with pytest.raises(InsufficientData):
        exponent_fit([(1, 1), (2, math.inf)])


def test_limit_truncated_to_infinity():
    rep = limit_structure_check(TruncatedSingular(gamma=0.5, epsilon=1.0), "to_infinity", P11,
                                lams=[1, 4, 16, 64])
    assert rep.trend == "nonincreasing"
    assert not rep.divergent_branch
    assert rep.passed, rep.messages


def test_limit_truncated_to_zero_diverges():
    rep = limit_structure_check(TruncatedSingular(gamma=0.5, epsilon=1.0), "to_zero", P11,
                                lams=[1, 0.1, 0.01])
    assert rep.divergent_branch
    assert rep.passed, rep.messages
    assert rep.values[-1] >= 10 * rep.values[0]


def test_limit_two_power_wrong_exponent_diverges():
    rep = limit_structure_check(TwoPower(gamma1=0.25, gamma2=0.75), "to_infinity", P11, gamma=0.75,
                                lams=[1, 10, 100, 1000])
    assert rep.divergent_branch
    assert rep.passed, rep.messages


def test_limit_direction_validation():
    with pytest.raises(ValueError):
        limit_structure_check(TailPower(), "sideways", P11, solver=bound_handle)


def test_solver_handle_runs():
    T = solver_handle()(BoundedBump(), 2.0, P11)
    assert 0 < T < math.inf
