import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from lifespan_lab.errors import HypothesisViolated
from lifespan_lab.field_core import NormSpec, make_grid, norm, sample_profile
from lifespan_lab.kernel_verify import (
    CSV_HEADER,
    KERNEL_MATRIX,
    check_kernel_hypotheses,
    kernel_slope_experiment,
    predicted_slope,
    translation_necessity_experiment,
    weighted_heat_norm,
)
from lifespan_lab.profiles import DiracApprox, TailPower
from lifespan_lab.semigroup import heat_step

INF = math.inf


def test_predicted_slope_examples():
    assert predicted_slope(0, 0, 1, INF, 1) == -0.5
    assert predicted_slope(0.25, 0.5, INF, INF, 1) == -0.125
    assert predicted_slope(0.5, 0.5, 2, 2, 1) == 0


def test_hypotheses_named():
    with pytest.raises(HypothesisViolated, match="mu_w < N"):
        check_kernel_hypotheses(0.5, 1.0, INF, INF, 1)
    with pytest.raises(HypothesisViolated, match="gamma <= mu_w"):
        check_kernel_hypotheses(0.6, 0.5, INF, INF, 1)
    with pytest.raises(HypothesisViolated, match="q1 > 1"):
        check_kernel_hypotheses(0.1, 0.5, 1.0, INF, 1)
    with pytest.raises(HypothesisViolated, match="mu_w/N"):
        check_kernel_hypotheses(0.1, 0.5, 2.0, INF, 1)
    with pytest.raises(HypothesisViolated, match="unweighted"):
        check_kernel_hypotheses(0, 0, 4, 2, 1)
    with pytest.raises(HypothesisViolated):
        kernel_slope_experiment(0.6, 0.5, INF, INF)


@given(st.floats(0, 0.95), st.floats(0, 0.95), st.sampled_from([1.5, 2.0, 4.0, 8.0, INF]),
       st.sampled_from([1.5, 2.0, 4.0, 8.0, INF]))
def test_hypotheses_match_inequalities(gamma, mu, q1, q2):
    # independent restatement of the admissible region in one dimension
    a = 0 if q1 == INF else 1 / q1
    b = 0 if q2 == INF else 1 / q2
    ok = 0 <= gamma <= mu < 1 and mu + a < 1 and (b < (mu - gamma) + a or (gamma == mu and q1 == q2))
    if gamma == 0 and mu == 0:
        ok = q1 <= q2
    try:
        check_kernel_hypotheses(gamma, mu, q1, q2, 1)
        raised = False
    except HypothesisViolated:
        raised = True
    assert raised != ok


@pytest.mark.parametrize("row", KERNEL_MATRIX)
def test_matrix_row(row):
    res = kernel_slope_experiment(*row)
    assert res.passed(), (res.fitted, res.predicted)
    assert res.max_ratio_deviation < 0.10
    assert len(res.row()) == len(CSV_HEADER)


def test_unweighted_gaussian_against_closed_form():
    # the heat flow of a unit Gaussian mass of variance 2w stays Gaussian, peak (4 pi (t + w))^-1/2
    w = 1e-2
    for t in (1.0, 8.0, 64.0):
        got = weighted_heat_norm(DiracApprox(mass=1.0, width=w), t, 0.0, INF, 1)
        exact = (4 * math.pi * (t + w)) ** -0.5
        assert got == pytest.approx(exact, rel=1e-3)


def test_self_similar_route_matches_physical_grid():
    # same quantity computed directly on a large physical box
    datum = TailPower(gamma=0.5, radius=0.05)
    for t in (1.0, 4.0):
        a = weighted_heat_norm(datum, t, 0.25, INF, 1)
        g = make_grid(1, 200.0, 20000)
        b = norm(heat_step(sample_profile(datum, g), t), NormSpec(INF, 0.25))
        assert a == pytest.approx(b, rel=5e-3)


def test_weighted_norm_quadrature_oracle():
    # |x|^0.25 e^{tΔ}(|x|^-0.5 cut below 1e-6); the sup is attained away from 0, sampled on a line
    t, g = 1.0, 0.25
    def heat_at(x):
        f = lambda y: math.exp(-(x - y) ** 2 / 4) * abs(y) ** -0.5
        v = sum(integrate.quad(f, a, b, limit=200)[0] for a, b in ((-np.inf, -1e-6), (1e-6, np.inf)))
        return v / math.sqrt(4 * math.pi)
    xs = np.linspace(0.05, 6, 120)
    oracle = max(x**g * heat_at(x) for x in xs)
    got = weighted_heat_norm(TailPower(gamma=0.5, radius=1e-6), t, g, INF, 1)
    assert got == pytest.approx(oracle, rel=5e-3)


def test_translation_bounded_when_gamma_le_mu():
    for gamma, mu in ((0.25, 0.5), (0.5, 0.5)):
        rep = translation_necessity_experiment(gamma, mu, 2.0, 2.0, taus=np.geomspace(1, 64, 7))
        assert rep.expected == "bounded" and rep.passed


def test_translation_grows_when_gamma_gt_mu():
    rep = translation_necessity_experiment(0.75, 0.25, 2.0, 2.0)
    assert rep.expected == "grows" and rep.passed
    assert rep.slope == pytest.approx(0.5, rel=0.10)


def test_translation_tau_one_finite():
    rep = translation_necessity_experiment(0.75, 0.25, 2.0, 2.0, taus=[1.0, 2.0, 4.0])
    assert 0 < rep.lhs[0] < INF and 0 < rep.rhs[0] < INF


def test_translation_needs_finite_exponents():
    with pytest.raises(HypothesisViolated):
        translation_necessity_experiment(0.75, 0.25, INF, 2.0)
