import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from lifespan_lab.errors import ConfigInvalid, EvaluationAtSingularity
from lifespan_lab.profiles import (
    AngularPart,
    BoundedBump,
    Constant,
    DiracApprox,
    MeasureDatum,
    SectorPsi0,
    SingularPower,
    TailPower,
    TruncatedSingular,
    TwoPower,
    dilate,
    evaluate,
    lebesgue_norm,
    profile_from_config,
    profile_to_config,
    sector_constant,
    sector_ratio_norm,
)

RATIO = AngularPart("first_coordinate_ratio")


def test_sector_constants():
    assert sector_constant(1, 1.0) == 1.0
    assert sector_constant(2, 1.0) == 3.0
    assert sector_constant(3, 0.5) == 0.5 * 2.5 * 4.5


def test_psi0_unit_value():
    assert evaluate(SectorPsi0(m=1, gamma=1.0), [1.0, 0.0, 0.0]) == pytest.approx(1.0)


def test_two_power_continuous_at_interface():
    p = TwoPower(gamma1=0.25, gamma2=0.75, radius=1.0)
    assert evaluate(p, [1.0]) == pytest.approx(1.0)
    assert evaluate(p, [1.0 - 1e-12]) == pytest.approx(evaluate(p, [1.0 + 1e-12]), rel=1e-9)


def test_singular_at_origin():
    for p in (SingularPower(), TruncatedSingular(), TwoPower(), SectorPsi0()):
        with pytest.raises(EvaluationAtSingularity):
            evaluate(p, [0.0])
    assert evaluate(Constant(c=2.0), [0.0]) == 2.0


def test_dirac_approx_mass_is_exact():
    val, _ = integrate.quad(lambda x: float(DiracApprox(mass=3.0, width=0.2).values([x])), -np.inf, np.inf)
    assert val == pytest.approx(3.0, rel=1e-10)


def test_dilate_homogeneous_is_identity():
    p = SingularPower(gamma=0.7, angular=RATIO)
    for mu in (0.1, 1.0, 3.0):
        assert dilate(p, mu, 0.7) == p


def test_dilate_truncated_moves_cutoff():
    p = TruncatedSingular(gamma=0.5, epsilon=1.0)
    assert dilate(p, 4.0, 0.5) == TruncatedSingular(gamma=0.5, epsilon=0.25)


@pytest.mark.parametrize("p", [Constant(c=2.0), BoundedBump(), TruncatedSingular(), TailPower(), TwoPower(),
                               SectorPsi0(epsilon=2.0)])
def test_dilate_by_one_is_identity(p):
    assert dilate(p, 1.0, 0.0) == p


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([BoundedBump(width=0.7), TruncatedSingular(gamma=0.4), TailPower(gamma=0.6),
                     TwoPower(gamma1=0.3, gamma2=0.9, radius=2.0), SectorPsi0(m=1, gamma=0.5, epsilon=3.0)]),
    st.floats(0.05, 20),
    st.floats(-2, 2),
    st.floats(0.01, 10),
)
def test_dilate_matches_pointwise(p, mu, w, x):
    # reference evaluation mu^w phi(mu x)
    expected = mu**w * float(p.values([mu * x]))
    assert float(dilate(p, mu, w).values([x])) == pytest.approx(expected, rel=1e-12, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 1.9), st.floats(0.01, 100), st.floats(-3, 3), st.floats(0.1, 3))
def test_singular_power_homogeneity(gamma, tau, x1, x2):
    p = SingularPower(gamma=gamma, angular=RATIO)
    x = np.array([x1, x2])
    if not np.any(x):
        return
    assert evaluate(p, tau * x) == pytest.approx(tau**-gamma * evaluate(p, x), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 5), st.floats(-4, 4), st.floats(-4, 4))
def test_angular_part_degree_zero(tau, a, b):
    x = np.array([[a, b]])
    if not np.any(x):
        return
    assert RATIO.value(tau * x)[0] == pytest.approx(RATIO.value(x)[0], rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 0.9), st.lists(st.floats(0.05, 5), min_size=1, max_size=8))
def test_truncated_family_nonincreasing(gamma, xs):
    p = TruncatedSingular(gamma=gamma, epsilon=1.0)
    mus = [0.25, 0.5, 1.0, 2.0]
    rows = [dilate(p, mu, gamma).values(np.array(xs)[:, None]) for mu in mus]
    for a, b in zip(rows, rows[1:]):
        assert np.all(b <= a)


def test_two_power_family_directions():
    p = TwoPower(gamma1=0.25, gamma2=0.75)
    x = np.geomspace(0.01, 50, 40)[:, None]
    mus = [0.25, 0.5, 1, 2, 4]
    lo = [dilate(p, mu, 0.25).values(x) for mu in mus]
    hi = [dilate(p, mu, 0.75).values(x) for mu in mus]
    for a, b in zip(lo, lo[1:]):
        assert np.all(b <= a * (1 + 1e-14))
    for a, b in zip(hi, hi[1:]):
        assert np.all(b >= a * (1 - 1e-14))


def test_psi0_vanishes_on_hyperplanes():
    p = SectorPsi0(m=2, gamma=0.5)
    pts = np.array([[0.0, 1.0, 0.3], [2.0, 0.0, -1.0]])
    assert np.all(p.values(pts) == 0)
    assert p.values([[0.5, 0.5, 0.1]])[0] > 0
    assert p.values([[-0.5, 0.5, 0.1]])[0] < 0


def test_sector_ratio_norm():
    assert sector_ratio_norm(SectorPsi0(m=1, gamma=0.5), 1, 0.5).value == pytest.approx(1.0)
    assert sector_ratio_norm(SectorPsi0(m=1, gamma=0.5, lam=2.0), 1, 0.5).value == pytest.approx(2.0)


def test_sector_ratio_norm_extra_decay_is_finite():
    # x1 |x|^(-gamma-2) (1+|x|)^(-1) is bounded against psi0; stable over the two samplings
    p = SectorPsi0(m=1, gamma=0.5)

    class Damped(SectorPsi0):
        def _raw(self, x, r):
            return super()._raw(x, r) / (1 + r)

    res = sector_ratio_norm(Damped(m=1, gamma=0.5), 1, 0.5, dimension=2)
    assert res.finite and res.value <= 1.0
    grow = sector_ratio_norm(SectorPsi0(m=1, gamma=0.8), 1, 0.5, dimension=1)
    assert not grow.finite
    assert p.antisymmetry_axes == 1


def _quad_norm(p, q, weight):
    f = lambda r: (r**weight * abs(float(p.values([r])))) ** q
    brk = [r for r in p.discontinuity_radii()]
    pieces = [0.0, *brk, np.inf]
    return (2 * sum(integrate.quad(f, a, b, limit=200)[0] for a, b in zip(pieces, pieces[1:]))) ** (1 / q)


@pytest.mark.parametrize("p,q,w", [
    (TruncatedSingular(gamma=0.5, epsilon=1.0), 1.0, 0.0),
    (TruncatedSingular(gamma=0.3, epsilon=2.0), 2.0, 0.0),
    (TailPower(gamma=0.75, radius=1.0), 2.0, 0.0),
    (TwoPower(gamma1=0.25, gamma2=0.75), 2.0, 0.0),
    (BoundedBump(width=1.5), 1.0, 0.0),
    (TruncatedSingular(gamma=0.5, epsilon=1.0), 2.0, 0.5),
])
def test_lebesgue_norm_against_quadrature(p, q, w):
    assert lebesgue_norm(p, q, w, 1) == pytest.approx(_quad_norm(p, q, w), rel=1e-6)


def test_lebesgue_sup_norms():
    assert lebesgue_norm(TruncatedSingular(gamma=0.5), math.inf, 0.5, 1) == pytest.approx(1.0)
    assert lebesgue_norm(TruncatedSingular(gamma=0.5), math.inf, 0.0, 1) == math.inf
    assert lebesgue_norm(BoundedBump(amplitude=2.0), math.inf, 0.0, 1) == pytest.approx(2.0)


def test_config_round_trip():
    for p in (TruncatedSingular(gamma=0.5, angular=RATIO, epsilon=2.0), TwoPower(), SectorPsi0(epsilon=1.0),
              DiracApprox(mass=2.0, width=0.01), Constant(c=3.0, lam=0.5), MeasureDatum(mass=2.0)):
        assert profile_from_config(profile_to_config(p)) == p


def test_config_errors_carry_path():
    with pytest.raises(ConfigInvalid) as exc:
        profile_from_config({"kind": "truncated_singular", "gama": 0.5})
    assert exc.value.path == "datum.gama"
    with pytest.raises(ConfigInvalid) as exc:
        profile_from_config({"kind": "tail_power", "gamma": -1})
    assert exc.value.path == "datum.gamma"
