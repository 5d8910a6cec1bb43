import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bjjcat.continuum import (
    CatEnvelope,
    ContinuumParams,
    anharmonic_window,
    barrier_height,
    cat_amplitude,
    curvature_c2,
    effective_mass,
    effective_potential,
    envelope,
    fit_error,
    minima,
    oscillation_frequency,
    packet_width,
    packet_width_asymptotic,
)
from bjjcat.errors import ValidityError
from bjjcat.model import imbalance_distribution

S = 50


def cp(lam, s=S):
    return ContinuumParams(s, lam)


@pytest.mark.parametrize("lam", [0, 0.5, 1.2, 7])
def test_potential_at_origin(lam):
    assert effective_potential(0.0, cp(lam)) == pytest.approx(-50.0)


def test_potential_edges_at_lambda0():
    assert effective_potential(np.array([-1.0, 1.0]), cp(0)) == pytest.approx([0.0, 0.0])


def test_potential_minimum_location():
    x = np.linspace(0, 0.999, 200001)
    xm = x[np.argmin(effective_potential(x, cp(1.2)))]
    assert xm == pytest.approx(0.5528, abs=1e-4)
    assert minima(1.2)[1] == pytest.approx(0.5528, abs=5e-5)


def test_potential_domain_check():
    with pytest.raises(ValueError):
        effective_potential(1.5, cp(1))


def test_effective_mass_values():
    assert effective_mass(0.0, cp(1)) == 1.0
    assert effective_mass(0.8, cp(1)) == pytest.approx(1 / 0.6)
    for lam in (1.2, 2, 7):
        assert effective_mass(minima(lam)[1], cp(lam)) == pytest.approx(lam, rel=1e-12)


def test_effective_mass_si():
    w = 2 * math.pi * 208
    assert effective_mass(0.0, cp(1), omega_R=w) == pytest.approx(S * 1.054571817e-34 / w)


def test_minima_branches():
    assert minima(0.5) == (0.0,)
    assert minima(1.0) == (0.0,)
    assert minima(7)[1] == pytest.approx(0.9897, abs=5e-5)
    assert minima(7)[0] == -minima(7)[1]


def test_minima_continuous_at_transition():
    assert minima(1 + 1e-10)[1] < 1e-4


def test_barrier_height_values():
    assert barrier_height(cp(1)) == 0
    assert barrier_height(cp(2)) == pytest.approx(12.5)
    assert barrier_height(cp(1.2)) == pytest.approx(5 / 6)
    with pytest.raises(ValidityError):
        barrier_height(cp(0.5))


def test_barrier_matches_potential_difference():
    for lam in (1.2, 2, 5):
        p = cp(lam)
        dv = effective_potential(0.0, p) - effective_potential(minima(lam)[1], p)
        assert barrier_height(p) == pytest.approx(dv, rel=1e-12)


def test_curvature_values():
    assert curvature_c2(cp(0), 0.0) == pytest.approx(25)
    assert curvature_c2(cp(2), math.sqrt(3) / 2) == pytest.approx(150)
    with pytest.raises(ValidityError):
        curvature_c2(cp(1), 0.0)


def test_curvature_matches_finite_difference():
    p = cp(2.5)
    xm = minima(2.5)[1]
    h = 1e-4
    v = effective_potential(np.array([xm - h, xm, xm + h]), p)
    second = (v[0] - 2 * v[1] + v[2]) / h**2
    assert curvature_c2(p, xm) == pytest.approx(second / 2, rel=1e-5)


@pytest.mark.parametrize("lam", [1.2, 2, 5])
def test_frequency_curvature_mass_consistency(lam):
    p = cp(lam)
    c2 = curvature_c2(p, minima(lam)[1])
    m_eff = lam * S  # mass unit s*hbar/omega_R with hbar = omega_R = 1
    assert oscillation_frequency(lam) ** 2 == pytest.approx(2 * c2 / m_eff, rel=1e-12)


def test_packet_widths():
    assert packet_width(cp(0)) == pytest.approx(50**-0.5, rel=1e-14)
    assert packet_width(cp(1.2)) == pytest.approx(0.158, abs=1e-3)
    assert packet_width(cp(7)) == pytest.approx(0.0203, abs=5e-5)
    assert packet_width_asymptotic(cp(7)) == pytest.approx(1 / (math.sqrt(50) * 7))
    assert packet_width_asymptotic(cp(7)) == pytest.approx(0.0202, abs=5e-5)
    with pytest.raises(ValidityError):
        packet_width(cp(1))


def test_packet_width_approaches_asymptote():
    ratios = [packet_width(cp(l)) / packet_width_asymptotic(cp(l)) for l in (3, 10, 30, 100)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(1, abs=1e-4)


def test_cat_amplitude_values():
    expected = math.sqrt(350) / (2 * math.sqrt(math.pi)) * 48**0.25
    assert cat_amplitude(cp(7)) == pytest.approx(expected, rel=1e-14)
    assert cat_amplitude(cp(7)) == pytest.approx(13.9, abs=0.05)
    near = [cat_amplitude(cp(1 + d)) for d in (1e-4, 1e-8, 1e-12)]
    # vanishes like (lam^2 - 1)^(1/4): each 1e-4 step in d shrinks C^2 tenfold
    assert near[1] / near[0] == pytest.approx(0.1, rel=1e-3)
    assert near[2] / near[1] == pytest.approx(0.1, rel=1e-3)
    with pytest.raises(ValidityError):
        cat_amplitude(cp(1))


def test_cat_amplitude_linear_growth():
    r = [cat_amplitude(cp(l)) / (math.sqrt(S) * l / (2 * math.sqrt(math.pi))) for l in (10, 100, 1000)]
    assert abs(r[-1] - 1) < 1e-6 and abs(r[0] - 1) > abs(r[-1] - 1)


def test_oscillation_frequency():
    assert oscillation_frequency(1) == 0
    assert oscillation_frequency(math.sqrt(2)) == pytest.approx(1)
    assert oscillation_frequency(7) == pytest.approx(math.sqrt(48))
    assert oscillation_frequency(7, 2.0) == pytest.approx(2 * math.sqrt(48))
    with pytest.raises(ValidityError):
        oscillation_frequency(0.5)


@pytest.mark.parametrize(
    "lam, kind, x0, sigma",
    [(0, "single", 0.0, 0.1414), (1.2, "double", 0.5528, 0.1585), (7, "double", 0.9897, 0.0203)],
)
def test_envelope_parameters(lam, kind, x0, sigma):
    env = envelope(cp(lam))
    assert env.kind == kind
    assert env.x0 == pytest.approx(x0, abs=5e-4)
    assert env.sigma == pytest.approx(sigma, abs=5e-4)


def test_envelope_undefined_at_transition():
    with pytest.raises(ValidityError):
        envelope(cp(1))


def test_envelope_flags_anharmonic_window():
    w = anharmonic_window(100)
    assert w == pytest.approx(3 / 100 ** (2 / 3))
    env = envelope(cp(1 + w / 2))
    assert not env.valid and "anharmonic" in env.note
    assert envelope(cp(1.2)).valid


def test_envelope_flags_sub_bin_width():
    env = envelope(cp(30))
    assert env.sigma * 100 < 2
    assert not env.valid and "Fock bins" in env.note


def test_envelope_validation():
    with pytest.raises(ValueError):
        CatEnvelope(0.1, 0.1, 1.0, "single", 0.5)
    with pytest.raises(ValueError):
        CatEnvelope(0.5, 0.1, 1.0, "double", 1.2)
    with pytest.raises(ValueError):
        CatEnvelope(0.0, -0.1, 1.0, "single", 0.5)


def test_asymptotic_amplitude_close_to_exact():
    env = envelope(cp(1.2))
    assert env.C == pytest.approx(env.C_asymptotic, rel=1e-5)
    assert env.C < env.C_asymptotic


@pytest.mark.parametrize("lam", [0, 0.5, 1.2, 2, 7])
def test_envelope_density_even(lam):
    env = envelope(cp(lam))
    x = np.linspace(-1, 1, 401)
    np.testing.assert_allclose(env.density(x), env.density(-x), rtol=1e-14)


@given(st.floats(-1, 1), st.floats(0, 10))
def test_potential_even(x, lam):
    p = cp(lam)
    assert effective_potential(x, p) == effective_potential(-x, p)


def _mass_on_domain(env):
    x = np.linspace(-1, 1, 200001)
    return np.trapezoid(env.density(x), x)


@pytest.mark.parametrize("lam", [0, 1.2])
def test_envelope_normalized_on_domain(lam):
    assert abs(_mass_on_domain(envelope(cp(lam))) - 1) < 1e-3


def test_envelope_mass_near_edge_matches_erf():
    # each lobe of |psi|^2 is a Gaussian of standard deviation sigma/sqrt2; the
    # part beyond |x| = 1 is cut off by the domain
    env = envelope(cp(7))
    inside = 0.5 * (1 + math.erf((1 - env.x0) / env.sigma))
    assert _mass_on_domain(env) == pytest.approx(inside, abs=1e-4)


def test_envelope_normalization_at_lambda7():
    assert abs(_mass_on_domain(envelope(cp(7))) - 1) < 2e-2


@pytest.mark.parametrize("lam", [1.2, 2, 7])
def test_lobe_overlap_negligible(lam):
    assert envelope(cp(lam)).overlap < 1e-5


def test_discrete_envelope_sums_to_one():
    env = envelope(cp(1.2))
    assert env.discrete(100).sum() == pytest.approx(1, abs=1e-3)


def test_fit_error_zero_for_own_envelope():
    env = envelope(cp(0))
    P = env.discrete(100)
    assert fit_error(P, env) == 0


def test_fit_error_rejects_bad_input():
    with pytest.raises(ValueError):
        fit_error([1.0], envelope(cp(0)))


def _fit(ground, lam):
    _, res = ground(100, lam)
    return fit_error(imbalance_distribution(res.ground), envelope(cp(lam)))


def test_fit_error_lambda0(ground):
    assert _fit(ground, 0.0) < 0.04


def test_fit_error_lambda_1_2(ground):
    assert _fit(ground, 1.2) < 0.04


def test_fit_error_lambda7(ground):
    assert _fit(ground, 7.0) > 0.04


@pytest.mark.parametrize("s", [1, 2])
def test_params_validation(s):
    with pytest.raises(ValueError):
        ContinuumParams(s - 1.5, 1.0)
