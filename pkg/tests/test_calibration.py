import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import sbend_lengthening
from meshwalk import (DomainError, SBendGeometry, coupler_matrix, mz_output, path_lengthening,
                      phase_from_deformation, phase_from_mz_measurement, sbend_curve)
from meshwalk.calibration import calibration_table, wrap_phase

GEOM = SBendGeometry()


def mz_by_matrices(phi):
    bs = coupler_matrix(0.5)
    out = bs @ np.diag([np.exp(1j * phi), 1.0]) @ bs @ np.array([1.0, 0.0])
    return abs(out[0]) ** 2, abs(out[1]) ** 2


@pytest.mark.parametrize("d", [-0.25, -0.1, 0.0, 0.05, 0.25])
def test_curve_endpoints_and_tangents(d):
    c = sbend_curve(GEOM, d)
    assert c(0.0) == pytest.approx(0.0, abs=1e-12)
    assert c(GEOM.length) == pytest.approx(GEOM.height, abs=1e-12)
    assert c.slope(0.0) == pytest.approx(0.0, abs=1e-15)
    assert c.slope(GEOM.length) == pytest.approx(0.0, abs=1e-15)


def test_curve_slope_is_derivative():
    c = sbend_curve(GEOM, 0.2)
    x = np.linspace(1.0, GEOM.length - 1.0, 50)
    h = 1e-3
    numeric = (c(x + h) - c(x - h)) / (2 * h)
    np.testing.assert_allclose(c.slope(x), numeric, atol=1e-8)


def test_bump_peak():
    x = np.linspace(0, GEOM.length, 2001)
    dev = sbend_curve(GEOM, 0.05)(x) - sbend_curve(GEOM, 0.0)(x)
    assert dev.max() == pytest.approx(2.0, abs=1e-12)
    assert x[np.argmax(dev)] == pytest.approx(GEOM.length / 2)


def test_baseline_is_raised_cosine():
    x = np.linspace(0, GEOM.length, 11)
    np.testing.assert_allclose(sbend_curve(GEOM, 0.0)(x), 20.0 * (1 - np.cos(np.pi * x / 1000.0)), atol=1e-12)


def test_bend_stays_monotone_up_to_d_max():
    x = np.linspace(0, GEOM.length, 10001)
    assert np.all(sbend_curve(GEOM, GEOM.d_max).slope(x) >= -1e-15)
    assert np.all(sbend_curve(GEOM, -GEOM.d_max).slope(x) >= -1e-15)


def test_lengthening_values():
    assert path_lengthening(GEOM, 0.0) == 0.0
    dl = path_lengthening(GEOM, 0.05)
    assert dl > 0
    assert abs(dl - sbend_lengthening(GEOM.length, GEOM.height, 0.05)) < 1e-6


def test_lengthening_sweep_against_simpson():
    ds = np.linspace(0.0, GEOM.d_max, 50)
    quad = np.array([path_lengthening(GEOM, d) for d in ds])
    ref = np.array([sbend_lengthening(GEOM.length, GEOM.height, d) for d in ds])
    assert np.max(np.abs(quad - ref)) < 1e-6
    assert np.all(quad[1:] > 0)


def test_lengthening_even_in_d():
    # the bump changes sign under x -> L - x, so this family gives dl(d) = dl(-d)
    for d in (0.03, 0.17):
        assert path_lengthening(GEOM, -d) == pytest.approx(path_lengthening(GEOM, d), rel=1e-8)


def test_other_geometry_against_simpson():
    g = SBendGeometry(length=300.0, height=60.0)
    assert abs(path_lengthening(g, 0.2) - sbend_lengthening(300.0, 60.0, 0.2)) < 1e-6


def test_phase_formula():
    # pick the wavelength so that dl is exactly half of it
    dl = path_lengthening(GEOM, 0.1)
    g = SBendGeometry(wavelength=2 * dl)
    assert phase_from_deformation(g, 0.1) == pytest.approx(np.pi, abs=1e-12)
    assert phase_from_deformation(GEOM, 0.0) == 0.0
    assert phase_from_deformation(GEOM, 0.1, n_eff=1.5) == pytest.approx(1.5 * phase_from_deformation(GEOM, 0.1))


def test_phase_monotone_and_table():
    ds = np.linspace(0.0, GEOM.d_max, 40)
    table = calibration_table(GEOM, ds)
    assert table.shape == (40, 3)
    assert np.all(np.diff(table[:, 2]) > 0)
    np.testing.assert_allclose(table[:, 2], [phase_from_deformation(GEOM, d) for d in ds], rtol=1e-14)


def test_wrap_phase():
    np.testing.assert_allclose(wrap_phase(np.array([0.0, np.pi, -np.pi, 3 * np.pi, 4.0])),
                               [0.0, np.pi, np.pi, np.pi, 4.0 - 2 * np.pi], atol=1e-12)
    big = SBendGeometry(wavelength=0.05)
    phi = phase_from_deformation(big, 0.25, wrap=True)
    assert -np.pi < phi <= np.pi


@pytest.mark.parametrize("phi,expected", [(0.0, (0.0, 1.0)), (np.pi, (1.0, 0.0)), (np.pi / 2, (0.5, 0.5))])
def test_mz_hand_values(phi, expected):
    np.testing.assert_allclose(mz_output(phi), expected, atol=1e-15)


def test_mz_matches_coupler_product():
    for phi in np.linspace(-np.pi, np.pi, 37):
        np.testing.assert_allclose(mz_output(phi), mz_by_matrices(phi), atol=1e-14)


@pytest.mark.parametrize("p,expected", [(0.0, 0.0), (1.0, np.pi), (0.5, np.pi / 2)])
def test_phase_readout_hand_values(p, expected):
    assert phase_from_mz_measurement(p) == pytest.approx(expected, abs=1e-15)


def test_round_trip_grid():
    phis = np.linspace(-np.pi, np.pi, 100)
    err = max(abs(phase_from_mz_measurement(mz_output(p)[0]) - abs(p)) for p in phis)
    assert err < 1e-10


@settings(max_examples=200, deadline=None)
@given(phi=st.floats(-np.pi, np.pi), scale=st.floats(1e-3, 1.0))
def test_round_trip_both_ports(phi, scale):
    bar, cross = mz_output(phi)
    # intensity-independent when both ports are supplied
    assert abs(phase_from_mz_measurement(scale * bar, scale * cross) - abs(phi)) < 1e-10


@pytest.mark.parametrize("args", [(-0.1,), (1.1,), (0.5, 1.5), (0.0, 0.0), (np.nan,)])
def test_readout_domain(args):
    with pytest.raises(DomainError):
        phase_from_mz_measurement(*args)


def test_geometry_domain():
    with pytest.raises(DomainError):
        path_lengthening(GEOM, 0.3)
    with pytest.raises(DomainError):
        SBendGeometry(length=0.0)
    with pytest.raises(DomainError):
        SBendGeometry(wavelength=-1.0)
