import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localphonon import ChainGeometry, TrapConfig, ValidationError
from localphonon.chain import (
    coupling_matrix,
    equilibrium_positions,
    max_scaled_gradient,
    site_shifts,
    two_ion_separation,
)


def test_two_ion_separation_matches_newton():
    trap = TrapConfig()
    pos = equilibrium_positions(trap)
    assert pos[1] - pos[0] == pytest.approx(two_ion_separation(trap), rel=1e-12)
    assert pos.sum() == pytest.approx(0.0, abs=1e-18)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 7])
def test_equilibrium_is_stationary_and_symmetric(n):
    trap = TrapConfig(ion_count=n)
    pos = equilibrium_positions(trap)
    assert len(pos) == n
    assert np.all(np.diff(pos) > 0)
    assert max_scaled_gradient(pos, trap) < 1e-10
    np.testing.assert_allclose(pos, -pos[::-1], atol=1e-12 * trap.length_scale())


def test_three_ion_known_spacing():
    # three ions: outer ions at +-(5/4)^(1/3) in units of the length scale
    trap = TrapConfig(ion_count=3)
    pos = equilibrium_positions(trap) / trap.length_scale()
    np.testing.assert_allclose(pos, [-(1.25 ** (1 / 3)), 0.0, 1.25 ** (1 / 3)], atol=1e-12)


def test_kappa_scales_as_inverse_cube():
    trap = TrapConfig()
    k1 = coupling_matrix(np.array([0.0, 10e-6]), trap)[0, 1]
    k2 = coupling_matrix(np.array([0.0, 20e-6]), trap)[0, 1]
    assert k1 / k2 == pytest.approx(8.0, rel=1e-12)


def test_kappa_symmetric_zero_diagonal_positive():
    geo = ChainGeometry.from_trap(TrapConfig(ion_count=4))
    k = geo.kappa
    np.testing.assert_array_equal(k, k.T)
    assert np.all(np.diag(k) == 0)
    off = k[~np.eye(4, dtype=bool)]
    assert np.all(off > 0)


def test_site_shift_two_ions():
    geo = ChainGeometry.from_trap(TrapConfig())
    k = geo.kappa[0, 1]
    np.testing.assert_allclose(geo.site_shift, [-k / 2, -k / 2], rtol=1e-15)


def test_site_shift_three_ions():
    k = np.array([[0, 3.0, 1.0], [3.0, 0, 2.0], [1.0, 2.0, 0]])
    np.testing.assert_allclose(site_shifts(k), [-2.0, -2.5, -1.5])


def test_site_shift_rejects_asymmetric():
    with pytest.raises(ValidationError):
        site_shifts([[0, 1.0], [2.0, 0]])
    with pytest.raises(ValidationError):
        site_shifts([[1.0, 1.0], [1.0, 0]])


def test_coupling_rejects_coincident_ions():
    with pytest.raises(ValidationError):
        coupling_matrix([0.0, 0.0], TrapConfig())
    with pytest.raises(ValidationError):
        coupling_matrix([1.0, 0.0], TrapConfig())


@pytest.mark.parametrize(
    "kwargs",
    [{"ion_count": 0}, {"ion_count": 1.5}, {"nu_z": 0.0}, {"nu_y": -1.0}, {"mass": 0.0}],
)
def test_trap_validation(kwargs):
    with pytest.raises(ValidationError):
        TrapConfig(**kwargs)


def test_from_kappa_scalar():
    geo = ChainGeometry.from_kappa(2.0)
    np.testing.assert_array_equal(geo.kappa, [[0, 2.0], [2.0, 0]])
    np.testing.assert_array_equal(geo.site_shift, [-1.0, -1.0])


def test_to_dict_round_numbers():
    d = ChainGeometry.from_trap(TrapConfig()).to_dict()
    assert d["separations_m"][0] == pytest.approx(24.4165e-6, rel=1e-5)
    assert d["kappa_hz"][0][1] == pytest.approx(d["kappa_rad_s"][0][1] / (2 * math.pi))
    assert d["trap"]["nu_z"] == 0.11e6


@settings(max_examples=30, deadline=None)
@given(nu_z=st.floats(0.05e6, 0.9e6), nu_y=st.floats(1e6, 5e6))
def test_geometry_scaling_property(nu_z, nu_y):
    # d ~ nu_z^(-2/3) and kappa ~ nu_z^2 / nu_y
    base = ChainGeometry.from_trap(TrapConfig(nu_z=nu_z, nu_y=nu_y))
    ref = ChainGeometry.from_trap(TrapConfig(nu_z=0.11e6, nu_y=2.87e6))
    d, d0 = np.diff(base.positions)[0], np.diff(ref.positions)[0]
    assert d / d0 == pytest.approx((nu_z / 0.11e6) ** (-2 / 3), rel=1e-9)
    assert base.kappa[0, 1] / ref.kappa[0, 1] == pytest.approx((nu_z / 0.11e6) ** 2 * 2.87e6 / nu_y, rel=1e-9)
