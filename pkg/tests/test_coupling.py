import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpstat.coupling import (AnglePolicy, Geometry, build_coupling_set, coupling_parameter,
                               coupling_parameter_array)
from jumpstat.errors import ConfigurationError
from jumpstat.model import d_system, four_level


def mp_coupling(a_j, a, theta, dps=50):
    """Arbitrary-precision evaluation of the same expression."""
    with mpmath.workdps(dps):
        a = mpmath.mpf(a)
        cos2 = mpmath.cos(mpmath.mpf(theta)) ** 2
        ia = 1j * a
        bracket = (1 - cos2) / ia + (1 / a ** 2 - 1 / (ia * a ** 2)) * (1 - 3 * cos2)
        return complex(mpmath.mpf(1.5) * a_j * mpmath.exp(ia) * bracket)


def test_far_field_decay():
    assert abs(coupling_parameter(1.0, 1e6)) < 1e-5


def test_small_distance_real_part():
    a = 1e-3
    c = coupling_parameter(1.0, a)
    assert abs(c.real - (1 - a ** 2 / 5)) < 1e-10
    assert abs(c.real - 1) < 1e-5


@pytest.mark.parametrize("a,theta", [(2 * math.pi, math.pi / 2), (0.7, 0.3), (15.0, 1.1), (1e-2, math.pi / 2)])
def test_matches_high_precision_oracle(a, theta):
    got = coupling_parameter(1.0, a, theta)
    want = mp_coupling(1.0, a, theta)
    assert abs(got - want) <= 1e-11 * max(1.0, abs(want))


def test_regression_fixture_at_one_wavelength():
    # arbitrary-precision value at a = 2 pi, theta = pi/2
    want = mp_coupling(1.0, 2 * math.pi, math.pi / 2, dps=80)
    assert coupling_parameter(1.0, 2 * math.pi) == pytest.approx(want, rel=1e-12)


def test_domain_error():
    with pytest.raises(ValueError):
        coupling_parameter(1.0, 0.0)
    with pytest.raises(ValueError):
        coupling_parameter_array(1.0, np.array([1.0, -1.0]))


def test_array_matches_scalar():
    a = np.linspace(0.1, 40, 57)
    arr = coupling_parameter_array(1.3, a, 0.9)
    assert np.allclose(arr, [coupling_parameter(1.3, x, 0.9) for x in a], rtol=1e-14, atol=0)


@given(a=st.floats(1.0, 1e4), theta=st.floats(0.0, math.pi))
@settings(max_examples=200, deadline=None)
def test_one_over_a_bound(a, theta):
    # 1.5 (sin^2/a + |1 - 3 cos^2| (1/a^2 + 1/a^3)) <= 1.5 (1 + 2 * 2) / a for a >= 1
    assert abs(coupling_parameter(1.0, a, theta)) <= 7.5 / a


def test_equilateral_couplings_identical():
    scheme = four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, wavelengths={1: 3.574, 2: 1.2454, 4: 0.9229})
    cs = build_coupling_set(Geometry.equilateral(1.0), scheme)
    for j in (1, 2, 3, 4):
        vals = [cs.get(k, l, j) for k, l in ((0, 1), (0, 2), (1, 2))]
        assert max(abs(v - vals[0]) for v in vals) < 1e-14
        assert cs.get(1, 0, j) == cs.get(0, 1, j)
    assert cs.get(0, 1, 3) == pytest.approx(coupling_parameter(1.0, 2 * math.pi))


def test_decoupling_limit():
    scheme = d_system(1e-3, 1e-3, 1.0, wavelengths={1: 2.0, 2: 1.5})
    cs = build_coupling_set(Geometry.equilateral(1e7), scheme)
    assert max(abs(v) for v in cs.c.values()) < 1e-6


def test_dipole_geometry_recovers_right_angle():
    geo = Geometry(((0, 0, 0), (0, 0, 2.0)), policy=AnglePolicy.DIPOLE, dipole=(1, 0, 0))
    assert geo.angle(0, 1) == pytest.approx(math.pi / 2)
    scheme = d_system(1e-3, 1e-3, 1.0, wavelengths={1: 2.0, 2: 1.5})
    cs = build_coupling_set(geo, scheme)
    assert cs.a[((0, 1), 1)] == pytest.approx(2 * math.pi * 2.0 / 2.0)
    assert cs.get(0, 1, 3) == pytest.approx(coupling_parameter(1.0, 4 * math.pi))


def test_missing_wavelength_is_configuration_error():
    with pytest.raises(ConfigurationError):
        build_coupling_set(Geometry.equilateral(1.0), d_system(1e-3, 1e-3, 1.0))


def test_geometry_validation():
    with pytest.raises(ConfigurationError):
        Geometry(((0, 0, 0), (0, 0, 0)))
    with pytest.raises(ConfigurationError):
        Geometry(((0, 0, 0), (1, 0, 0)), policy=AnglePolicy.EXPLICIT)
    assert not Geometry(((0, 0, 0), (1, 0, 0), (3, 0, 0))).is_equilateral


@pytest.mark.parametrize("x", [0.05, 0.1, 0.25, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("n", [2, 3])
def test_damping_matrix_psd(x, n):
    scheme = four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, wavelengths={1: 3.574, 2: 1.2454, 4: 0.9229})
    for j in (1, 2, 3, 4):
        geo = Geometry.equilateral(x * scheme.wavelengths[j], n)
        m = build_coupling_set(geo, scheme, (j,)).damping_matrix(j, n, scheme.einstein[j])
        assert np.linalg.eigvalsh(m).min() >= -1e-12
