import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpstat.coupling import CouplingSet, Geometry
from jumpstat.errors import ModelError, UnsupportedConfigurationError
from jumpstat.liouville import vec
from jumpstat.model import EnsembleSpec, d_system, four_level
from jumpstat.rates import RateMatrix, RateProblem, read_table, rho_ss3_populations
from jumpstat.rates.closed import POPULATION_KEYS, closed_form_rates, mean_ground_count
from jumpstat.rates.projection import clamp_rate
from jumpstat.verification import numeric_rho_ss3

LAMS = {1: 3.574, 2: 1.2454, 4: 0.9229}


def single_d(a1=1e-3, a2=2e-3, rabi=0.7, **kw):
    return RateProblem(EnsembleSpec(d_system(a1, a2, rabi, **kw), 1))


# quasi-steady states ------------------------------------------------------------------

def test_single_d_quasi_steady_states():
    rabi = 0.7
    q0, q1 = single_d(rabi=rabi).qss
    assert np.allclose(q0.rho_ss, np.diag([0, 1, 0]))
    den = 1 + 2 * rabi ** 2
    want = np.array([[1 + rabi ** 2, 0, 1j * rabi], [0, 0, 0], [-1j * rabi, 0, rabi ** 2]]) / den
    assert np.allclose(q1.rho_ss, want, atol=1e-12)
    assert np.allclose(q1.dual, np.diag([1, 0, 1]), atol=1e-12)
    assert np.allclose(q0.dual, np.diag([0, 1, 0]), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("kind", ["d", "four"])
def test_quasi_steady_state_invariants(kind, n):
    s = (d_system(1e-3, 2e-3, 0.8, detuning=0.4, wavelengths={1: 2.0, 2: 1.5}) if kind == "d"
         else four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, detuning=0.4, wavelengths=LAMS))
    prob = RateProblem(EnsembleSpec(s, n, Geometry.equilateral(0.4, n) if n > 1 else None))
    L0 = prob.generator.L0
    for i, q in enumerate(prob.qss):
        rho = q.rho_ss
        assert np.abs(L0.matrix @ vec(rho)).max() < 1e-10
        assert abs(np.trace(rho) - 1) < 1e-10
        assert np.allclose(rho, rho.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() > -1e-10
        for j, other in enumerate(prob.qss):
            assert abs(q.project(other.rho_ss) - (i == j)) < 1e-9
        assert np.abs(L0.matrix.T @ q.dual_vector).max() < 1e-9


# projection -------------------------------------------------------------------------

def test_projection_single_d():
    a1, a2, rabi = 1e-3, 2e-3, 0.7
    p = single_d(a1, a2, rabi).projection()
    assert p.up[0] == pytest.approx(a1, rel=1e-12)
    assert p.down[0] == pytest.approx(a2 * rabi ** 2 / (1 + 2 * rabi ** 2), rel=1e-12)


@pytest.mark.parametrize("r", [0.3, 1.0, 4.0])
def test_projection_two_d_upward(r):
    s = d_system(2e-3, 1e-3, 0.7, wavelengths={1: 2.0, 2: 1.5})
    p = RateProblem(EnsembleSpec(s, 2, Geometry.equilateral(r, 2))).projection()
    assert p.up[0] == pytest.approx(4e-3, rel=1e-12)
    assert p.off_chain < 1e-10


def test_projection_three_four_level_uncoupled_matches_closed():
    s = four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, detuning=0.2, wavelengths=LAMS)
    spec = EnsembleSpec(s, 3)
    p = RateProblem(spec, couplings=CouplingSet.empty()).projection()
    exact, _ = closed_form_rates(spec, 0j)
    assert np.allclose(p.up + p.down, exact.up + exact.down, rtol=1e-10, atol=0)
    assert p.off_chain < 1e-10


def test_negative_rate_guard():
    assert clamp_rate(-1e-12, "p") == 0.0
    with pytest.raises(ModelError):
        clamp_rate(-1e-6, "p")


# simplified scheme -------------------------------------------------------------------

def test_simplified_single_d():
    a1, a2, rabi = 1e-3, 2e-3, 0.7
    prob = single_d(a1, a2, rabi)
    chans = prob.channels()
    down = [c for c in chans if c.crossing == (1, 0)]
    assert [(c.from_state, c.to_state) for c in down] == [("|3>", "|2>")]
    assert down[0].rate == pytest.approx(a2)
    p = prob.simplified()
    assert p.down[0] == pytest.approx(a2 * rabi ** 2 / (1 + 2 * rabi ** 2), rel=1e-12)


def test_simplified_two_d_upward_channels():
    a1 = 2e-3
    s = d_system(a1, 1e-3, 0.7, wavelengths={1: 2.0, 2: 1.5})
    prob = RateProblem(EnsembleSpec(s, 2, Geometry.equilateral(0.4, 2)))
    c1 = prob.couplings.get(0, 1, 1).real
    up = {(c.from_state, c.to_state): c.rate for c in prob.channels() if c.crossing == (0, 1)}
    assert up == pytest.approx({("e2", "s12"): a1 + c1, ("e2", "a12"): a1 - c1})
    assert prob.simplified().up[0] == pytest.approx(2 * a1, rel=1e-12)


def test_two_d_p21_channels():
    s = d_system(2e-3, 1e-3, 0.7, wavelengths={1: 2.0, 2: 1.5})
    prob = RateProblem(EnsembleSpec(s, 2, Geometry.equilateral(0.4, 2)))
    pairs = {(c.from_state, c.to_state) for c in prob.channels() if c.crossing == (2, 1)}
    assert {("e3", "s23"), ("e3", "a23")} <= pairs
    assert {("s13", "s12"), ("a13", "a12")} <= pairs
    assert all(c.from_state in ("e3", "e1", "s13", "a13") for c in prob.channels() if c.crossing == (2, 1))


def test_single_four_level_channels():
    s = four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, wavelengths=LAMS)
    chans = RateProblem(EnsembleSpec(s, 1)).channels()
    rates = {c.crossing: c.rate for c in chans}
    assert len(chans) == 2
    assert rates[(1, 0)] == pytest.approx(1e-2 * 0.3 / 1.5)
    assert rates[(0, 1)] == pytest.approx(1e-3)


def test_channels_far_apart_are_bare_multiples():
    # three-atom symmetrized states give Clebsch-like factors in twelfths
    s = d_system(2e-3, 1e-3, 0.7, wavelengths={1: 2.0, 2: 1.5})
    prob = RateProblem(EnsembleSpec(s, 3, Geometry.equilateral(1e7)))
    for c in prob.channels():
        if c.is_interference:
            continue
        bare = 2e-3 if c.crossing[1] > c.crossing[0] else 1e-3
        k = 12 * c.rate / bare
        assert abs(k - round(k)) < 1e-5


def test_simplified_reports_interference_for_three_atoms():
    s = four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, wavelengths=LAMS)
    prob = RateProblem(EnsembleSpec(s, 3, Geometry.equilateral(0.7)))
    p = prob.simplified()
    assert np.abs(p.meta["interference"]).max() > 0
    assert p.up[2] == pytest.approx(1e-3, rel=1e-10)


# closed forms --------------------------------------------------------------------------

def test_closed_p21_uncoupled():
    a2, a4, w, rabi = 0.3, 1.2, 1e-2, 0.6
    spec = EnsembleSpec(four_level(1e-3, a2, a4, w, rabi), 3)
    exact, first = closed_form_rates(spec, 0j, 0.0)
    want = 2 * a2 * w * (1 + rabi ** 2) / ((a2 + a4) * (1 + 2 * rabi ** 2))
    assert exact.down[1] == pytest.approx(want, rel=1e-14)
    assert first.down[1] == pytest.approx(want, rel=1e-14)
    assert exact.up == pytest.approx((3e-3, 2e-3, 1e-3))


def test_closed_p10_example_and_projection():
    s = four_level(1e-4, 1.0, 1.0, 0.1, 1.0)
    spec = EnsembleSpec(s, 1)
    exact, _ = closed_form_rates(spec, 0j, 0.0)
    assert exact.down[0] == pytest.approx(1 / 30, rel=1e-14)
    assert RateProblem(spec).projection().down[0] == pytest.approx(1 / 30, rel=1e-10)


def test_exact_vs_first_order_small_coupling():
    for k in (2, 3):
        for delta in (0.0, 0.5):
            c = 1e-3 * np.exp(0.9j)
            ex = mean_ground_count(k, 1.0, 0.6, delta, c, "exact")
            fi = mean_ground_count(k, 1.0, 0.6, delta, c, "first")
            assert abs(ex - fi) / abs(ex) <= 1e-5


def test_first_order_slope_by_finite_differences():
    a2, a4, w, rabi = 0.3, 1.2, 1e-2, 0.6
    spec = EnsembleSpec(four_level(1e-3, a2, a4, w, rabi), 3)
    h = 1e-6

    def p21(c):
        return closed_form_rates(spec, c, 0.0)[0].down[1]

    slope = (p21(h) - p21(-h)) / (2 * h)
    want = 2 * a2 * w / (a2 + a4) * 2 * rabi ** 2 / (1 + 2 * rabi ** 2) ** 3
    assert slope == pytest.approx(want, rel=1e-6)


def test_detuning_terms_vanish_at_zero_detuning():
    # exact <N1>_3 at zero detuning equals the count implied by the rho_ss,3 populations
    ones = {"g": 3, "s113": 2, "b113": 2, "c113": 2, "s133": 1, "b133": 1, "c133": 1, "e3": 0}
    for rabi in (0.2, 0.6, 1.5):
        for c in (0.3 + 0.2j, -0.1 + 0.4j, 0.05j):
            pops = rho_ss3_populations(1.0, rabi, c)
            count = sum(ones[k] * float(pops[k]) for k in POPULATION_KEYS)
            assert float(mean_ground_count(3, 1.0, rabi, 0.0, c)) == pytest.approx(count, rel=1e-12)


def test_closed_forms_reject_unequal_pairs():
    s = four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, wavelengths=LAMS)
    geo = Geometry(((0, 0, 0), (1, 0, 0), (3, 0, 0)))
    with pytest.raises(UnsupportedConfigurationError):
        RateProblem(EnsembleSpec(s, 3, geo)).closed()
    # the numerical route still works
    p = RateProblem(EnsembleSpec(s, 3, geo)).projection()
    assert p.n_levels == 4


# cross-method invariants -------------------------------------------------------------

D_SPECS = [(d_system(1e-3, 2e-3, 0.8, detuning=dl, wavelengths={1: 2.0, 2: 1.5}), n)
           for n in (1, 2, 3) for dl in (0.0, 0.5)]
FOUR_SPECS = [(four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, detuning=dl, wavelengths=LAMS), n)
              for n in (1, 2, 3) for dl in (0.0, 0.5)]


@pytest.mark.parametrize("scheme,n", D_SPECS + FOUR_SPECS)
def test_method_agreement(scheme, n):
    spec = EnsembleSpec(scheme, n, Geometry.equilateral(0.6, n) if n > 1 else None)
    res = RateProblem(spec).rates(("projection", "simplified", "closed_exact"))
    tol = 1e-6 if (n == 3 and scheme.d == 4) else 1e-8
    vals = [np.array(m.up + m.down) for m in res.values()]
    for a in vals[1:]:
        assert np.max(np.abs(a - vals[0]) / np.abs(vals[0])) < tol


@pytest.mark.parametrize("scheme", [D_SPECS[0][0], FOUR_SPECS[1][0]])
def test_independent_atom_scaling(scheme):
    one = RateProblem(EnsembleSpec(scheme, 1)).projection()
    three = RateProblem(EnsembleSpec(scheme, 3), couplings=CouplingSet.empty()).projection()
    for k in range(3):
        assert three.up[k] == pytest.approx((3 - k) * one.up[0], rel=1e-10)
        assert three.down[k] == pytest.approx((k + 1) * one.down[0], rel=1e-10)


# rho_ss,3 -------------------------------------------------------------------------------

@pytest.mark.parametrize("rabi", [0.2, 0.6, 2.0])
def test_rho_ss3_uncoupled_factorizes(rabi):
    pops = rho_ss3_populations(1.0, rabi, 0j)
    x = (1 + rabi ** 2) / (1 + 2 * rabi ** 2)
    assert float(pops["g"]) == pytest.approx(x ** 3, rel=1e-14)
    assert abs(sum(float(pops[k]) for k in POPULATION_KEYS) - 1) < 1e-12


@pytest.mark.parametrize("r", [0.5, 0.8, 1.7, 6.0])
def test_rho_ss3_matches_null_space(r):
    num, c3 = numeric_rho_ss3(r)
    closed = rho_ss3_populations(1.0, 0.5 * math.sqrt(math.sqrt(5) - 1), c3)
    for k in POPULATION_KEYS:
        assert abs(float(closed[k]) - num[k]) < 1e-9


@given(c_re=st.floats(-0.5, 0.5), c_im=st.floats(-0.5, 0.5), rabi=st.floats(0.05, 5.0))
@settings(max_examples=100, deadline=None)
def test_rho_ss3_sums_to_one(c_re, c_im, rabi):
    pops = rho_ss3_populations(1.0, rabi, complex(c_re, c_im))
    assert abs(sum(float(pops[k]) for k in POPULATION_KEYS) - 1) < 1e-12


@given(k=st.integers(1, 3), c_re=st.floats(-0.3, 0.3), c_im=st.floats(-0.3, 0.3),
       rabi=st.floats(0.05, 5.0), det=st.floats(-2, 2))
@settings(max_examples=100, deadline=None)
def test_mean_ground_count_bounded(k, c_re, c_im, rabi, det):
    n1 = float(mean_ground_count(k, 1.0, rabi, det, complex(c_re, c_im)))
    assert 0 <= n1 <= k


# rate matrix -----------------------------------------------------------------------------

def test_rate_table_round_trip():
    p = RateMatrix((3e-3, 2e-3, 1e-3), (1e-3, 2.5e-3, 4e-3), "projection")
    q = RateMatrix((3e-3, 2e-3, 1e-3), (1e-3, 2.5e-3, 4.5e-3), "closed_exact")
    back = read_table(p.to_table() + q.to_table())
    assert back["projection"].up == p.up and back["projection"].down == p.down
    assert back["closed_exact"].down == q.down


def test_rate_matrix_rejects_negative():
    with pytest.raises(ValueError):
        RateMatrix((1.0,), (-1.0,))


@given(st.lists(st.floats(1e-3, 1e3), min_size=6, max_size=6))
def test_stationary_detailed_balance(rates):
    p = RateMatrix(rates[:3], rates[3:])
    pi = p.stationary()
    assert pi.sum() == pytest.approx(1.0)
    for k in range(3):
        assert pi[k] * p.up[k] == pytest.approx(pi[k + 1] * p.down[k], rel=1e-9)
