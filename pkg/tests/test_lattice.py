import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from solitonlab import lattice as lt
from solitonlab.verify import dnls_initial, toda_initial

LAMS = (1.0, -1.0, 2.0, -2.0, 1j)


def test_toda_two_site_force():
    dq, dp = lt.toda_rhs(lt.TodaState([0.0, 0.0], [0.0, 0.0]))
    assert np.array_equal(dq, [0.0, 0.0])
    assert np.array_equal(dp, [1.0, -1.0])


def test_toda_periodic_rest_state_is_balanced():
    _, dp = lt.toda_rhs(lt.TodaState(np.zeros(5), np.zeros(5), "periodic"))
    assert np.all(dp == 0)


@pytest.mark.parametrize("bad", [dict(q=[0.0], p=[0.0]), dict(q=[0, 1], p=[0]), dict(q=[0, 1], p=[0, 1], boundary="twisted")])
def test_toda_state_validation(bad):
    with pytest.raises(ValueError):
        lt.TodaState(**bad)


@settings(max_examples=30, deadline=None)
@given(arrays(float, 6, elements=st.floats(-1, 1)), arrays(float, 6, elements=st.floats(-1, 1)))
def test_trace_charges_match_eigenvalues(q, p):
    s = lt.TodaState(q, p)
    ev = np.linalg.eigvalsh(lt.toda_lax_matrix(s))
    expected = [np.sum(ev**n) for n in range(1, 5)]
    assert np.allclose(lt.toda_trace_charges(s, 4), expected, rtol=1e-10, atol=1e-10)


def test_first_trace_is_momentum():
    s = toda_initial(seed=3)
    assert lt.toda_trace_charges(s, 1)[0] == pytest.approx(np.sum(s.p))


def test_monodromy_charges_at_rest():
    N = 6
    t1, t2, I1, I2 = lt.toda_monodromy_charges(lt.TodaState(np.zeros(N), np.zeros(N), "periodic"))
    assert t1 == 0 and I1 == 0
    # with this sign convention each bond contributes -1
    assert t2 == -N
    assert I2 == -N


def test_I2_is_minus_periodic_energy():
    s = toda_initial(seed=1, boundary="periodic")
    assert lt.toda_monodromy_charges(s)[3] == pytest.approx(-lt.toda_energy(s), rel=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_transfer_polynomial_matches_product(seed):
    s = toda_initial(N=5, seed=seed, boundary="periodic")
    c = lt.toda_transfer_coefficients(s)
    assert len(c) == s.N + 1 and c[0] == 1
    t1, t2, _, _ = lt.toda_monodromy_charges(s)
    assert c[1] == pytest.approx(t1, abs=1e-12)
    assert c[2] == pytest.approx(t2, rel=1e-12)
    for lam in (0.3, -1.7, 2.5):
        assert np.polyval(c, lam) == pytest.approx(lt.transfer_trace(s, lam).real, rel=1e-10)


def test_dnls_zero_state_charges():
    N = 7
    s = lt.DnlsState(np.zeros(N), np.zeros(N))
    I1, I2, I3 = lt.dnls_charges(s)
    assert I1 == N
    assert I2 == pytest.approx(-N / 2)
    assert I3 == pytest.approx(N / 3)
    dx, dX = lt.dnls_rhs(s)
    assert np.all(dx == 0) and np.all(dX == 0)


def test_dnls_validation():
    with pytest.raises(ValueError):
        lt.DnlsState(np.zeros(2), np.zeros(2))
    with pytest.raises(ValueError):
        lt.dnls_rhs(dnls_initial(), "other")


def test_toda_transfer_trace_requires_toda_state():
    with pytest.raises(TypeError):
        lt.transfer_trace(dnls_initial(), 1.0, model="toda")


def _final(s, dt, T):
    return lt.evolve(s, dt, int(round(T / dt)), sample_every=10**9).states[-1].pack()


def test_rk4_is_fourth_order():
    s = toda_initial(seed=0)
    ref = _final(s, 1e-3, 1.0)
    e1 = np.max(np.abs(_final(s, 0.1, 1.0) - ref))
    e2 = np.max(np.abs(_final(s, 0.05, 1.0) - ref))
    assert 12 < e1 / e2 < 20


def test_dnls_rk4_order():
    # larger amplitude and step so the error is far above roundoff
    s = dnls_initial(amplitude=0.1, seed=2)
    ref = _final(s, 1e-3, 1.0)
    e1 = np.abs(_final(s, 0.05, 1.0) - ref).max()
    e2 = np.abs(_final(s, 0.025, 1.0) - ref).max()
    assert 12 < e1 / e2 < 20


def test_evolve_rejects_bad_step():
    with pytest.raises(ValueError):
        lt.evolve(toda_initial(), 0.0, 10)
    with pytest.raises(ValueError):
        lt.evolve(toda_initial(), 0.1, 10, integrator="euler")


def test_open_chain_conserves_energy():
    tr = lt.evolve(toda_initial(seed=4), 1e-3, 2000, sample_every=200)
    E = np.array([lt.toda_energy(s) for s in tr.states])
    assert np.max(np.abs(E - E[0])) / abs(E[0]) <= 1e-9


@pytest.mark.parametrize("seed", [0, 5])
def test_dnls_charges_conserved(seed):
    tr = lt.evolve(dnls_initial(amplitude=0.1, seed=seed), 1e-3, 1000, sample_every=100)
    Q = np.array([lt.dnls_charges(s) for s in tr.states])
    assert np.max(np.abs(Q - Q[0])) <= 1e-9


def test_periodic_toda_zero_curvature():
    tr = lt.evolve(toda_initial(seed=0, boundary="periodic"), 1e-3, 8)
    assert lt.semidiscrete_zc_residual("toda", tr, LAMS) <= 1e-9


def test_dnls_zero_curvature_lax_vs_flipped():
    s = dnls_initial(amplitude=0.1, seed=1)
    lax = lt.semidiscrete_zc_residual("dnls", lt.evolve(s, 1e-3, 8), LAMS)
    flipped = lt.semidiscrete_zc_residual("dnls", lt.evolve(s, 1e-3, 8, variant="flipped"), LAMS)
    assert lax <= 1e-9
    assert flipped > 1e-3


def test_zero_curvature_needs_five_samples():
    with pytest.raises(ValueError):
        lt.semidiscrete_zc_residual("toda", lt.evolve(toda_initial(boundary="periodic"), 1e-3, 2), LAMS)


def test_dnls_flipped_variant_breaks_transfer_trace():
    s = dnls_initial(amplitude=0.1, seed=1)
    drift = {}
    for v in ("lax", "flipped"):
        tr = lt.evolve(s, 1e-3, 500, sample_every=500, variant=v)
        drift[v] = abs(lt.transfer_trace(tr.states[-1], 0.7) - lt.transfer_trace(s, 0.7))
    assert drift["lax"] <= 1e-10
    assert drift["flipped"] > 1e-4


# closed-form solitons ------------------------------------------------------------
GAMMA = 1 - np.exp(-2.0)


@pytest.mark.parametrize("sigma", [2, -2])
@pytest.mark.parametrize("t", [-1.0, 0.0, 0.4, 3.0])
def test_toda_soliton_solves_equations(sigma, t):
    assert lt.toda_soliton_eom_residual(0.3, 1.0, sigma, GAMMA, range(-15, 16), t) <= 1e-8


def test_toda_soliton_momentum_is_time_derivative():
    j, t, h = np.arange(-10, 11), 0.4, 1e-3
    q = lambda tt: lt.toda_soliton_q(0.3, 0.8, 2, GAMMA, j, tt)
    dq = (q(t - 2 * h) - 8 * q(t - h) + 8 * q(t + h) - q(t + 2 * h)) / (12 * h)
    assert np.max(np.abs(dq - lt.toda_soliton_p(0.3, 0.8, 2, GAMMA, j, t))) <= 1e-9


def test_toda_soliton_evolves_like_rk4():
    # an open window of the infinite chain sees the far tails only weakly
    sites = range(-30, 31)
    s0 = lt.toda_soliton(0.3, 1.0, 2, GAMMA, sites, 0.0)
    s1 = lt.evolve(s0, 1e-3, 500, sample_every=500).states[-1]
    exact = lt.toda_soliton(0.3, 1.0, 2, GAMMA, sites, 0.5)
    assert np.max(np.abs(s1.q[10:-10] - exact.q[10:-10])) <= 1e-8


def test_toda_soliton_zero_curvature():
    traj = lt.toda_soliton_trajectory(0.3, 1.0, 2, GAMMA, range(-40, 41), 0.0, 1e-3, 9)
    assert lt.semidiscrete_zc_residual("toda", traj, LAMS, sites=slice(5, -5)) <= 1e-6


@pytest.mark.parametrize("bad", [dict(kappa=-1.0), dict(gamma=0.0), dict(sigma=1)])
def test_toda_soliton_parameter_checks(bad):
    args = dict(q_plus=0.0, kappa=1.0, sigma=2, gamma=GAMMA, j_range=range(3), t=0.0) | bad
    with pytest.raises(ValueError):
        lt.toda_soliton(**args)


@pytest.mark.parametrize("xi, eta", [(0.3, 0.7), (-1.0, 0.2), (2.0, 1.5)])
def test_stationary_bt(xi, eta):
    assert lt.toda_bt_stationary_residual(xi, eta, range(-10, 11)) <= 1e-12
