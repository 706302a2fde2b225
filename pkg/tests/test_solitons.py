import numpy as np
import pytest

from solitonlab import laxpairs as lp
from solitonlab import pde
from solitonlab import solitons as so
from solitonlab.errors import (
    BoundaryViolation,
    BranchViolation,
    DegenerateParameters,
    PoleOnGrid,
    SingularSurface,
)
from solitonlab.fields import Grid1D

VACUUM = lambda x, t: 0 * np.asarray(x, dtype=float)
ZERO = lambda z: 0 * z


def test_light_cone():
    z, zb = so.light_cone(3.0, 1.0)
    assert (z, zb) == (2.0, 1.0)


def test_pole_mask_excludes_neighbourhood():
    x = np.linspace(-1, 1, 201)
    m = so.pole_mask(x, [x - 0.2], 0.1)
    assert not m[np.abs(x - 0.2) <= 0.1].any()
    assert m[np.abs(x - 0.2) > 0.1 + 1e-9].all()
    assert so.pole_mask(x, [np.ones_like(x)], 0.1).all()


# KdV ------------------------------------------------------------------------------
@pytest.mark.parametrize("c", [1.0, 4.0])
def test_kdv_soliton_depth(c):
    g = Grid1D.decaying(-30.0, 30.0, 601)
    u = so.kdv_one_soliton(so.KdvSolitonSpec(c), 0.0, g)
    assert u.values.min() == pytest.approx(-c / 2)


def test_kdv_soliton_needs_decay():
    with pytest.raises(BoundaryViolation):
        so.kdv_one_soliton(so.KdvSolitonSpec(4.0), 0.0, Grid1D.decaying(-2.0, 2.0, 41))


@pytest.mark.parametrize("bad", [dict(c=0.0), dict(c=1.0, sign=2)])
def test_kdv_spec_validation(bad):
    with pytest.raises(ValueError):
        so.KdvSolitonSpec(**bad)


@pytest.mark.parametrize("A", [-1.0, -3.0, 1.0, 0.5])
def test_kdv_bt_relations(A):
    x = np.linspace(3.0, 10.0, 71)
    assert so.kdv_bt_relations_residual(1.2, x, 0.1, A) <= 1e-6


def test_kdv_bt_tanh_branch_is_the_soliton():
    # u = w^2/2 - lam^2/2 on the regular branch is the one-soliton with c = lam^2
    lam, x = 1.5, np.linspace(-10, 10, 201)
    u = 0.5 * so.kdv_bt_w(lam, x, 0.2, -1.0) ** 2 - 0.5 * lam**2
    assert np.allclose(u, so.kdv_soliton_value(so.KdvSolitonSpec(lam**2), x, 0.2), atol=1e-13)


def test_kdv_bt_constant_branch():
    assert np.all(so.kdv_bt_w(2.0, np.linspace(0, 1, 5), 0.0, 0.0) == 2.0)


def test_kdv_bt_ode_run():
    g = Grid1D.decaying(-10.0, 10.0, 1001)
    r = so.kdv_bt_ode(1.0, g, 0.0, A=-1.0)
    assert r.metadata["ode_error"] <= 1e-9
    assert r.metadata["bt_residual"] <= 1e-6
    assert r.residual <= 1e-6
    assert r.metadata["pole"] is None


def test_kdv_bt_pole_on_grid():
    with pytest.raises(PoleOnGrid):
        so.kdv_bt_ode(1.0, Grid1D.decaying(-5.0, 5.0, 101), 0.0, A=1.0)
    with pytest.raises(ValueError):
        so.kdv_bt_ode(-1.0, Grid1D.decaying(-5.0, 5.0, 101))


def test_kdv_singular_branch_off_the_pole():
    r = so.kdv_bt_ode(1.0, Grid1D.decaying(2.0, 12.0, 501), 0.0, A=1.0)
    assert r.metadata["pole"] == 0.0
    assert r.residual <= 1e-5


@pytest.mark.parametrize("t", [-0.5, 0.0, 0.5])
def test_kdv_bianchi_two_soliton(t):
    g = Grid1D.decaying(-20.0, 20.0, 2001)
    _, _, res = so.kdv_two_soliton_bianchi((1.0, 2.0), (0.0, 0.0), g, t)
    assert res <= 1e-5


def test_kdv_bianchi_order_independent():
    g = Grid1D.decaying(-20.0, 20.0, 401)
    a, _, _ = so.kdv_two_soliton_bianchi((1.0, 2.0), (0.5, -1.0), g, 0.1)
    b, _, _ = so.kdv_two_soliton_bianchi((2.0, 1.0), (-1.0, 0.5), g, 0.1)
    assert np.array_equal(a.values, b.values)


def test_kdv_bianchi_degenerate():
    with pytest.raises(DegenerateParameters):
        so.kdv_two_soliton_bianchi((1.0, 1.0), (0.0, 0.0), Grid1D.decaying(-5, 5, 11), 0.0)


def test_two_soliton_mass_matches_glm():
    # int u = -2 (lam1 + lam2) = -4 (kappa1 + kappa2) with kappa = lam/2
    g = Grid1D.decaying(-30.0, 30.0, 3001)
    u, _, _ = so.kdv_two_soliton_bianchi((1.0, 2.0), (0.0, 0.0), g, 0.0)
    v = so.kdv_n_soliton((0.5, 1.0), (1.0, 1.0), 0.0, g)
    assert np.trapezoid(u.values, g.x) == pytest.approx(-6.0, abs=1e-9)
    assert np.trapezoid(v.values, g.x) == pytest.approx(-6.0, abs=1e-9)


def test_n_soliton_single_is_sech2():
    g = Grid1D.decaying(-15.0, 15.0, 301)
    u = so.kdv_n_soliton((1.0,), (2.0,), 0.0, g)
    # b = 2 kappa centres the soliton at the origin
    assert np.allclose(u.values, so.kdv_soliton_value(so.KdvSolitonSpec(4.0), g.x, 0.0), atol=1e-12)


# sinh-Gordon ------------------------------------------------------------------------
def test_shg_one_soliton_residual():
    g = Grid1D.decaying(0.0, 30.0, 1501)
    phi = lambda x, t: 2 * so.shg_w_one(2.0, 0.5, x, t)
    assert pde.residual("sinh_gordon", phi, 0.0, g, scheme="probe") <= 1e-6


@pytest.mark.parametrize("beta", [1.0, 0.5])
def test_shg_one_soliton_field(beta):
    g = Grid1D.decaying(0.0, 20.0, 401)
    f = so.shg_one_soliton(so.ShgSolitonSpec(2.0, 0.5, beta), g)
    phi = lambda x, t: so.shg_one_soliton(so.ShgSolitonSpec(2.0, 0.5, beta), Grid1D(float(x[0]), float(x[1] - x[0]), len(x), "decaying"), t).values
    assert np.all(f.values > 0)
    assert pde.residual("sinh_gordon", phi, 0.0, g, pde.PdeParams(beta=beta), scheme="probe") <= 1e-5


def test_shg_branch_violation():
    with pytest.raises(BranchViolation):
        so.shg_one_soliton(so.ShgSolitonSpec(2.0, 0.5), Grid1D.decaying(-5.0, 5.0, 101))
    with pytest.raises(ValueError):
        so.ShgSolitonSpec(0.0, 1.0)


@pytest.mark.parametrize("alpha, A", [(2.0, 0.5), (3.0, 0.2)])
def test_shg_vacuum_bt(alpha, A):
    x = np.linspace(0.5, 20.0, 101)
    w = lambda xx, t: so.shg_w_one(alpha, A, xx, t)
    assert so.shg_bt_residual(w, VACUUM, alpha, x, 0.0) <= 1e-8


def test_shg_bt_wrong_parameter():
    x = np.linspace(0.5, 20.0, 101)
    w = lambda xx, t: so.shg_w_one(2.0, 0.5, xx, t)
    assert so.shg_bt_residual(w, VACUUM, 1.5, x, 0.0) > 1e-2


def test_shg_darboux_matrix():
    p = lp.builtin_lax("sinh_gordon")
    w = lambda xx, t: so.shg_w_one(2.0, 0.5, xx, t)
    G = so.shg_darboux_G(2.0, w, VACUUM)
    x = np.linspace(0.5, 5.0, 31)
    assert lp.darboux_residual(p, p, G, {"w": w}, {"w": VACUUM}, (0.3, -0.5, 1.0), x, 0.0) <= 1e-9


def test_shg_bianchi_symmetric():
    g = Grid1D.decaying(-15.0, 15.0, 3001)
    phi, _, res = so.shg_two_soliton_bianchi(1.5, 0.5, 0.3, 0.2, g)
    swap, _, _ = so.shg_two_soliton_bianchi(0.5, 1.5, 0.2, 0.3, g)
    assert res <= 1e-5
    assert np.array_equal(phi.values, swap.values)


def test_shg_bianchi_opposite_parameters_vanish():
    w, _ = so.shg_bianchi_combine(1.0, -1.0, np.array([0.3, 1.0]), np.array([-0.2, 0.5]))
    assert np.all(w == 0)


def test_shg_bianchi_degenerate():
    with pytest.raises(DegenerateParameters):
        so.shg_two_soliton_bianchi(1.0, 1.0, 0.3, 0.2, Grid1D.decaying(-1, 1, 11))


# NLS-type pair --------------------------------------------------------------------
@pytest.fixture(scope="module")
def nls_run():
    return so.nls_bt_soliton(1.0, 0.0, Grid1D.decaying(1.0, 8.0, 141))


def test_nls_bt_time_dependence(nls_run):
    assert nls_run.metadata["omega"] == pytest.approx(-1.0, abs=1e-6)
    assert nls_run.metadata["f1"] == pytest.approx(0.0, abs=1e-12)
    assert nls_run.residual <= 1e-6


def test_nls_bt_first_order_relations(nls_run):
    assert nls_run.metadata["ux_minus_uA"] <= 1e-8
    assert nls_run.metadata["A_riccati"] <= 1e-8


def test_nls_darboux_matrix(nls_run):
    samp = nls_run.metadata["sampler"]
    new = {"u": lambda x, t: samp(x, t)[0], "uh": lambda x, t: samp(x, t)[1]}
    zero = {"u": VACUUM, "uh": VACUUM}
    G = so.nls_darboux_G(1.0, samp, lambda t: 0.0)
    p = lp.builtin_lax("nls")
    assert lp.darboux_residual(p, p, G, zero, new, lp.DEFAULT_LAMBDAS, np.linspace(1.0, 8.0, 15), 0.0) <= 1e-8


def test_nls_bt_rejects_pole_and_bad_k():
    with pytest.raises(PoleOnGrid):
        so.nls_bt_soliton(1.0, 0.0, Grid1D.decaying(-2.0, 2.0, 41))
    with pytest.raises(ValueError):
        so.nls_bt_soliton(-1.0, 0.0, Grid1D.decaying(1.0, 2.0, 41))


# Liouville -----------------------------------------------------------------------
def test_liouville_vacuum_free_field():
    # f = fbar = 0 gives F = z, 1/Fbar = -zb and tphi = -ln(2c x)
    g = Grid1D.decaying(1.0, 10.0, 91)
    sol = so.LiouvilleSolution(ZERO, ZERO, 0.7)
    assert np.allclose(sol(g.x, 0.0), -np.log(1.4 * g.x), atol=1e-13)


def test_liouville_from_free_field():
    g = Grid1D.decaying(1.0, 10.0, 301)
    r = so.liouville_from_free(lambda z: 0.3 * np.sin(z), lambda z: 0.2 * np.cos(z), 0.7, g, 0.2)
    assert r.residual <= 1e-5
    assert r.metadata["bt_residual"] <= 1e-6
    assert r.metadata["free_residual"] <= 1e-6


def test_liouville_bt_wrong_coupling():
    g = Grid1D.decaying(1.0, 10.0, 91)
    sol = so.LiouvilleSolution(ZERO, ZERO, 0.7)
    assert so.liouville_bt_residual(sol, sol.free, 0.5, g.x, 0.0) > 1e-2


def test_liouville_singular_surface():
    with pytest.raises(SingularSurface):
        so.LiouvilleSolution(ZERO, ZERO, 0.7)(np.linspace(-2.0, 2.0, 9), 0.0)


def test_antiderivative_gauss():
    z = np.linspace(-1.0, 2.0, 7)
    assert np.allclose(so.antiderivative(np.exp, z), np.exp(z) - 1.0, atol=1e-14)
