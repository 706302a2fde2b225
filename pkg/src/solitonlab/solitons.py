"""Closed-form solitons and Backlund-transform constructions, each with its own residual check.

Light-cone coordinates are z = (x + t)/2 and zb = (x - t)/2, so that
d/dz = d/dx + d/dt and d/dzb = d/dx - d/dt.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    BranchViolation,
    DegenerateParameters,
    DenominatorZero,
    NoResidualMinimum,
    PoleOnGrid,
    SingularSurface,
)
from .fields import Grid1D, ScalarField, check_decay, probe_derivative, time_derivative
from .pde import PdeParams, residual, residual_field


@dataclass(frozen=True)
class KdvSolitonSpec:
    c: float
    x0: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("speed c must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class ShgSolitonSpec:
    alpha: float
    A: float
    beta: float = 1.0

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("alpha and beta must be nonzero")


@dataclass
class BtRun:
    model: str
    parameter: float
    seed: str
    output: dict
    residual: float
    metadata: dict = field(default_factory=dict)


def light_cone(x, t):
    return 0.5 * (x + t), 0.5 * (x - t)


def pole_mask(x: np.ndarray, indicators: Sequence[np.ndarray], radius: float, tol: float = 1e-6) -> np.ndarray:
    """True where x is farther than ``radius`` from every zero (or sign change) of the indicators."""
    x = np.asarray(x)
    bad = np.zeros(x.shape, dtype=bool)
    for q in indicators:
        q = np.real_if_close(np.asarray(q))
        near = np.abs(q) < tol * max(1.0, float(np.max(np.abs(q))))
        flip = np.zeros_like(near)
        s = np.sign(q)
        cross = s[1:] * s[:-1] < 0
        flip[1:] |= cross
        flip[:-1] |= cross
        bad |= near | flip
    if not bad.any():
        return np.ones(x.shape, dtype=bool)
    centres = x[bad]
    dist = np.min(np.abs(x[:, None] - centres[None, :]), axis=1)
    return dist > radius


# KdV ------------------------------------------------------------------------
def kdv_soliton_value(spec: KdvSolitonSpec, x, t):
    arg = 0.5 * np.sqrt(spec.c) * (spec.sign * (x - spec.c * t) - spec.x0)
    return -0.5 * spec.c / np.cosh(arg) ** 2


def kdv_one_soliton(spec: KdvSolitonSpec, t: float, grid: Grid1D) -> ScalarField:
    """u = -(c/2) sech^2((sqrt(c)/2)(+-(x - c t) - x0)); the profile must have decayed at both edges."""
    vals = kdv_soliton_value(spec, grid.x, t)
    check_decay(vals)
    return ScalarField(grid, vals)


def kdv_bt_w(lam: float, x, t, A: float = 1.0, shift: float = 0.0):
    """w = lam (1 + A e^theta)/(1 - A e^theta), theta = lam (x - shift - lam^2 t).

    A = +1 is the singular (coth) branch, A = -1 the regular (tanh) branch.
    """
    theta = lam * (np.asarray(x) - shift - lam**2 * t)
    if A < 0:
        # -tanh form, stable for large |theta|
        half = 0.5 * (theta + np.log(-A))
        return -lam * np.tanh(half)
    if A == 0:
        return np.full(np.shape(theta), lam, dtype=float)
    half = 0.5 * (theta + np.log(A))
    return -lam / np.tanh(half)


def kdv_bt_pole(lam: float, t: float, A: float = 1.0, shift: float = 0.0) -> float | None:
    if A <= 0:
        return None
    return shift + lam**2 * t - np.log(A) / lam


def kdv_bt_relations_residual(lam: float, x, t, A: float = 1.0, shift: float = 0.0, h: float = 2e-3) -> float:
    """Vacuum-seed KdV BT: w_x - w^2/2 + lam^2/2 and w_t - 3 w_x^2 + w_xxx."""
    f = lambda xx, tt: kdv_bt_w(lam, xx, tt, A, shift)
    wx = probe_derivative(lambda xx: f(xx, t), x, 1, h)
    wxxx = probe_derivative(lambda xx: f(xx, t), x, 3, h)
    wt = time_derivative(lambda tt: f(x, tt), t, 1, 1e-3)
    w = f(x, t)
    r1 = np.abs(wx - 0.5 * w**2 + 0.5 * lam**2)
    r2 = np.abs(wt - 3 * wx**2 + wxxx)
    return float(max(np.max(r1), np.max(r2)))


def kdv_bt_ode(
    lam: float,
    grid: Grid1D,
    t: float = 0.0,
    A: float = 1.0,
    shift: float = 0.0,
    x_start: float | None = None,
) -> BtRun:
    """Closed-form BT output (w, u = w_x) plus a numerical integration of w_x = w^2/2 - lam^2/2.

    The ODE is integrated outward from ``x_start`` (default: the grid midpoint)
    starting from the closed-form value there.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    x = grid.x
    pole = kdv_bt_pole(lam, t, A, shift)
    if pole is not None and x[0] - grid.dx <= pole <= x[-1] + grid.dx:
        raise PoleOnGrid(f"w has a pole at x={pole:.6g} inside the grid window")
    w = kdv_bt_w(lam, x, t, A, shift)
    u = 0.5 * w**2 - 0.5 * lam**2
    xs = float(x[len(x) // 2] if x_start is None else x_start)
    w0 = float(kdv_bt_w(lam, np.array([xs]), t, A, shift)[0])
    rhs = lambda _x, y: 0.5 * y**2 - 0.5 * lam**2
    num = np.empty_like(w)
    right, left = x >= xs, x < xs
    for sel, end in ((right, x[-1]), (left, x[0])):
        if not sel.any() or end == xs:
            num[sel] = w0
            continue
        pts = x[sel] if end > xs else x[sel][::-1]
        sol = solve_ivp(rhs, (xs, end), [w0], t_eval=pts, method="DOP853", rtol=1e-13, atol=1e-13)
        vals = sol.y[0]
        num[sel] = vals if end > xs else vals[::-1]
    ode_err = float(np.max(np.abs(num - w)))
    sampler = lambda xx, tt: 0.5 * kdv_bt_w(lam, xx, tt, A, shift) ** 2 - 0.5 * lam**2
    res = residual("kdv", sampler, t, grid, scheme="probe")
    bt = kdv_bt_relations_residual(lam, x, t, A, shift)
    return BtRun(
        "kdv",
        lam,
        "zero",
        {"w": ScalarField(grid, w), "u": ScalarField(grid, u), "w_ode": ScalarField(grid, num)},
        res,
        {"A": A, "shift": shift, "pole": pole, "ode_error": ode_err, "bt_residual": bt, "t": t},
    )


def _two_soliton_order(lams, shifts):
    (l1, s1), (l2, s2) = sorted(zip(lams, shifts))
    return l1, s1, l2, s2


def kdv_two_soliton_parts(lams, shifts, x, t):
    """(w, u, denominator) of the superposition w = (l1^2 - l2^2)/(w1 - w2).

    The smaller parameter rides the regular branch and the larger the singular
    one, which makes w1 - w2 nonvanishing; pairs are sorted so the result does
    not depend on the order in which they are given.  The singular seed enters
    through r2 = 1/w2 = -tanh(h2)/l2, so its own pole is harmless:
    w = num r2/(w1 r2 - 1) and u = -num (r2' + r2^2 w1')/(w1 r2 - 1)^2.
    """
    if lams[0] == lams[1]:
        raise DegenerateParameters("the two BT parameters must differ")
    l1, s1, l2, s2 = _two_soliton_order(lams, shifts)
    x = np.asarray(x, dtype=float)
    w1 = kdv_bt_w(l1, x, t, -1.0, s1)
    h2 = 0.5 * l2 * (x - s2 - l2**2 * t)
    r2 = -np.tanh(h2) / l2
    r2p = -0.5 / np.cosh(h2) ** 2
    w1p = 0.5 * w1**2 - 0.5 * l1**2
    num = l1**2 - l2**2
    den = w1 * r2 - 1.0
    w = num * r2 / den
    u = -num * (r2p + r2**2 * w1p) / den**2
    return w, u, den


def kdv_two_soliton_bianchi(lams, shifts, grid: Grid1D, t: float, mask_radius: float = 0.5):
    """Two-soliton u = w_x from the Bianchi superposition; returns (u, mask, residual)."""
    lams = tuple(float(l) for l in lams)
    shifts = tuple(float(s) for s in shifts) if shifts is not None else (0.0, 0.0)
    x = grid.x
    w, u, den = kdv_two_soliton_parts(lams, shifts, x, t)
    mask = pole_mask(x, [den], mask_radius)
    sampler = lambda xx, tt: kdv_two_soliton_parts(lams, shifts, xx, tt)[1]
    res = residual("kdv", sampler, t, grid, mask=mask, scheme="probe")
    return ScalarField(grid, u), mask, res


# sinh-Gordon ----------------------------------------------------------------
def shg_g(alpha: float, A: float, x, t, tilde: bool = False):
    """A e^{-alpha z + zb/alpha} (new field over a vacuum tilde seed) or its tilde-role mirror."""
    z, zb = light_cone(np.asarray(x, dtype=float), t)
    s = 1.0 if tilde else -1.0
    return A * np.exp(s * (alpha * z - zb / alpha))


def shg_w_one(alpha: float, A: float, x, t, tilde: bool = False):
    """w = ln|(1 + g)/(1 - g)|, the real one-soliton on either side of its pole line."""
    g = shg_g(alpha, A, x, t, tilde)
    return np.log(np.abs((1 + g) / (1 - g)))


def shg_one_soliton(spec: ShgSolitonSpec, grid: Grid1D, t: float = 0.0) -> ScalarField:
    """phi = (2/beta) ln((1 + g)/(1 - g)); the log argument must stay positive on the window."""
    g = shg_g(spec.alpha, spec.A, grid.x, t)
    if np.any(np.abs(g) >= 1):
        raise BranchViolation("|A e^{-alpha z + zb/alpha}| reaches 1 on the window")
    return ScalarField(grid, 2.0 / spec.beta * np.log((1 + g) / (1 - g)))


def shg_bt_residual(w: Callable, wt: Callable, alpha: float, x, t, h: float = 1e-3) -> float:
    """Light-cone BT: d_z(w + wt) - alpha sinh(wt - w) and d_zb(w - wt) - sinh(w + wt)/alpha."""
    x = np.asarray(x, dtype=float)
    s = lambda xx, tt: w(xx, tt) + wt(xx, tt)
    d = lambda xx, tt: w(xx, tt) - wt(xx, tt)
    dz_s = probe_derivative(lambda xx: s(xx, t), x, 1, h) + time_derivative(lambda tt: s(x, tt), t, 1, h)
    dzb_d = probe_derivative(lambda xx: d(xx, t), x, 1, h) - time_derivative(lambda tt: d(x, tt), t, 1, h)
    W, Wt = w(x, t), wt(x, t)
    r1 = dz_s - alpha * np.sinh(Wt - W)
    r2 = dzb_d - np.sinh(W + Wt) / alpha
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


def shg_darboux_G(alpha: float, w: Callable, wt: Callable):
    """G(lam, x, t) = [[Z, e^{lam-Theta}/X], [e^{lam-Theta} X, 1/Z]], X = e^{-(w+wt)/2}, Z = e^{(w-wt)/2}."""
    theta = np.log(alpha)

    def G(lam, x, t):
        W, Wt = w(x, t), wt(x, t)
        X = np.exp(-0.5 * (W + Wt))
        Z = np.exp(0.5 * (W - Wt))
        e = np.exp(lam - theta)
        out = np.empty(np.shape(x) + (2, 2), dtype=complex)
        out[..., 0, 0] = Z
        out[..., 0, 1] = e / X
        out[..., 1, 0] = e * X
        out[..., 1, 1] = 1 / Z
        return out

    return G


def shg_bianchi_combine(alpha1, alpha2, w1, w2):
    """w = ln|(1 + k tanh(D/2))/(1 - k tanh(D/2))|, k = (a1 + a2)/(a1 - a2), D = w2 - w1.

    Equal to ln((a1 e^{D/2} - a2 e^{-D/2})/(a1 e^{-D/2} - a2 e^{D/2})) wherever that
    ratio is positive; written this way it is symmetric under (a1, w1) <-> (a2, w2)
    in floating point.  The alphas may be arrays (pointwise effective parameters).
    """
    alpha1, alpha2 = np.asarray(alpha1, dtype=float), np.asarray(alpha2, dtype=float)
    if np.any(alpha1 == alpha2):
        raise DegenerateParameters("the two BT parameters must differ")
    k = (alpha1 + alpha2) / (alpha1 - alpha2)
    q = k * np.tanh(0.5 * (np.asarray(w2) - np.asarray(w1)))
    den = 1 - q
    if np.any(den == 0):
        raise DenominatorZero("the superposition denominator vanishes on the grid")
    return np.log(np.abs((1 + q) / den)), den


def shg_two_soliton_parts(alpha1, alpha2, A1, A2, x, t):
    """Superposed w and the pole indicators (seed poles, log zeros and poles).

    Seeds are the vacuum BTs with the parameters in the tilde role,
    w_i = ln|(1 + g_i)/(1 - g_i)|, g_i = A_i e^{alpha_i z - zb/alpha_i}.  Beyond its
    pole line (|g_i| > 1) the real seed is the BT of the vacuum with -alpha_i, so
    the superposition uses that effective parameter there.
    """
    g1 = shg_g(alpha1, A1, x, t, tilde=True)
    g2 = shg_g(alpha2, A2, x, t, tilde=True)
    w1 = np.log(np.abs((1 + g1) / (1 - g1)))
    w2 = np.log(np.abs((1 + g2) / (1 - g2)))
    e1 = alpha1 * np.where(np.abs(g1) < 1, 1.0, -1.0)
    e2 = alpha2 * np.where(np.abs(g2) < 1, 1.0, -1.0)
    w, den = shg_bianchi_combine(e1, e2, w1, w2)
    return w, [1 - g1, 1 + g1, 1 - g2, 1 + g2, den, 2 - den]


def shg_two_soliton_bianchi(alpha1, alpha2, A1, A2, grid: Grid1D, t: float = 0.0, beta: float = 1.0, mask_radius: float = 0.5):
    """Bianchi two-soliton phi = 2 w/beta over the vacuum; returns (phi, mask, residual)."""
    if alpha1 == alpha2:
        raise DegenerateParameters("the two BT parameters must differ")
    x = grid.x
    w, ind = shg_two_soliton_parts(alpha1, alpha2, A1, A2, x, t)
    mask = pole_mask(x, ind, mask_radius)
    sampler = lambda xx, tt: 2.0 / beta * shg_two_soliton_parts(alpha1, alpha2, A1, A2, xx, tt)[0]
    res = residual("sinh_gordon", sampler, t, grid, PdeParams(beta=beta), mask=mask, scheme="probe")
    return ScalarField(grid, 2.0 / beta * w), mask, res


# NLS-type pair --------------------------------------------------------------
def nls_bt_A(k: float, x, f):
    """A = k (1 + e^{2kx + f})/(1 - e^{2kx + f}) = -k coth(kx + f/2)."""
    return -k / np.tanh(k * np.asarray(x) + 0.5 * f)


def _nls_fields(k, C0, omega, f0, f1, x, t):
    y = k * np.asarray(x) + 0.5 * (f0 + f1 * t)
    s = 1.0 / np.sinh(y)
    return C0 * np.exp(omega * t) * s, (k * k / C0) * np.exp(-omega * t) * s


def nls_bt_soliton(
    k: float,
    f0: float,
    grid: Grid1D,
    t: float = 0.0,
    C0: float = 1.0,
    f1_scan: Sequence[float] | None = None,
) -> BtRun:
    """Vacuum-seed Darboux-BT solution of the NLS-type pair.

    From d_x u = u A with A = -k coth(kx + f/2) and u uh = A^2 - k^2 the profile is
    u = C(t) csch(kx + f/2), uh = k^2/C(t) csch(kx + f/2).  The time dependence,
    C(t) = C0 e^{omega t} and f(t) = f0 + f1 t, is fixed by minimizing the PDE
    residual: omega by least squares for each f1 on the scan, then the best f1.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    x = grid.x
    for tt in (t,):
        pole = -(f0) / (2 * k)
        if x[0] - grid.dx <= pole <= x[-1] + grid.dx:
            raise PoleOnGrid(f"u has a pole at x={pole:.6g} inside the grid window")
    scan = np.linspace(-1.0, 1.0, 41) if f1_scan is None else np.asarray(f1_scan, dtype=float)
    best = None
    for f1 in scan:
        samp0 = lambda xx, tt, f1=f1: _nls_fields(k, C0, 0.0, f0, f1, xx, tt)
        # the residual is affine in omega: R_u = R_u0 + omega u, R_uh = R_uh0 - omega uh
        u0, uh0 = samp0(x, t)
        r = _nls_pair_residual_parts(samp0, t, x)
        a = np.concatenate([u0, -uh0])
        bvec = np.concatenate([r[0], r[1]])
        omega = -float(np.dot(a, bvec) / np.dot(a, a))
        samp = lambda xx, tt, f1=f1, om=omega: _nls_fields(k, C0, om, f0, f1, xx, tt)
        res = residual("nls_pair", samp, t, grid, scheme="probe")
        if best is None or res < best[0]:
            best = (res, f1, omega, samp)
    res, f1, omega, samp = best
    if len(scan) > 2 and (f1 == scan[0] or f1 == scan[-1]):
        raise NoResidualMinimum(f"residual minimum sits at the scan edge f1={f1}")
    u, uh = samp(x, t)
    A = nls_bt_A(k, x, f0 + f1 * t)
    ux = probe_derivative(lambda xx: samp(xx, t)[0], x, 1)
    return BtRun(
        "nls",
        k,
        "zero",
        {"u": ScalarField(grid, u), "uh": ScalarField(grid, uh), "A": ScalarField(grid, A)},
        res,
        {
            "amplitude": C0,
            "omega": omega,
            "f0": f0,
            "f1": f1,
            "ux_minus_uA": float(np.max(np.abs(ux - u * A))),
            "A_riccati": float(np.max(np.abs(probe_derivative(lambda xx: nls_bt_A(k, xx, f0 + f1 * t), x, 1) + k * k - A * A))),
            "t": t,
            "sampler": samp,
        },
    )


def _nls_pair_residual_parts(samp, t, x):
    """Signed residuals (u_t + u_xx - 2 uh u^2, uh_t - uh_xx + 2 u uh^2)."""
    u, uh = samp(x, t)
    uxx = probe_derivative(lambda xx: samp(xx, t)[0], x, 2)
    uhxx = probe_derivative(lambda xx: samp(xx, t)[1], x, 2)
    ut = time_derivative(lambda tt: samp(x, tt)[0], t, 1)
    uht = time_derivative(lambda tt: samp(x, tt)[1], t, 1)
    return ut + uxx - 2 * uh * u**2, uht - uhxx + 2 * u * uh**2


def nls_darboux_G(k: float, samp: Callable, f: Callable[[float], float]):
    """G = lam I + [[A, -uh], [u, -A]] for the vacuum seed."""

    def G(lam, x, t):
        u, uh = samp(x, t)
        A = nls_bt_A(k, x, f(t))
        out = np.zeros(np.shape(x) + (2, 2), dtype=complex)
        out[..., 0, 0] = lam + A
        out[..., 0, 1] = -uh
        out[..., 1, 0] = u
        out[..., 1, 1] = lam - A
        return out

    return G


# Liouville ------------------------------------------------------------------
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def antiderivative(fn: Callable, z, z0: float = 0.0) -> np.ndarray:
    """int_{z0}^{z} fn by 64-point Gauss-Legendre per point (smooth integrands)."""
    z = np.asarray(z, dtype=float)
    half = 0.5 * (z - z0)
    nodes = z0 + half[..., None] * (1 + _GL_NODES)
    return half * np.sum(_GL_WEIGHTS * fn(nodes), axis=-1)


@dataclass(frozen=True)
class LiouvilleSolution:
    f: Callable
    fbar: Callable
    c: float
    z0: float = 0.0
    zb0: float = 0.0

    def F(self, z):
        return antiderivative(lambda s: np.exp(2 * self.f(s)), z, self.z0)

    def Fbar(self, zb):
        """Fbar with 1/Fbar = -int e^{-2 fbar}."""
        return -1.0 / antiderivative(lambda s: np.exp(-2 * self.fbar(s)), zb, self.zb0)

    def free(self, x, t):
        z, zb = light_cone(np.asarray(x, dtype=float), t)
        return self.f(z) + self.fbar(zb)

    def surface(self, x, t):
        """1 - F Fbar; the solution needs it positive."""
        z, zb = light_cone(np.asarray(x, dtype=float), t)
        return 1.0 - self.F(z) * self.Fbar(zb)

    def __call__(self, x, t):
        """tphi = (1/2) ln(F_z Fbar_zb / (1 - F Fbar)^2) - ln(2c)."""
        z, zb = light_cone(np.asarray(x, dtype=float), t)
        G = antiderivative(lambda s: np.exp(-2 * self.fbar(s)), zb, self.zb0)
        F = self.F(z)
        # F_z Fbar_zb/(1 - F Fbar)^2 = e^{2f - 2fbar}/(F + G)^2
        tot = 2 * self.c * (F + G)
        if np.any(tot <= 0):
            raise SingularSurface("1 - F Fbar reaches zero (or the wrong sign) on the window")
        return self.f(z) - self.fbar(zb) - np.log(tot)


def liouville_from_free(f: Callable, fbar: Callable, c: float, grid: Grid1D, t: float = 0.0, z0: float = 0.0, zb0: float = 0.0) -> BtRun:
    """Liouville field from the free field f(z) + fbar(zb), with PDE and hetero-BT residuals."""
    sol = LiouvilleSolution(f, fbar, c, z0, zb0)
    x = grid.x
    vals = sol(x, t)
    pde_res = residual("liouville", sol, t, grid, PdeParams(c=c), scheme="probe")
    bt = liouville_bt_residual(sol, sol.free, c, x, t)
    free_res = residual_wave(sol.free, x, t)
    return BtRun(
        "liouville",
        c,
        "free",
        {"tphi": ScalarField(grid, vals), "phi": ScalarField(grid, sol.free(x, t))},
        pde_res,
        {"bt_residual": bt, "free_residual": free_res, "solution": sol, "t": t},
    )


def liouville_bt_residual(tphi: Callable, phi: Callable, c: float, x, t, theta: float = 0.0, h: float = 1e-3) -> float:
    """d_z(tphi - phi) + 2c e^theta e^{tphi + phi} and d_zb(tphi + phi) + 2c e^-theta e^{tphi - phi}."""
    x = np.asarray(x, dtype=float)
    dm = lambda xx, tt: tphi(xx, tt) - phi(xx, tt)
    dp = lambda xx, tt: tphi(xx, tt) + phi(xx, tt)
    dz = probe_derivative(lambda xx: dm(xx, t), x, 1, h) + time_derivative(lambda tt: dm(x, tt), t, 1, h)
    dzb = probe_derivative(lambda xx: dp(xx, t), x, 1, h) - time_derivative(lambda tt: dp(x, tt), t, 1, h)
    T, P = tphi(x, t), phi(x, t)
    r1 = dz + 2 * c * np.exp(theta) * np.exp(T + P)
    r2 = dzb + 2 * c * np.exp(-theta) * np.exp(T - P)
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


def residual_wave(phi: Callable, x, t, h: float = 1e-3) -> float:
    x = np.asarray(x, dtype=float)
    pxx = probe_derivative(lambda xx: phi(xx, t), x, 2, h)
    ptt = time_derivative(lambda tt: phi(x, tt), t, 2, h)
    return float(np.max(np.abs(pxx - ptt)))


# GLM-built N-soliton --------------------------------------------------------
def kdv_n_soliton(kappa: Sequence[float], b: Sequence[float], t: float, grid: Grid1D, alpha: float = -4.0) -> ScalarField:
    """u = -2 d^2/dx^2 ln det A from the discrete GLM kernel."""
    from .glm import DiscreteKernelSpec, glm_discrete

    return glm_discrete(DiscreteKernelSpec(tuple(kappa), tuple(b), alpha), t, grid).u
