"""Gelfand-Levitan-Marchenko solvers: exponential kernels exactly, continuous kernels by Nystrom."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import lapack
from scipy.optimize import brentq
from scipy.special import airy

from .errors import IllConditioned, SingularA, TruncationTooTight
from .fields import Grid1D, ScalarField, derivative

DECAY = 1e-12
COND_MAX = 1e8


@dataclass(frozen=True)
class DiscreteKernelSpec:
    """F(s, t) = sum_n b_n exp(-kappa_n s + Lambda_n t), Lambda_n = -2 alpha kappa_n^3."""

    kappa: tuple = ()
    b: tuple = ()
    alpha: float = -4.0

    def __post_init__(self):
        k = tuple(float(v) for v in self.kappa)
        b = tuple(float(v) for v in self.b)
        if len(k) != len(b):
            raise ValueError("kappa and b must have equal length")
        if any(v <= 0 for v in k) or any(v <= 0 for v in b):
            raise ValueError("kappa and b must be positive")
        if len(set(k)) != len(k):
            raise ValueError("kappa values must be distinct")
        object.__setattr__(self, "kappa", k)
        object.__setattr__(self, "b", b)

    @property
    def N(self) -> int:
        return len(self.kappa)

    @property
    def Lambda(self) -> np.ndarray:
        return -2.0 * self.alpha * np.asarray(self.kappa) ** 3

    def F(self, s, t: float = 0.0):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape)
        for k, b, L in zip(self.kappa, self.b, self.Lambda):
            out = out + b * np.exp(-k * s + L * t)
        return out


@dataclass(frozen=True)
class GlmDiscreteResult:
    K_diag: ScalarField
    u: ScalarField
    logdet: ScalarField
    K_logdet: ScalarField  # d/dx ln det A, the other side of the trace identity


def _stable_D(spec: DiscreteKernelSpec, x: np.ndarray, t: float):
    """D = diag(e^{2 kappa x - Lambda t}/b) + C, C_nm = 1/(kappa_n + kappa_m).

    det A = prod(b e^{Lambda t - 2 kappa x}) det D, and D is symmetric positive definite.
    """
    k = np.asarray(spec.kappa)
    b = np.asarray(spec.b)
    L = spec.Lambda
    C = 1.0 / (k[:, None] + k[None, :])
    d = np.exp(2 * k[None, :] * x[:, None] - L[None, :] * t) / b[None, :]
    D = np.broadcast_to(C, (len(x),) + C.shape).copy()
    idx = np.arange(len(k))
    D[:, idx, idx] += d
    return D, d, k, b, L


def glm_discrete(spec: DiscreteKernelSpec, t: float, grid: Grid1D, u_method: str = "trace") -> GlmDiscreteResult:
    """Exponential-kernel GLM solve on every grid point.

    K(x, x) comes from the linear system A L = -B (written through D so it stays
    well scaled); u = -2 d^2/dx^2 ln det A is evaluated in closed form from
    traces of D^{-1} D' and D^{-1} D'' (``u_method="trace"``) or by fourth-order
    differences of the log-determinant (``u_method="fd4"``).
    """
    x = grid.x
    n = len(x)
    if spec.N == 0:
        z = np.zeros(n)
        return GlmDiscreteResult(*(ScalarField(grid, z.copy()) for _ in range(4)))
    D, d, k, b, L = _stable_D(spec, x, t)
    sign, ld = np.linalg.slogdet(D)
    if np.any(sign <= 0):
        raise SingularA("det A is not positive on the grid")
    logdet = ld + np.sum(np.log(b)) + np.sum(L * t - 2 * k[None, :] * x[:, None], axis=1)
    ones = np.ones((n, spec.N))
    Dinv_1 = np.linalg.solve(D, ones[..., None])[..., 0]
    K = -np.sum(Dinv_1, axis=1)
    Dinv = np.linalg.inv(D)
    d1 = 2 * k[None, :] * d
    d2 = 4 * k[None, :] ** 2 * d
    diag = np.einsum("xii->xi", Dinv)
    tr1 = np.sum(diag * d1, axis=1)
    tr2 = np.sum(diag * d2, axis=1)
    M = Dinv * d1[:, None, :]  # D^{-1} D'
    trsq = np.einsum("xij,xji->x", M, M)
    K_ld = tr1 - 2 * np.sum(k)
    if u_method == "trace":
        u = -2 * (tr2 - trsq)
    elif u_method == "fd4":
        u = -2 * derivative(logdet, grid, 2, "fd4")
    else:
        raise ValueError(f"unknown u_method {u_method!r}")
    return GlmDiscreteResult(
        ScalarField(grid, K), ScalarField(grid, u), ScalarField(grid, logdet), ScalarField(grid, K_ld)
    )


def one_soliton_oracle(kappa: float, b: float, x, t: float, alpha: float = -4.0):
    """-2 d^2/dx^2 ln(1 + (b/2 kappa) e^{-2 kappa x + Lambda t}) written out by hand."""
    L = -2 * alpha * kappa**3
    a = b / (2 * kappa) * np.exp(-2 * kappa * np.asarray(x) + L * t)
    return -2 * (4 * kappa**2 * a / (1 + a) ** 2)


# continuous kernels ---------------------------------------------------------
@dataclass(frozen=True)
class ContinuousKernel:
    """F(s) together with L_cut: |F(s)| < 1e-12 for all s >= L_cut."""

    F: Callable[[np.ndarray], np.ndarray]
    L_cut: float
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)


def discrete_kernel(spec: DiscreteKernelSpec, t: float) -> ContinuousKernel:
    """View an exponential kernel at fixed t as a continuous one."""
    if spec.N == 0:
        return ContinuousKernel(lambda s: np.zeros(np.shape(s)), 0.0, "zero")
    k = np.asarray(spec.kappa)
    # each term below DECAY/N past its own cut
    cuts = (np.log(np.asarray(spec.b) * spec.N / DECAY) + spec.Lambda * t) / k
    return ContinuousKernel(lambda s: spec.F(s, t), float(np.max(cuts)), "discrete", {"t": t})


def airy_nu(t: float) -> float:
    return 2.0 * (3.0 * t) ** (1.0 / 3.0)


def airy_ai(z):
    return airy(np.asarray(z, dtype=float))[0]


def airy_kernel(t: float) -> ContinuousKernel:
    """F(s) = Ai(s/nu)/nu with nu = 2 (3t)^{1/3}; solves dF/dt = -8 d^3F/ds^3."""
    if t <= 0:
        raise ValueError("t must be positive")
    nu = airy_nu(t)
    F = lambda s: airy_ai(np.asarray(s, dtype=float) / nu) / nu
    # Ai is positive and decreasing for positive argument; aim below the threshold
    zc = brentq(lambda z: airy_ai(z) / nu - 0.5 * DECAY, 1.0, 60.0, xtol=1e-12)
    return ContinuousKernel(F, float(nu * zc), "airy", {"t": t, "nu": nu})


def airy_cosine_integral(z: float, rho: float = 1.0, n: int = 4000, R: float = 8.0) -> float:
    """Ai(z) = (1/pi) int_0^inf cos(s^3/3 + z s) ds, evaluated on the rotated ray s = r e^{i pi/6}.

    The contour is pushed off the real axis (where the integrand oscillates
    without decay) into the sector where it decays like exp(-r^3/3).
    """
    from scipy.integrate import quad

    e = np.exp(1j * np.pi / 6)

    def g(r, part):
        s = r * e
        v = np.exp(1j * (s**3 / 3 + z * s)) * e
        return v.real if part == 0 else v.imag

    re = quad(g, 0, R, args=(0,), limit=400, epsabs=1e-15, epsrel=1e-14)[0]
    # (1/pi) Re int_0^inf e^{i(s^3/3 + z s)} ds
    return re / np.pi


@dataclass(frozen=True)
class NystromResult:
    x: float
    z: np.ndarray
    K: np.ndarray
    cond: float

    @property
    def K_diag(self) -> float:
        return float(self.K[0])


def quadrature_weights(m: int, h: float, rule: str = "trapezoid") -> np.ndarray:
    """Uniform-grid weights on m + 1 nodes: plain trapezoid or its fourth-order end-corrected form."""
    w = np.full(m + 1, h)
    if rule == "trapezoid":
        w[0] = w[-1] = 0.5 * h
    elif rule == "corrected":
        if m < 8:
            raise ValueError("corrected rule needs at least 9 nodes")
        ends = np.array([17, 59, 43, 49]) / 48 * h
        w[:4] = ends
        w[-4:] = ends[::-1]
    else:
        raise ValueError(f"unknown quadrature {rule!r}")
    return w


def nystrom_solve(
    kernel: ContinuousKernel, x: float, h: float = 0.025, ray_end: float | None = None, quadrature: str = "corrected"
) -> NystromResult:
    """Nystrom solve of K(x,z) + F(x+z) + int_x^Y K(x,y) F(y+z) dy = 0 on a uniform ray.

    The ray end Y defaults to L_cut - x so every dropped product F(y + z), y > Y,
    z >= x, is below the decay threshold.
    """
    Y = kernel.L_cut - x if ray_end is None else ray_end
    if Y <= x:
        Y = x + 10 * h
    tail = float(np.abs(kernel.F(np.array([x + Y])))[0])
    if tail > DECAY:
        raise TruncationTooTight(f"|F({x + Y:.4g})| = {tail:.3e} exceeds {DECAY:g}")
    m = int(np.ceil((Y - x) / h))
    z = x + h * np.arange(m + 1)
    w = quadrature_weights(m, h, quadrature)
    # uniform ray: F(z_i + z_j) depends on i + j only
    Fs = kernel.F(2 * x + h * np.arange(2 * m + 1))
    idx = np.arange(m + 1)
    Fm = Fs[idx[:, None] + idx[None, :]]
    A = np.eye(m + 1) + Fm * w[None, :]
    lu, piv, info = lapack.dgetrf(A)
    rcond = lapack.dgecon(lu, np.linalg.norm(A, 1), norm="1")[0] if info == 0 else 0.0
    cond = 1.0 / rcond if rcond > 0 else np.inf
    if not np.isfinite(cond) or cond > COND_MAX:
        raise IllConditioned(f"Nystrom matrix condition number {cond:.3e}")
    K = lapack.dgetrs(lu, piv, -Fs[: m + 1])[0]
    return NystromResult(x, z, K, cond)


def glm_nystrom(
    kernel: ContinuousKernel,
    xs,
    h: float = 0.025,
    dx: float | None = None,
    ray_end: float | None = None,
    quadrature: str = "corrected",
):
    """K(x, x) and u(x) = -2 dK(x,x)/dx at each x, by re-solving at x +- dx (dx defaults to h).

    Returns (K_diag, u, max condition number).
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    dx = h if dx is None else dx
    Kd, u, cmax = [], [], 0.0
    for x in xs:
        vals = []
        for o in (-2, -1, 0, 1, 2):
            r = nystrom_solve(kernel, x + o * dx, h, None if ray_end is None else ray_end + o * dx, quadrature)
            cmax = max(cmax, r.cond)
            vals.append(r.K_diag)
        Kd.append(vals[2])
        dK = (vals[0] - 8 * vals[1] + 8 * vals[3] - vals[4]) / (12 * dx)
        u.append(-2 * dK)
    return np.asarray(Kd), np.asarray(u), cmax


def airy_ode_residual(kernel: ContinuousKernel, zeta, h: float = 5e-3) -> float:
    """max |G'' - zeta G| for G(zeta) = nu F(nu zeta), with a five-point second difference."""
    nu = kernel.meta["nu"]
    zeta = np.asarray(zeta, dtype=float)
    G = lambda z: nu * kernel.F(nu * z)
    w = np.array([-1, 16, -30, 16, -1]) / 12
    G2 = sum(wi * G(zeta + o * h) for wi, o in zip(w, (-2, -1, 0, 1, 2))) / h**2
    return float(np.max(np.abs(G2 - zeta * G(zeta))))


def airy_time_residual(t: float, s, scale: float = -8.0, h: float = 1e-2) -> float:
    """max |dF/dt - scale d^3F/ds^3| for the Airy kernel family at time t."""
    s = np.asarray(s, dtype=float)
    F = lambda ss, tt: airy_kernel(tt).F(ss)
    o = (-2, -1, 0, 1, 2)
    w1 = np.array([1, -8, 0, 8, -1]) / 12
    Ft = sum(wi * F(s, t + k * h) for wi, k in zip(w1, o)) / h
    # third derivative from seven points keeps fourth order
    o7 = (-3, -2, -1, 0, 1, 2, 3)
    w7 = np.array([1, -8, 13, 0, -13, 8, -1]) / 8
    Fsss = sum(wi * F(s + k * h, t) for wi, k in zip(w7, o7)) / h**3
    return float(np.max(np.abs(Ft - scale * Fsss)))
