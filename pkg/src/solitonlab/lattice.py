"""Toda chain and discrete NLS: equations of motion, charges, monodromy and solitons."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import PoleOnRange
from .fields import fd_weights


@dataclass(frozen=True, eq=False)
class TodaState:
    q: np.ndarray
    p: np.ndarray
    boundary: str = "open"

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if q.shape != p.shape or q.ndim != 1 or q.size < 2:
            raise ValueError("q and p must be equal-length 1-D arrays with N >= 2")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def N(self) -> int:
        return self.q.size

    def pack(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])

    def unpack(self, y: np.ndarray) -> "TodaState":
        return TodaState(y[: self.N], y[self.N :], self.boundary)


@dataclass(frozen=True, eq=False)
class DnlsState:
    x: np.ndarray
    X: np.ndarray
    boundary: str = "periodic"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex)
        X = np.asarray(self.X, dtype=complex)
        if x.shape != X.shape or x.ndim != 1 or x.size < 3:
            raise ValueError("x and X must be equal-length 1-D arrays with N >= 3")
        if self.boundary != "periodic":
            raise ValueError("DNLS is periodic only")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "X", X)

    @property
    def N(self) -> int:
        return self.x.size

    @property
    def occupation(self) -> np.ndarray:
        return 1.0 + self.x * self.X

    def pack(self) -> np.ndarray:
        return np.concatenate([self.x, self.X])

    def unpack(self, y: np.ndarray) -> "DnlsState":
        return DnlsState(y[: self.N], y[self.N :])


# Toda -----------------------------------------------------------------------
def toda_rhs(s: TodaState) -> tuple[np.ndarray, np.ndarray]:
    q = s.q
    if s.boundary == "periodic":
        fwd = np.exp(np.roll(q, -1) - q)
    else:
        fwd = np.zeros_like(q)
        fwd[:-1] = np.exp(q[1:] - q[:-1])
    back = np.roll(fwd, 1)
    if s.boundary == "open":
        back[0] = 0.0
    return s.p.copy(), fwd - back


def toda_energy(s: TodaState) -> float:
    """Open or periodic Hamiltonian, matching the boundary convention of the state."""
    d = np.exp(np.diff(s.q))
    if s.boundary == "periodic":
        d = np.append(d, np.exp(s.q[0] - s.q[-1]))
    return float(0.5 * np.sum(s.p**2) + np.sum(d))


def toda_lax_matrix(s: TodaState) -> np.ndarray:
    """Tridiagonal L with p on the diagonal and exp((q_{j+1}-q_j)/2) off it."""
    off = np.exp(0.5 * np.diff(s.q))
    return np.diag(s.p) + np.diag(off, 1) + np.diag(off, -1)


def toda_trace_charges(s: TodaState, n_max: int) -> list[float]:
    """tr(L^n), n = 1..n_max, for the open chain."""
    L = toda_lax_matrix(s)
    out, P = [], np.eye(s.N)
    for _ in range(n_max):
        P = P @ L
        out.append(float(np.trace(P)))
    return out


def toda_site_matrices(s: TodaState, lam: complex) -> tuple[np.ndarray, np.ndarray]:
    """Per-site L_j and A_j of the dual (two-by-two) description, periodic indexing."""
    N = s.N
    L = np.zeros((N, 2, 2), dtype=complex)
    L[:, 0, 0] = lam - s.p
    L[:, 0, 1] = np.exp(s.q)
    L[:, 1, 0] = -np.exp(-s.q)
    A = np.zeros((N, 2, 2), dtype=complex)
    A[:, 0, 0] = lam
    A[:, 0, 1] = np.exp(s.q)
    A[:, 1, 0] = -np.exp(-np.roll(s.q, 1))
    return L, A


def toda_monodromy_charges(s: TodaState) -> tuple[float, float, float, float]:
    """Leading coefficients of tr T(lam) = lam^N (1 + t1/lam + t2/lam^2 + ...).

    t1 = -sum p, t2 = sum_{i<j} p_i p_j - sum exp(q_{j+1} - q_j) (periodic),
    I1 = t1, I2 = t2 - t1^2/2 (which equals minus the periodic energy).
    """
    p = s.p
    t1 = -float(np.sum(p))
    pair = 0.5 * (np.sum(p) ** 2 - np.sum(p**2))
    t2 = float(pair - np.sum(np.exp(np.roll(s.q, -1) - s.q)))
    return t1, t2, t1, t2 - 0.5 * t1 * t1


def toda_transfer_coefficients(s: TodaState) -> np.ndarray:
    """Coefficients (highest power first) of the polynomial tr(L_N(lam) ... L_1(lam))."""
    N = s.N
    T = [[np.array([1.0]), np.array([0.0])], [np.array([0.0]), np.array([1.0])]]
    for j in range(N):
        Lj = [[np.array([1.0, -s.p[j]]), np.array([np.exp(s.q[j])])], [np.array([-np.exp(-s.q[j])]), np.array([0.0])]]
        T = [[np.polyadd(np.polymul(Lj[a][0], T[0][b]), np.polymul(Lj[a][1], T[1][b])) for b in range(2)] for a in range(2)]
    return np.polyadd(T[0][0], T[1][1])


# DNLS -----------------------------------------------------------------------
def dnls_rhs(s: DnlsState, variant: str = "lax") -> tuple[np.ndarray, np.ndarray]:
    """Time derivatives of (x_j, X_j).

    ``variant="lax"`` is the flow generated by the semi-discrete zero-curvature
    condition of the DNLS pair; ``variant="flipped"`` reverses the sign of
    three of the cubic terms, which breaks conservation of the transfer matrix.
    """
    x, X = s.x, s.X
    Nn = s.occupation
    xp1, xp2 = np.roll(x, -1), np.roll(x, -2)
    Xm1, Xm2 = np.roll(X, 1), np.roll(X, 2)
    Np1, Nm1 = np.roll(Nn, -1), np.roll(Nn, 1)
    sgn = -1.0 if variant == "lax" else 1.0
    if variant not in ("lax", "flipped"):
        raise ValueError(f"unknown DNLS variant {variant!r}")
    dx = sgn * x * xp1 * X - xp1 * (Nn + Np1) + x * Nn**2 + sgn * x**2 * Xm1 + xp2
    dX = x * Xm1 * X + Xm1 * (Nn + Nm1) - X * Nn**2 - sgn * xp1 * X**2 - Xm2
    return dx, dX


def dnls_charges(s: DnlsState) -> tuple[complex, complex, complex]:
    x, X = s.x, s.X
    Nn = s.occupation
    Xm1, Xm2 = np.roll(X, 1), np.roll(X, 2)
    I1 = np.sum(Nn)
    I2 = np.sum(x * Xm1) - 0.5 * np.sum(Nn**2)
    I3 = np.sum(x * Xm2) - np.sum((Nn + np.roll(Nn, 1)) * x * Xm1) + np.sum(Nn**3) / 3.0
    return complex(I1), complex(I2), complex(I3)


def dnls_site_matrices(s: DnlsState, lam: complex) -> tuple[np.ndarray, np.ndarray]:
    x, X = s.x, s.X
    Nn = s.occupation
    Xm1, Xm2 = np.roll(X, 1), np.roll(X, 2)
    Nm1 = np.roll(Nn, 1)
    L = np.zeros((s.N, 2, 2), dtype=complex)
    L[:, 0, 0] = lam + Nn
    L[:, 0, 1] = x
    L[:, 1, 0] = X
    L[:, 1, 1] = 1.0
    A = np.zeros((s.N, 2, 2), dtype=complex)
    A[:, 0, 0] = lam**2 - x * Xm1
    A[:, 0, 1] = lam * x - x * Nn + np.roll(x, -1)
    A[:, 1, 0] = lam * Xm1 - Xm1 * Nm1 + Xm2
    A[:, 1, 1] = x * Xm1
    return L, A


# shared ---------------------------------------------------------------------
def site_matrices(s, lam: complex):
    if isinstance(s, TodaState):
        return toda_site_matrices(s, lam)
    return dnls_site_matrices(s, lam)


def transfer_trace(s, lam: complex, model: str | None = None) -> complex:
    """Trace of L_N(lam) ... L_1(lam) with periodic indexing."""
    if model is None:
        model = "toda" if isinstance(s, TodaState) else "dnls"
    if model == "toda" and not isinstance(s, TodaState):
        raise TypeError("toda transfer trace needs a TodaState")
    L, _ = site_matrices(s, lam)
    T = np.eye(2, dtype=complex)
    for Lj in L:
        T = Lj @ T
    return complex(np.trace(T))


def _rhs_for(s, variant: str = "lax") -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(s, TodaState):
        def f(y):
            dq, dp = toda_rhs(s.unpack(y))
            return np.concatenate([dq, dp])
    else:
        def f(y):
            dx, dX = dnls_rhs(s.unpack(y), variant)
            return np.concatenate([dx, dX])
    return f


def rk4_step(f, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    states: list

    def __len__(self):
        return len(self.states)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0]) if len(self.t) > 1 else 0.0


def evolve(s, dt: float, steps: int, integrator: str = "rk4", sample_every: int = 1, variant: str = "lax") -> Trajectory:
    """Fixed-step classical RK4; states are recorded every ``sample_every`` steps."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if integrator != "rk4":
        raise ValueError("only rk4 is available")
    f = _rhs_for(s, variant)
    y = s.pack()
    ts, states = [0.0], [s]
    for k in range(1, steps + 1):
        y = rk4_step(f, y, dt)
        if k % sample_every == 0 or k == steps:
            ts.append(k * dt)
            states.append(s.unpack(y.copy()))
    return Trajectory(np.asarray(ts), states)


def semidiscrete_zc_residual(model: str, traj: Trajectory, lam_samples: Sequence[complex], sites=None) -> float:
    """max |dL_j/dt - (A_{j+1} L_j - L_j A_j)| with fourth-order central differences in t.

    The trajectory must be uniformly sampled; the two first and last samples only
    feed the stencil.  ``sites`` restricts j (needed for truncated infinite chains).
    """
    if len(traj) < 5:
        raise ValueError("need at least five samples")
    h = traj.dt
    w = fd_weights((-2, -1, 0, 1, 2), 1)
    worst = 0.0
    for lam in lam_samples:
        mats = [site_matrices(st, lam) for st in traj.states]
        Ls = np.stack([m[0] for m in mats])
        As = np.stack([m[1] for m in mats])
        for k in range(2, len(traj) - 2):
            dL = sum(wi * Ls[k + o] for wi, o in zip(w, (-2, -1, 0, 1, 2))) / h
            L, A = Ls[k], As[k]
            Anext = np.roll(A, -1, axis=0)
            r = dL - (Anext @ L - L @ A)
            if sites is not None:
                r = r[sites]
            worst = max(worst, float(np.max(np.abs(r))))
    return worst


# closed forms ---------------------------------------------------------------
def _toda_phase(kappa, sigma, gamma, j, t):
    a = gamma / (1.0 - np.exp(-2.0 * kappa))
    return np.log(a) - 2.0 * kappa * np.asarray(j, dtype=float) + sigma * np.sinh(kappa) * t


def _softplus(z):
    return np.logaddexp(0.0, z)


def _logistic(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def toda_soliton_q(q_plus, kappa, sigma, gamma, j, t):
    j = np.asarray(j, dtype=float)
    return q_plus + _softplus(_toda_phase(kappa, sigma, gamma, j + 1, t)) - _softplus(_toda_phase(kappa, sigma, gamma, j, t))


def toda_soliton_p(q_plus, kappa, sigma, gamma, j, t):
    j = np.asarray(j, dtype=float)
    om = sigma * np.sinh(kappa)
    return om * (_logistic(_toda_phase(kappa, sigma, gamma, j + 1, t)) - _logistic(_toda_phase(kappa, sigma, gamma, j, t)))


def toda_soliton_qdd(q_plus, kappa, sigma, gamma, j, t):
    j = np.asarray(j, dtype=float)
    om = sigma * np.sinh(kappa)

    def g(z):
        s = _logistic(z)
        return s * (1.0 - s)

    return om**2 * (g(_toda_phase(kappa, sigma, gamma, j + 1, t)) - g(_toda_phase(kappa, sigma, gamma, j, t)))


def toda_soliton(q_plus: float, kappa: float, sigma: float, gamma: float, j_range, t: float) -> TodaState:
    """Discrete soliton on the sites in j_range (open chain view of an infinite lattice)."""
    if kappa <= 0 or gamma <= 0:
        raise ValueError("kappa and gamma must be positive")
    if sigma not in (-2, 2):
        raise ValueError("sigma must be -2 or 2")
    j = np.asarray(list(j_range), dtype=float)
    return TodaState(
        toda_soliton_q(q_plus, kappa, sigma, gamma, j, t),
        toda_soliton_p(q_plus, kappa, sigma, gamma, j, t),
        "open",
    )


def toda_soliton_eom_residual(q_plus, kappa, sigma, gamma, j_range, t) -> float:
    """max |q''_j - (e^{q_{j+1}-q_j} - e^{q_j-q_{j-1}})| with the analytic q''."""
    j = np.asarray(list(j_range), dtype=float)
    q = lambda jj: toda_soliton_q(q_plus, kappa, sigma, gamma, jj, t)
    force = np.exp(q(j + 1) - q(j)) - np.exp(q(j) - q(j - 1))
    return float(np.max(np.abs(toda_soliton_qdd(q_plus, kappa, sigma, gamma, j, t) - force)))


def toda_soliton_trajectory(q_plus, kappa, sigma, gamma, j_range, t0, dt, n) -> Trajectory:
    """Closed-form states at t0 + k dt, k = 0..n-1, on the sites j_range."""
    ts = t0 + dt * np.arange(n)
    states = [toda_soliton(q_plus, kappa, sigma, gamma, j_range, float(t)) for t in ts]
    return Trajectory(ts, states)


def toda_bt_stationary(xi: float, eta: float, j_range) -> np.ndarray:
    """e^{q_j} = cosh(xi + eta (j+1)) / cosh(xi + eta j)."""
    j = np.asarray(list(j_range), dtype=float)
    den = np.cosh(xi + eta * j)
    if np.any(den == 0):
        raise PoleOnRange("cosh vanishes on the range")
    return np.cosh(xi + eta * (j + 1)) / den


def toda_bt_stationary_residual(xi: float, eta: float, j_range) -> float:
    """max |e^{-q_j} + e^{q_{j+1}} - 2 cosh(eta)|."""
    j = list(j_range)
    eq = toda_bt_stationary(xi, eta, j + [j[-1] + 1])
    theta = 2.0 * np.cosh(eta)
    return float(np.max(np.abs(1.0 / eq[:-1] + eq[1:] - theta)))
