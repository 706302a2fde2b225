"""Acceptance suites: each check measures one quantity and compares it with a fixed tolerance.

Shared by the ``verify`` CLI subcommand and the test-suite, so both report the
same numbers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import charges as ch
from . import glm, lattice, laxpairs, pde, solitons
from .diffpoly import parse
from .fields import Grid1D, ScalarField

LAMBDAS = laxpairs.DEFAULT_LAMBDAS


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.measured)) and self.measured <= self.tolerance

    def row(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.criterion:>2}  {self.name:<44} {self.measured:10.3e} <= {self.tolerance:8.1e}  {status}"


def _rel_drift(values) -> float:
    a = np.asarray(values)
    a0 = a[0]
    return float(np.max(np.abs(a - a0) / np.abs(a0)))


# 1: symbolic goldens -----------------------------------------------------------
GARDNER_GOLDEN = {1: "-u[1]", 2: "u[2] - u^2", 3: "4*u*u[1] - u[3]"}
GAMMA_GOLDEN = {1: "u", 2: "-u[1]", 3: "u[2] - u*uh*u"}
# anti-diagonal entries (1,2) and (2,1) of W^(n)
W_GOLDEN = {
    1: ("-uh", "u"),
    2: ("-uh[1]", "-u[1]"),
    3: ("-uh[2] + u*uh^2", "u[2] - uh*u^2"),
}
Z_GOLDEN = {1: "u*uh", 2: "-uh*u[1]", 3: "uh*u[2] - (uh*u)^2"}


def golden_table() -> list[tuple[str, str, str, bool]]:
    """(label, computed, golden, equal) for every reference density."""
    rows = []
    g = ch.gardner_densities(3)
    rows += [(f"w{n}", g[n].to_ascii(), s, g[n] == parse(s)) for n, s in GARDNER_GOLDEN.items()]
    r = ch.riccati_gamma(3)
    rows += [(f"Gamma{n}", r[n].to_ascii(), s, r[n] == parse(s)) for n, s in GAMMA_GOLDEN.items()]
    W, z = ch.akns_wz(3)
    for n, (s12, s21) in W_GOLDEN.items():
        Wn = W[n - 1]
        ok = Wn.coeff(0, 1) == parse(s12) and Wn.coeff(1, 0) == parse(s21) and Wn.diagonal().is_zero()
        rows.append((f"W{n}", Wn.to_ascii(), f"[[0, {s12}], [{s21}, 0]]", ok))
    rows += [(f"Z{n}", z[n].to_ascii(), s, z[n] == parse(s)) for n, s in Z_GOLDEN.items()]
    return rows


def suite_symbolic() -> list[Check]:
    return [Check(1, f"{label} = {gold}", 0.0 if ok else 1.0, 0.0) for label, _, gold, ok in golden_table()]


# 2: zero curvature -------------------------------------------------------------
def suite_zero_curvature() -> list[Check]:
    out = []
    for name in ("nls", "sinh_gordon", "liouville", "free"):
        res = laxpairs.reduced_residual(laxpairs.builtin_lax(name))
        nonzero = sum(1 for i in range(2) for j in range(2) for p in res.entry(i, j).values() if not p.is_zero())
        out.append(Check(2, f"zero curvature {name} (nonzero terms)", float(nonzero), 0.0))
    k = laxpairs.kdv_lax_coefficients(-4)
    ok = k.eom == parse("6*u*u[1] - u[3]") and all(k.commutator.coeff(i).is_zero() for i in (1, 2, 3))
    out.append(Check(2, "kdv operator pair a=-4 (mismatch)", 0.0 if ok else 1.0, 0.0))
    return out


# 3, 4, 5: lattice --------------------------------------------------------------
def toda_initial(N: int = 8, seed: int = 0, boundary: str = "open") -> lattice.TodaState:
    rng = np.random.default_rng(seed)
    return lattice.TodaState(0.5 * rng.normal(size=N), 0.5 * rng.normal(size=N), boundary)


def dnls_initial(N: int = 8, amplitude: float = 0.05, seed: int = 0) -> lattice.DnlsState:
    rng = np.random.default_rng(seed)
    z = lambda: amplitude * (rng.normal(size=N) + 1j * rng.normal(size=N))
    return lattice.DnlsState(z(), z())


def suite_lattice(seed: int = 0) -> list[Check]:
    dt, steps = 1e-3, 10_000
    s = toda_initial(seed=seed)
    tr = lattice.evolve(s, dt, steps, sample_every=500)
    trace = np.array([lattice.toda_trace_charges(st, 4) for st in tr.states])
    sp = lattice.TodaState(s.q, s.p, "periodic")
    trp = lattice.evolve(sp, dt, steps, sample_every=500)
    mono = np.array([lattice.toda_monodromy_charges(st) for st in trp.states])
    d = dnls_initial(seed=seed)
    trd = lattice.evolve(d, dt, 1000, sample_every=50)
    dn = np.array([lattice.dnls_charges(st) for st in trd.states])
    out = [Check(3, f"toda open tr L^{n} drift", _rel_drift(trace[:, n - 1]), 1e-6) for n in range(1, 5)]
    for col, label in ((0, "t1"), (1, "t2"), (3, "I2")):
        out.append(Check(3, f"toda periodic {label} drift", _rel_drift(mono[:, col]), 1e-6))
    out += [Check(3, f"dnls I{k + 1} drift", _rel_drift(dn[:, k]), 1e-6) for k in range(3)]

    worst = 0.0
    for lam in LAMBDAS:
        worst = max(worst, _rel_drift([lattice.transfer_trace(st, lam) for st in trp.states]))
    out.append(Check(4, "toda transfer trace drift", worst, 1e-6))
    return out


def suite_discrete_soliton() -> list[Check]:
    gamma = 1 - np.exp(-2.0)
    eom = lattice.toda_soliton_eom_residual(0.3, 1.0, 2, gamma, range(-15, 16), 0.4)
    traj = lattice.toda_soliton_trajectory(0.3, 1.0, 2, gamma, range(-40, 41), 0.0, 1e-3, 9)
    zc = lattice.semidiscrete_zc_residual("toda", traj, LAMBDAS, sites=slice(5, -5))
    bt = lattice.toda_bt_stationary_residual(0.3, 0.7, range(-10, 11))
    return [
        Check(5, "toda soliton equation of motion", eom, 1e-8),
        Check(5, "toda soliton zero curvature", zc, 1e-6),
        Check(5, "toda stationary BT relation", bt, 1e-12),
    ]


# 6, 7: KdV and Miura ----------------------------------------------------------
def suite_kdv() -> list[Check]:
    g = Grid1D.periodic(40.0, 512)
    spec = solitons.KdvSolitonSpec(4.0)
    sol = lambda x, t: solitons.kdv_soliton_value(spec, x, t)
    res = pde.residual("kdv", sol, 0.0, g)
    tr = pde.evolve("kdv", {"u": sol(g.x, 0.0)}, g, 1e-3, 1000)
    track = float(np.max(np.abs(tr.snapshots[-1]["u"] - sol(g.x, 1.0))))
    gb = Grid1D.decaying(-20.0, 20.0, 2001)
    _, _, bres = solitons.kdv_two_soliton_bianchi((1.0, 2.0), (0.0, 0.0), gb, 0.0)
    return [
        Check(6, "kdv one-soliton residual", res, 1e-6),
        Check(6, "kdv evolved soliton vs translation", track, 1e-4),
        Check(6, "kdv Bianchi two-soliton residual", bres, 1e-5),
    ]


def miura_residual(n: int = 128, dt: float = 5e-5, sample_every: int = 5, samples: int = 200) -> float:
    g = Grid1D.periodic(np.pi, n)
    v0 = 0.5 * np.cos(g.x) + 0.2 * np.sin(2 * g.x)
    tr = pde.evolve("mkdv", {"v": v0}, g, dt, samples * sample_every, sample_every=sample_every)
    to_kdv = lambda s: ("kdv", {"u": pde.miura_map(ScalarField(g, s["v"])).values})
    return max(pde.trajectory_residual(tr, k, transform=to_kdv) for k in range(2, len(tr) - 3, 20))


def suite_miura() -> list[Check]:
    gp = Grid1D.periodic(np.pi, 128)
    v = ScalarField(gp, 0.5 * np.cos(gp.x) + 0.2 * np.sin(2 * gp.x) + 0.3)
    gd = Grid1D.decaying(-10.0, 10.0, 2001)
    vt = ScalarField(gd, np.tanh(gd.x))
    ut = ScalarField(gd, vt.values**2 + 1 / np.cosh(gd.x) ** 2)
    schr = max(pde.schroedinger_check(pde.miura_map(v), v), pde.schroedinger_check(ut, vt))
    return [
        Check(7, "mKdV -> Miura -> KdV residual", miura_residual(), 1e-4),
        Check(7, "Schroedinger form residual", schr, 1e-6),
    ]


# 8: GLM --------------------------------------------------------------------------
def suite_glm() -> list[Check]:
    g = Grid1D.decaying(-10.0, 10.0, 801)
    one = glm.DiscreteKernelSpec((1.0,), (2.0,))
    r1 = glm.glm_discrete(one, 0.3, g)
    err1 = float(np.max(np.abs(r1.u.values - glm.one_soliton_oracle(1.0, 2.0, g.x, 0.3))))
    two = glm.DiscreteKernelSpec((1.0, 1.5), (2.0, 3.0))

    def u2(x, t):
        return glm.glm_discrete(two, t, Grid1D(float(x[0]), float(x[1] - x[0]), len(x), "decaying")).u.values

    res2 = pde.residual("kdv", u2, 0.1, Grid1D.decaying(-15.0, 15.0, 1201), scheme="probe")
    xs = np.linspace(-3.0, 3.0, 7)
    cross = 0.0
    for spec in (one, two):
        _, u, _ = glm.glm_nystrom(glm.discrete_kernel(spec, 0.0), xs)
        ref = glm.glm_discrete(spec, 0.0, Grid1D(-3.0, 1.0, 8, "decaying")).u.values[:7]
        cross = max(cross, float(np.max(np.abs(u - ref))))
    airy = glm.airy_ode_residual(glm.airy_kernel(0.5), np.linspace(-10.0, 20.0, 301))
    return [
        Check(8, "GLM N=1 vs closed-form oracle", err1, 1e-8),
        Check(8, "GLM N=2 KdV residual", res2, 1e-5),
        Check(8, "Nystrom vs discrete GLM", cross, 1e-4),
        Check(8, "Airy ODE residual", airy, 1e-8),
    ]


# 9, 10: relativistic models ------------------------------------------------------
def suite_sinh_gordon() -> list[Check]:
    gs = Grid1D.decaying(0.0, 30.0, 1501)
    a, A = 2.0, 0.5
    w = lambda x, t: solitons.shg_w_one(a, A, x, t)
    res1 = pde.residual("sinh_gordon", lambda x, t: 2 * w(x, t), 0.0, gs, scheme="probe")
    bt = solitons.shg_bt_residual(w, lambda x, t: 0 * x, a, gs.x, 0.0)
    gb = Grid1D.decaying(-15.0, 15.0, 3001)
    phi, _, res2 = solitons.shg_two_soliton_bianchi(1.5, 0.5, 0.3, 0.2, gb, 0.0)
    phi_sw, _, _ = solitons.shg_two_soliton_bianchi(0.5, 1.5, 0.2, 0.3, gb, 0.0)
    swap = float(np.max(np.abs(phi.values - phi_sw.values)))
    return [
        Check(9, "sinh-Gordon one-soliton residual", res1, 1e-6),
        Check(9, "sinh-Gordon BT relations (vacuum seed)", bt, 1e-8),
        Check(9, "sinh-Gordon Bianchi residual", res2, 1e-5),
        Check(9, "sinh-Gordon Bianchi swap difference", swap, 0.0),
    ]


def suite_liouville() -> list[Check]:
    g = Grid1D.decaying(1.0, 10.0, 901)
    runs = [
        solitons.liouville_from_free(lambda z: 0 * z, lambda z: 0 * z, 0.7, g, 0.0),
        solitons.liouville_from_free(lambda z: 0.3 * np.sin(z), lambda z: 0.2 * np.cos(z), 0.7, g, 0.2),
    ]
    return [
        Check(10, "Liouville hetero-BT relations", max(r.metadata["bt_residual"] for r in runs), 1e-6),
        Check(10, "Liouville PDE residual", max(r.residual for r in runs), 1e-5),
    ]


# 11: charge duality --------------------------------------------------------------
def duality_fields(n: int = 512, L: float = 30.0):
    g = Grid1D.periodic(L, n)
    u = ScalarField(g, np.exp(0.3j * g.x) / np.cosh(g.x))
    uh = ScalarField(g, 0.8 * np.exp(-0.2j * g.x) / np.cosh(g.x - 0.5))
    return g, {"u": u, "uh": uh}


def charge_duality(k_max: int = 3) -> float:
    g, f = duality_fields()
    a = np.array(ch.gamma_charges(f, g, k_max))
    b = np.array(ch.z_charges(f, g, k_max))
    return float(np.max(np.abs(a - b) / np.abs(b)))


def suite_duality() -> list[Check]:
    return [Check(11, "Gamma vs Z charges (relative)", charge_duality(3), 1e-8)]


SUITES: dict[str, Callable[[], list[Check]]] = {
    "charges": suite_symbolic,
    "laxpairs": suite_zero_curvature,
    "lattice": suite_lattice,
    "discrete_soliton": suite_discrete_soliton,
    "kdv": suite_kdv,
    "miura": suite_miura,
    "glm": suite_glm,
    "sinh_gordon": suite_sinh_gordon,
    "liouville": suite_liouville,
    "duality": suite_duality,
}


def run_suite(name: str = "all") -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {['all', *SUITES]}")
    return SUITES[name]()


def render(checks: list[Check]) -> str:
    lines = [c.row() for c in checks]
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"
