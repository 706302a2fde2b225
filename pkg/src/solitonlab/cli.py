"""Command-line entry point: ``solitonlab <command> [--config run.json] [flags]``.

Each command reads a flat JSON config whose keys mirror its flags; flags win
over the file, unknown keys are rejected, and the effective config is written
next to the outputs in ``<out>/<command>/<timestamp>/``.

Exit codes: 0 success, 1 failed check or numerical error, 2 bad config.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import typing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, SolitonLabError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


# configs ------------------------------------------------------------------------
def _need(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def _choice(name: str, value, options):
    _need(value in options, f"{name} must be one of {list(options)}, got {value!r}")


@dataclass
class SolitonConfig:
    eq: str = "kdv"  # kdv | shg
    n: int = 1  # number of solitons
    c: float = 4.0
    x0: float = 0.0
    kappa: tuple = (1.0, 1.5)
    b: tuple = ()
    alpha: tuple = ()
    A: tuple = ()
    beta: float = 1.0
    t: float = 0.0
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    points: Optional[int] = None
    seed: int = 0

    def validate(self):
        _choice("eq", self.eq, ("kdv", "shg"))
        _need(self.n in (1, 2) or (self.eq == "kdv" and self.n >= 1), "n must be 1 or 2 (any n >= 1 for kdv)")
        _need(self.c > 0, "c must be positive")
        if self.eq == "kdv" and self.n > 1:
            _need(len(self.kappa) == self.n, "kdv with n > 1 needs n kappa values")
            _need(not self.b or len(self.b) == self.n, "b must have n values")
        if self.eq == "shg":
            _need(not self.alpha or len(self.alpha) == self.n, "alpha must have n values")
            _need(not self.A or len(self.A) == self.n, "A must have n values")


@dataclass
class EvolveConfig:
    model: str = "toda"  # toda | dnls | kdv | mkdv | nls_pair | sinh_gordon | liouville
    N: int = 8
    boundary: str = "open"
    dt: float = 1e-3
    steps: Optional[int] = None
    T: float = 1.0
    L: float = 40.0
    n: int = 512
    sample_every: int = 100
    variant: str = "lax"
    kcut: float = 12.0
    beta: float = 1.0
    c: float = 1.0
    init: dict = field(default_factory=dict)
    seed: int = 0

    def validate(self):
        _choice("model", self.model, ("toda", "dnls", "kdv", "mkdv", "nls_pair", "sinh_gordon", "liouville"))
        _choice("boundary", self.boundary, ("open", "periodic"))
        _choice("variant", self.variant, ("lax", "flipped"))
        _need(self.dt > 0, "dt must be positive")
        _need(self.sample_every >= 1, "sample_every must be >= 1")
        _need(self.steps is None or self.steps >= 0, "steps must be >= 0")
        if self.model in ("toda", "dnls"):
            _need(self.N >= (2 if self.model == "toda" else 3), "N too small for the model")
        else:
            _need(self.n >= 8 and self.n & (self.n - 1) == 0, "n must be a power of two >= 8")
        _need(isinstance(self.init, dict), "init must be an object {type, params}")

    @property
    def n_steps(self) -> int:
        return self.steps if self.steps is not None else int(round(self.T / self.dt))


@dataclass
class ChargesConfig:
    scheme: str = "gamma"  # gardner | gamma | akns_z
    n_max: int = 3
    mode: str = "independent"  # independent | equal | conjugate
    u_amp: float = 1.0
    u_phase: float = 0.3
    uh_amp: float = 0.8
    uh_shift: float = 0.5
    L: float = 30.0
    n: int = 512
    seed: int = 0

    def validate(self):
        _choice("scheme", self.scheme, ("gardner", "gamma", "akns_z"))
        _choice("mode", self.mode, ("independent", "equal", "conjugate"))
        _need(self.n_max >= 1, "n_max must be >= 1")
        _need(self.n >= 8 and self.n & (self.n - 1) == 0, "n must be a power of two >= 8")


@dataclass
class GlmConfig:
    kernel: str = "discrete"  # discrete | airy
    kappa: tuple = (1.0,)
    b: tuple = (2.0,)
    alpha: float = -4.0
    t: float = 0.0
    x_min: float = -10.0
    x_max: float = 10.0
    points: Optional[int] = None  # 401 for discrete, 21 for airy
    h: float = 0.025
    seed: int = 0

    def validate(self):
        _choice("kernel", self.kernel, ("discrete", "airy"))
        _need(len(self.kappa) == len(self.b), "kappa and b must have equal length")
        _need(all(k > 0 for k in self.kappa) and all(v > 0 for v in self.b), "kappa and b must be positive")
        _need(len(set(self.kappa)) == len(self.kappa), "kappa values must be distinct")
        _need(self.kernel != "airy" or self.t > 0, "the Airy kernel needs t > 0")
        _need(self.x_max > self.x_min, "x_max must exceed x_min")
        _need(self.points is None or self.points >= (8 if self.kernel == "discrete" else 1), "too few points")
        _need(self.h > 0, "h must be positive")


@dataclass
class BtConfig:
    model: str = "kdv"  # kdv | shg | nls | liouville
    parameter: Optional[float] = None  # Lambda, alpha, k or c
    A: float = -1.0
    shift: float = 0.0
    t: float = 0.0
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    points: int = 1001
    seed: int = 0

    def validate(self):
        _choice("model", self.model, ("kdv", "shg", "nls", "liouville"))
        _need(self.points >= 8, "points must be >= 8")


@dataclass
class LaxcheckConfig:
    model: str = "nls"
    a: float = -4.0
    seed: int = 0

    def validate(self):
        from .laxpairs import BUILTIN

        _choice("model", self.model, tuple(BUILTIN) + ("kdv",))


@dataclass
class VerifyConfig:
    suite: str = "all"
    seed: int = 0

    def validate(self):
        from .verify import SUITES

        _choice("suite", self.suite, ("all",) + tuple(SUITES))


CONFIGS = {
    "soliton": SolitonConfig,
    "evolve": EvolveConfig,
    "charges": ChargesConfig,
    "glm": GlmConfig,
    "bt": BtConfig,
    "laxcheck": LaxcheckConfig,
    "verify": VerifyConfig,
}


def _coerce(name: str, value, tp):
    """Convert a JSON value or flag string to the declared field type."""
    origin = typing.get_origin(tp)
    if origin is typing.Union:
        if value is None or (isinstance(value, str) and value.lower() in ("none", "null", "")):
            return None
        tp = next(a for a in typing.get_args(tp) if a is not type(None))
    try:
        if tp is tuple:
            if isinstance(value, str):
                return tuple(float(v) for v in value.split(",") if v.strip())
            if isinstance(value, (int, float)):
                return (float(value),)
            return tuple(float(v) for v in value)
        if tp is dict:
            if isinstance(value, str):
                value = json.loads(value) if value.strip().startswith("{") else {"type": value}
            if not isinstance(value, dict):
                raise TypeError
            return value
        if tp is bool:
            if isinstance(value, str):
                return value.lower() in ("1", "true", "yes")
            return bool(value)
        if tp is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if tp is float:
            return float(value)
        if tp is str:
            if not isinstance(value, str):
                raise TypeError
            return value
    except (TypeError, ValueError, json.JSONDecodeError):
        raise ConfigError(f"{name}: cannot read {value!r} as {getattr(tp, '__name__', tp)}") from None
    raise ConfigError(f"{name}: unsupported type {tp}")


def build_config(command: str, file_values: dict, flag_values: dict):
    cls = CONFIGS[command]
    hints = typing.get_type_hints(cls)
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {unknown}")
    merged = {**file_values, **flag_values}
    cfg = cls(**{k: _coerce(k, v, hints[k]) for k, v in merged.items()})
    cfg.validate()
    return cfg


def config_dict(cfg) -> dict:
    return {"command": next(k for k, v in CONFIGS.items() if isinstance(cfg, v)), **dataclasses.asdict(cfg)}


# output helpers ------------------------------------------------------------------
def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([fmt(v) for v in row] for row in rows)
    return buf.getvalue()


def json_text(obj) -> str:
    def clean(o):
        if isinstance(o, dict):
            return {str(k): clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        if isinstance(o, (np.floating, float)):
            return float(o) if np.isfinite(o) else str(float(o))
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.bool_,)):
            return bool(o)
        return o

    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


@dataclass
class RunResult:
    files: dict  # name -> text
    summary: str
    ok: bool = True


# commands ------------------------------------------------------------------------
def run_soliton(cfg: SolitonConfig) -> RunResult:
    from . import pde, solitons
    from .fields import Grid1D

    meta = {}
    if cfg.eq == "kdv":
        if cfg.n == 1:
            lo, hi = cfg.x_min if cfg.x_min is not None else -40.0, cfg.x_max if cfg.x_max is not None else 40.0
            pts = cfg.points or 512
            grid = Grid1D(lo, (hi - lo) / pts, pts, "periodic")
            spec = solitons.KdvSolitonSpec(cfg.c, cfg.x0)
            u = solitons.kdv_one_soliton(spec, cfg.t, grid).values
            scheme = "spectral" if grid.spectral_ok else "fd4"
            res = pde.residual("kdv", lambda x, t: solitons.kdv_soliton_value(spec, x, t), cfg.t, grid, scheme=scheme)
        else:
            lo, hi = cfg.x_min if cfg.x_min is not None else -20.0, cfg.x_max if cfg.x_max is not None else 20.0
            grid = Grid1D.decaying(lo, hi, cfg.points or 801)
            b = cfg.b or (1.0,) * cfg.n
            u = solitons.kdv_n_soliton(cfg.kappa, b, cfg.t, grid).values
            sampler = lambda x, t: solitons.kdv_n_soliton(cfg.kappa, b, t, Grid1D(float(x[0]), float(x[1] - x[0]), len(x), "decaying")).values
            res = pde.residual("kdv", sampler, cfg.t, grid, scheme="probe")
            meta["b"] = b
        mask = np.ones(grid.n, dtype=bool)
        tol = 1e-6 if cfg.n == 1 else 1e-5
    else:
        if cfg.n == 1:
            alpha, A = (cfg.alpha or (2.0,))[0], (cfg.A or (0.5,))[0]
            lo, hi = cfg.x_min if cfg.x_min is not None else 0.0, cfg.x_max if cfg.x_max is not None else 30.0
            grid = Grid1D.decaying(lo, hi, cfg.points or 1501)
            u = solitons.shg_one_soliton(solitons.ShgSolitonSpec(alpha, A, cfg.beta), grid, cfg.t).values
            w = lambda x, t: solitons.shg_w_one(alpha, A, x, t)
            res = pde.residual(
                "sinh_gordon", lambda x, t: 2 * w(x, t) / cfg.beta, cfg.t, grid, pde.PdeParams(beta=cfg.beta), scheme="probe"
            )
            mask = np.ones(grid.n, dtype=bool)
            meta.update(alpha=alpha, A=A)
            tol = 1e-6
        else:
            (a1, a2), (A1, A2) = cfg.alpha or (1.5, 0.5), cfg.A or (0.3, 0.2)
            lo, hi = cfg.x_min if cfg.x_min is not None else -15.0, cfg.x_max if cfg.x_max is not None else 15.0
            grid = Grid1D.decaying(lo, hi, cfg.points or 3001)
            phi, mask, res = solitons.shg_two_soliton_bianchi(a1, a2, A1, A2, grid, cfg.t, cfg.beta)
            u = phi.values
            meta.update(alpha=(a1, a2), A=(A1, A2))
            tol = 1e-5
    meta.update(residual=res, tolerance=tol, masked_points=int((~mask).sum()), min=float(np.min(u)), max=float(np.max(u)))
    rows = zip(grid.x, u, mask)
    files = {"profile.csv": csv_text(["x", "u", "unmasked"], rows), "meta.json": json_text(meta)}
    return RunResult(files, f"{cfg.eq} n={cfg.n}: min {fmt(np.min(u))}, residual {res:.3e}", res <= tol)


def _lattice_init(cfg: EvolveConfig):
    from . import lattice

    kind = cfg.init.get("type", "random")
    params = cfg.init.get("params", {})
    rng = np.random.default_rng(cfg.seed)
    if cfg.model == "toda":
        if kind == "zero":
            return lattice.TodaState(np.zeros(cfg.N), np.zeros(cfg.N), cfg.boundary)
        if kind == "random":
            sc = params.get("scale", 0.5)
            return lattice.TodaState(sc * rng.normal(size=cfg.N), sc * rng.normal(size=cfg.N), cfg.boundary)
    else:
        if kind == "zero":
            return lattice.DnlsState(np.zeros(cfg.N, complex), np.zeros(cfg.N, complex))
        if kind == "random":
            a = params.get("amplitude", 0.05)
            z = lambda: a * (rng.normal(size=cfg.N) + 1j * rng.normal(size=cfg.N))
            return lattice.DnlsState(z(), z())
    raise ConfigError(f"unknown init type {kind!r} for {cfg.model}")


def _pde_init(cfg: EvolveConfig, grid):
    from . import solitons

    kind = cfg.init.get("type", "default")
    p = cfg.init.get("params", {})
    x = grid.x
    if kind == "zero":
        from .pde import FIELDS

        return {name: np.zeros(grid.n) for name in FIELDS[cfg.model]}
    if cfg.model == "kdv" and kind in ("default", "soliton"):
        spec = solitons.KdvSolitonSpec(p.get("c", 4.0), p.get("x0", 0.0))
        return {"u": solitons.kdv_soliton_value(spec, x, 0.0)}
    if cfg.model == "mkdv" and kind in ("default", "fourier"):
        cos, sin = p.get("cos", [0.5, 0.0]), p.get("sin", [0.0, 0.2])
        k = np.pi / cfg.L
        v = sum(a * np.cos((j + 1) * k * x) for j, a in enumerate(cos))
        v = v + sum(a * np.sin((j + 1) * k * x) for j, a in enumerate(sin))
        return {"v": v}
    if cfg.model == "nls_pair" and kind in ("default", "sech"):
        a, ah, s = p.get("a", 0.5), p.get("ah", 0.4), p.get("shift", 0.5)
        return {"u": a / np.cosh(x), "uh": ah / np.cosh(x + s)}
    if cfg.model in ("sinh_gordon", "liouville") and kind in ("default", "gaussian"):
        a, wdt = p.get("amp", 0.5), p.get("width", 2.0)
        return {"phi": a * np.exp(-((x / wdt) ** 2)), "pi": np.zeros(grid.n)}
    raise ConfigError(f"unknown init type {kind!r} for {cfg.model}")


def run_evolve(cfg: EvolveConfig) -> RunResult:
    if cfg.model in ("toda", "dnls"):
        from . import lattice

        s = _lattice_init(cfg)
        tr = lattice.evolve(s, cfg.dt, cfg.n_steps, sample_every=cfg.sample_every, variant=cfg.variant)
        rows, crow = [], []
        for t, st in zip(tr.t, tr.states):
            if cfg.model == "toda":
                rows += [(t, j, st.q[j], st.p[j]) for j in range(st.N)]
                q = lattice.toda_monodromy_charges(st) if st.boundary == "periodic" else lattice.toda_trace_charges(st, 4)
                crow.append((t, *q))
            else:
                rows += [(t, j, st.x[j].real, st.x[j].imag, st.X[j].real, st.X[j].imag) for j in range(st.N)]
                crow.append((t, *(v.real for v in lattice.dnls_charges(st))))
        if cfg.model == "toda":
            head = ["t", "site", "q", "p"]
            chead = ["t", "t1", "t2", "I1", "I2"] if s.boundary == "periodic" else ["t", "trL1", "trL2", "trL3", "trL4"]
        else:
            head = ["t", "site", "x_re", "x_im", "X_re", "X_im"]
            chead = ["t", "I1", "I2", "I3"]
        c = np.array([r[1:] for r in crow])
        drift = float(np.max(np.abs(c - c[0]) / np.maximum(np.abs(c[0]), 1e-300))) if len(c) > 1 else 0.0
        files = {"trajectory.csv": csv_text(head, rows), "charges.csv": csv_text(chead, crow)}
        files["meta.json"] = json_text({"max_relative_charge_drift": drift, "samples": len(tr.t)})
        return RunResult(files, f"{cfg.model}: {len(tr.t)} samples, max relative charge drift {drift:.3e}")

    from . import pde
    from .fields import Grid1D

    grid = Grid1D.periodic(cfg.L, cfg.n)
    state = _pde_init(cfg, grid)
    params = pde.PdeParams(beta=cfg.beta, c=cfg.c, kcut=cfg.kcut)
    tr = pde.evolve(cfg.model, state, grid, cfg.dt, cfg.n_steps, params, sample_every=cfg.sample_every)
    rows = []
    for t, snap in zip(tr.t, tr.snapshots):
        for name, vals in snap.items():
            vals = np.asarray(vals)
            rows += [(t, name, xi, vi.real, vi.imag) for xi, vi in zip(grid.x, vals.astype(complex))]
    meta = {"samples": len(tr.t), "max_abs_final": {k: float(np.max(np.abs(v))) for k, v in tr.snapshots[-1].items()}}
    if cfg.model == "kdv" and cfg.init.get("type", "default") in ("default", "soliton"):
        from . import solitons

        p = cfg.init.get("params", {})
        spec = solitons.KdvSolitonSpec(p.get("c", 4.0), p.get("x0", 0.0))
        meta["translation_error"] = float(np.max(np.abs(tr.snapshots[-1]["u"] - solitons.kdv_soliton_value(spec, grid.x, tr.t[-1]))))
    files = {"trajectory.csv": csv_text(["t", "field", "x", "re", "im"], rows), "meta.json": json_text(meta)}
    return RunResult(files, f"{cfg.model}: {len(tr.t)} snapshots up to t={fmt(tr.t[-1])}")


def run_charges(cfg: ChargesConfig) -> RunResult:
    from . import charges as ch
    from .fields import Grid1D, ScalarField

    if cfg.scheme == "gardner":
        seq = ch.gardner_densities(cfg.n_max)
    elif cfg.scheme == "gamma":
        seq = ch.riccati_gamma(cfg.n_max)
    else:
        seq = ch.akns_wz(cfg.n_max)[1]
    grid = Grid1D.periodic(cfg.L, cfg.n)
    x = grid.x
    u = ScalarField(grid, cfg.u_amp * np.exp(1j * cfg.u_phase * x) / np.cosh(x))
    uh = ScalarField(grid, cfg.uh_amp / np.cosh(x - cfg.uh_shift)) if cfg.mode == "independent" else None
    f = ch.bind_fields(u, cfg.mode, uh)
    if cfg.scheme == "gamma":
        vals = ch.gamma_charges(f, grid, cfg.n_max)
    elif cfg.scheme == "akns_z":
        vals = ch.z_charges(f, grid, cfg.n_max)
    else:
        vals = [ch.integrate_density(d, f, grid) for d in seq.densities]
    lines = [f"{seq.scheme}[{i}] = {d.to_ascii()}" for i, d in zip(seq.indices(), seq.densities)]
    rows = [(i, complex(v).real, complex(v).imag) for i, v in zip(seq.indices(), vals)]
    files = {"densities.txt": "\n".join(lines) + "\n", "charges.csv": csv_text(["n", "value_re", "value_im"], rows)}
    return RunResult(files, "\n".join(lines))


def run_glm(cfg: GlmConfig) -> RunResult:
    from . import glm
    from .fields import Grid1D

    if cfg.kernel == "discrete":
        spec = glm.DiscreteKernelSpec(cfg.kappa, cfg.b, cfg.alpha)
        grid = Grid1D.decaying(cfg.x_min, cfg.x_max, cfg.points or 401)
        r = glm.glm_discrete(spec, cfg.t, grid)
        rows = zip(grid.x, r.u.values, r.K_diag.values)
        ident = float(np.max(np.abs(r.K_diag.values - r.K_logdet.values))) if spec.N else 0.0
        meta = {"N": spec.N, "Lambda": spec.Lambda.tolist(), "trace_identity_error": ident}
        if spec.N == 1:
            err = float(np.max(np.abs(r.u.values - glm.one_soliton_oracle(cfg.kappa[0], cfg.b[0], grid.x, cfg.t, cfg.alpha))))
            meta["oracle_error"] = err
        files = {"glm.csv": csv_text(["x", "u", "K"], rows), "meta.json": json_text(meta)}
        return RunResult(files, f"discrete N={spec.N}: min u {fmt(float(np.min(r.u.values)))}")
    ker = glm.airy_kernel(cfg.t)
    xs = np.linspace(cfg.x_min, cfg.x_max, cfg.points or 21)
    K, u, cond = glm.glm_nystrom(ker, xs, h=cfg.h)
    meta = {"L_cut": ker.L_cut, "nu": ker.meta["nu"], "max_condition_number": cond, "h": cfg.h}
    files = {"glm.csv": csv_text(["x", "u", "K"], zip(xs, u, K)), "meta.json": json_text(meta)}
    return RunResult(files, f"airy t={fmt(cfg.t)}: L_cut {ker.L_cut:.6g}, max cond {cond:.3e}")


def run_bt(cfg: BtConfig) -> RunResult:
    from . import solitons
    from .fields import Grid1D

    def window(lo, hi):
        return Grid1D.decaying(cfg.x_min if cfg.x_min is not None else lo, cfg.x_max if cfg.x_max is not None else hi, cfg.points)

    if cfg.model == "kdv":
        grid = window(1.0, 15.0)
        run = solitons.kdv_bt_ode(cfg.parameter or 1.0, grid, cfg.t, cfg.A, cfg.shift)
        checks = {"residual": (run.residual, 1e-6), "ode_error": (run.metadata["ode_error"], 1e-6)}
    elif cfg.model == "shg":
        grid = window(0.0, 30.0)
        alpha = cfg.parameter or 2.0
        A = cfg.A if cfg.A > 0 else 0.5
        spec = solitons.ShgSolitonSpec(alpha, A)
        phi = solitons.shg_one_soliton(spec, grid, cfg.t)
        w = lambda x, t: solitons.shg_w_one(alpha, A, x, t)
        bt = solitons.shg_bt_residual(w, lambda x, t: 0 * x, alpha, grid.x, cfg.t)
        run = solitons.BtRun("shg", alpha, "zero", {"phi": phi}, bt, {"A": A})
        checks = {"bt_residual": (bt, 1e-8)}
    elif cfg.model == "nls":
        grid = window(0.5, 10.0)
        run = solitons.nls_bt_soliton(cfg.parameter or 1.0, cfg.shift, grid, cfg.t)
        run.metadata.pop("sampler", None)
        checks = {"residual": (run.residual, 1e-5)}
    else:
        grid = window(1.0, 10.0)
        run = solitons.liouville_from_free(lambda z: 0 * z, lambda z: 0 * z, cfg.parameter or 0.7, grid, cfg.t)
        checks = {"residual": (run.residual, 1e-5), "bt_residual": (run.metadata["bt_residual"], 1e-6)}
    names = sorted(run.output)
    cols = [np.asarray(run.output[k].values) for k in names]
    header = ["x"]
    for k, c in zip(names, cols):
        header += [f"{k}_re", f"{k}_im"] if np.iscomplexobj(c) else [k]
    rows = []
    for i, xi in enumerate(grid.x):
        row = [xi]
        for c in cols:
            row += [c[i].real, c[i].imag] if np.iscomplexobj(c) else [c[i]]
        rows.append(row)
    meta = {k: v for k, v in run.metadata.items() if not callable(v)}
    meta.update(model=run.model, parameter=run.parameter, seed=run.seed, checks={k: list(v) for k, v in checks.items()})
    ok = all(v <= tol for v, tol in checks.values())
    summary = ", ".join(f"{k} {v:.3e}" for k, (v, _) in checks.items())
    return RunResult({"bt.csv": csv_text(header, rows), "meta.json": json_text(meta)}, f"{cfg.model}: {summary}", ok)


def run_laxcheck(cfg: LaxcheckConfig) -> RunResult:
    from . import laxpairs

    if cfg.model == "kdv":
        k = laxpairs.kdv_lax_coefficients(cfg.a)
        lower = [k.commutator.coeff(i) for i in (1, 2, 3)]
        ok = all(p.is_zero() for p in lower)
        text = f"f = {k.f.to_ascii()}\ng = {k.g.to_ascii()}\nu_t = {k.eom.to_ascii()}\nderivative terms zero: {ok}\n"
        return RunResult({"laxcheck.txt": text}, text.rstrip(), ok)
    p = laxpairs.builtin_lax(cfg.model)
    res = laxpairs.reduced_residual(p)
    text = f"residual: {res.to_ascii() if not res.is_zero() else '0'}\n" + "\n".join(p.eom_ascii()) + "\n"
    return RunResult({"laxcheck.txt": text}, text.rstrip(), res.is_zero())


def run_verify(cfg: VerifyConfig) -> RunResult:
    from .verify import golden_table, render, run_suite

    checks = run_suite(cfg.suite)
    text = render(checks)
    if cfg.suite == "charges":
        text = "".join(f"{lab}: {comp}  (golden {gold})\n" for lab, comp, gold, _ in golden_table()) + text
    rows = [(c.criterion, c.name, c.measured, c.tolerance, "PASS" if c.passed else "FAIL") for c in checks]
    files = {"report.csv": csv_text(["criterion", "check", "measured", "tolerance", "status"], rows)}
    return RunResult(files, text.rstrip(), all(c.passed for c in checks))


RUNNERS = {
    "soliton": run_soliton,
    "evolve": run_evolve,
    "charges": run_charges,
    "glm": run_glm,
    "bt": run_bt,
    "laxcheck": run_laxcheck,
    "verify": run_verify,
}


# argument handling ---------------------------------------------------------------
def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="solitonlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, cls in CONFIGS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with config keys")
        p.add_argument("--out", default="out", help="output root (default: out)")
        p.add_argument("--dry-run", action="store_true", help="validate the config and stop")
        p.add_argument("--sweep", help="param=a,b,c: one run per value")
        for f in dataclasses.fields(cls):
            p.add_argument(f"--{f.name}", dest=f"cfg_{f.name}", default=argparse.SUPPRESS)
    return ap


def _load_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    data.pop("command", None)
    return data


def _threads() -> int:
    raw = os.environ.get("SOLITONLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"SOLITONLAB_THREADS must be an integer, got {raw!r}") from None
    _need(n >= 1, "SOLITONLAB_THREADS must be >= 1")
    return n


def _execute(command: str, cfg):
    """Worker body; returns (result, error message)."""
    try:
        return RUNNERS[command](cfg), None
    except (SolitonLabError, ValueError, ArithmeticError) as e:
        return None, f"{type(e).__name__}: {e}"


def _write(outdir: Path, cfg, result: RunResult | None):
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config.json").write_text(json_text(config_dict(cfg)))
    if result is not None:
        for name, text in result.files.items():
            with open(outdir / name, "w", newline="\n") as fh:
                fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    command = args.command
    flags = {k[4:]: v for k, v in vars(args).items() if k.startswith("cfg_")}
    try:
        base = _load_file(args.config)
        sweep_key, sweep_vals = None, [None]
        if args.sweep:
            key, _, vals = args.sweep.partition("=")
            _need(key in {f.name for f in dataclasses.fields(CONFIGS[command])} and vals, f"bad --sweep {args.sweep!r}")
            sweep_key, sweep_vals = key, [v for v in vals.split(",") if v]
        configs = []
        for v in sweep_vals:
            extra = {} if sweep_key is None else {sweep_key: v}
            configs.append(build_config(command, base, {**flags, **extra}))
        threads = _threads()
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if args.dry_run:
        for cfg in configs:
            print(json_text(config_dict(cfg)), end="")
        return EXIT_OK

    stamp = datetime.now().strftime("%Y%m%d-%H%M%S-%f")
    root = Path(args.out) / command / stamp
    if threads > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(configs))) as pool:
            outcomes = list(pool.map(_execute, [command] * len(configs), configs))
    else:
        outcomes = [_execute(command, cfg) for cfg in configs]

    code = EXIT_OK
    for v, cfg, (result, err) in zip(sweep_vals, configs, outcomes):
        outdir = root if sweep_key is None else root / f"{sweep_key}={v}"
        _write(outdir, cfg, result)
        if sweep_key is not None:
            print(f"[{sweep_key}={v}]")
        if err is not None:
            print(f"error: {err}", file=sys.stderr)
            code = EXIT_FAIL
            continue
        print(result.summary)
        if not result.ok:
            code = EXIT_FAIL
    print(f"output: {root}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
