"""Lax pair registry, symbolic zero-curvature checks, dressing and monodromy."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Mapping, Sequence

import numpy as np
import sympy as sp

from .diffpoly import (
    DiffOperator,
    DiffPoly,
    JetVar,
    LambdaMatrix,
    commutator,
    jet,
    op_commutator,
    op_compose,
)
from .errors import GridMismatch, UnknownModel
from .fields import fd_weights, _central_offsets
from .fields import Grid1D

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class MatrixLaxPair:
    name: str
    U: LambdaMatrix
    V: LambdaMatrix
    field_alphabet: tuple
    eom: Mapping[JetVar, DiffPoly] = field(default_factory=dict)

    def eom_ascii(self) -> list[str]:
        return [f"{lhs} = {rhs.to_ascii()}" for lhs, rhs in sorted(self.eom.items())]


@dataclass(frozen=True)
class OperatorLaxPair:
    L: DiffOperator
    M: DiffOperator


def _nls_pair() -> MatrixLaxPair:
    u, uh = jet("u"), jet("uh")
    U = LambdaMatrix([[{1: HALF}, uh], [u, {1: -HALF}]])
    V = LambdaMatrix(
        [
            [{2: HALF, 0: -uh * u}, {1: uh, 0: uh.dx()}],
            [{1: u, 0: -u.dx()}, {2: -HALF, 0: u * uh}],
        ]
    )
    eom = {
        JetVar("u", 0, 1): -u.dx(2) + 2 * uh * u**2,
        JetVar("uh", 0, 1): uh.dx(2) - 2 * u * uh**2,
    }
    return MatrixLaxPair("nls", U, V, ("u", "uh"), eom)


def _sinh_gordon_pair() -> MatrixLaxPair:
    w = jet("w")
    ep, em = DiffPoly.exp("w", 1), DiffPoly.exp("w", -1)
    q = Fraction(1, 4)
    # 1/2 sinh(lam +- w) and 1/2 cosh(lam +- w) written in mu = e^lam
    U = LambdaMatrix(
        [
            [-HALF * w.dt(), {1: q * ep, -1: -q * em}],
            [{1: q * em, -1: -q * ep}, HALF * w.dt()],
        ],
        "mu",
    )
    V = LambdaMatrix(
        [
            [-HALF * w.dx(), {1: q * ep, -1: q * em}],
            [{1: q * em, -1: q * ep}, HALF * w.dx()],
        ],
        "mu",
    )
    eom = {JetVar("w", 0, 2): w.dx(2) + q * DiffPoly.exp("w", 2) - q * DiffPoly.exp("w", -2)}
    return MatrixLaxPair("sinh_gordon", U, V, ("w",), eom)


def _liouville_pair(flipped: bool = False) -> MatrixLaxPair:
    phi, c = jet("tphi"), jet("c")
    e = DiffPoly.exp("tphi", 1)
    s12 = 1 if flipped else -1
    U = LambdaMatrix(
        [[-HALF * phi.dt(), {-1: -c * e}], [{1: -c * e}, HALF * phi.dt()]],
        "mu",
    )
    V = LambdaMatrix(
        [[-HALF * phi.dx(), {-1: s12 * c * e}], [{1: c * e}, HALF * phi.dx()]],
        "mu",
    )
    eom = {JetVar("tphi", 0, 2): phi.dx(2) - 4 * c**2 * DiffPoly.exp("tphi", 2)}
    return MatrixLaxPair("liouville_flipped" if flipped else "liouville", U, V, ("tphi", "c"), eom)


def _free_pair() -> MatrixLaxPair:
    phi = jet("phi")
    U = LambdaMatrix.identity().scale(-HALF * phi.dt())
    V = LambdaMatrix.identity().scale(-HALF * phi.dx())
    return MatrixLaxPair("free", U, V, ("phi",), {JetVar("phi", 0, 2): phi.dx(2)})


def _akns_pair(n: int = 3) -> MatrixLaxPair:
    h = akns_hierarchy(n)
    return MatrixLaxPair(f"akns", akns_U(), h.V[n], ("u", "uh"), h.eom_rules(n))


BUILTIN = {
    "nls": _nls_pair,
    "sinh_gordon": _sinh_gordon_pair,
    "liouville": _liouville_pair,
    "liouville_flipped": lambda: _liouville_pair(flipped=True),
    "free": _free_pair,
    "akns": _akns_pair,
}


def builtin_lax(name: str) -> MatrixLaxPair:
    try:
        return BUILTIN[name]()
    except KeyError:
        raise UnknownModel(f"unknown Lax pair {name!r}; choose from {sorted(BUILTIN)}") from None


def zero_curvature_residual(p: MatrixLaxPair) -> LambdaMatrix:
    """d_t U - d_x V + [U, V], with time derivatives kept as t-jets."""
    return p.U.dt() - p.V.dx() + commutator(p.U, p.V)


def reduced_residual(p: MatrixLaxPair) -> LambdaMatrix:
    return zero_curvature_residual(p).reduce(p.eom)


# AKNS hierarchy -----------------------------------------------------------
def akns_U() -> LambdaMatrix:
    return LambdaMatrix([[{1: HALF}, jet("uh")], [jet("u"), {1: -HALF}]])


def _jet_monomials(fields: Sequence[str], weight: int) -> list[DiffPoly]:
    """All monomials of the given graded weight (field weight 1, each d_x weight 1)."""
    atoms = [(f, k) for f in fields for k in range(weight)]
    out = []
    for size in range(1, weight + 1):
        for combo in combinations_with_replacement(atoms, size):
            if sum(1 + k for _, k in combo) == weight:
                m = DiffPoly.const(1)
                for f, k in combo:
                    m = m * jet(f, k)
                out.append(m)
    return out


def antiderivative(target: DiffPoly, fields: Sequence[str] = ("u", "uh")) -> DiffPoly:
    """Exact x-antiderivative of a total derivative, by a homogeneous-weight ansatz."""
    if target.is_zero():
        return DiffPoly()
    ws = target.weights({f: 1 for f in fields})
    if len(ws) != 1:
        raise ValueError("target is not weight-homogeneous")
    (wt,) = ws
    basis = _jet_monomials(fields, wt - 1)
    images = [b.dx() for b in basis]
    keys = sorted({m for im in images for m in im.terms} | set(target.terms))
    A = sp.Matrix([[sp.Rational(im.terms.get(k, 0)) for im in images] for k in keys])
    rhs = sp.Matrix([sp.Rational(target.terms.get(k, 0)) for k in keys])
    try:
        sol, params = A.gauss_jordan_solve(rhs)
    except ValueError:
        raise ValueError(f"{target} is not an exact derivative") from None
    sol = sol.subs({p: 0 for p in params})
    out = DiffPoly()
    for b, cval in zip(basis, sol):
        r = sp.Rational(cval)
        out = out + b * Fraction(int(r.p), int(r.q))
    return out


@dataclass(frozen=True)
class AknsHierarchy:
    V: tuple  # V[n] for n = 0..n_max
    flows: tuple  # flows[n] = LambdaMatrix R_n with d_{t_n} Q = R_n (off-diagonal)

    def eom_rules(self, n: int) -> dict:
        R = self.flows[n]
        return {JetVar("u", 0, 1): R.coeff(1, 0), JetVar("uh", 0, 1): R.coeff(0, 1)}

    def pair(self, n: int) -> MatrixLaxPair:
        return MatrixLaxPair(f"akns_{n}", akns_U(), self.V[n], ("u", "uh"), self.eom_rules(n))


def akns_hierarchy(n_max: int) -> AknsHierarchy:
    """V^(n) = lam V^(n-1) + W_n with W_n fixed by cancelling the zero-curvature residual.

    At order lam^1 the off-diagonal part of W_n is read off from the previous flow;
    at order lam^0 the diagonal part solves d_x W_diag = [Q, W_off]_diag.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    u, uh = jet("u"), jet("uh")
    Q = LambdaMatrix([[0, uh], [u, 0]])
    V = [LambdaMatrix.sigma().scale(HALF)]
    flows = [LambdaMatrix([[0, uh], [-u, 0]])]
    for n in range(1, n_max + 1):
        R = flows[-1]
        w_off = LambdaMatrix([[0, R.coeff(0, 1)], [-R.coeff(1, 0), 0]])
        c = commutator(Q, w_off)
        w_diag = LambdaMatrix([[antiderivative(c.coeff(0, 0)), 0], [0, antiderivative(c.coeff(1, 1))]])
        V.append(V[-1].shift(1) + w_off + w_diag)
        flows.append((w_off.dx() - commutator(Q, w_diag)).off_diagonal())
    return AknsHierarchy(tuple(V), tuple(flows))


def mkdv_proportionality(n: int = 3) -> Fraction | None:
    """Ratio r with (u_t flow at uh = u) = r * (u_xxx - 6 u^2 u_x), or None."""
    flow = akns_hierarchy(n).flows[n].coeff(1, 0).substitute("uh", jet("u"))
    u = jet("u")
    ref = u.dx(3) - 6 * u**2 * u.dx()
    k = next(iter(ref.terms))
    r = flow.terms.get(k, Fraction(0)) / ref.terms[k]
    return r if r != 0 and flow == ref * r else None


# KdV operator pair --------------------------------------------------------
@dataclass(frozen=True)
class KdvLaxCoefficients:
    f: DiffPoly
    g: DiffPoly
    eom: DiffPoly
    commutator: DiffOperator


def kdv_lax_pair(a) -> OperatorLaxPair:
    a = Fraction(a)
    u = jet("u")
    L = DiffOperator([u, 0, -1])
    M = DiffOperator([-Fraction(3, 4) * a * u.dx(), -Fraction(3, 2) * a * u, 0, a])
    return OperatorLaxPair(L, M)


def kdv_lax_coefficients(a) -> KdvLaxCoefficients:
    """f, g from the requirement that [M, L] is a multiplication operator; eom = [M, L]."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be non-zero")
    u = jet("u")
    L = DiffOperator([u, 0, -1])
    # unknown f, g enter linearly: solve the d^2 and d^1 coefficients of [M, L]
    F, G = jet("a1"), jet("a0")
    M = DiffOperator([G, F, 0, a])
    C = op_commutator(M, L)
    c2 = C.coeff(2)
    k2, r2 = c2.split_linear(JetVar("a1", 1))
    f = antiderivative(-r2 / k2.constant_value(), ("u",))
    c1 = C.coeff(1).substitute("a1", f)
    k1, r1 = c1.split_linear(JetVar("a0", 1))
    g = antiderivative(-r1 / k1.constant_value(), ("u",))
    Mfg = DiffOperator([g, f, 0, a])
    comm = op_commutator(Mfg, L)
    return KdvLaxCoefficients(f, g, comm.coeff(0), comm)


@dataclass(frozen=True)
class KdvDressing:
    constraints: dict
    a1: DiffPoly
    a0: DiffPoly
    residual2: DiffOperator
    residual3: DiffOperator
    k_evolution: DiffPoly


def kdv_dressing_rules() -> dict:
    """u = 2 K_x and K_xx = u K, oriented as rewrite rules for K_x and u_x."""
    u, K = jet("u"), jet("K")
    return {JetVar("K", 1): u / 2, JetVar("u", 1): 2 * u * K}


def kdv_operator_dressing(alpha=1) -> KdvDressing:
    """Dress D2 = -d^2 and D3 = d_t - alpha d^3 with G = d_x + K."""
    alpha = Fraction(alpha)
    u, K = jet("u"), jet("K")
    G = DiffOperator([K, 1])
    D2 = DiffOperator([0, 0, -1])
    L2 = DiffOperator([u, 0, -1])
    rules = kdv_dressing_rules()
    res2 = (op_compose(G, D2) - op_compose(L2, G)).reduce(rules)

    A1, A0 = jet("a1"), jet("a0")
    D3 = DiffOperator({(0, 1): 1, (3, 0): -alpha})
    L3 = DiffOperator({(0, 1): 1, (3, 0): -alpha, (1, 0): A1, (0, 0): A0})
    raw = op_compose(G, D3) - op_compose(L3, G)
    k1, r1 = raw.coeff(2).split_linear(JetVar("a1"))
    a1 = -r1 / k1.constant_value()
    c1 = raw.coeff(1).substitute("a1", a1)
    k0, r0 = c1.split_linear(JetVar("a0"))
    a0 = -r0 / k0.constant_value()
    full = raw.map(lambda p: p.substitute("a1", a1).substitute("a0", a0))
    k_evol = -full.coeff(0)
    res3 = DiffOperator({k: v for k, v in full.terms.items() if k != (0, 0)}).reduce(rules)
    return KdvDressing(
        {"u": 2 * K.dx(), "K[2]": u * K},
        a1.reduce(rules),
        a0.reduce(rules),
        res2,
        res3,
        k_evol,
    )


# numeric monodromy ----------------------------------------------------------
def _expm4(A: np.ndarray) -> np.ndarray:
    """Degree-4 truncated exponential of a stack of 2x2 matrices."""
    I = np.broadcast_to(np.eye(2, dtype=complex), A.shape)
    A2 = A @ A
    A3 = A2 @ A
    A4 = A3 @ A
    return I + A + A2 / 2 + A3 / 6 + A4 / 24


def continuous_monodromy(U_sampled: np.ndarray, dx: float) -> np.ndarray:
    """Ordered product (right to left) of per-cell exponentials of U dx.

    ``U_sampled`` has shape (n, 2, 2) at grid points; each cell uses the midpoint
    average of its two end values.
    """
    U = np.asarray(U_sampled, dtype=complex)
    if U.ndim != 3 or U.shape[1:] != (2, 2):
        raise GridMismatch("U_sampled must have shape (n, 2, 2)")
    mids = 0.5 * (U[1:] + U[:-1]) * dx
    cells = _expm4(mids)
    T = np.eye(2, dtype=complex)
    for C in cells:
        T = C @ T
    return T


def transfer_trace_continuous(U_sampled: np.ndarray, dx: float) -> complex:
    return complex(np.trace(continuous_monodromy(U_sampled, dx)))


def nls_U_samples(u: np.ndarray, uh: np.ndarray, lam: complex) -> np.ndarray:
    n = len(u)
    out = np.zeros((n, 2, 2), dtype=complex)
    out[:, 0, 0] = lam / 2
    out[:, 1, 1] = -lam / 2
    out[:, 0, 1] = uh
    out[:, 1, 0] = u
    return out


# numeric Darboux check ------------------------------------------------------
def sample_jets(samplers: Mapping[str, Callable], needed, x: np.ndarray, t: float, h: float = 1e-3, k: float = 1e-3):
    """Values of jets f[i,j] from samplers f(x, t) by fourth-order mixed differences."""
    out = {}
    for j in needed:
        if j.constant:
            continue
        f = samplers[j.field_id]
        ox, ot = j.order, j.t_order
        wx = fd_weights(_central_offsets(ox), ox) if ox else np.array([1.0])
        sx = _central_offsets(ox) if ox else (0,)
        wt = fd_weights(_central_offsets(ot), ot) if ot else np.array([1.0])
        st = _central_offsets(ot) if ot else (0,)
        acc = 0
        for a, wa in zip(sx, wx):
            for b, wb in zip(st, wt):
                acc = acc + wa * wb * np.asarray(f(x + a * h, t + b * k))
        out[j] = acc / (h**ox * k**ot)
    return out


def lax_matrices(mat: LambdaMatrix, samplers, lam: complex, x: np.ndarray, t: float, constants=None, h=1e-3):
    needed = set()
    for i in range(2):
        for jj in range(2):
            for p in mat.entry(i, jj).values():
                needed |= p.jets()
    jets = sample_jets(samplers, needed, x, t, h, h)
    grid = Grid1D(float(x[0]), 1.0, max(len(x), 8), "decaying")
    if len(x) < 8:
        jets = {key: np.resize(np.broadcast_to(v, x.shape), 8) for key, v in jets.items()}
    out = mat.evaluate(lam, {}, grid=grid, constants=constants, jets=jets)
    return out[: len(x)]


def darboux_residual(
    pair: MatrixLaxPair,
    tilde_pair: MatrixLaxPair,
    G: Callable,
    samplers: Mapping[str, Callable],
    tilde_samplers: Mapping[str, Callable],
    lam_samples: Sequence[complex],
    x: np.ndarray,
    t: float,
    constants=None,
    h: float = 1e-3,
) -> float:
    """max over lam of |G_x - tU G + G U| and |G_t - tV G + G V| (fourth-order differences)."""
    x = np.asarray(x, dtype=float)
    worst = 0.0
    for lam in lam_samples:
        g0 = np.asarray(G(lam, x, t))
        if g0.shape != (len(x), 2, 2):
            raise GridMismatch("G sampler must return shape (n, 2, 2)")
        gx = sum(w * np.asarray(G(lam, x + o * h, t)) for w, o in zip(fd_weights((-2, -1, 0, 1, 2), 1), (-2, -1, 0, 1, 2))) / h
        gt = sum(w * np.asarray(G(lam, x, t + o * h)) for w, o in zip(fd_weights((-2, -1, 0, 1, 2), 1), (-2, -1, 0, 1, 2))) / h
        U = lax_matrices(pair.U, samplers, lam, x, t, constants, h)
        V = lax_matrices(pair.V, samplers, lam, x, t, constants, h)
        tU = lax_matrices(tilde_pair.U, tilde_samplers, lam, x, t, constants, h)
        tV = lax_matrices(tilde_pair.V, tilde_samplers, lam, x, t, constants, h)
        rx = gx - tU @ g0 + g0 @ U
        rt = gt - tV @ g0 + g0 @ V
        worst = max(worst, float(np.max(np.abs(rx))), float(np.max(np.abs(rt))))
    return worst


DEFAULT_LAMBDAS = (1.0, -1.0, 2.0, -2.0, 1j)
