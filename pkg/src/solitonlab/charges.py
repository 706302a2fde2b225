"""Conserved densities from the Gardner, Riccati and AKNS W/Z recursions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .diffpoly import DiffPoly, LambdaMatrix, jet
from .fields import Grid1D, ScalarField, check_decay, integrate

U = jet("u")
UH = jet("uh")


@dataclass(frozen=True)
class DensitySequence:
    scheme: str
    densities: tuple
    base_index: int = 0

    def __getitem__(self, n: int) -> DiffPoly:
        return self.densities[n - self.base_index]

    def __len__(self):
        return len(self.densities)

    def indices(self) -> range:
        return range(self.base_index, self.base_index + len(self.densities))

    def to_ascii(self) -> list[str]:
        return [d.to_ascii() for d in self.densities]


def gardner_densities(n_max: int) -> DensitySequence:
    """w_0 = u, w_n = -D w_{n-1} - sum_{i+j=n-2} w_i w_j."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    w = [U]
    for n in range(1, n_max + 1):
        acc = -w[n - 1].dx()
        for i in range(0, n - 1):
            acc = acc - w[i] * w[n - 2 - i]
        w.append(acc)
    return DensitySequence("gardner", tuple(w), 0)


def riccati_gamma(n_max: int) -> DensitySequence:
    """Gamma^(1) = u, Gamma^(k+1) = -D Gamma^(k) - sum_l Gamma^(l) uh Gamma^(k-l)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    g = [U]
    for k in range(1, n_max):
        acc = -g[k - 1].dx()
        for l in range(1, k):
            acc = acc - g[l - 1] * UH * g[k - l - 1]
        g.append(acc)
    return DensitySequence("gamma", tuple(g), 1)


def akns_u_parts() -> tuple[LambdaMatrix, LambdaMatrix]:
    """Diagonal (lam/2) sigma and anti-diagonal parts of the AKNS U operator."""
    ud = LambdaMatrix([[{1: DiffPoly.const("1/2")}, 0], [0, {1: DiffPoly.const("-1/2")}]])
    ua = LambdaMatrix([[0, UH], [U, 0]])
    return ud, ua


def akns_wz(n_max: int) -> tuple[list[LambdaMatrix], DensitySequence]:
    """Anti-diagonal W^(n) from the Riccati-type recursion and the Z^(n) (1,1) integrands.

    W^(n+1) sigma = -D W^(n) - sum_{m=1}^{n-1} W^(m) U_A W^(n-m).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    _, ua = akns_u_parts()
    sigma = LambdaMatrix.sigma()
    W = [ua * sigma]
    for n in range(1, n_max):
        acc = -W[n - 1].dx()
        for m in range(1, n):
            acc = acc - W[m - 1] * ua * W[n - m - 1]
        W.append(acc * sigma)
    z = tuple((ua * Wn).coeff(0, 0) for Wn in W)
    return W, DensitySequence("akns_z", z, 1)


def akns_z_matrices(n_max: int) -> list[LambdaMatrix]:
    """Full diagonal integrands U_A W^(n)."""
    W, _ = akns_wz(n_max)
    _, ua = akns_u_parts()
    return [(ua * Wn).diagonal() for Wn in W]


def specialize(d: DiffPoly, mode: str) -> DiffPoly:
    """Apply an AKNS reduction to a density over {u, uh}.

    ``conjugate`` is numeric only (handled at evaluation time), ``equal`` sets uh = u,
    ``independent`` leaves the density unchanged.
    """
    if mode == "equal":
        return d.substitute("uh", U)
    if mode in ("independent", "conjugate"):
        return d
    raise ValueError(f"unknown specialization {mode!r}")


def bind_fields(u, mode: str = "independent", uh=None) -> dict:
    if mode == "conjugate":
        vals = u.values if isinstance(u, ScalarField) else np.asarray(u)
        grid = u.grid if isinstance(u, ScalarField) else None
        uh = ScalarField(grid, np.conj(vals)) if grid else np.conj(vals)
    elif mode == "equal":
        uh = u
    elif uh is None:
        raise ValueError("independent mode needs uh")
    return {"u": u, "uh": uh}


def integrate_density(
    d: DiffPoly,
    fields: Mapping[str, object],
    grid: Grid1D,
    deriv_scheme: str = "spectral",
    **kw,
) -> complex:
    """Integral of a density; trapezoid on decaying grids, rectangle on periodic ones."""
    if grid.boundary == "decaying":
        for f in fields.values():
            check_decay(f.values if isinstance(f, ScalarField) else np.asarray(f))
    vals = d.evaluate(fields, deriv_scheme, grid=grid, **kw).values
    return integrate(vals, grid, check=False)


def gamma_charges(fields, grid: Grid1D, k_max: int, deriv_scheme: str = "spectral") -> list[complex]:
    """I^(k) = int uh Gamma^(k) dx."""
    g = riccati_gamma(k_max)
    return [integrate_density(UH * g[k], fields, grid, deriv_scheme) for k in g.indices()]


def z_charges(fields, grid: Grid1D, k_max: int, deriv_scheme: str = "spectral") -> list[complex]:
    _, z = akns_wz(k_max)
    return [integrate_density(z[k], fields, grid, deriv_scheme) for k in z.indices()]
