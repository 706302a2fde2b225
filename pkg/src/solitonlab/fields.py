"""Uniform 1-D grids, sampled fields and spatial derivative schemes."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .errors import BoundaryViolation, GridMismatch, UnsupportedBoundary

DECAY_TOL = 1e-10


@dataclass(frozen=True)
class Grid1D:
    x0: float
    dx: float
    n: int
    boundary: str = "periodic"

    def __post_init__(self):
        if self.dx <= 0:
            raise ValueError("dx must be positive")
        if self.n < 8:
            raise ValueError("grid needs at least 8 points")
        if self.boundary not in ("periodic", "decaying"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @classmethod
    def periodic(cls, L: float, n: int) -> "Grid1D":
        """Periodic box [-L, L) with n points."""
        return cls(-L, 2.0 * L / n, n, "periodic")

    @classmethod
    def decaying(cls, a: float, b: float, n: int) -> "Grid1D":
        """Closed interval [a, b] with n points, both ends included."""
        return cls(a, (b - a) / (n - 1), n, "decaying")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.dx * self.n

    @property
    def spectral_ok(self) -> bool:
        return self.boundary == "periodic" and self.n & (self.n - 1) == 0

    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.n,):
            raise GridMismatch(f"expected {self.grid.n} values, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid1D, fn) -> "ScalarField":
        return cls(grid, np.asarray(fn(grid.x)))

    def derivative(self, order: int = 1, scheme: str = "spectral") -> "ScalarField":
        return ScalarField(self.grid, derivative(self.values, self.grid, order, scheme))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def spectral_derivative(values: np.ndarray, grid: Grid1D, order: int = 1) -> np.ndarray:
    if grid.boundary != "periodic":
        raise UnsupportedBoundary("spectral derivatives need a periodic grid")
    if order == 0:
        return np.array(values, copy=True)
    k = grid.wavenumbers()
    mult = (1j * k) ** order
    if order % 2 == 1 and grid.n % 2 == 0:
        mult[grid.n // 2] = 0.0
    out = np.fft.ifft(mult * np.fft.fft(values))
    return out if np.iscomplexobj(values) else out.real


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple, order: int) -> np.ndarray:
    """Finite-difference weights for the given stencil offsets (in units of h)."""
    s = np.asarray(offsets, dtype=float)
    m = len(s)
    vander = np.vander(s, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[order] = factorial(order)
    return np.linalg.solve(vander, rhs)


def _central_offsets(order: int, accuracy: int = 4) -> tuple:
    half = (order + 1) // 2 - 1 + accuracy // 2
    return tuple(range(-half, half + 1))


def fd4_derivative(values: np.ndarray, grid: Grid1D, order: int = 1) -> np.ndarray:
    """Fourth-order finite differences; one-sided stencils at the edges of decaying grids."""
    if order == 0:
        return np.array(values, copy=True)
    vals = np.asarray(values)
    h = grid.dx
    offs = _central_offsets(order)
    w = fd_weights(offs, order)
    if grid.boundary == "periodic":
        out = sum(wi * np.roll(vals, -o) for wi, o in zip(w, offs))
        return out / h**order
    n = vals.shape[0]
    half = offs[-1]
    out = np.empty_like(vals, dtype=np.result_type(vals, float))
    inner = slice(half, n - half)
    out[inner] = sum(wi * vals[half + o : n - half + o] for wi, o in zip(w, offs))
    width = order + 4
    if n < width:
        raise GridMismatch("grid too short for the edge stencils")
    for i in list(range(half)) + list(range(n - half, n)):
        start = min(max(i - width // 2, 0), n - width)
        local = tuple(j - i for j in range(start, start + width))
        out[i] = np.dot(fd_weights(local, order), vals[start : start + width])
    return out / h**order


def derivative(values: np.ndarray, grid: Grid1D, order: int = 1, scheme: str = "spectral") -> np.ndarray:
    if scheme == "spectral":
        return spectral_derivative(values, grid, order)
    if scheme == "fd4":
        return fd4_derivative(values, grid, order)
    raise ValueError(f"unknown derivative scheme {scheme!r}")


def probe_derivative(fn, x: np.ndarray, order: int, h: float = 2e-3) -> np.ndarray:
    """Fourth-order central difference of a callable, sampled at x + k*h."""
    if order == 0:
        return np.asarray(fn(x))
    offs = _central_offsets(order)
    w = fd_weights(offs, order)
    return sum(wi * np.asarray(fn(x + o * h)) for wi, o in zip(w, offs)) / h**order


def time_derivative(fn, t: float, order: int = 1, h: float = 1e-3):
    """Fourth-order central difference in t of fn(t) (array valued)."""
    offs = _central_offsets(order)
    w = fd_weights(offs, order)
    return sum(wi * np.asarray(fn(t + o * h)) for wi, o in zip(w, offs)) / h**order


def check_decay(values: np.ndarray, tol: float = DECAY_TOL) -> None:
    edge = max(abs(values[0]), abs(values[-1]))
    if edge >= tol:
        raise BoundaryViolation(f"field is {edge:.3e} at the grid edge (needs < {tol:g})")


def integrate(values: np.ndarray, grid: Grid1D, check: bool = True) -> complex:
    """Rectangle rule on periodic grids, trapezoid on decaying ones."""
    vals = np.asarray(values)
    if grid.boundary == "periodic":
        return complex(np.sum(vals) * grid.dx)
    if check:
        check_decay(vals)
    return complex(np.trapezoid(vals, dx=grid.dx))
