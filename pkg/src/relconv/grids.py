"""Uniform grids: the 1-D representation grid and boxes for X- and G-kernels.

All quadrature in the package is the trapezoid rule on these grids; for the
smooth, boundary-decayed integrands used throughout, that is spectrally
accurate.  Grid functions (kernels, coefficient functions) are plain complex
sample arrays paired with their grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class RepGrid:
    """Uniform 1-D grid carrying the representation space.

    The weighted inner product is ``<u, v> = spacing * sum conj(u_i) v_i``
    (conjugation on the first slot).
    """

    t_min: float
    t_max: float
    n_points: int

    def __post_init__(self) -> None:
        if self.n_points < 8:
            raise ValueError("representation grid needs at least 8 points")
        if not self.t_max > self.t_min:
            raise ValueError("t_max must exceed t_min")

    @property
    def spacing(self) -> float:
        return (self.t_max - self.t_min) / (self.n_points - 1)

    @cached_property
    def points(self) -> np.ndarray:
        t = np.linspace(self.t_min, self.t_max, self.n_points)
        t.flags.writeable = False
        return t

    @cached_property
    def angular_freqs(self) -> np.ndarray:
        """Angular FFT frequencies (rad per unit t) for band-limited shifts."""
        w = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)
        w.flags.writeable = False
        return w

    def refined(self, factor: int = 2) -> "RepGrid":
        """Same interval with ``factor``-times the point density."""
        return RepGrid(self.t_min, self.t_max, (self.n_points - 1) * factor + 1)


@dataclass(frozen=True)
class Axis:
    """One uniform axis of a box grid."""

    lo: float
    hi: float
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("axis needs at least 2 points")
        if not self.hi > self.lo:
            raise ValueError("axis upper bound must exceed lower bound")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @cached_property
    def points(self) -> np.ndarray:
        p = np.linspace(self.lo, self.hi, self.n)
        p.flags.writeable = False
        return p

    @cached_property
    def trap_weights(self) -> np.ndarray:
        """Trapezoid weights including the spacing factor."""
        w = np.full(self.n, self.spacing)
        w[0] *= 0.5
        w[-1] *= 0.5
        w.flags.writeable = False
        return w

    def refined(self, factor: int = 2) -> "Axis":
        return Axis(self.lo, self.hi, (self.n - 1) * factor + 1)


@dataclass(frozen=True)
class BoxGrid:
    """Tensor-product uniform grid over a box in R^d."""

    axes: tuple[Axis, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "axes", tuple(self.axes))

    @classmethod
    def cube(cls, lo: float, hi: float, n: int, ndim: int) -> "BoxGrid":
        return cls(tuple(Axis(lo, hi, n) for _ in range(ndim)))

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.n for a in self.axes)

    def meshes(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*(a.points for a in self.axes), indexing="ij"))

    @cached_property
    def weights(self) -> np.ndarray:
        """Full tensor-product trapezoid weight array (includes spacings)."""
        w = self.axes[0].trap_weights
        for a in self.axes[1:]:
            w = np.multiply.outer(w, a.trap_weights)
        w.flags.writeable = False
        return w

    def stacked_points(self) -> np.ndarray:
        """All nodes as an array of shape ``shape + (ndim,)``."""
        return np.stack(self.meshes(), axis=-1)

    def integrate(self, samples: np.ndarray) -> complex:
        return complex(np.sum(self.weights * samples))

    def refined(self, factor: int = 2) -> "BoxGrid":
        return BoxGrid(tuple(a.refined(factor) for a in self.axes))

    def describe(self) -> str:
        return "x".join(f"[{a.lo:g},{a.hi:g}]:{a.n}" for a in self.axes)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples on a box grid; zero outside the box by definition."""

    samples: np.ndarray
    grid: BoxGrid

    def __post_init__(self) -> None:
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != self.grid.shape:
            raise ValueError(f"samples shape {s.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("grid function samples must be finite")
        object.__setattr__(self, "samples", s)

    def l1(self) -> float:
        """Trapezoid integral of |samples|."""
        return float(np.sum(self.grid.weights * np.abs(self.samples)))

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples)))


# Semantic aliases: kernels live on X- or G-boxes, coefficient functions on
# either; all share the sampled representation.
KernelOnX = GridFunction
KernelOnG = GridFunction
CoefficientFunction = GridFunction


def sample_on(grid: BoxGrid, fn) -> GridFunction:
    """Sample a callable f(*meshes) -> complex array on the grid."""
    values = np.asarray(fn(*grid.meshes()), dtype=complex)
    values = np.broadcast_to(values, grid.shape).copy()
    return GridFunction(values, grid)
