"""Analytic kernel families for operator assembly and bound sweeps.

Each family is a callable that evaluates the kernel at arbitrary points (so
translated copies can be sampled exactly) plus a ``sample`` helper producing
a :class:`~relconv.grids.GridFunction` on a box.  The band-limited family
carries a Gaussian envelope so that division by the (Gaussian-decaying)
autocorrelation function still leaves a decaying kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import BoxGrid, GridFunction, sample_on


@dataclass(frozen=True)
class GaussianKernel:
    """k(x) = amplitude * exp(-|x - center|^2 / (2 sigma^2)) on R^d."""

    sigma: float = 1.0
    amplitude: complex = 1.0
    center: tuple[float, ...] = (0.0, 0.0)

    def __call__(self, *coords: np.ndarray) -> np.ndarray:
        if len(coords) != len(self.center):
            raise ValueError(f"kernel is {len(self.center)}-dimensional")
        r2 = sum((c - c0) ** 2 for c, c0 in zip(coords, self.center))
        return self.amplitude * np.exp(-0.5 * r2 / self.sigma**2)

    def sample(self, grid: BoxGrid) -> GridFunction:
        return sample_on(grid, self)


@dataclass(frozen=True, eq=False)
class BandLimitedKernel:
    """Seeded random trigonometric polynomial under a Gaussian envelope.

    k(x) = amplitude * exp(-|x|^2 / (2 env_sigma^2))
           * sum_m c_m exp(i omega_m . x),

    with modes on the integer lattice |m_i| <= n_modes scaled to |omega_m|
    <= max_freq per axis and complex-Gaussian coefficients drawn once from
    the seed.  Frequency content is bounded by construction, so grid
    sampling at the default resolutions is alias-free.
    """

    seed: int
    ndim: int = 2
    n_modes: int = 3
    max_freq: float = 1.5
    env_sigma: float = 1.0
    amplitude: complex = 1.0
    real_part_only: bool = False
    _coeffs: np.ndarray = field(init=False, repr=False)
    _freqs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        rng = np.random.default_rng(self.seed)
        grid = np.arange(-self.n_modes, self.n_modes + 1)
        mesh = np.meshgrid(*([grid] * self.ndim), indexing="ij")
        modes = np.stack([m.ravel() for m in mesh], axis=-1)  # (M, ndim)
        coeffs = rng.normal(size=len(modes)) + 1j * rng.normal(size=len(modes))
        coeffs /= np.sqrt(len(modes))
        object.__setattr__(self, "_freqs", modes * (self.max_freq / max(self.n_modes, 1)))
        object.__setattr__(self, "_coeffs", coeffs)

    def __call__(self, *coords: np.ndarray) -> np.ndarray:
        if len(coords) != self.ndim:
            raise ValueError(f"kernel is {self.ndim}-dimensional")
        pts = np.stack(np.broadcast_arrays(*coords), axis=-1)
        phases = pts @ self._freqs.T  # (..., M)
        osc = np.exp(1j * phases) @ self._coeffs
        if self.real_part_only:
            osc = osc.real.astype(complex)
        r2 = sum(np.asarray(c, dtype=float) ** 2 for c in coords)
        return self.amplitude * np.exp(-0.5 * r2 / self.env_sigma**2) * osc

    def sample(self, grid: BoxGrid) -> GridFunction:
        return sample_on(grid, self)


@dataclass(frozen=True)
class DeltaKernel:
    """Discrete point mass: weight 1 at the grid node nearest ``position``.

    Sampling normalizes by the node's trapezoid weight so the kernel
    integrates to exactly 1; through the operator assembly it reproduces a
    single pi(s(x_node)).
    """

    position: tuple[float, ...] = (0.0, 0.0)

    def sample(self, grid: BoxGrid) -> GridFunction:
        if grid.ndim != len(self.position):
            raise ValueError(f"delta is {len(self.position)}-dimensional")
        idx = tuple(
            int(np.argmin(np.abs(ax.points - p)))
            for ax, p in zip(grid.axes, self.position)
        )
        values = np.zeros(grid.shape, dtype=complex)
        values[idx] = 1.0 / grid.weights[idx]
        return GridFunction(values, grid)

    def node(self, grid: BoxGrid) -> tuple[float, ...]:
        """The actual node the mass lands on."""
        return tuple(
            float(ax.points[int(np.argmin(np.abs(ax.points - p)))])
            for ax, p in zip(grid.axes, self.position)
        )


def make_kernel(family: str, *, seed: int = 0, ndim: int = 2, **params):
    """Config-facing factory: family is 'gaussian', 'band-limited-random' or 'delta'."""
    if family == "gaussian":
        sigma = float(params.pop("sigma", 1.0))
        amplitude = complex(params.pop("amplitude", 1.0))
        center = tuple(params.pop("center", (0.0,) * ndim))
        _reject_extras(family, params)
        return GaussianKernel(sigma=sigma, amplitude=amplitude, center=center)
    if family == "band-limited-random":
        kwargs = {
            "n_modes": int(params.pop("n_modes", 3)),
            "max_freq": float(params.pop("max_freq", 1.5)),
            "env_sigma": float(params.pop("env_sigma", 1.0)),
            "amplitude": complex(params.pop("amplitude", 1.0)),
            "real_part_only": bool(params.pop("real_part_only", False)),
        }
        _reject_extras(family, params)
        return BandLimitedKernel(seed=seed, ndim=ndim, **kwargs)
    if family == "delta":
        position = tuple(params.pop("position", (0.0,) * ndim))
        _reject_extras(family, params)
        return DeltaKernel(position=position)
    raise ValueError(f"unknown kernel family {family!r}")


def _reject_extras(family: str, params: dict) -> None:
    if params:
        raise ValueError(f"unknown parameters for kernel family {family!r}: {sorted(params)}")
