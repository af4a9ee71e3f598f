"""Grid realization of the Heisenberg group representation and its transforms.

Representation convention, for a group point g = (u, v, s) in exponential
coordinates and central weight lam != 0:

    [pi(u, v, s) f](t) = exp(i lam (s + u t + u v / 2)) f(t + v).

This is an exact homomorphism for the bracket orientation of
:func:`relconv.lie.heisenberg` ([e1, e2] = -e3); the homomorphism residual
is a verifiable check, not an assumption.  Translations f(t + v) use
band-limited (FFT) interpolation, which is unitary on the grid and
spectrally accurate for boundary-decayed states.

Inner product: ``<u, v> = spacing * sum conj(u_i) v_i``.  The wavelet
transform is the matrix coefficient

    [W_phi v](g) = <v, pi(g) phi>,

taken *linear in v* (conjugation falls on the pi(g) phi slot), which is the
orientation under which the composition of the contravariant and covariant
transforms is a plain scalar multiple of the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import BoxGrid, GridFunction, RepGrid
from .homogeneous import HomogeneousChart, _h_batch, section_s
from .lie import LieError, bch_multiply, inverse

#: Relative wrapped-mass threshold above which a shift sets the truncation flag.
_TRUNCATION_MASS = 1e-9

#: Kernel samples below this relative size are ignored by truncation heuristics.
_NEGLIGIBLE = 1e-13


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex samples of a representation-space vector on a RepGrid."""

    samples: np.ndarray
    grid: RepGrid
    truncated: bool = False

    def __post_init__(self) -> None:
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.grid.n_points,):
            raise ValueError(f"samples shape {s.shape} != grid size {self.grid.n_points}")
        if not np.all(np.isfinite(s)):
            raise ValueError("state samples must be finite")
        object.__setattr__(self, "samples", s)


def inner(u: StateVector, v: StateVector) -> complex:
    """Weighted inner product, conjugating the first argument."""
    if u.grid != v.grid:
        raise ValueError("states live on different grids")
    return complex(u.grid.spacing * np.vdot(u.samples, v.samples))


def norm(v: StateVector) -> float:
    return float(np.sqrt(v.grid.spacing) * np.linalg.norm(v.samples))


def normalized(v: StateVector) -> StateVector:
    n = norm(v)
    if n == 0:
        raise ValueError("cannot normalize the zero state")
    return StateVector(v.samples / n, v.grid, truncated=v.truncated)


def hermite_state(grid: RepGrid, order: int) -> StateVector:
    """Orthonormal Hermite function of the given order, grid-normalized.

    Uses the stable two-term recurrence for the L2-orthonormal family,
    then renormalizes in the grid inner product so that norm == 1 exactly.
    """
    t = grid.points
    h_prev = np.pi ** (-0.25) * np.exp(-0.5 * t * t)
    if order == 0:
        return normalized(StateVector(h_prev.astype(complex), grid))
    h = np.sqrt(2.0) * t * h_prev
    for n in range(1, order):
        h, h_prev = np.sqrt(2.0 / (n + 1)) * t * h - np.sqrt(n / (n + 1.0)) * h_prev, h
    return normalized(StateVector(h.astype(complex), grid))


def gaussian_state(grid: RepGrid) -> StateVector:
    """The default mother wavelet: the normalized Gaussian pi^(-1/4) exp(-t^2/2)."""
    return hermite_state(grid, 0)


def random_hermite_state(grid: RepGrid, seed: int, max_order: int = 8) -> StateVector:
    """Normalized random combination of Hermite functions up to max_order."""
    rng = np.random.default_rng(seed)
    coeffs = rng.normal(size=max_order + 1) + 1j * rng.normal(size=max_order + 1)
    acc = np.zeros(grid.n_points, dtype=complex)
    for n, c in enumerate(coeffs):
        acc += c * hermite_state(grid, n).samples
    return normalized(StateVector(acc, grid))


@dataclass(frozen=True, eq=False)
class SchrodingerRep:
    """Representation parameters: central weight, grid, and the group chart.

    The chart supplies the group law used by homomorphism checks and by the
    operator assembly; its algebra must be 3-dimensional with the H-block on
    the last coordinate (only the Heisenberg representation ships verified).
    """

    lam: float
    grid: RepGrid
    chart: HomogeneousChart

    def __post_init__(self) -> None:
        if self.lam == 0:
            raise ValueError("central weight lam must be nonzero")
        if self.chart.algebra.dim != 3:
            raise LieError("the grid representation requires a 3-dimensional algebra")
        if self.chart.h_indices != (2,):
            raise LieError("the grid representation requires the H-block on coordinate 2")


def _shift_samples(samples: np.ndarray, grid: RepGrid, delta: float) -> np.ndarray:
    """Band-limited circular shift: samples of f(t + delta)."""
    return np.fft.ifft(np.fft.fft(samples) * np.exp(1j * grid.angular_freqs * delta))


def _wrapped_fraction(samples: np.ndarray, grid: RepGrid, delta: float) -> float:
    """Fraction of state mass that a shift by delta carries across the boundary."""
    if delta == 0:
        return 0.0
    cells = min(int(np.ceil(abs(delta) / grid.spacing)), grid.n_points)
    zone = samples[-cells:] if delta > 0 else samples[:cells]
    total = np.linalg.norm(samples)
    if total == 0:
        return 0.0
    return float(np.linalg.norm(zone) / total)


def rep_apply(rep: SchrodingerRep, g: np.ndarray, v: StateVector) -> StateVector:
    """Apply pi(g) to a state; see the module docstring for the convention.

    Sets ``truncated`` on the result when the translation pushes a
    non-negligible part of the state across the grid boundary (the FFT shift
    wraps such mass around instead of losing it).
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (3,):
        raise LieError(f"expected a 3-coordinate group point, got shape {g.shape}")
    gu, gv, gs = g
    wrapped = _wrapped_fraction(v.samples, rep.grid, gv)
    shifted = _shift_samples(v.samples, rep.grid, gv)
    t = rep.grid.points
    phase = np.exp(1j * rep.lam * (gs + gu * t + 0.5 * gu * gv))
    return StateVector(
        phase * shifted, rep.grid,
        truncated=v.truncated or wrapped > _TRUNCATION_MASS,
    )


def wavelet_transform(rep: SchrodingerRep, v: StateVector, phi: StateVector,
                      g: np.ndarray) -> complex:
    """Matrix coefficient <v, pi(g) phi>, linear in v."""
    if norm(phi) == 0:
        raise ValueError("mother wavelet must be nonzero")
    return inner(rep_apply(rep, g, phi), v)


def _shift_bank(phi: StateVector, grid: RepGrid, shifts: np.ndarray) -> np.ndarray:
    """Stack of band-limited shifts phi(t + shift_b), shape (len(shifts), N)."""
    mult = np.exp(1j * np.outer(shifts, grid.angular_freqs))
    return np.fft.ifft(np.fft.fft(phi.samples)[None, :] * mult, axis=1)


def wavelet_map(rep: SchrodingerRep, v: StateVector, phi: StateVector,
                grid: BoxGrid) -> GridFunction:
    """Sample [W_phi v](g) on a 2-D X-box (section points) or 3-D G-box.

    For a 2-D grid the axes are (u, v) and the transform is evaluated at the
    zero-fill section points (u, v, 0); a 3-D grid adds the central
    coordinate, which only contributes the exact phase exp(-i lam s).
    """
    if grid.ndim not in (2, 3):
        raise ValueError("wavelet_map expects a 2-D X-grid or 3-D G-grid")
    uax, vax = grid.axes[0], grid.axes[1]
    lam = rep.lam
    t = rep.grid.points
    bank = _shift_bank(phi, rep.grid, vax.points)  # (B, N)
    y = np.conj(bank) * v.samples[None, :] * rep.grid.spacing  # (B, N)
    modes = np.exp(-1j * lam * np.outer(uax.points, t))  # (A, N)
    w2 = modes @ y.T  # (A, B): sum_t e^{-i lam u t} conj(phi_b) v dt
    w2 *= np.exp(-0.5j * lam * np.outer(uax.points, vax.points))
    if grid.ndim == 2:
        return GridFunction(w2, grid)
    sphase = np.exp(-1j * lam * grid.axes[2].points)
    return GridFunction(w2[:, :, None] * sphase[None, None, :], grid)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense operator on the representation grid, rows/columns in sample basis."""

    entries: np.ndarray
    grid: RepGrid
    truncated: bool = False

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        n = self.grid.n_points
        if m.shape != (n, n):
            raise ValueError(f"operator shape {m.shape} != ({n}, {n})")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "entries", m)

    def apply(self, v: StateVector) -> StateVector:
        if v.grid != self.grid:
            raise ValueError("state lives on a different grid")
        return StateVector(self.entries @ v.samples, self.grid,
                           truncated=v.truncated or self.truncated)


def _collapse_central_axis(rep: SchrodingerRep, k: GridFunction) -> GridFunction:
    """Integrate out the central coordinate of a G-kernel against exp(i lam s).

    pi(u, v, s) = exp(i lam s) pi(u, v, 0) exactly, so the G-integral
    factorizes through an effective X-kernel; this is the same trapezoid sum
    with the s-axis summed first (fixed order, deterministic).
    """
    sax = k.grid.axes[2]
    phase = np.exp(1j * rep.lam * sax.points)
    collapsed = np.einsum("abc,c->ab", k.samples, sax.trap_weights * phase)
    return GridFunction(collapsed, BoxGrid(k.grid.axes[:2]))


def _kernel_shift_extent(k: GridFunction) -> float:
    """Largest |v| translation carrying non-negligible kernel weight."""
    col_mass = np.max(np.abs(k.samples), axis=0)
    scale = float(np.max(col_mass)) if col_mass.size else 0.0
    if scale == 0.0:
        return 0.0
    active = np.abs(k.grid.axes[1].points)[col_mass > _NEGLIGIBLE * scale]
    return float(np.max(active)) if active.size else 0.0


def relative_convolution(rep: SchrodingerRep, k: GridFunction) -> OperatorMatrix:
    """Assemble pi(k) = integral over X of k(x) pi(s(x)) dx as a dense matrix.

    Trapezoid quadrature over the X-box; each pi(u, v, 0) factors into a
    diagonal phase times an FFT shift, so the quadrature nodes are contracted
    in two matrix products (sum over the u-axis first, then the v-axis)
    before a single inverse FFT produces all matrix entries.  The summation
    order is fixed, making results run-to-run deterministic.
    """
    if k.grid.ndim != 2:
        raise ValueError("relative_convolution expects a kernel on a 2-D X-grid")
    uax, vax = k.grid.axes
    lam = rep.lam
    n = rep.grid.n_points
    t = rep.grid.points

    half_phase = np.exp(0.5j * lam * np.outer(uax.points, vax.points))
    ktil = k.samples * np.outer(uax.trap_weights, vax.trap_weights) * half_phase
    modes = np.exp(1j * lam * np.outer(uax.points, t))  # (A, N)
    d = ktil.T @ modes  # (B, N): per-translation diagonal phases
    shift_modes = np.exp(1j * np.outer(vax.points, rep.grid.angular_freqs))  # (B, N)
    g = d.T @ shift_modes  # (N, N): Fourier-domain accumulation
    a = np.fft.ifft(g, axis=1)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    entries = np.take_along_axis(a, idx, axis=1)

    truncated = _kernel_shift_extent(k) > 0.5 * (rep.grid.t_max - rep.grid.t_min)
    return OperatorMatrix(entries, rep.grid, truncated=truncated)


def integrated_rep(rep: SchrodingerRep, k: GridFunction) -> OperatorMatrix:
    """Assemble pi(k) = integral over G of k(g) pi(g) dg for a 3-D G-kernel."""
    if k.grid.ndim != 3:
        raise ValueError("integrated_rep expects a kernel on a 3-D G-grid")
    return relative_convolution(rep, _collapse_central_axis(rep, k))


def contravariant_transform(rep: SchrodingerRep, k: GridFunction,
                            psi: StateVector) -> StateVector:
    """pi(k) psi by direct accumulation over quadrature nodes.

    Equivalent to ``relative_convolution(rep, k).apply(psi)`` (or the
    integrated form for G-kernels) without forming the matrix.
    """
    if k.grid.ndim == 3:
        k = _collapse_central_axis(rep, k)
    if k.grid.ndim != 2:
        raise ValueError("kernel must live on a 2-D X-grid or 3-D G-grid")
    uax, vax = k.grid.axes
    lam = rep.lam
    t = rep.grid.points

    half_phase = np.exp(0.5j * lam * np.outer(uax.points, vax.points))
    ktil = k.samples * np.outer(uax.trap_weights, vax.trap_weights) * half_phase
    modes = np.exp(1j * lam * np.outer(uax.points, t))  # (A, N)
    d = ktil.T @ modes  # (B, N)
    bank = _shift_bank(psi, rep.grid, vax.points)  # (B, N)
    out = np.einsum("bt,bt->t", d, bank)

    truncated = psi.truncated or (
        _kernel_shift_extent(k) > 0.5 * (rep.grid.t_max - rep.grid.t_min)
    )
    return StateVector(out, rep.grid, truncated=truncated)


def lambda_rho_action(rep: SchrodingerRep, chart: HomogeneousChart, x: np.ndarray,
                      f: GridFunction) -> GridFunction:
    """Multiplication realization of the two-sided translation by s(x).

    On the image of the wavelet transform, which satisfies
    F(g h) = exp(-i lam eta) F(g) for central h with coordinate eta, the
    conjugation F(g) -> F(s(x)^-1 g s(x)) = F(g h(x, g)) acts pointwise as
    multiplication by exp(-i lam eta(x, g)).  The value is unimodular, so
    |output| = |input| everywhere.
    """
    if chart.h_indices != (2,):
        raise LieError("multiplication realization requires the central chart (H on coordinate 2)")
    x = np.asarray(x, dtype=float)
    if f.grid.ndim == 3:
        nodes = f.grid.stacked_points()
    elif f.grid.ndim == 2:
        nodes = section_s(chart, f.grid.stacked_points())
    else:
        raise ValueError("coefficient function must live on a 2-D X-grid or 3-D G-grid")
    eta = _h_batch(chart, np.broadcast_to(x, nodes.shape[:-1] + x.shape), nodes)[..., 0]
    return GridFunction(np.exp(-1j * rep.lam * eta) * f.samples, f.grid)


def left_translate_points(chart: HomogeneousChart, g0: np.ndarray,
                          nodes: np.ndarray) -> np.ndarray:
    """Map grid nodes g to g0^-1 g (for sampling left-translated kernels)."""
    return bch_multiply(chart.algebra, inverse(np.asarray(g0, dtype=float)), nodes)
