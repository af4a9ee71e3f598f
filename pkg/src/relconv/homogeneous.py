"""Coordinate charts for X = G/H, sections, characters, and the commutator map.

A chart splits the exponential coordinates of G into an H-block (a trailing
set of indices containing the commutator subalgebra) and the complementary
X-block.  The projection drops the H-coordinates, and the section embeds an
X-point with zero H-coordinates.  For such zero-fill sections the
complemented-commutator identity

    p(s(x)^-1 g s(x)) = p(g)

holds whenever H contains [g, g]; the map

    h(x, g) = g^-1 s(x)^-1 g s(x)

then lands in H, and unitary characters chi(h) = exp(i lambda . h) of an
abelian H evaluate on its coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie import (
    TOL_EXACT,
    CheckResult,
    LieError,
    NilpotentAlgebra,
    ValidationVerdict,
    bch_multiply,
    bracket,
    commutator_subalgebra,
    conjugate,
    inverse,
)


class CCPViolationError(LieError):
    """The commutator g^-1 s(x)^-1 g s(x) left the H-block."""


class CharacterError(LieError):
    """Character weight is not multiplicative on H."""


@dataclass(frozen=True, eq=False)
class HomogeneousChart:
    """Coordinate split of G into X-block and H-block.

    Construction checks only the structural facts (indices in range, no
    overlap); the semantic requirement that the H-block contain the
    commutator subalgebra is checked by :meth:`validate` / the CCP suite,
    so deliberately invalid charts can still be built and shown to fail
    :func:`check_ccp`.
    """

    algebra: NilpotentAlgebra
    h_indices: tuple[int, ...]

    def __post_init__(self) -> None:
        h = tuple(sorted(int(i) for i in self.h_indices))
        if len(set(h)) != len(h):
            raise LieError(f"duplicate h_indices: {self.h_indices}")
        if h and not (0 <= h[0] and h[-1] < self.algebra.dim):
            raise LieError(f"h_indices {h} out of range for dim {self.algebra.dim}")
        object.__setattr__(self, "h_indices", h)

    @property
    def x_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.algebra.dim) if i not in self.h_indices)

    @property
    def dim_x(self) -> int:
        return self.algebra.dim - len(self.h_indices)

    def validate(self, samples: int = 200, seed: int = 0) -> ValidationVerdict:
        """Containment of [g, g] in the H-block plus sampled well-definedness.

        Well-definedness: whenever p(g1) = p(g2), the quotient g1^-1 g2 must
        have vanishing X-coordinates; sampled with g2 = g1 * h.
        """
        try:
            comm = set(commutator_subalgebra(self.algebra))
            missing = comm - set(self.h_indices)
            containment = 0.0 if not missing else float(len(missing))
        except LieError:
            containment = np.inf

        rng = np.random.default_rng(seed)
        g1 = rng.uniform(-2.0, 2.0, size=(samples, self.algebra.dim))
        h = np.zeros((samples, self.algebra.dim))
        h[:, self.h_indices] = rng.uniform(-2.0, 2.0, size=(samples, len(self.h_indices)))
        g2 = bch_multiply(self.algebra, g1, h)
        quotient = bch_multiply(self.algebra, inverse(g1), g2)
        well = float(np.max(np.abs(quotient[:, self.x_indices]))) if self.x_indices else 0.0

        return ValidationVerdict((
            CheckResult("commutator-containment", containment, 0.5),
            CheckResult("well-definedness", well, TOL_EXACT),
        ))


@dataclass(frozen=True, eq=False)
class Character:
    """Unitary character chi(h) = exp(i weight . h) of the chart's subgroup H.

    Multiplicativity chi(h1 h2) = chi(h1) chi(h2) requires the weight to
    vanish on [h, h]; since H-coordinates of a product then add, this is a
    bracket condition checked exactly at construction.
    """

    chart: HomogeneousChart
    weight: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weight, dtype=float).reshape(-1)
        if w.shape != (len(self.chart.h_indices),):
            raise LieError(
                f"character weight must have length {len(self.chart.h_indices)}, "
                f"got {w.shape}"
            )
        algebra = self.chart.algebra
        resid = 0.0
        for i in self.chart.h_indices:
            ei = np.eye(algebra.dim)[i]
            for j in self.chart.h_indices:
                ej = np.eye(algebra.dim)[j]
                br = bracket(algebra, ei, ej)
                resid = max(resid, abs(float(br[list(self.chart.h_indices)] @ w)))
        if resid > TOL_EXACT:
            raise CharacterError(
                f"weight does not vanish on [h, h] (residual {resid:.3e}); "
                "character would not be multiplicative"
            )
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weight", w)


def project_p(chart: HomogeneousChart, g: np.ndarray) -> np.ndarray:
    """Natural projection G -> X: keep the X-block coordinates."""
    g = np.asarray(g, dtype=float)
    return g[..., chart.x_indices]


def section_s(chart: HomogeneousChart, x: np.ndarray) -> np.ndarray:
    """Zero-fill section X -> G; a right inverse of :func:`project_p`."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != chart.dim_x:
        raise LieError(f"X-point must have {chart.dim_x} coordinates, got {x.shape}")
    g = np.zeros(x.shape[:-1] + (chart.algebra.dim,))
    g[..., chart.x_indices] = x
    return g


def check_ccp(chart: HomogeneousChart, sample_count: int = 1000, seed: int = 0) -> ValidationVerdict:
    """Sample the complemented-commutator identity p(s(x)^-1 g s(x)) = p(g).

    The group law is polynomial, so random-point verification at the
    roundoff tolerance is decisive in practice.  Deterministic given seed.
    """
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-2.0, 2.0, size=(sample_count, chart.dim_x))
    gs = rng.uniform(-2.0, 2.0, size=(sample_count, chart.algebra.dim))
    conj = conjugate(chart.algebra, gs, by=section_s(chart, xs))
    if chart.x_indices:
        resid = float(np.max(np.abs(project_p(chart, conj) - project_p(chart, gs))))
    else:
        resid = 0.0
    return ValidationVerdict((CheckResult("ccp-identity", resid, TOL_EXACT),))


def _h_batch(chart: HomogeneousChart, xs: np.ndarray, gs: np.ndarray) -> np.ndarray:
    """H-coordinates of h(x, g) = g^-1 s(x)^-1 g s(x), broadcasting over stacks.

    Raises :class:`CCPViolationError` if any X-coordinate of the commutator
    exceeds the roundoff budget, which happens exactly when the chart lacks
    the complemented commutator property.
    """
    algebra = chart.algebra
    q = section_s(chart, xs)
    w = bch_multiply(algebra, inverse(gs), conjugate(algebra, gs, by=q))
    if chart.x_indices:
        leak = float(np.max(np.abs(w[..., chart.x_indices])))
        if leak > TOL_EXACT:
            raise CCPViolationError(
                f"commutator left H by {leak:.3e}; chart lacks the "
                "complemented commutator property"
            )
    return w[..., chart.h_indices]


def h_of_xg(chart: HomogeneousChart, x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """H-coordinates of the commutator element h(x, g) for a single (x, g)."""
    return _h_batch(chart, np.asarray(x, dtype=float), np.asarray(g, dtype=float))


def character_eval(chi: Character, h: np.ndarray) -> np.ndarray:
    """chi(h) = exp(i weight . h); unit modulus.  Broadcasts over stacks."""
    h = np.asarray(h, dtype=float)
    return np.exp(1j * (h @ chi.weight))


def commutator_chart(algebra: NilpotentAlgebra) -> HomogeneousChart:
    """Chart with H = the commutator subalgebra block (the center for step 2)."""
    return HomogeneousChart(algebra, commutator_subalgebra(algebra))
