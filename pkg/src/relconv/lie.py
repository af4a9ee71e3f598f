"""Nilpotent Lie algebras by structure constants and the exact group law.

An algebra is specified by its structure constants ``c[i, j, k]``, meaning
``[e_i, e_j] = sum_k c[i, j, k] e_k``.  Group elements live in exponential
coordinates of the first kind (a point *is* its logarithm), so:

* the group product is the Baker-Campbell-Hausdorff series, which for a
  nilpotent algebra of step <= 3 truncates exactly to

      x * y = x + y + [x,y]/2 + ([x,[x,y]] - [y,[x,y]])/12,

* the inverse is coordinate negation, and
* Haar measure is Lebesgue measure in these coordinates.

Everything here is plain polynomial arithmetic; identities such as
associativity hold to double-precision roundoff, for which ``TOL_EXACT``
is the budget used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Residual budget for identities that are exact polynomials in the inputs.
TOL_EXACT = 1e-12

#: Rank-deciding threshold for numerical span computations.
_RANK_TOL = 1e-10


class LieError(ValueError):
    """Base class for algebra/group-law errors."""


class UnsupportedStepError(LieError):
    """Nilpotency step outside the exactly-truncated BCH range (step <= 3)."""


class NonAdaptedBasisError(LieError):
    """Basis brackets do not land in a trailing coordinate block."""


@dataclass(frozen=True)
class CheckResult:
    """Single named residual check with its tolerance."""

    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


@dataclass(frozen=True)
class ValidationVerdict:
    """Outcome of a structural validation: one residual per invariant."""

    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def residual(self, name: str) -> float:
        for c in self.checks:
            if c.name == name:
                return c.residual
        raise KeyError(name)

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"{c.name}: residual={c.residual:.3e} tol={c.tolerance:.1e} [{status}]")
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class NilpotentAlgebra:
    """Nilpotent Lie algebra given by structure constants.

    Attributes
    ----------
    dim : int
        Dimension n of the algebra.
    constants : ndarray, shape (n, n, n)
        ``constants[i, j, k]`` is the e_k-coefficient of ``[e_i, e_j]``.
    step : int
        Declared nilpotency class (length of the lower central series).
    name : str
        Optional label used in reports.
    """

    dim: int
    constants: np.ndarray
    step: int
    name: str = ""

    def __post_init__(self) -> None:
        c = np.asarray(self.constants, dtype=float)
        if c.shape != (self.dim, self.dim, self.dim):
            raise LieError(
                f"structure constants must have shape {(self.dim,) * 3}, got {c.shape}"
            )
        if self.dim < 1:
            raise LieError("dim must be a positive integer")
        if self.step < 1:
            raise LieError("step must be a positive integer")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "constants", c)

    def identity(self) -> np.ndarray:
        return np.zeros(self.dim)


def algebra_from_triples(
    dim: int,
    step: int,
    triples: Iterable[tuple[int, int, int, float]],
    name: str = "",
) -> NilpotentAlgebra:
    """Build an algebra from sparse 0-based ``(i, j, k, value)`` bracket entries.

    Entries are set verbatim; antisymmetric partners are *not* added
    automatically, so a lone ``(i, j, k, v)`` without ``(j, i, k, -v)`` will
    fail validation (this is deliberate: configs state the full tensor).
    """
    c = np.zeros((dim, dim, dim))
    for i, j, k, value in triples:
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise LieError(f"bracket triple ({i}, {j}, {k}) out of range for dim {dim}")
        c[i, j, k] = value
    return NilpotentAlgebra(dim=dim, constants=c, step=step, name=name)


# --------------------------------------------------------------------------
# Canonical examples
# --------------------------------------------------------------------------

def heisenberg() -> NilpotentAlgebra:
    """The 3-dimensional Heisenberg algebra, oriented for the grid representation.

    Bracket: ``[e1, e2] = -e3`` (coordinates (u, v, s), center = e3).  With
    this orientation the group law gives

        (u1,v1,s1)*(u2,v2,s2) = (u1+u2, v1+v2, s1+s2 + (u2 v1 - u1 v2)/2),

    the conjugation commutator ``g^-1 s(x)^-1 g s(x)`` for x=(x,y),
    g=(u,v,s) has central coordinate ``x v - y u``, and the phase convention
    of :mod:`relconv.rep` is an exact homomorphism.  The opposite (textbook)
    orientation ``[e1,e2] = +e3`` is the same abstract algebra with e3
    negated; both validate, but the shipped representation requires this one.
    """
    return algebra_from_triples(
        3, 2, [(0, 1, 2, -1.0), (1, 0, 2, 1.0)], name="heisenberg"
    )


def abelian(dim: int) -> NilpotentAlgebra:
    """Abelian algebra of the given dimension (all brackets zero, step 1)."""
    return NilpotentAlgebra(dim=dim, constants=np.zeros((dim, dim, dim)), step=1,
                            name=f"abelian{dim}")


def free_step2(generators: int = 3) -> NilpotentAlgebra:
    """Free nilpotent step-2 algebra on the given number of generators.

    Basis: the g generators followed by the g(g-1)/2 central elements
    ``[e_a, e_b]`` for a < b, ordered lexicographically.
    """
    g = generators
    dim = g + g * (g - 1) // 2
    triples = []
    k = g
    for a in range(g):
        for b in range(a + 1, g):
            triples.append((a, b, k, 1.0))
            triples.append((b, a, k, -1.0))
            k += 1
    return algebra_from_triples(dim, 2, triples, name=f"free-step2-{g}")


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------

def bracket(algebra: NilpotentAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Lie bracket ``[x, y]`` from the structure constants.

    Broadcasts over leading axes, so stacked points work:
    ``bracket(a, xs, ys)`` with shapes (..., n) returns shape (..., n).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != algebra.dim or y.shape[-1] != algebra.dim:
        raise LieError(f"vectors must have length {algebra.dim}")
    return np.einsum("...i,...j,ijk->...k", x, y, algebra.constants)


def group_point(coords: Sequence[float], dim: int | None = None) -> np.ndarray:
    """Validate and freeze exponential coordinates of a group element."""
    g = np.asarray(coords, dtype=float).copy()
    if dim is not None and g.shape != (dim,):
        raise LieError(f"expected {dim} coordinates, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise LieError("group point coordinates must be finite")
    g.flags.writeable = False
    return g


def bch_multiply(algebra: NilpotentAlgebra, g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Group product in exponential coordinates via the truncated BCH series.

    Exact for step <= 3, where all nested brackets of depth > step vanish;
    higher steps are rejected rather than approximated.  Broadcasts over
    leading axes like :func:`bracket`.
    """
    if algebra.step > 3:
        raise UnsupportedStepError(
            f"BCH truncation is exact only for step <= 3; algebra has step {algebra.step}"
        )
    x = np.asarray(g1, dtype=float)
    y = np.asarray(g2, dtype=float)
    out = x + y
    if algebra.step >= 2:
        xy = bracket(algebra, x, y)
        out = out + 0.5 * xy
        if algebra.step >= 3:
            out = out + (bracket(algebra, x, xy) - bracket(algebra, y, xy)) / 12.0
    return out


def inverse(g: np.ndarray) -> np.ndarray:
    """Group inverse: negation in exponential coordinates of the first kind."""
    return -np.asarray(g, dtype=float)


def conjugate(algebra: NilpotentAlgebra, g: np.ndarray, by: np.ndarray) -> np.ndarray:
    """``by^-1 * g * by``, broadcasting over leading axes."""
    return bch_multiply(algebra, bch_multiply(algebra, inverse(by), g), by)


def lower_central_series(algebra: NilpotentAlgebra) -> list[float]:
    """Sizes of the lower central series terms g_2 = [g, g], g_3 = [g, g_2], ...

    Returns, for each depth m >= 2, the largest singular value of the
    bracket-image matrix whose columns generate g_m; the value is 0.0 once
    the series has died.  The list has length dim + 1, enough to expose any
    declared-step mismatch.
    """
    c = algebra.constants
    sizes: list[float] = []
    current = np.eye(algebra.dim)  # orthonormal basis of g_1 = whole algebra
    for _ in range(algebra.dim + 1):
        if current.shape[1] == 0:
            sizes.append(0.0)
            continue
        # All brackets [e_i, w] for basis e_i and current span columns w.
        image = np.einsum("ijk,jm->kim", c, current).reshape(algebra.dim, -1)
        u, s, _ = np.linalg.svd(image, full_matrices=False)
        top = float(s[0]) if s.size else 0.0
        sizes.append(top)
        rank = int(np.sum(s > _RANK_TOL * max(1.0, top)))
        current = u[:, :rank]
    return sizes


def validate_algebra(algebra: NilpotentAlgebra) -> ValidationVerdict:
    """Check antisymmetry, the Jacobi identity, and the declared step.

    Residuals are maxima over all index combinations; the nilpotency
    residual is the largest singular value of the depth-(step+1) bracket
    image, which must vanish.  A declared step that is *larger* than the
    true one is reported as a failed ``step-attained`` check.
    """
    c = algebra.constants
    anti = float(np.max(np.abs(c + np.swapaxes(c, 0, 1))))

    # jac[i,j,l,k] = sum_m c[i,j,m] c[m,l,k], cycled over (i,j,l).
    prod = np.einsum("ijm,mlk->ijlk", c, c)
    jacobi = float(np.max(np.abs(
        prod + np.transpose(prod, (1, 2, 0, 3)) + np.transpose(prod, (2, 0, 1, 3))
    )))

    # sizes[m] measures g_{m+2}; the series vanishes after `step` iterations
    # iff g_{step+1} is zero while g_{step} is not (g_1 is trivially nonzero).
    sizes = lower_central_series(algebra)

    def size_at(depth: int) -> float:  # depth counted as g_depth
        if depth <= 1:
            return 1.0
        idx = depth - 2
        return sizes[idx] if idx < len(sizes) else 0.0

    nilp = size_at(algebra.step + 1)
    attained = 0.0 if size_at(algebra.step) > _RANK_TOL else 1.0

    checks = (
        CheckResult("antisymmetry", anti, TOL_EXACT),
        CheckResult("jacobi", jacobi, TOL_EXACT),
        CheckResult("nilpotency", nilp, TOL_EXACT),
        CheckResult("step-attained", attained, TOL_EXACT),
    )
    return ValidationVerdict(checks)


def commutator_subalgebra(algebra: NilpotentAlgebra) -> tuple[int, ...]:
    """Indices of the trailing basis block spanning [g, g].

    Requires an adapted basis: every bracket of basis vectors must lie in
    the span of a trailing sub-block of basis vectors, and that block must
    be exactly the span of the brackets.  Raises
    :class:`NonAdaptedBasisError` otherwise (automatic basis rotation is
    out of scope).
    """
    c = algebra.constants
    columns = c.reshape(-1, algebra.dim).T  # each column is one [e_i, e_j]
    scale = max(1.0, float(np.max(np.abs(columns))) if columns.size else 1.0)
    support = np.where(np.max(np.abs(columns), axis=1) > _RANK_TOL * scale)[0]
    if support.size == 0:
        return ()
    first = int(support.min())
    if set(support.tolist()) != set(range(first, algebra.dim)):
        raise NonAdaptedBasisError(
            "bracket image touches coordinates "
            f"{sorted(support.tolist())}, which is not a trailing block "
            f"{{{first}..{algebra.dim - 1}}}; change to an adapted basis"
        )
    block = columns[support, :]
    rank = int(np.linalg.matrix_rank(block, tol=_RANK_TOL * scale))
    if rank != support.size:
        raise NonAdaptedBasisError(
            f"brackets span a {rank}-dimensional space inside a "
            f"{support.size}-coordinate trailing block; basis is not adapted"
        )
    return tuple(int(i) for i in support)
