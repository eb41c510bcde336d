"""Ground state of -u'' + W(r) u = lam u on (0, r_max) with u(0) = u(r_max) = 0.

Second-order central differences give a symmetric tridiagonal matrix whose
lowest eigenvalue is found by LAPACK's Sturm-sequence bisection; the grid is
refined with exact spacing halvings and the eigenvalue sequence is Richardson
extrapolated.  Counting negative pivots makes the "no bound state" verdict
exact at the discrete level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

# NonConvergence fires when the two best extrapolants disagree by more
# than 1e3 times this target.
TARGET_TOL = 1e-9

# Node-local renormalization of an inverse-square origin coefficient is
# numerically meaningful only while the correction beats roundoff.
_CORRECTION_NODES = 4096


class NoBoundState(Exception):
    """The operator has no negative eigenvalue on the probed domain."""

    def __init__(self, message: str, lowest: float | None = None):
        super().__init__(message)
        self.lowest = lowest


class NonConvergence(Exception):
    """Grid refinement (or basis enlargement) failed to stabilize."""


@dataclass(frozen=True)
class GridConfig:
    """Uniform-grid discretization parameters.

    n_points is the coarsest interior point count; each refinement level
    maps n -> 2n + 1 so the spacing halves exactly.
    """

    r_max: float
    n_points: int = 4096
    refinement_levels: int = 3

    def __post_init__(self):
        if not (np.isfinite(self.r_max) and self.r_max > 0):
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if self.n_points < 64:
            raise ValueError(f"n_points must be >= 64, got {self.n_points}")
        if not (1 <= self.refinement_levels <= 8):
            raise ValueError(f"refinement_levels must be in 1..8, got {self.refinement_levels}")

    def level_sizes(self) -> list[int]:
        sizes = [self.n_points]
        for _ in range(self.refinement_levels - 1):
            sizes.append(2 * sizes[-1] + 1)
        return sizes


@dataclass
class SchrodingerResult:
    """Extrapolated ground eigenvalue plus the finest-level eigenfunction.

    The eigenfunction is L2-normalized with the trapezoid measure on
    [0, r_max] (both endpoints are zero, so the rule reduces to
    spacing * sum(u^2) = 1) and is nodeless up to roundoff in the far tail.
    error_estimate spans the whole Richardson tableau: it dominates the
    discretization deficit of every un-extrapolated level.
    """

    eigenvalue: float
    eigenfunction: np.ndarray
    radii: np.ndarray
    spacing: float
    error_estimate: float
    converged: bool
    level_eigenvalues: list[float] = field(default_factory=list)


def _inverse_square_renormalization(indices: np.ndarray, coefficient: float) -> np.ndarray:
    """Per-node replacement for an origin coefficient B/r^2.

    Near r = 0 the regular solution behaves like r^gamma with
    gamma (gamma - 1) = B; the plain three-point stencil misrepresents its
    second derivative at the first few nodes, which degrades the eigenvalue
    to far below second order.  Choosing the node value
    i^(2-gamma) * [ (i+1)^gamma - 2 i^gamma + (i-1)^gamma ]
    makes the discrete operator annihilate r^gamma exactly, restoring a
    smooth error expansion.  Requires B > -1/4.
    """
    if coefficient <= -0.25:
        raise ValueError(f"inverse-square coefficient must exceed -1/4, got {coefficient}")
    gamma = 0.5 + np.sqrt(0.25 + coefficient)
    i = indices.astype(float)
    return i ** (2.0 - gamma) * ((i + 1.0) ** gamma - 2.0 * i ** gamma + (i - 1.0) ** gamma)


def _assemble(W: Callable, r_max: float, n: int, inverse_square_origin: float | None):
    h = r_max / (n + 1)
    idx = np.arange(1, n + 1)
    r = h * idx
    diag = 2.0 / h**2 + np.asarray(W(r), dtype=float)
    if inverse_square_origin is not None:
        k = min(n, _CORRECTION_NODES)
        btilde = _inverse_square_renormalization(idx[:k], inverse_square_origin)
        diag[:k] += (btilde - inverse_square_origin) / r[:k] ** 2
    if not np.all(np.isfinite(diag)):
        raise ValueError("W must be finite on the interior grid")
    off = np.full(n - 1, -1.0 / h**2)
    return diag, off, r, h


def _lowest(diag, off, want_vector: bool):
    if want_vector:
        w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
        return w[0], v[:, 0]
    w = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0), eigvals_only=True)
    return w[0], None


def _richardson_diagonal(levels: list[float]) -> list[float]:
    """Diagonal of the Richardson tableau for p = 2, 4, ... elimination."""
    table = [list(levels)]
    for j in range(1, len(levels)):
        prev = table[-1]
        table.append([prev[i + 1] + (prev[i + 1] - prev[i]) / (4**j - 1) for i in range(len(prev) - 1)])
    return [row[-1] for row in table]


def lowest_eigenvalue(
    W: Callable,
    grid: GridConfig,
    inverse_square_origin: float | None = None,
) -> SchrodingerResult:
    """Ground eigenvalue of -d^2/dr^2 + W with Dirichlet walls at 0 and r_max.

    W maps an array of radii to an array of values; it must be finite on the
    open interior and negligible at r_max for the truncation to make sense.
    For potentials carrying a B/r^2 origin singularity, pass
    inverse_square_origin=B to switch on the node-local renormalization.

    Raises NoBoundState when every refinement level (and the extrapolant)
    puts the lowest eigenvalue at or above zero, and NonConvergence when the
    last two extrapolants disagree beyond 1e3 * TARGET_TOL.
    """
    sizes = grid.level_sizes()
    levels: list[float] = []
    finest = None
    for n in sizes:
        diag, off, r, h = _assemble(W, grid.r_max, n, inverse_square_origin)
        lam, _ = _lowest(diag, off, want_vector=False)
        levels.append(lam)
        finest = (diag, off, r, h)
    if all(lam >= 0 for lam in levels):
        raise NoBoundState(
            f"lowest discrete eigenvalue is {min(levels):.6g} >= 0 at every refinement level",
            lowest=min(levels),
        )
    diagonal = _richardson_diagonal(levels)
    eigenvalue = diagonal[-1]
    if eigenvalue >= 0:
        raise NoBoundState(f"extrapolated lowest eigenvalue {eigenvalue:.6g} >= 0", lowest=eigenvalue)
    scale = max(1.0, abs(eigenvalue))
    # with two levels the diagonal difference is dominated by the raw
    # coarse-grid deficit, so the disagreement gate needs three or more
    if len(diagonal) > 2 and abs(diagonal[-1] - diagonal[-2]) > 1e3 * TARGET_TOL * scale:
        raise NonConvergence(
            f"extrapolation levels disagree: {diagonal[-2]!r} vs {diagonal[-1]!r}"
        )
    # Error estimate spanning the tableau: the coarsest raw level carries the
    # largest discretization deficit, so |best - coarsest| bounds them all;
    # the diagonal difference covers the extrapolant's own uncertainty.
    tail = abs(diagonal[-1] - diagonal[-2]) if len(diagonal) > 1 else abs(eigenvalue) * 1e-8
    error_estimate = abs(eigenvalue - levels[0]) + 2.0 * tail + 1e-13 * scale

    diag, off, r, h = finest
    _, vec = _lowest(diag, off, want_vector=True)
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    norm = np.sqrt(h * np.dot(vec, vec))
    vec = vec / norm
    return SchrodingerResult(
        eigenvalue=eigenvalue,
        eigenfunction=vec,
        radii=r,
        spacing=h,
        error_estimate=error_estimate,
        converged=True,
        level_eigenvalues=levels,
    )


def expectation(result: SchrodingerResult, g: Callable) -> float:
    """Trapezoid-rule expectation integral of g(r) against the stored u^2."""
    if not result.converged:
        raise ValueError("expectation requires a converged result")
    values = np.asarray(g(result.radii), dtype=float)
    if values.shape != result.radii.shape or not np.all(np.isfinite(values)):
        raise ValueError("g must be finite on the grid")
    u = result.eigenfunction
    return float(result.spacing * np.dot(values, u * u))
