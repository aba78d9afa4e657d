"""Euclidean projections: simplex, nonnegative lp ball, and their intersection.

The fair region on the simplex is Delta_n intersected with the nonnegative
lp ball of radius 1 / (1 + eps D_p). Projection onto the intersection runs
Dykstra's alternating scheme, which converges to the exact Euclidean
projection (plain alternation would only reach a feasible point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    INFINITY,
    NonNegVector,
    SimplexVector,
    check_exponent,
    dispersion_constant,
    _pnorm_rows,
)
from .fairness import FairnessSpec


@dataclass(frozen=True)
class ProjectionResult:
    """Projected point with iteration count and worst remaining constraint violation."""

    point: NonNegVector
    iterations: int
    residual: float


def _project_simplex_arr(y: np.ndarray) -> np.ndarray:
    """Sort-and-threshold projection of an arbitrary real vector onto Delta_n."""
    u = np.sort(y)[::-1]
    shifted = (np.cumsum(u) - 1.0) / np.arange(1, y.size + 1)
    # u[0] - shifted[0] = 1, so the index set is never empty
    k = np.nonzero(u - shifted > 0)[0][-1]
    x = np.maximum(y - shifted[k], 0.0)
    return x / x.sum()


def project_simplex(y) -> SimplexVector:
    """Euclidean projection of a real vector onto the probability simplex."""
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError(f"expected a 1-D vector of dimension >= 2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return SimplexVector(_project_simplex_arr(arr))


def _coordinate_roots(
    w: np.ndarray, p: float, lam: float, z0: np.ndarray | None, max_inner: int
) -> np.ndarray:
    """Solve z + lam*p*z^(p-1) = w_i per coordinate on [0, w_i].

    Safeguarded Newton: the bracket shrinks every step and any Newton
    candidate outside it falls back to bisection.
    """
    lo = np.zeros_like(w)
    hi = w.copy()
    scale = float(hi.max())
    with np.errstate(over="ignore", invalid="ignore"):
        if z0 is None:
            z = w / (1.0 + lam * p * w ** (p - 2.0))
            z = np.where(np.isfinite(z), z, 0.5 * w)
        else:
            z = np.clip(z0, lo, hi)
        for _ in range(max_inner):
            g = z + lam * p * z ** (p - 1.0) - w
            lo = np.where(g < 0, z, lo)
            hi = np.where(g > 0, z, hi)
            slope = 1.0 + lam * p * (p - 1.0) * z ** (p - 2.0)
            step = g / slope
            cand = z - step
            bad = ~np.isfinite(cand) | (cand < lo) | (cand > hi)
            cand = np.where(bad, 0.5 * (lo + hi), cand)
            done = np.abs(cand - z).max() <= 1e-16 * max(scale, 1.0)
            z = cand
            if done:
                break
    return z


def _project_lp_ball_arr(
    y: np.ndarray,
    p: float,
    radius: float,
    tol: float,
    max_outer: int,
    max_inner: int,
) -> tuple[np.ndarray, int, float]:
    """Projection of a real vector onto {z >= 0 : ||z||_p <= radius}.

    Negative inputs clip to zero first (their optimal coordinate is 0), so
    the routine can serve as one half of the Dykstra iteration.
    """
    base = np.maximum(y, 0.0)
    if p == INFINITY:
        return np.minimum(base, radius), 0, 0.0
    norm = float(_pnorm_rows(base, p)) if base.any() else 0.0
    if norm <= radius:
        return base, 0, 0.0
    if p == 2.0:
        z = base * (radius / norm)
        return z, 0, max(0.0, float(np.linalg.norm(z)) - radius)

    # Dual root-find: locate lam >= 0 with ||z(lam)||_p = radius. The
    # bracket [lam_lo, lam_hi] always straddles the root; candidates come
    # from a secant step and fall back to bisection when they stall.
    pos = base > 0
    w = base[pos]
    iterations = 0
    lam_lo, gap_lo = 0.0, norm - radius
    lam_hi = 1.0
    z = _coordinate_roots(w, p, lam_hi, None, max_inner)
    iterations += 1
    gap_hi = float(_pnorm_rows(z, p)) - radius
    while gap_hi >= 0.0 and iterations < max_outer:
        lam_lo, gap_lo = lam_hi, gap_hi
        lam_hi *= 2.0
        z = _coordinate_roots(w, p, lam_hi, z, max_inner)
        iterations += 1
        gap_hi = float(_pnorm_rows(z, p)) - radius
    gap = gap_hi
    side = 0
    while abs(gap) > tol and iterations < max_outer:
        denom = gap_hi - gap_lo
        lam = lam_lo - gap_lo * (lam_hi - lam_lo) / denom if denom != 0.0 else 0.0
        if not lam_lo < lam < lam_hi:
            lam = 0.5 * (lam_lo + lam_hi)
        z = _coordinate_roots(w, p, lam, z, max_inner)
        iterations += 1
        gap = float(_pnorm_rows(z, p)) - radius
        if gap > 0.0:
            lam_lo, gap_lo = lam, gap
            if side == 1:
                gap_hi *= 0.5  # Illinois damping keeps the secant moving
            side = 1
        else:
            lam_hi, gap_hi = lam, gap
            if side == -1:
                gap_lo *= 0.5
            side = -1
    out = np.zeros_like(base)
    out[pos] = z
    return out, iterations, max(0.0, gap)


def project_lp_ball(
    y: NonNegVector,
    p: float,
    radius: float,
    tol: float = 1e-10,
    max_outer: int = 200,
    max_inner: int = 100,
) -> ProjectionResult:
    """Euclidean projection onto the nonnegative lp ball of the given radius.

    p = 2 is radial scaling and p = infinity a coordinate clip; finite p > 2
    goes through the Lagrangian dual: an outer bracketed search on the
    multiplier (secant steps, bisection safeguard) until the boundary gap
    |...norm - radius| falls within tol. Non-convergence within the
    iteration caps is reported through a residual larger than tol, never
    an exception.
    """
    p = check_exponent(p)
    radius = float(radius)
    if not (radius > 0):
        raise ValueError(f"radius must be positive, got {radius!r}")
    z, iterations, residual = _project_lp_ball_arr(
        y.values, p, radius, tol, max_outer, max_inner
    )
    return ProjectionResult(point=NonNegVector(z), iterations=iterations, residual=residual)


def _fair_region_residual(x: np.ndarray, p: float, scale: float) -> float:
    """Worst violation of {sum = 1, x >= 0, (1 + eps D_p) ||x||_p <= 1}."""
    return max(
        abs(float(x.sum()) - 1.0),
        max(0.0, -float(x.min())),
        max(0.0, scale * float(_pnorm_rows(np.maximum(x, 0.0), p)) - 1.0),
    )


def project_fair_region(
    y,
    spec: FairnessSpec,
    n: int | None = None,
    tol: float = 1e-8,
    max_iter: int = 5000,
) -> ProjectionResult:
    """Euclidean projection onto Delta_n intersected with the fair lp ball.

    Runs Dykstra's alternating projections between the nonnegative lp ball
    of radius 1 / (1 + eps D_p) and the simplex; the intersection always
    contains e/n, so the iterates converge to the exact projection.
    Terminates once successive iterates move at most tol in the max norm,
    the two half-step projections agree to tol (Dykstra iterates can sit
    still for several rounds while the corrections build up, so iterate
    movement alone is not a safe stop), and the constraint residual is at
    most tol; hitting the iteration cap leaves the residual above tol as
    the failure signal.
    """
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError(f"expected a 1-D vector of dimension >= 2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    if n is not None and n != arr.size:
        raise ValueError(f"dimension mismatch: n={n} but vector has {arr.size} entries")
    n = arr.size

    if spec.epsilon == 1.0:
        # the feasible set is the single point e/n
        return ProjectionResult(point=SimplexVector.uniform(n), iterations=0, residual=0.0)

    scale = 1.0 + spec.epsilon * dispersion_constant(n, spec.p)
    radius = 1.0 / scale
    ball_tol = min(tol * 1e-2, 1e-10)

    x = arr.copy()
    ball_corr = np.zeros(n)
    simplex_corr = np.zeros(n)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        shifted = x + ball_corr
        a, _, _ = _project_lp_ball_arr(shifted, spec.p, radius, ball_tol, 200, 100)
        ball_corr = shifted - a
        shifted = a + simplex_corr
        x_new = _project_simplex_arr(shifted)
        simplex_corr = shifted - x_new
        delta = float(np.abs(x_new - x).max())
        half_gap = float(np.abs(a - x_new).max())
        x = x_new
        residual = _fair_region_residual(x, spec.p, scale)
        if delta <= tol and half_gap <= tol and residual <= tol:
            break
    return ProjectionResult(point=SimplexVector(x), iterations=iteration, residual=residual)
