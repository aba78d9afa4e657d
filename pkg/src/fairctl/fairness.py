"""Membership, thresholds, bounds, and constraint generation for the fair sets.

A vector x >= 0 is "at least (eps, p)-fair" when

    (1 + eps * D_p) * ||x||_p <= ||x||_1,       D_p = n^(1-1/p) - 1.

The constraint is scale-invariant, so everything can be phrased on the
probability simplex, where it becomes the lp-ball condition
||x||_p <= 1 / (1 + eps * D_p). eps = 0 is vacuous, eps = 1 pins x to the
uniform point e/n.
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
    normalize,
    p_norm,
    _pnorm_rows,
)

#: Round-off window within which eps_max is clamped back into [0, 1].
EPS_CLAMP_TOL = 1e-12

#: Default relative tolerance for membership tests.
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class FairnessSpec:
    """One member of the constraint family: the pair (epsilon, p)."""

    epsilon: float
    p: float

    def __post_init__(self):
        eps = float(self.epsilon)
        if not (0.0 <= eps <= 1.0):
            raise ValueError(f"epsilon must lie in [0, 1], got {eps!r}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "p", check_exponent(self.p))


def _clamp_unit(value: float, tol: float = EPS_CLAMP_TOL) -> float:
    if value < 0.0:
        if value < -tol:
            raise ValueError(f"threshold {value!r} undershoots 0 beyond round-off")
        return 0.0
    if value > 1.0:
        if value > 1.0 + tol:
            raise ValueError(f"threshold {value!r} overshoots 1 beyond round-off")
        return 1.0
    return value


def eps_max(x: SimplexVector, p: float) -> float:
    """Largest epsilon for which x is at least (eps, p)-fair.

    Equals (1 - ||x||_p) / (D_p ||x||_p): 0 exactly at the simplex vertices,
    1 exactly at the uniform point. Round-off excursions outside [0, 1] of at
    most 1e-12 are clamped; anything larger raises.
    """
    p = check_exponent(p)
    t = p_norm(x, p)
    d = dispersion_constant(x.n, p)
    return _clamp_unit((1.0 - t) / (d * t))


def _eps_rows(rows: np.ndarray, n: int, p: float) -> np.ndarray:
    """Vectorized eps_max over stacked simplex rows."""
    t = _pnorm_rows(rows, p)
    d = dispersion_constant(n, p)
    vals = (1.0 - t) / (d * t)
    overshoot = max(float(-vals.min(initial=0.0)), float(vals.max(initial=1.0) - 1.0))
    if overshoot > EPS_CLAMP_TOL:
        raise ValueError(f"threshold excursion {overshoot!r} exceeds round-off window")
    return np.clip(vals, 0.0, 1.0)


def is_fair(x: NonNegVector, spec: FairnessSpec, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether (1 + eps D_p) ||x||_p <= ||x||_1 (1 + tol).

    The tolerance is relative, so the verdict is identical for x and t*x.
    """
    d = dispersion_constant(x.n, spec.p)
    lhs = (1.0 + spec.epsilon * d) * p_norm(x, spec.p)
    return bool(lhs <= p_norm(x, 1.0) * (1.0 + tol))


def coefficient_of_variation(x: SimplexVector) -> float:
    """CV(x) = sqrt(n ||x||_2^2 - 1), in [0, sqrt(n-1)].

    This is the algebraic form of (std / mean) with mean fixed at 1/n by the
    simplex constraint.
    """
    square = x.n * p_norm(x, 2.0) ** 2 - 1.0
    return math.sqrt(max(square, 0.0))


def cv_bound(n: int, spec: FairnessSpec) -> float:
    """Upper bound on CV^2 over the fair set: (D_p+1)^2 / (1 + eps D_p)^2 - 1.

    Strictly decreasing in eps, from (D_p+1)^2 - 1 at eps = 0 down to exactly
    0 at eps = 1.
    """
    d = dispersion_constant(n, spec.p)
    ratio = (d + 1.0) / (1.0 + spec.epsilon * d)
    return ratio * ratio - 1.0


@dataclass(frozen=True)
class LinearFairnessSystem:
    """The p = infinity constraint as n linear rows: sum_j x_j >= coeff * x_i."""

    n: int
    epsilon: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be at least 2, got {self.n}")
        if not (0.0 <= self.epsilon <= 1.0):
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon!r}")

    @property
    def coefficient(self) -> float:
        """Multiplier on x_i in every row: 1 + (n-1) * epsilon."""
        return 1.0 + (self.n - 1) * self.epsilon

    @property
    def rows(self) -> np.ndarray:
        """(n, n) matrix A with the system written as A @ x >= 0."""
        a = np.ones((self.n, self.n))
        np.fill_diagonal(a, 1.0 - self.coefficient)
        return a

    def satisfied_by(self, x, tol: float = 0.0) -> bool:
        """Check all n inequalities; with tol 0 this matches is_fair at p = infinity."""
        v = x.values if isinstance(x, NonNegVector) else np.asarray(x, dtype=float)
        total = v.sum()
        return bool(np.all(self.coefficient * v <= total * (1.0 + tol)))


def linear_system(n: int, epsilon: float) -> LinearFairnessSystem:
    """Explicit linear-inequality form of the p = infinity constraint."""
    return LinearFairnessSystem(n=n, epsilon=float(epsilon))


@dataclass(frozen=True)
class ConeConstraint:
    """Descriptive record of the normalized constraint ||x||_p <= radius on the simplex.

    ``kind`` is "second-order" at p = 2, "lp-cone" for finite p > 2, and
    "linear-system" at p = infinity. The radius 1 / (1 + eps D_p) applies
    after l1-normalization.
    """

    kind: str
    radius: float
    n: int
    epsilon: float
    p: float


def cone_constraint(n: int, spec: FairnessSpec) -> ConeConstraint:
    """Exportable cone description of the constraint for a given (eps, p)."""
    d = dispersion_constant(n, spec.p)
    if spec.p == 2.0:
        kind = "second-order"
    elif spec.p == INFINITY:
        kind = "linear-system"
    else:
        kind = "lp-cone"
    return ConeConstraint(
        kind=kind,
        radius=1.0 / (1.0 + spec.epsilon * d),
        n=n,
        epsilon=spec.epsilon,
        p=spec.p,
    )


@dataclass(frozen=True)
class DispersionEntry:
    """Per-exponent diagnostics: threshold, membership verdict, and CV bound."""

    p: float
    eps_max: float
    member: bool
    cv_bound: float


@dataclass(frozen=True)
class DispersionReport:
    """CV plus per-exponent thresholds and verdicts for one normalized vector."""

    cv: float
    mean: float
    per_p: tuple[DispersionEntry, ...]


def dispersion_report(
    x: NonNegVector,
    ps: list[float],
    eps: float,
    tol: float = MEMBERSHIP_TOL,
) -> DispersionReport:
    """Normalize x and assess it against every requested exponent at one eps.

    Entries come back sorted by p ascending with infinity last.
    """
    if not ps:
        raise ValueError("at least one exponent is required")
    ordered = sorted(check_exponent(p) for p in ps)
    y = normalize(x)
    entries = []
    for p in ordered:
        spec = FairnessSpec(eps, p)
        entries.append(
            DispersionEntry(
                p=p,
                eps_max=eps_max(y, p),
                member=is_fair(y, spec, tol=tol),
                cv_bound=cv_bound(y.n, spec),
            )
        )
    return DispersionReport(
        cv=coefficient_of_variation(y),
        mean=float(y.values.mean()),
        per_p=tuple(entries),
    )
