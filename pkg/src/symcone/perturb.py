"""Floating-point study of tangency splitting.

A branch difference g(z) = a z^k + r(z) with a k-fold tangency at the origin,
pushed off by a constant eps^2, must meet zero in exactly k transverse points
near the scaled k-th roots of unity.  This module checks that numerically:
damped Newton from the predicted seeds, Wirtinger-sign transversality, and a
log-log fit of the seed-to-root distance against eps (theoretical slope 4/k).

Everything else in the package is exact rational arithmetic; this module alone
works in doubles.
"""

from __future__ import annotations

import cmath
import math
import statistics
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    MalformedInputError,
    NumericalFailureError,
    PropertyViolationError,
    RangeError,
)

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
DISTINCT_TOL = 1e-10
EXCLUDE_DISTANCE = 1e-14


@dataclass(frozen=True)
class LocalCurveModel:
    """One local branch difference g(z) = a z^k + r(z), |r(z)| <= c |z|^(k+1).

    The remainder callable is optional (pure monomial without it); passing its
    holomorphic derivative makes Newton and the transversality sign exact
    instead of finite-differenced."""

    leading: complex
    order: int
    remainder: Callable[[complex], complex] | None = None
    remainder_bound: float = 0.0
    remainder_deriv: Callable[[complex], complex] | None = None

    def __post_init__(self):
        if self.leading == 0:
            raise MalformedInputError("leading coefficient must be nonzero")
        if not isinstance(self.order, int) or self.order < 1:
            raise MalformedInputError("order must be a positive integer")
        if self.remainder_bound < 0:
            raise MalformedInputError("remainder bound must be nonnegative")

    def value(self, z: complex) -> complex:
        out = self.leading * z**self.order
        if self.remainder is not None:
            out = out + self.remainder(z)
        return out

    def derivative(self, z: complex) -> complex:
        lead = self.order * self.leading * z ** (self.order - 1)
        if self.remainder is None:
            return lead
        if self.remainder_deriv is not None:
            return lead + self.remainder_deriv(z)
        h = max(abs(z), 1e-8) * 1e-5
        return lead + (self.remainder(z + h) - self.remainder(z - h)) / (2 * h)


def r_epsilon(models: Sequence[LocalCurveModel], eps: float) -> float:
    """Localization radius R = max_i (2 eps / |a_i|)^(1/k_i).

    Admits eps only when sqrt(R) < min_i |a_i| / (2 c_i) and every predicted
    root lies inside the disk of radius R; otherwise raises a range error
    naming the violated bound."""
    models = tuple(models)
    if not models:
        raise MalformedInputError("need at least one local model")
    eps = float(eps)
    if eps <= 0:
        raise MalformedInputError("eps must be positive")
    radius = max((2 * eps / abs(m.leading)) ** (1.0 / m.order) for m in models)
    caps = [abs(m.leading) / (2 * m.remainder_bound) for m in models if m.remainder_bound > 0]
    if caps and not math.sqrt(radius) < min(caps):
        raise RangeError(
            f"smallness bound violated: sqrt(R) = {math.sqrt(radius):.6g} "
            f"is not below min |a|/(2c) = {min(caps):.6g}"
        )
    for index, m in enumerate(models):
        seed_scale = (eps * eps / abs(m.leading)) ** (1.0 / m.order)
        if not seed_scale < radius:
            raise RangeError(
                f"containment bound violated: model {index} predicts roots at "
                f"|z| = {seed_scale:.6g}, not inside R = {radius:.6g}"
            )
    return radius


@dataclass(frozen=True)
class IntersectionRecord:
    model_index: int
    root_index: int
    point: complex
    sign: float
    distance: float
    seed: complex


def _newton(model: LocalCurveModel, target: complex, seed: complex) -> complex:
    z = seed
    for _ in range(NEWTON_MAX_ITER):
        residual = model.value(z) - target
        if abs(residual) <= NEWTON_TOL:
            return z
        slope = model.derivative(z)
        if slope == 0:
            raise NumericalFailureError("zero derivative during Newton iteration")
        step = residual / slope
        damping = 1.0
        for _ in range(30):
            z_next = z - damping * step
            if abs(model.value(z_next) - target) < abs(residual):
                break
            damping /= 2
        else:
            raise NumericalFailureError("Newton damping failed to reduce the residual")
        z = z_next
    if abs(model.value(z) - target) <= NEWTON_TOL:
        return z
    raise NumericalFailureError(
        f"Newton did not converge within {NEWTON_MAX_ITER} iterations"
    )


def _transversality_sign(model: LocalCurveModel, z: complex) -> float:
    """|g_z|^2 - |g_zbar|^2 at z: positive iff the zero is a positive
    transverse intersection."""
    if model.remainder is None or model.remainder_deriv is not None:
        return abs(model.derivative(z)) ** 2
    h = max(abs(z), 1e-8) * 1e-4
    gx = (model.value(z + h) - model.value(z - h)) / (2 * h)
    gy = (model.value(z + h * 1j) - model.value(z - h * 1j)) / (2 * h)
    d_z = (gx - 1j * gy) / 2
    d_zbar = (gx + 1j * gy) / 2
    return abs(d_z) ** 2 - abs(d_zbar) ** 2


def perturbed_intersections(
    models: Sequence[LocalCurveModel], eps: float
) -> tuple[IntersectionRecord, ...]:
    """Solve g_i(z) = eps^2 near each predicted root for every model.

    Exactly k_i distinct solutions per model, all inside the localization
    disk, all with positive transversality sign; any miss raises."""
    models = tuple(models)
    radius = r_epsilon(models, eps)
    target = complex(float(eps) ** 2)
    records: list[IntersectionRecord] = []
    for index, model in enumerate(models):
        k = model.order
        base = (target / model.leading) ** (1.0 / k)
        found: list[tuple[int, complex, complex]] = []
        for j in range(k):
            eta = cmath.exp(2j * cmath.pi * j / k)
            seed = base * eta
            found.append((j, seed, _newton(model, target, seed)))
        for a in range(len(found)):
            for b in range(a + 1, len(found)):
                if abs(found[a][2] - found[b][2]) <= DISTINCT_TOL:
                    raise PropertyViolationError(
                        f"model {index}: solutions {a} and {b} coincide; "
                        f"expected {k} distinct intersections"
                    )
        for j, seed, z in found:
            if not abs(z) < radius:
                raise PropertyViolationError(
                    f"model {index}: solution at |z| = {abs(z):.6g} escapes the "
                    f"localization disk R = {radius:.6g}"
                )
            sign = _transversality_sign(model, z)
            if not sign > 0:
                raise PropertyViolationError(
                    f"model {index}: non-positive transversality sign {sign:.6g}"
                )
            records.append(
                IntersectionRecord(
                    model_index=index,
                    root_index=j,
                    point=z,
                    sign=sign,
                    distance=abs(z - seed),
                    seed=seed,
                )
            )
    for a in range(len(records)):
        for b in range(a + 1, len(records)):
            if records[a].model_index == records[b].model_index:
                continue
            if abs(records[a].point - records[b].point) <= DISTINCT_TOL:
                raise PropertyViolationError(
                    f"solutions of models {records[a].model_index} and "
                    f"{records[b].model_index} coincide"
                )
    return tuple(records)


@dataclass(frozen=True)
class SlopeReport:
    """Least-squares slope of log(distance) against log(eps) for one model.

    Distances below the rounding floor are excluded; with fewer than two
    usable points no slope is reported."""

    model_index: int
    slope: float | None
    residual: float | None
    used: int
    excluded: int


def order_of_contact_study(
    models: Sequence[LocalCurveModel], eps_list: Sequence[float]
) -> tuple[SlopeReport, ...]:
    eps_values = [float(e) for e in eps_list]
    if len(eps_values) < 4:
        raise RangeError("need at least 4 epsilon values for a slope study")
    if any(b >= a for a, b in zip(eps_values, eps_values[1:])):
        raise RangeError("epsilon values must be strictly decreasing")
    models = tuple(models)
    for e in eps_values:
        r_epsilon(models, e)
    points: dict[int, list[tuple[float, float]]] = {i: [] for i in range(len(models))}
    dropped: dict[int, int] = {i: 0 for i in range(len(models))}
    for e in eps_values:
        records = perturbed_intersections(models, e)
        worst: dict[int, float] = {}
        for rec in records:
            worst[rec.model_index] = max(worst.get(rec.model_index, 0.0), rec.distance)
        for i, d in worst.items():
            if d < EXCLUDE_DISTANCE:
                dropped[i] += 1
            else:
                points[i].append((math.log(e), math.log(d)))
    reports = []
    for i in range(len(models)):
        pts = points[i]
        if len(pts) >= 2:
            fit = statistics.linear_regression([p[0] for p in pts], [p[1] for p in pts])
            residual = math.sqrt(
                sum((y - (fit.slope * x + fit.intercept)) ** 2 for x, y in pts) / len(pts)
            )
            reports.append(
                SlopeReport(
                    model_index=i,
                    slope=fit.slope,
                    residual=residual,
                    used=len(pts),
                    excluded=dropped[i],
                )
            )
        else:
            reports.append(
                SlopeReport(
                    model_index=i, slope=None, residual=None,
                    used=len(pts), excluded=dropped[i],
                )
            )
    return tuple(reports)


def intersection_table(eps: float, records: Sequence[IntersectionRecord]) -> list[str]:
    """Fixed-width text rows for a set of intersection records."""
    lines = [f"{'model':>5} {'eps':>10} {'root':>4} {'z*':>28} {'distance':>12} {'sign':>12}"]
    for rec in records:
        z = f"{rec.point.real:.6e}{rec.point.imag:+.6e}i"
        lines.append(
            f"{rec.model_index:>5} {eps:>10.3e} {rec.root_index:>4} {z:>28} "
            f"{rec.distance:>12.3e} {rec.sign:>12.3e}"
        )
    return lines
