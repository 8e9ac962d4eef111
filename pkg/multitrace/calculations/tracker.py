"""
Predictor-corrector path tracking.

H(z, t) = (1 - t) * gamma * G(z) + t * F(z), t from 0 to 1.
Prediction: classical 4th-order Runge-Kutta on the Davidenko equation
dz/dt = -H_z^{-1} H_t. Correction: a few Newton steps at the new t.
The step halves on a failed correction and doubles (up to initial_step)
after a streak of accepted steps.
"""

import os
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, runtime_checkable

import numpy as np
from scipy import linalg

from multitrace.calculations.polynomial import ComplexMatrix, ComplexVector, Point, RealVector
from multitrace.common.constants import (
    CORRECTOR_ITERS,
    DIVERGENCE_NORM,
    ESCAPE_GROWTH,
    ESCAPE_NORM,
    ESCAPE_ZONE,
    INITIAL_STEP,
    MAX_NEWTON_ITERS,
    MAX_STEPS,
    MIN_STEP,
    NEWTON_TOL,
    SINGULAR_CONDITION,
    STEP_GROWTH_STREAK,
)
from multitrace.common.errors import DimensionMismatch, InputError, NoConvergence, SingularJacobian
from multitrace.common.log import get_logger

logger = get_logger(__name__)


class Evaluable(Protocol):
    """Anything with a value vector and a Jacobian at a point"""

    @property
    def n_vars(self) -> int: ...

    def evaluate(self, z: ComplexVector) -> ComplexVector: ...

    def jacobian(self, z: ComplexVector) -> ComplexMatrix: ...


@runtime_checkable
class Scaled(Protocol):
    """An Evaluable that reports the term magnitudes behind each value"""

    def magnitudes(self, z: ComplexVector) -> RealVector: ...


def relative_residual(f: Evaluable, z: ComplexVector) -> float:
    """
    max_i |f_i(z)| / (1 + s_i). s_i is the sum of term magnitudes of row i when
    f reports them, else sum_j |df_i/dz_j| |z_j|.
    """
    values = np.abs(f.evaluate(z))
    if values.size == 0:
        return 0.0
    if isinstance(f, Scaled):
        scale = f.magnitudes(z)
    else:
        scale = np.abs(f.jacobian(z)) @ np.abs(z)
    return float(np.max(values / (1.0 + scale)))


@dataclass(frozen=True)
class TrackerConfig:
    initial_step: float = INITIAL_STEP
    min_step: float = MIN_STEP
    newton_tol: float = NEWTON_TOL
    max_newton_iters: int = MAX_NEWTON_ITERS
    divergence_norm: float = DIVERGENCE_NORM
    max_steps: int = MAX_STEPS
    corrector_iters: int = CORRECTOR_ITERS
    corrector_tol: float = 1e-8
    escape_norm: float = ESCAPE_NORM
    threads: int = 1  # 0 = one per CPU

    def __post_init__(self) -> None:
        positive = {
            "initial_step": self.initial_step,
            "min_step": self.min_step,
            "newton_tol": self.newton_tol,
            "max_newton_iters": self.max_newton_iters,
            "divergence_norm": self.divergence_norm,
            "max_steps": self.max_steps,
            "corrector_iters": self.corrector_iters,
            "corrector_tol": self.corrector_tol,
            "escape_norm": self.escape_norm,
        }
        for name, value in positive.items():
            if value <= 0:
                msg = f"TrackerConfig.{name} must be positive, got {value}"
                raise InputError(msg)
        if self.min_step >= self.initial_step:
            msg = "TrackerConfig.min_step must be smaller than initial_step"
            raise InputError(msg)
        if self.threads < 0:
            msg = "TrackerConfig.threads must be >= 0"
            raise InputError(msg)

    @property
    def workers(self) -> int:
        return self.threads or (os.cpu_count() or 1)


@dataclass(frozen=True, eq=False)
class Homotopy:
    start: Evaluable
    target: Evaluable
    gamma: complex = 1 + 0j

    def __post_init__(self) -> None:
        if self.start.n_vars != self.target.n_vars:
            msg = "start and target systems have different variables"
            raise DimensionMismatch(msg)
        if not np.isclose(abs(self.gamma), 1.0):
            msg = f"gamma must have unit modulus, got |gamma| = {abs(self.gamma)}"
            raise InputError(msg)

    def evaluate(self, z: ComplexVector, t: float) -> ComplexVector:
        return (1 - t) * self.gamma * self.start.evaluate(z) + t * self.target.evaluate(z)

    def jacobian(self, z: ComplexVector, t: float) -> ComplexMatrix:
        return (1 - t) * self.gamma * self.start.jacobian(z) + t * self.target.jacobian(z)

    def dt(self, z: ComplexVector) -> ComplexVector:
        return self.target.evaluate(z) - self.gamma * self.start.evaluate(z)


class PathStatus(str, Enum):
    SUCCESS = "success"
    DIVERGED = "diverged"
    FAILED = "failed"


@dataclass(frozen=True, eq=False)
class PathResult:
    status: PathStatus
    endpoint: Point | None
    steps_taken: int
    final_residual: float
    t: float = 1.0  # where tracking stopped

    @property
    def ok(self) -> bool:
        return self.status is PathStatus.SUCCESS


def _solve(a: ComplexMatrix, b: ComplexVector) -> ComplexVector | None:
    lu, piv = linalg.lu_factor(a, check_finite=False)
    x = linalg.lu_solve((lu, piv), b, check_finite=False)
    return x if np.all(np.isfinite(x)) else None


def _tangent(h: Homotopy, z: ComplexVector, t: float) -> ComplexVector | None:
    dz = _solve(h.jacobian(z, t), -h.dt(z))
    return dz


def _rk4(h: Homotopy, z: ComplexVector, t: float, dt: float) -> ComplexVector | None:
    k1 = _tangent(h, z, t)
    if k1 is None:
        return None
    k2 = _tangent(h, z + 0.5 * dt * k1, t + 0.5 * dt)
    if k2 is None:
        return None
    k3 = _tangent(h, z + 0.5 * dt * k2, t + 0.5 * dt)
    if k3 is None:
        return None
    k4 = _tangent(h, z + dt * k3, t + dt)
    if k4 is None:
        return None
    return z + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _correct(h: Homotopy, z: ComplexVector, t: float, cfg: TrackerConfig) -> ComplexVector | None:
    for _ in range(cfg.corrector_iters):
        delta = _solve(h.jacobian(z, t), -h.evaluate(z, t))
        if delta is None:
            return None
        z = z + delta
        if np.max(np.abs(delta)) <= cfg.corrector_tol * (1 + np.max(np.abs(z))):
            return z
    return None


def _newton(
    f: Evaluable, z: ComplexVector, tol: float, max_iters: int
) -> tuple[ComplexVector, float]:
    residual = relative_residual(f, z)
    for _ in range(max_iters):
        if residual < tol:
            break
        delta = _solve(f.jacobian(z), -f.evaluate(z))
        if delta is None:
            break
        z = z + delta
        residual = relative_residual(f, z)
    return z, residual


def track_path(
    h: Homotopy, start: Point | ComplexVector, cfg: TrackerConfig | None = None
) -> PathResult:
    """Continue one solution of the start system from t=0 to t=1"""
    cfg = cfg or TrackerConfig()
    z = np.array(start.coordinates if isinstance(start, Point) else start, dtype=np.complex128)
    t = 0.0
    step = cfg.initial_step
    streak = 0
    steps = 0
    zone_norm: float | None = None  # |z| on entering ESCAPE_ZONE

    def escaping() -> bool:
        if not np.all(np.isfinite(z)):
            return True
        norm = float(np.max(np.abs(z)))
        if zone_norm is None or norm <= cfg.escape_norm:
            return False
        return norm > ESCAPE_GROWTH * max(zone_norm, 1.0)

    def stopped(status: PathStatus) -> PathResult:
        finite = bool(np.all(np.isfinite(z)))
        residual = float(np.max(np.abs(h.evaluate(z, t)))) if finite else float("inf")
        logger.debug(
            f"path {status.value} at t={t:.6f} after {steps} steps, |z|={np.max(np.abs(z)):.3e}"
        )
        return PathResult(status, None, steps, residual, t)

    while t < 1.0:
        if steps >= cfg.max_steps:
            return stopped(PathStatus.FAILED)
        steps += 1
        dt = min(step, 1.0 - t)
        predicted = _rk4(h, z, t, dt)
        corrected = _correct(h, predicted, t + dt, cfg) if predicted is not None else None
        if corrected is None:
            step /= 2
            streak = 0
            if step < cfg.min_step:
                return stopped(PathStatus.DIVERGED if escaping() else PathStatus.FAILED)
            continue
        z = corrected
        t = 1.0 if dt == 1.0 - t else t + dt
        if np.max(np.abs(z)) > cfg.divergence_norm:
            return stopped(PathStatus.DIVERGED)
        if zone_norm is None and t > ESCAPE_ZONE:
            zone_norm = float(np.max(np.abs(z)))
        streak += 1
        if streak >= STEP_GROWTH_STREAK:
            step = min(2 * step, cfg.initial_step)
            streak = 0

    z, residual = _newton(h.target, z, cfg.newton_tol, cfg.max_newton_iters)
    if residual < cfg.newton_tol:
        return PathResult(PathStatus.SUCCESS, Point(z), steps, residual)
    return stopped(PathStatus.DIVERGED if escaping() else PathStatus.FAILED)


def track_paths(
    h: Homotopy, starts: Sequence[Point | ComplexVector], cfg: TrackerConfig | None = None
) -> list[PathResult]:
    """Track every start point; results come back in start order whatever the thread count"""
    cfg = cfg or TrackerConfig()
    workers = min(cfg.workers, len(starts))
    if workers <= 1:
        return [track_path(h, s, cfg) for s in starts]

    results: list[PathResult | None] = [None] * len(starts)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(track_path, h, s, cfg): i for i, s in enumerate(starts)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return [r for r in results if r is not None]


def refine(
    f: Evaluable,
    p: Point | ComplexVector,
    tol: float = NEWTON_TOL,
    max_iters: int = MAX_NEWTON_ITERS,
) -> Point:
    """Newton polishing to relative residual < tol"""
    z = np.array(p.coordinates if isinstance(p, Point) else p, dtype=np.complex128)
    tag = p.chart_tag if isinstance(p, Point) else "affine"
    if z.shape != (f.n_vars,):
        msg = f"point has {z.size} coordinates, system has {f.n_vars} variables"
        raise DimensionMismatch(msg)
    residual = relative_residual(f, z)
    for _ in range(max_iters):
        if residual < tol:
            return Point(z, tag)
        jac = f.jacobian(z)
        if np.linalg.cond(jac) > SINGULAR_CONDITION:
            msg = f"Jacobian condition number exceeds {SINGULAR_CONDITION:.0e}"
            raise SingularJacobian(msg)
        delta = _solve(jac, -f.evaluate(z))
        if delta is None:
            msg = "Newton step is not finite"
            raise SingularJacobian(msg)
        z = z + delta
        residual = relative_residual(f, z)
    if residual < tol:
        return Point(z, tag)
    msg = f"Newton did not reach {tol:.0e} in {max_iters} iterations (residual {residual:.3e})"
    raise NoConvergence(msg)
