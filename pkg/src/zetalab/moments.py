"""Joint-moment quadrature over [T, 2T] and scaling reports.

The integrand |zeta|^(2k-2h) |zeta'|^(2h) (or the Hardy-Z version) is
sampled by the composite midpoint rule on a mesh tied to the mean zero gap.
Midpoint is deliberate: fractional powers of |zeta| have cusps at the zeros,
which defeat higher-order rules, while midpoint never samples the cusp tips
and degrades gracefully.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .critline import DEFAULT_ACCURACY, EvalAccuracy, GridData, eval_grid
from .errors import ConfigError, DomainError

T_MIN = 1.0e3
T_MAX = 1.0e7
TWO_PI = 2.0 * math.pi

TARGETS = ("zeta", "hardyZ")

# Floor applied to |Z| only when a negative power is requested (h > k).
ABS_FLOOR = 1.0e-8


def mean_zero_gap(T: float) -> float:
    return TWO_PI / math.log(T / TWO_PI)


@dataclass(frozen=True)
class MomentRequest:
    T: float
    k: float
    h: float
    target: str = "zeta"
    points_per_gap: int = 20

    def __post_init__(self) -> None:
        if not T_MIN <= self.T <= T_MAX:
            raise DomainError(f"T must lie in [{T_MIN:g}, {T_MAX:g}], got {self.T}")
        if not self.k > 0.0:
            raise DomainError(f"k must be positive, got {self.k}")
        if self.h < 0.0 or self.h > self.k + 0.5:
            raise DomainError(
                f"h = {self.h} outside [0, k + 1/2] = [0, {self.k + 0.5}]"
            )
        if self.target not in TARGETS:
            raise DomainError(f"target must be one of {TARGETS}, got {self.target!r}")
        if self.points_per_gap < 1:
            raise DomainError("points_per_gap must be >= 1")

    @property
    def mesh_nominal(self) -> float:
        return mean_zero_gap(self.T) / self.points_per_gap


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    mesh: float
    panels: int
    est_rel_error: float
    request: MomentRequest
    capped: bool = False


def _midpoint_grid(T: float, mesh_nominal: float) -> tuple[np.ndarray, float, int]:
    panels = int(math.ceil(T / mesh_nominal))
    mesh = T / panels
    ts = T + (np.arange(panels) + 0.5) * mesh
    return ts, mesh, panels


def moment_grids(
    T: float,
    points_per_gap: int = 20,
    acc: EvalAccuracy = DEFAULT_ACCURACY,
    workers: int = 1,
) -> tuple[GridData, GridData]:
    """Critical-line samples at the working mesh and at half mesh.

    Built once per (T, mesh) and shared by every moment request at that T;
    the half-mesh grid feeds the error estimate.
    """
    nominal = mean_zero_gap(T) / points_per_gap
    ts, _, _ = _midpoint_grid(T, nominal)
    ts_half, _, _ = _midpoint_grid(T, nominal / 2.0)
    return eval_grid(ts, acc, workers), eval_grid(ts_half, acc, workers)


def _integrand(grid: GridData, req: MomentRequest) -> tuple[np.ndarray, bool]:
    za = np.abs(grid.Z)
    dz2 = grid.dzeta_abs2() if req.target == "zeta" else grid.Z_prime**2
    e1 = 2.0 * req.k - 2.0 * req.h
    capped = False
    if e1 < 0.0:
        za = np.maximum(za, ABS_FLOOR)
        capped = True
    return za**e1 * dz2**req.h, capped


def joint_moment_on_grids(
    req: MomentRequest, grid: GridData, grid_half: GridData
) -> MomentEstimate:
    vals, capped = _integrand(grid, req)
    vals_half, _ = _integrand(grid_half, req)
    panels = grid.t.size
    mesh = req.T / panels
    value = float(np.sum(vals) * mesh)
    value_half = float(np.sum(vals_half) * (req.T / grid_half.t.size))
    est = abs(value - value_half) / value_half if value_half > 0.0 else 0.0
    return MomentEstimate(value, mesh, panels, est, req, capped)


def joint_moment(
    req: MomentRequest,
    acc: EvalAccuracy = DEFAULT_ACCURACY,
    workers: int = 1,
) -> MomentEstimate:
    """Composite midpoint value of the joint moment with a mesh-halving
    relative error estimate."""
    grid, grid_half = moment_grids(req.T, req.points_per_gap, acc, workers)
    return joint_moment_on_grids(req, grid, grid_half)


def conjectured_power_ratio(est: MomentEstimate) -> float:
    req = est.request
    expo = req.k**2 + 2.0 * req.h
    return est.value / (req.T * math.log(req.T) ** expo)


@dataclass(frozen=True)
class ScalingReport:
    k: float
    h: float
    target: str
    Ts: tuple[float, ...]
    values: tuple[float, ...]
    ratios: tuple[float, ...]
    slope: float
    predicted_exponent: float


def scaling_report(
    T_list: list[float],
    k: float,
    h: float,
    target: str = "zeta",
    points_per_gap: int = 20,
    acc: EvalAccuracy = DEFAULT_ACCURACY,
    workers: int = 1,
) -> ScalingReport:
    """Ratios against T (log T)^(k^2+2h) plus a least-squares log-log slope.

    Descriptive only: the conjectured asymptotics converge slowly, so no
    pass/fail is attached here.
    """
    if len(T_list) < 3:
        raise ConfigError(f"scaling report needs >= 3 heights, got {len(T_list)}")
    if any(t2 <= t1 for t1, t2 in zip(T_list, T_list[1:])):
        raise ConfigError("heights must be strictly increasing")
    expo = k**2 + 2.0 * h
    values = []
    ratios = []
    for T in T_list:
        est = joint_moment(MomentRequest(T, k, h, target, points_per_gap), acc, workers)
        values.append(est.value)
        ratios.append(est.value / (T * math.log(T) ** expo))
    xs = np.log(np.log(np.asarray(T_list)))
    ys = np.log(np.asarray(values) / np.asarray(T_list))
    slope = float(np.polyfit(xs, ys, 1)[0])
    return ScalingReport(
        k, h, target, tuple(float(t) for t in T_list), tuple(values), tuple(ratios), slope, expo
    )


def write_moment_csv(estimates: list[MomentEstimate], path) -> None:
    """Columns: T, k, h, target, value, mesh, panels, est_rel_error,
    ratio_to_conjectured_power."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "T",
                "k",
                "h",
                "target",
                "value",
                "mesh",
                "panels",
                "est_rel_error",
                "ratio_to_conjectured_power",
            ]
        )
        for est in estimates:
            req = est.request
            writer.writerow(
                [
                    repr(req.T),
                    repr(req.k),
                    repr(req.h),
                    req.target,
                    repr(est.value),
                    repr(est.mesh),
                    est.panels,
                    repr(est.est_rel_error),
                    repr(conjectured_power_ratio(est)),
                ]
            )
