"""Pointwise interpolation bound between joint-moment integrands, plus a
numeric Hoelder check for moment triples.

The bound dominates |zeta|^(2k-2) |zeta'|^2 by second- and fourth-moment
integrands twisted with increment factors, with per-increment penalty
weights |P_v(s) / (c_p P_v)|^(2 ceil(c_p P_v)).  Both the printed form of
the penalty sum (full product in the second summand) and the partial-product
variant are implemented; the inequality must hold pointwise in either case,
so a failure is an implementation bug, never data.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .critline import DEFAULT_ACCURACY, EvalAccuracy, eval_grid
from .dirpoly import increment_series_eval
from .errors import ConfigError, DomainError
from .moments import MomentEstimate
from .primes import IncrementScheme, prime_sum_at

VARIANTS = ("full_product", "partial_product")
TARGETS = ("zeta", "hardyZ")

# Exact rational ceil is affordable up to this many primes per range.
_EXACT_CEIL_MAX_PRIMES = 10_000


@dataclass(frozen=True)
class InterpolationConfig:
    k: float
    scheme: IncrementScheme
    c_omega: float = 500.0
    c_p: float = 50.0
    variant: str = "full_product"

    def __post_init__(self) -> None:
        if not 1.0 <= self.k <= 2.0:
            raise DomainError(f"k must lie in [1, 2], got {self.k}")
        if self.c_omega <= 0.0 or self.c_p <= 0.0:
            raise DomainError("cutoff constants must be positive")
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


def penalty_exponent(cfg: InterpolationConfig, v: int) -> int:
    """ceil(c_p * P_v) in exact integer arithmetic.

    P_v is re-accumulated as an exact rational when the range is small
    enough; otherwise the float value is nudged up before the ceiling.
    """
    chunk = cfg.scheme.prime_range(v)
    if chunk.size == 0:
        return 0
    if chunk.size <= _EXACT_CEIL_MAX_PRIMES:
        pv = sum(Fraction(1, int(p)) for p in chunk)
        return math.ceil(Fraction(cfg.c_p) * pv)
    return math.ceil(cfg.c_p * cfg.scheme.variance(v) * (1.0 + 1.0e-12))


def _increment_products(
    cfg: InterpolationConfig, alpha: float, t: np.ndarray
) -> tuple[np.ndarray, list[np.ndarray]]:
    """|N_j(s; alpha)|^2 for all increments: full product and prefix products.

    prefix[v-2] holds the product over 2 <= j < v; the full product is the
    final prefix extended by the last factor.
    """
    scheme = cfg.scheme
    prefix: list[np.ndarray] = []
    running = np.ones(t.shape)
    for j in range(2, scheme.ell + 1):
        prefix.append(running.copy())
        vals = increment_series_eval(scheme, j, alpha, t, cfg.c_omega)
        running = running * np.abs(vals) ** 2
    return running, prefix


def interpolation_sides_grid(
    t: np.ndarray,
    cfg: InterpolationConfig,
    target: str = "zeta",
    acc: EvalAccuracy = DEFAULT_ACCURACY,
) -> tuple[np.ndarray, np.ndarray]:
    """Vector (lhs, rhs) of the pointwise bound over an ascending grid."""
    if target not in TARGETS:
        raise DomainError(f"target must be one of {TARGETS}, got {target!r}")
    t = np.asarray(t, dtype=float)
    grid = eval_grid(t, acc)
    za = np.abs(grid.Z)
    dz2 = grid.dzeta_abs2() if target == "zeta" else grid.Z_prime**2
    k = cfg.k
    lhs = za ** (2.0 * k - 2.0) * dz2

    full_m2, prefix_m2 = _increment_products(cfg, k - 2.0, t)
    full_m1, prefix_m1 = _increment_products(cfg, k - 1.0, t)
    coef4 = 2.0 * k
    coef2 = 4.0 - 2.0 * k
    rhs = coef4 * za**2 * dz2 * full_m2 + coef2 * dz2 * full_m1

    scheme = cfg.scheme
    for v in range(2, scheme.ell + 1):
        pv = scheme.variance(v)
        if pv == 0.0:
            continue
        m_v = penalty_exponent(cfg, v)
        psum = np.abs(
            np.array(
                [prime_sum_at(scheme, v, complex(0.5, tt)) for tt in t], dtype=complex
            )
        )
        # Penalty in log space: the exponent 2 ceil(c_p P_v) can be large.
        with np.errstate(divide="ignore"):
            logw = 2.0 * m_v * (np.log(psum) - math.log(cfg.c_p * pv))
        weight = np.where(psum > 0.0, np.exp(logw), 0.0)
        second = full_m1 if cfg.variant == "full_product" else prefix_m1[v - 2]
        rhs = rhs + (
            coef4 * za**2 * dz2 * prefix_m2[v - 2] + coef2 * dz2 * second
        ) * weight
    return lhs, rhs


def interpolation_sides(
    t: float,
    cfg: InterpolationConfig,
    target: str = "zeta",
    acc: EvalAccuracy = DEFAULT_ACCURACY,
) -> tuple[float, float]:
    """Pointwise (lhs, rhs) of the interpolation bound at a single height."""
    lhs, rhs = interpolation_sides_grid(np.array([t]), cfg, target, acc)
    return float(lhs[0]), float(rhs[0])


@dataclass(frozen=True)
class InterpolationReport:
    t: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    margin: np.ndarray
    passed: np.ndarray
    k: float
    target: str
    variant: str

    @property
    def failures(self) -> np.ndarray:
        return self.t[~self.passed]

    @property
    def min_margin(self) -> float:
        return float(np.min(self.margin)) if self.margin.size else math.inf

    @property
    def all_passed(self) -> bool:
        return bool(np.all(self.passed))


def check_interpolation(
    grid: np.ndarray,
    cfg: InterpolationConfig,
    target: str = "zeta",
    acc: EvalAccuracy = DEFAULT_ACCURACY,
) -> InterpolationReport:
    """Pointwise pass/fail over a grid; failures are data, not exceptions."""
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size == 0:
        empty = np.zeros(0)
        return InterpolationReport(
            empty, empty, empty, empty, np.zeros(0, dtype=bool), cfg.k, target, cfg.variant
        )
    lhs, rhs = interpolation_sides_grid(grid, cfg, target, acc)
    margin = rhs - lhs
    return InterpolationReport(grid, lhs, rhs, margin, margin >= 0.0, cfg.k, target, cfg.variant)


def write_interpolation_csv(report: InterpolationReport, path) -> None:
    """Columns: t, k, lhs, rhs, margin, pass."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "k", "lhs", "rhs", "margin", "pass"])
        for i in range(report.t.size):
            writer.writerow(
                [
                    repr(float(report.t[i])),
                    repr(report.k),
                    repr(float(report.lhs[i])),
                    repr(float(report.rhs[i])),
                    repr(float(report.margin[i])),
                    int(report.passed[i]),
                ]
            )


@dataclass(frozen=True)
class HolderReport:
    h: float
    value: float
    bound: float
    tol: float
    slack: float
    holds: bool


def verify_holder(
    m_k0: MomentEstimate,
    m_k1: MomentEstimate,
    m_kh: MomentEstimate,
    h: float,
) -> HolderReport:
    """Check value(k,h) <= value(k,1)^h * value(k,0)^(1-h) * (1 + tol).

    tol propagates the three quadrature error estimates (3x the largest).
    The estimates must share T, k, target, and mesh.
    """
    if not 0.0 <= h <= 1.0:
        raise ConfigError(f"h must lie in [0, 1], got {h}")
    reqs = (m_k0.request, m_k1.request, m_kh.request)
    if len({r.T for r in reqs}) != 1 or len({r.k for r in reqs}) != 1:
        raise ConfigError("moment estimates must share T and k")
    if len({r.target for r in reqs}) != 1:
        raise ConfigError("moment estimates must share the target")
    if len({r.points_per_gap for r in reqs}) != 1:
        raise ConfigError("moment estimates must share the mesh")
    if (m_k0.request.h, m_k1.request.h, m_kh.request.h) != (0.0, 1.0, h):
        raise ConfigError("estimates must carry h = 0, 1, and the tested h")
    tol = 3.0 * max(m_k0.est_rel_error, m_k1.est_rel_error, m_kh.est_rel_error)
    bound = m_k1.value**h * m_k0.value ** (1.0 - h) * (1.0 + tol)
    slack = bound / m_kh.value - 1.0 if m_kh.value > 0.0 else math.inf
    return HolderReport(h, m_kh.value, bound, tol, slack, m_kh.value <= bound)
