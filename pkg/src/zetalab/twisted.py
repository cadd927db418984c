"""Twisted-moment machinery: shifted divisor sums, gcd/lcm pair sums, the
smooth cutoff, Mellin-type weights, contour main terms, direct integrals,
and combinatorial bound checks.

The second-moment main term is a double contour integral over circles of
radius 3/log T and 9/log T; the fourth-moment main term runs over four
circles of radius 3^j/log T.  Both are evaluated by the periodic trapezoid
rule, which is spectrally accurate while the integrand stays analytic in a
neighborhood of the node torus.  Direct quadrature of the same integrals
provides the independent cross-check.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .critline import DEFAULT_ACCURACY, EvalAccuracy, eval_grid, zeta_em, zeta_em_vec
from .dirpoly import DirichletPoly, factorize, poly_eval_grid
from .errors import CapacityError, DomainError, TruncationError

TWO_PI = 2.0 * math.pi

DEFAULT_PAIR_CAP = 100_000_000

WEIGHTS = ("dzeta2", "zeta2dzeta2", "dZ2", "Z2dZ2")
TARGETS = ("zeta", "hardyZ")


# ---------------------------------------------------------------------------
# Configuration types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftConfig:
    """Shift circles |z_j| = radius_scale * 3^j / log T and the node count.

    radius_scale = 1 gives the canonical circles, which the two-circle
    second-moment integral uses directly.  The four-circle integral cannot
    use them at desk heights: 3^4 / log T is order one, so the node torus
    crosses zeros of the zeta in the denominator and the Mellin factor spans
    e^(+-50), far beyond double precision.  Since the integrand is analytic
    in the polydisk between the origin poles and those zeros, the integral
    is invariant under proportional shrinking of the (nested) radii, and the
    four-fold evaluator picks a scale inside the safe region by default.
    """

    logT: float
    nodes_per_circle: int = 64
    radius_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.logT <= 0.0:
            raise DomainError("logT must be positive")
        if self.nodes_per_circle < 16 or self.nodes_per_circle % 2:
            raise DomainError("nodes_per_circle must be even and >= 16")
        if not 0.0 < self.radius_scale <= 1.0:
            raise DomainError("radius_scale must lie in (0, 1]")

    @property
    def radii(self) -> tuple[float, float, float, float]:
        return tuple(self.radius_scale * 3.0**j / self.logT for j in (1, 2, 3, 4))

    @staticmethod
    def for_height(
        T: float, nodes_per_circle: int = 64, radius_scale: float = 1.0
    ) -> "ShiftConfig":
        return ShiftConfig(math.log(T), nodes_per_circle, radius_scale)


def fourth_moment_scale(T: float) -> float:
    """Largest power of 1/2 keeping the four-circle torus both inside
    |z1+z2-z3-z4| < 3.5 (no denominator zeros) and conditioning-bounded
    (Mellin exponent within +-4)."""
    logT = math.log(T)
    sum_r = sum(3.0**j for j in (1, 2, 3, 4)) / logT
    l0 = math.log(T / TWO_PI)
    scale = 1.0
    while scale * sum_r > 3.5 or scale * sum_r * l0 / 2.0 > 4.0:
        scale *= 0.5
    return scale


@dataclass(frozen=True)
class CutoffFn:
    """Smooth bump: 1 on [1, 2], supported on [3/4, 9/4], C-infinity.

    Built from the standard exponential step s(x) = f(x)/(f(x)+f(1-x)) with
    f(x) = exp(-sharpness/x).
    """

    sharpness: float = 1.0
    plateau: tuple[float, float] = (1.0, 2.0)
    support: tuple[float, float] = (0.75, 2.25)

    def __post_init__(self) -> None:
        if self.sharpness <= 0.0:
            raise DomainError("sharpness must be positive")

    def _step(self, x: np.ndarray) -> np.ndarray:
        # Smooth 0 -> 1 on [0, 1]; clamped outside.
        x = np.clip(x, 0.0, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            f = np.where(x > 0.0, np.exp(-self.sharpness / np.maximum(x, 1e-300)), 0.0)
            g = np.where(x < 1.0, np.exp(-self.sharpness / np.maximum(1.0 - x, 1e-300)), 0.0)
        return f / (f + g)

    def __call__(self, u) -> np.ndarray | float:
        scalar = np.isscalar(u)
        u = np.asarray(u, dtype=float)
        lo, hi = self.support
        a, b = self.plateau
        out = np.zeros(u.shape)
        rise = (u > lo) & (u < a)
        fall = (u > b) & (u < hi)
        flat = (u >= a) & (u <= b)
        out[flat] = 1.0
        out[rise] = self._step((u[rise] - lo) / (a - lo))
        out[fall] = self._step((hi - u[fall]) / (hi - b))
        return float(out) if scalar else out


@dataclass(frozen=True)
class BSeriesConfig:
    truncation_depth: int = 60
    tail_tolerance: float = 1.0e-12

    def __post_init__(self) -> None:
        if self.truncation_depth < 10:
            raise DomainError("truncation depth must be >= 10")
        if self.tail_tolerance <= 0.0:
            raise DomainError("tail tolerance must be positive")


# ---------------------------------------------------------------------------
# Shifted divisor sums and the prime-power series factor
# ---------------------------------------------------------------------------


def _sigma_pp(p: int, e: int, z1: complex, z2: complex) -> complex:
    """Shifted divisor sum at a prime power: sum_{a+b=e} p^{-a z1 - b z2}."""
    lp = math.log(p)
    return complex(
        sum(np.exp(-lp * (a * z1 + (e - a) * z2)) for a in range(e + 1))
    )


def sigma_shift(n: int, z1: complex, z2: complex) -> complex:
    """sum over ab = n of a^{-z1} b^{-z2}; multiplicative in n."""
    if n < 1:
        raise DomainError(f"sigma_shift needs n >= 1, got {n}")
    out = 1.0 + 0.0j
    for p, e in factorize(n).items():
        out *= _sigma_pp(p, e, z1, z2)
    return out


def b_factor(
    n: int,
    z: tuple[complex, complex, complex, complex],
    cfg: BSeriesConfig = BSeriesConfig(),
) -> complex:
    """Product over p^m || n of the truncated series ratio

        sum_j sigma_{z1,z2}(p^{j+m}) sigma_{z3,z4}(p^j) p^-j
        ---------------------------------------------------- .
        sum_j sigma_{z1,z2}(p^j)     sigma_{z3,z4}(p^j) p^-j

    Requires |Re z_i| < 1/4 so the series converge with geometric margin.
    """
    z1, z2, z3, z4 = (complex(w) for w in z)
    max_re = max(abs(w.real) for w in (z1, z2, z3, z4))
    if max_re >= 0.25:
        raise DomainError(
            f"series factor needs |Re z_i| < 1/4 for convergence, got {max_re:.4g}"
        )
    if n < 1:
        raise DomainError(f"b_factor needs n >= 1, got {n}")
    out = 1.0 + 0.0j
    depth = cfg.truncation_depth
    for p, m in factorize(n).items():
        num = 0.0 + 0.0j
        den = 0.0 + 0.0j
        pj = 1.0
        last_num = 0.0
        for j in range(depth + 1):
            t12 = _sigma_pp(p, j + m, z1, z2)
            t34 = _sigma_pp(p, j, z3, z4)
            s12 = _sigma_pp(p, j, z1, z2)
            num += t12 * t34 / pj
            den += s12 * t34 / pj
            last_num = abs(t12 * t34) / pj
            pj *= p
        # Geometric tail bound: each step j -> j+1 multiplies the two divisor
        # sums by at most p^{2 max_re} and divides by p; the polynomial
        # (j+m+2)(j+2)/((j+m+1)(j+1)) factor at j >= 60 stays under 1.05.
        ratio = 1.05 * p ** (2.0 * max_re - 1.0)
        if ratio >= 1.0:
            raise TruncationError(f"series ratio {ratio:.3g} >= 1 at p = {p}")
        tail = last_num * ratio / (1.0 - ratio)
        if abs(den) == 0.0 or tail / abs(den) > cfg.tail_tolerance:
            raise TruncationError(
                f"series tail {tail:.3g} exceeds tolerance {cfg.tail_tolerance:g} at p = {p}"
            )
        out *= num / den
    return out


# ---------------------------------------------------------------------------
# Pair sums over polynomial supports
# ---------------------------------------------------------------------------


def _support_pairs(a: DirichletPoly, cap: int):
    support = a.support()
    if len(support) ** 2 > cap:
        raise CapacityError(
            f"support of {len(support)} gives {len(support)**2} pairs > cap {cap}"
        )
    for h in support:
        for k in support:
            g = math.gcd(h, k)
            yield h, k, g, (h // g) * k


def f_sum(
    a: DirichletPoly, z1: complex, z2: complex, cap: int = DEFAULT_PAIR_CAP
) -> complex:
    """Exact double sum a_h conj(a_k) / [h,k] * (h,k)^{z1+z2} / (h^{z1} k^{z2})."""
    total = 0.0 + 0.0j
    for h, k, g, lcm in _support_pairs(a, cap):
        coef = a.coeffs[h] * np.conj(a.coeffs[k]) / lcm
        total += coef * np.exp(
            (z1 + z2) * math.log(g) - z1 * math.log(h) - z2 * math.log(k)
        )
    return complex(total)


def g_sum(
    a: DirichletPoly,
    z: tuple[complex, complex, complex, complex],
    cfg: BSeriesConfig = BSeriesConfig(),
    cap: int = DEFAULT_PAIR_CAP,
) -> complex:
    """Pair sum weighted by series factors at the coprime parts h/(h,k), k/(h,k)."""
    z1, z2, z3, z4 = (complex(w) for w in z)
    total = 0.0 + 0.0j
    for h, k, g, lcm in _support_pairs(a, cap):
        coef = a.coeffs[h] * np.conj(a.coeffs[k]) / lcm
        total += (
            coef
            * b_factor(h // g, (z1, z2, z3, z4), cfg)
            * b_factor(k // g, (z3, z4, z1, z2), cfg)
        )
    return complex(total)


def _pair_sum_grid(
    a: DirichletPoly, zrow: np.ndarray, zcol: np.ndarray, cap: int = DEFAULT_PAIR_CAP
) -> np.ndarray:
    """f_sum on the grid zrow x zcol; separable per support pair."""
    out = np.zeros((zrow.size, zcol.size), dtype=complex)
    for h, k, g, lcm in _support_pairs(a, cap):
        coef = a.coeffs[h] * np.conj(a.coeffs[k]) / lcm
        lg, lh, lk = math.log(g), math.log(h), math.log(k)
        out += coef * np.outer(np.exp(zrow * (lg - lh)), np.exp(zcol * (lg - lk)))
    return out


def a_ratio(z: tuple[complex, complex, complex, complex]) -> complex:
    """Quotient of five zeta values at 1 + z_i + z_j pairings over 2 + sum z.

    Rejects arguments within 1e-10 of the pole of any numerator factor.
    """
    z1, z2, z3, z4 = (complex(w) for w in z)
    for u, v in ((z1, z3), (z1, z4), (z2, z3), (z2, z4)):
        if abs(u + v) < 1.0e-10:
            raise DomainError(f"pole: z_i + z_j = {u + v} too close to 0")
    num = 1.0 + 0.0j
    for u, v in ((z1, z3), (z1, z4), (z2, z3), (z2, z4)):
        val, _ = zeta_em(1.0 + u + v)
        num *= val
    den, _ = zeta_em(2.0 + z1 + z2 + z3 + z4)
    return num / den


def vandermonde(z: tuple[complex, complex, complex, complex]) -> complex:
    zs = [complex(w) for w in z]
    out = 1.0 + 0.0j
    for j in range(4):
        for k in range(j + 1, 4):
            out *= zs[k] - zs[j]
    return out


# ---------------------------------------------------------------------------
# Mellin-type weight: integral of (t/2pi)^w phi(t/T) dt
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _u_rule(phi: CutoffFn, order: int = 32, rise_panels: int = 8, flat_panels: int = 4):
    """Gauss-Legendre composite rule on the support of phi, weights folded."""
    xs, ws = np.polynomial.legendre.leggauss(order)
    lo, hi = phi.support
    a, b = phi.plateau
    edges: list[float] = []
    edges.extend(np.linspace(lo, a, rise_panels + 1)[:-1])
    edges.extend(np.linspace(a, b, flat_panels + 1)[:-1])
    edges.extend(np.linspace(b, hi, rise_panels + 1))
    nodes = []
    weights = []
    for left, right in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (left + right)
        half = 0.5 * (right - left)
        nodes.append(mid + half * xs)
        weights.append(half * ws)
    u = np.concatenate(nodes)
    w = np.concatenate(weights) * phi(u)
    return u, w, np.log(u)


def mellin_weight(w: complex, T: float, phi: CutoffFn = CutoffFn()) -> complex:
    """Integral of (t/2pi)^w phi(t/T) dt over the support of phi(./T).

    Substituting t = T u gives T (T/2pi)^w times a fixed integral in u,
    evaluated by a cached composite Gauss-Legendre rule to relative 1e-8.
    """
    if T <= 0.0:
        raise DomainError("T must be positive")
    u, wq, lu = _u_rule(phi)
    val = np.sum(wq * np.exp(w * lu))
    return complex(T * np.exp(w * math.log(T / TWO_PI)) * val)


def _mellin_tables(
    wgrid: np.ndarray, T: float, phi: CutoffFn
) -> tuple[np.ndarray, np.ndarray]:
    """M0 and M2 = d^2/dw^2 M0 on an array of exponents w.

    M2 carries the squared log factor of the derivative weights:
    M2(w) = integral of log(t/2pi)^2 (t/2pi)^w phi(t/T) dt.
    """
    u, wq, lu = _u_rule(phi)
    l0 = math.log(T / TWO_PI)
    shape = wgrid.shape
    wflat = wgrid.ravel()[:, None]
    core = np.exp(wflat * (l0 + lu)[None, :])
    m0 = T * (core * wq[None, :]).sum(axis=1)
    m2 = T * (core * (wq * (l0 + lu) ** 2)[None, :]).sum(axis=1)
    return m0.reshape(shape), m2.reshape(shape)


# ---------------------------------------------------------------------------
# Contour main terms
# ---------------------------------------------------------------------------


def _circle(radius: float, n: int) -> np.ndarray:
    return radius * np.exp(2j * math.pi * np.arange(n) / n)


def _check_poly_length(a: DirichletPoly, T: float, exponent: float) -> None:
    if a.length_bound > 1 and math.log(a.length_bound) > exponent * math.log(T):
        raise DomainError(
            f"polynomial length {a.length_bound} exceeds T^{exponent:g}"
        )


def contour_second_moment(
    a: DirichletPoly,
    T: float,
    cfg: ShiftConfig | None = None,
    phi: CutoffFn = CutoffFn(),
    target: str = "zeta",
) -> float:
    """Main term of the derivative second moment twisted by |A|^2.

    Double trapezoid contour integral over |z1| = 3/log T, |z2| = 9/log T of

        F(z1, -z2) zeta(1+z1-z2) (z1-z2)^2 W(z1, z2) / (z1^4 z2^4),

    where W bundles the Mellin weight with the derivative factors:
    the zeta target uses (z1+z2)^2 M0 - (z1 z2 / 2)^2 M2, the Hardy-Z target
    uses (z1^2 - z2^2)^2 M0, both at exponent (z1 - z2)/2.
    """
    if target not in TARGETS:
        raise DomainError(f"target must be one of {TARGETS}, got {target!r}")
    if cfg is None:
        cfg = ShiftConfig.for_height(T)
    _check_poly_length(a, T, 0.45)
    n = cfg.nodes_per_circle
    r1, r2, _, _ = cfg.radii
    z1 = _circle(r1, n)
    z2 = _circle(r2, n)
    # Distinct radii keep zeta(1 + z1 - z2) away from its pole.
    assert np.min(np.abs(z1[:, None] - z2[None, :])) >= (r2 - r1) * 0.999

    fgrid = _pair_sum_grid(a, z1, -z2)
    zgrid, _, _ = zeta_em_vec(1.0 + z1[:, None] - z2[None, :])
    w = 0.5 * (z1[:, None] - z2[None, :])
    m0, m2 = _mellin_tables(w, T, phi)
    diff2 = (z1[:, None] - z2[None, :]) ** 2
    if target == "zeta":
        core = diff2 * (
            (z1[:, None] + z2[None, :]) ** 2 * m0
            - (0.5 * z1[:, None] * z2[None, :]) ** 2 * m2
        )
    else:
        # The Hardy-Z weight collapses the derivative bracket: the squared
        # difference is already inside (z1^2 - z2^2)^2.
        core = (z1[:, None] ** 2 - z2[None, :] ** 2) ** 2 * m0
    core = fgrid * zgrid * core / (z1[:, None] ** 3 * z2[None, :] ** 3)
    total = complex(core.sum()) / n**2
    return float(total.real)


def contour_fourth_moment(
    a: DirichletPoly,
    T: float,
    cfg: ShiftConfig | None = None,
    phi: CutoffFn = CutoffFn(),
    target: str = "zeta",
    bcfg: BSeriesConfig = BSeriesConfig(),
) -> float:
    """Main term of the twisted fourth-type moment (|zeta|^2 |zeta'|^2 weight).

    Four-fold trapezoid contour over |z_j| = 3^j / log T of

        A(z1,z2,-z3,-z4) G(z1,z2,-z3,-z4) Delta(z)^2 W(z) / prod z_m^6,

    where W is z1^2 z2^2 z3^2 z4^2 M2 - e3^2 M0 for the zeta target and
    -e3^2 M0 for the Hardy-Z target (e3 the third elementary symmetric
    function), at Mellin exponent (z1+z2-z3-z4)/2.

    Desk-scale radii exceed the convergence region of the series factors, so
    only the constant polynomial A = 1 (G = 1) is evaluable here.
    """
    if target not in TARGETS:
        raise DomainError(f"target must be one of {TARGETS}, got {target!r}")
    if cfg is None:
        cfg = ShiftConfig.for_height(T, 32, fourth_moment_scale(T))
    _check_poly_length(a, T, 0.2)
    if a.support() != [1]:
        max_re = cfg.radii[3]
        raise DomainError(
            f"series factors need |Re z| < 1/4 but the outer radius is {max_re:.3g}; "
            "only A = 1 is evaluable at desk scale"
        )
    g_const = complex(a.coeffs[1] * np.conj(a.coeffs[1]))

    n = cfg.nodes_per_circle
    r1, r2, r3, r4 = cfg.radii
    if (r1 + r2 + r3 + r4) >= 4.0:
        raise DomainError(
            f"radius sum {r1 + r2 + r3 + r4:.3g} reaches the zeros of the"
            " denominator zeta; shrink radius_scale (see fourth_moment_scale)"
        )
    z1, z2, z3, z4 = (_circle(r, n) for r in (r1, r2, r3, r4))

    znum13, _, _ = zeta_em_vec(1.0 + z1[:, None] - z3[None, :])
    znum14, _, _ = zeta_em_vec(1.0 + z1[:, None] - z4[None, :])
    znum23, _, _ = zeta_em_vec(1.0 + z2[:, None] - z3[None, :])
    znum24, _, _ = zeta_em_vec(1.0 + z2[:, None] - z4[None, :])

    s12 = z1[:, None] + z2[None, :]
    p12 = z1[:, None] * z2[None, :]
    d12 = z2[None, :] - z1[:, None]
    d13 = z3[None, :] - z1[:, None]
    d14 = z4[None, :] - z1[:, None]
    d23 = z3[None, :] - z2[:, None]
    d24 = z4[None, :] - z2[:, None]
    d34 = z4[None, :] - z3[:, None]
    w1 = z1**-5
    w2 = z2**-5
    w3 = z3**-5
    w4 = z4**-5

    u, wq, lu = _u_rule(phi)
    l0 = math.log(T / TWO_PI)
    e12 = np.exp(0.5 * s12.ravel()[:, None] * (l0 + lu)[None, :])

    total = 0.0 + 0.0j
    s12f = s12.ravel()
    p12f = p12.ravel()
    d12f = d12.ravel()
    w12f = np.outer(w1, w2).ravel()
    for ki in range(n):
        s34_row = z3[ki] + z4  # (n,)
        args = 2.0 + s12f[:, None] - s34_row[None, :]
        zden, _, _ = zeta_em_vec(args)
        e34 = np.exp(-0.5 * s34_row[:, None] * (l0 + lu)[None, :])
        m0_blk = T * (e12 * wq[None, :]) @ e34.T
        m2_blk = T * (e12 * (wq * (l0 + lu) ** 2)[None, :]) @ e34.T
        for li in range(n):
            s34 = s34_row[li]
            p34 = z3[ki] * z4[li]
            anum = np.outer(znum13[:, ki] * znum14[:, li], znum23[:, ki] * znum24[:, li])
            afac = anum.ravel() / zden[:, li]
            delta = (
                d12f
                * np.outer(d13[:, ki] * d14[:, li], d23[:, ki] * d24[:, li]).ravel()
                * d34[ki, li]
            )
            e3 = p12f * s34 + p34 * s12f
            if target == "zeta":
                # Derivative bracket (e4 L / 2)^2 - e3^2: differentiating the
                # shifted pole factors gives (sum 1/z_m -+ L/2) twice, so the
                # squared-log term carries the quarter.
                bracket = 0.25 * (p12f * p34) ** 2 * m2_blk[:, li] - e3**2 * m0_blk[:, li]
            else:
                bracket = -(e3**2) * m0_blk[:, li]
            total += (
                (afac * delta**2 * bracket * w12f).sum() * w3[ki] * w4[li]
            )
    value = g_const * total / (4.0 * n**4)
    return float(value.real)


# ---------------------------------------------------------------------------
# Direct integrals
# ---------------------------------------------------------------------------


def twisted_direct(
    a: DirichletPoly,
    T: float,
    weight: str = "dzeta2",
    phi: CutoffFn = CutoffFn(),
    mesh: float | None = None,
    acc: EvalAccuracy = DEFAULT_ACCURACY,
    workers: int = 1,
    points_per_gap: int = 20,
) -> float:
    """Direct midpoint quadrature of the weighted integrand times
    |A(1/2+it)|^2 phi(t/T) over the support of the cutoff."""
    if weight not in WEIGHTS:
        raise DomainError(f"weight must be one of {WEIGHTS}, got {weight!r}")
    lo = phi.support[0] * T
    hi = phi.support[1] * T
    if mesh is None:
        mesh = TWO_PI / math.log(T / TWO_PI) / points_per_gap
    panels = int(math.ceil((hi - lo) / mesh))
    step = (hi - lo) / panels
    ts = lo + (np.arange(panels) + 0.5) * step
    grid = eval_grid(ts, acc, workers)
    z2 = grid.Z**2
    if weight == "dzeta2":
        vals = grid.dzeta_abs2()
    elif weight == "zeta2dzeta2":
        vals = z2 * grid.dzeta_abs2()
    elif weight == "dZ2":
        vals = grid.Z_prime**2
    else:
        vals = z2 * grid.Z_prime**2
    amps = np.abs(poly_eval_grid(a, ts)) ** 2
    return float(np.sum(vals * amps * phi(ts / T)) * step)


# ---------------------------------------------------------------------------
# Combinatorial bound checks
# ---------------------------------------------------------------------------


def _exponent_vectors(r: int, count: int) -> np.ndarray:
    """All nonnegative integer vectors of the given length summing to r."""
    if count == 0:
        return np.zeros((1 if r == 0 else 0, 0), dtype=np.int64)
    rows: list[list[int]] = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            rows.append(prefix + [remaining])
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], r, count)
    return np.asarray(rows, dtype=np.int64)


@dataclass(frozen=True)
class RankinReport:
    primes: tuple[int, ...]
    r: int
    value: float
    bound: float
    holds: bool
    pair_count: int


def rankin_bound_check(range_primes: list[int], r: int) -> RankinReport:
    """Brute-force the sum r!^2 g(n) g(m) / [n, m] over Omega(n) = Omega(m) = r
    with support on the given primes, and compare against
    2^r r! P^r exp(P) with P the reciprocal sum (bound formed in log space).
    """
    ps = tuple(int(p) for p in range_primes)
    if len(ps) > 8 or r > 6:
        raise CapacityError("brute-force check limited to <= 8 primes and r <= 6")
    if r < 0:
        raise DomainError("r must be nonnegative")
    vecs = _exponent_vectors(r, len(ps))
    logs = np.log(np.asarray(ps, dtype=float))
    gvals = np.array(
        [math.prod(1.0 / math.factorial(int(e)) for e in row) for row in vecs]
    )
    total = 0.0
    for i in range(vecs.shape[0]):
        lcm_log = (np.maximum(vecs[i][None, :], vecs) * logs[None, :]).sum(axis=1)
        total += float(np.sum(gvals[i] * gvals * np.exp(-lcm_log)))
    total *= math.factorial(r) ** 2
    p_sum = float(np.sum(1.0 / np.asarray(ps, dtype=float)))
    log_bound = r * math.log(2.0) + math.lgamma(r + 1) + (
        r * math.log(p_sum) if r else 0.0
    ) + p_sum
    bound = math.exp(log_bound)
    return RankinReport(
        ps, r, total, bound, total <= bound * (1.0 + 1.0e-12), vecs.shape[0] ** 2
    )


def twist_pair_sum_bruteforce(
    range_primes: list[int], twist: float, omega_cap: int = 24
) -> float:
    """Cutoff-free pair sum twist^(Omega(n)+Omega(m)) g(n) g(m) / [n, m] by
    enumeration up to Omega <= omega_cap (the tail is factorially small)."""
    ps = [int(p) for p in range_primes]
    if len(ps) > 4:
        raise CapacityError("brute-force pair sum limited to <= 4 primes")
    vecs = np.concatenate(
        [_exponent_vectors(r, len(ps)) for r in range(omega_cap + 1)], axis=0
    )
    logs = np.log(np.asarray(ps, dtype=float))
    weights = np.array(
        [
            twist ** int(row.sum())
            * math.prod(1.0 / math.factorial(int(e)) for e in row)
            for row in vecs
        ]
    )
    total = 0.0
    for i in range(vecs.shape[0]):
        lcm_log = (np.maximum(vecs[i][None, :], vecs) * logs[None, :]).sum(axis=1)
        total += float(np.sum(weights[i] * weights * np.exp(-lcm_log)))
    return total


def twist_pair_sum_euler(
    range_primes: list[int], twist: float, depth: int = 40
) -> float:
    """Euler-product route to the same cutoff-free pair sum."""
    out = 1.0
    for p in range_primes:
        p = int(p)
        local = 0.0
        for e in range(depth + 1):
            for f in range(depth + 1):
                local += (
                    twist ** (e + f)
                    / (math.factorial(e) * math.factorial(f))
                    / p ** max(e, f)
                )
        out *= local
    return out


def write_comparison_csv(rows: list[dict], path) -> None:
    """Columns: T, polynomial_id, method, weight, value, nodes, mesh, ratio."""
    fields = ["T", "polynomial_id", "method", "weight", "value", "nodes", "mesh", "ratio"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fields})
