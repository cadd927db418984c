"""Critical-line evaluation: theta, Hardy Z, and an Euler-Maclaurin oracle.

Two independent routes are maintained on purpose.  The fast path is the
Riemann-Siegel main sum with up to four correction terms built from the
cosine-ratio function Psi; the oracle path is Euler-Maclaurin summation of
zeta and a Stirling evaluation of the Gamma phase, valid down to t = 0.
Every production quantity can therefore be cross-checked against an
implementation that shares no code with it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi
LOG_PI = math.log(math.pi)

RS_MIN_T = 50.0
ORACLE_MIN_T = 10.0
MAX_HEIGHT = 1.0e7
EM_MAX_IM = 1.0e5

# Empirical caps on the Riemann-Siegel remainder after K correction terms,
# multiplying (t/2pi)^{-(2K+3)/4}; calibrated against the Euler-Maclaurin
# path on [50, 2000] with >2x headroom.  The K = 3, 4 caps are inflated by
# the slow convergence near integer sqrt(t/2pi), where the length of the
# main sum jumps.
RS_ERR_COEF = (0.07, 0.012, 1.0e-3, 1.1e-3, 8.5e-3)

MAX_RS_TERMS = 4


# ---------------------------------------------------------------------------
# Bernoulli numbers (exact recurrence, cached as floats)
# ---------------------------------------------------------------------------

_BERNOULLI_FLOATS: list[float] = []


def _bernoulli(n_max: int) -> list[float]:
    """B_0..B_{n_max} as floats, B_1 = -1/2 convention."""
    global _BERNOULLI_FLOATS
    if len(_BERNOULLI_FLOATS) > n_max:
        return _BERNOULLI_FLOATS
    bs: list[Fraction] = [Fraction(1)]
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        comb = 1
        for j in range(m):
            comb = math.comb(m + 1, j)
            acc += comb * bs[j]
        bs.append(-acc / (m + 1))
    _BERNOULLI_FLOATS = [float(b) for b in bs]
    return _BERNOULLI_FLOATS


# ---------------------------------------------------------------------------
# Accuracy knobs and sample container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvalAccuracy:
    """Evaluation controls.

    rs_correction_terms counts Riemann-Siegel correction terms beyond the
    main sum (0..4; the value 4 is needed to reach 1e-6 agreement with the
    oracle near t = 100).  em_terms = 0 lets the oracle pick its own cutoff.
    """

    rs_correction_terms: int = 4
    em_terms: int = 0
    em_bernoulli_terms: int = 30
    fd_step: float = 1.0e-3

    def __post_init__(self) -> None:
        if not 0 <= self.rs_correction_terms <= MAX_RS_TERMS:
            raise DomainError(
                f"rs_correction_terms must lie in [0, {MAX_RS_TERMS}], got {self.rs_correction_terms}"
            )
        if self.em_terms < 0 or self.em_bernoulli_terms < 1:
            raise DomainError("Euler-Maclaurin term counts must be nonnegative")
        if not self.fd_step > 0.0:
            raise DomainError("fd_step must be positive")


DEFAULT_ACCURACY = EvalAccuracy()


@dataclass(frozen=True)
class CriticalPointSample:
    """All integrand ingredients at one height t."""

    t: float
    theta: float
    theta_prime: float
    Z: float
    Z_prime: float
    zeta: complex
    zeta_prime: complex
    est_abs_error: float


# ---------------------------------------------------------------------------
# Theta: asymptotic expansion (fast) and Gamma-phase Stirling (oracle)
# ---------------------------------------------------------------------------

# Coefficients of the 1/t expansion of theta beyond the elementary part.
_THETA_TAIL = ((1.0 / 48.0, 1), (7.0 / 5760.0, 3), (31.0 / 80640.0, 5), (127.0 / 430080.0, 7))


def theta_pair(t: float) -> tuple[float, float]:
    """theta(t) and theta'(t) from the standard asymptotic expansion.

    Valid for t >= 10 with absolute error below 1e-9 (the truncation after
    the t^-7 term is ~3e-12 at t = 10).
    """
    if t < ORACLE_MIN_T:
        raise DomainError(f"theta expansion needs t >= {ORACLE_MIN_T}, got {t}")
    half_log = 0.5 * math.log(t / TWO_PI)
    theta = t * half_log - t / 2.0 - math.pi / 8.0
    theta_p = half_log
    for coef, power in _THETA_TAIL:
        theta += coef / t**power
        theta_p -= coef * power / t ** (power + 1)
    return theta, theta_p


def theta_pair_vec(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if np.any(t < ORACLE_MIN_T):
        raise DomainError("theta expansion needs t >= 10 everywhere on the grid")
    half_log = 0.5 * np.log(t / TWO_PI)
    theta = t * half_log - t / 2.0 - math.pi / 8.0
    theta_p = half_log.copy()
    for coef, power in _THETA_TAIL:
        theta += coef / t**power
        theta_p -= coef * power / t ** (power + 1)
    return theta, theta_p


def _log_gamma(z: complex) -> complex:
    """Principal log Gamma by argument shift plus a Stirling tail."""
    if z.real <= 0.0:
        raise DomainError(f"log Gamma evaluation needs Re z > 0, got {z}")
    shift = 0.0 + 0.0j
    w = complex(z)
    while abs(w) < 16.0:
        shift += np.log(w)
        w += 1.0
    bern = _bernoulli(22)
    out = (w - 0.5) * np.log(w) - w + 0.5 * math.log(TWO_PI)
    wp = w
    for k in range(1, 11):
        out += bern[2 * k] / ((2 * k) * (2 * k - 1) * wp)
        wp *= w * w
    return out - shift


def _digamma(z: complex) -> complex:
    if z.real <= 0.0:
        raise DomainError(f"digamma evaluation needs Re z > 0, got {z}")
    shift = 0.0 + 0.0j
    w = complex(z)
    while abs(w) < 16.0:
        shift += 1.0 / w
        w += 1.0
    bern = _bernoulli(22)
    out = np.log(w) - 0.5 / w
    wp = w * w
    for k in range(1, 11):
        out -= bern[2 * k] / ((2 * k) * wp)
        wp *= w * w
    return out - shift


def theta_gamma(t: float) -> float:
    """Oracle theta via the Gamma phase; valid for all t >= 0."""
    lg = _log_gamma(0.25 + 0.5j * t)
    return lg.imag - 0.5 * t * LOG_PI


def theta_gamma_prime(t: float) -> float:
    return 0.5 * _digamma(0.25 + 0.5j * t).real - 0.5 * LOG_PI


# ---------------------------------------------------------------------------
# Euler-Maclaurin zeta (oracle for every zeta appearance)
# ---------------------------------------------------------------------------


def _em_params(s: complex, acc: EvalAccuracy) -> tuple[int, int]:
    m_terms = acc.em_bernoulli_terms
    if acc.em_terms > 0:
        return acc.em_terms, m_terms
    # Pick N so the Bernoulli tail ratio q = (|s| + 2M) / (2 pi N) is small
    # enough that 2 N^{1-sigma} q^{2M} clears 1e-13; sigma below 1/2 needs a
    # smaller q, handled by doubling.
    mag = abs(s)
    n_terms = max(20, math.ceil((mag + 2 * m_terms) / (2.0 * math.pi * 0.5)))
    for _ in range(12):
        q = (mag + 2 * m_terms) / (TWO_PI * n_terms)
        bound = 2.0 * n_terms ** max(1.0 - s.real, 0.5) * q ** (2 * m_terms)
        if bound < 1.0e-13:
            break
        n_terms *= 2
    return n_terms, m_terms


def _zeta_em_core(
    s: np.ndarray, n_terms: int, m_terms: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Euler-Maclaurin zeta and derivative for a 1-d array of s.

    Returns (zeta, zeta', tail estimate).  The estimate is the first omitted
    Bernoulli term scaled by the usual |s + 2M + 1| / (sigma + 2M + 1) factor,
    plus a roundoff floor for the cancellation in the main power sum.
    """
    s = np.asarray(s, dtype=complex)
    ns = np.arange(1, n_terms + 1, dtype=float)
    logs = np.log(ns)
    # Power sums via an outer product, chunked over s to bound memory.
    zeta = np.zeros(s.shape, dtype=complex)
    dzeta = np.zeros(s.shape, dtype=complex)
    chunk = max(1, (1 << 22) // n_terms)
    for lo in range(0, s.size, chunk):
        ss = s[lo : lo + chunk, None]
        pows = np.exp(-ss * logs[None, :])
        zeta[lo : lo + chunk] = pows.sum(axis=1)
        dzeta[lo : lo + chunk] = -(pows * logs[None, :]).sum(axis=1)

    log_n = math.log(n_terms)
    n_pow_1ms = np.exp((1.0 - s) * log_n)  # N^{1-s}
    n_pow_ms = n_pow_1ms / n_terms  # N^{-s}
    sm1 = s - 1.0
    zeta += n_pow_1ms / sm1 - 0.5 * n_pow_ms
    dzeta += (-log_n * n_pow_1ms / sm1 - n_pow_1ms / sm1**2) + 0.5 * log_n * n_pow_ms

    # Correction terms B_{2k}/(2k)! * prod_{i=0}^{2k-2}(s+i) * N^{-s-2k+1},
    # with the rising-factorial product and its s-derivative carried by a
    # product-rule recursion (no divisions, so zeros of the product are safe).
    bern = _bernoulli(2 * m_terms + 4)
    inv_n2 = 1.0 / float(n_terms) ** 2
    prod = s.copy()
    dprod = np.ones_like(s)
    coef = bern[2] / 2.0
    scale = n_pow_ms / n_terms
    zeta += coef * prod * scale
    dzeta += coef * (dprod - prod * log_n) * scale
    for k in range(1, m_terms + 1):
        coef *= (bern[2 * k + 2] / bern[2 * k]) / ((2 * k + 1) * (2 * k + 2))
        f1 = s + (2 * k - 1)
        f2 = s + 2 * k
        dprod = dprod * f1 * f2 + prod * (f1 + f2)
        prod = prod * f1 * f2
        scale = scale * inv_n2
        if k < m_terms:
            zeta += coef * prod * scale
            dzeta += coef * (dprod - prod * log_n) * scale
    omitted = np.abs(coef * prod * scale)
    est = omitted * np.abs(s + 2 * m_terms + 1) / np.maximum(
        s.real + 2 * m_terms + 1, 1.0
    )
    est += 1.0e-16 * n_terms ** np.maximum(1.0 - s.real, 0.5)
    return zeta, dzeta, est


_REFLECT_BELOW = -0.5
_LOG_2PI = math.log(TWO_PI)


def _log_sin(x: np.ndarray) -> np.ndarray:
    """log sin x, stable for large |Im x| (branch irrelevant to callers that
    exponentiate the result)."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    mid = np.abs(x.imag) <= 20.0
    out[mid] = np.log(np.sin(x[mid]))
    up = x.imag > 20.0
    out[up] = -1j * x[up] + np.log(np.exp(2j * x[up]) - 1.0) - np.log(2j)
    dn = x.imag < -20.0
    out[dn] = 1j * x[dn] + np.log(1.0 - np.exp(-2j * x[dn])) - np.log(2j)
    return out


def _cot(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    mid = np.abs(x.imag) <= 20.0
    out[mid] = np.cos(x[mid]) / np.sin(x[mid])
    up = x.imag > 20.0
    e2 = np.exp(2j * x[up])
    out[up] = 1j * (e2 + 1.0) / (e2 - 1.0)
    dn = x.imag < -20.0
    e2 = np.exp(-2j * x[dn])
    out[dn] = 1j * (1.0 + e2) / (1.0 - e2)
    return out


def _lgamma_vec(w: np.ndarray) -> np.ndarray:
    """Principal log Gamma for arrays with Re w > 0 (fixed shift + Stirling)."""
    w = np.asarray(w, dtype=complex)
    shift_count = 18
    acc = np.zeros_like(w)
    for i in range(shift_count):
        acc += np.log(w + i)
    ws = w + shift_count
    bern = _bernoulli(22)
    out = (ws - 0.5) * np.log(ws) - ws + 0.5 * math.log(TWO_PI)
    wp = ws.copy()
    for k in range(1, 11):
        out += bern[2 * k] / ((2 * k) * (2 * k - 1) * wp)
        wp = wp * ws * ws
    return out - acc


def _digamma_vec(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    shift_count = 18
    acc = np.zeros_like(w)
    for i in range(shift_count):
        acc += 1.0 / (w + i)
    ws = w + shift_count
    bern = _bernoulli(22)
    out = np.log(ws) - 0.5 / ws
    wp = ws * ws
    for k in range(1, 11):
        out -= bern[2 * k] / ((2 * k) * wp)
        wp *= ws * ws
    return out - acc


def zeta_em_vec(
    s: np.ndarray, acc: EvalAccuracy = DEFAULT_ACCURACY
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vector zeta and zeta' with functional-equation reflection for Re s < -1/2.

    Direct Euler-Maclaurin summation loses accuracy to cancellation as the
    real part drops, so the strip Re s < -1/2 is routed through
    zeta(s) = chi(s) zeta(1-s).
    """
    s = np.asarray(s, dtype=complex)
    flat = s.ravel()
    zeta = np.empty(flat.shape, dtype=complex)
    dzeta = np.empty(flat.shape, dtype=complex)
    est = np.empty(flat.shape, dtype=float)

    direct = flat.real >= _REFLECT_BELOW
    if np.any(direct):
        sd = flat[direct]
        n_terms, m_terms = _em_params(
            complex(float(np.min(sd.real)), float(np.max(np.abs(sd.imag)))), acc
        )
        z, dz, e = _zeta_em_core(sd, n_terms, m_terms)
        zeta[direct], dzeta[direct], est[direct] = z, dz, e
    if np.any(~direct):
        sr = flat[~direct]
        w = 1.0 - sr
        n_terms, m_terms = _em_params(
            complex(float(np.min(w.real)), float(np.max(np.abs(w.imag)))), acc
        )
        zw, dzw, ew = _zeta_em_core(w, n_terms, m_terms)
        x = 0.5 * math.pi * sr
        # chi assembled in log space: sin and Gamma overflow separately for
        # large |Im s| while their product stays moderate.
        log_chi = sr * math.log(2.0) + (sr - 1.0) * math.log(math.pi)
        log_chi = log_chi + _log_sin(x) + _lgamma_vec(w)
        chi = np.exp(log_chi)
        dchi = chi * (_LOG_2PI + 0.5 * math.pi * _cot(x) - _digamma_vec(w))
        zeta[~direct] = chi * zw
        dzeta[~direct] = dchi * zw - chi * dzw
        est[~direct] = (np.abs(chi) + np.abs(dchi)) * ew + 1.0e-15 * np.abs(chi * zw)
    return zeta.reshape(s.shape), dzeta.reshape(s.shape), est.reshape(s.shape)


def zeta_em(s: complex, acc: EvalAccuracy = DEFAULT_ACCURACY) -> tuple[complex, complex]:
    """Euler-Maclaurin zeta(s) and zeta'(s); oracle regime |Im s| <= 1e5."""
    z, dz, _ = zeta_em_full(s, acc)
    return z, dz


def zeta_em_full(
    s: complex, acc: EvalAccuracy = DEFAULT_ACCURACY
) -> tuple[complex, complex, float]:
    s = complex(s)
    if abs(s - 1.0) < 1.0e-12:
        raise DomainError("zeta has a pole at s = 1")
    if abs(s.imag) > EM_MAX_IM:
        raise DomainError(f"Euler-Maclaurin oracle regime is |Im s| <= {EM_MAX_IM:g}")
    z, dz, est = zeta_em_vec(np.array([s]), acc)
    return complex(z[0]), complex(dz[0]), float(est[0])


def zeta_em_line(
    t: np.ndarray, acc: EvalAccuracy = DEFAULT_ACCURACY
) -> tuple[np.ndarray, np.ndarray, float]:
    """Vectorized oracle on s = 1/2 + i t for an ascending grid t."""
    t = np.asarray(t, dtype=float)
    if t.size == 0:
        return np.zeros(0, complex), np.zeros(0, complex), 0.0
    if np.any(np.abs(t) > EM_MAX_IM):
        raise DomainError(f"Euler-Maclaurin oracle regime is |t| <= {EM_MAX_IM:g}")
    zeta = np.empty(t.shape, dtype=complex)
    dzeta = np.empty(t.shape, dtype=complex)
    est_max = 0.0
    chunk = 2048
    for lo in range(0, t.size, chunk):
        tt = t[lo : lo + chunk]
        s = 0.5 + 1.0j * tt
        n_terms, m_terms = _em_params(complex(0.5, float(np.max(np.abs(tt)))), acc)
        z, dz, est = _zeta_em_core(s, n_terms, m_terms)
        zeta[lo : lo + chunk] = z
        dzeta[lo : lo + chunk] = dz
        est_max = max(est_max, float(np.max(est)))
    return zeta, dzeta, est_max


# ---------------------------------------------------------------------------
# Riemann-Siegel correction terms via the cosine-ratio function
# ---------------------------------------------------------------------------


def _psi_ratio(w: np.ndarray) -> np.ndarray:
    """cos(2 pi (w^2 - w - 1/16)) / cos(2 pi w); removable poles avoided by callers."""
    return np.cos(TWO_PI * (w * w - w - 0.0625)) / np.cos(TWO_PI * w)


def _psi_derivatives(p: float, orders: tuple[int, ...], radius: float = 0.47) -> dict[int, float]:
    """Derivatives of the cosine-ratio function at p by Cauchy circles.

    Nodes are offset half a step so none land on the real axis, keeping the
    denominator away from its removable zeros at p = 1/4, 3/4.
    """
    m = 256
    phi = TWO_PI * (np.arange(m) + 0.5) / m
    w = p + radius * np.exp(1j * phi)
    vals = _psi_ratio(w)
    out = {}
    for k in orders:
        coef = np.mean(vals * np.exp(-1j * k * phi))
        out[k] = float((math.factorial(k) / radius**k) * coef.real)
    return out


# Correction terms as combinations of derivatives of the cosine-ratio
# function (Haselgrove's normalization).
_PI2 = math.pi**2
_PI4 = math.pi**4
_PI6 = math.pi**6
_PI8 = math.pi**8
_C_RECIPES: tuple[tuple[tuple[float, int], ...], ...] = (
    ((1.0, 0),),
    ((-1.0 / (96.0 * _PI2), 3),),
    ((1.0 / (64.0 * _PI2), 2), (1.0 / (18432.0 * _PI4), 6)),
    (
        (-1.0 / (64.0 * _PI2), 1),
        (-1.0 / (3840.0 * _PI4), 5),
        (-1.0 / (5308416.0 * _PI6), 9),
    ),
    (
        (1.0 / (128.0 * _PI2), 0),
        (19.0 / (24576.0 * _PI4), 4),
        (11.0 / (5898240.0 * _PI6), 8),
        (1.0 / (2293235712.0 * _PI8), 12),
    ),
)

_RS_CHEB: list[tuple[np.ndarray, np.ndarray]] | None = None


def _rs_chebs() -> list[tuple[np.ndarray, np.ndarray]]:
    """Chebyshev models of C_0..C_4 and their p-derivatives on [0, 1]."""
    global _RS_CHEB
    if _RS_CHEB is not None:
        return _RS_CHEB
    orders = tuple(sorted({o for recipe in _C_RECIPES for _, o in recipe}))
    xs = np.polynomial.chebyshev.chebpts1(97)
    ps = 0.5 * (xs + 1.0)
    samples = np.zeros((len(_C_RECIPES), ps.size))
    for i, p in enumerate(ps):
        derivs = _psi_derivatives(float(p), orders)
        for kk, recipe in enumerate(_C_RECIPES):
            samples[kk, i] = sum(coef * derivs[order] for coef, order in recipe)
    models = []
    for kk in range(len(_C_RECIPES)):
        coefs = np.polynomial.chebyshev.chebfit(xs, samples[kk], 96)
        coefs = np.polynomial.chebyshev.chebtrim(coefs, tol=1.0e-15)
        models.append((coefs, np.polynomial.chebyshev.chebder(coefs)))
    _RS_CHEB = models
    return models


def _rs_c(k: int, p: np.ndarray) -> np.ndarray:
    coefs, _ = _rs_chebs()[k]
    return np.polynomial.chebyshev.chebval(2.0 * p - 1.0, coefs)


def _rs_c_prime(k: int, p: np.ndarray) -> np.ndarray:
    _, dcoefs = _rs_chebs()[k]
    return 2.0 * np.polynomial.chebyshev.chebval(2.0 * p - 1.0, dcoefs)


def rs_error_estimate(t: float, rs_correction_terms: int) -> float:
    """Calibrated absolute-error cap for the Riemann-Siegel value of Z."""
    tau = t / TWO_PI
    k = rs_correction_terms
    return RS_ERR_COEF[k] * tau ** (-(2 * k + 3) / 4.0) + 1.0e-13 * math.sqrt(tau)


# ---------------------------------------------------------------------------
# Hardy Z: scalar and grid paths
# ---------------------------------------------------------------------------


def hardy_Z(t: float, acc: EvalAccuracy = DEFAULT_ACCURACY) -> tuple[float, float]:
    """Z(t) and Z'(t) by the Riemann-Siegel formula; regime t >= 50."""
    if t < RS_MIN_T:
        raise DomainError(f"Riemann-Siegel path needs t >= {RS_MIN_T}; use the oracle below")
    if t > MAX_HEIGHT:
        raise DomainError(f"height capped at {MAX_HEIGHT:g} to keep the main sum desk-scale")
    out = _hardy_grid(np.array([t]), acc)
    return float(out[0][0]), float(out[1][0])


def _hardy_grid(
    t: np.ndarray, acc: EvalAccuracy = DEFAULT_ACCURACY
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vector Riemann-Siegel evaluation on an ascending grid.

    Returns (Z, Z', theta, theta').  The main sum is accumulated prime
    loop-order: for each n the contribution is added to the suffix of the
    grid with t >= 2 pi n^2, which keeps every operation vectorized.
    """
    t = np.asarray(t, dtype=float)
    theta, theta_p = theta_pair_vec(t)
    tau = t / TWO_PI
    a = np.sqrt(tau)
    nmax = int(np.floor(a[-1])) if t.size else 0
    z = np.zeros_like(t)
    zp = np.zeros_like(t)
    for n in range(1, nmax + 1):
        start = int(np.searchsorted(t, TWO_PI * n * n, side="left"))
        if start >= t.size:
            break
        ln_n = math.log(n)
        inv_sqrt = 1.0 / math.sqrt(n)
        arg = theta[start:] - t[start:] * ln_n
        z[start:] += 2.0 * inv_sqrt * np.cos(arg)
        zp[start:] -= 2.0 * inv_sqrt * (theta_p[start:] - ln_n) * np.sin(arg)

    k_terms = acc.rs_correction_terms
    n_floor = np.floor(a)
    p = a - n_floor
    sign = np.where(np.mod(n_floor, 2.0) == 1.0, 1.0, -1.0)  # (-1)^(N-1)
    tau_quarter = tau**-0.25
    dtau = 1.0 / TWO_PI
    dp = 1.0 / (4.0 * math.pi * a)
    corr = np.zeros_like(t)
    dcorr = np.zeros_like(t)
    for k in range(k_terms + 1):
        ck = _rs_c(k, p)
        ckp = _rs_c_prime(k, p)
        fac = tau ** (-0.5 * k)
        corr += ck * fac
        dcorr += (ckp * dp - 0.5 * k * ck * dtau / tau) * fac
    z += sign * tau_quarter * corr
    zp += sign * (tau_quarter * dcorr - 0.25 * tau_quarter / tau * dtau * corr)
    return z, zp, theta, theta_p


def hardy_Z_error_estimate(t: float, acc: EvalAccuracy = DEFAULT_ACCURACY) -> float:
    return rs_error_estimate(t, acc.rs_correction_terms)


# ---------------------------------------------------------------------------
# Assembled samples and grids
# ---------------------------------------------------------------------------


def critical_sample(
    t: float, acc: EvalAccuracy = DEFAULT_ACCURACY
) -> CriticalPointSample:
    """All critical-line quantities at height t.

    Fast path (t >= 50): Riemann-Siegel Z with zeta reconstructed through the
    exact rotation zeta = e^{-i theta} Z and zeta' = e^{-i theta}(-i Z' - theta' Z).
    Oracle path (10 <= t < 50): Euler-Maclaurin zeta with Z reconstructed the
    other way around.
    """
    if t >= RS_MIN_T:
        theta, theta_p = theta_pair(t)
        z, zp = hardy_Z(t, acc)
        rot = np.exp(-1j * theta)
        zeta = rot * z
        zeta_p = rot * (-1j * zp - theta_p * z)
        est = hardy_Z_error_estimate(t, acc)
        return CriticalPointSample(t, theta, theta_p, z, zp, complex(zeta), complex(zeta_p), est)
    if t >= ORACLE_MIN_T:
        theta, theta_p = theta_pair(t)
        zeta, zeta_p, est = zeta_em_full(0.5 + 1j * t, acc)
        rot = np.exp(1j * theta)
        zc = rot * zeta
        z = zc.real
        zp = (1j * rot * (theta_p * zeta + zeta_p)).real
        return CriticalPointSample(t, theta, theta_p, float(z), float(zp), zeta, zeta_p, est + abs(zc.imag))
    raise DomainError(f"critical_sample needs t >= {ORACLE_MIN_T}, got {t}")


@dataclass(frozen=True, eq=False)
class GridData:
    """Cached critical-line grid used by the quadrature modules."""

    t: np.ndarray
    Z: np.ndarray
    Z_prime: np.ndarray
    theta: np.ndarray
    theta_prime: np.ndarray
    est_abs_error: float

    def zeta_abs2(self) -> np.ndarray:
        return self.Z * self.Z

    def dzeta_abs2(self) -> np.ndarray:
        return self.Z_prime**2 + self.theta_prime**2 * self.Z**2


def eval_grid(
    t: np.ndarray, acc: EvalAccuracy = DEFAULT_ACCURACY, workers: int = 1
) -> GridData:
    """Riemann-Siegel evaluation over an ascending grid, chunked and optionally
    threaded; results are independent of the worker count."""
    t = np.asarray(t, dtype=float)
    if t.size and (t[0] < RS_MIN_T or t[-1] > MAX_HEIGHT):
        raise DomainError(
            f"grid must lie in [{RS_MIN_T:g}, {MAX_HEIGHT:g}], got [{t[0]:g}, {t[-1]:g}]"
        )
    if np.any(np.diff(t) < 0.0):
        raise DomainError("grid must be ascending")
    _rs_chebs()  # build correction models once, outside the pool
    chunk = 1 << 18
    pieces = [t[lo : lo + chunk] for lo in range(0, t.size, chunk)]
    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda tt: _hardy_grid(tt, acc), pieces))
    else:
        results = [_hardy_grid(tt, acc) for tt in pieces]
    z = np.concatenate([r[0] for r in results]) if results else np.zeros(0)
    zp = np.concatenate([r[1] for r in results]) if results else np.zeros(0)
    th = np.concatenate([r[2] for r in results]) if results else np.zeros(0)
    thp = np.concatenate([r[3] for r in results]) if results else np.zeros(0)
    est = rs_error_estimate(float(t[0]), acc.rs_correction_terms) if t.size else 0.0
    return GridData(t, z, zp, th, thp, est)


# ---------------------------------------------------------------------------
# Oracle-path helpers (independent of the Riemann-Siegel code above)
# ---------------------------------------------------------------------------


def z_oracle(t: float, acc: EvalAccuracy = DEFAULT_ACCURACY) -> float:
    """Z(t) through the Gamma phase and Euler-Maclaurin zeta; any t >= 0."""
    theta = theta_gamma(t)
    zeta, _, _ = zeta_em_full(0.5 + 1j * t, acc)
    return float((np.exp(1j * theta) * zeta).real)


def count_sign_changes(
    t0: float, t1: float, step: float = 0.05, refine_tol: float = 1.0e-9
) -> tuple[int, list[float]]:
    """Count sign changes of Z on [t0, t1] by grid scan plus bisection.

    Uses the oracle path only, so the count is independent of the
    Riemann-Siegel machinery it is used to validate.
    """
    grid = np.arange(t0, t1 + step, step)
    grid = grid[grid <= t1]
    theta = np.array([theta_gamma(x) for x in grid])
    zeta, _, _ = zeta_em_line(grid)
    vals = (np.exp(1j * theta) * zeta).real
    zeros: list[float] = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            zeros.append(float(grid[i]))
            continue
        if vals[i] * vals[i + 1] < 0.0:
            lo, hi = float(grid[i]), float(grid[i + 1])
            flo = float(vals[i])
            while hi - lo > refine_tol:
                mid = 0.5 * (lo + hi)
                fmid = z_oracle(mid)
                if flo * fmid <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            zeros.append(0.5 * (lo + hi))
    return len(zeros), zeros
