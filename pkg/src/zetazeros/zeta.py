"""Hurwitz/Riemann zeta on the continued domain, complex log-gamma, completed zeta.

The workhorse is Euler-Maclaurin summation:

    zeta(s, a) = sum_{n=0}^{N-1} (n+a)^{-s}
               + (N+a)^{1-s}/(s-1) + (N+a)^{-s}/2
               + sum_{k=1}^{M} B_{2k}/(2k)! * (s)_{2k-1} * (N+a)^{-s-2k+1}
               + R_M(N),

valid for every s != 1 once N is large enough that the correction terms
decrease.  (s)_m denotes the rising factorial s(s+1)...(s+m-1).  The reported
abs_err is twice the magnitude of the first omitted correction term plus a
rounding-noise allowance for the prefix sum.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from .config import ComplexValue, EvalConfig, DEFAULT_CONFIG
from .errors import BudgetExceeded, PoleProximity
from .tables import bernoulli_over_factorial

LOG_GAMMA_SHIFT = 12.0   # recurrence target for Re(s) before the Stirling series
LOG_GAMMA_TERMS = 10


def rpow(x: float, w: complex) -> complex:
    """x**w for real x > 0 via exp(w*log x); no branch ambiguity."""
    return cmath.exp(w * math.log(x))


@lru_cache(maxsize=128)
def _log_grid(a: float, n: int) -> np.ndarray:
    arr = np.log(np.arange(n, dtype=np.float64) + a)
    arr.setflags(write=False)
    return arr


def _em_cutoff(s: complex) -> int:
    # Keeps the asymptotic correction series decreasing for em_order <= 16.
    return max(20, math.ceil(1.3 * abs(s.imag)) + 10)


def _first_omitted_bound(s: complex, a: float, n_cut: int, order: int) -> float:
    """|B_{2M+2}/(2M+2)! * (s)_{2M+1} * (N+a)^{-s-2M-1}|, the remainder gauge."""
    bfac = bernoulli_over_factorial()
    x = n_cut + a
    poch = 1.0
    for j in range(2 * order + 1):
        poch *= abs(s + j)
    return abs(bfac[2 * order + 2]) * poch * x ** (-(s.real + 2 * order + 1))


def _hurwitz_em(s: complex, a: float, n_cut: int, order: int) -> ComplexValue:
    """Fixed-parameter Euler-Maclaurin evaluation; no adaptivity, no pole guard."""
    logs = _log_grid(a, n_cut)
    terms = np.exp(-s * logs)
    prefix = complex(terms.sum())
    prefix_mass = float(np.abs(terms).sum())

    x = n_cut + a
    logx = math.log(x)
    xs = cmath.exp(-s * logx)                # x^{-s}
    val = prefix + xs * x / (s - 1) + 0.5 * xs

    bfac = bernoulli_over_factorial()
    poch = s                                 # (s)_1
    xp = xs / (x * x) * x                    # x^{-s-1}
    corr = 0j
    for k in range(1, order + 1):
        corr += bfac[2 * k] * poch * xp
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        xp /= x * x
    val += corr

    # poch is now (s)_{2M+1}, xp is x^{-s-2M-1}: exactly the first omitted term.
    tail_bound = 2.0 * abs(bfac[2 * order + 2] * poch * xp)
    # Rounding model: the angle t*log(n+a) carries absolute error eps*|angle|,
    # which surfaces as a relative error per term; calibrated against
    # high-precision references over -2 <= Re(s) <= 4, |Im(s)| <= 500.
    per_term = 4e-16 + 4e-17 * abs(s.imag)
    noise = per_term * (1.0 + math.log2(max(n_cut, 2)) / 8.0) * (
        prefix_mass + abs(val) + abs(xs * x / (s - 1))
    )
    return ComplexValue.of(val, tail_bound + noise)


def _choose_cutoff(s: complex, a: float, cfg: EvalConfig) -> int:
    n_cut = _em_cutoff(s)
    if n_cut > cfg.max_terms:
        raise BudgetExceeded(
            f"Euler-Maclaurin cutoff {n_cut} exceeds max_terms={cfg.max_terms} "
            f"at s={s:.6g}"
        )
    if _first_omitted_bound(s, a, n_cut, cfg.em_order) * 2 <= cfg.target_abs_err:
        return n_cut
    # Doubling only helps while Re(s) + 2M + 1 > 0; otherwise no N converges.
    if s.real + 2 * cfg.em_order + 1 <= 0.5:
        raise BudgetExceeded(
            f"em_order={cfg.em_order} too small for Re(s)={s.real:.3g}"
        )
    while n_cut <= cfg.max_terms:
        n_cut *= 2
        if _first_omitted_bound(s, a, n_cut, cfg.em_order) * 2 <= cfg.target_abs_err:
            return n_cut
    raise BudgetExceeded(
        f"error target {cfg.target_abs_err:g} unreachable within "
        f"max_terms={cfg.max_terms} at s={s:.6g}"
    )


def hurwitz_zeta(s: complex, a: float, cfg: EvalConfig = DEFAULT_CONFIG) -> ComplexValue:
    """zeta(s, a) = sum_{n>=0} (n+a)^{-s} continued to all s != 1; 0 < a <= 1."""
    s = complex(s)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"hurwitz_zeta requires 0 < a <= 1, got a={a}")
    if abs(s - 1) < cfg.pole_guard:
        raise PoleProximity(
            f"s={s:.6g} within pole_guard of the pole at s=1", location=1.0 + 0j,
            source=f"hurwitz({a})",
        )
    # Use the smallest admissible cutoff: at Re(s) < 0 the prefix terms grow,
    # so enlarging N only inflates rounding noise once the tail bound is met.
    n_cut = _choose_cutoff(s, a, cfg)
    return _hurwitz_em(s, a, n_cut, cfg.em_order)


def riemann_zeta(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> ComplexValue:
    """zeta(s) = sum_{n>=1} n^{-s}, continued to all s != 1."""
    return hurwitz_zeta(s, 1.0, cfg)


def hurwitz_zeta_shifted(s: complex, a: float, cfg: EvalConfig = DEFAULT_CONFIG) -> ComplexValue:
    """zeta(s, a) for arbitrary a > 0: fractional-part form minus the finite prefix."""
    s = complex(s)
    if a <= 0:
        raise ValueError(f"requires a > 0, got {a}")
    if a <= 1.0:
        return hurwitz_zeta(s, a, cfg)
    m = math.ceil(a) - 1
    frac = a - m            # in (0, 1]
    base = hurwitz_zeta(s, frac, cfg)
    logs = np.log(np.arange(m, dtype=np.float64) + frac)
    terms = np.exp(-s * logs)
    prefix = complex(terms.sum())
    noise = 4e-16 * float(np.abs(terms).sum())
    return ComplexValue.of(base.z - prefix, base.abs_err + noise)


def log_gamma(s: complex, pole_guard: float = 1e-8) -> ComplexValue:
    """Principal branch of log Gamma(s), continuous off the ray (-inf, 0].

    Upward recurrence to Re(s) > 12, then a 10-term Stirling series.
    """
    s = complex(s)
    nearest = round(s.real)
    if nearest <= 0 and abs(s - nearest) < pole_guard:
        raise PoleProximity(
            f"log_gamma pole at non-positive integer {nearest}",
            location=complex(nearest), source="log_gamma",
        )
    shift = max(0, math.ceil(LOG_GAMMA_SHIFT - s.real))
    w = s + shift
    # Stirling: (w - 1/2) log w - w + log(2 pi)/2 + sum B_{2k} / (2k(2k-1) w^{2k-1})
    bfac_raw = _stirling_coeffs()
    res = (w - 0.5) * cmath.log(w) - w + 0.5 * math.log(2.0 * math.pi)
    winv = 1.0 / w
    wpow = winv
    for c in bfac_raw:
        res += c * wpow
        wpow *= winv * winv
    for j in range(shift):
        res -= cmath.log(s + j)
    err = 1e-14 * (1.0 + abs(res)) + (shift + 1) * 3e-16 * (1.0 + abs(res))
    return ComplexValue.of(res, err)


@lru_cache(maxsize=1)
def _stirling_coeffs() -> tuple[float, ...]:
    from .tables import get_tables

    tabs = get_tables()
    return tuple(
        float(tabs.bern(2 * k)) / (2 * k * (2 * k - 1))
        for k in range(1, LOG_GAMMA_TERMS + 1)
    )


def completed_zeta(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> ComplexValue:
    """pi^{-s/2} Gamma(s/2) zeta(s); simple poles at s = 0 and s = 1."""
    s = complex(s)
    for p in (0.0, 1.0):
        if abs(s - p) < cfg.pole_guard:
            raise PoleProximity(
                f"completed zeta pole at s={p:g}", location=complex(p), source="xi",
            )
    lg = log_gamma(s / 2, cfg.pole_guard)
    pref = rpow(math.pi, -s / 2) * cmath.exp(lg.z)
    zv = riemann_zeta(s, cfg)
    val = pref * zv.z
    err = abs(pref) * zv.abs_err + abs(val) * (lg.abs_err + 5e-16)
    return ComplexValue.of(val, err)
