"""Optimal off-rates and cascade length at fixed internal gain.

For a fixed gain K and leak, the duration part sigma0 = sum 1/beta_i^2 is
minimized by equal off-rates, and the optimal length minimizes
F(n, M) = ln n + M/n over the positive integers, whose argmin is the step
function ``psi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import DesignResult

FIXED_ALPHA = "FixedAlpha"
FIXED_PRODUCT = "FixedProduct"

# relative slack for ties in psi/oracle_nstar; covers rounding in M - floor(M)
_TIE_RTOL = 1e-13


@dataclass(frozen=True)
class FixedAlpha:
    """All on-rates equal to ``alpha``."""
    alpha: float


@dataclass(frozen=True)
class FixedProduct:
    """Only the product of the on-rates is known."""
    alpha_product: float


def f_of_k(k: float) -> float:
    """Jump location k^2 [(1 + 1/k) ln(1 + 1/k) - 1/k] of ``psi`` above k.

    Increases from 2 ln 2 - 1 at k=1 toward 1/2.
    """
    if not k >= 1:
        raise DomainError(f"f(k) is defined for k >= 1, got {k!r}")
    x = 1.0 / k
    if x < 1e-2:
        # (1+x)ln(1+x) - x = sum_{m>=2} (-1)^m x^m / (m (m-1))
        return math.fsum((-1) ** m * x ** (m - 2) / (m * (m - 1)) for m in range(2, 14))
    return ((1 + x) * math.log1p(x) - x) / (x * x)


def psi(m: float) -> int:
    """Optimal cascade length for the design constant ``m``."""
    if m <= 1:
        return 1
    k = math.floor(m)
    delta = m - k
    if delta <= f_of_k(k) + _TIE_RTOL * m:
        return k
    return k + 1


def _F(n, m):
    return math.log(n) + m / n


def oracle_nstar(m: float, n_max: int) -> int:
    """Brute-force argmin of ln n + m/n over n = 1..n_max (ties -> smaller n)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if m > 0 and n_max < math.ceil(m) + 2:
        raise ValueError(f"n_max={n_max} too small for m={m}; need >= ceil(m)+2")
    best_n, best = 1, _F(1, m)
    for n in range(2, n_max + 1):
        val = _F(n, m)
        if val < best - _TIE_RTOL * max(1.0, abs(best)):
            best_n, best = n, val
    return best_n


def optimal_beta(n: int, alpha_product: float, k_gain: float, leak: float) -> float:
    """Common off-rate giving internal gain ``k_gain`` with ``n`` stages."""
    for name, v in (("alpha_product", alpha_product), ("k_gain", k_gain), ("leak", leak)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")
    if n < 1:
        raise DomainError("n must be a positive integer")
    return math.exp((math.log(alpha_product) - math.log(k_gain * leak)) / n)


def optimal_design(mode, k_gain: float, leak: float) -> DesignResult:
    if not (k_gain > 0 and leak > 0):
        raise DomainError("gain and leak must be positive")
    kl = k_gain * leak
    if isinstance(mode, FixedAlpha):
        m = 2 * math.log(kl)
        n = psi(m)
        beta = mode.alpha * kl ** (-1 / n)
        s0 = n / mode.alpha ** 2 * kl ** (2 / n)
        return DesignResult(n, beta, s0, m, FIXED_ALPHA)
    if isinstance(mode, FixedProduct):
        return _fixed_product(mode.alpha_product, kl, FIXED_PRODUCT)
    raise TypeError(f"unknown design mode {mode!r}")


def _fixed_product(alpha_product, kl, tag, feedback=0.0):
    m = 2 * math.log(kl / alpha_product)
    n = psi(m)
    beta = (alpha_product / kl) ** (1 / n)
    s0 = n * (kl / alpha_product) ** (2 / n)
    return DesignResult(n, beta, s0, m, tag, feedback)


def effective_alpha_product(alphas, eps, k_gain, leak):
    """(alpha_1 + eps K l) alpha_2 ... alpha_n: the on-rate product seen with feedback."""
    alphas = list(alphas)
    return (alphas[0] + eps * k_gain * leak) * math.prod(alphas[1:])


def feedback_beta(alphas, eps, k_gain, leak):
    """Common off-rate for the given stage count ``len(alphas)`` under feedback."""
    ap = effective_alpha_product(alphas, eps, k_gain, leak)
    return optimal_beta(len(alphas), ap, k_gain, leak)


def feedback_design(alphas, eps: float, k_gain: float, leak: float) -> DesignResult:
    """Optimal design when the last kinase feeds back into the first with strength eps.

    The feedback only enlarges the effective on-rate product, so the problem
    reduces to the fixed-product design with alpha_1 replaced by
    alpha_1 + eps K l.  With ``eps=0`` it is exactly the fixed-product design.
    """
    alphas = list(alphas)
    if not alphas or any(not a > 0 for a in alphas):
        raise DomainError("alphas must be a non-empty list of positive rates")
    if eps < 0:
        raise DomainError("feedback strength must be nonnegative")
    if not (k_gain > 0 and leak > 0):
        raise DomainError("gain and leak must be positive")
    ap = effective_alpha_product(alphas, eps, k_gain, leak)
    return _fixed_product(ap, k_gain * leak, FIXED_PRODUCT, eps)


def oracle_min_sigma0(n: int, alpha_product: float, k_gain: float, leak: float,
                      trials: int, seed=0, batch: int = 65536):
    """Random search for the smallest sigma0 on the fixed-gain surface.

    Each trial draws n-1 log off-rates uniformly in [-3, 3] around the
    equal-rate point and solves the last one from the gain constraint.
    Returns (best_betas, best_sigma0).
    """
    log_center = math.log(optimal_beta(n, alpha_product, k_gain, leak))
    if n == 1:
        beta = math.exp(log_center)
        return np.array([beta]), 1 / beta ** 2
    rng = np.random.default_rng(seed)
    best_val, best = math.inf, None
    remaining = trials
    while remaining > 0:
        m = min(batch, remaining)
        remaining -= m
        u = rng.uniform(-3.0, 3.0, size=(m, n - 1))
        u = np.column_stack([u, -u.sum(axis=1)])
        betas = np.exp(log_center + u)
        vals = np.sum(betas ** -2.0, axis=1)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best = float(vals[i]), betas[i].copy()
    return best, best_val


def psi_table(k_values, leak: float, mode=None):
    """Rows of (K, M, n*, beta*) over a range of gains."""
    mode = mode or FixedAlpha(1.0)
    rows = []
    for k in k_values:
        res = optimal_design(mode, k, leak)
        rows.append((float(k), res.m_value, res.n_star, res.beta_star))
    return rows
