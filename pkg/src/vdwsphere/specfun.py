"""Numerically stable special functions on the positive real axis.

Modified spherical Bessel functions with exponential scaling (the natural
carriers of spherical Bessel/Hankel functions at purely imaginary argument),
their Riccati-type derivatives, and Legendre polynomials with derivatives.

Scaling convention:
  i_scaled      = i_n(x) e^{-x}
  k_scaled      = k_n(x) e^{+x}
  i_ricc_scaled = [x i_n(x)]' e^{-x}
  k_ricc_scaled = [x k_n(x)]' e^{+x}   (negative for every n, x)

The underlying tables are kept in log space (`modified_spherical_bessel_logs`),
so intermediate orders far outside the double-precision exponent range stay
usable; the per-order pairs returned by `modified_spherical_bessel` saturate to
inf/0 once the true scaled value leaves the representable range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import bessel_ik_logs, legendre_pf
from .errors import CapExceededError, DomainError

HARD_CAP_DEFAULT = 2000


@dataclass(frozen=True)
class ScaledBesselPair:
    """Exponentially scaled i_n/k_n values and Riccati derivatives at one order."""
    n: int
    x: float
    i_scaled: float
    k_scaled: float
    i_ricc_scaled: float
    k_ricc_scaled: float


@dataclass(frozen=True)
class LegendreRow:
    """P_n, P_n' and F_n = n(n+1) P_n - x P_n' at one order."""
    n: int
    gamma: float
    P: float
    Pprime: float
    F: float


def modified_spherical_bessel_logs(n_max: int, x: float):
    """Log-space tables (Li, Lk, LiR, LkR) for n = 0..n_max.

    Li[n] = log(i_n(x) e^{-x}), Lk[n] = log(k_n(x) e^{x}),
    LiR[n] = log([x i_n]' e^{-x}), LkR[n] = log(-[x k_n]' e^{x}).
    """
    if x <= 0.0 or not np.isfinite(x):
        raise DomainError(f"argument must be positive and finite, got x={x}")
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    return bessel_ik_logs(n_max, float(x))


def modified_spherical_bessel(n_max: int, x: float,
                              hard_cap: int = HARD_CAP_DEFAULT) -> list[ScaledBesselPair]:
    """Scaled modified spherical Bessel pairs for n = 0..n_max.

    i-type values come from a downward (Miller) recurrence normalized at
    n = 0, k-type from the upward recurrence; both run in log space.
    """
    if n_max > hard_cap:
        raise CapExceededError(f"n_max={n_max} exceeds hard cap {hard_cap}")
    li, lk, lir, lkr = modified_spherical_bessel_logs(max(n_max, 1), x)
    with np.errstate(over="ignore"):
        iv = np.exp(li)
        kv = np.exp(lk)
        irv = np.exp(lir)
        krv = -np.exp(lkr)
    return [ScaledBesselPair(n, float(x), iv[n], kv[n], irv[n], krv[n])
            for n in range(n_max + 1)]


def legendre_tables(n_max: int, gamma: float):
    """Arrays (P, Pprime, F) for n = 0..n_max at argument gamma in [-1, 1]."""
    if abs(gamma) > 1.0:
        raise DomainError(f"|gamma| must be <= 1, got {gamma}")
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    return legendre_pf(n_max, float(gamma))


def legendre_rows(n_max: int, gamma: float) -> list[LegendreRow]:
    """LegendreRow sequence for n = 1..n_max."""
    P, Pp, F = legendre_tables(n_max, gamma)
    return [LegendreRow(n, float(gamma), P[n], Pp[n], F[n])
            for n in range(1, n_max + 1)]
