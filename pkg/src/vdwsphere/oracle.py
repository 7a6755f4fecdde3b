"""Reference-quality direct summation of the sphere scattering Green tensor.

Builds the even/odd spherical vector wave functions explicitly at the two atom
positions (phi = 0 and pi), multiplies by the literal complex Mie coefficients
and performs the full n, m, p sums, projecting onto the spherical unit
vectors. Radial factors are carried in arbitrary precision (mpmath), so no
order ever leaves the representable range; the bounded angular m-sums use
normalized associated Legendre functions in double precision.

This path shares no code with the scaled-recurrence engine in `green` and
serves as its oracle.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

from .errors import CapExceededError, DomainError
from .green import Geometry, GreenElements
from .materials import C, SphereResponse, permeability_iu, permittivity_iu

# anti-runaway bound; the radial factors themselves cannot overflow in mpmath
N_MAX_LIMIT = 10_000


def assoc_legendre_norm(n_max: int, theta: float):
    """Normalized associated Legendre tables at cos(theta).

    Returns (p, tau) with p[n, m] = sqrt((n-m)!/(n+m)!) P_n^m(cos theta) and
    tau[n, m] = d p[n, m] / d theta, for 0 <= m <= n <= n_max. The
    normalization keeps every entry of order unity, so the tables stay in
    double precision at any order.
    """
    x = math.cos(theta)
    s = math.sin(theta)
    if s <= 0.0:
        raise DomainError("angular tables need theta strictly inside (0, pi)")
    p = np.zeros((n_max + 1, n_max + 1))
    p[0, 0] = 1.0
    for m in range(1, n_max + 1):
        p[m, m] = p[m - 1, m - 1] * s * math.sqrt((2.0 * m - 1.0) / (2.0 * m))
    for m in range(0, n_max):
        p[m + 1, m] = math.sqrt(2.0 * m + 1.0) * x * p[m, m]
        for n in range(m + 2, n_max + 1):
            p[n, m] = ((2.0 * n - 1.0) * x * p[n - 1, m]
                       - math.sqrt((n - 1.0)**2 - m * m) * p[n - 2, m]
                       ) / math.sqrt(float(n * n - m * m))
    tau = np.zeros_like(p)
    for m in range(0, n_max + 1):
        for n in range(max(m, 1), n_max + 1):
            tau[n, m] = (n * x * p[n, m]
                         - math.sqrt(float(n * n - m * m)) * p[n - 1, m]) / s
    return p, tau


def _sph_jn_row(n_max: int, z):
    """j_n(z) for n = 0..n_max, literal mpmath evaluation per order."""
    pref = mp.sqrt(mp.pi / (2 * z))
    return [pref * mp.besselj(n + mp.mpf(1) / 2, z) for n in range(n_max + 1)]


def _sph_h1_row(n_max: int, z):
    """h_n^(1)(z) for n = 0..n_max; upward recurrence (stable: h grows with n)."""
    pref = mp.sqrt(mp.pi / (2 * z))
    row = [pref * mp.hankel1(mp.mpf(1) / 2, z),
           pref * mp.hankel1(mp.mpf(3) / 2, z)]
    for n in range(1, n_max):
        row.append((2 * n + 1) / z * row[n] - row[n - 1])
    return row[:n_max + 1]


def _ricc(row, z):
    """[z f_n(z)]' = z f_{n-1}(z) - n f_n(z) for a spherical Bessel family row."""
    out = [None] * len(row)
    for n in range(1, len(row)):
        out[n] = z * row[n - 1] - n * row[n]
    return out


def mie_coefficients_literal(n_max: int, u: float, sphere: SphereResponse, dps: int = 40):
    """Complex-arithmetic Mie coefficients B_n^{M,N}(iu) for n = 1..n_max."""
    with mp.workdps(dps):
        eps = mp.mpf(permittivity_iu(sphere.eps_model, u))
        mu = mp.mpf(permeability_iu(sphere.mu_model, u))
        z0 = mp.mpc(0, 1) * mp.mpf(u) * mp.mpf(sphere.radius) / C
        z1 = mp.sqrt(eps * mu) * z0
        j0 = _sph_jn_row(n_max, z0)
        j1 = _sph_jn_row(n_max, z1)
        h0 = _sph_h1_row(n_max, z0)
        rj0 = _ricc(j0, z0)
        rj1 = _ricc(j1, z1)
        rh0 = _ricc(h0, z0)
        bm = [mp.mpc(0)] * (n_max + 1)
        bn = [mp.mpc(0)] * (n_max + 1)
        for n in range(1, n_max + 1):
            bm[n] = -((mu * rj0[n] * j1[n] - rj1[n] * j0[n])
                      / (mu * rh0[n] * j1[n] - rj1[n] * h0[n]))
            bn[n] = -((eps * rj0[n] * j1[n] - rj1[n] * j0[n])
                      / (eps * rh0[n] * j1[n] - rj1[n] * h0[n]))
        return bm, bn


def direct_sum_blocks(g: Geometry, u: float, sphere: SphereResponse,
                      n_max: int, dps: int = 40):
    """Per-order, per-parity dyad blocks of the direct n, m, p sum.

    Returns a list indexed by n (1-based entries; index 0 unused) of dicts with
    keys ('M', +1), ('M', -1), ('N', +1), ('N', -1); each value maps element
    names to the mpmath complex coefficient of e_{i at A} e_{j at B} in
    sum_m C_nm X_{nm,p}(r_A) X_{nm,p}(r_B) (Mie factors not yet applied).
    """
    if n_max > N_MAX_LIMIT:
        raise CapExceededError(f"n_max={n_max} above oracle limit {N_MAX_LIMIT}")
    p_a, tau_a = assoc_legendre_norm(n_max, g.theta_a)
    p_b, tau_b = assoc_legendre_norm(n_max, g.theta_b)
    sin_a = math.sin(g.theta_a)
    sin_b = math.sin(g.theta_b)

    with mp.workdps(dps):
        k = mp.mpc(0, 1) * mp.mpf(u) / C
        za = k * mp.mpf(g.r_a)
        zb = k * mp.mpf(g.r_b)
        ha = _sph_h1_row(n_max, za)
        hb = _sph_h1_row(n_max, zb)
        rha = _ricc(ha, za)
        rhb = _ricc(hb, zb)

        blocks = [None]
        for n in range(1, n_max + 1):
            m = np.arange(0, n + 1)
            weight = np.where(m == 0, 1.0, 2.0) * np.where(m % 2 == 0, 1.0, -1.0)
            pa = p_a[n, :n + 1]
            pb = p_b[n, :n + 1]
            ta = tau_a[n, :n + 1]
            tb = tau_b[n, :n + 1]
            pia = m * pa / sin_a
            pib = m * pb / sin_b
            s_pp = float(np.dot(weight, pa * pb))
            s_tt = float(np.dot(weight, ta * tb))
            s_pipi = float(np.dot(weight, pia * pib))
            s_pt = float(np.dot(weight, pa * tb))
            s_tp = float(np.dot(weight, ta * pb))

            nn1 = n * (n + 1)
            inv_qq = 1 / (k * k * mp.mpf(g.r_a) * mp.mpf(g.r_b))
            blocks.append({
                # even M: only e_phi at both positions; (-tau_A)(-tau_B)
                ("M", +1): {"phiphi": ha[n] * hb[n] * s_tt},
                # odd M: only e_theta; (+pi_A)(+pi_B)
                ("M", -1): {"thetatheta": ha[n] * hb[n] * s_pipi},
                # even N: e_r and e_theta at both positions
                ("N", +1): {
                    "rr": inv_qq * nn1 * nn1 * ha[n] * hb[n] * s_pp,
                    "rtheta": inv_qq * nn1 * ha[n] * rhb[n] * s_pt,
                    "thetar": inv_qq * nn1 * rha[n] * hb[n] * s_tp,
                    "thetatheta": inv_qq * rha[n] * rhb[n] * s_tt,
                },
                # odd N: only e_phi; (+pi_A)(+pi_B)
                ("N", -1): {"phiphi": inv_qq * rha[n] * rhb[n] * s_pipi},
            })
        return blocks


def scattering_direct_sum_oracle(g: Geometry, u: float, sphere: SphereResponse,
                                 n_max: int, dps: int = 40) -> GreenElements:
    """Scattering Green tensor elements by the literal direct summation.

    The total must come out real at imaginary frequency; the residual
    imaginary part is checked against the working precision.
    """
    if g.radius != sphere.radius:
        raise DomainError(
            f"geometry radius {g.radius} != sphere radius {sphere.radius}")
    blocks = direct_sum_blocks(g, u, sphere, n_max, dps)
    bm, bn = mie_coefficients_literal(n_max, u, sphere, dps)
    with mp.workdps(dps):
        pref = mp.mpc(0, 1) * (mp.mpc(0, 1) * mp.mpf(u)) / (4 * mp.pi * C * C)
        acc = {name: mp.mpc(0) for name in
               ("rr", "rtheta", "thetar", "thetatheta", "phiphi")}
        for n in range(1, n_max + 1):
            cn = mp.mpf(2 * n + 1) / (n * (n + 1))
            for (family, _parity), comps in blocks[n].items():
                coef = bm[n] if family == "M" else bn[n]
                for name, val in comps.items():
                    acc[name] += pref * cn * coef * val
        out = {}
        for name, val in acc.items():
            re, im = mp.re(val), mp.im(val)
            if abs(im) > mp.mpf(10) ** (8 - dps) * (abs(re) + mp.mpf(10) ** -dps):
                raise RuntimeError(
                    f"direct sum failed reality check for {name}: {val}")
            out[name] = float(re)
    return GreenElements(**out)
