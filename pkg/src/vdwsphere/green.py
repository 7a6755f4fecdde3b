"""Dyadic Green tensor elements for two atoms near a magneto-electric sphere.

Everything is evaluated at purely imaginary frequency omega = iu (u > 0),
where all five nonzero tensor elements are real. The two atoms sit in the
xz-plane at (r_a, theta_a, phi=0) and (r_b, theta_b, phi=pi); the element
basis is e_{i at A} e_{j at B}, in which only (rr, rtheta, thetar,
thetatheta, phiphi) survive.

The multipole series runs over exponentially scaled modified Bessel functions
(see `_kernels`); the phase factors i^n/i^{-n} arising from the imaginary
argument are resolved analytically, so no complex arithmetic appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import legendre_pf, mie_scaled, scatter_series_sums
from .errors import DomainError, NonConvergenceError
from .materials import C, SphereResponse, permeability_iu, permittivity_iu

# residual exponent below which every series term underflows double precision
_DEAD_EXPONENT = -760.0


def f_factor(x):
    """Retardation polynomial f(x) = 1 + x + x^2 of the free-space tensor."""
    return 1.0 + x + x * x


def g_factor(x):
    """Retardation polynomial g(x) = 3 + 3x + x^2 of the free-space tensor."""
    return 3.0 + 3.0 * x + x * x


@dataclass(frozen=True)
class Geometry:
    """Sphere radius and the two atom positions in the xz-plane.

    Derived quantities: Theta = theta_a + theta_b is the angle between the
    position vectors, gamma its cosine, l the interatomic distance, and
    l_a = r_b cos(Theta) - r_a, l_b = r_b - r_a cos(Theta) the projections of
    the connecting vector on the two radial directions.
    """
    radius: float
    r_a: float
    r_b: float
    theta_a: float
    theta_b: float

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError(f"radius must be positive, got {self.radius}")
        if self.r_a <= self.radius or self.r_b <= self.radius:
            raise DomainError(
                f"both atoms must lie outside the sphere: r_a={self.r_a}, "
                f"r_b={self.r_b}, radius={self.radius}")
        if not (0.0 <= self.theta_a <= math.pi and 0.0 <= self.theta_b <= math.pi):
            raise DomainError("polar angles must lie in [0, pi]")
        if self.separation <= 0.0:
            raise DomainError("atom positions must be distinct (l > 0)")

    @property
    def theta_sum(self) -> float:
        return self.theta_a + self.theta_b

    @property
    def gamma(self) -> float:
        return math.cos(self.theta_sum)

    @property
    def separation(self) -> float:
        """Interatomic distance l = sqrt(r_a^2 + r_b^2 - 2 r_a r_b cos(Theta))."""
        return math.sqrt(max(self.r_a**2 + self.r_b**2
                             - 2.0 * self.r_a * self.r_b * self.gamma, 0.0))

    @property
    def l_a(self) -> float:
        return self.r_b * self.gamma - self.r_a

    @property
    def l_b(self) -> float:
        return self.r_b - self.r_a * self.gamma

    def xi(self, u):
        """Retardation variable xi = l*u/c."""
        return self.separation * np.asarray(u, dtype=float) / C

    def swapped(self) -> "Geometry":
        """Geometry with the two atoms exchanged."""
        return Geometry(self.radius, self.r_b, self.r_a, self.theta_b, self.theta_a)


@dataclass(frozen=True)
class GreenElements:
    """The five nonzero tensor elements at one imaginary frequency."""
    rr: float
    rtheta: float
    thetar: float
    thetatheta: float
    phiphi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rr, self.rtheta, self.thetar,
                         self.thetatheta, self.phiphi])

    def as_matrix(self) -> np.ndarray:
        """3x3 matrix in the (r, theta, phi) element basis."""
        return np.array([
            [self.rr, self.rtheta, 0.0],
            [self.thetar, self.thetatheta, 0.0],
            [0.0, 0.0, self.phiphi],
        ])


@dataclass(frozen=True)
class SeriesSpec:
    """Multipole series truncation policy."""
    n_min_terms: int = 4
    rel_tol: float = 1e-10
    n_cap: int = 2000

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.n_min_terms < 1:
            raise ValueError(f"n_min_terms must be >= 1, got {self.n_min_terms}")


def free_space_dyadic(lvec, u: float) -> np.ndarray:
    """Free-space Green tensor (3x3, Cartesian) at omega = iu for separation lvec."""
    lvec = np.asarray(lvec, dtype=float)
    l = float(np.linalg.norm(lvec))
    if l == 0.0:
        raise DomainError("zero separation")
    xi = l * u / C
    pre = C**2 * math.exp(-xi) / (4.0 * math.pi * u * u * l**3)
    return pre * (f_factor(xi) * np.eye(3)
                  - g_factor(xi) * np.outer(lvec, lvec) / l**2)


def free_space_element_arrays(g: Geometry, u) -> np.ndarray:
    """Free-space elements (5, len(u)) in the spherical element basis."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    l = g.separation
    gam = g.gamma
    sin_t = math.sin(g.theta_sum)
    xi = l * u / C
    f = f_factor(xi)
    gg = g_factor(xi)
    pre = C**2 * np.exp(-xi) / (4.0 * np.pi * u * u * l**5)
    out = np.empty((5, u.size))
    out[0] = pre * (l * l * f * gam - gg * g.l_a * g.l_b)
    out[1] = -sin_t * pre * (l * l * f + gg * g.r_a * g.l_a)
    out[2] = -sin_t * pre * (l * l * f - gg * g.r_b * g.l_b)
    out[3] = -pre * (l * l * f * gam - gg * g.r_a * g.r_b * sin_t**2)
    out[4] = -pre * l * l * f
    return out


def free_space_elements(g: Geometry, u: float) -> GreenElements:
    """Free-space Green tensor elements at omega = iu."""
    if u <= 0:
        raise DomainError(f"u must be positive, got {u}")
    vals = free_space_element_arrays(g, u)[:, 0]
    return GreenElements(*vals)


def mie_coefficients(n: int, u: float, sphere: SphereResponse):
    """Mie reflection coefficients (B_n^M, B_n^N) at omega = iu; both real.

    The i^n phase bookkeeping is resolved analytically: the value equals
    (-1)^n (pi/2) e^{2 u R / c} times a scaled ratio of modified Bessel
    combinations. The true coefficient grows like e^{2uR/c}, so the returned
    double saturates to +-inf once uR/c exceeds ~354 (the series code uses the
    scaled form internally and has no such limit).
    """
    if n < 1:
        raise DomainError(f"multipole order must be >= 1, got {n}")
    if u <= 0:
        raise DomainError(f"u must be positive, got {u}")
    eps = permittivity_iu(sphere.eps_model, u)
    mu = permeability_iu(sphere.mu_model, u)
    if eps == 1.0 and mu == 1.0:
        return 0.0, 0.0
    x0 = u * sphere.radius / C
    x1 = math.sqrt(eps * mu) * x0
    bm, bn = mie_scaled(np.array([n], dtype=np.int64), x0, x1, eps, mu)
    sign = -1.0 if n % 2 else 1.0
    with np.errstate(over="ignore"):
        scale = sign * (math.pi / 2.0) * np.exp(2.0 * x0)
    return float(scale * bm[0]), float(scale * bn[0])


def _is_vacuum(sphere: SphereResponse) -> bool:
    return sphere.eps_model.plasma == 0.0 and sphere.mu_model.plasma == 0.0


def _n_top_estimate(t: float, x_big: float, rel_tol: float) -> int:
    # geometric tail t^n needs n ~ log(rel_tol (1-t)/50)/log(t); decay only
    # sets in past the largest Bessel argument, so add that as offset
    n_geo = (math.log(rel_tol) + math.log1p(-t) - math.log(50.0)) / math.log(t)
    return int(math.ceil(x_big + 10.0 * x_big**(1.0 / 3.0) + max(n_geo, 0.0))) + 30


def _series_sums(r_a, r_b, radius, gamma, u, eps, mu, spec: SeriesSpec):
    """Raw series sums for one u, growing the order window until converged."""
    t = radius * radius / (r_a * r_b)
    x_big = max(math.sqrt(eps * mu) * u * radius, u * r_a, u * r_b) / C
    n_top = min(spec.n_cap, _n_top_estimate(t, x_big, spec.rel_tol))
    n_consec = max(2, spec.n_min_terms)
    while True:
        P, Pp, F = legendre_pf(n_top, gamma)
        sums, n_used, ok = scatter_series_sums(
            n_top, spec.rel_tol, n_consec, u, r_a, r_b, radius, eps, mu, P, Pp, F)
        if ok:
            return sums, n_used
        if n_top >= spec.n_cap:
            raise NonConvergenceError(
                f"multipole series did not converge by n_cap={spec.n_cap} "
                f"(u={u}, r_a={r_a}, r_b={r_b}, radius={radius})")
        n_top = min(spec.n_cap, int(math.ceil(1.6 * n_top)))


def scattering_element_arrays(g: Geometry, u, sphere: SphereResponse,
                              spec: SeriesSpec = SeriesSpec()) -> np.ndarray:
    """Scattering-part elements (5, len(u)), summing the multipole series per u."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u <= 0):
        raise DomainError("u must be positive")
    if g.radius != sphere.radius:
        raise DomainError(
            f"geometry radius {g.radius} != sphere radius {sphere.radius}")
    out = np.zeros((5, u.size))
    if _is_vacuum(sphere):
        return out
    sin_t = math.sin(g.theta_sum)
    gam = g.gamma
    eps_all = np.atleast_1d(permittivity_iu(sphere.eps_model, u))
    mu_all = np.atleast_1d(permeability_iu(sphere.mu_model, u))
    for j in range(u.size):
        uj = u[j]
        if uj * (g.r_a + g.r_b - 2.0 * g.radius) / C > -_DEAD_EXPONENT:
            continue  # every term underflows; elements are 0 in double precision
        sums, _ = _series_sums(g.r_a, g.r_b, g.radius, gam, uj,
                               eps_all[j], mu_all[j], spec)
        pre_r = 1.0 / (4.0 * math.pi * uj * g.r_a * g.r_b)
        out[0, j] = pre_r * sums[0]
        out[1, j] = -sin_t * pre_r * sums[1]
        out[2, j] = -sin_t * pre_r * sums[2]
        out[3, j] = uj * sums[3] / (4.0 * math.pi)
        out[4, j] = uj * sums[4] / (4.0 * math.pi)
    return out


def scattering_elements(g: Geometry, u: float, sphere: SphereResponse,
                        spec: SeriesSpec = SeriesSpec()) -> GreenElements:
    """Scattering-part Green tensor elements at omega = iu."""
    vals = scattering_element_arrays(g, u, sphere, spec)[:, 0]
    return GreenElements(*vals)


def scattering_trace_arrays(r: float, u, sphere: SphereResponse,
                            spec: SeriesSpec = SeriesSpec()) -> np.ndarray:
    """Tr G^(1)(r, r, iu) for an array of u at coincident atom position.

    Coincidence is the Theta = 0, r_a = r_b = r point of the two-point
    elements: off-diagonals carry sin(Theta) = 0 and thetatheta = phiphi.
    """
    if r <= sphere.radius:
        raise DomainError(f"atom must sit outside the sphere: r={r}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u <= 0):
        raise DomainError("u must be positive")
    out = np.zeros(u.size)
    if _is_vacuum(sphere):
        return out
    eps_all = np.atleast_1d(permittivity_iu(sphere.eps_model, u))
    mu_all = np.atleast_1d(permeability_iu(sphere.mu_model, u))
    for j in range(u.size):
        uj = u[j]
        if 2.0 * uj * (r - sphere.radius) / C > -_DEAD_EXPONENT:
            continue
        sums, _ = _series_sums(r, r, sphere.radius, 1.0, uj,
                               eps_all[j], mu_all[j], spec)
        rr = sums[0] / (4.0 * math.pi * uj * r * r)
        tt = uj * sums[3] / (4.0 * math.pi)
        ff = uj * sums[4] / (4.0 * math.pi)
        scale = max(abs(tt), abs(ff), 1e-300)
        if abs(tt - ff) > 1e-11 * scale:
            raise RuntimeError(
                f"thetatheta and phiphi must coincide at Theta = 0: {tt} vs {ff}")
        out[j] = rr + tt + ff
    return out


def scattering_trace_coincident(r: float, u: float, sphere: SphereResponse,
                                spec: SeriesSpec = SeriesSpec()) -> float:
    """Tr G^(1)(r, r, iu) at a single imaginary frequency."""
    return float(scattering_trace_arrays(r, u, sphere, spec)[0])
