"""Closed-form limiting potentials: large sphere, small sphere, retarded and
nonretarded small-sphere forms, and the Axilrod-Teller triple-dipole term.

The large-sphere limit treats the sphere as a locally planar interface with
curvature corrections of order 1/R; the small-sphere limit treats it as a
third polarizable ground-state particle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .green import Geometry, f_factor, g_factor
from .materials import (
    C, EPS0, HBAR, AtomModel, DrudeLorentzModel, SphereResponse, VACUUM,
    atom_alpha_iu, permeability_iu, permittivity_iu, sphere_alpha_iu,
    sphere_beta_iu,
)
from .quadrature import QuadratureSpec, integrate_vector

_REGIME_RATIO = 0.1


@dataclass(frozen=True)
class LargeSphereGeometry:
    """Near-surface geometry: radial gaps delta_a/b = r - R and opening angle.

    The transverse offset X = R * Theta enters only through X^2, so it is kept
    as a magnitude. l_plus = sqrt(X^2 + (delta_b + delta_a)^2) is the distance
    between one atom and the other's mirror point; l = sqrt(X^2 + delta_-^2)
    approximates the interatomic distance.
    """
    delta_a: float
    delta_b: float
    theta_sum: float
    radius: float

    def __post_init__(self):
        if self.delta_a <= 0 or self.delta_b <= 0 or self.radius <= 0:
            raise DomainError("gaps and radius must be positive")
        if max(self.delta_a, self.delta_b, self.l_plus) > _REGIME_RATIO * self.radius:
            warnings.warn(
                "large-sphere limit assumes gaps and separations well below the "
                f"radius (ratio {max(self.delta_a, self.delta_b, self.l_plus) / self.radius:.3g})",
                RuntimeWarning)

    @property
    def x_offset(self) -> float:
        return self.radius * self.theta_sum

    @property
    def delta_plus(self) -> float:
        return self.delta_b + self.delta_a

    @property
    def delta_minus(self) -> float:
        return self.delta_b - self.delta_a

    @property
    def l_plus(self) -> float:
        return math.hypot(self.x_offset, self.delta_plus)

    @property
    def separation(self) -> float:
        return math.hypot(self.x_offset, self.delta_minus)

    def to_geometry(self) -> Geometry:
        """Exact sphere geometry with the angle split evenly between the atoms."""
        return Geometry(self.radius, self.radius + self.delta_a,
                        self.radius + self.delta_b,
                        self.theta_sum / 2.0, self.theta_sum / 2.0)


@dataclass(frozen=True)
class TripleGeometry:
    """Atom-atom-sphere triangle of the small-sphere (third-atom) limit.

    Unit vectors a (along r_A), b (along l) and c (along -r_B) give dot
    products equal to -cos of the interior angles at atom A, atom B and the
    sphere corner.
    """
    r_a: float
    r_b: float
    l: float

    def __post_init__(self):
        s = sorted((self.r_a, self.r_b, self.l))
        if s[0] <= 0:
            raise DomainError("triangle sides must be positive")
        if s[0] + s[1] < s[2]:
            raise DomainError(
                f"sides ({self.r_a}, {self.r_b}, {self.l}) violate the triangle inequality")

    @classmethod
    def from_geometry(cls, g: Geometry) -> "TripleGeometry":
        return cls(r_a=g.r_a, r_b=g.r_b, l=g.separation)

    @property
    def dot_ab(self) -> float:
        """a.b = -cos(angle at atom A) = l_A / l."""
        return (self.r_b**2 - self.r_a**2 - self.l**2) / (2.0 * self.r_a * self.l)

    @property
    def dot_bc(self) -> float:
        """b.c = -cos(angle at atom B) = -l_B / l."""
        return (self.r_a**2 - self.r_b**2 - self.l**2) / (2.0 * self.r_b * self.l)

    @property
    def dot_ca(self) -> float:
        """c.a = -cos(angle at the sphere corner)."""
        return (self.l**2 - self.r_a**2 - self.r_b**2) / (2.0 * self.r_a * self.r_b)


def _ikl_integrals(atom_a, atom_b, eps_model, mu_model, radius, quad):
    """The four moment integrals of the large-sphere electric formula.

    I_kl = int du alpha_A alpha_B [26 + eps mu R^2 u^2 / c^2]^k
           [(eps - 1)/(eps + 1)]^l for (k, l) in (0,1), (1,1), (0,2), (1,2).
    """
    def integrand(u):
        a2 = atom_alpha_iu(atom_a, u) * atom_alpha_iu(atom_b, u)
        eps = permittivity_iu(eps_model, u)
        mu = permeability_iu(mu_model, u)
        bracket = 26.0 + eps * mu * (radius * u / C) ** 2
        ratio = (eps - 1.0) / (eps + 1.0)
        return np.vstack([a2 * ratio, a2 * bracket * ratio,
                          a2 * ratio**2, a2 * bracket * ratio**2])
    vals = integrate_vector(integrand, 4, quad)
    return {"01": vals[0], "11": vals[1], "02": vals[2], "12": vals[3]}


def _ikl_integrals_eta(atom_a, atom_b, eps_model, mu_model, radius, quad):
    """Same moments with the appendix bracket 26 + (1 + eps mu) R^2 u^2 / c^2."""
    def integrand(u):
        a2 = atom_alpha_iu(atom_a, u) * atom_alpha_iu(atom_b, u)
        eps = permittivity_iu(eps_model, u)
        mu = permeability_iu(mu_model, u)
        bracket = 26.0 + (1.0 + eps * mu) * (radius * u / C) ** 2
        ratio = (eps - 1.0) / (eps + 1.0)
        return np.vstack([a2 * ratio, a2 * bracket * ratio,
                          a2 * ratio**2, a2 * bracket * ratio**2])
    vals = integrate_vector(integrand, 4, quad)
    return {"01": vals[0], "11": vals[1], "02": vals[2], "12": vals[3]}


def large_sphere_electric(geom: LargeSphereGeometry, atom_a: AtomModel,
                          atom_b: AtomModel, eps_model: DrudeLorentzModel,
                          mu_model: DrudeLorentzModel = VACUUM,
                          quad: QuadratureSpec = QuadratureSpec(),
                          bracket: str = "main-text") -> float:
    """Body-induced potential near an electrically polarizable large sphere.

    `bracket` selects the retardation bracket inside I_11/I_12: "main-text"
    uses 26 + eps mu R^2 u^2/c^2, "eta" the appendix variant
    26 + (1 + eps mu) R^2 u^2/c^2; the two are reported separately by the
    limit-comparison tooling.
    """
    if bracket == "main-text":
        ikl = _ikl_integrals(atom_a, atom_b, eps_model, mu_model, geom.radius, quad)
    elif bracket == "eta":
        ikl = _ikl_integrals_eta(atom_a, atom_b, eps_model, mu_model, geom.radius, quad)
    else:
        raise ValueError(f"unknown bracket variant {bracket!r}")
    x = geom.x_offset
    dp = geom.delta_plus
    dm = geom.delta_minus
    lp = geom.l_plus
    l = geom.separation
    r = geom.radius
    term1 = (4.0 * x**4 - 2.0 * dm**2 * dp**2 + x**2 * (dm**2 + dp**2)) * ikl["01"]
    term2 = (lp**2 / (4.0 * r)) * (3.0 * (lp**3 - dp**3)
                                   - dp * (dm**2 + 4.0 * x**2)) * ikl["11"]
    term3 = -(3.0 * l**5 / lp) * (ikl["02"] + lp / (4.0 * r) * ikl["12"])
    return float(HBAR / (16.0 * np.pi**3 * EPS0**2 * l**5 * lp**5)
                 * (term1 + term2 + term3))


def large_sphere_magnetic(geom: LargeSphereGeometry, atom_a: AtomModel,
                          atom_b: AtomModel, mu_model: DrudeLorentzModel,
                          quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Body-induced potential near a purely magnetically polarizable large sphere."""
    def integrand(u):
        mu = permeability_iu(mu_model, u)
        return (u**2 * atom_alpha_iu(atom_a, u) * atom_alpha_iu(atom_b, u)
                * (mu - 1.0) * (mu - 3.0) / (mu + 1.0)).reshape(1, -1)

    val = integrate_vector(integrand, 1, quad)[0]
    x = geom.x_offset
    dp = geom.delta_plus
    dm = geom.delta_minus
    lp = geom.l_plus
    l = geom.separation
    pre = HBAR * (dm**2 - 2.0 * x**2 + 3.0 * dp * (lp - dp)) / (
        64.0 * np.pi**3 * EPS0**2 * C**2 * l**5 * lp)
    return float(pre * val)


def small_sphere(g: Geometry, atom_a: AtomModel, atom_b: AtomModel,
                 sphere: SphereResponse,
                 quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Body-induced potential with the sphere treated as a small third body."""
    if sphere.radius > _REGIME_RATIO * min(g.r_a, g.r_b):
        warnings.warn(
            "small-sphere limit assumes R well below both atom distances "
            f"(ratio {sphere.radius / min(g.r_a, g.r_b):.3g})", RuntimeWarning)
    r_a, r_b = g.r_a, g.r_b
    l = g.separation
    l_a, l_b = g.l_a, g.l_b
    cos_t = g.gamma
    sin2 = math.sin(g.theta_sum) ** 2

    def integrand(u):
        a = r_a * u / C
        b = r_b * u / C
        xi = l * u / C
        fa, fb, fxi = f_factor(a), f_factor(b), f_factor(xi)
        ga, gb, gxi = g_factor(a), g_factor(b), g_factor(xi)
        elec = (fxi * (gb * (2.0 * (1.0 + a) - ga * sin2) + 2.0 * a * a * fb)
                + (gxi / l**2) * (((2.0 * l**2 - r_a * r_b * cos_t) * fa * fb
                                   + 2.0 * a * a * fb * r_a * l_a
                                   - 2.0 * b * b * fa * r_b * l_b) * sin2
                                  - 4.0 * (1.0 + a) * (1.0 + b) * l_a * l_b * cos_t))
        magn = (a * b / C**2) * (1.0 + a) * (1.0 + b) * (
            gxi * r_a * r_b / l**2 * sin2 - 2.0 * fxi * cos_t)
        alpha2 = atom_alpha_iu(atom_a, u) * atom_alpha_iu(atom_b, u)
        env = np.exp(-(r_a + r_b + l) * u / C)
        return (alpha2 * env * (sphere_alpha_iu(sphere, u) * elec
                                + sphere_beta_iu(sphere, u) * magn)).reshape(1, -1)

    val = integrate_vector(integrand, 1, quad)[0]
    return float(HBAR / (64.0 * np.pi**4 * EPS0**3 * r_a**3 * r_b**3 * l**3) * val)


def _h1_poly(x, y, z):
    return (3.0 * x**6 * y**2 * (y - x) * (x + y + 7.0 * z)
            * (x**2 + 7.0 * x * y + 11.0 * y**2)
            - x**4 * y**2 * z**2 * (53.0 * x**4 + 280.0 * x**3 * y
                                    - 137.0 * x**2 * y**2 - 329.0 * x * y**3
                                    - 623.0 * x * y**2 * z - 192.0 * y**2 * z**2))


def _h2_poly(x, y, z):
    return (3.0 * x**4 * (y - x) * (x + y + 7.0 * z) * (x**2 + 7.0 * x * y + 11.0 * y**2)
            - 2.0 * x**3 * z**2 * (x + y) * (26.0 * x**2 + 93.0 * x * y - 133.0 * y**2)
            - 7.0 * x**2 * z**5 * (3.0 * x - 2.0 * y)
            - 14.0 * x**3 * z**3 * (2.0 * x**2 - 3.0 * x * y - 13.0 * y**2)
            - x**3 * z**4 * (17.0 * x + 161.0 * y)
            + 2.0 * x * z**6 * (31.0 * x + 105.0 * y)
            + 5.0 * z**7 * (14.0 * x + z))


def _symmetrized(poly, x, y, z):
    """S[f](x, y, z) = f(x, y, z) + f(y, x, z)."""
    return poly(x, y, z) + poly(y, x, z)


def small_sphere_retarded(g: Geometry, alpha_a0: float, alpha_b0: float,
                          alpha_sp0: float, beta_sp0: float = 0.0) -> float:
    """Closed-form small-sphere potential in the fully retarded regime.

    Takes the static polarizabilities of the atoms and of the sphere; no
    quadrature is involved.
    """
    x, y, z = g.r_a, g.r_b, g.separation
    s = x + y + z
    elec = (_symmetrized(_h1_poly, x, y, z)
            + _symmetrized(_h1_poly, y, z, x)
            + _symmetrized(_h1_poly, z, x, y))
    magn = x**2 * y**2 / C**2 * beta_sp0 * _symmetrized(_h2_poly, x, y, z)
    pre = HBAR * C * alpha_a0 * alpha_b0 / (
        32.0 * np.pi**4 * EPS0**3 * x**5 * y**5 * z**5 * s**7)
    return float(pre * (alpha_sp0 * elec + magn))


def nonretarded_moments(atom_a: AtomModel, atom_b: AtomModel,
                        sphere: SphereResponse,
                        quad: QuadratureSpec = QuadratureSpec()):
    """(J1, J2): response moments of the nonretarded small-sphere potential."""
    def integrand(u):
        alpha2 = atom_alpha_iu(atom_a, u) * atom_alpha_iu(atom_b, u)
        return np.vstack([alpha2 * sphere_alpha_iu(sphere, u),
                          u**2 * alpha2 * sphere_beta_iu(sphere, u)])
    vals = integrate_vector(integrand, 2, quad)
    return float(vals[0]), float(vals[1])


def small_sphere_nonretarded(g: Geometry, atom_a: AtomModel, atom_b: AtomModel,
                             sphere: SphereResponse,
                             quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Nonretarded small-sphere potential (all separations well below c/omega)."""
    j1, j2 = nonretarded_moments(atom_a, atom_b, sphere, quad)
    r_a, r_b = g.r_a, g.r_b
    l = g.separation
    cos_t = g.gamma
    sin2 = math.sin(g.theta_sum) ** 2
    elec = (1.0 - (4.0 * g.l_a * g.l_b + r_a * r_b * sin2) / l**2 * cos_t
            + cos_t**2)
    magn = (r_a * r_b / C**4) * (r_a * r_b / l**2 * sin2 - (2.0 / 3.0) * cos_t)
    return float(3.0 * HBAR / (64.0 * np.pi**4 * EPS0**3 * r_a**3 * r_b**3 * l**3)
                 * (elec * j1 + magn * j2))


def axilrod_teller(tri: TripleGeometry, j1: float) -> float:
    """Triple-dipole dispersion energy of the atom-atom-sphere triangle.

    j1 is the integrated product of the three polarizabilities (see
    `nonretarded_moments`); the angular factor uses the triangle's unit-vector
    dot products.
    """
    bracket = 1.0 - 3.0 * tri.dot_ab * tri.dot_bc * tri.dot_ca
    return float(3.0 * HBAR / (64.0 * np.pi**4 * EPS0**3
                               * tri.r_a**3 * tri.r_b**3 * tri.l**3)
                 * bracket * j1)
