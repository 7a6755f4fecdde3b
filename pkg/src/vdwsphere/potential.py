"""Imaginary-frequency quadrature of the two-atom and single-atom potentials.

The two-atom interaction energy splits into the free-space part and the
body-induced part; the latter decomposes further into the cross term between
free-space and scattering Green tensors (one power of the sphere response)
and the pure scattering term (two powers). Each of the five tensor elements
contributes its own integral; all of them, plus the free-space part, converge
inside a single vector quadrature.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .green import (
    Geometry, SeriesSpec, free_space_element_arrays,
    scattering_element_arrays, scattering_trace_arrays,
)
from .materials import C, EPS0, HBAR, MU0, AtomModel, SphereResponse, atom_alpha_iu
from .quadrature import QuadratureSpec, integrate_vector

ELEMENT_NAMES = ("rr", "rtheta", "thetar", "thetatheta", "phiphi")


@dataclass(frozen=True)
class PotentialBreakdown:
    """Free-space, cross and scattering contributions to the two-atom energy."""
    u0: float
    u1: dict[str, float]
    u2: dict[str, float]
    ub: float
    uab: float
    ratio: float

    @classmethod
    def from_components(cls, u0: float, u1: dict[str, float],
                        u2: dict[str, float]) -> "PotentialBreakdown":
        ub = sum(u1.values()) + sum(u2.values())
        uab = u0 + ub
        return cls(u0=u0, u1=dict(u1), u2=dict(u2), ub=ub, uab=uab,
                   ratio=uab / u0)


def u0_free_space(g: Geometry, atom_a: AtomModel, atom_b: AtomModel,
                  quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Free-space Casimir-Polder interaction of the two ground-state atoms."""
    l = g.separation
    if l <= 0:
        raise DomainError("coincident atoms")

    def integrand(u):
        xi = l * u / C
        bracket = 3.0 + 6.0 * xi + 5.0 * xi**2 + 2.0 * xi**3 + xi**4
        return (atom_alpha_iu(atom_a, u) * atom_alpha_iu(atom_b, u)
                * np.exp(-2.0 * xi) * bracket).reshape(1, -1)

    val = integrate_vector(integrand, 1, quad)[0]
    return float(-HBAR / (16.0 * np.pi**3 * EPS0**2 * l**6) * val)


def _body_integrands(g, atom_a, atom_b, sphere, series):
    def integrand(u):
        a_a = atom_alpha_iu(atom_a, u)
        a_b = atom_alpha_iu(atom_b, u)
        g0 = free_space_element_arrays(g, u)
        g1 = scattering_element_arrays(g, u, sphere, series)
        w = u**4 * a_a * a_b
        u0_row = -(HBAR * MU0**2 / (2.0 * np.pi)) * w * np.sum(g0 * g0, axis=0)
        u1_rows = -(HBAR * MU0**2 / np.pi) * w * g0 * g1
        u2_rows = -(HBAR * MU0**2 / (2.0 * np.pi)) * w * g1 * g1
        return np.vstack([u0_row[None, :], u1_rows, u2_rows])
    return integrand


def body_potential(g: Geometry, atom_a: AtomModel, atom_b: AtomModel,
                   sphere: SphereResponse,
                   quad: QuadratureSpec = QuadratureSpec(),
                   series: SeriesSpec = SeriesSpec()) -> PotentialBreakdown:
    """Full breakdown of the two-atom potential near the sphere.

    One vector quadrature assembles the free-space part and the per-element
    cross and scattering contributions, each converged independently.
    """
    vals = integrate_vector(_body_integrands(g, atom_a, atom_b, sphere, series),
                            11, quad)
    u1 = {name: float(vals[1 + i]) for i, name in enumerate(ELEMENT_NAMES)}
    u2 = {name: float(vals[6 + i]) for i, name in enumerate(ELEMENT_NAMES)}
    return PotentialBreakdown.from_components(float(vals[0]), u1, u2)


def body_parts_trace(g: Geometry, atom_a: AtomModel, atom_b: AtomModel,
                     sphere: SphereResponse,
                     quad: QuadratureSpec = QuadratureSpec(),
                     series: SeriesSpec = SeriesSpec()):
    """(U1 total, U2 total) via the matrix-trace forms Tr[G0.G1^T], Tr[G1.G1^T].

    Reciprocity turns the second argument swap into a transpose, so this path
    must agree with the element-product assembly of `body_potential`.
    """
    def integrand(u):
        a_a = atom_alpha_iu(atom_a, u)
        a_b = atom_alpha_iu(atom_b, u)
        g0 = free_space_element_arrays(g, u)
        g1 = scattering_element_arrays(g, u, sphere, series)
        m0 = _as_matrices(g0)
        m1 = _as_matrices(g1)
        w = u**4 * a_a * a_b
        tr01 = np.einsum("ijn,ijn->n", m0, m1)
        tr11 = np.einsum("ijn,ijn->n", m1, m1)
        return np.vstack([-(HBAR * MU0**2 / np.pi) * w * tr01,
                          -(HBAR * MU0**2 / (2.0 * np.pi)) * w * tr11])

    vals = integrate_vector(integrand, 2, quad)
    return float(vals[0]), float(vals[1])


def _as_matrices(rows: np.ndarray) -> np.ndarray:
    """(5, n) element rows -> (3, 3, n) matrices in the (r, theta, phi) basis."""
    n = rows.shape[1]
    m = np.zeros((3, 3, n))
    m[0, 0] = rows[0]
    m[0, 1] = rows[1]
    m[1, 0] = rows[2]
    m[1, 1] = rows[3]
    m[2, 2] = rows[4]
    return m


def total_potential(g: Geometry, atom_a: AtomModel, atom_b: AtomModel,
                    sphere: SphereResponse,
                    quad: QuadratureSpec = QuadratureSpec(),
                    series: SeriesSpec = SeriesSpec()):
    """(U_AB, U_AB/U0) for the two atoms near the sphere."""
    br = body_potential(g, atom_a, atom_b, sphere, quad, series)
    return br.uab, br.ratio


def single_atom_potential(r: float, atom: AtomModel, sphere: SphereResponse,
                          quad: QuadratureSpec = QuadratureSpec(),
                          series: SeriesSpec = SeriesSpec()) -> float:
    """Single-atom potential near the sphere from the coincident-point trace."""
    if r <= sphere.radius:
        raise DomainError(f"atom must sit outside the sphere: r={r}")

    def integrand(u):
        return (u**2 * atom_alpha_iu(atom, u)
                * scattering_trace_arrays(r, u, sphere, series)).reshape(1, -1)

    val = integrate_vector(integrand, 1, quad)[0]
    return float(HBAR * MU0 / (2.0 * np.pi) * val)


def _geometry_with(g: Geometry, which: str, r: float, theta: float) -> Geometry:
    if which == "A":
        return Geometry(g.radius, r, g.r_b, theta, g.theta_b)
    return Geometry(g.radius, g.r_a, r, g.theta_a, theta)


def force_on_atom(g: Geometry, atom_a: AtomModel, atom_b: AtomModel,
                  sphere: SphereResponse, which: str = "A",
                  step: float | None = None,
                  quad: QuadratureSpec = QuadratureSpec(),
                  series: SeriesSpec = SeriesSpec()) -> np.ndarray:
    """In-plane force (e_r, e_theta, e_phi components) on the chosen atom.

    Central finite differences with one Richardson halving of the total
    potential U_A + U_B + U_AB over the atom's (r, theta); the other atom's
    single-atom term is constant under the displacement and drops out of the
    differences. The e_phi component vanishes by symmetry.
    """
    if which not in ("A", "B"):
        raise DomainError(f"which must be 'A' or 'B', got {which!r}")
    r0 = g.r_a if which == "A" else g.r_b
    th0 = g.theta_a if which == "A" else g.theta_b
    atom = atom_a if which == "A" else atom_b
    delta_a = g.r_a - g.radius
    delta_b = g.r_b - g.radius
    if step is None:
        step = 1e-4 * min(g.separation, delta_a, delta_b)

    def u_of(r, theta):
        gg = _geometry_with(g, which, r, theta)
        uab = body_potential(gg, atom_a, atom_b, sphere, quad, series).uab
        return uab + single_atom_potential(r, atom, sphere, quad, series)

    out = np.zeros(3)
    for axis in (0, 1):
        def shifted(h):
            if axis == 0:
                return u_of(r0 + h, th0)
            return u_of(r0, th0 + h)

        d_full = (shifted(step) - shifted(-step)) / (2.0 * step)
        d_half = (shifted(step / 2) - shifted(-step / 2)) / step
        best = (4.0 * d_half - d_full) / 3.0
        scale = max(abs(best), 1e-300)
        if abs(d_half - d_full) > 1e-3 * scale:
            warnings.warn(
                f"finite-difference step {step:.3g} looks too large on axis "
                f"{'r' if axis == 0 else 'theta'}: Richardson disagreement "
                f"{abs(d_half - d_full) / scale:.2e}", RuntimeWarning)
        grad = best if axis == 0 else best / r0
        out[axis] = -grad
    return out
