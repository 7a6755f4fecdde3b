"""Material and atomic response functions on the imaginary frequency axis.

Reduced units throughout the package: hbar = c = eps0 = mu0 = 1, frequencies
in units of a reference transition frequency omega10, lengths in c/omega10,
energies in hbar*omega10. The named constants below keep formulas literate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import RegimeError

HBAR = 1.0
C = 1.0
EPS0 = 1.0
MU0 = 1.0


@dataclass(frozen=True)
class DrudeLorentzModel:
    """Single-resonance Drude-Lorentz parameters.

    On the imaginary axis the response is 1 + plasma/(resonance^2 + u^2 +
    damping*u): real, >= 1, and monotonically decreasing in u. `plasma` is the
    bare numerator of the resonance term (reduced units).
    """
    plasma: float = 0.0
    resonance: float = 1.0
    damping: float = 0.0

    def __post_init__(self):
        if self.plasma < 0 or self.resonance < 0 or self.damping < 0:
            raise ValueError("Drude-Lorentz parameters must be non-negative")


VACUUM = DrudeLorentzModel(plasma=0.0)


@dataclass(frozen=True)
class AtomModel:
    """Ground-state atom as a list of (transition frequency, dipole strength)."""
    transitions: tuple[tuple[float, float], ...] = field(default=((1.0, 1.5),))

    def __post_init__(self):
        for w, d2 in self.transitions:
            if w <= 0 or d2 < 0:
                raise ValueError("transitions need omega_k0 > 0 and d2_k0 >= 0")

    @classmethod
    def two_level(cls, alpha0: float = 1.0, omega10: float = 1.0) -> "AtomModel":
        """Two-level atom with static polarizability alpha0: d^2 = 3 hbar omega10 alpha0 / 2."""
        return cls(transitions=((omega10, 1.5 * HBAR * omega10 * alpha0),))


@dataclass(frozen=True)
class SphereResponse:
    """Homogeneous magneto-electric sphere: radius and the two response models."""
    radius: float
    eps_model: DrudeLorentzModel = VACUUM
    mu_model: DrudeLorentzModel = VACUUM

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"sphere radius must be positive, got {self.radius}")


def permittivity_iu(model: DrudeLorentzModel, u):
    """eps(iu) = 1 + plasma / (resonance^2 + u^2 + damping*u)."""
    u = np.asarray(u, dtype=float)
    out = 1.0 + model.plasma / (model.resonance**2 + u * u + model.damping * u)
    return out if out.ndim else float(out)


def permeability_iu(model: DrudeLorentzModel, u):
    """mu(iu), same single-resonance form as the permittivity."""
    return permittivity_iu(model, u)


def atom_alpha_iu(atom: AtomModel, u):
    """Polarizability alpha(iu) = (2/3 hbar) sum_k omega_k0 d2_k0 / (omega_k0^2 + u^2)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    for w, d2 in atom.transitions:
        out = out + (2.0 / (3.0 * HBAR)) * w * d2 / (w * w + u * u)
    return out if out.ndim else float(out)


def sphere_alpha_iu(sphere: SphereResponse, u):
    """Sphere electric polarizability 4 pi eps0 R^3 (eps - 1)/(eps + 2) at iu."""
    eps = permittivity_iu(sphere.eps_model, u)
    return 4.0 * np.pi * EPS0 * sphere.radius**3 * (eps - 1.0) / (eps + 2.0)


def sphere_beta_iu(sphere: SphereResponse, u):
    """Sphere magnetic polarizability (4 pi R^3 / mu0) (mu - 1)/(mu + 2) at iu."""
    mu = permeability_iu(sphere.mu_model, u)
    return (4.0 * np.pi / MU0) * sphere.radius**3 * (mu - 1.0) / (mu + 2.0)


def clausius_mossotti_sphere(densities: list[tuple[float, float]]) -> float:
    """Clausius-Mossotti ratio (eps-1)/(eps+2) = sum_k n_k alpha_k / (3 eps0).

    `densities` holds (number density, polarizability at the frequency of
    interest) pairs. The implied sphere polarizability is
    alpha_sp = (4 pi R^3 / 3) sum_k n_k alpha_k.
    """
    total = sum(nk * ak for nk, ak in densities) / (3.0 * EPS0)
    if total >= 1.0:
        raise RegimeError(
            f"Clausius-Mossotti sum {total:.6g} reached 1: outside the physical regime")
    return total
