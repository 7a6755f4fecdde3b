"""Adaptive quadrature over the semi-infinite imaginary-frequency axis.

The half line is mapped onto t in [0, 1): rationally (u = w t/(1-t), the
default; nodes concentrate where atomic response lives) or exponentially
(u = -w log(1-t); uniform t-panels see integrands ~ e^{-s u} as polynomials).
Panels carry nested 15/31-point Gauss-Legendre estimates and the worst panels
are bisected until every component of the (possibly vector-valued) integrand
converges to the requested relative tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError

_GL15 = np.polynomial.legendre.leggauss(15)
_GL31 = np.polynomial.legendre.leggauss(31)


@dataclass(frozen=True)
class QuadratureSpec:
    """Convergence policy for semi-infinite integrals."""
    rel_tol: float = 1e-8
    abs_floor: float = 1e-300
    max_subdivisions: int = 200
    transform: str = "rational-map"  # or "exp-map"
    omega_ref: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.transform not in ("rational-map", "exp-map"):
            raise ValueError(f"unknown transform {self.transform!r}")


def _map_nodes(spec: QuadratureSpec, t):
    """u(t) and du/dt for the configured transform."""
    w = spec.omega_ref
    if spec.transform == "rational-map":
        u = w * t / (1.0 - t)
        jac = w / (1.0 - t) ** 2
    else:
        u = -w * np.log1p(-t)
        jac = w / (1.0 - t)
    return u, jac


class _Panel:
    __slots__ = ("t0", "t1", "integral", "error")

    def __init__(self, t0, t1):
        self.t0 = t0
        self.t1 = t1
        self.integral = None
        self.error = None


def _evaluate_panels(f, panels, spec, ncomp):
    """Fill integral/error on each pending panel with one batched call to f."""
    nodes = []
    for p in panels:
        half = 0.5 * (p.t1 - p.t0)
        mid = 0.5 * (p.t1 + p.t0)
        nodes.append(mid + half * _GL15[0])
        nodes.append(mid + half * _GL31[0])
    t_all = np.concatenate(nodes)
    u_all, jac_all = _map_nodes(spec, t_all)
    vals = np.atleast_2d(np.asarray(f(u_all), dtype=float))
    if vals.shape != (ncomp, t_all.size):
        raise ValueError(
            f"integrand returned shape {vals.shape}, expected {(ncomp, t_all.size)}")
    bad = np.where(~np.isfinite(vals))
    if bad[0].size:
        raise NonConvergenceError(
            f"integrand returned a non-finite value at u={u_all[bad[1][0]]:.6g}")
    vals = vals * jac_all
    pos = 0
    for p in panels:
        half = 0.5 * (p.t1 - p.t0)
        v15 = vals[:, pos:pos + 15]
        pos += 15
        v31 = vals[:, pos:pos + 31]
        pos += 31
        i15 = half * (v15 @ _GL15[1])
        i31 = half * (v31 @ _GL31[1])
        p.integral = i31
        p.error = np.abs(i31 - i15)


def integrate_vector(f, ncomp: int, spec: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """Integrate a vector-valued integrand f: u-array -> (ncomp, n) over (0, inf).

    Every component is converged independently to spec.rel_tol (relative to its
    own magnitude, floored at abs_floor times the overall scale).
    """
    panels = [_Panel(k / 8.0, (k + 1) / 8.0) for k in range(8)]
    _evaluate_panels(f, panels, spec, ncomp)
    while True:
        total = np.sum([p.integral for p in panels], axis=0)
        err = np.sum([p.error for p in panels], axis=0)
        scale = max(float(np.max(np.abs(total))), 1.0)
        allow = spec.rel_tol * np.maximum(np.abs(total), spec.abs_floor * scale)
        if np.all(err <= allow):
            return total
        if len(panels) >= spec.max_subdivisions:
            worst = int(np.argmax(err / np.maximum(allow, 1e-300)))
            raise NonConvergenceError(
                f"quadrature did not converge within {spec.max_subdivisions} panels "
                f"(component {worst}: error {err[worst]:.3e} vs allowance {allow[worst]:.3e})")
        # split every panel carrying a meaningful share of the worst error
        with np.errstate(invalid="ignore", divide="ignore"):
            scores = np.array([
                float(np.max(p.error / np.maximum(allow, 1e-300))) for p in panels])
        cutoff = 0.25 * scores.max()
        fresh = []
        kept = []
        budget = spec.max_subdivisions - len(panels)
        order = np.argsort(-scores)
        to_split = set()
        for idx in order:
            if scores[idx] >= cutoff and budget > 0:
                to_split.add(int(idx))
                budget -= 1
        for idx, p in enumerate(panels):
            if idx in to_split:
                mid = 0.5 * (p.t0 + p.t1)
                fresh.append(_Panel(p.t0, mid))
                fresh.append(_Panel(mid, p.t1))
            else:
                kept.append(p)
        _evaluate_panels(f, fresh, spec, ncomp)
        panels = sorted(kept + fresh, key=lambda q: q.t0)


def integrate_semi_infinite(f, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Integral of a scalar function over (0, inf), adaptively to spec.rel_tol."""
    def batched(u):
        return np.array([[f(float(x)) for x in u]])
    return float(integrate_vector(batched, 1, spec)[0])


def integrate_semi_infinite_batched(f, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Like integrate_semi_infinite for a vectorized scalar integrand."""
    def batched(u):
        return np.asarray(f(u), dtype=float).reshape(1, -1)
    return float(integrate_vector(batched, 1, spec)[0])
