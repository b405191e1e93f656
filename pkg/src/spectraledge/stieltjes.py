"""Self-consistent Stieltjes transform of the limiting spectral law and its companions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SolverFailureError
from .spectrum import SpectrumModel

ETA_FLOOR = 1e-9
TOL = 1e-12
DAMPING = 0.5
MAX_ITER = 100_000
_ETA_STEP = 0.7
_FP_BURST = 500
_NEWTON_MAX = 60


@dataclass(frozen=True)
class StieltjesValue:
    """Stieltjes transform and derived transforms at one spectral point.

    s solves  s = mean_i 1/( d_i^2/(1+c s) - z (1+c s) + (1-c) )  on the upper
    half plane; the companions are algebraic functions of (z, s, c).
    """

    z: complex
    s: complex
    s_tilde: complex
    b: complex
    tb: complex
    w: complex
    residual: float
    iterations: int


def _fixed_point_map(dsq: np.ndarray, c: float, z: complex, s: complex) -> complex:
    beta = 1.0 + c * s
    den = dsq / beta - z * beta + (1.0 - c)
    return complex(np.mean(1.0 / den))


def _map_derivative(dsq: np.ndarray, c: float, z: complex, s: complex) -> complex:
    beta = 1.0 + c * s
    den = dsq / beta - z * beta + (1.0 - c)
    dden = -c * dsq / beta**2 - c * z
    return complex(np.mean(-dden / den**2))


def _admissible(z: complex, s: complex) -> bool:
    return s.imag >= -1e-12 and (z * s).imag >= -1e-8


def _solve_at(dsq, c, z, s0, tol, max_iter):
    """Damped fixed-point iteration with a Newton fallback, from warm start s0."""
    s = s0
    total = 0
    delta = np.inf
    while total < max_iter:
        burst = min(_FP_BURST, max_iter - total)
        for _ in range(burst):
            t = _fixed_point_map(dsq, c, z, s)
            s_new = (1.0 - DAMPING) * s + DAMPING * t
            delta = abs(s_new - s)
            s = s_new
            total += 1
            if delta < tol:
                return s, total
        # fixed point is converging too slowly; try Newton on T(s) - s
        sn = s
        for _ in range(_NEWTON_MAX):
            f = _fixed_point_map(dsq, c, z, sn) - sn
            fp = _map_derivative(dsq, c, z, sn) - 1.0
            if fp == 0:
                break
            step = f / fp
            sn = sn - step
            total += 1
            if not _admissible(z, sn) or not np.isfinite(sn):
                sn = None
                break
            if abs(step) < tol:
                return sn, total
        if sn is not None and _admissible(z, sn):
            s = sn
    residual = abs(_fixed_point_map(dsq, c, z, s) - s)
    if residual < 10 * tol:
        return s, total
    raise SolverFailureError(
        f"stieltjes solver did not converge at z={z}; last residual {residual:.3e}",
        residual=residual,
    )


def solve_stieltjes(
    model: SpectrumModel,
    z: complex,
    *,
    tol: float = TOL,
    eta_floor: float = ETA_FLOOR,
    max_iter: int = MAX_ITER,
) -> StieltjesValue:
    """Solve the self-consistent equation at z (Im z > 0, or real E != 0 as a boundary value).

    The solution is tracked by continuation in the imaginary part: start high
    in the upper half plane where the map contracts, then shrink eta
    geometrically down to the target, reusing the previous solution.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("stieltjes transform is not defined at z = 0")
    if z.imag < 0:
        raise DomainError("spectral parameter must satisfy Im z >= 0")
    E = z.real
    eta_target = z.imag if z.imag > 0 else eta_floor

    dsq = model.d_sq
    c = model.c_N

    eta = max(10.0, 2.0 * abs(z))
    s = -1.0 / complex(E, eta)
    iterations = 0
    while True:
        zk = complex(E, eta)
        s, its = _solve_at(dsq, c, zk, s, tol, max_iter)
        iterations += its
        if eta <= eta_target:
            break
        eta = max(eta * _ETA_STEP, eta_target)

    zt = complex(E, eta_target)
    residual = abs(_fixed_point_map(dsq, c, zt, s) - s)
    s_tilde = -(1.0 - c) / zt + c * s
    b = 1.0 + c * s
    tb = zt * b - (1.0 - c)
    w = zt * b**2 - (1.0 - c) * b
    return StieltjesValue(
        z=zt, s=s, s_tilde=s_tilde, b=b, tb=tb, w=w,
        residual=residual, iterations=iterations,
    )


def density(model: SpectrumModel, E: float, **kwargs) -> float:
    """Density of the limiting law at E != 0: (1/pi) Im s(E), clipped at 0."""
    value = solve_stieltjes(model, float(E), **kwargs)
    return max(0.0, value.s.imag / np.pi)
