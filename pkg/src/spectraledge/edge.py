"""Rightmost spectral edge, its critical point, and the Tracy-Widom scaling constant."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateScalingError, EdgeNotFoundError, PoleError
from .spectrum import SpectrumModel

_GRID_POINTS = 512
_W_MAX_DOUBLINGS = 10
_BISECT_XTOL = 1e-13
_NEWTON_POLISH = 4
_DEGENERATE_REL = 1e-6
_EDGE_EPS = 1e-8


@dataclass(frozen=True)
class EdgeSolution:
    """Edge location and scaling data.

    xi_r is the largest critical point of the edge functional, lambda_r the
    rightmost support edge, b the boundary value 1 + c s(lambda_r).  tb and h
    are the unrescaled companions tb = lambda_r b - (1-c), h = lambda_r b + tb.
    After scaling completes: gamma0, E_plus = gamma0 lambda_r, xi = gamma0 xi_r
    and tb_resc = E_plus b - gamma0 (1-c).
    """

    xi_r: float
    lambda_r: float
    b: float
    tb: float
    h: float
    gamma0: float | None = None
    E_plus: float | None = None
    xi: float | None = None
    tb_resc: float | None = None
    roots: tuple = ()
    near_degenerate: bool = False

    @property
    def h_resc(self) -> float:
        """Rescaled h = E_plus b + tb_resc, the combination used along the flow."""
        return self.E_plus * self.b + self.tb_resc


def phi_family(model: SpectrumModel, w: float):
    """Evaluate (f, f', phi, phi') at real w away from the squared signal values."""
    dsq = model.d_sq
    c = model.c_N
    diff = dsq - w
    if np.any(diff == 0.0):
        raise PoleError(f"w={w} coincides with a squared signal value")
    f = float(np.mean(1.0 / diff))
    fp = float(np.mean(1.0 / diff**2))
    one = 1.0 - c * f
    phi = w * one**2 + (1.0 - c) * one
    phip = one**2 - 2.0 * c * w * one * fp - c * (1.0 - c) * fp
    return f, fp, phi, phip


def _phi_prime_pair(model: SpectrumModel, w: float):
    """phi' and phi'' at w, for Newton polishing of critical points."""
    dsq = model.d_sq
    c = model.c_N
    diff = dsq - w
    f = np.mean(1.0 / diff)
    fp = np.mean(1.0 / diff**2)
    fpp = np.mean(2.0 / diff**3)
    one = 1.0 - c * f
    phip = one**2 - 2.0 * c * w * one * fp - c * (1.0 - c) * fp
    phipp = (
        -4.0 * c * fp * one
        + 2.0 * c**2 * w * fp**2
        - (2.0 * c * w * one + c * (1.0 - c)) * fpp
    )
    return float(phip), float(phipp)


def _bisect(fun, lo, hi, xtol):
    flo = fun(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < xtol:
            return mid
        fmid = fun(mid)
        if fmid == 0.0:
            return mid
        if (flo < 0) == (fmid < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_edge(model: SpectrumModel) -> EdgeSolution:
    """Locate the rightmost critical point xi_r and the edge lambda_r = phi(xi_r).

    phi' tends to -inf just right of d_1^2 and to a positive limit at +inf, so
    a sign change exists whenever the edge separates from the spectrum.  The
    search scans a log-spaced grid, bisects every bracket, polishes each root
    with Newton, and keeps the largest.
    """
    c = model.c_N
    d1sq = float(model.d_sq[0])
    lo = d1sq + _EDGE_EPS

    def phip(w):
        return phi_family(model, w)[3]

    w_max = 4.0 * (d1sq + 1.0) * (1.0 + np.sqrt(c)) ** 2
    brackets = []
    for _ in range(_W_MAX_DOUBLINGS + 1):
        grid = np.geomspace(lo, w_max, _GRID_POINTS)
        values = np.array([phip(w) for w in grid])
        signs = np.sign(values)
        idx = np.nonzero(np.diff(signs) != 0)[0]
        if idx.size:
            brackets = [(grid[i], grid[i + 1]) for i in idx]
            break
        w_max *= 2.0
    if not brackets:
        raise EdgeNotFoundError(
            "no sign change of phi' found; the spectrum may violate the edge-separation assumption"
        )

    roots = []
    for a, bnd in brackets:
        root = _bisect(phip, a, bnd, _BISECT_XTOL)
        for _ in range(_NEWTON_POLISH):
            p, pp = _phi_prime_pair(model, root)
            if pp == 0.0:
                break
            step = p / pp
            cand = root - step
            if not (a - 1e-6 <= cand <= bnd + 1e-6):
                break
            root = cand
            if abs(step) < 1e-16 * max(1.0, abs(root)):
                break
        roots.append(root)
    roots.sort()

    near_degenerate = any(
        abs(roots[i + 1] - roots[i]) <= _DEGENERATE_REL * abs(roots[i + 1])
        for i in range(len(roots) - 1)
    )
    xi_r = roots[-1]
    f, _, phi, _ = phi_family(model, xi_r)
    b = 1.0 / (1.0 - c * f)
    lambda_r = phi
    tb = lambda_r * b - (1.0 - c)
    h = lambda_r * b + tb
    return EdgeSolution(
        xi_r=xi_r, lambda_r=lambda_r, b=b, tb=tb, h=h,
        roots=tuple(roots), near_degenerate=near_degenerate,
    )


def scaling_sums(model: SpectrumModel, edge: EdgeSolution) -> tuple[float, float]:
    """Both sides (A, B) of the cubic scaling equation gamma0^{-3} A = B."""
    dsq = model.d_sq
    N = model.N
    c = model.c_N
    xi_r, lam, b = edge.xi_r, edge.lambda_r, edge.b
    diff = dsq - xi_r
    A = float(np.sum(b**2 / diff**2) / N)
    B = float(
        -1.0 / b**3
        - np.sum((2.0 * lam * b - (1.0 - c)) ** 2 / diff**3) / N
        - np.sum(lam / diff**2) / N
    )
    return A, B


def gamma0(model: SpectrumModel, edge: EdgeSolution) -> EdgeSolution:
    """Complete the edge solution with the scaling constant gamma0 = (A/B)^(1/3).

    A = (1/N) sum b^2/(d_i^2-xi_r)^2 and B is the right side of the cubic
    scaling equation; B <= 0 means no real positive scaling exists.
    """
    c = model.c_N
    xi_r, lam, b = edge.xi_r, edge.lambda_r, edge.b
    A, B = scaling_sums(model, edge)
    if B <= 0.0 or A <= 0.0:
        raise DegenerateScalingError(
            f"no real positive scaling constant (A={A:.6e}, B={B:.6e})", A=A, B=B
        )
    g = (A / B) ** (1.0 / 3.0)
    E_plus = g * lam
    xi = g * xi_r
    tb_resc = E_plus * b - g * (1.0 - c)
    return replace(edge, gamma0=g, E_plus=E_plus, xi=xi, tb_resc=tb_resc)


def solve_edge(model: SpectrumModel) -> EdgeSolution:
    """find_edge followed by gamma0."""
    return gamma0(model, find_edge(model))


def edge_residuals(model: SpectrumModel, edge: EdgeSolution) -> dict:
    """Absolute residuals of the defining edge relations (all should vanish).

    first_order: (1/N) sum b (lambda_r b^2 + xi_r)/(d_i^2-xi_r)^2 = 1
    xi_relation: xi_r = lambda_r b^2 - (1-c) b
    b_relation:  1 - c f(xi_r) = 1/b
    R1, R2:      the rescaled forms of the first-order and scaling equations.
    """
    dsq = model.d_sq
    N = model.N
    c = model.c_N
    xi_r, lam, b = edge.xi_r, edge.lambda_r, edge.b
    diff = dsq - xi_r
    f = float(np.mean(1.0 / diff))
    out = {
        "first_order": abs(np.sum(b * (lam * b**2 + xi_r) / diff**2) / N - 1.0),
        "xi_relation": abs(xi_r - (lam * b**2 - (1.0 - c) * b)),
        "b_relation": abs(1.0 - c * f - 1.0 / b),
    }
    if edge.gamma0 is not None:
        g, E, xi = edge.gamma0, edge.E_plus, edge.xi
        rdiff = g * dsq - xi
        out["R1"] = abs(np.sum(g * b * (E * b**2 + xi) / rdiff**2) / N - 1.0)
        out["R2"] = abs(
            np.sum(b**2 / rdiff**2) / N / g**2
            + 1.0 / (g * b**3)
            + np.sum((2.0 * E * b - g * (1.0 - c)) ** 2 / rdiff**3) / N
            + np.sum(E / rdiff**2) / N
        )
        out["E_plus_relation"] = abs(E - g * lam)
        out["xi_btb"] = abs(xi - b * edge.tb_resc)
    return out
