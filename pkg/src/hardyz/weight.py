"""Smooth cutoff rho built from a normalised bump.

    phi(t) = exp(1/(t^2 - 1/4)) / Z        for |t| < 1/2, else 0
    f(x)   = int_{x-3/2}^{x+3/2} phi(t) dt (= 1 on |x| <= 1, 0 on |x| >= 2)
    rho(x) = (1 + f(x) - f(1/x)) / 2

rho(x) + rho(1/x) = 1 and rho vanishes for x >= 2.  The direct route uses
adaptive quadrature; a cubic-spline table covers the hot path in the Z
evaluators.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import DomainError

TABLE_LO = 0.45
TABLE_HI = 2.05
TABLE_SIZE = 4096


def _core(u: float) -> float:
    d = u * u - 0.25
    return math.exp(1.0 / d) if d < 0.0 else 0.0


class SmoothWeight:
    """phi, f and rho with quadrature tolerance quad_tol.

    Immutable after construction; the lookup table is built on first use of
    rho_fast and then shared.
    """

    def __init__(self, quad_tol: float = 1e-12) -> None:
        self.quad_tol = quad_tol
        z, _ = quad(_core, -0.5, 0.5, epsabs=quad_tol * 1e-3, epsrel=quad_tol, limit=200)
        self.core_integral = z
        self.normalization = 1.0 / z
        self._spline = None

    # -- bump and window ---------------------------------------------------

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        d = t * t - 0.25
        inside = d < 0.0
        safe = np.where(inside, d, -1.0)
        out = np.where(inside, np.exp(1.0 / safe) * self.normalization, 0.0)
        return float(out) if out.ndim == 0 else out

    def integral(self, lo: float, hi: float) -> float:
        """int_lo^hi phi(t) dt with both limits clipped to [-1/2, 1/2]."""
        lo, hi = max(lo, -0.5), min(hi, 0.5)
        if hi <= lo:
            return 0.0
        val, _ = quad(_core, lo, hi, epsabs=self.quad_tol * 1e-3 * self.core_integral,
                      epsrel=self.quad_tol, limit=200)
        return val * self.normalization

    def f_window(self, x: float) -> float:
        ax = abs(x)
        if ax >= 2.0:
            return 0.0
        if ax <= 1.0:
            return 1.0
        return self.integral(x - 1.5, x + 1.5)

    def rho(self, x: float) -> float:
        if not x > 0:
            raise DomainError(f"rho requires x > 0, got {x}")
        return 0.5 * (1.0 + self.f_window(x) - self.f_window(1.0 / x))

    # -- table ------------------------------------------------------------

    def _table(self) -> CubicSpline:
        if self._spline is None:
            grid = np.linspace(TABLE_LO, TABLE_HI, TABLE_SIZE)
            values = np.array([self.rho(x) for x in grid])
            self._spline = CubicSpline(grid, values)
        return self._spline

    def rho_fast(self, x):
        """Vectorised rho from the spline table; exact 1 for x <= 1/2, 0 for x >= 2."""
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 2.0, 0.0, 1.0)
        mid = (x > 0.5) & (x < 2.0)
        if np.any(mid):
            out = np.array(out, copy=True)
            out[mid] = self._table()(x[mid])
        return float(out) if out.ndim == 0 else out

    def flatness_profile(self, eps_grid) -> list:
        out = []
        for e in eps_grid:
            if not (-0.4 < e < 0.4) or e == 0:
                raise ValueError(f"eps={e} outside (-0.4, 0.4) minus 0")
            out.append((float(e), abs(self.rho(1.0 + e) - 0.5)))
        return out


@lru_cache(maxsize=None)
def default_weight() -> SmoothWeight:
    return SmoothWeight()


def phi(t):
    return default_weight().phi(t)


def f_window(x: float) -> float:
    return default_weight().f_window(x)


def rho(x: float) -> float:
    return default_weight().rho(x)


def rho_fast(x):
    return default_weight().rho_fast(x)


def rho_flatness_profile(eps_grid) -> list:
    """(eps, |rho(1+eps) - 1/2|) for each eps in the grid."""
    return default_weight().flatness_profile(eps_grid)
