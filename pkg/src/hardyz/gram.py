"""Gram points g(x), defined for real x >= -1 by theta(g(x)) = pi x.

Points with x >= VECTOR_X_MIN are solved by a vectorised Newton iteration in
extended precision from a Lambert-W initial guess and rounded to float64 at
the end.  Each point is iterated independently (converged entries are frozen),
so a point's abscissa never depends on which batch it was computed in.
Smaller x go through a scalar Newton iteration with a bisection safeguard.

The residual |theta(t) - pi x| is measured in extended precision at the
returned float64 abscissa.  Its floor is therefore theta'(t) * ulp(t)/2,
which passes 1e-10 near t ~ 1e5 and stays below 1e-9 up to t ~ 2e6.
"""
from __future__ import annotations

import json
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import lambertw

from . import __version__
from ._numerics import LD, PI_LD
from .errors import ConvergenceError, DomainError
from .special import BoundedValue
from .theta import (
    theta_derivative,
    theta_double_prime,
    theta_higher_bounds,
    theta_ld,
    theta_prime,
    theta_prime_ld,
)

GRAM_X_MIN = -1.0
VECTOR_X_MIN = 10.0
DEFAULT_TOL = 1e-10
MAX_ITER = 100
CHUNK = 4096

# g(-1), ..., g(2) to the digits of the classical table; seeds for x < 2.
SEED_TABLE = ((-1.0, 9.6), (0.0, 17.8), (1.0, 23.1), (2.0, 27.6))

CACHE_MAGIC = b"GRAMCACHE\x01"
_META_TAG = b"META"


@dataclass(frozen=True)
class GramPoint:
    x: float
    t: float
    residual: float


# ---------------------------------------------------------------------------
# Initial guesses
# ---------------------------------------------------------------------------

def gram_asymptotic(x: float) -> float:
    """The classical two-term asymptotic 2 pi x / log x * (1 + (1 + log log x)/log x).

    Only meaningful for x > e; kept for reference, not used as a Newton seed.
    """
    lx = math.log(x)
    return 2 * math.pi * x / lx * (1 + (1 + math.log(lx)) / lx)


def gram_initial_guess(x):
    """Newton seed for g(x).

    For x >= 2 the two leading terms of theta are inverted exactly:
    theta(t) ~ (t/2) log(t/(2 pi e)) - pi/8 gives t = 2 pi (x+1/8) / W((x+1/8)/e).
    Below 2 the seed is interpolated from SEED_TABLE.
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    big = x >= 2.0
    u = x[big] + 0.125
    out[big] = 2 * math.pi * u / lambertw(u / math.e).real
    xs, ts = zip(*SEED_TABLE)
    out[~big] = np.interp(x[~big], xs, ts)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

def _residual(x, t) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=LD))
    return np.abs(theta_ld(t) - PI_LD * x).astype(float)


def _floor(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.maximum(theta_derivative(np.maximum(t, 7.0), 1), 0.0) * np.spacing(t)


def _solve_scalar(x: float, tol: float) -> float:
    target = math.pi * x
    t = gram_initial_guess(x)
    lo, hi = 7.0, max(2.0 * t, 60.0)
    for _ in range(MAX_ITER):
        r = float(theta_ld(t)[0]) - target
        if abs(r) <= tol:
            # one polishing step; keep it only if it helps
            tp = t - r / theta_derivative(t, 1)
            return tp if abs(float(theta_ld(tp)[0]) - target) < abs(r) else t
        if r < 0:
            lo = t
        else:
            hi = t
        tn = t - r / theta_derivative(t, 1)
        if not lo < tn < hi:
            tn = 0.5 * (lo + hi)
        if tn == t:
            break
        t = tn
    if abs(float(theta_ld(t)[0]) - target) <= max(tol, float(_floor(t))):
        return t
    raise ConvergenceError(f"gram_point({x}) did not converge")


def _solve_vector(x: np.ndarray) -> np.ndarray:
    x_ld = np.asarray(x, dtype=LD)
    target = PI_LD * x_ld
    t = np.asarray(gram_initial_guess(x), dtype=LD)
    active = np.ones(t.shape, dtype=bool)
    for _ in range(MAX_ITER):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ti = t[idx]
        step = (theta_ld(ti) - target[idx]) / theta_prime_ld(ti)
        t[idx] = ti - step
        done = np.abs(step) <= 64 * np.finfo(LD).eps * ti
        active[idx[done]] = False
    else:
        raise ConvergenceError("vectorised Gram solver did not converge")
    return t.astype(float)


def gram_points(x, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Abscissas g(x) for an array of indices (float64)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < GRAM_X_MIN):
        raise DomainError("Gram index must be >= -1")
    t = np.empty_like(x)
    big = x >= VECTOR_X_MIN
    if big.any():
        t[big] = _solve_vector(x[big])
    for i in np.flatnonzero(~big):
        t[i] = _solve_scalar(float(x[i]), tol)
    res = _residual(x, t)
    bad = res > np.maximum(tol, 2 * _floor(t))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ConvergenceError(f"residual {res[i]:.3e} at x={x[i]} above tolerance")
    return t


def gram_point(x: float, tol: float = DEFAULT_TOL) -> GramPoint:
    x = float(x)
    t = float(gram_points([x], tol)[0])
    return GramPoint(x, t, float(_residual([x], [t])[0]))


def gram_inverse(t):
    """x with g(x) = t, i.e. theta(t)/pi (t >= 7)."""
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < 7.0):
        raise DomainError("gram_inverse requires t >= 7")
    x = (theta_ld(tt) / PI_LD).astype(float)
    return float(x[0]) if scalar else x


# ---------------------------------------------------------------------------
# Derivatives
# ---------------------------------------------------------------------------

def _recip(b: BoundedValue) -> BoundedValue:
    v = float(b.value)
    if abs(v) <= b.radius:
        raise ZeroDivisionError("interval contains zero")
    return BoundedValue(1.0 / v, b.radius / (abs(v) * (abs(v) - b.radius)))


def gram_derivative_values(t, order: int):
    """g^{(k)} at g(x) = t from the closed forms, using production theta derivatives."""
    d1 = theta_derivative(t, 1)
    d2 = theta_derivative(t, 2)
    pi = math.pi
    if order == 1:
        return pi / d1
    if order == 2:
        return -pi**2 * d2 / d1**3
    d3 = theta_derivative(t, 3)
    if order == 3:
        return -pi**3 * (d3 * d1 - 3 * d2**2) / d1**5
    if order == 4:
        d4 = theta_derivative(t, 4)
        return -pi**4 * (d4 * d1**2 - 10 * d3 * d2 * d1 + 15 * d2**3) / d1**7
    raise ValueError(f"order must be in 1..4, got {order}")


def gram_derivatives(x: float, order: int) -> BoundedValue:
    """g^{(order)}(x) with an enclosure radius.

    The radius propagates the certified bounds on theta', theta'' and, for orders
    3 and 4, the envelopes |theta'''| <= C3/t^2, |theta''''| <= C4/t^3; it is
    therefore coarse for the higher orders.  The centre uses the accurate
    production derivatives.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be in 1..4, got {order}")
    t = gram_point(x).t
    p1, p2 = theta_prime(t), theta_double_prime(t)
    inv = _recip(p1)
    pi = math.pi
    if order == 1:
        bv = pi * inv
    elif order == 2:
        bv = -pi**2 * p2 * inv * inv * inv
    else:
        p3 = BoundedValue(0.0, theta_higher_bounds(t, 3))
        inv2 = inv * inv
        if order == 3:
            bv = -pi**3 * (p3 * p1 - 3 * p2 * p2) * inv2 * inv2 * inv
        else:
            p4 = BoundedValue(0.0, theta_higher_bounds(t, 4))
            num = p4 * p1 * p1 - 10 * p3 * p2 * p1 + 15 * p2 * p2 * p2
            bv = -pi**4 * num * inv2 * inv2 * inv2 * inv
    value = float(gram_derivative_values(t, order))
    return BoundedValue(value, bv.radius + abs(float(bv.value) - value))


# ---------------------------------------------------------------------------
# Cache
# ---------------------------------------------------------------------------

class CacheFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GramCache:
    """Gram abscissas on the uniform grid x_lo + i*stride, i < count."""

    x_lo: float
    stride: float
    t: np.ndarray
    tol: float = DEFAULT_TOL
    version: str = __version__
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.stride > 0:
            raise ValueError("stride must be positive")
        object.__setattr__(self, "t", np.ascontiguousarray(self.t, dtype="<f8"))
        self.t.setflags(write=False)

    @property
    def count(self) -> int:
        return int(self.t.size)

    @property
    def x(self) -> np.ndarray:
        return self.x_lo + self.stride * np.arange(self.count, dtype=float)

    @property
    def x_hi(self) -> float:
        return self.x_lo + self.stride * (self.count - 1)

    def residuals(self) -> np.ndarray:
        return _residual(self.x, self.t)

    def point(self, i: int) -> GramPoint:
        x = float(self.x[i])
        return GramPoint(x, float(self.t[i]), float(_residual([x], [self.t[i]])[0]))

    def index_of(self, x: float) -> int:
        k = (x - self.x_lo) / self.stride
        i = int(round(k))
        if abs(k - i) > 1e-9 or not 0 <= i < self.count:
            raise KeyError(f"x={x} not on the cached grid")
        return i

    def covers(self, x_lo: float, x_hi: float, stride: float) -> bool:
        if stride != self.stride or self.count == 0:
            return False
        k = (x_lo - self.x_lo) / stride
        return abs(k - round(k)) < 1e-9 and x_lo >= self.x_lo and x_hi <= self.x_hi + 1e-9

    def __eq__(self, other) -> bool:
        if not isinstance(other, GramCache):
            return NotImplemented
        return (struct.pack("<dd", self.x_lo, self.stride) == struct.pack("<dd", other.x_lo, other.stride)
                and self.t.tobytes() == other.t.tobytes())

    def save(self, path) -> Path:
        path = Path(path)
        meta = {"tol": self.tol, "version": self.version, **self.meta}
        blob = json.dumps(meta, sort_keys=True).encode()
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "wb") as fh:
                fh.write(CACHE_MAGIC)
                fh.write(struct.pack("<ddQ", self.stride, self.x_lo, self.count))
                fh.write(self.t.tobytes())
                fh.write(_META_TAG + struct.pack("<I", len(blob)) + blob)
        except OSError as exc:
            raise OSError(f"cannot write Gram cache {path}: {exc}") from exc
        return path

    @classmethod
    def load(cls, path) -> "GramCache":
        path = Path(path)
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise OSError(f"cannot read Gram cache {path}: {exc}") from exc
        n = len(CACHE_MAGIC)
        if data[: n - 1] != CACHE_MAGIC[:-1]:
            raise CacheFormatError(f"{path}: not a Gram cache file")
        if data[n - 1 : n] != CACHE_MAGIC[-1:]:
            raise CacheFormatError(f"{path}: cache format version {data[n - 1]} != {CACHE_MAGIC[-1]}")
        stride, x_lo, count = struct.unpack_from("<ddQ", data, n)
        off = n + 24
        end = off + 8 * count
        if len(data) < end:
            raise CacheFormatError(f"{path}: truncated ({len(data)} bytes, need {end})")
        t = np.frombuffer(data, dtype="<f8", count=count, offset=off).copy()
        meta = {}
        if data[end : end + 4] == _META_TAG:
            (size,) = struct.unpack_from("<I", data, end + 4)
            meta = json.loads(data[end + 8 : end + 8 + size].decode())
        tol = meta.pop("tol", DEFAULT_TOL)
        version = meta.pop("version", "unknown")
        return cls(x_lo, stride, t, tol, version, meta)

    def to_csv(self, path) -> Path:
        path = Path(path)
        res = self.residuals()
        with open(path, "w") as fh:
            fh.write("x,t,residual\n")
            for x, t, r in zip(self.x, self.t, res):
                fh.write(f"{x:.17g},{t:.17g},{r:.17g}\n")
        return path


def gram_range(x_lo: float, x_hi: float, stride: float = 1.0, tol: float = DEFAULT_TOL,
               workers: int = 1) -> GramCache:
    """Gram abscissas on x_lo, x_lo+stride, ..., up to x_hi inclusive.

    Work is split into fixed chunks of CHUNK indices; the result does not
    depend on the number of workers.
    """
    if not stride > 0:
        raise ValueError("stride must be positive")
    if x_hi < x_lo or x_lo < GRAM_X_MIN:
        raise DomainError(f"invalid Gram range [{x_lo}, {x_hi}]")
    count = int(math.floor((x_hi - x_lo) / stride + 1e-9)) + 1
    x = x_lo + stride * np.arange(count, dtype=float)
    pieces = [x[i : i + CHUNK] for i in range(0, count, CHUNK)]
    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda p: gram_points(p, tol), pieces))
    else:
        parts = [gram_points(p, tol) for p in pieces]
    return GramCache(float(x_lo), float(stride), np.concatenate(parts), tol)
