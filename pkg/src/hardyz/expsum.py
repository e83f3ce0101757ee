"""Exponential sums sum phi(n) e(f(n)) and their transforms, with e(x) = exp(2 pi i x).

PhaseProblem bundles the interval, amplitude and phase (with derivatives) and
the scale constants H, U, A.  On top of it:

* direct_sum          the sum over integers in (a, b]
* fdt_compare         sum versus integral when |f'| <= delta < 1
* fdt_bound           the first-derivative envelope H/delta_1 + H/(1-delta)
* stationary_points   solutions of f'(x_nu) = nu
* vdc_transform       the stationary-phase transform with its remainder envelope

The second half builds the concrete problems S_m(M) on Gram points,
f_m(x) = g(2x) log m / 2pi, and the proof traces x_1, W_m(1) and U.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._numerics import EPS, fsum_complex
from .errors import ConvergenceError, PreconditionError
from .gram import gram_points
from .theta import theta_derivative, theta_ld
from .weight import rho_fast

SAMPLES = 1024
COST_GUARD = 10**8
SADDLE_TOL = 1e-12
INTEGER_TIE = 1e-9
QUAD_TOL = 1e-10
# Default sampling constant for the PhaseProblem derivative conditions.
SAMPLING_C = 4.0
# S_m(M_0) spans a factor 32 in g(2x), so f_m'' varies by up to three orders of magnitude
# across the block; its problems carry this wider constant.
SM_SAMPLING_C = 2000.0

Func = Callable[[np.ndarray], np.ndarray]


def e(x):
    """exp(2 pi i x) with x reduced mod 1 first."""
    x = np.asarray(x, dtype=float)
    return np.exp(2j * np.pi * (x - np.floor(x)))


def _dist_to_int(x: float) -> float:
    return abs(x - math.floor(x + 0.5))


def _fd(values: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.gradient(values, x)


@dataclass(frozen=True)
class PhaseProblem:
    """phi(x) e(f(x)) on [a, b] with scale constants H, U, A.

    All callables take and return float arrays.  ``d3_phase`` is optional;
    when absent the sampled checks difference d2_phase numerically.
    """

    a: float
    b: float
    amplitude: Func
    phase: Func
    d_phase: Func
    d2_phase: Func
    H: float = 1.0
    U: float = 1.0
    A: float = 1.0
    c: float = SAMPLING_C
    d3_phase: Optional[Func] = None
    name: str = ""
    # Optional fused (phi(x), f(x)) evaluator for problems where both share work.
    joint: Optional[Callable[[np.ndarray], tuple]] = None

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")
        if min(self.H, self.U, self.A) <= 0:
            raise ValueError("H, U, A must be positive")

    def amp_phase(self, x: np.ndarray) -> tuple:
        if self.joint is not None:
            return self.joint(x)
        return self.amplitude(x), self.phase(x)

    def grid(self, n: int = SAMPLES) -> np.ndarray:
        return np.linspace(self.a, self.b, n)

    def curvature_sign(self) -> int:
        """+1 or -1; raises PreconditionError if f'' changes sign on the sample grid."""
        f2 = self.d2_phase(self.grid())
        if np.all(f2 > 0):
            return 1
        if np.all(f2 < 0):
            return -1
        raise PreconditionError(f"{self.name or 'phase'}: f'' changes sign or vanishes on [a, b]")

    def check(self) -> dict:
        """Sampled derivative conditions; returns the worst ratios and raises on violation."""
        x = self.grid()
        c, H, U, A = self.c, self.H, self.U, self.A
        phi = self.amplitude(x)
        dphi = _fd(phi, x)
        d2phi = _fd(dphi, x)
        f2 = self.d2_phase(x)
        f3 = self.d3_phase(x) if self.d3_phase is not None else _fd(f2, x)
        f4 = _fd(f3, x)
        self.curvature_sign()
        ratios = {
            "amplitude": np.max(np.abs(phi)) / H,
            "amplitude'": np.max(np.abs(dphi)) * U / H,
            "amplitude''": np.max(np.abs(d2phi)) * U * U / H,
            "f'' upper": np.max(np.abs(f2)) * A,
            "f'' lower": 1.0 / (np.min(np.abs(f2)) * A),
            "f'''": np.max(np.abs(f3)) * A * U,
            "f''''": np.max(np.abs(f4)) * A * U * U,
        }
        if ratios["amplitude"] > 1.0 + 1e-12:
            raise PreconditionError(f"|amplitude| exceeds H by factor {ratios['amplitude']:.3g}")
        for key, val in ratios.items():
            if key != "amplitude" and val > c:
                raise PreconditionError(f"sampled condition {key} ratio {val:.3g} exceeds c={c}")
        return ratios


@dataclass(frozen=True)
class SaddleTerm:
    nu: int
    x: float
    c: float
    W: complex


@dataclass(frozen=True)
class TransformOutput:
    saddle_terms: list = field(default_factory=list)
    R_bound: float = 0.0
    lhs_direct: complex = 0j
    rhs_main: complex = 0j

    @property
    def residual(self) -> float:
        return abs(self.lhs_direct - self.rhs_main)

    @property
    def ratio(self) -> float:
        return self.residual / self.R_bound


# ---------------------------------------------------------------------------
# Sums and integrals
# ---------------------------------------------------------------------------

def integers_in(a: float, b: float) -> np.ndarray:
    """Integers n with a < n <= b."""
    lo = math.floor(a) + 1
    hi = math.floor(b)
    return np.arange(lo, hi + 1, dtype=float)


def direct_sum(p: PhaseProblem) -> complex:
    """sum_{a < n <= b} phi(n) e(f(n)), compensated."""
    if p.b - p.a > COST_GUARD:
        raise PreconditionError(f"b - a = {p.b - p.a:.3g} exceeds the cost guard {COST_GUARD:g}")
    n = integers_in(p.a, p.b)
    if n.size == 0:
        return 0j
    amp, ph = p.amp_phase(n)
    return fsum_complex(amp * e(ph))


def _gauss_pieces(p: PhaseProblem, lo: np.ndarray, hi: np.ndarray, order: int) -> tuple:
    """Per-piece Gauss-Legendre estimates and the rounding floor of each piece.

    The floor reflects that f(x) itself carries a relative error ~eps, so the
    integrand is only known to ~2 pi eps |f| |phi|.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    amp, ph = p.amp_phase(x)
    vals = (amp * e(ph)).reshape(-1, order)
    noise = np.max(((np.abs(ph) + 1.0) * np.abs(amp)).reshape(-1, order), axis=1)
    return (vals @ weights) * half, 16 * math.pi * EPS * noise * (hi - lo)


def oscillatory_integral(p: PhaseProblem, tol: float = QUAD_TOL, order: int = 10,
                         max_level: int = 8) -> complex:
    """int_a^b phi(x) e(f(x)) dx by Gauss-Legendre on pieces of unit phase.

    Base pieces have length 1/max|f'| (at most b - a), so each spans at most
    one oscillation.  Every piece
    is estimated at two orders; pieces whose estimates disagree by more than
    their share of tol (or the rounding floor, if larger) are halved and retried.
    """
    slope = float(np.max(np.abs(p.d_phase(p.grid()))))
    n_pieces = max(1, math.ceil((p.b - p.a) * slope))
    edges = np.linspace(p.a, p.b, n_pieces + 1)
    lo, hi = edges[:-1], edges[1:]
    accepted = []
    for _ in range(max_level + 1):
        coarse, _ = _gauss_pieces(p, lo, hi, order)
        fine, floor = _gauss_pieces(p, lo, hi, order + 4)
        share = np.maximum(tol * (hi - lo) / (p.b - p.a), floor)
        bad = np.abs(fine - coarse) > share
        accepted.append(fine[~bad])
        if not bad.any():
            return fsum_complex(np.concatenate(accepted))
        lo, hi = lo[bad], hi[bad]
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    raise ConvergenceError("oscillatory quadrature did not reach tolerance")


def _sampled_range(f: Func, p: PhaseProblem) -> tuple:
    v = f(p.grid())
    return float(np.min(v)), float(np.max(v))


@dataclass(frozen=True)
class FdtComparison:
    sum: complex
    integral: complex
    diff: float
    bound: float


def fdt_compare(p: PhaseProblem, delta: float) -> FdtComparison:
    """Sum versus integral; bound is the envelope H/(1 - delta)."""
    if not 0 <= delta < 1:
        raise ValueError("delta must lie in [0, 1)")
    lo, hi = _sampled_range(p.d_phase, p)
    if max(abs(lo), abs(hi)) > delta:
        raise PreconditionError(f"sampled |f'| reaches {max(abs(lo), abs(hi)):.6g} > delta={delta}")
    s = direct_sum(p)
    integral = oscillatory_integral(p)
    return FdtComparison(s, integral, abs(s - integral), p.H / (1 - delta))


def fdt_bound(p: PhaseProblem, delta1: float, delta: float) -> float:
    """Envelope H/delta_1 + H/(1 - delta) under 0 < delta_1 <= f' <= delta < 1."""
    if not 0 < delta1 <= delta < 1:
        raise ValueError("need 0 < delta_1 <= delta < 1")
    lo, hi = _sampled_range(p.d_phase, p)
    if lo < delta1 or hi > delta:
        raise PreconditionError(f"sampled f' range [{lo:.6g}, {hi:.6g}] outside [{delta1}, {delta}]")
    return p.H / delta1 + p.H / (1 - delta)


# ---------------------------------------------------------------------------
# Stationary phase
# ---------------------------------------------------------------------------

def _solve_saddle(p: PhaseProblem, nu: int, sign: int) -> float:
    """Safeguarded Newton for f'(x) = nu on [a, b]; f' - nu is monotone with the given sign."""
    lo, hi = p.a, p.b
    g = lambda x: float(p.d_phase(np.array([x]))[0]) - nu
    g_lo, g_hi = g(lo), g(hi)
    if abs(g_lo) <= SADDLE_TOL:
        return lo
    if abs(g_hi) <= SADDLE_TOL:
        return hi
    if g_lo * g_hi > 0:
        raise ConvergenceError(f"nu={nu} not bracketed by f' on [a, b]")
    x = lo + (hi - lo) * (-g_lo) / (g_hi - g_lo)
    for _ in range(200):
        gx = g(x)
        if abs(gx) <= SADDLE_TOL:
            return x
        if (gx > 0) == (sign > 0):
            hi = x
        else:
            lo = x
        d2 = float(p.d2_phase(np.array([x]))[0])
        step = x - gx / d2
        x = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4 * np.spacing(max(abs(lo), abs(hi))):
            break
    gx = g(x)
    if abs(gx) <= SADDLE_TOL:
        return x
    raise ConvergenceError(f"saddle for nu={nu} stalled at |f'-nu|={abs(gx):.3e}")


def stationary_points(p: PhaseProblem) -> list:
    """[(nu, x_nu)] for every integer nu between f'(a) and f'(b), in increasing nu."""
    sign = p.curvature_sign()
    fa = float(p.d_phase(np.array([p.a]))[0])
    fb = float(p.d_phase(np.array([p.b]))[0])
    lo, hi = min(fa, fb), max(fa, fb)
    first = math.ceil(lo - SADDLE_TOL)
    last = math.floor(hi + SADDLE_TOL)
    return [(nu, _solve_saddle(p, nu, sign)) for nu in range(first, last + 1)]


def _t_mu(fprime: float, A: float) -> float:
    d = _dist_to_int(fprime)
    if d <= INTEGER_TIE:
        return 0.0
    return min(1.0 / d, math.sqrt(A))


def vdc_transform(p: PhaseProblem, check: bool = True) -> TransformOutput:
    """sum_{a<n<=b} phi(n) e(f(n)) against sum_nu c(nu) W(nu).

    Positive curvature uses W = (1+i)/sqrt2 phi/sqrt(f'') e(f - nu x); negative
    curvature the (1-i)/sqrt2 variant with |f''|.  R_bound is
    H (A/(b-a) + T_a + T_b + log(|f'(b) - f'(a)| + 2)).
    """
    if check:
        p.check()
    sign = p.curvature_sign()
    rot = complex(1, sign) / math.sqrt(2)
    fa = float(p.d_phase(np.array([p.a]))[0])
    fb = float(p.d_phase(np.array([p.b]))[0])
    terms = []
    for nu, x in stationary_points(p):
        xs = np.array([x])
        cnu = 0.5 if min(abs(nu - fa), abs(nu - fb)) <= SADDLE_TOL else 1.0
        amp = float(p.amplitude(xs)[0]) / math.sqrt(abs(float(p.d2_phase(xs)[0])))
        ph = float(p.phase(xs)[0])
        # e(f(x) - nu x) with both parts reduced mod 1 before combining
        arg = (ph - math.floor(ph)) - (nu * x - math.floor(nu * x))
        terms.append(SaddleTerm(nu, x, cnu, rot * amp * cmath.exp(2j * math.pi * arg)))
    rhs = fsum_complex(np.array([t.c * t.W for t in terms])) if terms else 0j
    R = p.H * (p.A / (p.b - p.a) + _t_mu(fa, p.A) + _t_mu(fb, p.A) + math.log(abs(fb - fa) + 2))
    return TransformOutput(terms, R, direct_sum(p), rhs)


# ---------------------------------------------------------------------------
# Synthetic problems
# ---------------------------------------------------------------------------

def quadratic_problem(A: float, a: float, b: float, sign: int = 1) -> PhaseProblem:
    """f = sign x^2/(2A), phi = 1 on [a, b]; U = b - a."""
    s = float(sign)
    return PhaseProblem(
        a, b,
        amplitude=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        phase=lambda x: s * np.asarray(x, dtype=float) ** 2 / (2 * A),
        d_phase=lambda x: s * np.asarray(x, dtype=float) / A,
        d2_phase=lambda x: np.full_like(np.asarray(x, dtype=float), s / A),
        d3_phase=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        H=1.0, U=b - a, A=float(A), name=f"quadratic A={A:g}",
    )


def quadratic_suite(A: float, sign: int = 1) -> PhaseProblem:
    """The suite member on [A/20, 5A/2]: f' runs over [1/20, 5/2], saddles at nu = 1, 2."""
    return quadratic_problem(A, A / 20, 2.5 * A, sign)


def linear_problem(delta: float, a: float, b: float, amplitude: Optional[Func] = None,
                   H: float = 1.0) -> PhaseProblem:
    """f = delta x; f'' = 0, so only the sum/integral tools apply."""
    amp = amplitude or (lambda x: np.ones_like(np.asarray(x, dtype=float)))
    return PhaseProblem(
        a, b, amplitude=amp,
        phase=lambda x: delta * np.asarray(x, dtype=float),
        d_phase=lambda x: np.full_like(np.asarray(x, dtype=float), delta),
        d2_phase=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        H=H, U=b - a, name=f"linear delta={delta:g}",
    )


# ---------------------------------------------------------------------------
# S_m(M) on Gram points
# ---------------------------------------------------------------------------

def h_index(y):
    """h(y): the index x with g(2x)/(2pi) = y, i.e. theta(2 pi y)/(2pi)."""
    y = np.asarray(y, dtype=float)
    out = (theta_ld(2 * np.pi * y) / (2 * np.pi)).astype(float)
    return float(out[0]) if y.ndim == 0 else out


def _g2(x) -> np.ndarray:
    return gram_points(2 * np.asarray(x, dtype=float))


def f_m(m: int):
    """(f_m, f_m', f_m'') as vectorised callables of x."""
    lm = math.log(m)

    def f(x):
        return _g2(x) * (lm / (2 * math.pi))

    def d1(x):
        return lm / theta_derivative(_g2(x), 1)

    def d2(x):
        t = _g2(x)
        return -2 * math.pi * lm * theta_derivative(t, 2) / theta_derivative(t, 1) ** 3

    return f, d1, d2


def sm_amplitude(m: int) -> Func:
    """rho(m sqrt(2pi / g(2x)))."""
    return lambda x: rho_fast(m * np.sqrt(2 * math.pi / _g2(x)))


def sm_problem(m: int, j: int = 0) -> PhaseProblem:
    """S_m(M_j) on [h(M_j), h(32 M_j)] with M_j = 32^j m^2/4.

    H = 1; for j = 0 the transform scales are A = M_0 log^3 M_0 / log m and U = M_0 log M_0.
    """
    if m < 3:
        raise ValueError("S_m(M) problems need m >= 3")
    M = 32.0**j * m * m / 4.0
    f, d1, d2 = f_m(m)
    lm = math.log(m)
    logM = math.log(M)

    def joint(x):
        t = _g2(x)
        return rho_fast(m * np.sqrt(2 * math.pi / t)), t * (lm / (2 * math.pi))

    return PhaseProblem(
        h_index(M), h_index(32 * M), amplitude=sm_amplitude(m),
        phase=f, d_phase=d1, d2_phase=d2, joint=joint,
        H=1.0, U=M * logM, A=M * logM**3 / math.log(m), c=SM_SAMPLING_C,
        name=f"S_{m}(M_{j})",
    )


def sm_deltas(m: int, j: int) -> tuple:
    """(delta_1, delta) = (2 log m / log 32M_j, 2 log m / log 8M_{j-1}) for j >= 1."""
    if j < 1:
        raise ValueError("the first-derivative deltas need j >= 1")
    M = 32.0**j * m * m / 4.0
    return 2 * math.log(m) / math.log(32 * M), 2 * math.log(m) / math.log(8 * M / 32)


# ---------------------------------------------------------------------------
# Proof traces
# ---------------------------------------------------------------------------

def x1(m: int) -> float:
    """Solution of f_m'(x_1) = 1."""
    pts = stationary_points(sm_problem(m))
    for nu, x in pts:
        if nu == 1:
            return x
    raise ConvergenceError(f"no nu=1 saddle for m={m}")


def x1_asymptotic(m: int) -> float:
    return m * m * math.log(m) - 0.5 * m * m - 1.0 / 16


@dataclass(frozen=True)
class W1Trace:
    m: int
    numeric: complex
    closed_form: complex
    rel_err: float
    x1: float


def w1_closed_form(m: int) -> complex:
    """e^{-pi i/8} (-1)^m m log m / sqrt2."""
    return cmath.exp(-1j * math.pi / 8) * (-1) ** m * m * math.log(m) / math.sqrt(2)


def proof_trace_W1(m: int) -> W1Trace:
    """W_m(1) from the transform machinery versus its closed form."""
    if m < 3:
        raise ValueError("m must be >= 3")
    out = vdc_transform(sm_problem(m), check=False)
    term = next(t for t in out.saddle_terms if t.nu == 1)
    cf = w1_closed_form(m)
    return W1Trace(m, term.W, cf, abs(term.W - cf) / abs(cf), term.x)


@dataclass(frozen=True)
class AlternatingSum:
    U: float
    asym: float
    diff: float


def alternating_sum_U(L: int, odd: bool = False) -> AlternatingSum:
    """sum_{m=1}^{n} (-1)^m sqrt(m) log m with n = 2L (or 2L+1 when odd).

    asym = (-1)^n sqrt(n) log(n) / 2, which for n = 2L is sqrt(2L) log(2L) / 2.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    n = 2 * L + (1 if odd else 0)
    m = np.arange(1, n + 1, dtype=float)
    terms = np.where(m % 2 == 0, 1.0, -1.0) * np.sqrt(m) * np.log(m)
    U = math.fsum(terms)
    asym = (-1) ** n * 0.5 * math.sqrt(n) * math.log(n)
    return AlternatingSum(U, asym, U - asym)
