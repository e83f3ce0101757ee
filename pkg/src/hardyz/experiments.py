"""Gram-point sums of Z and the related desk-scale statistics.

Every sum runs over Gram indices split into fixed chunks of CHUNK consecutive
summation indices (aligned at 0).  Each chunk is reduced with math.fsum and
the chunk totals are combined serially, in index order, with a Neumaier
accumulator.  Chunk boundaries never depend on the worker count, so results
are bit-identical for any number of threads.
"""
from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from ._numerics import Neumaier
from .gram import GramCache, gram_range
from .special import EULER_GAMMA
from .zfun import cosine_sum, z_gram_array

CHUNK = 4096
CACHE_ENV = "HARDYZ_CACHE_DIR"
CACHE_NAME = "gram_int.bin"
DEFAULT_METHOD = "rs_corrected"
SUM_METHODS = ("rs_corrected", "afe_smooth", "rs_main", "reference")
PAIR_TARGET = -2.0 * (EULER_GAMMA + 1.0)
SUM_HEADER = ["N", "parity", "S", "E", "norm_new", "norm_old", "method", "wall_s"]

_TABLES: dict = {}


# ---------------------------------------------------------------------------
# Gram table
# ---------------------------------------------------------------------------

def default_cache_dir(explicit=None) -> Optional[Path]:
    """Explicit directory, else $HARDYZ_CACHE_DIR, else None (memory only)."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def gram_table(n_max: int, cache_dir=None, workers: int = 1) -> GramCache:
    """g(n) for integer n = 0..n_max (at least), reused from memory or disk."""
    key = str(default_cache_dir(cache_dir))
    table = _TABLES.get(key)
    if table is not None and table.x_hi >= n_max:
        return table
    folder = default_cache_dir(cache_dir)
    path = folder / CACHE_NAME if folder else None
    if path is not None and path.exists():
        table = GramCache.load(path)
        if not table.covers(0, n_max, 1.0) or table.x_lo != 0:
            table = None
    else:
        table = None
    if table is None:
        # round up to whole chunks so neighbouring requests share one build
        top = (n_max // CHUNK + 1) * CHUNK
        table = gram_range(0, top, 1.0, workers=workers)
        if path is not None:
            table.save(path)
    _TABLES[key] = table
    return table


def z_at_indices(n: np.ndarray, table: GramCache, method: str = DEFAULT_METHOD) -> np.ndarray:
    return z_gram_array(n, table.t[n], method)


# ---------------------------------------------------------------------------
# Fixed-order reduction
# ---------------------------------------------------------------------------

def _chunk_bounds(count: int):
    return [(lo, min(lo + CHUNK, count)) for lo in range(0, count, CHUNK)]


def chunk_totals(terms: Callable[[int, int], np.ndarray], count: int, workers: int = 1) -> list:
    """math.fsum of terms(lo, hi) over every fixed chunk of range(count)."""
    bounds = _chunk_bounds(count)
    job = lambda b: math.fsum(terms(*b))
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, bounds))
    return [job(b) for b in bounds]


def ordered_total(values: Iterable[float]) -> float:
    acc = Neumaier()
    for v in values:
        acc.add(v)
    return acc.value


def _chunked_values(fn: Callable[[np.ndarray], np.ndarray], count: int, workers: int) -> np.ndarray:
    """fn over index chunks of range(count), concatenated in order."""
    bounds = _chunk_bounds(count)
    job = lambda b: fn(np.arange(b[0], b[1], dtype=np.int64))
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, bounds))
    else:
        parts = [job(b) for b in bounds]
    return np.concatenate(parts) if parts else np.zeros(0)


def prefix_totals(terms: np.ndarray, stops: Iterable[int]) -> list:
    """Fixed-order totals of terms[:k] for each k in stops (ascending).

    Full chunks are fsum'd once and fed to a running accumulator; the total
    at k is that accumulator plus the fsum of the partial final chunk, which
    is exactly the from-scratch reduction of terms[:k].
    """
    out = []
    acc = Neumaier()
    done = 0
    for k in stops:
        while (done + 1) * CHUNK <= k:
            acc.add(math.fsum(terms[done * CHUNK:(done + 1) * CHUNK]))
            done += 1
        tail = Neumaier()
        tail.s, tail.c = acc.s, acc.c
        if done * CHUNK < k:
            tail.add(math.fsum(terms[done * CHUNK:k]))
        out.append(tail.value)
    return out


# ---------------------------------------------------------------------------
# Sums over even / odd Gram points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SumReport:
    N: int
    parity: str
    S: float
    E: float
    norm_new: float
    norm_old: float
    method: str
    wall_s: float = 0.0

    @property
    def norm_ivic(self) -> float:
        """|E| / (N^{3/4} (log N)^{1/4}), the intermediate normalization."""
        return abs(self.E) / (self.N**0.75 * math.log(self.N) ** 0.25)

    def row(self, timing: bool = True) -> list:
        vals = [self.N, self.parity, repr(self.S), repr(self.E), repr(self.norm_new),
                repr(self.norm_old), self.method]
        return vals + [f"{self.wall_s:.3f}"] if timing else vals


def norm_new(E: float, N: int) -> float:
    """|E| / (N^{1/4} (log N)^{3/4} log log N) with log log N clamped to >= 1."""
    L = math.log(N)
    return abs(E) / (N**0.25 * L**0.75 * max(1.0, math.log(L)))


def norm_old(E: float, N: int) -> float:
    return abs(E) / (N**0.75 * math.log(N) ** 0.75)


def _parity_indices(parity: str):
    """(first summation index, Gram index map): even sums n = 1..N of g(2n),
    odd sums n = 0..N of g(2n+1)."""
    if parity == "even":
        return 1, lambda n: 2 * n
    if parity == "odd":
        return 0, lambda n: 2 * n + 1
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def parity_terms(N_max: int, parity: str, method: str = DEFAULT_METHOD, workers: int = 1,
                 cache_dir=None) -> np.ndarray:
    """Z(g(2n)) or Z(g(2n+1)) for n = 0..N_max (the even n = 0 slot is 0)."""
    first, gram_index = _parity_indices(parity)
    table = gram_table(2 * N_max + 1, cache_dir, workers)

    def fn(n):
        vals = z_at_indices(gram_index(n), table, method)
        return np.where(n >= first, vals, 0.0)

    return _chunked_values(fn, N_max + 1, workers)


def _report(N: int, parity: str, S: float, method: str, wall: float) -> SumReport:
    E = S - 2 * N if parity == "even" else S + 2 * N
    return SumReport(N, parity, S, E, norm_new(E, N), norm_old(E, N), method, wall)


def _check_N(N: int, method: str) -> None:
    if N < 10:
        raise ValueError("N must be >= 10")
    if method not in SUM_METHODS:
        raise ValueError(f"unknown method {method!r}")


def gram_sum(N: int, parity: str, method: str = DEFAULT_METHOD, workers: int = 1,
             cache_dir=None) -> SumReport:
    _check_N(N, method)
    start = time.perf_counter()
    terms = parity_terms(N, parity, method, workers, cache_dir)
    S = prefix_totals(terms, [N + 1])[0]
    return _report(N, parity, S, method, time.perf_counter() - start)


def sum_even(N: int, method: str = DEFAULT_METHOD, workers: int = 1, cache_dir=None) -> SumReport:
    """sum_{n=1}^{N} Z(g(2n)) against 2N."""
    return gram_sum(N, "even", method, workers, cache_dir)


def sum_odd(N: int, method: str = DEFAULT_METHOD, workers: int = 1, cache_dir=None) -> SumReport:
    """sum_{n=0}^{N} Z(g(2n+1)) against -2N."""
    return gram_sum(N, "odd", method, workers, cache_dir)


def error_scan(grid, parity: str = "even", method: str = DEFAULT_METHOD, workers: int = 1,
               cache_dir=None, csv_path=None, timing: bool = True) -> list:
    """One SumReport per N in the ascending grid; terms are computed once up to max(grid)."""
    grid = [int(N) for N in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly ascending")
    for N in grid:
        _check_N(N, method)
    start = time.perf_counter()
    terms = parity_terms(grid[-1], parity, method, workers, cache_dir)
    totals = prefix_totals(terms, [N + 1 for N in grid])
    wall = time.perf_counter() - start
    reports = [_report(N, parity, S, method, wall) for N, S in zip(grid, totals)]
    if csv_path is not None:
        write_reports(reports, csv_path, timing=timing)
    return reports


def write_reports(reports, path, timing: bool = True, delimiter: str = ",") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(SUM_HEADER if timing else SUM_HEADER[:-1])
        for r in reports:
            w.writerow(r.row(timing))
    return path


# ---------------------------------------------------------------------------
# Pair sum, cosine sum, fourth moment
# ---------------------------------------------------------------------------

def consecutive_z(N: int, method: str = DEFAULT_METHOD, workers: int = 1, cache_dir=None) -> np.ndarray:
    """Z(g(n)) for n = 0..N+1."""
    table = gram_table(N + 1, cache_dir, workers)
    return _chunked_values(lambda n: z_at_indices(n, table, method), N + 2, workers)


@dataclass(frozen=True)
class PairSumReport:
    N: int
    P: float
    target: float
    rel_dev: float
    method: str


def pair_sum(N: int, method: str = DEFAULT_METHOD, workers: int = 1, cache_dir=None,
             z: Optional[np.ndarray] = None) -> PairSumReport:
    """sum_{n=1}^{N} Z(g(n)) Z(g(n+1)) against -2(gamma+1)N."""
    if N < 100:
        raise ValueError("N must be >= 100")
    if z is None:
        z = consecutive_z(N, method, workers, cache_dir)
    prod = np.zeros(N + 1)
    prod[1:] = z[1:N + 1] * z[2:N + 2]
    P = prefix_totals(prod, [N + 1])[0]
    target = PAIR_TARGET * N
    return PairSumReport(N, P, target, abs(P - target) / N, method)


@dataclass(frozen=True)
class CosineSumReport:
    N: int
    T: float
    E: float
    norm: float


def titchmarsh_cosine_sum(N: int, workers: int = 1, cache_dir=None) -> CosineSumReport:
    """T = sum_{nu=1}^{N} sum_{n <= sqrt(g(nu)/2pi)} cos(g(nu) log n) / sqrt(n)."""
    if N < 100:
        raise ValueError("N must be >= 100")
    table = gram_table(N, cache_dir, workers)

    def fn(nu):
        t = table.t[nu]
        inner = cosine_sum(t, np.zeros_like(t), np.floor(np.sqrt(t / (2 * math.pi))))
        return np.where(nu >= 1, inner, 0.0)

    terms = _chunked_values(fn, N + 1, workers)
    T = prefix_totals(terms, [N + 1])[0]
    E = T - N
    return CosineSumReport(N, T, E, abs(E) / (N**0.25 * math.log(N) ** -0.25))


def moser_fourth(N: int, method: str = DEFAULT_METHOD, workers: int = 1, cache_dir=None,
                 z: Optional[np.ndarray] = None) -> float:
    """sum_{n=1}^{N} Z(g(n))^2 Z(g(n+1))^2 / (N log^2 N)."""
    if N < 100:
        raise ValueError("N must be >= 100")
    if z is None:
        z = consecutive_z(N, method, workers, cache_dir)
    prod = np.zeros(N + 1)
    prod[1:] = (z[1:N + 1] * z[2:N + 2]) ** 2
    return prefix_totals(prod, [N + 1])[0] / (N * math.log(N) ** 2)


def report_dict(report) -> dict:
    return asdict(report)
