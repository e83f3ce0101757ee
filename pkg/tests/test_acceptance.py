"""Acceptance criteria 1-10, each at its stated tolerance.

Every check prints one PASS/FAIL line; the lines are also collected for the
terminal summary.  Run directly with ``python3 tests/test_acceptance.py``.
"""
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

import conftest  # noqa: E402
from fixtures import PRINTED_GRAM, matches_printed, richardson_budget, richardson_derivative  # noqa: E402
from hardyz import calibration, experiments, expsum  # noqa: E402
from hardyz.gram import gram_range  # noqa: E402
from hardyz.theta import theta_asym, theta_prime, theta_ref  # noqa: E402
from hardyz.weight import rho  # noqa: E402
from hardyz.zfun import (REFERENCE_ERROR, est_error, z_afe_smooth_array, z_reference,  # noqa: E402
                         z_rs_corrected_array, z_rs_main_array)

SEED = 97
SCAN_GRID = [2**k for k in range(7, 18)]


def _record(k: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


# -- 1 ---------------------------------------------------------------------------

def test_criterion_1_theta_enclosure():
    start = time.perf_counter()
    rng = np.random.default_rng(SEED)
    ts = np.exp(rng.uniform(math.log(6), math.log(1e6), 1000))
    worst_enc = worst_fd = 0.0
    for t in ts:
        a, r = theta_asym(t), theta_ref(t)
        worst_enc = max(worst_enc, abs(a.value - r.value) / (a.radius + r.radius))
        fd = richardson_derivative(lambda x: theta_ref(x).value, t)
        budget = richardson_budget(theta_ref(t * 1.000001).radius, t)
        worst_fd = max(worst_fd, abs(theta_prime(t).value - fd) / (0.07 * t**-3 + budget))
    wall = time.perf_counter() - start
    ok = worst_enc <= 1 and worst_fd <= 1 and wall < 10
    _record(1, ok, f"max enclosure ratio {worst_enc:.3g}, max theta' ratio {worst_fd:.3g}, "
                   f"{wall:.1f}s (limits 1, 1, 10s)")


# -- 2 ---------------------------------------------------------------------------

def test_criterion_2_gram_fidelity():
    start = time.perf_counter()
    cache = gram_range(-1, 2e6, 1)
    res = cache.residuals()
    wall = time.perf_counter() - start
    printed = all(matches_printed(cache.t[n + 1], s) for n, s in PRINTED_GRAM.items())
    ok = res.max() <= 1e-9 and printed and wall < 60
    _record(2, ok, f"max residual {res.max():.3g} over n=-1..2e6, twelve printed values "
                   f"{'match' if printed else 'MISMATCH'}, {wall:.1f}s (limits 1e-9, 60s)")


# -- 3 ---------------------------------------------------------------------------

def test_criterion_3_weight_identities():
    rng = np.random.default_rng(SEED)
    xs = np.exp(rng.uniform(math.log(0.01), math.log(100.0), 1000))
    part = max(abs(rho(x) + rho(1 / x) - 1) for x in xs)
    support = all(rho(x) == 0.0 for x in np.concatenate([[2.0], np.linspace(2, 50, 200)]))
    eps = np.concatenate([np.linspace(0.05, 0.3, 26), -np.linspace(0.05, 0.3, 26)])
    flat = [abs(rho(1 + e) - 0.5) / abs(e) ** 5 for e in eps]
    worst = int(np.argmax(flat))
    ok = part <= 1e-11 and support and max(flat) <= 1
    _record(3, ok, f"partition max {part:.3g} (limit 1e-11), support exact {support}, "
                   f"flatness max |rho(1+e)-1/2|/|e|^5 = {max(flat):.3g} at e={eps[worst]:+.3f} (limit 1)")


# -- 4 ---------------------------------------------------------------------------

def test_criterion_4_evaluator_agreement():
    start = time.perf_counter()
    rng = np.random.default_rng(SEED)
    t = rng.uniform(1e3, 1e4, 200)
    ref = np.array([z_reference(x).z for x in t])
    vals = {
        "reference": (ref, np.full_like(t, REFERENCE_ERROR)),
        "rs_main": (z_rs_main_array(t), est_error(t, "rs_main")),
        "rs_corrected": (z_rs_corrected_array(t, 1), est_error(t, "rs_corrected", 1)),
        "afe_smooth": (z_afe_smooth_array(t), est_error(t, "afe_smooth")),
    }
    names = list(vals)
    pair_worst = 0.0
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            (za, ea), (zb, eb) = vals[a], vals[b]
            pair_worst = max(pair_worst, np.max(np.abs(za - zb) / (ea + eb)))
    afe = np.max(np.abs(vals["afe_smooth"][0] - ref) / (calibration.get("c_afe") * t ** (-5 / 6)))
    rs = np.max(np.abs(vals["rs_main"][0] - ref) / (calibration.get("c_rs") * t**-0.25))
    wall = time.perf_counter() - start
    ok = pair_worst <= 1 and afe <= 1 and rs <= 1 and wall < 120
    _record(4, ok, f"pairwise ratio {pair_worst:.3g}, afe/(c_afe t^-5/6) {afe:.3g}, "
                   f"rs_main/(c_rs t^-1/4) {rs:.3g}, {wall:.1f}s (limits 1, 1, 1, 120s)")


# -- 5 ---------------------------------------------------------------------------

def test_criterion_5_gram_sums_at_desk_scale():
    start = time.perf_counter()
    parts = []
    ok = True
    for parity in ("even", "odd"):
        reps = experiments.error_scan(SCAN_GRID, parity)
        cap = calibration.get(f"cap_{parity}")
        top = max(r.norm_new for r in reps)
        old = [r.norm_old for r in reps[-3:]]
        decreasing = old[0] > old[1] > old[2]
        ok &= top <= cap and decreasing
        parts.append(f"{parity}: max norm_new {top:.3g} (cap {cap:.3g}), top norm_old "
                     + ", ".join(f"{v:.3g}" for v in old))
    wall = time.perf_counter() - start
    ok &= wall < 900
    _record(5, ok, "; ".join(parts) + f"; {wall:.1f}s")


# -- 6 ---------------------------------------------------------------------------

def test_criterion_6_pair_sum():
    r = experiments.pair_sum(10**5)
    dev = abs(r.P / r.N - experiments.PAIR_TARGET)
    _record(6, dev <= 0.1, f"P/N = {r.P / r.N:.5f} vs {experiments.PAIR_TARGET:.7f}, "
                           f"deviation {dev:.3g} (limit 0.1)")


# -- 7 ---------------------------------------------------------------------------

def test_criterion_7_cosine_sum():
    cap = calibration.get("cap_cosine")
    norms = [experiments.titchmarsh_cosine_sum(N).norm for N in (100, 1000, 10000)]
    ok = max(norms) <= cap
    _record(7, ok, "norms " + ", ".join(f"{v:.3g}" for v in norms) + f" (cap {cap:.3g})")


# -- 8 ---------------------------------------------------------------------------

def test_criterion_8_vdc_transform():
    k = calibration.get("K_vdc")
    probs = [expsum.quadratic_suite(A, s) for A in (1e2, 1e3, 1e4) for s in (1, -1)]
    probs += [expsum.sm_problem(m) for m in (5, 7, 10)]
    ratios = [expsum.vdc_transform(p).ratio for p in probs]
    counts = {m: len(expsum.stationary_points(expsum.sm_problem(m))) for m in (3, 4, 5, 7, 10)}
    count_ok = all(counts[m] == (2 if m < 5 else 1) for m in counts)
    ok = max(ratios) <= k and count_ok
    _record(8, ok, f"max |lhs-rhs|/R {max(ratios):.3g} (K_vdc {k:.3g}), saddle counts "
                   + " ".join(f"m={m}:{c}" for m, c in counts.items()))


# -- 9 ---------------------------------------------------------------------------

def test_criterion_9_proof_traces():
    x = expsum.x1(10)
    f, _, _ = expsum.f_m(10)
    gap = float(f(np.array([x]))[0]) - x
    w_dev = max(abs(abs(expsum.proof_trace_W1(m).numeric) / (m * math.log(m) / math.sqrt(2)) - 1)
                for m in (8, 10, 16))
    k_u = calibration.get("K_U")
    u = max(abs(expsum.alternating_sum_U(L).diff) for L in (100, 1000, 10000))
    ok = abs(x - 180.196) <= 0.05 and abs(gap - 50.0625) <= 0.03 and w_dev <= 0.05 and u <= k_u
    _record(9, ok, f"x1(10) = {x:.4f}, f(x1)-x1 = {gap:.4f}, max |W|/(m log m/sqrt2) dev "
                   f"{w_dev:.3g}, max |U-asym| {u:.3g} (K_U {k_u:.3g})")


# -- 10 --------------------------------------------------------------------------

def _scan_csv(workers: int, tmp: Path) -> bytes:
    experiments._TABLES.clear()
    blobs = []
    for parity in ("even", "odd"):
        reps = experiments.error_scan(SCAN_GRID, parity, workers=workers)
        path = experiments.write_reports(reps, tmp / f"{parity}_{workers}.csv", timing=False)
        blobs.append(path.read_bytes())
    return b"".join(blobs)


def test_criterion_10_determinism(tmp_path):
    blobs = {w: _scan_csv(w, tmp_path) for w in (1, 4, 8)}
    same = blobs[1] == blobs[4] == blobs[8]
    _record(10, same, f"scan CSV for 1/4/8 workers {'bit-identical' if same else 'DIFFERS'} "
                      f"({len(blobs[1])} bytes)")



if __name__ == "__main__":
    import tempfile

    failed = 0
    for name, fn in list(globals().items()):
        if not name.startswith("test_criterion_"):
            continue
        try:
            if fn.__code__.co_argcount:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
