"""Grid and random-sample checks of the rate comparisons and identities.

Each suite evaluates a margin at every point of a deterministic grid or
seeded sample.  A positive margin means the claim holds with that much
slack.  The suite passes when its worst margin exceeds ``threshold``:
``-tol`` for non-strict claims and ``+1e-12`` for strict inequalities,
since exact strictness cannot be witnessed in floating point.

Suites only assert inside the parameter ranges where the claims are
proved (SNR up to 20 dB and 30 dB for the two corollaries, the open
interval of the K=3 comparison).
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import numerics
from ._parallel import map_ordered
from .channel import (
    Channel2Asym,
    Channel2Sym,
    ChannelKSym,
    classify2asym,
    noisy_boundary,
)
from .errors import DomainError
from .rates2 import (
    ian_rate,
    p2p_noisy_closed_form,
    rate_sym_etw,
    rate_sym_p2p,
    sum_rate_p2p_asym,
)
from .rates_k import (
    approx_etwK,
    approx_tdma,
    rate_sym_etwK_closed,
    rate_sym_etwK_oracle,
    rate_sym_p2pK_closed,
    rate_sym_p2pK_oracle,
    rate_sym_subset,
    rate_sym_subset_twobound,
)

STRICT = 1e-12
EQ_TOL = 1e-12
MAX_SKIP_FRACTION = 0.05

# Open interval of SNR over which the K=3 approximate comparison is claimed.
K3_P_LOW = (-24.0 + 9.0 * math.sqrt(10.0)) / 26.0
K3_P_HIGH = 142389.0 / 2048.0


@dataclass
class VerifyReport:
    suite_name: str
    passed: bool
    worst_margin: float
    witness: dict
    points_checked: int
    runtime: float
    threshold: float
    skipped: int = 0
    info: dict = field(default_factory=dict)

    def to_record(self, include_runtime: bool = True) -> str:
        """One JSON line; leave out ``runtime`` for byte-stable output."""
        d = asdict(self)
        if not include_runtime:
            d.pop("runtime")
        return json.dumps(d, sort_keys=True, allow_nan=False, default=_jsonable)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (f"{status} {self.suite_name}: worst_margin={self.worst_margin:.6g} "
                f"points={self.points_checked} skipped={self.skipped} "
                f"witness={_fmt_witness(self.witness)} runtime={self.runtime:.3f}s")
        extra = self.info.get("notes")
        if extra:
            line += "\n  " + "\n  ".join(extra)
        return line


CSV_FIELDS = ("suite", "pass", "worst_margin", "threshold", "points_checked",
              "skipped", "witness", "runtime")


def report_csv_row(r: VerifyReport) -> list[str]:
    return [r.suite_name, "1" if r.passed else "0", f"{r.worst_margin:.17g}",
            f"{r.threshold:.17g}", str(r.points_checked), str(r.skipped),
            _fmt_witness(r.witness), f"{r.runtime:.6f}"]


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _fmt_witness(w: dict) -> str:
    return " ".join(f"{k}={v:.17g}" if isinstance(v, float) else f"{k}={v}"
                    for k, v in w.items())


def _run(name: str, points: Sequence, check: Callable, threshold: float,
         threads: int | None = None, info: dict | None = None) -> VerifyReport:
    """Evaluate ``check`` on every point and reduce to a report.

    ``check`` returns ``(margin, witness)`` or ``None`` for a skipped point.
    The reduction runs in input order, so the first worst point wins ties.
    """
    t0 = time.perf_counter()
    results = map_ordered(check, points, threads)
    worst, witness, n, skipped = math.inf, {}, 0, 0
    for res in results:
        if res is None:
            skipped += 1
            continue
        n += 1
        margin, w = res
        if margin < worst or (math.isnan(margin) and not math.isnan(worst)):
            worst, witness = margin, w
    total = n + skipped
    passed = n > 0 and worst > threshold
    if total and skipped / total > MAX_SKIP_FRACTION:
        passed = False
    return VerifyReport(name, bool(passed), float(worst), witness, n,
                        time.perf_counter() - t0, threshold, skipped, info or {})


def _logspace(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [float(lo)]
    return [float(x) for x in np.geomspace(lo, hi, n)]


def _logspace_open(lo: float, hi: float, n: int) -> list[float]:
    """``n`` log-spaced points strictly inside ``(lo, hi)``."""
    return _logspace(lo, hi, n + 2)[1:-1]


def _open_low(lo: float, hi: float, n: int) -> list[float]:
    """``n`` points in ``(lo, hi]``, evenly spaced, excluding ``lo``."""
    return [lo + (hi - lo) * j / n for j in range(1, n)] + [hi]


def _open_both(lo: float, hi: float, n: int) -> list[float]:
    return [lo + (hi - lo) * j / (n + 1) for j in range(1, n + 1)]


# --- two-user suites -------------------------------------------------------

def thm1_grid(n_P: int = 50, n_a: int = 50, P_min: float = 0.1, P_max: float = 1e4):
    """``(P, a)`` pairs covering the noisy regime, boundary included."""
    return [(P, a) for P in _logspace(P_min, P_max, n_P)
            for a in _open_low(0.0, noisy_boundary(P), n_a)]


def _thm1_point(pt):
    P, a = pt
    ch = Channel2Sym(P, a)
    ian = ian_rate(P, a)
    etw = rate_sym_etw(ch).value
    p2p = rate_sym_p2p(ch).value
    closed = p2p_noisy_closed_form(P, a)
    margin = min(ian - etw, p2p - ian, -abs(p2p - closed))
    return margin, {"P": P, "a": a, "etw": etw, "p2p": p2p}


def verify_thm1_noisy(points: Iterable | None = None, threads: int | None = None,
                      tol: float = EQ_TOL) -> VerifyReport:
    """Noisy regime: ETW never beats IAN, and p2p equals its two-case closed form."""
    pts = thm1_grid() if points is None else list(points)
    return _run("thm1", pts, _thm1_point, -tol, threads)


def weak_grid(P_max: float, n_P: int = 50, n_a: int = 50, P_min: float = 1e-2):
    """``(P, a)`` with ``P`` log-spaced up to ``P_max`` and ``a`` in the weak regime."""
    return [(P, a) for P in _logspace(P_min, P_max, n_P)
            for a in _open_low(noisy_boundary(P), 1.0, n_a)]


def _p2p_minus_etw(pt):
    P, a = pt
    ch = Channel2Sym(P, a)
    return rate_sym_p2p(ch).value - rate_sym_etw(ch).value


def _cor20_point(pt):
    return _p2p_minus_etw(pt), {"P": pt[0], "a": pt[1]}


def _cor30_point(pt):
    return _p2p_minus_etw(pt) + 0.5, {"P": pt[0], "a": pt[1]}


def verify_cor_20db(points: Iterable | None = None, threads: int | None = None) -> VerifyReport:
    """Weak regime, SNR <= 20 dB: p2p strictly beats ETW."""
    pts = weak_grid(100.0) if points is None else list(points)
    return _run("cor20", pts, _cor20_point, STRICT, threads)


def verify_cor_30db(points: Iterable | None = None, threads: int | None = None) -> VerifyReport:
    """Weak regime, SNR <= 30 dB: p2p is within half a bit of ETW.

    The margin reported is ``p2p - etw + 0.5``.
    """
    pts = weak_grid(1000.0) if points is None else list(points)
    return _run("cor30", pts, _cor30_point, STRICT, threads)


def power_grid(n_P: int = 20, n_a: int = 20, n_rho: int = 10,
               P_min: float = 0.1, P_max: float = 1e4):
    return [(P, a, rho) for P in _logspace(P_min, P_max, n_P)
            for a in _open_low(0.0, 1.0, n_a)
            for rho in _open_low(0.0, 1.0, n_rho)]


def _power_point(pt):
    P, a, rho = pt
    full_ch = Channel2Asym(P, P, a, a)
    reduced_ch = Channel2Asym(P, rho * P, a, a)
    try:
        full = sum_rate_p2p_asym(full_ch).value
        reduced = sum_rate_p2p_asym(reduced_ch).value
    except DomainError:
        return None
    return full - reduced, {"P": P, "a": a, "rho": rho,
                            "regime_full": str(classify2asym(full_ch)),
                            "regime_reduced": str(classify2asym(reduced_ch))}


def verify_power_reduction(points: Iterable | None = None, threads: int | None = None,
                           tol: float = EQ_TOL) -> VerifyReport:
    """Lowering one user's power never raises the p2p sum rate (``a <= 1``)."""
    pts = power_grid() if points is None else list(points)
    return _run("power", pts, _power_point, -tol, threads)


# --- K-user suites ---------------------------------------------------------

def k3_grid(n_P: int = 40, n_a: int = 40, P_min: float = 0.17175, P_max: float = 69.52,
            a_floor: float = 0.01):
    """``(P, a)`` for the K=3 comparison, ``P`` open in ``(P_min, P_max)`` and
    ``a`` open in ``(max(1/P, a_floor), 1)``.

    SNRs with ``1/P >= 1`` contribute no points.
    """
    pts = []
    for P in _logspace_open(P_min, P_max, n_P):
        lo = max(1.0 / P, a_floor)
        if lo < 1.0:
            pts.extend((P, a) for a in _open_both(lo, 1.0, n_a))
    return pts


def _k3_point(pt):
    P, a = pt
    try:
        etw = approx_etwK(3, P, a)
        tdma = approx_tdma(3, P)
    except DomainError:
        return None
    return tdma - etw, {"P": P, "a": a, "approx_etw": etw, "approx_tdma": tdma}


def verify_k3_tdma_dominance(points: Iterable | None = None,
                             threads: int | None = None) -> VerifyReport:
    """K=3 high-SNR approximations: ETW strictly below TDMA."""
    pts = k3_grid() if points is None else list(points)
    return _run("k3", pts, _k3_point, STRICT, threads)


def random_k_samples(n: int = 1000, seed: int = 20120101, K_range=(2, 6),
                     P_range=(0.01, 1e6), a_low: float = 1e-3):
    """Seeded ``(K, P, a)``: ``P`` log-uniform, ``a`` log-uniform on ``[a_low, 10(1+P)]``."""
    rng = random.Random(seed)
    lp = (math.log(P_range[0]), math.log(P_range[1]))
    out = []
    for _ in range(n):
        K = rng.randint(*K_range)
        P = math.exp(rng.uniform(*lp))
        a = math.exp(rng.uniform(math.log(a_low), math.log(10.0 * (1.0 + P))))
        out.append((K, P, a))
    return out


def random_etwk_samples(n: int = 1000, seed: int = 20120102):
    """As :func:`random_k_samples` but keeping only points with ``aP > 1``."""
    rng_seed = seed
    out = []
    while len(out) < n:
        batch = random_k_samples(n, rng_seed)
        out.extend(s for s in batch if s[1] * s[2] > 1.0)
        rng_seed += 1
    return out[:n]


def _all_subsets(K: int):
    users = list(range(2, K + 1))
    for mask in range(1 << len(users)):
        yield frozenset(u for i, u in enumerate(users) if mask >> i & 1)


def _kbound_point(pt):
    K, P, a = pt
    ch = ChannelKSym(K, P, a)
    worst, worst_S = 0.0, frozenset()
    for S in _all_subsets(K):
        d = abs(rate_sym_subset(ch, S) - rate_sym_subset_twobound(ch, S))
        if d > worst:
            worst, worst_S = d, S
    return -worst, {"K": K, "P": P, "a": a, "S": sorted(worst_S)}


def _maxS_point(pt):
    K, P, a = pt
    ch = ChannelKSym(K, P, a)
    oracle = rate_sym_p2pK_oracle(ch).value
    extremes = max(rate_sym_subset(ch, ()), rate_sym_subset(ch, range(2, K + 1)))
    closed = rate_sym_p2pK_closed(ch).value
    err = max(abs(oracle - extremes), abs(oracle - closed))
    return -err, {"K": K, "P": P, "a": a, "oracle": oracle, "closed": closed}


def verify_lemma_kbound(samples: Iterable | None = None, threads: int | None = None,
                        tol: float = EQ_TOL) -> VerifyReport:
    """Per decode set, the full minimum over ``T`` equals the two-bound minimum."""
    pts = random_k_samples() if samples is None else list(samples)
    return _run("kbound", pts, _kbound_point, -tol, threads)


def verify_maxS(samples: Iterable | None = None, threads: int | None = None,
                tol: float = EQ_TOL) -> VerifyReport:
    """The best decode set is empty or full, and the closed form matches the oracle."""
    pts = random_k_samples() if samples is None else list(samples)
    return _run("maxS", pts, _maxS_point, -tol, threads)


def _etwk_point(pt):
    K, P, a = pt
    ch = ChannelKSym(K, P, a)
    closed = rate_sym_etwK_closed(ch).value
    oracle = rate_sym_etwK_oracle(ch)
    return -abs(closed - oracle), {"K": K, "P": P, "a": a, "closed": closed, "oracle": oracle}


def verify_etwk_oracle(samples: Iterable | None = None, threads: int | None = None,
                       tol: float = EQ_TOL) -> VerifyReport:
    """K-user ETW closed form against per-cardinality constraint enumeration."""
    pts = random_etwk_samples() if samples is None else list(samples)
    return _run("etwk-oracle", pts, _etwk_point, -tol, threads)


# --- root identities -------------------------------------------------------

def _etw_crossing(P: float) -> float:
    """``a`` where the two ETW min-terms are equal, by bisection on their difference.

    Bracketed by the noisy boundary (where ``f = -1``) and ``a = 1``; needs
    ``P > 2`` so the lower end sits above ``1/P``.
    """
    def diff(a):
        s = 0.5 * math.log2(1.0 + P + a * P) + 0.5 * math.log2(2.0 + 1.0 / a)
        i = math.log2(1.0 + a * P + 1.0 / a)
        return s - i
    return numerics.bracketed_root(diff, noisy_boundary(P), 1.0, 1e-14).value


def _a_defining_residual(P: float, a: float, offset: float) -> float:
    lhs = 0.5 * math.log2(1.0 + P + a * P) + 0.5 * math.log2(2.0 + 1.0 / a) - 1.0
    return lhs - 0.5 * math.log2(1.0 + 2.0 * P) - offset


def verify_roots(n_random: int = 1000, n_g2: int = 100, seed: int = 20120103,
                 threads: int | None = None) -> VerifyReport:
    """Closed-form roots, crossover locations and polynomial identities.

    Each sub-check contributes ``allowed - observed`` as its margin.
    """
    t0 = time.perf_counter()
    rng = random.Random(seed)
    checks: list[tuple[float, dict]] = []
    notes = []

    p_prime = numerics.compute_P_prime()
    p_dd = numerics.compute_P_doubleprime()
    notes.append(f"P' = {p_prime:.10g} (> 100)")
    notes.append(f"P'' = {p_dd:.10g} (> 1000)")
    checks.append((p_prime - 100.0, {"check": "P_prime>100", "value": p_prime}))
    checks.append((p_dd - 1000.0, {"check": "P_doubleprime>1000", "value": p_dd}))

    a1_4 = numerics.a1_closed(4.0)
    checks.append((1e-15 - abs(a1_4 - 0.25), {"check": "a1_closed(4)=0.25", "value": a1_4}))

    for P in (5.0, 10.0, 100.0, 1000.0):
        err = abs(_etw_crossing(P) - numerics.find_a0(P))
        checks.append((1e-9 - err, {"check": "etw_crossing=a0", "P": P}))

    lp = (math.log(0.1), math.log(1e6))
    for _ in range(n_random):
        P = math.exp(rng.uniform(*lp))
        err = abs(numerics.f(P, noisy_boundary(P)) + 1.0)
        checks.append((1e-9 - err, {"check": "f(noisy_boundary)=-1", "P": P}))

    for _ in range(n_g2):
        P = math.exp(rng.uniform(*lp))
        err = abs(numerics.g2(P, 4.0 / 9.0) - (441.0 - 4.0 * P) / 81.0)
        scale = max(1.0, abs(441.0 - 4.0 * P) / 81.0)
        checks.append((1e-12 - err / scale, {"check": "g2(4/9)", "P": P}))

    grid = _logspace(4.0, 1e6, 200)
    prev = None
    for P in grid:
        r1 = abs(_a_defining_residual(P, numerics.a1_closed(P), 0.0))
        r2 = abs(_a_defining_residual(P, numerics.a2_closed(P), 0.5))
        checks.append((1e-10 - r1, {"check": "a1 defining eq", "P": P}))
        checks.append((1e-10 - r2, {"check": "a2 defining eq", "P": P}))
        cur = numerics.f(P, numerics.a1_closed(P))
        if prev is not None:
            checks.append((cur - prev, {"check": "f(a1) increasing", "P": P}))
        prev = cur

    for P in _logspace(0.01, 1e6, 100):
        a0 = numerics.find_a0(P)
        eps = 1e-6 * a0
        below = numerics.f(P, a0 - eps)
        above = numerics.f(P, a0 + eps)
        checks.append((min(-below, above), {"check": "a0 sign structure", "P": P}))

    worst, witness = min(checks, key=lambda c: c[0])
    # monotonic differences are tiny but must stay positive
    passed = worst > 0.0
    return VerifyReport("roots", bool(passed), float(worst), witness, len(checks),
                        time.perf_counter() - t0, 0.0, 0,
                        {"notes": notes, "P_prime": p_prime, "P_doubleprime": p_dd})


SUITES: dict[str, Callable[..., VerifyReport]] = {
    "thm1": verify_thm1_noisy,
    "cor20": verify_cor_20db,
    "cor30": verify_cor_30db,
    "power": verify_power_reduction,
    "k3": verify_k3_tdma_dominance,
    "kbound": verify_lemma_kbound,
    "maxS": verify_maxS,
    "etwk-oracle": verify_etwk_oracle,
    "roots": verify_roots,
}


def run_suites(selector: str = "all", threads: int | None = None) -> list[VerifyReport]:
    if selector == "all":
        names = list(SUITES)
    elif selector in SUITES:
        names = [selector]
    else:
        raise KeyError(f"unknown suite {selector!r}; choose from all, {', '.join(SUITES)}")
    return [SUITES[n](threads=threads) for n in names]
