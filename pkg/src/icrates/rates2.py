"""Two-user rates: symmetric p2p/TDMA/ETW rates, asymmetric sum rates, regions.

Rates are in bits per channel use.  The ``active_bound`` label on every
:class:`RateResult` comes from a fixed vocabulary (see :data:`BOUND_LABELS`)
so that sweep output can be parsed by scripts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .channel import (
    Channel2Asym,
    Channel2Sym,
    Regime2,
    RegimeAsym,
    _check_positive,
    classify2asym,
    classify2sym,
    ian_tdma_crossover,
    mi_gaussian,
)
from .errors import DomainError
from .numerics import find_a0

SCHEMES = ("IAN", "TDMA", "P2P-combined", "ETW", "JointCapacity")

BOUND_LABELS = {
    "individual-IAN": "interference treated as noise at the intended receiver",
    "TDMA": "time-sharing point, each user alone half the time",
    "individual": "interference-free single-user bound",
    "sum": "sum-rate bound of the receiver's two-user MAC",
    "ETW-private": "ETW with all-private messages (INR <= 1)",
    "ETW-common-individual": "ETW individual bound on the common message",
    "ETW-common-sum": "ETW sum bound on the two common messages",
    "noisy-sum": "sum of IAN rates at both receivers",
    "weak-sum": "larger of the two receivers' MAC sum bounds",
    "mixed-cross-limited": "MAC sum bound at the stronger-interference receiver",
    "mixed-direct-limited": "IAN rate of the weak user plus full rate of the other",
}


@dataclass(frozen=True)
class RateResult:
    value: float
    scheme: str
    active_bound: str

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value >= 0):
            raise DomainError(f"rate must be finite and >= 0, got {self.value!r}")

    def __float__(self):
        return self.value


class EtwBranch(enum.Enum):
    ALL_PRIVATE = "AllPrivate"
    SUM_BOUND = "SumBound"
    INDIVIDUAL_BOUND = "IndividualBound"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RegionVertices:
    """Boundary polygon of a rate region, counterclockwise from the origin."""

    vertices: tuple[tuple[float, float], ...]
    region: str

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)


# --- symmetric channel -----------------------------------------------------

def ian_rate(P: float, a: float) -> float:
    """``log2(1 + P / (1 + aP))``."""
    return mi_gaussian(P, 1.0 + a * P)


def tdma2_value(P: float) -> float:
    return 0.5 * math.log2(1.0 + 2.0 * P)


def rate_sym_ian(ch: Channel2Sym) -> RateResult:
    return RateResult(ian_rate(ch.P, ch.a), "IAN", "individual-IAN")


def rate_sym_tdma2(P: float) -> RateResult:
    P = _check_positive("P", P)
    return RateResult(tdma2_value(P), "TDMA", "TDMA")


def rate_sym_p2p(ch: Channel2Sym) -> RateResult:
    """Symmetric rate of point-to-point codes combined with TDMA.

    In the noisy regime the better of IAN and TDMA is taken; in the weak
    regime TDMA always wins.  In the strong regimes the capacity region of
    p2p codes is the simultaneous-decoding region, whose symmetric point is
    ``min{log2(1+P), log2(1+P+aP)/2}``.
    """
    P, a = ch.P, ch.a
    regime = classify2sym(ch)
    if regime is Regime2.NOISY:
        ian = ian_rate(P, a)
        tdma = tdma2_value(P)
        if tdma > ian:
            return RateResult(tdma, "P2P-combined", "TDMA")
        return RateResult(ian, "P2P-combined", "individual-IAN")
    if regime is Regime2.WEAK:
        return RateResult(tdma2_value(P), "P2P-combined", "TDMA")
    single = math.log2(1.0 + P)
    if regime is Regime2.STRONG:
        half_sum = 0.5 * math.log2(1.0 + P + a * P)
        if half_sum < single:
            return RateResult(half_sum, "JointCapacity", "sum")
        return RateResult(single, "JointCapacity", "individual")
    return RateResult(single, "JointCapacity", "individual")


def p2p_noisy_closed_form(P: float, a: float) -> float:
    """Piecewise noisy-regime p2p rate, split at the IAN/TDMA crossover."""
    if a <= ian_tdma_crossover(P):
        return ian_rate(P, a)
    return tdma2_value(P)


def _etw_terms(P: float, a: float) -> tuple[float, float]:
    # (sum bound on the commons, individual bound on a common)
    sum_term = 0.5 * math.log2(1.0 + P + a * P) + 0.5 * math.log2(2.0 + 1.0 / a) - 1.0
    ind_term = math.log2(1.0 + a * P + 1.0 / a) - 1.0
    return sum_term, ind_term


def _require_etw_domain(ch: Channel2Sym) -> None:
    if ch.a > 1.0:
        raise DomainError(
            f"ETW symmetric rate is only defined for a <= 1 (got a={ch.a!r}); "
            "for a > 1 the p2p rate is the capacity"
        )


def rate_sym_etw(ch: Channel2Sym) -> RateResult:
    """Symmetric rate of the ETW common/private splitting scheme, ``a <= 1``.

    Raises
    ------
    DomainError
        For ``a > 1``.
    """
    _require_etw_domain(ch)
    P, a = ch.P, ch.a
    if a <= 1.0 / P:
        return RateResult(ian_rate(P, a), "ETW", "ETW-private")
    sum_term, ind_term = _etw_terms(P, a)
    if sum_term < ind_term:
        return RateResult(sum_term, "ETW", "ETW-common-sum")
    return RateResult(ind_term, "ETW", "ETW-common-individual")


def etw_terms(ch: Channel2Sym) -> tuple[float, float]:
    """Both min-terms of the ETW rate, ``(sum_term, individual_term)``."""
    _require_etw_domain(ch)
    return _etw_terms(ch.P, ch.a)


def etw_branch(ch: Channel2Sym, a0: float | None = None) -> EtwBranch:
    """Which expression of the ETW rate is active, decided through ``a0``."""
    _require_etw_domain(ch)
    if ch.a <= 1.0 / ch.P:
        return EtwBranch.ALL_PRIVATE
    if a0 is None:
        a0 = find_a0(ch.P)
    if ch.a <= a0:
        return EtwBranch.INDIVIDUAL_BOUND
    return EtwBranch.SUM_BOUND


# --- asymmetric channel ----------------------------------------------------

def sum_rate_p2p_asym(ch: Channel2Asym) -> RateResult:
    """Maximum sum rate of p2p-capacity-achieving codes.

    Defined in the noisy, weak and mixed regimes only.

    Raises
    ------
    DomainError
        In the strong regime, where no closed-form sum rate is available.
    """
    P = (ch.P1, ch.P2)
    a = (ch.a1, ch.a2)
    regime = classify2asym(ch)
    if regime is RegimeAsym.NOISY:
        value = sum(mi_gaussian(P[i], 1.0 + a[i] * P[1 - i]) for i in (0, 1))
        return RateResult(value, "JointCapacity", "noisy-sum")
    if regime is RegimeAsym.WEAK:
        value = max(math.log2(1.0 + P[0] + a[0] * P[1]),
                    math.log2(1.0 + a[1] * P[0] + P[1]))
        return RateResult(value, "JointCapacity", "weak-sum")
    if regime is RegimeAsym.STRONG:
        raise DomainError("no closed-form p2p sum rate in the strong regime")
    i = 0 if a[0] > 1.0 else 1
    j = 1 - i
    if regime is RegimeAsym.MIXED_CROSS_LIMITED:
        value = math.log2(1.0 + P[i] + a[i] * P[j])
        return RateResult(value, "JointCapacity", "mixed-cross-limited")
    value = mi_gaussian(P[j], 1.0 + a[j] * P[i]) + math.log2(1.0 + P[i])
    return RateResult(value, "JointCapacity", "mixed-direct-limited")


# --- regions ---------------------------------------------------------------

REGIONS = ("C0", "C1", "C1prime", "Capacity")


def _dedupe(points):
    out = []
    for p in points:
        if not out or p != out[-1]:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out)


def _square(side: float):
    return ((0.0, 0.0), (side, 0.0), (side, side), (0.0, side))


def _c1(single: float, total: float):
    if total >= 2.0 * single:
        return _square(single)
    return _dedupe([(0.0, 0.0), (single, 0.0), (single, total - single),
                    (total - single, single), (0.0, single)])


def region_vertices(ch: Channel2Sym, region: str) -> RegionVertices:
    """Vertices of ``C0``, ``C1``, ``C1prime`` or the p2p ``Capacity`` region.

    Regions are closed (strict inequalities relaxed).  ``Capacity`` is the
    union ``C0 | C1`` in the noisy regime, ``C1`` in the weak and strong
    regimes and ``C1prime`` in the very strong regime; the noisy union may be
    non-convex.
    """
    if region not in REGIONS:
        raise DomainError(f"unknown region {region!r}; choose from {REGIONS}")
    P, a = ch.P, ch.a
    ian = ian_rate(P, a)
    single = math.log2(1.0 + P)
    total = math.log2(1.0 + P + a * P)
    if region == "C0":
        return RegionVertices(_square(ian), region)
    if region == "C1":
        return RegionVertices(_c1(single, total), region)
    if region == "C1prime":
        return RegionVertices(_square(single), region)

    regime = classify2sym(ch)
    if regime is Regime2.VERY_STRONG:
        return RegionVertices(_square(single), region)
    if regime is not Regime2.NOISY or 2.0 * ian <= total:
        return RegionVertices(_c1(single, total), region)
    # C0's corner pokes out through C1's sum face.
    pts = [(0.0, 0.0), (single, 0.0)]
    if total < 2.0 * single:
        pts += [(single, total - single), (ian, total - ian), (ian, ian),
                (total - ian, ian), (total - single, single)]
    else:
        pts += [(single, single)]
    pts.append((0.0, single))
    return RegionVertices(_dedupe(pts), region)
