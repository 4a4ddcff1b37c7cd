"""K-user symmetric channel: Gaussian-p2p, TDMA and ETW symmetric rates.

Users are indexed ``1..K`` and receiver 1 is analysed; by symmetry every
receiver sees the same bounds.  The ``*_oracle`` functions enumerate decode
and constraint sets explicitly and exist to cross-check the closed forms.
They are exponential in ``K`` and capped at :data:`MAX_ORACLE_K`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .channel import (
    ChannelKSym,
    RegimeK,
    _check_positive,
    classifyKsym,
)
from .errors import DomainError, ResourceError
from .rates2 import RateResult

MAX_ORACLE_K = 20


@dataclass(frozen=True)
class DecodeSubset:
    """Interferers ``S`` handled by joint decoding and the part ``T`` decoded with user 1."""

    S: frozenset
    T: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "S", frozenset(self.S))
        object.__setattr__(self, "T", frozenset(self.T))
        if not self.T <= self.S:
            raise DomainError(f"T={set(self.T)} is not a subset of S={set(self.S)}")


@dataclass(frozen=True)
class EtwKSplit:
    """Per-user private and common rates of the symmetric ETW point."""

    private_rate: float
    common_rate: float

    @property
    def total(self) -> float:
        return self.private_rate + self.common_rate


@dataclass(frozen=True)
class EtwKResult(RateResult):
    split: EtwKSplit | None = None


@dataclass(frozen=True)
class OracleResult(RateResult):
    argmax_S: frozenset = frozenset()


def _interferers(K: int) -> range:
    return range(2, K + 1)


def _check_subset(ch: ChannelKSym, S) -> frozenset:
    S = frozenset(S)
    bad = [s for s in S if isinstance(s, bool) or s not in _interferers(ch.K)]
    if bad:
        raise DomainError(f"S must be a subset of {{2..{ch.K}}}, got {sorted(S, key=str)}")
    return S


def _subset_term(ch: ChannelKSym, n_S: int, n_T: int) -> float:
    # I(X_1, X_T; Y_1 | X_{S\T}) / (|T|+1); interferers outside S act as noise.
    noise = 1.0 + (ch.K - 1 - n_S) * ch.a * ch.P
    signal = ch.P + n_T * ch.a * ch.P
    return math.log2(1.0 + signal / noise) / (n_T + 1)


def rate_sym_subset(ch: ChannelKSym, S) -> float:
    """Symmetric rate when receiver 1 jointly decodes the interferers in ``S``.

    Takes the minimum over every ``T`` subset of ``S`` explicitly, so the cost
    is ``2**len(S)``.
    """
    S = _check_subset(ch, S)
    members = sorted(S)
    best = math.inf
    for r in range(len(members) + 1):
        for T in itertools.combinations(members, r):
            best = min(best, _subset_term(ch, len(S), len(T)))
    return best


def rate_sym_subset_twobound(ch: ChannelKSym, S) -> float:
    """Same quantity keeping only the individual and total-sum bounds."""
    S = _check_subset(ch, S)
    n = len(S)
    return min(_subset_term(ch, n, 0), _subset_term(ch, n, n))


def rate_sym_p2pK_oracle(ch: ChannelKSym) -> OracleResult:
    """Best decode set found by enumerating every ``S`` subset of ``{2..K}``.

    Ties keep the first maximiser in enumeration order (by size, then
    lexicographic).
    """
    if ch.K > MAX_ORACLE_K:
        raise ResourceError(f"subset enumeration is capped at K={MAX_ORACLE_K}, got K={ch.K}")
    users = list(_interferers(ch.K))
    best, arg = -math.inf, frozenset()
    for r in range(len(users) + 1):
        for S in itertools.combinations(users, r):
            v = rate_sym_subset(ch, S)
            if v > best:
                best, arg = v, frozenset(S)
    if not arg:
        label = "decode-none"
    elif len(arg) == len(users):
        label = "decode-all"
    else:
        label = "decode-partial"
    return OracleResult(best, "JointCapacity", label, argmax_S=arg)


def rate_sym_p2pK_closed(ch: ChannelKSym) -> RateResult:
    """Closed-form Gaussian-p2p symmetric rate; ``active_bound`` is the regime."""
    K, P, a = ch.K, ch.P, ch.a
    regime = classifyKsym(ch)
    if regime is RegimeK.NOISY:
        value = math.log2(1.0 + P / (1.0 + (K - 1) * a * P))
    elif regime is RegimeK.VERY_STRONG:
        value = math.log2(1.0 + P)
    else:
        value = math.log2(1.0 + P + (K - 1) * a * P) / K
    return RateResult(value, "JointCapacity", str(regime))


def _tdma_value(K: int, P: float) -> float:
    return math.log2(1.0 + K * P) / K


def rate_sym_tdmaK(K: int, P: float) -> RateResult:
    if int(K) != K or K < 2:
        raise DomainError(f"K must be an integer >= 2, got {K!r}")
    P = _check_positive("P", P)
    return RateResult(_tdma_value(int(K), P), "TDMA", "TDMA")


def rate_sym_p2p_combinedK(ch: ChannelKSym) -> RateResult:
    closed = rate_sym_p2pK_closed(ch)
    tdma = _tdma_value(ch.K, ch.P)
    if tdma > closed.value:
        return RateResult(tdma, "P2P-combined", "TDMA")
    return RateResult(closed.value, "P2P-combined", closed.active_bound)


# --- ETW, K users ----------------------------------------------------------

def _etw_floor(K: int, a: float) -> float:
    # noise plus the received private powers, normalised
    return K + 1.0 / a


def etw_private_rate(K: int, a: float) -> float:
    return math.log2(1.0 + 1.0 / (K * a))


def _etw_total_common(ch: ChannelKSym) -> float:
    K, P, a = ch.K, ch.P, ch.a
    return math.log2(1.0 + ((K - 1) * (a * P - 1.0) + P - 1.0 / a) / _etw_floor(K, a))


def rate_sym_etwK_closed(ch: ChannelKSym) -> EtwKResult:
    """Closed-form symmetric rate of the K-user ETW scheme.

    Three branches: all-private when ``aP <= 1``, and for ``a < 1`` or
    ``a >= 1`` the private rate plus the smaller of two per-user common-rate
    bounds.
    """
    K, P, a = ch.K, ch.P, ch.a
    if a <= 1.0 / P:
        value = math.log2(1.0 + P / (1.0 + (K - 1) * a * P))
        return EtwKResult(value, "ETW", "ETW-private", split=EtwKSplit(value, 0.0))
    floor = _etw_floor(K, a)
    total = _etw_total_common(ch) / K
    if a < 1.0:
        partial = math.log2(1.0 + (K - 1) * (a * P - 1.0) / floor) / (K - 1)
        partial_label = "ETW-common-interferers"
    else:
        partial = math.log2(1.0 + (P - 1.0 / a) / floor)
        partial_label = "ETW-common-individual"
    private = etw_private_rate(K, a)
    if partial < total:
        common, label = partial, partial_label
    else:
        common, label = total, "ETW-common-sum"
    return EtwKResult(private + common, "ETW", label, split=EtwKSplit(private, common))


def etwK_cardinality_bound(ch: ChannelKSym, k: int) -> float:
    """Right-hand side of the constraint on any ``k`` users' summed common rates."""
    K, P, a = ch.K, ch.P, ch.a
    if not 1 <= k <= K:
        raise DomainError(f"cardinality must be in 1..{K}, got {k}")
    floor = _etw_floor(K, a)
    with_own = math.log2(1.0 + ((k - 1) * (a * P - 1.0) + P - 1.0 / a) / floor)
    if k == K:
        return with_own
    others_only = math.log2(1.0 + k * (a * P - 1.0) / floor)
    return min(others_only, with_own)


def rate_sym_etwK_oracle(ch: ChannelKSym) -> float:
    """Symmetric ETW rate from the per-cardinality constraints of the region.

    Every ``k``-user constraint has the same right-hand side under symmetry,
    so one constraint per ``k`` is evaluated and the symmetric common rate is
    the smallest ``bound(k) / k``.

    Raises
    ------
    DomainError
        If ``aP <= 1`` (no common messages).
    ResourceError
        If ``K`` exceeds :data:`MAX_ORACLE_K`.
    """
    if ch.a * ch.P <= 1.0:
        raise DomainError("ETW constraint oracle needs aP > 1")
    if ch.K > MAX_ORACLE_K:
        raise ResourceError(f"oracle is capped at K={MAX_ORACLE_K}, got K={ch.K}")
    common = min(etwK_cardinality_bound(ch, k) / k for k in range(1, ch.K + 1))
    return etw_private_rate(ch.K, ch.a) + common


# --- high-SNR approximations -----------------------------------------------

def _log2_positive(x: float, what: str) -> float:
    if not x > 0:
        raise DomainError(f"{what} needs a positive log argument, got {x!r}")
    return math.log2(x)


def approx_tdma(K: int, P: float) -> float:
    """``log2(KP) / K``; requires ``KP > 1``."""
    if K * P <= 1:
        raise DomainError(f"approximate TDMA rate needs KP > 1, got KP={K * P!r}")
    return math.log2(K * P) / K


def approx_etwK(K: int, P: float, a: float) -> float:
    """High-SNR form of the K-user ETW rate; requires ``aP > 1``."""
    if a * P <= 1:
        raise DomainError(f"approximate ETW rate needs aP > 1, got aP={a * P!r}")
    floor = _etw_floor(K, a)
    partial = _log2_positive((K - 1) * (a * P - 1.0) / floor, "approx_etwK") / (K - 1)
    total = _log2_positive(K * (P - 1.0 / a) / floor, "approx_etwK") / K
    return etw_private_rate(K, a) + min(partial, total)


def approx_etw3(P: float, a: float) -> float:
    """The K=3 approximation written directly as a minimum of two logs."""
    if a * P <= 1:
        raise DomainError(f"approximate ETW rate needs aP > 1, got aP={a * P!r}")
    c = 1.0 + 1.0 / (3.0 * a)
    return min(0.5 * math.log2((2.0 / 3.0) * (a * P - 1.0) * c),
               math.log2((P - 1.0 / a) * c * c) / 3.0)
