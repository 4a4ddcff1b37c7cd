"""Channel parameter types and interference-regime classification.

Three channel models are covered: the two-user symmetric channel
``(P, a)``, the two-user asymmetric channel ``(P1, P2, a1, a2)`` and the
K-user symmetric channel ``(K, P, a)``.  ``P`` is the linear SNR of a direct
link and ``a`` the interference-to-signal ratio of a cross link, with unit
noise variance at every receiver.

Regime thresholds are compared with raw IEEE arithmetic; ties resolve
according to where the defining inequalities place ``<=`` versus ``<``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

from .errors import DomainError


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


def mi_gaussian(signal_power: float, residual_power: float) -> float:
    """Gaussian mutual information ``log2(1 + signal/residual)`` in bits."""
    s = float(signal_power)
    r = float(residual_power)
    if not (math.isfinite(s) and math.isfinite(r)):
        raise DomainError("mutual information arguments must be finite")
    if s < 0:
        raise DomainError(f"signal power must be >= 0, got {s!r}")
    if r <= 0:
        raise DomainError(f"residual power must be > 0, got {r!r}")
    return math.log2(1.0 + s / r)


@dataclass(frozen=True)
class Channel2Sym:
    """Two-user symmetric Gaussian interference channel."""

    P: float
    a: float

    def __post_init__(self):
        object.__setattr__(self, "P", _check_positive("P", self.P))
        object.__setattr__(self, "a", _check_positive("a", self.a))


@dataclass(frozen=True)
class Channel2Asym:
    """Two-user asymmetric channel; ``a1`` scales user 2's power at receiver 1."""

    P1: float
    P2: float
    a1: float
    a2: float

    def __post_init__(self):
        for name in ("P1", "P2", "a1", "a2"):
            object.__setattr__(self, name, _check_positive(name, getattr(self, name)))
        if self.P1 < self.P2:
            raise DomainError(f"expected P1 >= P2, got P1={self.P1!r}, P2={self.P2!r}")


@dataclass(frozen=True)
class ChannelKSym:
    """K-user symmetric Gaussian interference channel."""

    K: int
    P: float
    a: float

    def __post_init__(self):
        if isinstance(self.K, bool) or int(self.K) != self.K or self.K < 2:
            raise DomainError(f"K must be an integer >= 2, got {self.K!r}")
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "P", _check_positive("P", self.P))
        object.__setattr__(self, "a", _check_positive("a", self.a))


@functools.total_ordering
class _OrderedRegime(enum.Enum):
    # Declaration order is the interference-strength order.
    def __lt__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        members = list(type(self))
        return members.index(self) < members.index(other)

    def __str__(self):
        return self.value


class Regime2(_OrderedRegime):
    NOISY = "Noisy"
    WEAK = "Weak"
    STRONG = "Strong"
    VERY_STRONG = "VeryStrong"


class RegimeK(_OrderedRegime):
    NOISY = "Noisy"
    WEAK = "Weak"
    STRONG = "Strong"
    VERY_STRONG = "VeryStrong"


class RegimeAsym(enum.Enum):
    NOISY = "Noisy"
    WEAK = "Weak"
    MIXED_DIRECT_LIMITED = "MixedDirectLimited"
    MIXED_CROSS_LIMITED = "MixedCrossLimited"
    STRONG = "Strong"

    def __str__(self):
        return self.value


def noisy_boundary(P: float) -> float:
    """Largest ``a`` of the two-user noisy regime, ``(-1 + sqrt(1 + 4P)) / 2P``."""
    P = _check_positive("P", P)
    return (-1.0 + math.sqrt(1.0 + 4.0 * P)) / (2.0 * P)


def ian_tdma_crossover(P: float) -> float:
    """``a`` above which TDMA beats treating interference as noise (two users)."""
    P = _check_positive("P", P)
    return (-1.0 + math.sqrt(1.0 + 2.0 * P)) / (2.0 * P)


def classify2sym(ch: Channel2Sym) -> Regime2:
    if ch.a <= noisy_boundary(ch.P):
        return Regime2.NOISY
    if ch.a <= 1.0:
        return Regime2.WEAK
    if ch.a <= 1.0 + ch.P:
        return Regime2.STRONG
    return Regime2.VERY_STRONG


def classify2asym(ch: Channel2Asym) -> RegimeAsym:
    """Five-way regime of the asymmetric channel.

    Noisy takes priority over Weak whenever both noisy conditions hold,
    including equality.
    """
    P = (ch.P1, ch.P2)
    a = (ch.a1, ch.a2)
    big = [i for i in (0, 1) if a[i] > 1.0]
    if len(big) == 2:
        return RegimeAsym.STRONG
    if len(big) == 1:
        i = big[0]
        j = 1 - i
        if a[i] * (1.0 + a[j] * P[i]) >= 1.0 + P[i]:
            return RegimeAsym.MIXED_DIRECT_LIMITED
        return RegimeAsym.MIXED_CROSS_LIMITED
    if all(a[i] * (1.0 + a[1 - i] * P[i]) <= 1.0 for i in (0, 1)):
        return RegimeAsym.NOISY
    return RegimeAsym.WEAK


def _k_levels(ch: ChannelKSym) -> tuple[float, float, float]:
    """Natural logs of ``1+(K-1)aP+P``, ``1+(K-1)aP`` and ``1+P``."""
    inr_total = (ch.K - 1) * ch.a * ch.P
    return (math.log1p(inr_total + ch.P), math.log1p(inr_total), math.log1p(ch.P))


def k_noisy_condition(ch: ChannelKSym) -> bool:
    """``(1+(K-1)aP+P)^(K-1) > (1+(K-1)aP)^K``, evaluated in the log domain."""
    total, interf, _ = _k_levels(ch)
    return (ch.K - 1) * total > ch.K * interf


def k_very_strong_condition(ch: ChannelKSym) -> bool:
    """``1+(K-1)aP+P >= (1+P)^K``, evaluated in the log domain."""
    total, _, direct = _k_levels(ch)
    return total >= ch.K * direct


def classifyKsym(ch: ChannelKSym) -> RegimeK:
    if k_very_strong_condition(ch):
        return RegimeK.VERY_STRONG
    if k_noisy_condition(ch):
        return RegimeK.NOISY
    if ch.a < 1.0:
        return RegimeK.WEAK
    return RegimeK.STRONG
