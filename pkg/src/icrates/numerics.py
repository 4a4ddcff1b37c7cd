"""Root finding and the polynomial helpers behind the rate crossovers.

Every root of interest is simple and can be bracketed, so plain bisection
is used throughout: it always converges, needs no derivative, and gives the
same answer on every run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable

from .channel import _check_positive, ian_tdma_crossover, noisy_boundary
from .errors import BracketError, DomainError

DEFAULT_TOL = 1e-12
MAX_DOUBLINGS = 64
_MAX_ITER = 2000

__all__ = [
    "RootResult",
    "NamedFn",
    "bracketed_root",
    "grow_bracket",
    "f",
    "g",
    "h",
    "f1",
    "f1_thm3",
    "g1",
    "g2",
    "g3",
    "named",
    "find_a0",
    "a1_closed",
    "a2_closed",
    "noisy_boundary",
    "ian_tdma_crossover",
    "compute_P_prime",
    "compute_P_doubleprime",
    "g1_root",
]


@dataclass(frozen=True)
class RootResult:
    value: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


def _eval(fn: Callable[[float], float], x: float) -> float:
    y = float(fn(x))
    if not math.isfinite(y):
        raise DomainError(f"function is not finite at x={x!r}")
    return y


def bracketed_root(fn: Callable[[float], float], lo: float, hi: float,
                   tol: float = DEFAULT_TOL) -> RootResult:
    """Bisect ``fn`` on ``[lo, hi]`` until the bracket is narrower than ``tol``.

    Parameters
    ----------
    fn : callable
        Continuous real function with opposite signs at ``lo`` and ``hi``.
    lo, hi : float
        Bracket endpoints, ``lo < hi``.
    tol : float
        Absolute tolerance on the final bracket width.

    Returns
    -------
    RootResult
        Midpoint of the final bracket, the bracket itself, ``fn`` at the
        midpoint and the number of halvings performed.

    Raises
    ------
    BracketError
        If ``fn(lo)`` and ``fn(hi)`` do not differ in sign.
    DomainError
        If ``fn`` returns a non-finite value, or the arguments are invalid.
    """
    lo = float(lo)
    hi = float(hi)
    if not (lo < hi):
        raise DomainError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    flo = _eval(fn, lo)
    fhi = _eval(fn, hi)
    if flo == 0.0:
        return RootResult(lo, (lo, hi), 0.0, 0)
    if fhi == 0.0:
        return RootResult(hi, (lo, hi), 0.0, 0)
    if (flo < 0) == (fhi < 0):
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")

    it = 0
    while hi - lo > tol and it < _MAX_ITER:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # bracket is down to adjacent doubles
            break
        fmid = _eval(fn, mid)
        it += 1
        if fmid == 0.0:
            return RootResult(mid, (lo, hi), 0.0, it)
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    return RootResult(mid, (lo, hi), _eval(fn, mid), it)


def grow_bracket(fn: Callable[[float], float], lo: float, hi: float) -> float:
    """Double ``hi`` until ``fn`` changes sign relative to ``fn(lo)``."""
    flo = _eval(fn, lo)
    for _ in range(MAX_DOUBLINGS):
        if (_eval(fn, hi) < 0) != (flo < 0):
            return hi
        hi *= 2.0
    raise BracketError(f"no sign change found after {MAX_DOUBLINGS} doublings")


# Named polynomials.  All take the SNR first so they can be partially applied.

def f(P: float, a: float) -> float:
    """``P a^3 + a^2 - a - 1``; its positive root switches the two ETW terms."""
    return P * a**3 + a * a - a - 1.0


def g(P: float, a: float) -> float:
    return (1.0 + P + a * P) * (2.0 + 1.0 / a)


def h(P: float, a: float) -> float:
    return 1.0 + a * P + 1.0 / a


def f1(P: float, a: float) -> float:
    return 2.0 * P * P * a**3 - 3.0 * P * a * a - 2.0 * a + 1.0


def f1_thm3(P: float, a: float) -> float:
    return 2.0 * P * P * a**3 - 9.0 * P * a * a - 6.0 * a + 3.0


def g1(P: float, a: float) -> float:
    return 8.0 * P * a**4 - 8.0 * a**3 - 27.0 * a - 9.0


def g2(P: float, a: float) -> float:
    return 18.0 * P * a**3 - (6.0 * P - 9.0) * a * a - (P - 6.0) * a + 1.0


def g3(P: float, a: float) -> float:
    return (a * P - 1.0) * (1.0 + 1.0 / (3.0 * a))


_NAMED = {"f": f, "g": g, "h": h, "f1": f1, "f1_thm3": f1_thm3,
          "g1": g1, "g2": g2, "g3": g3}


@dataclass(frozen=True)
class NamedFn:
    """One of the named helper functions with its SNR captured."""

    name: str
    P: float

    def __post_init__(self):
        if self.name not in _NAMED:
            raise DomainError(f"unknown function {self.name!r}; choose from {sorted(_NAMED)}")

    def __call__(self, a: float) -> float:
        return _NAMED[self.name](self.P, a)


def named(name: str, P: float) -> NamedFn:
    return NamedFn(name, _check_positive("P", P))


def find_a0(P: float, tol: float = DEFAULT_TOL) -> float:
    """Unique positive root of ``f``.

    ``f(0) = -1`` and ``f`` has a single positive critical point (a minimum),
    so the positive root is unique.  For ``P >= 1`` it lies in ``(0, 1]``
    because ``f(1) = P - 1``.
    """
    P = _check_positive("P", P)
    fn = partial(f, P)
    hi = 1.0 if P >= 1.0 else grow_bracket(fn, 0.0, 1.0)
    return bracketed_root(fn, 0.0, hi, tol).value


def a1_closed(P: float) -> float:
    """Smaller root of ``2P a^2 - (5P+2) a + 1 + P``.

    This is where the ETW sum-bound term meets the TDMA rate.
    """
    P = _check_positive("P", P)
    return (5.0 * P + 2.0 - math.sqrt(17.0 * P * P + 12.0 * P + 4.0)) / (4.0 * P)


def a2_closed(P: float) -> float:
    """As :func:`a1_closed`, with TDMA raised by half a bit."""
    P = _check_positive("P", P)
    return (13.0 * P + 6.0 - math.sqrt(161.0 * P * P + 148.0 * P + 36.0)) / (4.0 * P)


def _f_at_a1(P: float) -> float:
    return f(P, a1_closed(P))


def _f_at_a2(P: float) -> float:
    return f(P, a2_closed(P))


def compute_P_prime(tol: float = 1e-9) -> float:
    """Largest ``P >= 4`` with ``f(a1_closed(P)) < 0``.

    ``f(a1_closed(P))`` increases with ``P`` there, so the supremum is its
    single root, found on ``[4, 1e6]``.
    """
    root = bracketed_root(_f_at_a1, 4.0, 1e6, tol).value
    if not root > 100.0:
        raise RuntimeError(f"P' = {root} is not above 100; formula regression")
    return root


def compute_P_doubleprime(tol: float = 1e-9) -> float:
    """Largest ``P > 100`` with ``f(a2_closed(P)) < 0``, searched on ``[100, 1e8]``."""
    root = bracketed_root(_f_at_a2, 100.0, 1e8, tol).value
    if not root > 1000.0:
        raise RuntimeError(f"P'' = {root} is not above 1000; formula regression")
    return root


def g1_root(P: float, tol: float = DEFAULT_TOL) -> float:
    """Unique positive root of ``g1``, the switch point of the K=3 ETW approximation."""
    P = _check_positive("P", P)
    fn = partial(g1, P)
    hi = grow_bracket(fn, 0.0, 1.0)
    return bracketed_root(fn, 0.0, hi, tol).value
