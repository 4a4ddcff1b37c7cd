import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from icrates.channel import Channel2Asym, Channel2Sym, noisy_boundary, ian_tdma_crossover
from icrates.errors import DomainError
from icrates.numerics import find_a0
from icrates.rates2 import (
    EtwBranch,
    RateResult,
    etw_branch,
    etw_terms,
    ian_rate,
    p2p_noisy_closed_form,
    rate_sym_etw,
    rate_sym_ian,
    rate_sym_p2p,
    rate_sym_tdma2,
    region_vertices,
    sum_rate_p2p_asym,
)

# mpmath reference values (40 digits), rounded to 14 significant digits.
ETW_100_HALF = 3.6192023696625
ETW_100_ONE = 3.6180070959500
ETW_100_0005 = 6.0803734164640
TDMA_100 = 3.8255258455895
IAN_100_005 = 4.1429579538420


def sym(P, a):
    return Channel2Sym(P, a)


def test_ian_examples():
    assert rate_sym_ian(sym(1, 1)).value == pytest.approx(0.58496250072116, abs=1e-14)
    assert rate_sym_ian(sym(3, 1)).value == pytest.approx(0.80735492205760, abs=1e-14)
    assert rate_sym_ian(sym(100, 0.05)).value == pytest.approx(IAN_100_005, abs=1e-12)


def test_tdma_examples():
    assert rate_sym_tdma2(1).value == pytest.approx(math.log2(3) / 2, abs=1e-15)
    assert rate_sym_tdma2(100).value == pytest.approx(TDMA_100, abs=1e-12)


def test_p2p_noisy_picks_larger():
    r = rate_sym_p2p(sym(100, 0.05))
    assert r.value == pytest.approx(IAN_100_005, abs=1e-12)
    assert r.active_bound == "individual-IAN"
    r = rate_sym_p2p(sym(100, 0.1))
    assert r.active_bound == "TDMA"
    assert r.value == pytest.approx(TDMA_100, abs=1e-12)


def test_p2p_weak_is_tdma():
    r = rate_sym_p2p(sym(100, 0.5))
    assert r.value == pytest.approx(TDMA_100, abs=1e-12)
    assert r.active_bound == "TDMA"


def test_p2p_strong_and_very_strong():
    r = rate_sym_p2p(sym(100, 2))
    assert r.value == pytest.approx(0.5 * math.log2(301), abs=1e-14)
    assert r.scheme == "JointCapacity"
    r = rate_sym_p2p(sym(1, 5))
    assert r.value == 1.0 and r.active_bound == "individual"


def test_etw_examples():
    assert rate_sym_etw(sym(100, 0.5)).value == pytest.approx(ETW_100_HALF, abs=1e-12)
    assert rate_sym_etw(sym(100, 1)).value == pytest.approx(ETW_100_ONE, abs=1e-12)
    assert rate_sym_etw(sym(100, 0.005)).value == pytest.approx(ETW_100_0005, abs=1e-12)
    assert rate_sym_etw(sym(100, 0.005)).active_bound == "ETW-private"
    assert rate_sym_etw(sym(100, 0.05)).value == pytest.approx(math.log2(26) - 1, abs=1e-14)


def test_etw_terms_example():
    s, i = etw_terms(sym(100, 0.5))
    assert s == pytest.approx(ETW_100_HALF, abs=1e-12)
    assert i == pytest.approx(4.7279204545632, abs=1e-12)


def test_etw_rejects_strong():
    with pytest.raises(DomainError):
        rate_sym_etw(sym(100, 1.5))


@pytest.mark.parametrize("P", [2.5, 5, 10, 100, 1000, 1e5])
def test_etw_branch_consistency(P):
    a0 = find_a0(P)
    for a in np.geomspace(1e-4, 1, 301):
        ch = sym(P, float(a))
        label = rate_sym_etw(ch).active_bound
        branch = etw_branch(ch, a0)
        if a <= 1 / P:
            assert branch is EtwBranch.ALL_PRIVATE and label == "ETW-private"
            continue
        if abs(a - a0) < 1e-9:
            continue
        expected = EtwBranch.INDIVIDUAL_BOUND if a < a0 else EtwBranch.SUM_BOUND
        assert branch is expected
        assert label == ("ETW-common-individual" if a < a0 else "ETW-common-sum")


@pytest.mark.parametrize("P", [0.5, 2, 10, 100, 1e4])
def test_etw_continuous_at_breakpoints(P):
    def etw(a):
        return rate_sym_etw(sym(P, a)).value
    pts = [1 / P] if P > 1 else []
    if P > 2:
        pts.append(find_a0(P))
    for x in pts:
        d = 1e-9 * x
        assert abs(etw(x + d) - etw(x - d)) < 1e-6


@given(st.floats(min_value=1e-2, max_value=1e6), st.floats(min_value=0.0, max_value=1.0))
def test_weak_tdma_dominates_ian(P, t):
    nb = noisy_boundary(P)
    a = nb + t * (1 - nb)
    assume(a > nb)
    assert rate_sym_tdma2(P).value >= rate_sym_ian(sym(P, a)).value - 1e-12


@given(st.floats(min_value=0.1, max_value=1e4), st.floats(min_value=1e-6, max_value=1.0))
def test_noisy_closed_form_agrees(P, t):
    a = t * noisy_boundary(P)
    assume(a > 0)
    ch = sym(P, a)
    assert rate_sym_p2p(ch).value == pytest.approx(p2p_noisy_closed_form(P, a), abs=1e-12)
    assert rate_sym_ian(ch).value >= rate_sym_etw(ch).value - 1e-12


def test_noisy_closed_form_branches():
    c = ian_tdma_crossover(100)
    assert p2p_noisy_closed_form(100, c / 2) == ian_rate(100, c / 2)
    assert p2p_noisy_closed_form(100, 2 * c) == pytest.approx(TDMA_100, abs=1e-12)


def test_rate_result_rejects_bad_values():
    with pytest.raises(DomainError):
        RateResult(-1.0, "IAN", "x")
    with pytest.raises(DomainError):
        RateResult(math.nan, "IAN", "x")


# --- asymmetric sum rate ---------------------------------------------------

def test_asym_direct_limited():
    r = sum_rate_p2p_asym(Channel2Asym(10, 5, 0.5, 2))
    assert r.value == pytest.approx(4.5324950808270, abs=1e-12)
    assert r.active_bound == "mixed-direct-limited"


def test_asym_noisy_and_weak():
    r = sum_rate_p2p_asym(Channel2Asym(1, 1, 0.3, 0.3))
    assert r.value == pytest.approx(1.6462444758318, abs=1e-12)
    assert r.active_bound == "noisy-sum"
    r = sum_rate_p2p_asym(Channel2Asym(1, 1, 0.8, 0.8))
    assert r.value == pytest.approx(1.4854268271702, abs=1e-12)
    assert r.active_bound == "weak-sum"


def test_asym_symmetric_noisy_reduces():
    for P, a in [(1, 0.3), (10, 0.1), (100, 0.05)]:
        r = sum_rate_p2p_asym(Channel2Asym(P, P, a, a))
        assert r.value == pytest.approx(2 * ian_rate(P, a), abs=1e-12)


def test_asym_strong_rejected():
    with pytest.raises(DomainError):
        sum_rate_p2p_asym(Channel2Asym(2, 1, 1.5, 1.5))


# --- regions ---------------------------------------------------------------

def test_c0_square():
    v = region_vertices(sym(1, 0.5), "C0").vertices
    s = 0.73696559416621
    assert len(v) == 4
    assert v[2] == pytest.approx((s, s), abs=1e-13)


def test_c1_square_when_sum_loose():
    v = region_vertices(sym(1, 3), "C1").vertices
    assert len(v) == 4
    assert v[2] == pytest.approx((1.0, 1.0))


def test_c1_pentagon():
    v = region_vertices(sym(1, 0.5), "C1").vertices
    assert len(v) == 5
    assert v[2] == pytest.approx((1.0, math.log2(2.5) - 1.0))


def test_capacity_in_very_strong_is_c1prime():
    ch = sym(1, 5)
    assert region_vertices(ch, "Capacity").vertices == region_vertices(ch, "C1prime").vertices


def test_capacity_noisy_union_nonconvex():
    v = region_vertices(sym(100, 0.01), "Capacity").vertices
    assert len(v) == 8


def test_region_unknown():
    with pytest.raises(DomainError):
        region_vertices(sym(1, 1), "C2")


def _shoelace(v):
    return 0.5 * sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(v, v[1:] + v[:1]))


@given(st.floats(min_value=1e-2, max_value=1e5), st.floats(min_value=1e-4, max_value=1e3),
       st.sampled_from(["C0", "C1", "C1prime", "Capacity"]))
def test_region_symmetric_and_ccw(P, a, name):
    v = list(region_vertices(sym(P, a), name).vertices)
    assert v[0] == (0.0, 0.0)
    mirrored = {(round(y, 12), round(x, 12)) for x, y in v}
    assert mirrored == {(round(x, 12), round(y, 12)) for x, y in v}
    assert _shoelace(v) >= 0


@given(st.floats(min_value=1e-2, max_value=1e5), st.floats(min_value=1e-4, max_value=1e3))
def test_region_nesting(P, a):
    ch = sym(P, a)
    c0, c1, c1p, cap = (region_vertices(ch, r).vertices for r in ("C0", "C1", "C1prime", "Capacity"))
    single = math.log2(1 + P)
    for x, y in c1:
        assert x <= single + 1e-12 and y <= single + 1e-12
    assert max(x for x, _ in c1p) == pytest.approx(single)
    area = _shoelace(list(cap))
    assert area >= _shoelace(list(c1)) - 1e-9
    if a <= noisy_boundary(P):
        assert area >= _shoelace(list(c0)) - 1e-9
    assert area <= _shoelace(list(c1p)) + 1e-9
