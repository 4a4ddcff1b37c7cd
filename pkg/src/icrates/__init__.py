"""Achievable rates of simple transmission schemes on Gaussian interference channels.

Point-to-point codes (treating interference as noise or decoding it),
TDMA and the ETW common/private splitting scheme are compared on the
two-user symmetric and asymmetric channels and on the K-user symmetric
channel.
"""

from .channel import (
    Channel2Asym,
    Channel2Sym,
    ChannelKSym,
    Regime2,
    RegimeAsym,
    RegimeK,
    classify2asym,
    classify2sym,
    classifyKsym,
    ian_tdma_crossover,
    mi_gaussian,
    noisy_boundary,
)
from .errors import BracketError, DomainError, ResourceError
from .numerics import (
    a1_closed,
    a2_closed,
    bracketed_root,
    compute_P_doubleprime,
    compute_P_prime,
    find_a0,
    g1_root,
)
from .rates2 import (
    EtwBranch,
    RateResult,
    RegionVertices,
    etw_branch,
    rate_sym_etw,
    rate_sym_ian,
    rate_sym_p2p,
    rate_sym_tdma2,
    region_vertices,
    sum_rate_p2p_asym,
)
from .rates_k import (
    DecodeSubset,
    EtwKSplit,
    approx_etwK,
    approx_tdma,
    rate_sym_etwK_closed,
    rate_sym_etwK_oracle,
    rate_sym_p2p_combinedK,
    rate_sym_p2pK_closed,
    rate_sym_p2pK_oracle,
    rate_sym_subset,
    rate_sym_subset_twobound,
    rate_sym_tdmaK,
)
from .verify import VerifyReport, run_suites

__version__ = "0.1.0"
