"""Contextuality-by-Default analysis of systems of binary random variables.

Closed-form measures for cyclic systems are paired with an independent
linear-programming route over couplings; each checks the other.
"""
from .coupling import Mode, build_cyclic_program, build_generic_program, maximal_coupling
from .cyclic import (
    AnalysisReport,
    analyze,
    cntx,
    compatibility,
    delta0,
    delta_min_closed,
    delta_min_lp,
    is_noncontextual,
    reduce_order,
    special_cases,
)
from .generic import analyze_generic
from .oracle import cross_validate, verify_coupling
from .signed_sums import s_even, s_odd, s_parity_exhaustive
from .simplex import LpProblem, LpSolution, solve, verify_certificate
from .systems import (
    Bunch,
    CyclicSystem,
    GenericSystem,
    MarginalSummary,
    PairDistribution,
    from_expectations,
    marginal_summary,
    relabel_permutation,
    validate_system,
)

__version__ = "0.1.0"

__all__ = [
    "Mode",
    "build_cyclic_program",
    "build_generic_program",
    "maximal_coupling",
    "AnalysisReport",
    "analyze",
    "cntx",
    "compatibility",
    "delta0",
    "delta_min_closed",
    "delta_min_lp",
    "is_noncontextual",
    "reduce_order",
    "special_cases",
    "analyze_generic",
    "cross_validate",
    "verify_coupling",
    "s_even",
    "s_odd",
    "s_parity_exhaustive",
    "LpProblem",
    "LpSolution",
    "solve",
    "verify_certificate",
    "Bunch",
    "CyclicSystem",
    "GenericSystem",
    "MarginalSummary",
    "PairDistribution",
    "from_expectations",
    "marginal_summary",
    "relabel_permutation",
    "validate_system",
]
