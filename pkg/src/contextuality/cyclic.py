"""Measures and criteria of contextuality for cyclic systems of rank n.

All functions assume successor pairing: pair i is (V_i, W_{i+1}) and the
connections are (V_i, W_i).  Non-successor pairings are canonicalized by
:func:`contextuality.systems.relabel_permutation` at ingestion.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Literal, Sequence

from .coupling import Mode, build_cyclic_program
from .errors import MarginalMismatch, PreconditionFailed
from .signed_sums import s_even, s_odd
from .simplex import LpSolution, solve_with_retry
from .systems import SUM_TOL, CyclicSystem, PairDistribution, marginal_summary

VERDICT_TOL = 1e-9
# dense tableau with 2**(2n) columns stays practical up to n = 8 (65,536 atoms)
MAX_LP_RANK = 8
# closed forms beyond the proven ranks rely on the cyclic-system conjecture
PROVEN_RANKS = (3, 4, 5)

Method = Literal["closed", "master", "lp"]


def delta0(system: CyclicSystem) -> float:
    """Half the total absolute difference between <V_i> and <W_i>."""
    s = marginal_summary(system)
    return 0.5 * sum(abs(v - w) for v, w in zip(s.v, s.w))


def delta_min_closed(system: CyclicSystem) -> float:
    s = marginal_summary(system)
    d0 = 0.5 * sum(abs(v - w) for v, w in zip(s.v, s.w))
    return 0.5 * max(2.0 * d0, s_odd(s.vw) - system.n + 2)


def solve_delta_min(system: CyclicSystem) -> tuple[LpSolution, float]:
    """Minimum-mismatch coupling LP; returns the solution and any rhs perturbation used."""
    program = build_cyclic_program(system, Mode.MINIMIZE_MISMATCH)
    return solve_with_retry(program.problem)


def delta_min_lp(system: CyclicSystem) -> float:
    solution, _ = solve_delta_min(system)
    return solution.objective


def cntx(system: CyclicSystem) -> float:
    value = delta_min_closed(system) - delta0(system)
    if -1e-12 < value < 0.0:
        value = 0.0
    return value


def solve_maximal(system: CyclicSystem) -> tuple[LpSolution, float]:
    program = build_cyclic_program(system, Mode.MAXIMAL_CONNECTIONS)
    return solve_with_retry(program.problem)


def is_noncontextual(system: CyclicSystem, method: Method = "closed",
                     tol: float = VERDICT_TOL) -> tuple[bool, float]:
    """Verdict and signed slack of the chosen criterion (negative slack = violated).

    ``closed`` and ``master`` slacks are in units of signed sums, where a
    violation of 2*tol corresponds to CNTX = tol.  The ``lp`` slack is minus
    the phase-I infeasibility of the maximal-connections program.
    """
    s = marginal_summary(system)
    n = system.n
    if method == "closed":
        bound = n - 2 + sum(abs(v - w) for v, w in zip(s.v, s.w))
        margin = bound - s_odd(s.vw)
        return margin >= -2.0 * tol, margin
    if method == "master":
        values = list(s.vw) + [1.0 - abs(v - w) for v, w in zip(s.v, s.w)]
        margin = 2 * n - 2 - s_odd(values)
        return margin >= -2.0 * tol, margin
    if method == "lp":
        solution, _ = solve_maximal(system)
        return solution.optimal, -solution.infeasibility if solution.infeasibility else 0.0
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class CompatibilityResult:
    compatible: bool
    s_odd: float
    bound: float
    # the same test split by which half carries the odd number of minus signs
    odd_bunches_even_connections: float
    even_bunches_odd_connections: float

    @property
    def margin(self) -> float:
        return self.bound - self.s_odd


def _check_connection_marginals(system: CyclicSystem, connections: Sequence[PairDistribution]) -> None:
    s = marginal_summary(system)
    if len(connections) != system.n:
        raise MarginalMismatch(f"expected {system.n} connection couplings, got {len(connections)}")
    for i, pair in enumerate(connections, start=1):
        dv = abs(pair.mean_first - s.v[i - 1])
        dw = abs(pair.mean_second - s.w[i - 1])
        if dv > SUM_TOL or dw > SUM_TOL:
            raise MarginalMismatch(
                f"connection {i}: marginals ({pair.mean_first:.12g}, {pair.mean_second:.12g}) "
                f"differ from <V{i}>={s.v[i - 1]:.12g}, <W{i}>={s.w[i - 1]:.12g}"
            )


def compatibility(system: CyclicSystem, connections: Sequence[PairDistribution],
                  tol: float = VERDICT_TOL) -> CompatibilityResult:
    """Can the given connection couplings coexist with the observed pairs in one coupling?"""
    _check_connection_marginals(system, connections)
    vw = list(marginal_summary(system).vw)
    cw = [pair.product_mean for pair in connections]
    bound = 2 * system.n - 2
    value = s_odd(vw + cw)
    return CompatibilityResult(
        compatible=value <= bound + 2.0 * tol,
        s_odd=value,
        bound=float(bound),
        odd_bunches_even_connections=s_odd(vw) + s_even(cw),
        even_bunches_odd_connections=s_even(vw) + s_odd(cw),
    )


def compatibility_lp(system: CyclicSystem, connections: Sequence[PairDistribution]) -> LpSolution:
    _check_connection_marginals(system, connections)
    program = build_cyclic_program(system, Mode.FIX_CONNECTIONS, connections)
    solution, _ = solve_with_retry(program.problem)
    return solution


def reduce_order(system: CyclicSystem, tol: float = SUM_TOL) -> CyclicSystem:
    """Drop V_n, W_n from a system where V_n = W_1 almost surely and W_n ~ V_n.

    Pair n-1, formerly (V_{n-1}, W_n), becomes (V_{n-1}, W_1) with the same pmf.
    """
    n = system.n
    if n < 4:
        raise PreconditionFailed(f"rank {n} cannot be reduced below 3")
    last = system.pair(n)
    if abs(last.product_mean - 1.0) > tol:
        raise PreconditionFailed(f"<V{n}W1> = {last.product_mean:.12g}, reduction needs 1")
    w_n = system.pair(n - 1).mean_second
    if abs(w_n - last.mean_first) > tol:
        raise PreconditionFailed(f"<W{n}> = {w_n:.12g} differs from <V{n}> = {last.mean_first:.12g}")
    return CyclicSystem(n - 1, system.pairs[: n - 1], labels=system.labels[: n - 1])


def _consistently_connected(system: CyclicSystem) -> bool:
    s = marginal_summary(system)
    return all(abs(v - w) <= SUM_TOL for v, w in zip(s.v, s.w))


def special_cases(system: CyclicSystem, tol: float = VERDICT_TOL) -> dict:
    """Classical inequality for the rank, when its preconditions hold.

    rank 5 with consistent connectedness and KCBS exclusion: sum of P[V_i=1] <= 2;
    rank 4 consistently connected: the four CHSH combinations lie in [-2, 2];
    rank 3 consistently connected: the Suppes-Zanotti two-sided bound.
    """
    n = system.n
    cc = _consistently_connected(system)
    s = marginal_summary(system)
    if n == 5:
        out = {"kind": "kcbs", "applicable": False}
        if not cc:
            out["reason"] = "not consistently connected"
            return out
        worst = max(pair.pp for pair in system.pairs)
        if worst > SUM_TOL:
            out["reason"] = f"KCBS exclusion fails: max P[V_i=1, W_i+1=1] = {worst:.3g}"
            return out
        total = sum((1.0 + v) / 2.0 for v in s.v)
        out.update(applicable=True, sum_p=total, bound=2.0, noncontextual=total <= 2.0 + tol)
        return out
    if n == 4:
        out = {"kind": "chsh", "applicable": False}
        if not cc:
            out["reason"] = "not consistently connected"
            return out
        c1, c2, c3, c4 = s.vw
        combos = [c1 + c2 + c3 - c4, c1 + c2 - c3 + c4, c1 - c2 + c3 + c4, -c1 + c2 + c3 + c4]
        worst = max(abs(x) for x in combos)
        out.update(
            applicable=True, combinations=combos, max_abs=worst, bound=2.0,
            noncontextual=worst <= 2.0 + 2.0 * tol,
        )
        return out
    if n == 3:
        out = {"kind": "suppes-zanotti", "applicable": False}
        if not cc:
            out["reason"] = "not consistently connected"
            return out
        total = sum(s.vw)
        upper = 1.0 + 2.0 * min(s.vw)
        out.update(
            applicable=True, total=total, lower=-1.0, upper=upper,
            noncontextual=-1.0 - 2.0 * tol <= total <= upper + 2.0 * tol,
        )
        return out
    return {"kind": None, "applicable": False, "reason": f"no classical special case for rank {n}"}


@dataclass
class Criterion:
    noncontextual: bool
    margin: float


@dataclass
class AnalysisReport:
    n: int
    delta0: float
    delta_min_closed: float
    delta_min_lp: float | None
    cntx: float
    contextual: bool
    s_odd: float
    consistently_connected: bool
    conjectural: bool
    criteria: dict[str, Criterion]
    special_cases: dict
    certificates: dict[str, dict] = field(default_factory=dict)
    labels: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    tolerance: float = VERDICT_TOL

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        data = dict(data)
        data["criteria"] = {k: Criterion(**v) for k, v in data["criteria"].items()}
        return cls(**data)


def analyze(system: CyclicSystem, lp: bool = True, tol: float = VERDICT_TOL) -> AnalysisReport:
    """Full report: closed forms always, LP route when requested and small enough."""
    n = system.n
    summary = marginal_summary(system)
    d0 = delta0(system)
    closed = delta_min_closed(system)
    degree = cntx(system)
    criteria = {
        method: Criterion(*is_noncontextual(system, method, tol)) for method in ("closed", "master")
    }
    report = AnalysisReport(
        n=n,
        delta0=d0,
        delta_min_closed=closed,
        delta_min_lp=None,
        cntx=degree,
        contextual=degree > tol,
        s_odd=s_odd(summary.vw),
        consistently_connected=_consistently_connected(system),
        conjectural=n not in PROVEN_RANKS,
        criteria=criteria,
        special_cases=special_cases(system, tol),
        labels=list(system.labels),
        tolerance=tol,
    )
    if report.conjectural:
        report.notes.append(f"closed form for rank {n} is conjectural; LP route is the check")

    if not lp:
        report.notes.append("LP route disabled")
    elif n > MAX_LP_RANK:
        report.notes.append(f"LP route skipped: rank {n} exceeds dense LP limit {MAX_LP_RANK}")
    else:
        minimum, nudged = solve_delta_min(system)
        report.delta_min_lp = minimum.objective
        report.certificates["delta_min"] = minimum.to_dict()
        if nudged:
            report.notes.append(f"Delta_min LP retried with rhs perturbation {nudged:g}")
        maximal, nudged = solve_maximal(system)
        report.criteria["lp"] = Criterion(maximal.optimal, -maximal.infeasibility if maximal.infeasibility else 0.0)
        report.certificates["maximal_connections"] = maximal.to_dict()
        if nudged:
            report.notes.append(f"maximal-connections LP retried with rhs perturbation {nudged:g}")
    return report
