"""LP-only analysis of arbitrary binary systems (Specker-style bunches)."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .coupling import Mode, build_generic_program
from .cyclic import VERDICT_TOL, AnalysisReport, analyze
from .simplex import solve_with_retry
from .systems import GenericSystem, generic_to_cyclic

# dense LP cap for generic systems, in variables
MAX_GENERIC_LP_VARIABLES = 16


@dataclass
class GenericReport:
    variables: int
    connections: int
    delta0: float
    delta_min_lp: float | None
    cntx: float | None
    contextual: bool | None
    certificates: dict[str, dict] = field(default_factory=dict)
    cyclic: AnalysisReport | None = None
    notes: list[str] = field(default_factory=list)
    tolerance: float = VERDICT_TOL

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GenericReport":
        data = dict(data)
        if data.get("cyclic") is not None:
            data["cyclic"] = AnalysisReport.from_dict(data["cyclic"])
        return cls(**data)


def generic_delta0(system: GenericSystem) -> float:
    return 0.5 * sum(abs(system.mean(a) - system.mean(b)) for a, b in system.connections)


def analyze_generic(system: GenericSystem, lp: bool = True, tol: float = VERDICT_TOL) -> GenericReport:
    k = len(system.variables)
    report = GenericReport(
        variables=k,
        connections=len(system.connections),
        delta0=generic_delta0(system),
        delta_min_lp=None,
        cntx=None,
        contextual=None,
        tolerance=tol,
    )
    cyclic = generic_to_cyclic(system)
    if cyclic is not None:
        report.cyclic = analyze(cyclic, lp=lp, tol=tol)
        report.notes.append(f"system is cyclic of rank {cyclic.n}; closed forms apply")

    if not lp:
        report.notes.append("LP route disabled")
    elif k > MAX_GENERIC_LP_VARIABLES:
        report.notes.append(f"LP route skipped: {k} variables exceeds dense LP limit {MAX_GENERIC_LP_VARIABLES}")
    else:
        minimum, nudged = solve_with_retry(build_generic_program(system, Mode.MINIMIZE_MISMATCH).problem)
        maximal, nudged2 = solve_with_retry(build_generic_program(system, Mode.MAXIMAL_CONNECTIONS).problem)
        report.delta_min_lp = minimum.objective
        degree = minimum.objective - report.delta0
        report.cntx = 0.0 if -1e-12 < degree < 0.0 else degree
        report.contextual = not maximal.optimal
        report.certificates["delta_min"] = minimum.to_dict()
        report.certificates["maximal_connections"] = maximal.to_dict()
        if nudged or nudged2:
            report.notes.append("LP retried with rhs perturbation 1e-12")
    return report
