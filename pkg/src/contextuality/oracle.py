"""Independent re-verification of analysis results.

Nothing here calls the closed-form measures or the simplex tableau.  Values
are re-derived from raw pmfs and raw atom vectors by direct summation, signed
sums come from exhaustive enumeration, and LP answers are trusted only through
their certificates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .coupling import Mode, build_cyclic_program, build_generic_program, maximal_coupling
from .cyclic import VERDICT_TOL, AnalysisReport, analyze
from .errors import DimensionMismatch
from .signed_sums import s_parity_exhaustive
from .simplex import LpSolution, Status, verify_certificate
from .systems import CyclicSystem, GenericSystem, generic_to_cyclic

COUPLING_TOL = 1e-8
DELTA_TOL = 1e-7
SIGNED_SUM_TOL = 1e-12


@dataclass(frozen=True)
class OracleVerdict:
    subject: str
    claim: Any
    independent: Any
    agreement: bool
    discrepancy: float
    tolerance: float = 0.0

    def __str__(self):
        mark = "ok " if self.agreement else "BAD"
        return f"[{mark}] {self.subject}: claim={self.claim!r} independent={self.independent!r}"


def _numeric(subject: str, claim: float, independent: float, tol: float) -> OracleVerdict:
    gap = abs(claim - independent)
    return OracleVerdict(subject, claim, independent, gap <= tol, gap, tol)


def _boolean(subject: str, claim: bool, independent: bool) -> OracleVerdict:
    agree = bool(claim) == bool(independent)
    return OracleVerdict(subject, bool(claim), bool(independent), agree, 0.0 if agree else 1.0)


def _system_layout(system: CyclicSystem | GenericSystem):
    """Variable names, bunch list as (names, pmf) and connection list."""
    if isinstance(system, CyclicSystem):
        n = system.n
        names = [f"V{i}" for i in range(1, n + 1)] + [f"W{i}" for i in range(1, n + 1)]
        bunches = [((f"V{i}", f"W{i % n + 1}"), system.pairs[i - 1].as_tuple()) for i in range(1, n + 1)]
        connections = [(f"V{i}", f"W{i}") for i in range(1, n + 1)]
    else:
        names = [v for b in system.bunches for v in b.variables]
        bunches = [(b.variables, b.pmf) for b in system.bunches]
        connections = list(system.connections)
    return names, bunches, connections


def _decode(index: int, width: int) -> list[int]:
    """Outcome of atom ``index``: binary digits, most significant first, 0 -> +1, 1 -> -1."""
    digits = []
    for _ in range(width):
        index, bit = divmod(index, 2)
        digits.append(-1 if bit else 1)
    return digits[::-1]


def _outcome_index(values: Sequence[int]) -> int:
    index = 0
    for v in values:
        index = 2 * index + (0 if v > 0 else 1)
    return index


def verify_coupling(system: CyclicSystem | GenericSystem, atoms: Sequence[float],
                    connection_targets: Sequence[Sequence[float]] | None = None,
                    tol: float = COUPLING_TOL) -> OracleVerdict:
    """Does ``atoms`` couple the system, and (optionally) hit the claimed connection pmfs?

    The independent value is the largest discrepancy found; the verdict also
    records the total connection mismatch of the coupling in its subject.
    """
    names, bunches, connections = _system_layout(system)
    atoms = np.asarray(atoms, dtype=float)
    if atoms.size != 2 ** len(names):
        raise DimensionMismatch(f"{atoms.size} atoms for {len(names)} variables")
    position = {name: k for k, name in enumerate(names)}

    bunch_sums = [[0.0] * (2 ** len(vs)) for vs, _ in bunches]
    connection_sums = [[0.0] * 4 for _ in connections]
    mismatch = 0.0
    total = 0.0
    worst = max(0.0, -float(atoms.min()))
    for index in np.flatnonzero(atoms):
        mass = float(atoms[index])
        outcome = _decode(int(index), len(names))
        total += mass
        for k, (vs, _) in enumerate(bunches):
            bunch_sums[k][_outcome_index([outcome[position[v]] for v in vs])] += mass
        for k, (a, b) in enumerate(connections):
            x, y = outcome[position[a]], outcome[position[b]]
            connection_sums[k][_outcome_index((x, y))] += mass
            if x != y:
                mismatch += mass

    worst = max(worst, abs(total - 1.0))
    for k, (_, pmf) in enumerate(bunches):
        worst = max(worst, max(abs(s - t) for s, t in zip(bunch_sums[k], pmf)))
    if connection_targets is not None:
        for sums, target in zip(connection_sums, connection_targets):
            worst = max(worst, max(abs(s - t) for s, t in zip(sums, target)))
    return OracleVerdict(
        f"coupling (mismatch {mismatch:.12g})", "reproduces bunches", worst, worst <= tol, worst, tol
    )


def coupling_mismatch(system: CyclicSystem | GenericSystem, atoms: Sequence[float]) -> float:
    """Total probability that connected variables differ, summed directly from atoms."""
    names, _, connections = _system_layout(system)
    position = {name: k for k, name in enumerate(names)}
    atoms = np.asarray(atoms, dtype=float)
    out = 0.0
    for index in np.flatnonzero(atoms):
        outcome = _decode(int(index), len(names))
        out += float(atoms[index]) * sum(outcome[position[a]] != outcome[position[b]] for a, b in connections)
    return out


def _raw_expectations(system: CyclicSystem):
    """<V_i>, <W_i>, <V_i W_i+1> straight from the pmfs, independent of marginal_summary."""
    n = system.n
    v, w, vw = [0.0] * n, [0.0] * n, [0.0] * n
    for i, pair in enumerate(system.pairs):
        for (x, y), mass in zip(((1, 1), (1, -1), (-1, 1), (-1, -1)), pair.as_tuple()):
            v[i] += x * mass
            w[(i + 1) % n] += y * mass
            vw[i] += x * y * mass
    return v, w, vw


def _maximal_targets(v: Sequence[float], w: Sequence[float]) -> list[tuple[float, ...]]:
    targets = []
    for a, b in zip(v, w):
        p = min(max((1 + a) / 2, 0.0), 1.0)
        q = min(max((1 + b) / 2, 0.0), 1.0)
        targets.append(maximal_coupling(p, q).as_tuple())
    return targets


def atoms_from_certificate(certificate: Mapping[str, Any]) -> np.ndarray | None:
    atoms = certificate.get("atoms")
    if atoms is None:
        return None
    if isinstance(atoms, dict):
        x = np.zeros(int(certificate["atom_count"]))
        for k, value in atoms.items():
            x[int(k)] = value
        return x
    return np.asarray(atoms, dtype=float)


def solution_from_certificate(certificate: Mapping[str, Any]) -> LpSolution:
    status = Status(certificate["status"])
    objective = certificate.get("objective")
    return LpSolution(
        status,
        float("nan") if objective is None else float(objective),
        x=atoms_from_certificate(certificate),
        dual=None if certificate.get("dual") is None else np.asarray(certificate["dual"]),
        ray=None if certificate.get("ray") is None else np.asarray(certificate["ray"]),
    )


def _special_case_independent(system: CyclicSystem, v, w, vw, tol: float) -> bool | None:
    """Classical inequality evaluated from raw expectations, or None if it does not apply."""
    n = system.n
    if any(abs(a - b) > 1e-9 for a, b in zip(v, w)):
        return None
    if n == 4:
        signs = ((1, 1, 1, -1), (1, 1, -1, 1), (1, -1, 1, 1), (-1, 1, 1, 1))
        return all(abs(sum(s * c for s, c in zip(row, vw))) <= 2 + 2 * tol for row in signs)
    if n == 3:
        total = sum(vw)
        return -1 - 2 * tol <= total <= 1 + 2 * min(vw) + 2 * tol
    if n == 5:
        if max(pair.pp for pair in system.pairs) > 1e-9:
            return None
        return sum((1 + a) / 2 for a in v) <= 2 + tol
    return None


def cross_validate(system: CyclicSystem, report: AnalysisReport | None = None,
                   tol: float = VERDICT_TOL) -> list[OracleVerdict]:
    """One verdict per redundant route in ``report`` (computed fresh when omitted)."""
    if report is None:
        report = analyze(system, tol=tol)
    n = system.n
    v, w, vw = _raw_expectations(system)
    verdicts = []

    verdicts.append(_numeric("s_odd closed vs exhaustive", report.s_odd,
                             s_parity_exhaustive(vw, "odd"), SIGNED_SUM_TOL * n))
    delta0 = 0.5 * sum(abs(a - b) for a, b in zip(v, w))
    verdicts.append(_numeric("Delta0", report.delta0, delta0, 1e-12))

    master_values = list(vw) + [1 - abs(a - b) for a, b in zip(v, w)]
    master_sum = s_parity_exhaustive(master_values, "odd")
    master_ok = master_sum <= 2 * n - 2 + 2 * tol
    # LP feasibility has no user threshold, so it is compared at solver precision
    strict_ok = master_sum <= 2 * n - 2 + 2 * min(tol, VERDICT_TOL)
    verdicts.append(_boolean("criterion closed vs master", not report.contextual, master_ok))
    verdicts.append(_boolean("CNTX = 0 iff noncontextual (closed)",
                             report.cntx <= tol, report.criteria["closed"].noncontextual))

    special = _special_case_independent(system, v, w, vw, tol)
    if special is not None:
        verdicts.append(_boolean(f"criterion vs {report.special_cases.get('kind')} inequality",
                                 not report.contextual, special))

    minimum = report.certificates.get("delta_min")
    if minimum is not None:
        atoms = atoms_from_certificate(minimum)
        verdicts.append(verify_coupling(system, atoms))
        verdicts.append(_numeric("Delta_min closed vs LP coupling", report.delta_min_closed,
                                 coupling_mismatch(system, atoms), DELTA_TOL))
        program = build_cyclic_program(system, Mode.MINIMIZE_MISMATCH)
        ok = verify_certificate(program.problem, solution_from_certificate(minimum))
        verdicts.append(_boolean("Delta_min LP certificate", True, ok))

    maximal = report.certificates.get("maximal_connections")
    if maximal is not None:
        solution = solution_from_certificate(maximal)
        verdicts.append(_boolean("criterion master vs LP feasibility", strict_ok, solution.optimal))
        program = build_cyclic_program(system, Mode.MAXIMAL_CONNECTIONS)
        verdicts.append(_boolean("maximal-connections LP certificate", True,
                                 verify_certificate(program.problem, solution)))
        if solution.optimal:
            verdicts.append(verify_coupling(system, solution.x, _maximal_targets(v, w)))
    return verdicts


def disagreements(verdicts: Sequence[OracleVerdict]) -> list[OracleVerdict]:
    return [v for v in verdicts if not v.agreement]


def cross_validate_generic(system: GenericSystem, report) -> list[OracleVerdict]:
    """Certificate and coupling checks for a :class:`~contextuality.generic.GenericReport`."""
    verdicts = []
    means = {name: b.mean(name) for b in system.bunches for name in b.variables}
    delta0 = 0.5 * sum(abs(means[a] - means[b]) for a, b in system.connections)
    verdicts.append(_numeric("Delta0", report.delta0, delta0, 1e-12))
    minimum = report.certificates.get("delta_min")
    if minimum is not None:
        atoms = atoms_from_certificate(minimum)
        verdicts.append(verify_coupling(system, atoms))
        verdicts.append(_numeric("Delta_min LP vs coupling", report.delta_min_lp,
                                 coupling_mismatch(system, atoms), DELTA_TOL))
        program = build_generic_program(system, Mode.MINIMIZE_MISMATCH)
        verdicts.append(_boolean("Delta_min LP certificate", True,
                                 verify_certificate(program.problem, solution_from_certificate(minimum))))
    maximal = report.certificates.get("maximal_connections")
    if maximal is not None:
        solution = solution_from_certificate(maximal)
        program = build_generic_program(system, Mode.MAXIMAL_CONNECTIONS)
        verdicts.append(_boolean("maximal-connections LP certificate", True,
                                 verify_certificate(program.problem, solution)))
        verdicts.append(_boolean("CNTX = 0 iff maximal coupling exists",
                                 report.cntx <= min(report.tolerance, VERDICT_TOL), solution.optimal))
    if report.cyclic is not None:
        cyclic = generic_to_cyclic(system)
        verdicts.extend(cross_validate(cyclic, report.cyclic, report.tolerance))
        if report.delta_min_lp is not None:
            verdicts.append(_numeric("Delta_min generic LP vs cyclic closed form", report.delta_min_lp,
                                     report.cyclic.delta_min_closed, DELTA_TOL))
    return verdicts
