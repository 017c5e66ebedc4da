"""Maximal couplings of binary pairs and coupling linear programs.

A coupling of a system is a pmf over "atoms", the joint +/-1 outcomes of every
variable in the system.  Atoms are ordered lexicographically with +1 before -1
over the system's variable order, which for a cyclic system of rank n is
``V_1..V_n, W_1..W_n``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import OutOfRange, TooManyVariables
from .simplex import LpProblem
from .systems import SIGNS, CyclicSystem, GenericSystem, PairDistribution, marginal_summary

MAX_COUPLING_VARIABLES = 24


class Mode(str, enum.Enum):
    FEASIBILITY = "feasibility"
    MINIMIZE_MISMATCH = "minimize-mismatch"
    FIX_CONNECTIONS = "fix-connections"
    MAXIMAL_CONNECTIONS = "maximal-connections"


@dataclass(frozen=True, eq=False)
class CouplingProgram:
    variables: tuple[str, ...]
    problem: LpProblem
    row_labels: tuple[str, ...]
    mode: Mode

    @property
    def atom_count(self) -> int:
        return 2 ** len(self.variables)

    def count_rows(self, kind: str) -> int:
        return sum(label.split(":", 1)[0] == kind for label in self.row_labels)

    def atom_outcome(self, index: int) -> dict[str, int]:
        k = len(self.variables)
        return {
            name: 1 - 2 * ((index >> (k - 1 - j)) & 1) for j, name in enumerate(self.variables)
        }


def maximal_coupling(p: float, q: float) -> PairDistribution:
    """Coupling of X, Y with P[X=1]=p, P[Y=1]=q maximising P[X=Y]."""
    for name, value in (("p", p), ("q", q)):
        if not 0.0 <= value <= 1.0:
            raise OutOfRange(f"{name} = {value} is not a probability")
    if p >= q:
        return PairDistribution(q, p - q, 0.0, 1.0 - p)
    return PairDistribution(p, 0.0, q - p, 1.0 - q)


def maximal_coupling_from_means(mean_x: float, mean_y: float) -> PairDistribution:
    p = min(max((1.0 + mean_x) / 2.0, 0.0), 1.0)
    q = min(max((1.0 + mean_y) / 2.0, 0.0), 1.0)
    return maximal_coupling(p, q)


def agreement(pair: PairDistribution) -> float:
    return pair.pp + pair.mm


class _Builder:
    def __init__(self, variables: Sequence[str], mode: Mode):
        k = len(variables)
        if k > MAX_COUPLING_VARIABLES:
            raise TooManyVariables(f"{k} variables exceeds the cap of {MAX_COUPLING_VARIABLES}")
        self.variables = tuple(variables)
        self.mode = mode
        self.position = {name: j for j, name in enumerate(self.variables)}
        index = np.arange(2**k)
        # minus[:, j] is True where variable j takes -1
        self.minus = ((index[:, None] >> np.arange(k)[::-1]) & 1).astype(bool)
        self.rows: list[np.ndarray] = []
        self.rhs: list[float] = []
        self.labels: list[str] = []
        self.cost = np.zeros(2**k)

    def marginal(self, names: Sequence[str], pmf: Sequence[float], kind: str, tag: str) -> None:
        cols = [self.position[name] for name in names]
        for outcome, target in zip(itertools.product(SIGNS, repeat=len(names)), pmf):
            mask = np.ones(self.minus.shape[0], dtype=bool)
            for j, value in zip(cols, outcome):
                mask &= self.minus[:, j] == (value < 0)
            self.rows.append(mask.astype(float))
            self.rhs.append(float(target))
            signs = "".join("+" if v > 0 else "-" for v in outcome)
            self.labels.append(f"{kind}:{tag}:{signs}")

    def mismatch(self, a: str, b: str) -> None:
        self.cost += self.minus[:, self.position[a]] != self.minus[:, self.position[b]]

    def normalization(self) -> None:
        self.rows.append(np.ones(self.minus.shape[0]))
        self.rhs.append(1.0)
        self.labels.append("normalization:all")

    def build(self) -> CouplingProgram:
        problem = LpProblem(np.vstack(self.rows), np.asarray(self.rhs), self.cost)
        return CouplingProgram(self.variables, problem, tuple(self.labels), self.mode)


def cyclic_variables(n: int) -> tuple[str, ...]:
    return tuple(f"V{i}" for i in range(1, n + 1)) + tuple(f"W{i}" for i in range(1, n + 1))


def build_cyclic_program(system: CyclicSystem, mode: Mode = Mode.MINIMIZE_MISMATCH,
                         connections: Sequence[PairDistribution] | None = None) -> CouplingProgram:
    """Coupling LP for a cyclic system.

    In FIX_CONNECTIONS mode ``connections[i-1]`` is the required pmf of
    (V_i, W_i); MAXIMAL_CONNECTIONS fills those in with maximal couplings.
    """
    mode = Mode(mode)
    n = system.n
    builder = _Builder(cyclic_variables(n), mode)
    for i in range(1, n + 1):
        j = system.successor(i)
        builder.marginal((f"V{i}", f"W{j}"), system.pair(i).as_tuple(), "bunch", str(i))
    builder.normalization()

    if mode is Mode.MAXIMAL_CONNECTIONS:
        summary = marginal_summary(system)
        connections = [maximal_coupling_from_means(v, w) for v, w in zip(summary.v, summary.w)]
    if mode in (Mode.FIX_CONNECTIONS, Mode.MAXIMAL_CONNECTIONS):
        if connections is None or len(connections) != n:
            raise ValueError(f"{mode.value} needs exactly {n} connection couplings")
        for i, pair in enumerate(connections, start=1):
            builder.marginal((f"V{i}", f"W{i}"), pair.as_tuple(), "connection", str(i))
    elif mode is Mode.MINIMIZE_MISMATCH:
        for i in range(1, n + 1):
            builder.mismatch(f"V{i}", f"W{i}")
    return builder.build()


def build_generic_program(system: GenericSystem, mode: Mode = Mode.MAXIMAL_CONNECTIONS,
                          connections: Sequence[PairDistribution] | None = None) -> CouplingProgram:
    """Coupling LP for a generic system; ``connections`` follow ``system.connections`` order."""
    mode = Mode(mode)
    builder = _Builder(system.variables, mode)
    for k, bunch in enumerate(system.bunches):
        builder.marginal(bunch.variables, bunch.pmf, "bunch", str(k))
    builder.normalization()

    if mode is Mode.MAXIMAL_CONNECTIONS:
        connections = [
            maximal_coupling_from_means(system.mean(a), system.mean(b)) for a, b in system.connections
        ]
    if mode in (Mode.FIX_CONNECTIONS, Mode.MAXIMAL_CONNECTIONS):
        if connections is None or len(connections) != len(system.connections):
            raise ValueError(f"{mode.value} needs one coupling per connection")
        for (a, b), pair in zip(system.connections, connections):
            builder.marginal((a, b), pair.as_tuple(), "connection", f"{a}~{b}")
    elif mode is Mode.MINIMIZE_MISMATCH:
        for a, b in system.connections:
            builder.mismatch(a, b)
    return builder.build()


def identity_coupling(mean: float) -> PairDistribution:
    """Coupling of two identically distributed variables that are equal almost surely."""
    p = (1.0 + mean) / 2.0
    return PairDistribution(p, 0.0, 0.0, 1.0 - p)
