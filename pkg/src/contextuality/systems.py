"""System representations: binary pairs, cyclic systems, generic bunch systems.

Outcomes are ordered ``+1`` before ``-1`` everywhere, so a pair pmf reads
``(pp, pm, mp, mm)`` and a bunch of k variables lists its 2**k outcomes in
``itertools.product((1, -1), repeat=k)`` order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import InfeasibleExpectations, NotCircular

SUM_TOL = 1e-9
CLAMP_TOL = 1e-12
MAX_BUNCH_VARIABLES = 16

SIGNS = (1, -1)


@dataclass(frozen=True)
class PairDistribution:
    """Joint pmf of one measured pair (X, Y) of +/-1 variables."""

    pp: float
    pm: float
    mp: float
    mm: float

    def __post_init__(self):
        for name in ("pp", "pm", "mp", "mm"):
            value = float(getattr(self, name))
            if -CLAMP_TOL <= value < 0.0:
                value = 0.0
            object.__setattr__(self, name, value)

    @classmethod
    def from_tuple(cls, values: Sequence[float]) -> "PairDistribution":
        pp, pm, mp, mm = values
        return cls(pp, pm, mp, mm)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.pp, self.pm, self.mp, self.mm)

    @property
    def mean_first(self) -> float:
        return self.pp + self.pm - self.mp - self.mm

    @property
    def mean_second(self) -> float:
        return self.pp - self.pm + self.mp - self.mm

    @property
    def product_mean(self) -> float:
        return self.pp - self.pm - self.mp + self.mm

    def swapped(self) -> "PairDistribution":
        """Distribution of (Y, X)."""
        return PairDistribution(self.pp, self.mp, self.pm, self.mm)


@dataclass(frozen=True)
class CyclicSystem:
    """Rank-n cyclic system; ``pairs[i-1]`` is the pmf of (V_i, W_{i+1 mod n}).

    ``labels`` records the original property index behind each canonical
    position when the system was relabeled from a non-successor pairing.
    """

    n: int
    pairs: tuple[PairDistribution, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(1, len(self.pairs) + 1)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    def pair(self, i: int) -> PairDistribution:
        """Pair with 1-based index ``i``."""
        return self.pairs[i - 1]

    def successor(self, i: int) -> int:
        return i % self.n + 1

    def predecessor(self, i: int) -> int:
        return (i - 2) % self.n + 1


@dataclass(frozen=True)
class Bunch:
    variables: tuple[str, ...]
    pmf: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        pmf = tuple(0.0 if -CLAMP_TOL <= float(x) < 0.0 else float(x) for x in self.pmf)
        object.__setattr__(self, "pmf", pmf)

    def outcomes(self):
        return itertools.product(SIGNS, repeat=len(self.variables))

    def mean(self, name: str) -> float:
        k = self.variables.index(name)
        return sum(p * outcome[k] for p, outcome in zip(self.pmf, self.outcomes()))


@dataclass(frozen=True)
class GenericSystem:
    bunches: tuple[Bunch, ...]
    connections: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "bunches", tuple(self.bunches))
        object.__setattr__(
            self, "connections", tuple((str(a), str(b)) for a, b in self.connections)
        )

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for b in self.bunches for v in b.variables)

    def bunch_of(self, name: str) -> int:
        for k, bunch in enumerate(self.bunches):
            if name in bunch.variables:
                return k
        raise KeyError(name)

    def mean(self, name: str) -> float:
        return self.bunches[self.bunch_of(name)].mean(name)


@dataclass(frozen=True)
class MarginalSummary:
    """Expectations of a cyclic system.

    ``v[i]`` is <V_{i+1}>, ``w[i]`` is <W_{i+1}> and ``vw[i]`` is
    <V_{i+1} W_{i+2}> (0-based storage, 1-based variable names).
    """

    v: tuple[float, ...]
    w: tuple[float, ...]
    vw: tuple[float, ...]

    def __post_init__(self):
        for name in ("v", "w", "vw"):
            object.__setattr__(self, name, tuple(float(x) for x in getattr(self, name)))

    @property
    def n(self) -> int:
        return len(self.vw)


@dataclass(frozen=True)
class Violation:
    kind: str
    location: str
    magnitude: float = 0.0

    def __str__(self):
        return f"{self.location}: {self.kind} (magnitude {self.magnitude:.3g})"


def _check_pmf(values: Sequence[float], location: str) -> list[Violation]:
    found = []
    for k, value in enumerate(values):
        if value < 0.0 or value > 1.0:
            excess = -value if value < 0.0 else value - 1.0
            found.append(Violation("probability out of range", f"{location}[{k}]", excess))
    total = sum(values)
    if abs(total - 1.0) > SUM_TOL:
        found.append(Violation("pmf does not sum to 1", location, abs(total - 1.0)))
    return found


def _validate_pair(pair: PairDistribution, location: str) -> list[Violation]:
    found = _check_pmf(pair.as_tuple(), location)
    if found:
        # expectation bounds follow from a valid pmf; only report them independently
        return found
    for label, value in (
        ("<V>", pair.mean_first),
        ("<W>", pair.mean_second),
        ("<VW>", pair.product_mean),
    ):
        if abs(value) > 1.0 + SUM_TOL:
            found.append(Violation("expectation out of range", f"{location}.{label}", abs(value) - 1.0))
    return found


def _validate_cyclic(system: CyclicSystem) -> list[Violation]:
    found = []
    if system.n < 3:
        found.append(Violation("rank below 3", "n", float(3 - system.n)))
    if len(system.pairs) != system.n:
        found.append(
            Violation("pair count differs from n", "pairs", float(abs(len(system.pairs) - system.n)))
        )
    for i, pair in enumerate(system.pairs, start=1):
        found.extend(_validate_pair(pair, f"pairs[{i}]"))
    return found


def _validate_generic(system: GenericSystem) -> list[Violation]:
    found = []
    owner: dict[str, int] = {}
    for k, bunch in enumerate(system.bunches):
        location = f"bunches[{k}]"
        size = len(bunch.variables)
        if size == 0:
            found.append(Violation("empty bunch", location))
            continue
        if size > MAX_BUNCH_VARIABLES:
            found.append(Violation("bunch exceeds 16 variables", location, float(size)))
        if len(bunch.pmf) != 2**size:
            found.append(
                Violation("pmf length is not 2**k", f"{location}.pmf", float(abs(len(bunch.pmf) - 2**size)))
            )
        else:
            found.extend(_check_pmf(bunch.pmf, f"{location}.pmf"))
        for name in bunch.variables:
            if name in owner:
                found.append(Violation("duplicate variable name", f"{location}.{name}"))
            else:
                owner[name] = k
    used: set[str] = set()
    for c, (a, b) in enumerate(system.connections):
        location = f"connections[{c}]"
        missing = [x for x in (a, b) if x not in owner]
        for name in missing:
            found.append(Violation("unknown variable in connection", f"{location}.{name}"))
        if missing:
            continue
        if owner[a] == owner[b]:
            found.append(Violation("connection within single bunch", location))
        for name in (a, b):
            if name in used:
                found.append(Violation("connections not disjoint", f"{location}.{name}"))
            used.add(name)
    return found


def validate_system(system: CyclicSystem | GenericSystem) -> list[Violation]:
    """Every invariant violation of ``system``; an empty list means valid."""
    if isinstance(system, CyclicSystem):
        return _validate_cyclic(system)
    if isinstance(system, GenericSystem):
        return _validate_generic(system)
    raise TypeError(f"not a system: {type(system).__name__}")


def pair_from_expectations(mean_first: float, mean_second: float, product: float,
                           tol: float = SUM_TOL) -> PairDistribution:
    entries = []
    for a, b in itertools.product(SIGNS, repeat=2):
        r = (1.0 + a * mean_first + b * mean_second + a * b * product) / 4.0
        if r < -tol:
            raise InfeasibleExpectations(
                f"(<V>={mean_first}, <W>={mean_second}, <VW>={product}) gives P({a:+d},{b:+d}) = {r:.3g}"
            )
        entries.append(max(r, 0.0))
    return PairDistribution.from_tuple(entries)


def from_expectations(summary: MarginalSummary) -> CyclicSystem:
    n = summary.n
    if n < 3 or len(summary.v) != n or len(summary.w) != n:
        raise ValueError("v, w and vw must all have the same length n >= 3")
    pairs = []
    for i in range(n):
        try:
            pairs.append(pair_from_expectations(summary.v[i], summary.w[(i + 1) % n], summary.vw[i]))
        except InfeasibleExpectations as exc:
            raise InfeasibleExpectations(f"pair {i + 1}: {exc}") from None
    return CyclicSystem(n, tuple(pairs))


def marginal_summary(system: CyclicSystem) -> MarginalSummary:
    """Expectations, with <W_i> read from pair i-1 where W_i occurs."""
    n = system.n
    v = [system.pair(i).mean_first for i in range(1, n + 1)]
    w = [system.pair(system.predecessor(i)).mean_second for i in range(1, n + 1)]
    vw = [system.pair(i).product_mean for i in range(1, n + 1)]
    return MarginalSummary(tuple(v), tuple(w), tuple(vw))


def cycle_order(pi: Sequence[int]) -> list[int]:
    """Orbit of 1 under ``pi`` (``pi[i-1]`` is the image of i); raises NotCircular."""
    n = len(pi)
    if sorted(pi) != list(range(1, n + 1)):
        raise NotCircular(f"{list(pi)} is not a permutation of 1..{n}")
    order = [1]
    nxt = pi[0]
    while nxt != 1:
        order.append(nxt)
        nxt = pi[nxt - 1]
    if len(order) != n:
        raise NotCircular(f"{list(pi)} splits into more than one cycle")
    return order


def relabel_permutation(pairs: Sequence[tuple[int, int, PairDistribution]],
                        pi: Sequence[int]) -> CyclicSystem:
    """Rename properties so that the pairing (V_i, W_pi(i)) becomes successor pairing.

    ``pairs`` holds ``(i, j, pmf)`` with ``j == pi(i)``.  The returned system's
    ``labels`` maps each canonical position back to the original index.
    """
    order = cycle_order(pi)
    n = len(order)
    by_first = {}
    for i, j, pmf in pairs:
        if not 1 <= i <= n or pi[i - 1] != j:
            raise NotCircular(f"pair ({i}, {j}) does not follow the permutation")
        if i in by_first:
            raise NotCircular(f"property {i} appears as V in more than one pair")
        by_first[i] = pmf
    if len(by_first) != n:
        raise NotCircular(f"expected {n} pairs, got {len(by_first)}")
    return CyclicSystem(n, tuple(by_first[old] for old in order), labels=tuple(order))


def generic_to_cyclic(system: GenericSystem) -> CyclicSystem | None:
    """Cyclic encoding of a generic system, or None when it is not a single cycle of pairs.

    The first bunch's first variable becomes V_1.  Labels are not meaningful
    here; variable names are recoverable from the walk order if needed.
    """
    bunches = system.bunches
    if len(bunches) < 3 or any(len(b.variables) != 2 for b in bunches):
        return None
    partner = {}
    for a, b in system.connections:
        partner[a] = b
        partner[b] = a
    if len(partner) != 2 * len(bunches):
        return None
    owner = {name: k for k, b in enumerate(bunches) for name in b.variables}
    if not all(name in owner for name in partner):
        return None

    pairs = []
    seen = set()
    k, first = 0, bunches[0].variables[0]
    v_name = first
    while True:
        if k in seen:
            return None
        seen.add(k)
        bunch = bunches[k]
        pmf = PairDistribution.from_tuple(bunch.pmf)
        if bunch.variables[0] == v_name:
            w_name = bunch.variables[1]
        else:
            w_name, pmf = bunch.variables[0], pmf.swapped()
        pairs.append(pmf)
        v_name = partner[w_name]
        k = owner[v_name]
        if v_name == first:
            break
    if len(seen) != len(bunches):
        return None
    return CyclicSystem(len(pairs), tuple(pairs))
