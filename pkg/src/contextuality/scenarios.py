"""Bundled systems and seeded random generators."""
from __future__ import annotations

import math

import numpy as np

from .systems import Bunch, CyclicSystem, GenericSystem, MarginalSummary, PairDistribution, from_expectations

SCENARIOS = ("pr-box", "tsirelson", "kcbs-quantum", "specker", "all-correlated", "random")


def pr_box_summary() -> MarginalSummary:
    return MarginalSummary((0.0,) * 4, (0.0,) * 4, (1.0, 1.0, 1.0, -1.0))


def pr_box() -> CyclicSystem:
    return from_expectations(pr_box_summary())


def tsirelson_summary() -> MarginalSummary:
    h = math.sqrt(2.0) / 2.0
    return MarginalSummary((0.0,) * 4, (0.0,) * 4, (h, h, h, -h))


def tsirelson() -> CyclicSystem:
    return from_expectations(tsirelson_summary())


def kcbs_quantum() -> CyclicSystem:
    """Ideal KCBS pentagram: P[V_i=1] = 1/sqrt(5), outcome (+1,+1) excluded."""
    p = 1.0 / math.sqrt(5.0)
    pair = PairDistribution(0.0, p, p, 1.0 - 2.0 * p)
    return CyclicSystem(5, (pair,) * 5)


def all_correlated(n: int = 4) -> CyclicSystem:
    """Every variable is +1 with certainty."""
    return CyclicSystem(n, (PairDistribution(1.0, 0.0, 0.0, 0.0),) * n)


def specker() -> GenericSystem:
    anti = (0.0, 0.5, 0.5, 0.0)
    return GenericSystem(
        bunches=(
            Bunch(("A_X", "B_X"), anti),
            Bunch(("B_Y", "C_Y"), anti),
            Bunch(("A_Z", "C_Z"), anti),
        ),
        connections=(("A_X", "A_Z"), ("B_X", "B_Y"), ("C_Y", "C_Z")),
    )


def specker_cyclic() -> CyclicSystem:
    return from_expectations(MarginalSummary((0.0,) * 3, (0.0,) * 3, (-1.0, -1.0, -1.0)))


def random_system(n: int, seed: int | np.random.Generator) -> CyclicSystem:
    """Each pair pmf drawn from Dirichlet(1, 1, 1, 1)."""
    rng = np.random.default_rng(seed)
    return CyclicSystem(n, tuple(PairDistribution.from_tuple(rng.dirichlet(np.ones(4))) for _ in range(n)))


def random_pr_mixture(n: int, seed: int | np.random.Generator) -> CyclicSystem:
    """Noisy PR-box-like system: perfect (anti)correlations, odd number of anti, mixed with Dirichlet noise.

    Covers the contextual region, which uniform Dirichlet draws almost never reach.
    """
    rng = np.random.default_rng(seed)
    anti = np.zeros(n, dtype=bool)
    anti[rng.choice(n, size=rng.choice(np.arange(1, n + 1, 2)), replace=False)] = True
    weight = rng.uniform(0.0, 0.6)
    pairs = []
    for i in range(n):
        extreme = np.array([0.0, 0.5, 0.5, 0.0] if anti[i] else [0.5, 0.0, 0.0, 0.5])
        pmf = (1.0 - weight) * extreme + weight * rng.dirichlet(np.ones(4))
        pairs.append(PairDistribution.from_tuple(pmf))
    return CyclicSystem(n, tuple(pairs))


def random_joint(p: float, q: float, rng: np.random.Generator) -> PairDistribution:
    """Pair pmf with P[X=1]=p, P[Y=1]=q and P[X=1,Y=1] uniform over its feasible range."""
    lo, hi = max(0.0, p + q - 1.0), min(p, q)
    pp = rng.uniform(lo, hi)
    return PairDistribution(pp, p - pp, q - pp, 1.0 - p - q + pp)


def random_cc_system(n: int, seed: int | np.random.Generator) -> CyclicSystem:
    """Consistently connected: one marginal per property, random joints within Frechet bounds."""
    rng = np.random.default_rng(seed)
    p = rng.uniform(0.0, 1.0, size=n)
    pairs = [random_joint(p[i], p[(i + 1) % n], rng) for i in range(n)]
    return CyclicSystem(n, tuple(pairs))


def random_kcbs_exclusion(seed: int | np.random.Generator) -> CyclicSystem:
    """Consistently connected rank-5 system with P[V_i=1, W_i+1=1] = 0 in every pair."""
    rng = np.random.default_rng(seed)
    # a per-system centre spreads sum(p) across both sides of the bound 2
    centre, spread = rng.uniform(0.0, 0.5), rng.uniform(0.01, 0.2)
    while True:
        p = np.clip(centre + rng.uniform(-spread, spread, size=5), 0.0, 1.0)
        if all(p[i] + p[(i + 1) % 5] <= 1.0 for i in range(5)):
            break
    pairs = [PairDistribution(0.0, p[i], p[(i + 1) % 5], 1.0 - p[i] - p[(i + 1) % 5]) for i in range(5)]
    return CyclicSystem(5, tuple(pairs))


def random_cc_mixture(n: int, seed: int | np.random.Generator) -> CyclicSystem:
    """Consistently connected mixture of a PR-box-like extreme point and a random CC system.

    Both components have consistent connections, so the mixture does too; the
    extreme-point weight pushes a good share of draws into the contextual region.
    """
    rng = np.random.default_rng(seed)
    noise = random_cc_system(n, rng)
    anti = np.zeros(n, dtype=bool)
    anti[rng.choice(n, size=rng.choice(np.arange(1, n + 1, 2)), replace=False)] = True
    weight = rng.uniform(0.0, 1.0)
    pairs = []
    for i in range(n):
        extreme = np.array([0.0, 0.5, 0.5, 0.0] if anti[i] else [0.5, 0.0, 0.0, 0.5])
        pmf = (1.0 - weight) * extreme + weight * np.array(noise.pair(i + 1).as_tuple())
        pairs.append(PairDistribution.from_tuple(pmf))
    return CyclicSystem(n, tuple(pairs))
