import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contextuality import scenarios
from contextuality.errors import InfeasibleExpectations, NotCircular
from contextuality.systems import (
    Bunch,
    CyclicSystem,
    GenericSystem,
    MarginalSummary,
    PairDistribution,
    from_expectations,
    generic_to_cyclic,
    marginal_summary,
    relabel_permutation,
    validate_system,
)


def expectations(pair):
    pp, pm, mp, mm = pair.as_tuple()
    return pp + pm - mp - mm, pp - pm + mp - mm, pp - pm - mp + mm


@st.composite
def cyclic_systems(draw, n=None):
    n = draw(st.integers(3, 7)) if n is None else n
    pairs = []
    for _ in range(n):
        raw = draw(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4).filter(lambda r: sum(r) > 1e-3))
        total = sum(raw)
        pairs.append(PairDistribution.from_tuple([r / total for r in raw]))
    return CyclicSystem(n, tuple(pairs))


def test_valid_cc_system_has_no_violations():
    assert validate_system(scenarios.pr_box()) == []
    assert validate_system(scenarios.tsirelson()) == []


def test_out_of_range_probability_reported():
    bad = CyclicSystem(3, (PairDistribution(1.2, 0, 0, 0),) + scenarios.specker_cyclic().pairs[1:])
    found = validate_system(bad)
    out_of_range = [v for v in found if v.kind == "probability out of range"]
    assert len(out_of_range) == 1
    assert out_of_range[0].location == "pairs[1][0]"
    assert out_of_range[0].magnitude == pytest.approx(0.2)


def test_negative_noise_is_clamped():
    pair = PairDistribution(0.5, -1e-13, 0.25, 0.25 + 1e-13)
    assert pair.pm == 0.0
    assert PairDistribution(0.5, -1e-6, 0.25, 0.25).pm == -1e-6


def test_connection_within_bunch():
    system = GenericSystem((Bunch(("A", "B"), (0.25,) * 4), Bunch(("C",), (0.5, 0.5))), (("A", "B"),))
    kinds = [v.kind for v in validate_system(system)]
    assert kinds == ["connection within single bunch"]


def test_generic_violations():
    system = GenericSystem(
        (Bunch(("A", "B"), (0.5, 0.5, 0.0)), Bunch(("A", "C"), (0.25,) * 4), Bunch(("D",), (0.5, 0.5))),
        (("B", "C"), ("C", "D"), ("Q", "D")),
    )
    kinds = {v.kind for v in validate_system(system)}
    assert {"pmf length is not 2**k", "duplicate variable name", "connections not disjoint",
            "unknown variable in connection"} <= kinds


def test_from_expectations_examples():
    uniform = from_expectations(MarginalSummary((0, 0, 0), (0, 0, 0), (1, 1, 1)))
    assert uniform.pair(1).as_tuple() == (0.5, 0.0, 0.0, 0.5)

    with pytest.raises(InfeasibleExpectations):
        from_expectations(MarginalSummary((1, 0, 0), (0, -1, 0), (1, 0, 0)))

    system = from_expectations(MarginalSummary((0.2, 0, 0), (0, 0, 0), (0.4, 0, 0)))
    assert system.pair(1).as_tuple() == pytest.approx((0.4, 0.2, 0.1, 0.3), abs=1e-15)
    # recompute the three expectations from the four entries
    assert expectations(system.pair(1)) == pytest.approx((0.2, 0.0, 0.4), abs=1e-15)


def test_marginal_summary_examples():
    s = marginal_summary(scenarios.pr_box())
    assert s.v == s.w == (0.0,) * 4
    assert s.vw == (1.0, 1.0, 1.0, -1.0)

    cc = scenarios.kcbs_quantum()
    summary = marginal_summary(cc)
    assert summary.v == pytest.approx(summary.w)

    perturbed = CyclicSystem(4, (PairDistribution(0.4, 0.2, 0.1, 0.3),) + scenarios.pr_box().pairs[1:])
    assert marginal_summary(perturbed).v[0] == pytest.approx(0.2)


def test_w_marginal_read_from_preceding_pair():
    pairs = [PairDistribution(0.25, 0.25, 0.25, 0.25)] * 3
    pairs[2] = PairDistribution(0.5, 0.0, 0.5, 0.0)  # (V3, W1): W1 = +1 surely
    s = marginal_summary(CyclicSystem(3, tuple(pairs)))
    assert s.w[0] == pytest.approx(1.0)
    assert s.v[2] == pytest.approx(0.0)


@given(cyclic_systems())
@settings(max_examples=150, deadline=None)
def test_expectation_round_trip(system):
    back = from_expectations(marginal_summary(system))
    for a, b in zip(system.pairs, back.pairs):
        assert a.as_tuple() == pytest.approx(b.as_tuple(), abs=1e-12)


def test_relabel_identity():
    system = scenarios.tsirelson()
    pi = [2, 3, 4, 1]
    relabeled = relabel_permutation([(i, pi[i - 1], system.pair(i)) for i in range(1, 5)], pi)
    assert relabeled.pairs == system.pairs
    assert relabeled.labels == (1, 2, 3, 4)


def test_relabel_three_cycle():
    a, b, c = (PairDistribution(0.1, 0.2, 0.3, 0.4), PairDistribution(0.4, 0.3, 0.2, 0.1),
               PairDistribution(0.25, 0.25, 0.25, 0.25))
    pi = [3, 1, 2]  # 1 -> 3 -> 2 -> 1
    relabeled = relabel_permutation([(1, 3, a), (3, 2, b), (2, 1, c)], pi)
    assert relabeled.pairs == (a, b, c)
    assert relabeled.labels == (1, 3, 2)
    assert sorted(relabeled.pairs, key=id) == sorted((a, b, c), key=id)


def test_relabel_rejects_two_cycles():
    pair = PairDistribution(0.25, 0.25, 0.25, 0.25)
    with pytest.raises(NotCircular):
        relabel_permutation([(1, 2, pair), (2, 1, pair), (3, 4, pair), (4, 3, pair)], [2, 1, 4, 3])


def test_generic_to_cyclic_specker():
    cyclic = generic_to_cyclic(scenarios.specker())
    assert cyclic is not None and cyclic.n == 3
    assert marginal_summary(cyclic).vw == pytest.approx((-1, -1, -1))


def test_generic_to_cyclic_rejects_non_cycle():
    system = GenericSystem((Bunch(("A", "C"), (0.25,) * 4), Bunch(("B", "D"), (0.25,) * 4)), (("A", "B"),))
    assert generic_to_cyclic(system) is None
