import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from contextuality import scenarios
from contextuality.coupling import (
    Mode,
    agreement,
    build_cyclic_program,
    build_generic_program,
    identity_coupling,
    maximal_coupling,
)
from contextuality.cyclic import delta0
from contextuality.errors import OutOfRange, TooManyVariables
from contextuality.simplex import solve, verify_certificate
from contextuality.systems import Bunch, CyclicSystem, GenericSystem, PairDistribution

probabilities = st.floats(0.0, 1.0, allow_nan=False)


def lp_max_agreement(p, q):
    """Maximise r_pp + r_mm over pmfs with the given marginals (HiGHS, independent)."""
    A = [[1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]
    res = linprog([-1, 0, 0, -1], A_eq=A, b_eq=[p, q, 1], bounds=(0, None), method="highs")
    return -res.fun


@pytest.mark.parametrize(
    "p, q, expected, agree",
    [
        (0.7, 0.4, (0.4, 0.3, 0.0, 0.3), 0.7),
        (0.5, 0.5, (0.5, 0.0, 0.0, 0.5), 1.0),
        (0.3, 0.8, (0.3, 0.0, 0.5, 0.2), 0.5),
    ],
)
def test_maximal_coupling_examples(p, q, expected, agree):
    pair = maximal_coupling(p, q)
    assert pair.as_tuple() == pytest.approx(expected, abs=1e-15)
    assert agreement(pair) == pytest.approx(agree, abs=1e-15)
    assert lp_max_agreement(p, q) == pytest.approx(agree, abs=1e-9)


def test_maximal_coupling_rejects_bad_probability():
    with pytest.raises(OutOfRange):
        maximal_coupling(1.2, 0.5)
    with pytest.raises(OutOfRange):
        maximal_coupling(0.5, -0.1)


@given(probabilities, probabilities)
@settings(max_examples=300, deadline=None)
def test_maximal_coupling_marginals_exact(p, q):
    pair = maximal_coupling(p, q)
    assert min(pair.as_tuple()) >= 0.0
    assert pair.pp + pair.pm == pytest.approx(p, abs=1e-15)
    assert pair.pp + pair.mp == pytest.approx(q, abs=1e-15)
    assert agreement(pair) == pytest.approx(1 - abs(p - q), abs=1e-15)


def test_identity_coupling():
    assert identity_coupling(0.2).as_tuple() == pytest.approx((0.6, 0.0, 0.0, 0.4))


def test_cyclic_program_counts():
    three = build_cyclic_program(scenarios.specker_cyclic(), Mode.MINIMIZE_MISMATCH)
    assert three.atom_count == 64
    assert three.count_rows("bunch") == 12
    assert three.count_rows("normalization") == 1

    five = build_cyclic_program(scenarios.kcbs_quantum(), Mode.FEASIBILITY)
    assert five.atom_count == 1024
    assert five.count_rows("bunch") == 20

    ident = [identity_coupling(0.0)] * 3
    fixed = build_cyclic_program(scenarios.specker_cyclic(), Mode.FIX_CONNECTIONS, ident)
    assert fixed.count_rows("connection") == 12
    assert fixed.problem.shape[0] == three.problem.shape[0] + 12


def test_atom_ordering_plus_before_minus():
    program = build_cyclic_program(scenarios.specker_cyclic(), Mode.FEASIBILITY)
    assert program.variables == ("V1", "V2", "V3", "W1", "W2", "W3")
    assert set(program.atom_outcome(0).values()) == {1}
    assert program.atom_outcome(1) == {"V1": 1, "V2": 1, "V3": 1, "W1": 1, "W2": 1, "W3": -1}
    assert set(program.atom_outcome(63).values()) == {-1}


def test_example_system_counts_and_feasibility():
    rng = np.random.default_rng(17)
    s, t = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
    system = GenericSystem((Bunch(("A", "C"), tuple(s)), Bunch(("B", "D"), tuple(t))), (("A", "B"),))
    program = build_generic_program(system, Mode.MAXIMAL_CONNECTIONS)
    assert program.atom_count == 16
    assert program.count_rows("bunch") == 8
    assert program.count_rows("connection") == 4
    sol = solve(program.problem)
    assert sol.optimal and verify_certificate(program.problem, sol)


def test_specker_identity_connections_infeasible():
    system = scenarios.specker()
    program = build_generic_program(system, Mode.FIX_CONNECTIONS, [identity_coupling(0.0)] * 3)
    sol = solve(program.problem)
    assert not sol.optimal
    assert verify_certificate(program.problem, sol)


def test_single_bunch_trivially_feasible():
    pmf = (0.1, 0.2, 0.3, 0.4)
    system = GenericSystem((Bunch(("X", "Y"), pmf),), ())
    program = build_generic_program(system, Mode.MAXIMAL_CONNECTIONS)
    sol = solve(program.problem)
    assert sol.optimal
    assert sol.x == pytest.approx(pmf, abs=1e-12)


def test_too_many_variables():
    pair = PairDistribution(0.25, 0.25, 0.25, 0.25)
    with pytest.raises(TooManyVariables):
        build_cyclic_program(CyclicSystem(13, (pair,) * 13), Mode.FEASIBILITY)


def test_fix_connections_needs_one_per_connection():
    with pytest.raises(ValueError):
        build_cyclic_program(scenarios.specker_cyclic(), Mode.FIX_CONNECTIONS, [identity_coupling(0.0)])


def test_mismatch_optimum_at_least_delta0():
    rng = np.random.default_rng(23)
    for _ in range(30):
        system = scenarios.random_system(int(rng.integers(3, 6)), rng)
        program = build_cyclic_program(system, Mode.MINIMIZE_MISMATCH)
        sol = solve(program.problem)
        assert sol.objective >= delta0(system) - 1e-8
