"""Reachability solver: exact toys, qualitative states, convergence."""

import pytest

from qkdmc.errors import SolverError
from qkdmc.explorer import build
from qkdmc.lang import parse, validate
from qkdmc.properties import parse_property
from qkdmc.solver import prob0_states, prob1_states, prob_until

CHAIN = (
    "dtmc\nmodule m\n  x : [0..2] init 0;\n"
    "  [] x=0 -> 0.3:(x'=1) + 0.7:(x'=2);\nendmodule\n"
    'label "t" = x=1;\n'
)

GEOMETRIC = (
    "dtmc\nmodule m\n  x : [0..1] init 0;\n"
    "  [] x=0 -> 0.5:(x'=0) + 0.5:(x'=1);\nendmodule\n"
    'label "t" = x=1;\n'
)

# two states feeding each other, with a small escape to goal or sink on each
# visit; the value builds up over sweeps instead of settling in one pass
PING_PONG = (
    "dtmc\nmodule m\n  x : [0..3] init 0;\n"
    "  [] x=0 -> 0.9:(x'=1) + 0.1:(x'=2);\n"
    "  [] x=1 -> 0.9:(x'=0) + 0.1:(x'=3);\nendmodule\n"
    'label "goal" = x=2;\n'
)

UNTIL_TOY = (
    "dtmc\nmodule m\n  x : [0..3] init 0;\n"
    "  [] x=0 -> 0.5:(x'=1) + 0.5:(x'=2);\n"
    "  [] x=1 -> (x'=3);\n  [] x=2 -> (x'=3);\nendmodule\n"
    'label "safe" = !x=1;\nlabel "goal" = x=3;\n'
)


def solve(source: str, prop: str, **kwargs):
    dtmc = build(validate(parse(source)))
    return prob_until(dtmc, parse_property(prop), **kwargs), dtmc


class TestExactToys:
    def test_one_step_chain(self):
        report, _ = solve(CHAIN, 'P=? [ F "t" ]')
        assert report.probability == 0.3
        assert report.iterations <= 3

    def test_geometric_self_loop_reaches_with_certainty(self):
        # the diagonal is eliminated exactly, so 0.5/(1-0.5) lands on 1.0
        report, _ = solve(GEOMETRIC, 'P=? [ F "t" ]')
        assert report.probability == 1.0

    def test_initial_state_inside_target(self):
        report, _ = solve(
            'dtmc\nmodule m\n  x : [0..1] init 1;\nendmodule\nlabel "t" = x=1;\n',
            'P=? [ F "t" ]',
        )
        assert report.probability == 1.0
        assert report.iterations == 0

    def test_unreachable_target_is_exactly_zero(self):
        report, _ = solve(
            'dtmc\nmodule m\n  x : [0..1] init 0;\nendmodule\nlabel "t" = x=1;\n',
            'P=? [ F "t" ]',
        )
        assert report.probability == 0.0
        assert report.iterations == 0
        assert report.prob0_count == 1

    def test_cyclic_pair_matches_the_closed_form(self):
        # P(x0) = 0.1 + 0.81 P(x0)  =>  10/19
        report, _ = solve(PING_PONG, 'P=? [ F "goal" ]')
        assert report.probability == pytest.approx(10 / 19, abs=1e-11)

    def test_until_excludes_paths_leaving_the_constraint(self):
        report, _ = solve(UNTIL_TOY, 'P=? [ "safe" U "goal" ]')
        assert report.probability == pytest.approx(0.5, abs=1e-12)

    def test_expression_operands(self):
        report, _ = solve(CHAIN, "P=? [ F (x=1) ]")
        assert report.probability == 0.3


class TestQualitativeStates:
    def test_absorbing_non_target_is_in_prob0(self):
        dtmc = build(validate(parse(CHAIN)))
        query = parse_property('P=? [ F "t" ]')
        zero = prob0_states(dtmc, query)
        assert {dtmc.states[i] for i in zero} == {(2,)}

    def test_prob1_contains_the_target_and_sure_predecessors(self):
        dtmc = build(validate(parse(GEOMETRIC)))
        query = parse_property('P=? [ F "t" ]')
        assert prob1_states(dtmc, query) == frozenset(range(dtmc.state_count))

    def test_constraint_violating_states_are_prob0(self):
        dtmc = build(validate(parse(UNTIL_TOY)))
        query = parse_property('P=? [ "safe" U "goal" ]')
        zero = prob0_states(dtmc, query)
        assert {dtmc.states[i] for i in zero} == {(1,)}

    def test_report_counts_match_the_sets(self):
        dtmc = build(validate(parse(CHAIN)))
        query = parse_property('P=? [ F "t" ]')
        report = prob_until(dtmc, query)
        assert report.prob0_count == len(prob0_states(dtmc, query))
        assert report.prob1_count == len(prob1_states(dtmc, query))


class TestConvergence:
    def test_values_grow_monotonically_from_below(self):
        dtmc = build(validate(parse(PING_PONG)))
        query = parse_property('P=? [ F "goal" ]')
        snapshots = []
        prob_until(dtmc, query, on_sweep=lambda values: snapshots.append(values))
        assert len(snapshots) >= 2
        for before, after in zip(snapshots, snapshots[1:]):
            assert all(b <= a + 1e-15 for b, a in zip(before, after))

    def test_residual_below_tolerance_at_the_end(self):
        report, _ = solve(PING_PONG, 'P=? [ F "goal" ]')
        assert report.residual < 1e-12

    def test_iteration_budget_is_enforced(self):
        dtmc = build(validate(parse(PING_PONG)))
        query = parse_property('P=? [ F "goal" ]')
        with pytest.raises(SolverError) as info:
            prob_until(dtmc, query, max_iter=1)
        assert info.value.code == "NO_CONVERGENCE"
        assert "residual" in str(info.value)

    def test_loose_tolerance_converges_fast(self):
        dtmc = build(validate(parse(PING_PONG)))
        query = parse_property('P=? [ F "goal" ]')
        loose = prob_until(dtmc, query, tol=1e-3)
        tight = prob_until(dtmc, query, tol=1e-12)
        assert loose.iterations < tight.iterations
        assert loose.probability == pytest.approx(tight.probability, abs=1e-2)

    def test_parameter_validation(self):
        dtmc = build(validate(parse(CHAIN)))
        query = parse_property('P=? [ F "t" ]')
        with pytest.raises(ValueError):
            prob_until(dtmc, query, tol=0.0)
        with pytest.raises(ValueError):
            prob_until(dtmc, query, max_iter=0)
