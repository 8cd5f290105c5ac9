"""Polynomial special-case solvers versus the oracle and hand examples."""

import random

import pytest

from prefalloc import exact, randgen
from prefalloc.core import PreconditionError, profile, validate_allocation
from prefalloc.polyalgos import (
    minmax_paths,
    minmax_two_matchings,
    minsum_directed_matchings,
    minsum_disjoint_paths,
    minsum_paths,
    minsum_two_star_forests,
    preassign_two_star_forests,
    two_matchings_profiles,
)

from conftest import graph, instance


def check_against_oracle(inst, solver, objective):
    res = solver(inst)
    assert validate_allocation(inst, res.witness) == []
    prof = profile(inst, res.witness)
    got = prof.total if objective == "sum" else prof.maximum
    assert got == res.value
    assert res.value == exact.minimize(inst, objective).value


class TestMinsumDirectedMatchings:
    def test_two_agents_same_arc(self):
        inst = instance({"x": graph("ab", [("a", "b")]), "y": graph("ab", [("a", "b")])})
        assert minsum_directed_matchings(inst).value == 1

    def test_single_agent_gets_its_tail(self):
        inst = instance({"x": graph("ab", [("a", "b")])})
        res = minsum_directed_matchings(inst)
        assert res.value == 0
        assert res.witness.get("x") >= {"a"}

    def test_disjoint_arcs_no_competition(self):
        inst = instance({"x": graph("ab", [("a", "b")]), "y": graph("cd", [("c", "d")])})
        assert minsum_directed_matchings(inst).value == 0

    def test_rejects_isolated_vertex(self):
        inst = instance({"x": graph("abc", [("a", "b")])})
        with pytest.raises(PreconditionError):
            minsum_directed_matchings(inst)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle(self, seed):
        rng = random.Random(seed)
        inst = randgen.random_instance(
            rng, "matching", rng.randint(2, 8), rng.randint(1, 4)
        )
        check_against_oracle(inst, minsum_directed_matchings, "sum")


class TestPathSolvers:
    def test_two_agents_one_path(self):
        inst = instance({"x": graph("ab", [("a", "b")]), "y": graph("ab", [("a", "b")])})
        assert minsum_paths(inst).value == 1
        assert minmax_paths(inst).value == 1

    def test_disjoint_single_items(self):
        inst = instance({"x": graph("a"), "y": graph("b")})
        assert minsum_paths(inst).value == 0
        assert minmax_paths(inst).value == 0

    def test_three_agents_share_chain(self):
        chain = graph("abc", [("a", "b"), ("b", "c")])
        inst = instance({"x": chain, "y": chain, "z": chain})
        assert minmax_paths(inst).value == 2
        assert minsum_paths(inst).value == 3

    def test_at_most_one_item_per_agent(self):
        chain = graph("abc", [("a", "b"), ("b", "c")])
        inst = instance({"x": chain, "y": chain})
        for solver in (minsum_paths, minmax_paths):
            witness = solver(inst).witness
            assert all(len(items) <= 1 for _, items in witness.pairs)

    def test_rejects_path_forest(self):
        inst = instance({"x": graph("abc", [("a", "b")])})
        with pytest.raises(PreconditionError):
            minsum_paths(inst)

    @pytest.mark.parametrize("seed", range(40))
    @pytest.mark.parametrize(
        "solver,objective", [(minsum_paths, "sum"), (minmax_paths, "max")]
    )
    def test_matches_oracle(self, seed, solver, objective):
        rng = random.Random(1000 + seed)
        inst = randgen.random_instance(
            rng, "path", rng.randint(2, 8), rng.randint(1, 4)
        )
        check_against_oracle(inst, solver, objective)


class TestMinsumDisjointPaths:
    def test_single_agent_collects_component_heads(self):
        inst = instance({"x": graph("abc", [("a", "b")])})
        res = minsum_disjoint_paths(inst)
        assert res.value == 0
        assert res.witness.get("x") >= {"a", "c"}

    def test_two_agents_two_components_each(self):
        g = graph("abcd", [("a", "b"), ("c", "d")])
        inst = instance({"x": g, "y": g})
        assert minsum_disjoint_paths(inst).value == 2

    def test_agrees_with_matching_solver_on_arc_forests(self):
        for seed in range(15):
            rng = random.Random(2000 + seed)
            inst = randgen.random_instance(
                rng, "matching", rng.randint(2, 8), rng.randint(1, 3)
            )
            assert (
                minsum_disjoint_paths(inst).value
                == minsum_directed_matchings(inst).value
            )

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle(self, seed):
        rng = random.Random(3000 + seed)
        inst = randgen.random_instance(
            rng, "disjoint-paths", rng.randint(2, 8), rng.randint(1, 4)
        )
        check_against_oracle(inst, minsum_disjoint_paths, "sum")


class TestTwoStarForests:
    def test_personal_items_go_home(self):
        inst = instance({"x": graph("ab", [("a", "b")]), "y": graph("c")})
        pre = preassign_two_star_forests(inst)
        assert pre.get("x") == {"a", "b"}
        assert pre.get("y") == {"c"}

    def test_one_root_star_resolves_leaves(self):
        # x roots a at {b}; y sees both only as leaves (roots r1, r2)
        gx = graph("ab", [("a", "b")])
        gy = graph("abrs", [("r", "a"), ("s", "b")])
        inst = instance({"x": gx, "y": gy})
        pre = preassign_two_star_forests(inst)
        assert pre.get("x") >= {"a"}
        assert pre.get("y") >= {"b", "r", "s"}

    def test_identical_star_preassigns_nothing(self):
        g = graph("rxy", [("r", "x"), ("r", "y")])
        inst = instance({"x": g, "y": g})
        assert preassign_two_star_forests(inst).pairs == ()

    def test_identical_star_value(self):
        g = graph("rxy", [("r", "x"), ("r", "y")])
        inst = instance({"x": g, "y": g})
        assert minsum_two_star_forests(inst).value == 1

    def test_fully_personal_value_zero(self):
        inst = instance({"x": graph("ab", [("a", "b")]), "y": graph("cd", [("c", "d")])})
        assert minsum_two_star_forests(inst).value == 0

    def test_rejects_non_star_shapes(self):
        chain = graph("abc", [("a", "b"), ("b", "c")])
        inst = instance({"x": chain, "y": chain})
        with pytest.raises(PreconditionError):
            minsum_two_star_forests(inst)

    def test_rejects_wrong_agent_count(self):
        inst = instance({"x": graph("a")})
        with pytest.raises(PreconditionError):
            minsum_two_star_forests(inst)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle_and_extends_preassignment(self, seed):
        rng = random.Random(4000 + seed)
        inst = randgen.random_instance(rng, "union-out-stars", rng.randint(2, 8), 2)
        check_against_oracle(inst, minsum_two_star_forests, "sum")
        pre = preassign_two_star_forests(inst)
        assert pre == preassign_two_star_forests(inst)
        witness = minsum_two_star_forests(inst).witness
        for agent, items in pre.pairs:
            assert items <= witness.get(agent)


class TestTwoMatchings:
    def test_two_cycle_reaches_zero(self):
        inst = instance({"x": graph("ab", [("a", "b")]), "y": graph("ab", [("b", "a")])})
        res = minmax_two_matchings(inst)
        assert res.value == 0
        assert (0, 0) in two_matchings_profiles(inst)

    def test_lone_arc_against_empty_agent(self):
        inst = instance({"x": graph("ab", [("a", "b")]), "y": graph("", [])})
        res = minmax_two_matchings(inst)
        assert res.value == 0
        assert two_matchings_profiles(inst) == {(0, 0), (1, 0), (2, 0)}

    def test_profile_set_size_bound(self):
        for seed in range(15):
            rng = random.Random(5000 + seed)
            n = rng.randint(2, 8)
            inst = randgen.random_instance(rng, "matching", n, 2)
            profs = two_matchings_profiles(inst)
            assert len(profs) <= (inst.num_items + 1) ** 2

    @pytest.mark.parametrize("seed", range(40))
    def test_profiles_match_oracle(self, seed):
        rng = random.Random(6000 + seed)
        inst = randgen.random_instance(rng, "matching", rng.randint(2, 8), 2)
        assert two_matchings_profiles(inst) == exact.all_profiles(inst)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle(self, seed):
        rng = random.Random(7000 + seed)
        inst = randgen.random_instance(rng, "matching", rng.randint(2, 8), 2)
        check_against_oracle(inst, minmax_two_matchings, "max")
