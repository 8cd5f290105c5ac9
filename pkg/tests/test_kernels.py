"""Combinatorial kernels checked against brute force on small inputs."""

import itertools
import random

import pytest

from prefalloc.core import PreconditionError
from prefalloc.kernels import (
    Dinic,
    bipartite_mwis,
    hopcroft_karp,
    lbap,
    lsap,
    max_profit_flow,
    max_weight_matching,
)


def brute_assignment(cost, aggregate):
    """Best row->column assignment by trying every injection."""
    n, m = len(cost), len(cost[0])
    best = None
    for cols in itertools.permutations(range(m), n):
        val = aggregate(cost[i][c] for i, c in enumerate(cols))
        if best is None or val < best:
            best = val
    return best


def brute_max_matching(n_left, n_right, adj):
    edges = [(u, v) for u in range(n_left) for v in adj[u]]
    best = 0
    for r in range(min(n_left, n_right), 0, -1):
        for combo in itertools.combinations(edges, r):
            if len({u for u, _ in combo}) == r and len({v for _, v in combo}) == r:
                return r
    return best


class TestLsap:
    def test_known_square(self):
        cost = [[4, 1, 3], [2, 0, 5], [3, 2, 2]]
        total, cols = lsap(cost)
        assert total == 5
        assert sorted(cols) == [0, 1, 2]
        assert sum(cost[i][c] for i, c in enumerate(cols)) == 5

    def test_empty(self):
        assert lsap([]) == (0, [])

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_brute_force(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 5)
        m = rng.randint(n, 6)
        cost = [[rng.randint(0, 9) for _ in range(m)] for _ in range(n)]
        total, cols = lsap(cost)
        assert len(set(cols)) == n
        assert total == sum(cost[i][c] for i, c in enumerate(cols))
        assert total == brute_assignment(cost, sum)

    def test_rejects_more_rows_than_columns(self):
        with pytest.raises(PreconditionError):
            lsap([[1], [2]])


class TestLbap:
    def test_known_square(self):
        cost = [[9, 2], [2, 9]]
        bottleneck, cols = lbap(cost)
        assert bottleneck == 2
        assert cols == [1, 0]

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_brute_force(self, seed):
        rng = random.Random(100 + seed)
        n = rng.randint(1, 5)
        m = rng.randint(n, 6)
        cost = [[rng.randint(0, 9) for _ in range(m)] for _ in range(n)]
        bottleneck, cols = lbap(cost)
        assert len(set(cols)) == n
        assert bottleneck == max(cost[i][c] for i, c in enumerate(cols))
        assert bottleneck == brute_assignment(cost, max)


class TestHopcroftKarp:
    def test_known_graph(self):
        size, match_l = hopcroft_karp(3, 3, [[0, 1], [0], [1, 2]])
        assert size == 3
        assert sorted(match_l) == [0, 1, 2]

    def test_unmatchable_left_vertex(self):
        size, match_l = hopcroft_karp(2, 1, [[0], [0]])
        assert size == 1
        assert match_l.count(-1) == 1

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_brute_force(self, seed):
        rng = random.Random(200 + seed)
        nl, nr = rng.randint(1, 5), rng.randint(1, 5)
        adj = [
            sorted({rng.randrange(nr) for _ in range(rng.randint(0, 3))})
            for _ in range(nl)
        ]
        size, match_l = hopcroft_karp(nl, nr, adj)
        matched = [(u, v) for u, v in enumerate(match_l) if v != -1]
        assert len(matched) == size
        assert len({v for _, v in matched}) == size
        assert all(v in adj[u] for u, v in matched)
        assert size == brute_max_matching(nl, nr, adj)


class TestMaxWeightMatching:
    def test_prefers_heavy_pair(self):
        weight, mapping = max_weight_matching(
            ["u", "v"], ["x", "y"], {("u", "x"): 5, ("u", "y"): 1, ("v", "x"): 4}
        )
        assert weight == 5
        # two optima tie at 5: u alone on x, or the pair (u,y),(v,x)
        assert mapping in ({"u": "x"}, {"u": "y", "v": "x"})
        assert sum({"u": {"x": 5, "y": 1}, "v": {"x": 4}}[u][v] for u, v in mapping.items()) == 5

    def test_empty_weights(self):
        assert max_weight_matching(["u"], ["x"], {}) == (0, {})

    def test_rejects_negative(self):
        with pytest.raises(PreconditionError):
            max_weight_matching(["u"], ["x"], {("u", "x"): -1})

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_brute_force(self, seed):
        rng = random.Random(300 + seed)
        left = [f"l{i}" for i in range(rng.randint(1, 4))]
        right = [f"r{i}" for i in range(rng.randint(1, 4))]
        weights = {
            (u, v): rng.randint(0, 8)
            for u in left
            for v in right
            if rng.random() < 0.6
        }
        got, mapping = max_weight_matching(left, right, weights)
        assert got == sum(weights[(u, v)] for u, v in mapping.items())
        assert len(set(mapping.values())) == len(mapping)
        best = 0
        pairs = list(weights)
        for r in range(min(len(left), len(right)) + 1):
            for combo in itertools.combinations(pairs, r):
                if len({u for u, _ in combo}) == r and len({v for _, v in combo}) == r:
                    best = max(best, sum(weights[p] for p in combo))
        assert got == best


def brute_min_cut(n, edges, s, t):
    """Minimum s-t cut weight by trying every vertex bipartition."""
    best = None
    rest = [v for v in range(n) if v not in (s, t)]
    for r in range(len(rest) + 1):
        for side in itertools.combinations(rest, r):
            s_side = set(side) | {s}
            w = sum(c for u, v, c in edges if u in s_side and v not in s_side)
            if best is None or w < best:
                best = w
    return best


class TestDinic:
    def test_two_disjoint_unit_paths(self):
        net = Dinic(4)
        net.add_edge(0, 1, 1)
        net.add_edge(1, 3, 1)
        net.add_edge(0, 2, 1)
        net.add_edge(2, 3, 1)
        assert net.max_flow(0, 3) == 2

    def test_flow_on_and_reachability(self):
        net = Dinic(3)
        a = net.add_edge(0, 1, 2)
        b = net.add_edge(1, 2, 1)
        assert net.max_flow(0, 2) == 1
        assert net.flow_on(a) == 1
        assert net.flow_on(b) == 1
        # the bottleneck arc (1, 2) is saturated, so 1 stays reachable but 2 not
        assert net.residual_reachable(0) == {0, 1}

    @pytest.mark.parametrize("seed", range(30))
    def test_max_flow_equals_min_cut(self, seed):
        rng = random.Random(400 + seed)
        n = rng.randint(2, 6)
        edges = []
        for u in range(n):
            for v in range(n):
                if u != v and rng.random() < 0.4:
                    edges.append((u, v, rng.randint(0, 5)))
        net = Dinic(n)
        for u, v, c in edges:
            net.add_edge(u, v, c)
        flow = net.max_flow(0, n - 1)
        assert flow == brute_min_cut(n, edges, 0, n - 1)
        # min-cut read back from the residual: no residual arc may cross it
        reach = net.residual_reachable(0)
        assert 0 in reach and (n - 1) not in reach
        assert flow == sum(c for u, v, c in edges if u in reach and v not in reach)


class TestBipartiteMwis:
    def test_isolated_vertices_all_chosen(self):
        weight, chosen = bipartite_mwis({"a": 3}, {"b": 4}, [])
        assert weight == 7
        assert chosen == {"a", "b"}

    def test_edge_forces_a_choice(self):
        weight, chosen = bipartite_mwis({"a": 3}, {"b": 4}, [("a", "b")])
        assert weight == 4
        assert chosen == {"b"}

    def test_rejects_overlapping_sides(self):
        with pytest.raises(PreconditionError):
            bipartite_mwis({"a": 1}, {"a": 1}, [])

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_brute_force(self, seed):
        rng = random.Random(500 + seed)
        a = {f"a{i}": rng.randint(0, 6) for i in range(rng.randint(1, 4))}
        b = {f"b{i}": rng.randint(0, 6) for i in range(rng.randint(1, 4))}
        edges = [
            (x, y) for x in a for y in b if rng.random() < 0.5
        ]
        weight, chosen = bipartite_mwis(a, b, edges)
        assert all(not (x in chosen and y in chosen) for x, y in edges)
        assert weight == sum(a.get(v, 0) + b.get(v, 0) for v in chosen)
        verts = list(a) + list(b)
        best = 0
        for r in range(len(verts) + 1):
            for combo in itertools.combinations(verts, r):
                s = set(combo)
                if all(not (x in s and y in s) for x, y in edges):
                    best = max(best, sum(a.get(v, 0) + b.get(v, 0) for v in s))
        assert weight == best

    def test_complement_is_a_vertex_cover(self):
        rng = random.Random(7)
        a = {f"a{i}": rng.randint(1, 5) for i in range(4)}
        b = {f"b{i}": rng.randint(1, 5) for i in range(4)}
        edges = [(x, y) for x in a for y in b if rng.random() < 0.5]
        weight, chosen = bipartite_mwis(a, b, edges)
        cover = (set(a) | set(b)) - chosen
        assert all(x in cover or y in cover for x, y in edges)
        total = sum(a.values()) + sum(b.values())
        cover_weight = sum(a.get(v, 0) + b.get(v, 0) for v in cover)
        assert weight + cover_weight == total


class TestMaxProfitFlow:
    def test_simple_profitable_arc(self):
        feasible, profit, flows = max_profit_flow(
            [("s", "t", 0, 3, 2)], "s", "t"
        )
        assert feasible
        assert profit == 6
        assert flows == [3]

    def test_losses_are_left_at_lower_bound(self):
        feasible, profit, flows = max_profit_flow(
            [("s", "t", 1, 5, -3)], "s", "t"
        )
        assert feasible
        assert profit == -3
        assert flows == [1]

    def test_infeasible_lower_bound(self):
        # the middle node cannot pass 2 units on when the exit caps at 1
        feasible, profit, flows = max_profit_flow(
            [("s", "m", 2, 2, 0), ("m", "t", 0, 1, 0)], "s", "t"
        )
        assert not feasible

    def test_chained_profit_respects_bottleneck(self):
        feasible, profit, flows = max_profit_flow(
            [("s", "m", 0, 4, 5), ("m", "t", 0, 2, 0)], "s", "t"
        )
        assert feasible
        assert profit == 10
        assert flows == [2, 2]

    def test_unbounded_cap_requires_nonpositive_profit(self):
        with pytest.raises(PreconditionError):
            max_profit_flow([("s", "t", 0, None, 1)], "s", "t")

    def test_negative_lower_bound_rejected(self):
        with pytest.raises(PreconditionError):
            max_profit_flow([("s", "t", -1, 2, 1)], "s", "t")

    def test_conservation_holds(self):
        arcs = [
            ("s", "a", 0, 3, 1),
            ("s", "b", 1, 2, 0),
            ("a", "t", 0, 2, 2),
            ("b", "t", 0, 2, 1),
            ("a", "b", 0, 1, 0),
        ]
        feasible, profit, flows = max_profit_flow(arcs, "s", "t")
        assert feasible
        assert profit == sum(f * p for f, (_, _, _, _, p) in zip(flows, arcs))
        net = {}
        for f, (u, v, low, cap, _) in zip(flows, arcs):
            assert low <= f <= (cap if cap is not None else f)
            net[u] = net.get(u, 0) + f
            net[v] = net.get(v, 0) - f
        for node, imbalance in net.items():
            if node not in ("s", "t"):
                assert imbalance == 0
