"""Polynomial-time solvers for structured preference graphs.

Each solver states its structural precondition and raises
PreconditionError outside it.  All of them return exact optima; the tests
check them against the exhaustive reference solver.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import classify
from .core import Allocation, Instance, PreconditionError, profile
from .kernels import bipartite_mwis, lbap, lsap, max_weight_matching


@dataclass(frozen=True)
class SolveResult:
    value: int
    witness: Allocation


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise PreconditionError(message)


# -- directed matchings, minimize total dissatisfaction ----------------------


def minsum_directed_matchings(inst: Instance) -> SolveResult:
    """Min total dissatisfaction when every graph is a directed matching.

    One max-weight matching in an auxiliary bipartite graph.  Per desired
    item there is a slot pairing it with its owner ("x" nodes) and per
    item a shared exclusivity node ("z"); taking an arc's tail is worth 2
    (it covers both ends), taking the head is worth 1.  A heavy node per
    arc ("y") blocks one of the arc's two slots, so each arc contributes
    at most one of the two takes, which keeps the count exact.
    """
    for a in inst.agents:
        _require(
            classify.is_directed_matching(inst.graphs[a]),
            f"graph of agent {a!r} is not a directed matching",
        )
    total_items = len(inst.items)
    heavy = 2 * total_items
    left = []
    right = [("z", v) for v in inst.items]
    weights: dict[tuple, int] = {}
    for a in inst.agents:
        g = inst.graphs[a]
        for v in g.sorted_items:
            left.append(("x", a, v))
            weights[(("x", a, v), ("z", v))] = 2 if g.out_degree(v) == 1 else 1
        for arc in sorted(g.arcs):
            tail, head = arc
            right.append(("y", a, arc))
            weights[(("x", a, tail), ("y", a, arc))] = heavy
            weights[(("x", a, head), ("y", a, arc))] = heavy
    _, matched = max_weight_matching(left, right, weights)
    bundles: dict[str, set[str]] = {}
    for lnode, rnode in matched.items():
        if rnode[0] == "z":
            _, a, v = lnode
            bundles.setdefault(a, set()).add(v)
    alloc = Allocation.of(bundles)
    return SolveResult(profile(inst, alloc).total, alloc)


# -- single paths: assignment reductions --------------------------------------


def _path_order(g) -> list[str]:
    starts = [v for v in g.sorted_items if g.in_degree(v) == 0]
    order = [starts[0]]
    while True:
        nxt = g.out_neighbors(order[-1])
        if not nxt:
            return order
        order.append(nxt[0])


def _paths_matrix(inst: Instance) -> tuple[list[list[int]], list[str]]:
    for a in inst.agents:
        _require(
            classify.is_path(inst.graphs[a]),
            f"graph of agent {a!r} is not a single path",
        )
    items = list(inst.items)
    k = inst.num_agents
    cost = []
    for a in inst.agents:
        g = inst.graphs[a]
        depth = {v: i for i, v in enumerate(_path_order(g))}
        size = len(g.items)
        row = [depth.get(v, size) for v in items]
        row.extend([size] * k)  # "agent receives nothing" slots
        cost.append(row)
    return cost, items


def _paths_decode(inst: Instance, cols: list[int], items: list[str]) -> Allocation:
    bundles: dict[str, set[str]] = {}
    for i, a in enumerate(inst.agents):
        j = cols[i]
        if j < len(items) and items[j] in inst.graphs[a].items:
            bundles.setdefault(a, set()).add(items[j])
    return Allocation.of(bundles)


def minsum_paths(inst: Instance) -> SolveResult:
    """Min total dissatisfaction when every graph is one directed path.

    Receiving an item covers it and everything after it on the path, so
    only an agent's earliest received item matters; that makes one item
    per agent enough, which is a linear sum assignment.
    """
    cost, items = _paths_matrix(inst)
    total, cols = lsap(cost)
    alloc = _paths_decode(inst, cols, items)
    return SolveResult(total, alloc)


def minmax_paths(inst: Instance) -> SolveResult:
    """Min worst-agent dissatisfaction for single paths (bottleneck assignment)."""
    cost, items = _paths_matrix(inst)
    value, cols = lbap(cost)
    alloc = _paths_decode(inst, cols, items)
    return SolveResult(value, alloc)


# -- disjoint unions of paths, minimize total ---------------------------------


def minsum_disjoint_paths(inst: Instance) -> SolveResult:
    """Min total dissatisfaction when every graph is a union of disjoint paths.

    Dissatisfaction splits over path components, so each component acts
    as its own tiny agent and the whole thing is again one assignment
    problem: rows are (agent, component) pairs, columns are items plus
    one "nothing" slot per row.
    """
    rows: list[tuple[str, list[str]]] = []
    for a in inst.agents:
        g = inst.graphs[a]
        _require(
            classify.is_disjoint_paths(g),
            f"graph of agent {a!r} is not a union of disjoint paths",
        )
        seen: set[str] = set()
        for v in g.sorted_items:
            if v in seen or g.in_degree(v) != 0:
                continue
            comp = [v]
            while g.out_neighbors(comp[-1]):
                comp.append(g.out_neighbors(comp[-1])[0])
            seen.update(comp)
            rows.append((a, comp))
    if not rows:
        return SolveResult(0, Allocation.empty())
    items = list(inst.items)
    cost = []
    for _, comp in rows:
        depth = {v: i for i, v in enumerate(comp)}
        size = len(comp)
        row = [depth.get(v, size) for v in items]
        row.extend([size] * len(rows))
        cost.append(row)
    total, cols = lsap(cost)
    bundles: dict[str, set[str]] = {}
    for r, (a, _) in enumerate(rows):
        j = cols[r]
        if j < len(items) and items[j] in inst.graphs[a].items:
            bundles.setdefault(a, set()).add(items[j])
    alloc = Allocation.of(bundles)
    return SolveResult(profile(inst, alloc).total, alloc)


# -- two agents with star-forest graphs ---------------------------------------


def _star_roles(inst: Instance):
    _require(inst.num_agents == 2, "exactly two agents required")
    for a in inst.agents:
        _require(
            classify.is_union_out_stars(inst.graphs[a]),
            f"graph of agent {a!r} is not a union of out-stars",
        )


def preassign_two_star_forests(inst: Instance) -> Allocation:
    """Forced part of an optimal allocation for two star-forest agents.

    Items only one agent desires go to that agent.  A shared item that
    roots a star for exactly one agent goes to that agent, and the star's
    shared leaves go to the other agent (worthless to the root's owner
    once the root is theirs).  When both graphs claim the same leaf, the
    first claim in (agent, item) order stands; either way the leaf is
    already covered for both agents, so the value is unaffected.
    """
    _star_roles(inst)
    a1, a2 = inst.agents
    g = {a1: inst.graphs[a1], a2: inst.graphs[a2]}
    assigned: dict[str, str] = {}
    for v in inst.items:
        own1 = v in g[a1].items
        own2 = v in g[a2].items
        if own1 and not own2:
            assigned[v] = a1
        elif own2 and not own1:
            assigned[v] = a2
    for agent, other in ((a1, a2), (a2, a1)):
        mine, theirs = g[agent], g[other]
        for v in mine.sorted_items:
            if v not in theirs.items:
                continue
            if mine.in_degree(v) == 0 and theirs.in_degree(v) == 1:
                assigned.setdefault(v, agent)
                for u in mine.out_neighbors(v):
                    if u in theirs.items and u not in assigned:
                        assigned[u] = other
    bundles: dict[str, set[str]] = {}
    for v, a in assigned.items():
        bundles.setdefault(a, set()).add(v)
    return Allocation.of(bundles)


def minsum_two_star_forests(inst: Instance) -> SolveResult:
    """Min total dissatisfaction for two agents with star-forest graphs.

    After the forced preassignment the undecided items are exactly the
    shared ones rooting stars in both graphs or hanging as leaves in
    both.  Giving item v to agent i is worth the part of v's star cone
    not already covered for i; the only interactions are "don't pay a
    leaf twice along with its own root" and "one agent per item", and
    that conflict graph is bipartite, so a max-weight independent set
    finishes the job.
    """
    _star_roles(inst)
    a1, a2 = inst.agents
    pre = preassign_two_star_forests(inst)
    g = {a1: inst.graphs[a1], a2: inst.graphs[a2]}
    dom0 = {a: g[a].dominated_set(pre.get(a) & g[a].items) for a in (a1, a2)}
    taken = pre.assigned_items()
    remaining = [v for v in inst.items if v not in taken]

    def weight(v: str, a: str) -> int:
        cone = {v} | g[a].successors(v)
        return len(cone - dom0[a])

    side_a: dict[tuple, int] = {}
    side_b: dict[tuple, int] = {}
    root_both: set[str] = set()
    for v in remaining:
        # Remaining items sit in both graphs, as roots of both or leaves
        # of both; that split is what makes the conflict graph two-sided.
        if g[a1].in_degree(v) == 0:
            root_both.add(v)
            side_a[(v, a1)] = weight(v, a1)
            side_b[(v, a2)] = weight(v, a2)
        else:
            side_b[(v, a1)] = weight(v, a1)
            side_a[(v, a2)] = weight(v, a2)
    edges = []
    for v in remaining:
        if v in root_both:
            edges.append(((v, a1), (v, a2)))
        else:
            edges.append(((v, a2), (v, a1)))
    rem = set(remaining)
    for r in sorted(root_both):
        for a in (a1, a2):
            for u in g[a].out_neighbors(r):
                if u in rem:
                    pair = ((r, a), (u, a)) if a == a1 else ((u, a), (r, a))
                    edges.append(pair)
    _, chosen = bipartite_mwis(side_a, side_b, edges)
    bundles = {a: set(pre.get(a)) for a in (a1, a2)}
    for v, a in chosen:
        bundles[a].add(v)
    alloc = Allocation.of(bundles)
    return SolveResult(profile(inst, alloc).total, alloc)


# -- two agents with directed matchings: min worst dissatisfaction ------------


def _matching_walks(inst: Instance):
    """Components of the two graphs' overlay, as walks.

    Every overlay vertex has degree one per graph containing it, so
    components are alternating paths and even cycles.  Returns a list of
    (verts, edges, closing) where edges[j] describes the arc between
    verts[j] and verts[j+1] as (graph_no, forward) and closing is None
    for paths or the (graph_no, forward) arc from the last vertex back
    to the first.
    """
    a1, a2 = inst.agents
    arcs = []
    for gno, a in ((1, a1), (2, a2)):
        for tail, head in sorted(inst.graphs[a].arcs):
            arcs.append((tail, head, gno))
    inc: dict[str, list[int]] = {v: [] for v in inst.items}
    for eid, (tail, head, _) in enumerate(arcs):
        inc[tail].append(eid)
        inc[head].append(eid)

    def other_end(eid: int, v: str) -> str:
        tail, head, _ = arcs[eid]
        return head if v == tail else tail

    def edge_label(eid: int, from_v: str) -> tuple[int, bool]:
        tail, _, gno = arcs[eid]
        return (gno, tail == from_v)

    visited_e = [False] * len(arcs)
    seen_v: set[str] = set()
    walks = []
    # Path components first: start from degree-1 vertices in sorted order.
    for v0 in inst.items:
        if v0 in seen_v or len(inc[v0]) != 1:
            continue
        verts = [v0]
        edges = []
        seen_v.add(v0)
        cur = v0
        while True:
            nxt_e = [e for e in inc[cur] if not visited_e[e]]
            if not nxt_e:
                break
            eid = nxt_e[0]
            visited_e[eid] = True
            edges.append(edge_label(eid, cur))
            cur = other_end(eid, cur)
            verts.append(cur)
            seen_v.add(cur)
        walks.append((verts, edges, None))
    # Remaining components are cycles.
    for v0 in inst.items:
        if v0 in seen_v:
            continue
        verts = [v0]
        edges = []
        seen_v.add(v0)
        cur = v0
        first = sorted(
            inc[v0], key=lambda e: (arcs[e][2], arcs[e][0] != v0, arcs[e][0], arcs[e][1])
        )[0]
        eid = first
        while True:
            visited_e[eid] = True
            label = edge_label(eid, cur)
            cur = other_end(eid, cur)
            if cur == verts[0]:
                walks.append((verts, edges, label))
                break
            edges.append(label)
            verts.append(cur)
            seen_v.add(cur)
            eid = [e for e in inc[cur] if not visited_e[e]][0]
    return walks


def _step_delta(vj_graphs, vprev_graphs, e_j, e_next, sp, s):
    """Dissatisfaction added when choosing state s for the walk's next vertex.

    States: 0 = item unallocated, 1/2 = item given to that agent.  A
    vertex's coverage for an agent depends on its own state and possibly
    the state of the arc-mate feeding it; every such fact is charged at
    the step where it first becomes determined.
    """
    dd = [0, 0]
    for q in (1, 2):
        if q in vj_graphs:
            gno, fwd = e_j
            if gno == q:
                if fwd:  # arc comes in from the previous vertex
                    if s != q and sp != q:
                        dd[q - 1] += 1
                else:  # this vertex is the arc's tail
                    if s != q:
                        dd[q - 1] += 1
            elif e_next is not None and e_next[0] == q:
                if e_next[1]:  # tail of the next arc
                    if s != q:
                        dd[q - 1] += 1
                # else: settled one step later
        if q in vprev_graphs:
            gno, fwd = e_j
            if gno == q and not fwd:  # previous vertex is this arc's head
                if sp != q and s != q:
                    dd[q - 1] += 1
    return dd


def _component_table(inst: Instance, verts, edges, closing):
    """All (dissat_1, dissat_2) pairs a component can realize, with decode info.

    Returns (pairs, finals, tables) where finals maps a pair to its
    first-written final DP key and tables hold parent pointers.
    """
    a1, a2 = inst.agents
    member = {}
    for v in verts:
        ms = set()
        if v in inst.graphs[a1].items:
            ms.add(1)
        if v in inst.graphs[a2].items:
            ms.add(2)
        member[v] = ms

    def states(v):
        return [0] + sorted(member[v])

    is_cycle = closing is not None
    edge_at = list(edges) + ([closing] if is_cycle else [])

    # Keys: (anchor_state, state, d1, d2) where anchor is the first
    # vertex's state (needed to close cycles; harmless for paths).
    first = verts[0]
    table0 = {}
    for s0 in states(first):
        d = [0, 0]
        gno, fwd = edge_at[0]
        if fwd and gno in member[first]:
            if s0 != gno:
                d[gno - 1] += 1
        table0[(s0, s0, d[0], d[1])] = None
    tables = [table0]
    for j in range(1, len(verts)):
        e_j = edges[j - 1]
        e_next = edge_at[j] if j < len(edge_at) else None
        cur = {}
        for key in sorted(tables[j - 1]):
            s0, sp, d1, d2 = key
            for s in states(verts[j]):
                dd = _step_delta(member[verts[j]], member[verts[j - 1]], e_j, e_next, sp, s)
                nk = (s0, s, d1 + dd[0], d2 + dd[1])
                if nk not in cur:
                    cur[nk] = key
        tables.append(cur)
    finals: dict[tuple[int, int], tuple] = {}
    for key in sorted(tables[-1]):
        s0, s_last, d1, d2 = key
        if is_cycle:
            gno, fwd_close = closing
            q = gno
            if fwd_close:  # arc from last vertex back to the first
                if s0 != q and s_last != q:
                    d1, d2 = (d1 + 1, d2) if q == 1 else (d1, d2 + 1)
            else:  # arc from the first vertex out to the last
                add = 0
                if s0 != q:
                    add += 1
                if s_last != q and s0 != q:
                    add += 1
                d1, d2 = (d1 + add, d2) if q == 1 else (d1, d2 + add)
        finals.setdefault((d1, d2), key)
    return frozenset(finals), finals, tables


def _decode_component(verts, finals, tables, pair):
    key = finals[pair]
    states_rev = []
    for j in range(len(tables) - 1, -1, -1):
        states_rev.append(key[1])
        key = tables[j][key]
    states_rev.reverse()
    return {v: s for v, s in zip(verts, states_rev) if s}


def two_matchings_profiles(inst: Instance) -> frozenset[tuple[int, int]]:
    """Every dissatisfaction pair two matching-shaped agents can realize."""
    _require(inst.num_agents == 2, "exactly two agents required")
    for a in inst.agents:
        _require(
            classify.is_directed_matching(inst.graphs[a]),
            f"graph of agent {a!r} is not a directed matching",
        )
    combined = {(0, 0)}
    for verts, edges, closing in _matching_walks(inst):
        pairs, _, _ = _component_table(inst, verts, edges, closing)
        combined = {
            (d1 + p1, d2 + p2) for d1, d2 in combined for p1, p2 in pairs
        }
    return frozenset(combined)


def minmax_two_matchings(inst: Instance) -> SolveResult:
    """Min worst-agent dissatisfaction for two agents with directed matchings.

    Dynamic program along the overlay's paths and cycles; component pair
    sets are then combined and the best total pair picked (smallest max,
    then lexicographic), with backpointers rebuilding a witness.
    """
    _require(inst.num_agents == 2, "exactly two agents required")
    for a in inst.agents:
        _require(
            classify.is_directed_matching(inst.graphs[a]),
            f"graph of agent {a!r} is not a directed matching",
        )
    comps = _matching_walks(inst)
    infos = [
        (verts, *_component_table(inst, verts, edges, closing))
        for verts, edges, closing in comps
    ]
    # combined[c]: pair -> (previous pair, this component's pair)
    layers: list[dict[tuple[int, int], tuple]] = [{(0, 0): None}]
    for _, pairs, _, _ in infos:
        prev = layers[-1]
        cur: dict[tuple[int, int], tuple] = {}
        for base in sorted(prev):
            for p in sorted(pairs):
                key = (base[0] + p[0], base[1] + p[1])
                if key not in cur:
                    cur[key] = (base, p)
        layers.append(cur)
    target = min(layers[-1], key=lambda t: (max(t), t))
    choices = []
    cursor = target
    for c in range(len(infos), 0, -1):
        base, p = layers[c][cursor]
        choices.append(p)
        cursor = base
    choices.reverse()
    a1, a2 = inst.agents
    bundles: dict[str, set[str]] = {a1: set(), a2: set()}
    for (verts, _, finals, tables), p in zip(infos, choices):
        for v, s in _decode_component(verts, finals, tables, p).items():
            bundles[a1 if s == 1 else a2].add(v)
    alloc = Allocation.of(bundles)
    return SolveResult(max(target), alloc)
