"""Structural classification of preference graphs.

Solvers specialize on graph shape, so each graph is tagged with the most
specific class it belongs to.  Classes are predicates, not a partition:
a single vertex is simultaneously an out-star, a path, and more.  The
`graph_class` function returns the most specific label under a fixed
priority, while the `is_*` predicates answer individual membership.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import Instance, PreconditionError, PreferenceGraph


class GraphClass(enum.Enum):
    OUT_STAR = "out-star"
    OUT_TREE = "out-tree"
    PATH = "path"
    DISJOINT_PATHS = "disjoint-paths"
    DIRECTED_MATCHING = "directed-matching"
    UNION_OUT_STARS = "union-of-out-stars"
    GENERAL_DAG = "general-dag"


def is_out_star(g: PreferenceGraph) -> bool:
    """One root with arcs to every other vertex, and no other arcs.

    A single vertex with no arcs qualifies (root with zero leaves).
    """
    n = len(g.items)
    if n == 0:
        return False
    if n == 1:
        return not g.arcs
    if len(g.arcs) != n - 1:
        return False
    roots = [v for v in g.sorted_items if g.in_degree(v) == 0]
    if len(roots) != 1:
        return False
    root = roots[0]
    return g.out_degree(root) == n - 1


def is_out_tree(g: PreferenceGraph) -> bool:
    """One in-degree-0 root, every other vertex in-degree 1, all reachable."""
    n = len(g.items)
    if n == 0:
        return False
    roots = [v for v in g.sorted_items if g.in_degree(v) == 0]
    if len(roots) != 1:
        return False
    if any(g.in_degree(v) != 1 for v in g.sorted_items if v != roots[0]):
        return False
    return len(g.dominated_set({roots[0]})) == n


def is_path(g: PreferenceGraph) -> bool:
    """A single directed path covering every vertex.

    Single vertices count (a path of length zero).
    """
    n = len(g.items)
    if n == 0:
        return False
    if not is_disjoint_paths(g):
        return False
    return len(g.arcs) == n - 1


def is_disjoint_paths(g: PreferenceGraph) -> bool:
    """Every vertex has in-degree and out-degree at most one."""
    if not g.items:
        return False
    return all(
        g.in_degree(v) <= 1 and g.out_degree(v) <= 1 for v in g.sorted_items
    )


def is_directed_matching(g: PreferenceGraph) -> bool:
    """Disjoint arcs covering all vertices: every vertex has total degree one.

    The empty graph qualifies vacuously; an isolated vertex disqualifies.
    """
    return all(
        g.in_degree(v) + g.out_degree(v) == 1 for v in g.sorted_items
    )


def is_union_out_stars(g: PreferenceGraph) -> bool:
    """Disjoint union of out-stars (isolated vertices allowed).

    Characterized arc-locally: in-degrees at most one, every arc tail has
    in-degree zero, and every arc head has out-degree zero.
    """
    if not g.items:
        return False
    for v in g.sorted_items:
        if g.in_degree(v) > 1:
            return False
    for tail, head in g.arcs:
        if g.in_degree(tail) != 0:
            return False
        if g.out_degree(head) != 0:
            return False
    return True


_PRIORITY = (
    (GraphClass.OUT_STAR, is_out_star),
    (GraphClass.PATH, is_path),
    (GraphClass.OUT_TREE, is_out_tree),
    (GraphClass.DIRECTED_MATCHING, is_directed_matching),
    (GraphClass.DISJOINT_PATHS, is_disjoint_paths),
    (GraphClass.UNION_OUT_STARS, is_union_out_stars),
)


def graph_class(g: PreferenceGraph) -> GraphClass:
    """Most specific class label for a single graph."""
    for label, pred in _PRIORITY:
        if pred(g):
            return label
    return GraphClass.GENERAL_DAG


def graph_classes(g: PreferenceGraph) -> frozenset[GraphClass]:
    """All class labels the graph satisfies (always includes GENERAL_DAG)."""
    out = {label for label, pred in _PRIORITY if pred(g)}
    out.add(GraphClass.GENERAL_DAG)
    return frozenset(out)


def instance_class(inst: Instance) -> GraphClass:
    """Most specific label shared by every agent's graph."""
    if not inst.agents:
        return GraphClass.GENERAL_DAG
    shared = None
    for a in inst.agents:
        cs = graph_classes(inst.graphs[a])
        shared = cs if shared is None else (shared & cs)
    for label, _ in _PRIORITY:
        if label in shared:
            return label
    return GraphClass.GENERAL_DAG


def all_graphs_are(inst: Instance, label: GraphClass) -> bool:
    if label is GraphClass.GENERAL_DAG:
        return True
    pred = dict(_PRIORITY)[label]
    return all(pred(inst.graphs[a]) for a in inst.agents)


# -- junction vertices ---------------------------------------------------


def junctions(g: PreferenceGraph) -> frozenset[str]:
    """Vertices with in-degree above one or out-degree above one."""
    return frozenset(
        v for v in g.sorted_items if g.in_degree(v) > 1 or g.out_degree(v) > 1
    )


def junction_count(inst: Instance) -> int:
    """Total junction vertices across all agents' graphs."""
    return sum(len(junctions(inst.graphs[a])) for a in inst.agents)


@dataclass(frozen=True)
class JunctionSummary:
    """Junction vertices per agent plus their total with multiplicity."""

    per_agent: dict[str, frozenset[str]]
    gamma: int


def junction_summary(inst: Instance) -> JunctionSummary:
    per = {a: junctions(inst.graphs[a]) for a in inst.agents}
    return JunctionSummary(per, sum(len(s) for s in per.values()))


# -- solver routing --------------------------------------------------------

#: Routing the FPT solver through more than this many junction vertices
#: costs over 4^6 outer guesses, which stops being interactive.
DEFAULT_GAMMA_LIMIT = 6


@dataclass(frozen=True)
class SolverChoice:
    """Routing decision: the solver registry name plus the reason."""

    name: str
    reason: str


def dispatch(
    inst: Instance,
    objective: str,
    *,
    gamma_limit: int = DEFAULT_GAMMA_LIMIT,
    oracle_limit: int | None = None,
) -> SolverChoice:
    """Pick the best solver for the instance shape and objective.

    Every polynomial route requires the shape that makes it exact; in
    particular the max objective never routes path forests to the
    bottleneck-assignment solver (only single paths per agent are safe).
    Falls back to the exhaustive oracle when it fits the size guard,
    else reports "oracle-too-large".
    """
    from . import exact

    if objective not in ("sum", "max"):
        raise PreconditionError(f"unknown objective {objective!r}")
    if objective == "sum":
        if all_graphs_are(inst, GraphClass.DIRECTED_MATCHING):
            return SolverChoice("minsum-matchings", "every graph is a directed matching")
        if all_graphs_are(inst, GraphClass.PATH):
            return SolverChoice("minsum-paths", "every graph is a single path")
        if all_graphs_are(inst, GraphClass.DISJOINT_PATHS):
            return SolverChoice(
                "minsum-disjoint-paths", "every graph is a union of disjoint paths"
            )
        if inst.num_agents == 2 and all_graphs_are(inst, GraphClass.UNION_OUT_STARS):
            return SolverChoice(
                "minsum-two-star-forests",
                "two agents, every graph a union of out-stars",
            )
        gamma = junction_count(inst)
        if gamma <= gamma_limit:
            return SolverChoice(
                "minsum-junctions", f"gamma = {gamma} <= {gamma_limit}"
            )
    else:
        if all_graphs_are(inst, GraphClass.PATH):
            return SolverChoice("minmax-paths", "every graph is a single path")
        if inst.num_agents == 2 and all_graphs_are(
            inst, GraphClass.DIRECTED_MATCHING
        ):
            return SolverChoice(
                "minmax-two-matchings", "two agents, every graph a directed matching"
            )
    space = exact.search_space(inst)
    limit = exact._effective_limit(oracle_limit)
    if space <= limit:
        return SolverChoice("oracle", f"search space {space} within limit {limit}")
    return SolverChoice(
        "oracle-too-large", f"search space {space} exceeds limit {limit}"
    )
