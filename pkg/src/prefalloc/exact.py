"""Exhaustive reference solvers.

These enumerate every partial allocation (each item goes to one desiring
agent or to nobody), so they are exponential and guarded by a search-space
limit.  They exist as ground truth: the polynomial solvers are tested
against them, and the dispatcher falls back to them on small instances
that fit no special structure.

Witness convention: items are scanned in sorted order and, per item, the
options are "nobody" first and then desiring agents in sorted order.  The
first optimum in that depth-first order is returned, which pins the
witness down deterministically (the lexicographically least option
vector among optimal allocations).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .core import Allocation, Instance, SizeGuardError

_LIMIT_ENV = "PREFALLOC_ORACLE_LIMIT"
_DEFAULT_LIMIT = 10_000_000


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: Allocation
    leaves: int


def search_space(inst: Instance) -> int:
    """Number of leaf assignments the oracle would enumerate."""
    space = 1
    for v in inst.items:
        options = 1 + sum(1 for a in inst.agents if v in inst.graphs[a].items)
        space *= options
    return space


def _effective_limit(limit: int | None) -> int:
    if limit is not None:
        return limit
    raw = os.environ.get(_LIMIT_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return _DEFAULT_LIMIT


def _guard(inst: Instance, limit: int | None) -> None:
    space = search_space(inst)
    cap = _effective_limit(limit)
    if space > cap:
        raise SizeGuardError(
            f"search space {space} exceeds limit {cap}; "
            f"raise it explicitly or via {_LIMIT_ENV}"
        )


def _prepare(inst: Instance):
    items = inst.items
    agents = inst.agents
    desiring: list[tuple[int, ...]] = []
    reach: list[dict[int, int]] = []  # per item: agent index -> reach mask
    for v in items:
        ds = []
        rs = {}
        for ai, a in enumerate(agents):
            g = inst.graphs[a]
            if v in g.items:
                ds.append(ai)
                rs[ai] = g.reach_mask(v)
        desiring.append(tuple(ds))
        reach.append(rs)
    sizes = [len(inst.graphs[a].items) for a in agents]
    return items, agents, desiring, reach, sizes


def _to_allocation(inst: Instance, assign: list[int | None]) -> Allocation:
    bundles: dict[str, set[str]] = {}
    for v, ai in zip(inst.items, assign):
        if ai is not None:
            bundles.setdefault(inst.agents[ai], set()).add(v)
    return Allocation.of(bundles)


def minimize(
    inst: Instance, objective: str = "sum", limit: int | None = None
) -> OracleResult:
    """Optimal allocation by branch and bound over all partial allocations.

    objective is "sum" (total dissatisfaction) or "max" (worst agent).
    """
    if objective not in ("sum", "max"):
        raise ValueError(f"unknown objective {objective!r}")
    _guard(inst, limit)
    items, agents, desiring, reach, sizes = _prepare(inst)
    n = len(items)
    k = len(agents)

    # pot[ai][j] bounds how much agent ai's dissatisfaction can still drop
    # using items j..n-1 (sum of reach sizes, an overcount).
    pot = [[0] * (n + 1) for _ in range(k)]
    for j in range(n - 1, -1, -1):
        for ai in range(k):
            pot[ai][j] = pot[ai][j + 1] + reach[j].get(ai, 0).bit_count()

    masks = [0] * k
    dissat = sizes[:]
    assign: list[int | None] = [None] * n
    best_value: int | None = None
    best_assign: list[int | None] | None = None
    leaves = 0

    def bound(j: int) -> int:
        # Lower bound on the final objective from this node.
        if objective == "sum":
            return sum(dissat) - sum(pot[ai][j] for ai in range(k))
        return max(dissat[ai] - pot[ai][j] for ai in range(k)) if k else 0

    def dfs(j: int) -> None:
        nonlocal best_value, best_assign, leaves
        if j == n:
            leaves += 1
            value = sum(dissat) if objective == "sum" else (max(dissat) if k else 0)
            if best_value is None or value < best_value:
                best_value = value
                best_assign = assign[:]
            return
        if best_value is not None and bound(j) >= best_value:
            return
        dfs(j + 1)  # leave item j unassigned
        for ai in desiring[j]:
            old_mask = masks[ai]
            new_mask = old_mask | reach[j][ai]
            gained = (new_mask ^ old_mask).bit_count()
            masks[ai] = new_mask
            dissat[ai] -= gained
            assign[j] = ai
            dfs(j + 1)
            assign[j] = None
            dissat[ai] += gained
            masks[ai] = old_mask

    dfs(0)
    assert best_value is not None and best_assign is not None
    return OracleResult(best_value, _to_allocation(inst, best_assign), leaves)


def all_profiles(inst: Instance, limit: int | None = None) -> frozenset[tuple[int, ...]]:
    """Every dissatisfaction profile any partial allocation can realize."""
    _guard(inst, limit)
    items, agents, desiring, reach, sizes = _prepare(inst)
    n = len(items)
    k = len(agents)
    masks = [0] * k
    dissat = sizes[:]
    out: set[tuple[int, ...]] = set()

    def dfs(j: int) -> None:
        if j == n:
            out.add(tuple(dissat))
            return
        dfs(j + 1)
        for ai in desiring[j]:
            old_mask = masks[ai]
            new_mask = old_mask | reach[j][ai]
            gained = (new_mask ^ old_mask).bit_count()
            masks[ai] = new_mask
            dissat[ai] -= gained
            dfs(j + 1)
            dissat[ai] += gained
            masks[ai] = old_mask

    dfs(0)
    return frozenset(out)


def decide(
    inst: Instance,
    objective: str,
    threshold: int,
    limit: int | None = None,
) -> Allocation | None:
    """Witness allocation with objective value at most `threshold`, if any."""
    result = minimize(inst, objective, limit)
    if result.value <= threshold:
        return result.witness
    return None
