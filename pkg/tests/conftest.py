"""Shared builders for the test suite."""

import itertools

import pytest

from prefalloc.core import Allocation, Instance, PreferenceGraph, profile


def graph(items, arcs=()) -> PreferenceGraph:
    return PreferenceGraph(frozenset(items), frozenset(arcs))


def instance(graphs: dict) -> Instance:
    pool = set()
    for g in graphs.values():
        pool |= g.items
    return Instance.build(pool, graphs, warn_dropped=False)


def brute_minimum(inst: Instance, objective: str) -> int:
    """Plain exhaustive minimum, written independently of the solvers.

    Enumerates every partial allocation item by item; only usable on
    tiny instances.
    """
    options = []
    for v in inst.items:
        options.append([None] + [a for a in inst.agents if v in inst.graphs[a].items])
    best = None
    for combo in itertools.product(*options):
        bundles: dict = {}
        for v, a in zip(inst.items, combo):
            if a is not None:
                bundles.setdefault(a, set()).add(v)
        prof = profile(inst, Allocation.of(bundles))
        val = prof.total if objective == "sum" else prof.maximum
        if best is None or val < best:
            best = val
    return best


def brute_profiles(inst: Instance) -> set:
    """Every realizable dissatisfaction profile, by the same enumeration."""
    options = []
    for v in inst.items:
        options.append([None] + [a for a in inst.agents if v in inst.graphs[a].items])
    out = set()
    for combo in itertools.product(*options):
        bundles: dict = {}
        for v, a in zip(inst.items, combo):
            if a is not None:
                bundles.setdefault(a, set()).add(v)
        out.add(profile(inst, Allocation.of(bundles)).as_tuple())
    return out


@pytest.fixture
def worked() -> Instance:
    """Three agents over {a, b, c}: one wants everything, two want one item."""
    return instance({"1": graph("abc"), "2": graph("b"), "3": graph("c")})
