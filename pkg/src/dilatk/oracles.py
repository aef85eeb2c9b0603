"""Brute-force references that work on explicit truncations only.

Nothing here uses the structural analysis of tail rules; every answer is
read off from a finite piece of the functional graph.
"""

from __future__ import annotations

import math
from collections import Counter

from .symset import Elem, TailAffineMap


def _scale(v: TailAffineMap) -> int:
    drift = sum(abs(getattr(r, "offset", 0)) for r in v.tails.values())
    reach = max((abs(y.index) for y in v.window.values()), default=0)
    return v.max_threshold() + drift + reach + 2


def truncated_graph(v: TailAffineMap, bound: int) -> dict[Elem, Elem]:
    return {x: v(x) for x in v.domain.elements(bound)}


def brute_wandering(v: TailAffineMap, bound: int) -> set[Elem]:
    """Points of the ``bound`` truncation that no point of a wider truncation reaches."""
    hit = set(truncated_graph(v, bound + _scale(v)).values())
    return {x for x in v.domain.elements(bound) if x not in hit}


def _cycle_lengths(graph: dict[Elem, Elem]) -> Counter:
    counts: Counter = Counter()
    state: dict[Elem, int] = {}
    for x in graph:
        if x in state:
            continue
        path = []
        y = x
        while y in graph and y not in state:
            state[y] = 1
            path.append(y)
            y = graph[y]
        if y in state and state[y] == 1:
            counts[len(path) - path.index(y)] += 1
        for z in path:
            state[z] = 2
    return counts


def brute_orbit_profile(v: TailAffineMap) -> tuple[dict, int, int]:
    """``(cycles, lines, rays)`` by tracing orbits through growing truncations.

    Cycle counts that keep growing between two truncations are reported as
    infinite.  Non-periodic orbits are the connected pieces of the truncated
    graph that meet a central core; a piece with a point outside ``v(A)`` is
    a ray, any other one a line.
    """
    s = _scale(v)
    core, wide = s, 8 * s
    small = _cycle_lengths(truncated_graph(v, 4 * s))
    big = _cycle_lengths(truncated_graph(v, wide))
    cycles = {d: (math.inf if big[d] > small[d] else big[d]) for d in big}

    graph = truncated_graph(v, wide)
    parent = {x: x for x in graph}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in graph.items():
        if y in parent:
            parent[find(x)] = find(y)
    on_cycle = set()
    for x in graph:
        y = x
        for _ in range(len(graph) + 1):
            if y not in graph:
                break
            y = graph[y]
            if y == x:
                on_cycle.add(find(x))
                break
    starts = brute_wandering(v, wide)
    start_roots = {find(x) for x in starts}
    core_roots = {find(x) for x in v.domain.elements(core)}
    lines = len(core_roots - on_cycle - start_roots)
    return cycles, lines, len(starts)
