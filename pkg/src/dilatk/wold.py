"""Wandering sets, the Wold splitting and orbit classification for injective maps."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import NotInjective, ShapeMismatch
from .periodic import EPSet
from .symset import (DOWN, UP, Elem, EndCycle, Subset, TailAffineMap, end_cycles, image,
                     injectivity_report)


@dataclass(frozen=True)
class OrbitProfile:
    """Orbit counts: ``cycles[d]`` orbits of period ``d``, plus lines and rays.

    Infinite multiplicities are reported as ``math.inf``.
    """

    cycles: dict = field(default_factory=dict)
    lines: float = 0
    rays: float = 0

    @property
    def is_shift(self) -> bool:
        return not self.cycles and self.lines == 0

    def to_json(self) -> dict:
        def enc(x):
            return "inf" if x == math.inf else int(x)

        return {"cycles": {str(d): enc(c) for d, c in sorted(self.cycles.items())},
                "lines": enc(self.lines), "rays": enc(self.rays)}

    def describe(self) -> str:
        parts = [f"{c} cycle(s) of period {d}" for d, c in sorted(self.cycles.items())]
        parts.append(f"{self.lines} line(s)")
        parts.append(f"{self.rays} ray(s)")
        return ", ".join(parts)


@dataclass(frozen=True)
class WoldSplit:
    wandering: Subset
    shift_part: Subset
    bijective_part: Subset

    def describe(self) -> str:
        return (f"wandering: {self.wandering.describe()}\n"
                f"shift part: {self.shift_part.describe()}\n"
                f"bijective part: {self.bijective_part.describe()}")


def _require_injective_endo(v: TailAffineMap):
    if not v.is_endo:
        raise ShapeMismatch("expected a map from a set to itself")
    rep = injectivity_report(v)
    if not rep.injective:
        raise NotInjective("map is not injective", witness=rep.witness)


def wandering_set(v: TailAffineMap) -> Subset:
    """``A minus v(A)``; finite for injective tail-affine endomaps."""
    _require_injective_endo(v)
    return image(v).complement()


class _Ends:
    """Safe-zone bookkeeping for the end cycles of an injective endomap."""

    def __init__(self, v: TailAffineMap):
        self.v = v
        self.cycles = end_cycles(v)
        self.where: dict[tuple[str, int], tuple[EndCycle, int]] = {}
        for cyc in self.cycles:
            for j, e in enumerate(cyc.ends):
                self.where[e] = (cyc, j)

    def partial_sums(self, cyc: EndCycle, j: int) -> list[int]:
        """Drift accumulated from end ``j`` to each later end of its cycle."""
        k = len(cyc.ends)
        sums, acc = [], 0
        for step in range(k):
            sums.append(acc)
            acc += cyc.offsets[(j + step) % k]
        return sums

    def safe(self, x: Elem) -> tuple[EndCycle, int] | None:
        """The end cycle whose tails carry ``x`` forever, if ``x`` is far enough out."""
        comp = self.v.domain[x.comp]
        if comp.finite:
            return None
        t = self.v.thresholds[x.comp]
        d = UP if x.index >= t else DOWN
        if d == DOWN and x.index >= -t:
            return None
        if d == UP and x.index < t:
            return None
        cyc, j = self.where[(x.comp, d)]
        k = len(cyc.ends)
        for step, p in enumerate(self.partial_sums(cyc, j)):
            cid = cyc.ends[(j + step) % k][0]
            tc = self.v.thresholds[cid]
            n = x.index + p
            if (d == UP and n < tc) or (d == DOWN and n >= -tc):
                return None
        if cyc.total * d < 0:
            return None
        return cyc, j


def forward_closure(v: TailAffineMap, start: Subset) -> Subset:
    """Union of ``v^n(S)`` over ``n >= 0`` for a finite set ``S`` of wandering points."""
    ends = _Ends(v)
    parts: dict[str, EPSet] = {}

    def add(cid, part):
        parts[cid] = parts[cid] | part if cid in parts else part

    limit = sum(1 for _ in v.domain.elements(v.truncation_bound(len(v.tails) + 1))) + 1
    for x in start.elements():
        for _ in range(limit):
            hit = ends.safe(x)
            if hit is not None and hit[0].total != 0:
                cyc, j = hit
                k = len(cyc.ends)
                step = abs(cyc.total)
                for s, p in enumerate(ends.partial_sums(cyc, j)):
                    cid, d = cyc.ends[(j + s) % k]
                    n = x.index + p
                    add(cid, EPSet.at_least(n, step) if d == UP else EPSet.at_most(n, step))
                break
            add(x.comp, EPSet.finite([x.index]))
            x = v(x)
        else:
            raise RuntimeError("forward orbit did not settle into an outward tail")
    return Subset(v.domain, parts)


def wold_decompose(v: TailAffineMap) -> WoldSplit:
    w = wandering_set(v)
    shift = forward_closure(v, w)
    return WoldSplit(w, shift, shift.complement())


def _core_bound(v: TailAffineMap) -> int:
    drift = sum(abs(r.offset) for r in v.tails.values())
    return v.max_threshold() + drift + 1


def classify_orbits(v: TailAffineMap) -> OrbitProfile:
    """Count cyclic, bilateral and unilateral orbits.

    Rays are the points of the wandering set.  Each end cycle drifting
    inward with net offset ``D`` feeds ``|D|`` bilateral orbits.  End cycles
    with zero drift carry infinitely many periodic orbits; every other
    periodic orbit sits inside a bounded core, where it is found by cycle
    detection.
    """
    w = wandering_set(v)
    cycles = end_cycles(v)
    lines = sum(abs(c.total) for c in cycles if c.inward)
    counts: Counter = Counter()
    bound = _core_bound(v)
    core = set(v.domain.elements(bound))
    state: dict[Elem, int] = {}
    for x in sorted(core, key=v.domain.element_key):
        if x in state:
            continue
        path = []
        y = x
        while y in core and y not in state:
            state[y] = 1
            path.append(y)
            y = v(y)
        if y in state and state[y] == 1:
            counts[len(path) - path.index(y)] += 1
        for z in path:
            state[z] = 2
    out: dict = dict(counts)
    for c in cycles:
        if c.periodic:
            out[len(c.ends)] = math.inf
    return OrbitProfile(out, lines, len(w.elements()))


def is_shift(v: TailAffineMap) -> bool:
    return classify_orbits(v).is_shift
