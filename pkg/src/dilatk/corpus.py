"""Random and hand-picked injective tail-affine maps for sweeps and tests."""

from __future__ import annotations

import random

from .symset import DOWN, UP, Component, Elem, SymSet, TailAffineMap, Translate


def random_injective_map(rng: random.Random, max_finite: int = 2, max_rays: int = 2,
                         max_lines: int = 2) -> TailAffineMap:
    """An injective endomap built end-first.

    Upward ends are permuted among themselves, as are downward ends, with
    random offsets.  The points the tails do not hit form a finite gap, and
    the window is sent injectively into that gap.
    """
    comps = []
    for k in range(rng.randint(0, max_finite)):
        comps.append(Component(f"F{k}", rng.choice(["fin", "cycle"]), rng.randint(1, 3)))
    n_rays, n_lines = rng.randint(0, max_rays), rng.randint(0, max_lines)
    if not comps and n_rays + n_lines == 0:
        n_rays = 1
    comps += [Component(f"R{k}", "ray") for k in range(n_rays)]
    comps += [Component(f"L{k}", "line") for k in range(n_lines)]
    S = SymSet(comps)
    infinite = [c for c in comps if not c.finite]
    thresholds = {c.id: rng.randint(0, 3) for c in infinite}

    up = [c.id for c in infinite]
    down = [c.id for c in infinite if c.kind == "line"]
    up_targets, down_targets = up[:], down[:]
    rng.shuffle(up_targets)
    rng.shuffle(down_targets)
    tails, lo, hi = {}, {}, {}
    for src, tgt in zip(down, down_targets):
        off = rng.randint(-3, 2)
        tails[(src, DOWN)] = Translate(tgt, off)
        hi[tgt] = -thresholds[src] - 1 + off
    for src, tgt in zip(up, up_targets):
        off = rng.randint(-2, 3)
        floor = 0 if S[tgt].kind == "ray" else hi[tgt] + 1
        off = max(off, floor - thresholds[src])
        tails[(src, UP)] = Translate(tgt, off)
        lo[tgt] = thresholds[src] + off

    def gaps():
        out = [Elem(c.id, n) for c in comps if c.finite for n in range(c.size)]
        for c in infinite:
            start = 0 if c.kind == "ray" else hi[c.id] + 1
            out += [Elem(c.id, n) for n in range(start, lo[c.id])]
        return out

    region = [x for c in comps for x in _window(c, thresholds)]
    gap = gaps()
    if len(gap) < len(region):
        src = rng.choice(up)
        rule = tails[(src, UP)]
        extra = len(region) - len(gap)
        tails[(src, UP)] = Translate(rule.target, rule.offset + extra)
        lo[rule.target] += extra
        gap = gaps()
    chosen = rng.sample(gap, len(region))
    return TailAffineMap(S, S, dict(zip(region, chosen)), thresholds, tails)


def _window(c: Component, thresholds) -> list[Elem]:
    if c.finite:
        return [Elem(c.id, n) for n in range(c.size)]
    t = thresholds[c.id]
    rng = range(t) if c.kind == "ray" else range(-t, t)
    return [Elem(c.id, n) for n in rng]


def archetypes() -> dict[str, TailAffineMap]:
    """Named structured maps covering every orbit type."""
    out = {}
    R = SymSet.of(("R", "ray"))
    L = SymSet.of(("L", "line"))
    out["ray shift"] = TailAffineMap(R, R, {}, {}, {("R", UP): Translate("R", 1)})
    out["ray shift by 3"] = TailAffineMap(R, R, {}, {}, {("R", UP): Translate("R", 3)})
    out["ray identity"] = TailAffineMap.identity(R)
    out["ray swap 0 1"] = TailAffineMap(R, R, {Elem("R", 0): Elem("R", 1), Elem("R", 1): Elem("R", 0)},
                                        {"R": 2}, {("R", UP): Translate("R", 0)})
    out["line shift"] = TailAffineMap(L, L, {}, {}, {("L", UP): Translate("L", 1), ("L", DOWN): Translate("L", 1)})
    out["line shift by -2"] = TailAffineMap(L, L, {}, {}, {("L", UP): Translate("L", -2),
                                                           ("L", DOWN): Translate("L", -2)})
    C = SymSet.of(("C", "cycle", 3))
    out["3-cycle"] = TailAffineMap.from_function(C, C, lambda x: Elem("C", (x.index + 1) % 3))
    F = SymSet.of(("F", "fin", 4))
    out["finite permutation"] = TailAffineMap.from_function(F, F, lambda x: Elem("F", (1, 0, 3, 2)[x.index]))
    RR = SymSet.of(("R0", "ray"), ("R1", "ray"))
    out["two rays crossed"] = TailAffineMap(RR, RR, {}, {}, {("R0", UP): Translate("R1", 0),
                                                            ("R1", UP): Translate("R0", 2)})
    M = SymSet.of(("C", "cycle", 2), ("R", "ray"), ("L", "line"))
    out["cycle, ray into line"] = TailAffineMap(
        M, M, {Elem("C", 0): Elem("C", 1), Elem("C", 1): Elem("C", 0)}, {},
        {("R", UP): Translate("L", 0), ("L", UP): Translate("R", 1), ("L", DOWN): Translate("L", -1)})
    LL = SymSet.of(("L0", "line"), ("L1", "line"))
    out["two lines swapped"] = TailAffineMap(LL, LL, {}, {}, {
        ("L0", UP): Translate("L1", 0), ("L1", UP): Translate("L0", 0),
        ("L0", DOWN): Translate("L1", 0), ("L1", DOWN): Translate("L0", 0)})
    return out
