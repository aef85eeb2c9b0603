"""Normal form for commuting injections whose product is a shift.

A pair is described by ``BclData``: a finite wandering set ``W``, a
bijection ``u`` of ``W`` and a subset ``W2``.  On ``W x Z+`` (one ray per
label) the model maps are

    s1(w, n) = (u^-1(w), n + [w not in W2])
    s2(w, n) = (u(w),    n + [u(w) in W2])

and ``s1 s2 = s2 s1`` is the unilateral shift.  ``bcl_analyze`` recovers
the data from any commuting injective pair, after splitting off the part
where the product is bijective.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidInput, NotCommuting, NotInjective, NotShift, ShapeMismatch
from .report import VerificationReport
from .symset import (RAY, UP, Component, Elem, Subset, SymSet, TailAffineMap, Translate, compose,
                     compose_all, image, injectivity_report)
from .wold import WoldSplit, wold_decompose


@dataclass(frozen=True)
class BclData:
    w: tuple[str, ...]
    u: tuple[int, ...]
    w2: frozenset[str]

    def __init__(self, w: Iterable[str], u: Iterable[int], w2: Iterable[str]):
        w, u, w2 = tuple(w), tuple(u), frozenset(w2)
        if len(set(w)) != len(w):
            raise InvalidInput("labels of W must be distinct")
        if sorted(u) != list(range(len(w))):
            raise InvalidInput("u must be a bijection of W", witness=list(u))
        if not w2 <= set(w):
            raise InvalidInput("W2 must be a subset of W", witness=sorted(w2 - set(w)))
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w2", w2)

    def u_label(self, label: str) -> str:
        return self.w[self.u[self.w.index(label)]]

    def u_inv_label(self, label: str) -> str:
        return self.w[self.u.index(self.w.index(label))]

    @property
    def w1(self) -> frozenset[str]:
        """``u^-1(W minus W2)``."""
        return frozenset(self.u_inv_label(x) for x in self.w if x not in self.w2)

    def canonical(self) -> "BclData":
        """Labels renamed to ``w0, w1, ...`` in the given order."""
        names = {x: f"w{k}" for k, x in enumerate(self.w)}
        return BclData(names.values(), self.u, (names[x] for x in self.w2))

    def to_json(self) -> dict:
        return {"w": list(self.w), "u": list(self.u), "w2": [x for x in self.w if x in self.w2]}


def all_bcl_data(size: int) -> Iterable[BclData]:
    labels = [f"w{k}" for k in range(size)]
    for u in itertools.permutations(range(size)):
        for bits in itertools.product((False, True), repeat=size):
            yield BclData(labels, u, (x for x, b in zip(labels, bits) if b))


def shift_space(labels: Sequence[str]) -> SymSet:
    return SymSet(Component(x, RAY) for x in labels)


def ray_map(space: SymSet, rule: dict[str, tuple[str, int]]) -> TailAffineMap:
    """The map ``(w, n) -> (rule[w][0], n + rule[w][1])``."""
    return TailAffineMap(space, space, {}, {}, {(w, UP): Translate(t, off) for w, (t, off) in rule.items()})


def unilateral_shift(labels: Sequence[str]) -> TailAffineMap:
    """``1_W x s+``."""
    return ray_map(shift_space(labels), {x: (x, 1) for x in labels})


def bcl_synthesize(d: BclData) -> tuple[SymSet, TailAffineMap, TailAffineMap]:
    A = shift_space(d.w)
    s1 = ray_map(A, {x: (d.u_inv_label(x), 0 if x in d.w2 else 1) for x in d.w})
    s2 = ray_map(A, {x: (d.u_label(x), 1 if d.u_label(x) in d.w2 else 0) for x in d.w})
    return A, s1, s2


# -- analysis ----------------------------------------------------------------


def _require_injective(*maps: TailAffineMap):
    for k, m in enumerate(maps, 1):
        if not m.is_endo:
            raise ShapeMismatch("all maps must act on one set")
        rep = injectivity_report(m)
        if not rep.injective:
            raise NotInjective(f"map {k} is not injective", witness=[str(x) for x in rep.witness])
    if len({m.domain for m in maps}) != 1:
        raise ShapeMismatch("all maps must act on one set")


def _require_commuting(maps: Sequence[TailAffineMap]):
    for j, l in itertools.combinations(range(len(maps)), 2):
        x = compose(maps[j], maps[l]).first_difference(compose(maps[l], maps[j]))
        if x is not None:
            raise NotCommuting(f"maps {j + 1} and {l + 1} do not commute at {x}",
                               witness={"j": j + 1, "k": l + 1, "x": str(x)})


class Relabeling:
    """``g(v^n(w)) = (label(w), n)`` from the shift part onto ``W x Z+``."""

    def __init__(self, v: TailAffineMap, wandering: Sequence[Elem], labels: Sequence[str]):
        self.v = v
        self.label = dict(zip(wandering, labels))
        self.point = dict(zip(labels, wandering))
        self.target = shift_space(labels)

    def __call__(self, x: Elem) -> Elem:
        n = 0
        y = x
        while y not in self.label:
            y = self.v.preimage_elem(y)
            if y is None:
                raise ShapeMismatch(f"{x} is not in the shift part")
            n += 1
        return Elem(self.label[y], n)

    def inverse(self, y: Elem) -> Elem:
        return self.v.power(self.point[y.comp], y.index)


@dataclass
class BclAnalysis:
    split: WoldSplit
    data: BclData
    g: Relabeling
    wandering: tuple[Elem, ...]
    unitary_part: Subset
    report: VerificationReport = field(default_factory=VerificationReport)


def _finite_points(S: Subset, space: SymSet) -> list[Elem]:
    return sorted(S.elements(), key=space.element_key)


def bcl_analyze(v1: TailAffineMap, v2: TailAffineMap, depth: int = 8) -> BclAnalysis:
    """Split off the bijective part of ``v = v1 v2`` and read off ``(W, u, W2)`` on the rest."""
    _require_injective(v1, v2)
    _require_commuting([v1, v2])
    A = v1.domain
    v = compose(v1, v2)
    split = wold_decompose(v)
    W = _finite_points(split.wandering, A)
    W1 = set((image(v1).complement()).elements())
    W2 = set((image(v2).complement()).elements())
    labels = [f"w{k}" for k in range(len(W))]
    name = dict(zip(W, labels))
    u = []
    for x in W:
        y = v2(x) if x in W1 else v1.preimage_elem(x)
        if y is None or y not in name:
            raise ShapeMismatch(f"u is not defined at {x}; the pair is not of the expected form")
        u.append(labels.index(name[y]))
    data = BclData(labels, u, (name[x] for x in W if x in W2))
    g = Relabeling(v, W, labels)
    rep = VerificationReport("BCL analysis")
    _check_relabeling(rep, A, split, g, [v1, v2], bcl_synthesize(data)[1:], unilateral_shift(labels), depth)
    unitary = split.bijective_part
    for k, m in enumerate((v1, v2), 1):
        on_unitary = image(m, unitary)
        if on_unitary == unitary:
            rep.passed(f"v{k} bijective on the unitary part")
        else:
            rep.fail(f"v{k} bijective on the unitary part", (on_unitary - unitary) | (unitary - on_unitary))
    return BclAnalysis(split, data, g, tuple(W), unitary, rep)


def _check_relabeling(rep, A, split, g, maps, models, shift, depth):
    """``g v = (1 x s+) g`` and ``g v_k = s_k g`` on the shift part, pointwise to ``depth``."""
    v = compose_all(*maps)
    for y in g.target.elements(depth):
        x = g.inverse(y)
        rep.count("shift-part points")
        if g(x) != y:
            rep.fail("g bijective", str(y))
        if g(v(x)) != shift(y):
            rep.fail("g v = (1 x s+) g", str(y))
        for k, (m, s) in enumerate(zip(maps, models), 1):
            if g(m(x)) != s(y):
                rep.fail(f"g v{k} = s{k} g", str(y))
    rep.passed("g bijective")
    rep.passed("g v = (1 x s+) g")
    for k in range(1, len(maps) + 1):
        rep.passed(f"g v{k} = s{k} g")
    for x in split.shift_part.truncated(depth):
        try:
            g(x)
        except ShapeMismatch:
            rep.fail("g defined on the shift part", str(x))
    rep.passed("g defined on the shift part")


def bcl_roundtrip_check(d: BclData, depth: int = 12) -> VerificationReport:
    rep = VerificationReport(f"BCL round trip |W|={len(d.w)}")
    A, s1, s2 = bcl_synthesize(d)
    shift = unilateral_shift(d.w)
    rep.merge(_pair_report(s1, s2, shift, depth))
    try:
        an = bcl_analyze(s1, s2, depth)
    except Exception as e:  # reported, not raised
        rep.fail("analysis", f"{type(e).__name__}: {e}")
        return rep
    rep.merge(an.report)
    if an.unitary_part.is_empty():
        rep.passed("empty unitary part")
    else:
        rep.fail("empty unitary part", an.unitary_part.describe())
    if an.data == d.canonical():
        rep.passed("data recovered")
    else:
        rep.fail("data recovered", {"expected": d.canonical().to_json(), "got": an.data.to_json()})
    return rep


def bcl_pair_report(s1: TailAffineMap, s2: TailAffineMap, depth: int = 12) -> VerificationReport:
    """Check that ``s1 s2 = s2 s1 = 1 x s+`` on the rays of ``s1``'s domain."""
    return _pair_report(s1, s2, unilateral_shift(s1.domain.ids()), depth)


def _pair_report(s1, s2, shift, depth) -> VerificationReport:
    rep = VerificationReport("BCL pair")
    for k, m in ((1, s1), (2, s2)):
        if injectivity_report(m).injective:
            rep.passed(f"s{k} injective")
        else:
            rep.fail(f"s{k} injective", "collision")
    for name, prod in (("s1 s2 = 1 x s+", compose(s1, s2)), ("s2 s1 = 1 x s+", compose(s2, s1))):
        x = prod.first_difference(shift)
        if x is not None:
            rep.fail(name, str(x))
        for y in shift.domain.elements(depth):
            rep.count("pointwise product checks")
            if prod(y) != shift(y):
                rep.fail(name, str(y))
        rep.passed(name)
    W = shift.domain.subset(Elem(c, 0) for c in shift.domain.ids())
    levels = [set(W.elements())]
    for m in range(1, depth + 1):
        levels.append({shift(x) for x in levels[-1]})
    seen: set = set()
    for m, lvl in enumerate(levels):
        if seen & lvl:
            rep.fail("wandering levels disjoint", m)
        seen |= lvl
    rep.passed("wandering levels disjoint")
    return rep


# -- n-tuples ------------------------------------------------------------------


def cyclic_orders(n: int) -> list[tuple[int, ...]]:
    """``sigma_k`` for ``k = 0..n-1``, as 0-based tuples ``sigma_k[j] = (k + j) % n``."""
    return [tuple((k + j) % n for j in range(n)) for k in range(n)]


@dataclass
class BclMultiData:
    w: tuple[str, ...]
    u: tuple[tuple[int, ...], ...]
    w_prime: tuple[frozenset[str], ...]
    s: tuple[TailAffineMap, ...]
    g: Relabeling
    report: VerificationReport

    @property
    def w_double_prime(self) -> tuple[frozenset[str], ...]:
        return tuple(frozenset(self.w) - wp for wp in self.w_prime)

    def to_json(self) -> dict:
        return {"w": list(self.w), "u": [list(t) for t in self.u],
                "w_prime": [[x for x in self.w if x in wp] for wp in self.w_prime]}


def _decomposition(maps, Ws, sigma, W):
    """Locate each ``x`` of ``W`` in the pieces ``v_s(1)...v_s(k-1)(W_s(k))``."""
    where = {}
    for k in range(len(sigma)):
        prefix = sigma[:k]
        for w in Ws[sigma[k]]:
            x = w
            for j in reversed(prefix):
                x = maps[j](x)
            if x in where:
                raise ShapeMismatch(f"{x} lies in two pieces of the decomposition of W")
            where[x] = (k, w)
    missing = [x for x in W if x not in where]
    if missing or len(where) != len(W):
        raise ShapeMismatch("pieces do not decompose W", witness=[str(x) for x in missing])
    return where


def bcl_multi_analyze(maps: Sequence[TailAffineMap], depth: int = 6) -> BclMultiData:
    maps = list(maps)
    _require_injective(*maps)
    _require_commuting(maps)
    n = len(maps)
    A = maps[0].domain
    v = compose_all(*maps)
    split = wold_decompose(v)
    if not split.bijective_part.is_empty():
        raise NotShift("the product is not a shift", witness=str(split.bijective_part.sample()))
    W = _finite_points(split.wandering, A)
    Ws = [set(image(m).complement().elements()) for m in maps]
    labels = [f"w{k}" for k in range(len(W))]
    name = dict(zip(W, labels))
    sigmas = cyclic_orders(n)
    pieces = [_decomposition(maps, Ws, s, W) for s in sigmas]

    def u_between(src: int, dst: int, x: Elem) -> Elem:
        k, w = pieces[src][x]
        target = sigmas[src][k]
        r = sigmas[dst].index(target)
        y = w
        for j in reversed(sigmas[dst][:r]):
            y = maps[j](y)
        return y

    u_tables, w_prime = [], []
    for k in range(1, n + 1):
        src, dst = k % n, k - 1
        u_tables.append(tuple(labels.index(name[u_between(src, dst, x)]) for x in W))
        others = [maps[i] for i in range(n) if i != k - 1]
        wp = set()
        for w in Ws[k - 1]:
            y = w
            for m in reversed(others):
                y = m(y)
            wp.add(name[y])
        w_prime.append(frozenset(wp))

    space = shift_space(labels)
    s_maps = tuple(
        ray_map(space, {labels[i]: (labels[u_tables[k][i]], 1 if labels[i] in w_prime[k] else 0)
                        for i in range(len(W))})
        for k in range(n))
    g = Relabeling(v, W, labels)
    rep = VerificationReport(f"BCL analysis of {n} maps")
    for k, t in enumerate(u_tables, 1):
        if sorted(t) == list(range(len(W))):
            rep.passed(f"u{k} bijective")
        else:
            rep.fail(f"u{k} bijective", list(t))
    shift = unilateral_shift(labels)
    prod = compose_all(*s_maps)
    x = prod.first_difference(shift)
    if x is None:
        rep.passed("product of s_k = 1 x s+")
    else:
        rep.fail("product of s_k = 1 x s+", str(x))
    _check_relabeling(rep, A, split, g, maps, s_maps, shift, depth)
    return BclMultiData(tuple(labels), tuple(u_tables), tuple(w_prime), s_maps, g, rep)
