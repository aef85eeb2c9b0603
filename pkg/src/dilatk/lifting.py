"""Lifting intertwiners to dilations, compressing them back, and projections from invariant sandwiches."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .dilation1 import (BASE, DilationQuadruple, defect_dilation, fibre, fibre_point, point,
                        standard_dilation)
from .endo import DefectSpace, FinFunc, defect_space
from .errors import (AgreementFail, DefectCompatibilityFail, InvalidInput, LiftIdentitiesFail,
                     NotIntertwining, NotInvariant, ShapeMismatch, TooLarge, Unsupported)
from .report import VerificationReport
from .symset import (UP, Elem, Subset, SymSet, TailAffineMap, Translate, compose, image,
                     injectivity_report)

SANDWICH_LIMIT = 16


@dataclass(frozen=True)
class Intertwiner:
    """A function ``s`` from a base of size ``len(table)`` into one of size ``target``."""

    table: tuple[int, ...]
    target: int

    def __init__(self, table: Iterable[int], target: int):
        tab = tuple(table)
        for a, b in enumerate(tab):
            if not isinstance(b, int) or not 0 <= b < target:
                raise InvalidInput(f"s({a}) = {b!r} is outside [0, {target})", witness=a)
        object.__setattr__(self, "table", tab)
        object.__setattr__(self, "target", target)

    def __call__(self, a: int) -> int:
        return self.table[a]

    def to_json(self) -> dict:
        return {"n": len(self.table), "target": self.target, "table": list(self.table)}


@dataclass(frozen=True, eq=False)
class Lift:
    """``r: B2 -> B1`` between two dilations."""

    r: TailAffineMap
    upper: DilationQuadruple  # dilation of h1
    lower: DilationQuadruple  # dilation of h2


def intertwining_witness(h1: FinFunc, h2: FinFunc, s: Intertwiner) -> int | None:
    if len(s.table) != h2.n or s.target != h1.n:
        raise ShapeMismatch("s must map the base of h2 into the base of h1")
    for a in range(h2.n):
        if s(h2(a)) != h1(s(a)):
            return a
    return None


def all_intertwiners(h1: FinFunc, h2: FinFunc) -> Iterable[Intertwiner]:
    """Every ``s`` with ``s h2 = h1 s``, by filtering all functions."""
    for tab in itertools.product(range(h1.n), repeat=h2.n):
        s = Intertwiner(tab, h1.n)
        if intertwining_witness(h1, h2, s) is None:
            yield s


def _require_intertwining(h1, h2, s):
    a = intertwining_witness(h1, h2, s)
    if a is not None:
        raise NotIntertwining(f"s(h2({a})) = {s(h2(a))} but h1(s({a})) = {h1(s(a))}", witness=a)


def _fibrewise(q2: DilationQuadruple, q1: DilationQuadruple, s: Intertwiner) -> TailAffineMap:
    """``(a, m) -> (s(a), m)`` from ``q2.B`` to ``q1.B``."""
    tails = {(c.id, UP): Translate(fibre(s(fibre_point(Elem(c.id, 0))[0])), 0)
             for c in q2.B if not c.finite}

    def f(x):
        a, m = fibre_point(x)
        return point(s(a), m)

    return TailAffineMap.from_function(q2.B, q1.B, f, {}, tails)


def intertwine_lift(h1: FinFunc, h2: FinFunc, s: Intertwiner) -> Lift:
    """Lift ``s`` to ``r(a, m) = (s(a), m)`` between standard dilations."""
    _require_intertwining(h1, h2, s)
    q1, q2 = standard_dilation(h1), standard_dilation(h2)
    return Lift(_fibrewise(q2, q1, s), q1, q2)


def defect_intertwine_lift(h1: FinFunc, D1, h2: FinFunc, D2, s: Intertwiner) -> Lift:
    """Lift between defect dilations; needs ``s`` to respect both defect partitions."""
    D1 = defect_space(h1, D1.members if isinstance(D1, DefectSpace) else D1)
    D2 = defect_space(h2, D2.members if isinstance(D2, DefectSpace) else D2)
    _require_intertwining(h1, h2, s)
    for a in range(h2.n):
        if (a in D2) != (s(a) in D1):
            side = "D2" if a in D2 else "complement of D2"
            raise DefectCompatibilityFail(f"{a} lies in the {side} but s({a}) = {s(a)} does not match",
                                          witness=a)
    q1, q2 = defect_dilation(h1, D1), defect_dilation(h2, D2)
    return Lift(_fibrewise(q2, q1, s), q1, q2)


def lift_report(lift: Lift, s: Intertwiner | None = None) -> VerificationReport:
    """Exact check of ``r v2 = v1 r``, ``r p2 = p1 r`` and (given ``s``) ``r i2 = i1 s``."""
    r, q1, q2 = lift.r, lift.upper, lift.lower
    rep = VerificationReport("lift identities")
    for name, lhs, rhs in (("r v2 = v1 r", compose(r, q2.v), compose(q1.v, r)),
                           ("r p2 = p1 r", compose(r, q2.p), compose(q1.p, r))):
        x = lhs.first_difference(rhs)
        if x is None:
            rep.passed(name)
        else:
            rep.fail(name, str(x))
    if s is not None:
        for a in range(len(s.table)):
            if r(q2.i(Elem(BASE, a))) != q1.i(Elem(BASE, s(a))):
                rep.fail("r i2 = i1 s", a)
        rep.passed("r i2 = i1 s")
    return rep


def lift_report_to_depth(lift: Lift, depth: int) -> VerificationReport:
    """Pointwise version of :func:`lift_report` on the truncation ``|index| <= depth``."""
    r, q1, q2 = lift.r, lift.upper, lift.lower
    rep = VerificationReport(f"lift identities to depth {depth}")
    for x in q2.B.elements(depth):
        rep.count("points")
        if r(q2.v(x)) != q1.v(r(x)):
            rep.fail("r v2 = v1 r", str(x))
        if r(q2.p(x)) != q1.p(r(x)):
            rep.fail("r p2 = p1 r", str(x))
    rep.passed("r v2 = v1 r")
    rep.passed("r p2 = p1 r")
    return rep


def intertwine_compress(lift: Lift) -> Intertwiner:
    """Recover the unique ``s`` with ``r(i2(a)) = i1(s(a))``."""
    rep = lift_report(lift)
    if not rep.ok:
        bad = rep.failed()[0]
        raise LiftIdentitiesFail(f"{bad.name} fails", witness=bad.witness)
    r, q1, q2 = lift.r, lift.upper, lift.lower
    h1, h2 = q1.base_function(), q2.base_function()
    table = []
    for a in range(h2.n):
        y = r(q2.p(q2.i(Elem(BASE, a))))
        x = q1.i.preimage_elem(y)
        if x is None:
            raise LiftIdentitiesFail(f"r(p2(i2({a}))) = {y} is outside i1(A1)", witness=a)
        table.append(x.index)
    s = Intertwiner(table, h1.n)
    a = intertwining_witness(h1, h2, s)
    if a is not None:
        raise LiftIdentitiesFail(f"extracted s does not intertwine at {a}", witness=a)
    if q1.kind == "defect" and q2.kind == "defect":
        inner1 = image(q1.i)
        for a in range(h2.n):
            b = Elem(BASE, a)
            if q2.v(q2.i(b)) in image(q2.i) and q1.v(q1.i(Elem(BASE, s(a)))) not in inner1:
                raise DefectCompatibilityFail(f"s({a}) leaves the complement of D1", witness=a)
    return s


# -- projections from invariant sandwiches -----------------------------------


def _as_subset(space: SymSet, xs) -> Subset:
    if isinstance(xs, Subset):
        if xs.space != space:
            raise ShapeMismatch("subset of a different set")
        return xs
    return space.subset(Elem(*x) for x in xs)


def _invariance_witness(v: TailAffineMap, S: Subset) -> Elem | None:
    leak = image(v, S) - S
    if leak.is_empty():
        return None
    return v.preimage_elem(leak.sample())


def sarason_projection(v: TailAffineMap, A1, A2, h: Mapping[Elem, Elem] | TailAffineMap) -> TailAffineMap:
    """An idempotent ``p`` onto ``A = A2 minus A1`` with ``p v^n = h^n`` on ``A``.

    On the forward orbits of ``A`` the value is forced; every other point
    goes to the smallest point of ``A``.  Finite ``B`` is handled in
    general, infinite ``B`` only in the degenerate case ``A = B``.
    """
    B = v.domain
    if not v.is_endo:
        raise ShapeMismatch("v must be an endomap")
    rep = injectivity_report(v)
    if not rep.injective:
        from .errors import NotInjective

        raise NotInjective("v is not injective", witness=rep.witness)
    S1, S2 = _as_subset(B, A1), _as_subset(B, A2)
    if not S1.issubset(S2):
        raise InvalidInput("A1 must be contained in A2")
    for name, S in (("A1", S1), ("A2", S2)):
        w = _invariance_witness(v, S)
        if w is not None:
            raise NotInvariant(f"{name} is not v-invariant: v({w}) = {v(w)} leaves it", witness=str(w))
    A = S2 - S1
    if A.is_empty():
        raise InvalidInput("A = A2 minus A1 is empty")
    hf = h if callable(h) else (lambda x: h[x])

    if not B.is_finite:
        if not S1.is_empty() or S2 != B.full():
            raise Unsupported("projections on infinite sets are supported only for A1 = {} and A2 = B")
        bound = v.comparison_bound()
        for x in B.elements(bound):
            if hf(x) != v(x):
                raise AgreementFail(f"h({x}) = {hf(x)} but v({x}) = {v(x)}", witness=str(x))
        return TailAffineMap.identity(B)

    members = A.elements()
    for a in members:
        if v(a) in A and hf(a) != v(a):
            raise AgreementFail(f"h({a}) = {hf(a)} but v({a}) = {v(a)} lies in A", witness=str(a))
        if hf(a) not in A:
            raise InvalidInput(f"h({a}) = {hf(a)} is outside A", witness=str(a))
    table: dict[Elem, Elem] = {}
    size = int(B.cardinality())
    for a in members:
        x, y = a, a
        for _ in range(size + 1):
            if x in table and table[x] != y:
                raise AgreementFail(f"p is not well defined at {x}", witness=str(x))
            table[x] = y
            x, y = v(x), hf(y)
    fallback = members[0]
    return TailAffineMap.from_function(B, B, lambda x: table.get(x, fallback))


def check_projection(v: TailAffineMap, A, h, p: TailAffineMap, depth: int) -> VerificationReport:
    """Check ``p^2 = p``, ``p(B) = A`` and ``p v^n(a) = h^n(a)`` for ``n <= depth``."""
    B = v.domain
    S = _as_subset(B, A)
    hf = h if callable(h) else (lambda x: h[x])
    rep = VerificationReport(f"projection to depth {depth}")
    x = compose(p, p).first_difference(p)
    if x is None:
        rep.passed("p idempotent")
    else:
        rep.fail("p idempotent", str(x))
    if image(p) == S:
        rep.passed("p(B) = A")
    else:
        rep.fail("p(B) = A", (image(p) - S) | (S - image(p)))
    for a in S.truncated(depth):
        x, y = a, a
        for n in range(depth + 1):
            rep.count("instances")
            if p(x) != y:
                rep.fail("p v^n = h^n", {"a": str(a), "n": n})
            x, y = v(x), hf(y)
    rep.passed("p v^n = h^n")
    return rep


def find_invariant_sandwich(v: TailAffineMap, A, limit: int = SANDWICH_LIMIT):
    """Invariant ``A1 <= A2`` with ``A = A2 minus A1``, smallest ``A1`` first; ``None`` if none exist."""
    B = v.domain
    if not B.is_finite:
        raise Unsupported("sandwich search needs a finite set")
    if B.cardinality() > limit:
        raise TooLarge(f"|B| = {int(B.cardinality())} exceeds the search limit {limit}")
    S = _as_subset(B, A)
    rest = (B.full() - S).elements()
    for k in range(len(rest) + 1):
        for chosen in itertools.combinations(rest, k):
            A1 = B.subset(chosen)
            A2 = S | A1
            if _invariance_witness(v, A1) is None and _invariance_witness(v, A2) is None:
                return A1, A2
    return None
