"""Single-variable dilations of finite endofunctions.

Every construction here uses the same presentation of ``B``: the fibre over
a base point ``a`` is the component ``a{a}``, so the pair ``(a, m)`` is the
element ``Elem(f"a{a}", m)``.  Points outside a defect space get a
one-point fibre, points inside get a ray (or a line for the bijective
version).  The base set itself is the single finite component ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .endo import DefectSpace, FinFunc, defect_space, eventual_image
from .errors import BijectionFailure, NotCoinvariant, NotVerified, ShapeMismatch
from .report import VerificationReport
from .symset import (FIN, LINE, RAY, UP, DOWN, Component, Elem, Periodic, SymSet, TailAffineMap,
                     Translate, compose, image, injectivity_report)

BASE = "A"


def base_set(n: int) -> SymSet:
    return SymSet([Component(BASE, FIN, n)])


def base_map(h: FinFunc) -> TailAffineMap:
    """``h`` as a map on the presented base set."""
    A = base_set(h.n)
    return TailAffineMap.from_function(A, A, lambda x: Elem(BASE, h(x.index)))


def fibre(a: int) -> str:
    return f"a{a}"


def point(a: int, m: int = 0) -> Elem:
    return Elem(fibre(a), m)


def fibre_point(x: Elem) -> tuple[int, int]:
    if not x.comp.startswith("a"):
        raise ValueError(f"{x} is not a fibre point")
    return int(x.comp[1:]), x.index


@dataclass(frozen=True, eq=False)
class DilationQuadruple:
    kind: str
    A: SymSet
    B: SymSet
    i: TailAffineMap
    v: TailAffineMap
    p: TailAffineMap
    bilateral: bool = False

    def __post_init__(self):
        if self.i.domain != self.A or self.i.codomain != self.B:
            raise ShapeMismatch("i must map the base set into B")
        for name in ("v", "p"):
            m = getattr(self, name)
            if m.domain != self.B or m.codomain != self.B:
                raise ShapeMismatch(f"{name} must map B to itself")

    def compression(self) -> TailAffineMap:
        """The base map ``i^-1 o p o v o i`` that this quadruple dilates (finite bases)."""
        if not self.A.is_finite:
            raise ShapeMismatch("compression is tabulated only for finite bases")

        def f(x):
            z = self.i.preimage_elem(self.p(self.v(self.i(x))))
            if z is None:
                raise NotVerified("p(v(i(a))) is outside i(A)", witness=str(x))
            return z

        return TailAffineMap.from_function(self.A, self.A, f)

    def base_function(self) -> FinFunc:
        if len(self.A) != 1 or not self.A.is_finite:
            raise ShapeMismatch("base is not a single finite block")
        m = self.compression()
        return FinFunc(m(Elem(self.A.ids()[0], a)).index for a in range(self.A.components[0].size))

    def __eq__(self, other):
        if not isinstance(other, DilationQuadruple):
            return NotImplemented
        return (self.A == other.A and self.B == other.B and self.bilateral == other.bilateral
                and self.i == other.i and self.v == other.v and self.p == other.p)

    __hash__ = object.__hash__


def _orbit_tail(h: FinFunc, a: int) -> tuple[int, Periodic]:
    """Preperiod of ``a`` and the periodic rule ``m -> (h^m(a), 0)`` past it."""
    tau, period = h.tail_and_period(a)
    start = h.power(a, tau)
    return tau, Periodic(tuple(point(h.power(start, k)) for k in range(period)))


def _build(h: FinFunc, comps: dict[int, str], kind: str, bilateral: bool = False) -> DilationQuadruple:
    A = base_set(h.n)
    B = SymSet(Component(fibre(a), kind_, 1 if kind_ == FIN else None) for a, kind_ in comps.items())
    i = TailAffineMap.from_function(A, B, lambda x: point(x.index))
    v_tails, p_tails, v_thr, p_thr = {}, {}, {}, {}
    for a, kind_ in comps.items():
        if kind_ == FIN:
            continue
        v_tails[(fibre(a), UP)] = Translate(fibre(a), 1)
        tau, rule = _orbit_tail(h, a)
        p_thr[fibre(a)] = tau
        p_tails[(fibre(a), UP)] = rule
        if kind_ == LINE:
            v_tails[(fibre(a), DOWN)] = Translate(fibre(a), 1)
            p_tails[(fibre(a), DOWN)] = Periodic((point(a),))

    def v_fn(x):
        a, m = fibre_point(x)
        return point(h(a)) if comps[a] == FIN else point(a, m + 1)

    def p_fn(x):
        a, m = fibre_point(x)
        return point(h.power(a, m)) if m >= 0 else point(a)

    v = TailAffineMap.from_function(B, B, v_fn, v_thr, v_tails)
    p = TailAffineMap.from_function(B, B, p_fn, p_thr, p_tails)
    return DilationQuadruple(kind, A, B, i, v, p, bilateral)


def standard_dilation(h: FinFunc) -> DilationQuadruple:
    """One ray over every point; ``v`` climbs the ray, ``p(a, m) = (h^m(a), 0)``."""
    return _build(h, {a: RAY for a in range(h.n)}, "standard")


def defect_dilation(h: FinFunc, D: DefectSpace | Iterable[int]) -> DilationQuadruple:
    """Rays only over the defect space; elsewhere ``v`` follows ``h`` on level 0."""
    D = defect_space(h, D.members if isinstance(D, DefectSpace) else D)
    return _build(h, {a: RAY if a in D else FIN for a in range(h.n)}, "defect")


def unitary_dilation(h: FinFunc) -> DilationQuadruple:
    """A line over every point with a bijective translation.

    Below level 0 the projection simply returns to ``(a, 0)``; any choice
    works there and this one keeps the map tail-affine.
    """
    return _build(h, {a: LINE for a in range(h.n)}, "unitary", bilateral=True)


def halmos_dilate(h: FinFunc) -> DilationQuadruple:
    """Two levels per point, ``u`` swapping them, ``p(a, 1) = (h(a), 0)``.

    Only the one-step identity ``i(h(a)) = p(u(i(a)))`` is guaranteed.
    """
    A = base_set(h.n)
    B = SymSet(Component(fibre(a), FIN, 2) for a in range(h.n))
    i = TailAffineMap.from_function(A, B, lambda x: point(x.index))
    u = TailAffineMap.from_function(B, B, lambda x: Elem(x.comp, 1 - x.index))
    p = TailAffineMap.from_function(B, B, lambda x: x if x.index == 0 else point(h(fibre_point(x)[0])))
    return DilationQuadruple("halmos", A, B, i, u, p)


def check_one_step(q: DilationQuadruple, h: FinFunc) -> VerificationReport:
    rep = VerificationReport(f"one-step identity for {q.kind} quadruple")
    for a in range(h.n):
        x = Elem(BASE, a)
        rep.count("points")
        if q.i(Elem(BASE, h(a))) != q.p(q.v(q.i(x))):
            rep.fail("one-step identity", {"a": a})
    rep.passed("one-step identity")
    return rep


# -- verification ---------------------------------------------------------


def _as_base_map(q: DilationQuadruple, h) -> TailAffineMap:
    hm = base_map(h) if isinstance(h, FinFunc) else h
    if hm.domain != q.A or hm.codomain != q.A:
        raise ShapeMismatch("base map does not act on the quadruple's base set")
    return hm


def trace_to_base(q: DilationQuadruple, y: Elem, limit: int, bilateral: bool = False):
    """Find ``(x, n)`` with ``x`` in ``A`` and ``v^n(i(x)) = y``, or ``None``.

    Walks backwards through ``v``; for bilateral quadruples a forward walk
    (negative ``n``) is tried as well.
    """
    z = y
    for n in range(limit + 1):
        x = q.i.preimage_elem(z)
        if x is not None:
            return x, n
        z = q.v.preimage_elem(z)
        if z is None:
            break
    if bilateral:
        z = y
        for n in range(1, limit + 1):
            z = q.v(z)
            x = q.i.preimage_elem(z)
            if x is not None:
                return x, -n
    return None


def reach_limit(q: DilationQuadruple, bound: int) -> int:
    return sum(1 for _ in q.B.elements(q.v.truncation_bound(bound))) + bound + 1


def verify_power_dilation(q: DilationQuadruple, h, depth: int) -> VerificationReport:
    """Check the four defining clauses of a power dilation of ``h``.

    The identity ``i(h^n(a)) = p(v^n(i(a)))`` is checked for ``n <= depth``
    (and base points up to ``depth`` on infinite bases).  Injectivity,
    idempotence and the range of ``p`` are decided exactly; minimality is
    checked on the truncation ``|index| <= depth`` of ``B``.
    """
    hm = _as_base_map(q, h)
    rep = VerificationReport(f"power dilation ({q.kind}) to depth {depth}")
    for name, m in (("i injective", q.i), ("v injective", q.v)):
        r = injectivity_report(m)
        if r.injective:
            rep.passed(name)
        else:
            rep.fail(name, [str(x) for x in r.witness])
    if q.bilateral:
        r = injectivity_report(q.v)
        if r.bijective:
            rep.passed("v bijective")
        else:
            rep.fail("v bijective", "v is not onto")

    for x in q.A.elements(depth):
        img = x
        y = q.i(x)
        for n in range(depth + 1):
            rep.count("identity instances")
            if q.i(img) != q.p(y):
                rep.fail("identity", {"a": str(x), "n": n, "expected": str(q.i(img)),
                                               "got": str(q.p(y))})
            img = hm(img)
            y = q.v(y)
    rep.passed("identity")

    diff = compose(q.p, q.p).first_difference(q.p)
    if diff is None:
        rep.passed("p idempotent")
    else:
        rep.fail("p idempotent", {"x": str(diff), "p(x)": str(q.p(diff)), "p(p(x))": str(q.p(q.p(diff)))})

    p_range, i_range = image(q.p), image(q.i)
    if p_range == i_range:
        rep.passed("range")
    else:
        extra = (p_range - i_range) | (i_range - p_range)
        rep.fail("range", str(extra.sample()), "p(B) differs from i(A)")

    limit = reach_limit(q, depth)
    for y in q.B.elements(depth):
        rep.count("B points examined")
        if trace_to_base(q, y, limit, q.bilateral) is None:
            rep.fail("minimal", str(y), "point not of the form v^n(i(a))")
    rep.passed("minimal")
    return rep


def coinvariance_witness(q: DilationQuadruple) -> Elem | None:
    """A point outside ``i(A)`` that ``v`` sends into ``i(A)``."""
    inside = image(q.i)
    outside = inside.complement()
    bad = image(q.v, outside) & inside
    if bad.is_empty():
        return None
    return q.v.preimage_elem(bad.sample())


def is_coinvariant(q: DilationQuadruple, depth: int = 0) -> bool:
    return coinvariance_witness(q) is None


def _require_coinvariant(q: DilationQuadruple):
    w = coinvariance_witness(q)
    if w is not None:
        raise NotCoinvariant(f"v({w}) = {q.v(w)} lies in i(A)", witness=str(w))


def defect_of_dilation(q: DilationQuadruple, depth: int = 8) -> DefectSpace:
    """``{a : v(i(a)) not in i(A)}`` for a verified co-invariant quadruple."""
    _require_coinvariant(q)
    h = q.base_function()
    rep = verify_power_dilation(q, h, depth)
    if not rep.ok:
        bad = rep.failed()[0]
        raise NotVerified(f"quadruple fails verification: {bad.name}", witness=bad.witness)
    inside = image(q.i)
    members = [a for a in range(h.n) if q.v(q.i(Elem(BASE, a))) not in inside]
    return defect_space(h, members)


@dataclass(frozen=True)
class EqualitySandwich:
    """A bijection ``psi`` from a model quadruple onto another, tabulated on a truncation."""

    psi: dict
    depth: int
    defect: tuple[int, ...] = ()

    def __call__(self, x: Elem) -> Elem:
        return self.psi[x]

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.psi.items())


def equivalence_to_defect_model(q: DilationQuadruple, depth: int = 8) -> EqualitySandwich:
    """Build ``psi(a, m) = v^m(i(a))`` from the defect model onto ``q``."""
    _require_coinvariant(q)
    D = defect_of_dilation(q, depth)
    h = q.base_function()
    model = defect_dilation(h, D)
    psi: dict[Elem, Elem] = {}
    back: dict[Elem, Elem] = {}
    for x in model.B.elements(depth):
        a, m = fibre_point(x)
        y = q.v.power(q.i(Elem(BASE, a)), m)
        if y in back:
            raise BijectionFailure(f"psi({back[y]}) = psi({x}) = {y}", witness=(str(back[y]), str(x)))
        psi[x] = y
        back[y] = x
    limit = reach_limit(q, depth)
    for y in q.B.elements(depth):
        found = trace_to_base(q, y, limit)
        if found is None:
            raise BijectionFailure(f"{y} is not reached by psi", witness=str(y))
        a, m = found[0].index, found[1]
        if point(a, m) not in model.B:
            raise BijectionFailure(f"{y} = v^{m}(i({a})) has no counterpart in the model", witness=str(y))
    for a in range(h.n):
        x = Elem(BASE, a)
        if psi[model.i(x)] != q.i(x):
            raise BijectionFailure("psi o i_D differs from i", witness=a)
    for x in model.B.elements(depth - 1 if depth > 0 else 0):
        for name, lhs, rhs in (("v", q.v(psi[x]), psi.get(model.v(x))),
                               ("p", q.p(psi[x]), psi.get(model.p(x)))):
            if rhs is not None and lhs != rhs:
                raise BijectionFailure(f"psi does not intertwine {name} at {x}", witness=str(x))
    return EqualitySandwich(psi, depth, D.members)


def shift_criterion(h: FinFunc, D: DefectSpace | Iterable[int]) -> bool:
    """Whether the defect dilation's ``v`` is a shift, decided on the base alone.

    ``v`` fails to be a shift exactly when some point has an infinite chain
    of ``h``-preimages that stays outside ``D``.  So the sets
    ``S_0 = D^c``, ``S_{n+1} = h(S_n) & D^c`` are iterated and the verdict is
    whether their intersection is empty.
    """
    D = defect_space(h, D.members if isinstance(D, DefectSpace) else D)
    comp = D.complement(h.n)
    return not eventual_image(h, comp, within=comp)


def unrestricted_image_test(h: FinFunc, D: DefectSpace | Iterable[int]) -> bool:
    """Emptiness of the intersection of ``h^n(D^c)`` with ``h`` iterated on all of ``A``.

    Agrees with :func:`shift_criterion` when ``h`` maps ``D^c`` into itself,
    but not in general (``h = [1, 0, 0]``, ``D = {1}`` is a shift where this
    test says otherwise).
    """
    D = defect_space(h, D.members if isinstance(D, DefectSpace) else D)
    return not eventual_image(h, D.complement(h.n))
