"""Dilations of families of functions: commuting (multi-index) and free (word) versions.

Points of the dilation spaces are plain tuples ``(a, label)``.  For the free
version the label is a word over ``J = {0..k-1}`` (a tuple, ``()`` being the
empty word); ``v_j`` prepends ``j`` and
``p(a, (j1, ..., jk)) = (h_j1(...h_jk(a)), ())``.  For the commuting
version the label is a multi-index (a tuple of length ``k``) and ``v_j``
adds one to coordinate ``j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .endo import FinFunc
from .errors import (BijectionFailure, DefectInvalid, HypothesisFail, InvalidInput,
                     NotCoinvariant, NotCommuting, NotInvariantComplement, ShapeMismatch)
from .report import VerificationReport
from .dilation1 import EqualitySandwich

FREE, COMMUTING = "free", "commuting"


@dataclass(frozen=True)
class FuncFamily:
    maps: tuple[FinFunc, ...]

    def __init__(self, maps: Iterable):
        ms = tuple(m if isinstance(m, FinFunc) else FinFunc(m) for m in maps)
        if not ms:
            raise InvalidInput("a family needs at least one map")
        if len({m.n for m in ms}) != 1:
            raise ShapeMismatch("all maps of a family must act on the same base")
        object.__setattr__(self, "maps", ms)

    @property
    def n(self) -> int:
        return self.maps[0].n

    @property
    def k(self) -> int:
        return len(self.maps)

    def __getitem__(self, j: int) -> FinFunc:
        return self.maps[j]

    def commuting_witness(self) -> tuple[int, int, int] | None:
        for j, l in itertools.combinations(range(self.k), 2):
            hj, hl = self.maps[j].table, self.maps[l].table
            for a in range(self.n):
                if hj[hl[a]] != hl[hj[a]]:
                    return j, l, a
        return None

    @property
    def commuting(self) -> bool:
        return self.commuting_witness() is None

    def apply_word(self, word: Sequence[int], a: int) -> int:
        """``h_{w1} o ... o h_{wk}`` applied to ``a``."""
        for j in reversed(word):
            a = self.maps[j].table[a]
        return a

    def apply_multi(self, alpha: Sequence[int], a: int) -> int:
        for j, e in enumerate(alpha):
            tab = self.maps[j].table
            for _ in range(e):
                a = tab[a]
        return a

    def to_json(self) -> dict:
        return {"n": self.n, "maps": [list(m.table) for m in self.maps]}


def words(k: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """All words over ``range(k)`` of length at most ``max_len``, shortest first."""
    for length in range(max_len + 1):
        yield from itertools.product(range(k), repeat=length)


def multi_indices(k: int, max_total: int) -> Iterator[tuple[int, ...]]:
    for total in range(max_total + 1):
        for cut in itertools.combinations(range(total + k - 1), k - 1):
            bounds = (-1,) + cut + (total + k - 1,)
            yield tuple(bounds[t + 1] - bounds[t] - 1 for t in range(k))


class LazyDilation:
    """Common interface: ``i``, ``v``, ``p``, membership, truncations and ``v``-preimages."""

    mode: str
    n: int
    k: int

    def i(self, a: int):
        raise NotImplementedError

    def v(self, j: int, x):
        raise NotImplementedError

    def p(self, x):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def elements(self, depth: int) -> Iterator:
        raise NotImplementedError

    def preimage(self, j: int, y):
        """The ``x`` with ``v_j(x) = y``, or ``None``."""
        raise NotImplementedError

    def v_word(self, word: Sequence[int], x):
        for j in reversed(word):
            x = self.v(j, x)
        return x

    def base_of(self, y) -> int | None:
        for a in range(self.n):
            if self.i(a) == y:
                return a
        return None

    def compressions(self) -> FuncFamily:
        """``h_j = i^-1 o p o v_j o i``."""
        maps = []
        for j in range(self.k):
            row = []
            for a in range(self.n):
                b = self.base_of(self.p(self.v(j, self.i(a))))
                if b is None:
                    raise ShapeMismatch(f"p(v_{j}(i({a}))) lies outside i(A)")
                row.append(b)
            maps.append(FinFunc(row))
        return FuncFamily(maps)


class WordDilation(LazyDilation):
    """``B = A x words``, or its defect version ``D^c x {()} u D x words``."""

    mode = FREE

    def __init__(self, family: FuncFamily, defect: Iterable[int] | None = None):
        self.family = family
        self.n, self.k = family.n, family.k
        self.defect = frozenset(range(self.n) if defect is None else defect)
        self._tables = [m.table for m in family.maps]
        self._inv = [{} for _ in range(self.k)]
        for j, tab in enumerate(self._tables):
            for a in range(self.n):
                if a not in self.defect:
                    self._inv[j][tab[a]] = a

    def i(self, a):
        return (a, ())

    def v(self, j, x):
        a, w = x
        if not w and a not in self.defect:
            return (self._tables[j][a], ())
        return (a, (j,) + w)

    def p(self, x):
        a, w = x
        for j in reversed(w):
            a = self._tables[j][a]
        return (a, ())

    def contains(self, x) -> bool:
        a, w = x
        return 0 <= a < self.n and (not w or a in self.defect) and all(0 <= j < self.k for j in w)

    def elements(self, depth):
        for w in words(self.k, depth):
            for a in range(self.n):
                if not w or a in self.defect:
                    yield (a, w)

    def preimage(self, j, y):
        a, w = y
        if w:
            return (a, w[1:]) if w[0] == j else None
        b = self._inv[j].get(a)
        return None if b is None else (b, ())


class MultiIndexDilation(LazyDilation):
    """``B = A x Z_+^J`` (finitely supported), or ``D^c x {0} u D x Z_+^J``."""

    mode = COMMUTING

    def __init__(self, family: FuncFamily, defect: Iterable[int] | None = None):
        self.family = family
        self.n, self.k = family.n, family.k
        self.defect = frozenset(range(self.n) if defect is None else defect)
        self.zero = (0,) * self.k
        self._tables = [m.table for m in family.maps]
        self._inv = [{} for _ in range(self.k)]
        for j, tab in enumerate(self._tables):
            for a in range(self.n):
                if a not in self.defect:
                    self._inv[j][tab[a]] = a

    def i(self, a):
        return (a, self.zero)

    def v(self, j, x):
        a, alpha = x
        if a not in self.defect and alpha == self.zero:
            return (self._tables[j][a], self.zero)
        return (a, alpha[:j] + (alpha[j] + 1,) + alpha[j + 1:])

    def p(self, x):
        a, alpha = x
        return (self.family.apply_multi(alpha, a), self.zero)

    def contains(self, x) -> bool:
        a, alpha = x
        return (0 <= a < self.n and len(alpha) == self.k and all(e >= 0 for e in alpha)
                and (alpha == self.zero or a in self.defect))

    def elements(self, depth):
        for alpha in multi_indices(self.k, depth):
            for a in range(self.n):
                if alpha == self.zero or a in self.defect:
                    yield (a, alpha)

    def preimage(self, j, y):
        a, alpha = y
        if alpha[j] > 0:
            return (a, alpha[:j] + (alpha[j] - 1,) + alpha[j + 1:])
        if alpha != self.zero:
            return None
        b = self._inv[j].get(a)
        return None if b is None else (b, self.zero)


class CallableDilation(LazyDilation):
    """A dilation given by plain functions; preimages come from a tabulated inverse."""

    def __init__(self, n: int, k: int, i: Callable, v: Callable, p: Callable,
                 elements: Callable[[int], Iterable], contains: Callable, mode: str = FREE):
        self.n, self.k, self.mode = n, k, mode
        self._i, self._v, self._p = i, v, p
        self._elements, self._contains = elements, contains
        self._inverse: dict = {}
        self._inverse_depth = -1

    def i(self, a):
        return self._i(a)

    def v(self, j, x):
        return self._v(j, x)

    def p(self, x):
        return self._p(x)

    def contains(self, x) -> bool:
        return self._contains(x)

    def elements(self, depth):
        return iter(self._elements(depth))

    def preimage(self, j, y, depth: int = 6):
        if depth > self._inverse_depth:
            self._inverse = {(jj, self._v(jj, x)): x for x in self._elements(depth) for jj in range(self.k)}
            self._inverse_depth = depth
        return self._inverse.get((j, y))


# -- constructions -------------------------------------------------------------


def _require_commuting(f: FuncFamily):
    w = f.commuting_witness()
    if w is not None:
        j, l, a = w
        raise NotCommuting(f"h_{j} h_{l}({a}) != h_{l} h_{j}({a})", witness={"j": j, "k": l, "a": a})


def commuting_standard_dilation(f: FuncFamily) -> MultiIndexDilation:
    _require_commuting(f)
    return MultiIndexDilation(f)


def commuting_defect_dilation(f: FuncFamily, D: Iterable[int]) -> MultiIndexDilation:
    """Needs ``D`` to be a defect space of every ``h_j`` with ``D^c`` invariant under all of them."""
    _require_commuting(f)
    D = frozenset(D)
    if any(not 0 <= a < f.n for a in D):
        raise DefectInvalid("defect set has points outside the base", witness=sorted(D))
    comp = [a for a in range(f.n) if a not in D]
    for j, h in enumerate(f.maps):
        seen = {}
        for a in comp:
            b = h(a)
            if b in seen:
                raise DefectInvalid(f"h_{j} identifies {seen[b]} and {a} outside D",
                                    witness={"j": j, "pair": [seen[b], a]})
            seen[b] = a
    for j, h in enumerate(f.maps):
        for a in comp:
            if h(a) in D:
                raise NotInvariantComplement(f"h_{j}({a}) = {h(a)} leaves the complement of D",
                                             witness={"j": j, "a": a})
    return MultiIndexDilation(f, D)


def noncommuting_standard_dilation(f: FuncFamily) -> WordDilation:
    return WordDilation(f)


@dataclass(frozen=True)
class JointDefect:
    members: tuple[int, ...]

    def __contains__(self, a) -> bool:
        return a in self.members

    def __iter__(self):
        return iter(self.members)


def joint_defect_witness(f: FuncFamily, D: Iterable[int]):
    """Two distinct pairs ``(j, a)``, ``(k, b)`` off ``D`` with ``h_j(a) = h_k(b)``."""
    D = set(D)
    seen = {}
    for a in range(f.n):
        if a in D:
            continue
        for j, h in enumerate(f.maps):
            b = h(a)
            if b in seen:
                return seen[b], (j, a)
            seen[b] = (j, a)
    return None


def is_joint_defect(f: FuncFamily, D: Iterable[int]) -> bool:
    return joint_defect_witness(f, D) is None


def joint_defect(f: FuncFamily, D: Iterable[int]) -> JointDefect:
    D = sorted(set(D))
    if any(not 0 <= a < f.n for a in D):
        raise DefectInvalid("defect set has points outside the base", witness=D)
    w = joint_defect_witness(f, D)
    if w is not None:
        raise DefectInvalid(f"H{w[0]} = H{w[1]} off D", witness=[list(w[0]), list(w[1])])
    return JointDefect(tuple(D))


def joint_defect_minimal(f: FuncFamily) -> JointDefect:
    """Grow the complement greedily in ascending order while ``H`` stays injective on it."""
    keep: list[int] = []
    used: set[int] = set()
    for a in range(f.n):
        vals = [h(a) for h in f.maps]
        if len(set(vals)) == len(vals) and not used.intersection(vals):
            keep.append(a)
            used.update(vals)
    return joint_defect(f, [a for a in range(f.n) if a not in keep])


def all_minimal_joint_defects(f: FuncFamily) -> list[JointDefect]:
    """Complements of the maximal sets on which ``H`` is injective."""
    n = f.n
    vals = [[h.table[a] for h in f.maps] for a in range(n)]
    ok_single = [len(set(v)) == len(v) for v in vals]
    clash = [0] * n
    for a in range(n):
        for b in range(n):
            if a != b and set(vals[a]) & set(vals[b]):
                clash[a] |= 1 << b
    good = []
    for mask in range(1 << n):
        if all(ok_single[a] and not clash[a] & mask for a in range(n) if mask >> a & 1):
            good.append(mask)
    goodset = set(good)
    out = []
    for mask in good:
        if all((mask | 1 << a) not in goodset for a in range(n) if not mask >> a & 1):
            out.append(JointDefect(tuple(a for a in range(n) if not mask >> a & 1)))
    return sorted(out, key=lambda d: d.members)


def noncommuting_defect_dilation(f: FuncFamily, D: JointDefect | Iterable[int]) -> WordDilation:
    D = joint_defect(f, D.members if isinstance(D, JointDefect) else D)
    return WordDilation(f, D.members)


# -- verification ----------------------------------------------------------------


def trace_back(q: LazyDilation, y, limit: int):
    """``(a, word)`` with ``v_word(i(a)) = y``, found by walking ``v``-preimages."""
    iA = {q.i(a): a for a in range(q.n)}
    word: list[int] = []
    for _ in range(limit + 1):
        if y in iA:
            return iA[y], tuple(word)
        for j in range(q.k):
            x = q.preimage(j, y)
            if x is not None:
                word.append(j)
                y = x
                break
        else:
            return None
    return None


def verify_multivar(q: LazyDilation, f: FuncFamily, depth: int) -> VerificationReport:
    """Check the dilation identity for every word of length ``<= depth`` and the structural clauses.

    Injectivity, disjoint ranges (free case), commutation (commuting case),
    idempotence and minimality are checked on the truncation of ``B`` to
    labels of size ``<= depth``.
    """
    rep = VerificationReport(f"{q.mode} dilation of {f.k} map(s) to depth {depth}")
    if (q.n, q.k) != (f.n, f.k):
        rep.fail("shape", {"dilation": [q.n, q.k], "family": [f.n, f.k]})
        return rep
    iA = [q.i(a) for a in range(f.n)]
    if len(set(iA)) != len(iA):
        rep.fail("i injective", iA)
    rep.passed("i injective")
    iset = set(iA)

    for a in range(f.n):
        # walk words by prefix so each v-image is computed once
        frontier = [((), iA[a])]
        for length in range(depth + 1):
            nxt = []
            for w, x in frontier:
                rep.count("identity instances")
                expect = iA[f.apply_word(w, a)]
                if q.p(x) != expect:
                    rep.fail("identity", {"a": a, "word": list(w), "expected": expect, "got": q.p(x)})
                if length < depth:
                    for j in range(f.k):
                        nxt.append(((j,) + w, q.v(j, x)))
            frontier = nxt
    rep.passed("identity")

    pts = list(q.elements(depth))
    rep.count("B points examined", len(pts))
    images = [dict() for _ in range(f.k)]
    for x in pts:
        px = q.p(x)
        if px not in iset:
            rep.fail("p(B) = i(A)", {"x": x, "p(x)": px})
        elif q.p(px) != px:
            rep.fail("p idempotent", x)
        for j in range(f.k):
            y = q.v(j, x)
            if not q.contains(y):
                rep.fail(f"v_{j} maps into B", x)
            if y in images[j]:
                rep.fail(f"v_{j} injective", [images[j][y], x])
            images[j][y] = x
    for a in range(f.n):
        if q.p(iA[a]) != iA[a]:
            rep.fail("p(B) = i(A)", {"x": iA[a], "p(x)": q.p(iA[a])})
    rep.passed("p idempotent")
    rep.passed("p(B) = i(A)")
    for j in range(f.k):
        rep.passed(f"v_{j} injective")
        rep.passed(f"v_{j} maps into B")

    if q.mode == FREE:
        for j, l in itertools.combinations(range(f.k), 2):
            both = images[j].keys() & images[l].keys()
            if both:
                rep.fail("disjoint ranges", {"j": j, "k": l, "point": min(both, key=repr)})
        rep.passed("disjoint ranges")
    else:
        for x in pts:
            for j, l in itertools.combinations(range(f.k), 2):
                if q.v(j, q.v(l, x)) != q.v(l, q.v(j, x)):
                    rep.fail("v commute", {"j": j, "k": l, "x": x})
        rep.passed("v commute")

    limit = depth * f.k + f.n + 1
    for y in pts:
        if trace_back(q, y, limit) is None:
            rep.fail("minimal", y, "point not reached from i(A)")
    rep.passed("minimal")
    return rep


def noncomm_classify(q: LazyDilation, depth: int) -> tuple[JointDefect, EqualitySandwich]:
    """Recover the joint defect of a co-invariant free dilation and the isomorphism onto its model."""
    iA = {q.i(a): a for a in range(q.n)}
    for a in range(q.n):
        inside = [j for j in range(q.k) if q.v(j, q.i(a)) in iA]
        if inside and len(inside) != q.k:
            outside = next(j for j in range(q.k) if j not in inside)
            raise HypothesisFail(f"v_{inside[0]}(i({a})) lies in i(A) but v_{outside}(i({a})) does not",
                                 witness={"a": a, "j": inside[0], "k": outside})
    pts = list(q.elements(depth))
    for x in pts:
        if x in iA:
            continue
        for j in range(q.k):
            if q.v(j, x) in iA:
                raise NotCoinvariant(f"v_{j} maps {x} outside i(A) into i(A)", witness={"j": j, "x": x})
    D = [a for a in range(q.n) if q.v(0, q.i(a)) not in iA]
    f = q.compressions()
    jd = joint_defect(f, D)
    model = WordDilation(f, jd.members)

    psi: dict = {}
    back: dict = {}
    for x in model.elements(depth):
        a, w = x
        y = q.i(a) if not w else q.v(w[0], psi[(a, w[1:])])
        if y in back:
            raise BijectionFailure(f"psi{back[y]} = psi{x}", witness=[back[y], x])
        psi[x] = y
        back[y] = x
    limit = depth * q.k + q.n + 1
    for y in pts:
        if y in back:
            continue
        found = trace_back(q, y, limit)
        if found is None:
            raise BijectionFailure(f"{y} is not reached from i(A)", witness=y)
        a, w = found
        if not model.contains((a, w)):
            raise BijectionFailure(f"{y} has no counterpart in the model", witness=y)
    for x, y in psi.items():
        if q.p(y) != psi[model.p(x)]:
            raise BijectionFailure("psi does not intertwine p", witness=x)
        if len(x[1]) < depth:
            for j in range(q.k):
                if q.v(j, y) != psi[model.v(j, x)]:
                    raise BijectionFailure(f"psi does not intertwine v_{j}", witness=x)
    return jd, EqualitySandwich(psi, depth, jd.members)
