"""Endofunctions of finite sets and their defect spaces."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInput, NotADefectSpace, OutOfRange


@dataclass(frozen=True)
class FinFunc:
    """A total function ``{0..n-1} -> {0..n-1}`` stored as a table."""

    table: tuple[int, ...]

    def __init__(self, table: Iterable[int]):
        tab = tuple(table)
        n = len(tab)
        if n == 0:
            raise InvalidInput("a function needs a non-empty domain")
        for a, b in enumerate(tab):
            if not isinstance(b, int) or isinstance(b, bool) or not 0 <= b < n:
                raise InvalidInput(f"value {b!r} at {a} is outside [0, {n})", witness=a)
        object.__setattr__(self, "table", tab)

    @property
    def n(self) -> int:
        return len(self.table)

    def __call__(self, a: int) -> int:
        return self.table[a]

    def __len__(self) -> int:
        return len(self.table)

    def power(self, a: int, k: int) -> int:
        for _ in range(k):
            a = self.table[a]
        return a

    def iterate(self, k: int) -> "FinFunc":
        return FinFunc(self.power(a, k) for a in range(self.n))

    def then(self, other: "FinFunc") -> "FinFunc":
        """``other o self``."""
        return FinFunc(other.table[b] for b in self.table)

    def image(self, subset: Iterable[int] | None = None) -> frozenset[int]:
        if subset is None:
            return frozenset(self.table)
        return frozenset(self.table[a] for a in subset)

    def is_injective(self) -> bool:
        return len(set(self.table)) == self.n

    def injective_on(self, subset: Iterable[int]) -> bool:
        subset = list(subset)
        return len({self.table[a] for a in subset}) == len(subset)

    def tail_and_period(self, a: int) -> tuple[int, int]:
        """Preperiod and period of the forward orbit of ``a``."""
        seen = {}
        k = 0
        while a not in seen:
            seen[a] = k
            a = self.table[a]
            k += 1
        return seen[a], k - seen[a]

    @classmethod
    def identity(cls, n: int) -> "FinFunc":
        return cls(range(n))

    @classmethod
    def all(cls, n: int) -> Iterator["FinFunc"]:
        """Every endofunction of ``{0..n-1}`` in lexicographic order."""
        for tab in itertools.product(range(n), repeat=n):
            yield cls(tab)

    def to_json(self) -> dict:
        return {"n": self.n, "table": list(self.table)}

    def __repr__(self) -> str:
        return f"FinFunc({list(self.table)})"


@dataclass(frozen=True)
class DefectSpace:
    """A subset ``D`` of the domain on whose complement ``h`` is injective."""

    members: tuple[int, ...]

    def __contains__(self, a: int) -> bool:
        return a in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def complement(self, n: int) -> tuple[int, ...]:
        s = set(self.members)
        return tuple(a for a in range(n) if a not in s)


def _checked_subset(h: FinFunc, subset: Iterable[int]) -> tuple[int, ...]:
    members = sorted(set(subset))
    for a in members:
        if not isinstance(a, int) or not 0 <= a < h.n:
            raise OutOfRange(f"{a!r} is not a point of the base set of size {h.n}", witness=a)
    return tuple(members)


def fibers(h: FinFunc) -> list[tuple[int, frozenset[int]]]:
    out: dict[int, set[int]] = {}
    for a, b in enumerate(h.table):
        out.setdefault(b, set()).add(a)
    return [(b, frozenset(out[b])) for b in sorted(out)]


def is_defect_space(h: FinFunc, subset: Iterable[int]) -> bool:
    members = set(_checked_subset(h, subset))
    return h.injective_on(a for a in range(h.n) if a not in members)


def defect_space(h: FinFunc, subset: Iterable[int]) -> DefectSpace:
    """Validate ``subset`` as a defect space of ``h``."""
    members = _checked_subset(h, subset)
    seen: dict[int, int] = {}
    for a in range(h.n):
        if a in members:
            continue
        b = h.table[a]
        if b in seen:
            raise NotADefectSpace(f"{seen[b]} and {a} lie outside D and share the image {b}",
                                  witness=(seen[b], a))
        seen[b] = a
    return DefectSpace(members)


def minimal_defect(h: FinFunc) -> DefectSpace:
    """Canonical minimal defect space: each fiber keeps its smallest point outside."""
    members = [a for _, fib in fibers(h) for a in sorted(fib)[1:]]
    return DefectSpace(tuple(sorted(members)))


def count_minimal_defects(h: FinFunc) -> int:
    return math.prod(len(f) for _, f in fibers(h) if len(f) > 1)


def all_minimal_defects(h: FinFunc) -> Iterator[DefectSpace]:
    """Every inclusion-minimal defect space: drop one keeper from each fiber."""
    fibs = [sorted(f) for _, f in fibers(h)]
    for keepers in itertools.product(*fibs):
        kept = set(keepers)
        yield DefectSpace(tuple(a for a in range(h.n) if a not in kept))


def is_minimal_defect(h: FinFunc, subset: Sequence[int]) -> bool:
    members = set(subset)
    if not is_defect_space(h, members):
        return False
    return all(not is_defect_space(h, members - {a}) for a in members)


def eventual_image(h: FinFunc, start: Iterable[int], within: Iterable[int] | None = None) -> frozenset[int]:
    """Intersection of the sets ``S_0 = start``, ``S_{n+1} = h(S_n)`` (cut down to ``within``).

    The sequence lives in a finite power set, so it is eventually periodic;
    intersecting over one preperiod plus one period covers every term.
    """
    keep = None if within is None else frozenset(within)
    cur = frozenset(start)
    seen: set[frozenset[int]] = set()
    terms: list[frozenset[int]] = []
    while cur not in seen:
        seen.add(cur)
        terms.append(cur)
        cur = h.image(cur)
        if keep is not None:
            cur = cur & keep
    return frozenset.intersection(*terms)
