"""Ultimately periodic subsets of the integers.

An :class:`EPSet` is described by two cut points ``lo <= hi``: every integer
in ``[lo, hi)`` is listed explicitly, integers ``n >= hi`` belong iff
``n % mod`` is in ``hi_res`` and integers ``n < lo`` belong iff ``n % mod``
is in ``lo_res``.  The class is closed under the Boolean operations and
under translation, which is all the orbit machinery needs.  Instances are
always kept in a canonical form, so ``==`` is set equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator


def _expand(res: frozenset[int], mod: int, new_mod: int) -> frozenset[int]:
    return frozenset(r for r in range(new_mod) if r % mod in res)


def _min_period(res: frozenset[int], mod: int) -> int:
    for d in range(1, mod + 1):
        if mod % d:
            continue
        if all((r in res) == ((r + d) % mod in res) for r in range(mod)):
            return d
    return mod


@dataclass(frozen=True)
class EPSet:
    lo: int
    hi: int
    mod: int
    mid: frozenset[int]
    hi_res: frozenset[int]
    lo_res: frozenset[int]

    # -- constructors -----------------------------------------------------

    @classmethod
    def _make(cls, lo, hi, mod, mid, hi_res, lo_res) -> "EPSet":
        return cls(lo, hi, mod, frozenset(mid), frozenset(hi_res), frozenset(lo_res))._normalized()

    @classmethod
    def empty(cls) -> "EPSet":
        return cls(0, 0, 1, frozenset(), frozenset(), frozenset())

    @classmethod
    def everything(cls) -> "EPSet":
        return cls(0, 0, 1, frozenset(), frozenset({0}), frozenset({0}))

    @classmethod
    def finite(cls, members) -> "EPSet":
        members = frozenset(members)
        if not members:
            return cls.empty()
        return cls._make(min(members), max(members) + 1, 1, members, (), ())

    @classmethod
    def interval(cls, start: int, stop: int) -> "EPSet":
        """``[start, stop)``."""
        return cls.finite(range(start, stop))

    @classmethod
    def at_least(cls, start: int, step: int = 1) -> "EPSet":
        """``{start, start+step, start+2*step, ...}`` for ``step >= 1``."""
        return cls._make(start, start, step, (), {start % step}, ())

    @classmethod
    def at_most(cls, start: int, step: int = 1) -> "EPSet":
        """``{start, start-step, start-2*step, ...}`` for ``step >= 1``."""
        return cls._make(start + 1, start + 1, step, (), (), {start % step})

    # -- queries ----------------------------------------------------------

    def __contains__(self, n: int) -> bool:
        if n >= self.hi:
            return n % self.mod in self.hi_res
        if n < self.lo:
            return n % self.mod in self.lo_res
        return n in self.mid

    def is_empty(self) -> bool:
        return not self.mid and not self.hi_res and not self.lo_res

    def is_finite(self) -> bool:
        return not self.hi_res and not self.lo_res

    def bounded_below(self) -> bool:
        return not self.lo_res

    def bounded_above(self) -> bool:
        return not self.hi_res

    def members(self) -> list[int]:
        if not self.is_finite():
            raise ValueError("infinite set has no member list")
        return sorted(self.mid)

    def between(self, start: int, stop: int) -> Iterator[int]:
        """Members in ``[start, stop)`` in increasing order."""
        for n in range(start, stop):
            if n in self:
                yield n

    def min(self) -> int:
        if self.lo_res or self.is_empty():
            raise ValueError("no minimum")
        if self.mid:
            return min(self.mid)
        return next(n for n in range(self.hi, self.hi + self.mod) if n in self)

    def sample(self) -> int:
        """Some member, preferring the explicit part, then the upper tail."""
        if self.mid:
            return min(self.mid)
        for n in range(self.hi, self.hi + self.mod):
            if n in self:
                return n
        for n in range(self.lo - 1, self.lo - 1 - self.mod, -1):
            if n in self:
                return n
        raise ValueError("empty set")

    # -- algebra ----------------------------------------------------------

    def _combine(self, other: "EPSet", op: Callable[[bool, bool], bool]) -> "EPSet":
        mod = math.lcm(self.mod, other.mod)
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        mid = [n for n in range(lo, hi) if op(n in self, n in other)]
        a_hi, b_hi = _expand(self.hi_res, self.mod, mod), _expand(other.hi_res, other.mod, mod)
        a_lo, b_lo = _expand(self.lo_res, self.mod, mod), _expand(other.lo_res, other.mod, mod)
        hi_res = [r for r in range(mod) if op(r in a_hi, r in b_hi)]
        lo_res = [r for r in range(mod) if op(r in a_lo, r in b_lo)]
        return EPSet._make(lo, hi, mod, mid, hi_res, lo_res)

    def __or__(self, other: "EPSet") -> "EPSet":
        return self._combine(other, lambda a, b: a or b)

    def __and__(self, other: "EPSet") -> "EPSet":
        return self._combine(other, lambda a, b: a and b)

    def __sub__(self, other: "EPSet") -> "EPSet":
        return self._combine(other, lambda a, b: a and not b)

    def complement(self) -> "EPSet":
        return EPSet.everything() - self

    def issubset(self, other: "EPSet") -> bool:
        return (self - other).is_empty()

    def shift(self, delta: int) -> "EPSet":
        return EPSet(
            self.lo + delta,
            self.hi + delta,
            self.mod,
            frozenset(n + delta for n in self.mid),
            frozenset((r + delta) % self.mod for r in self.hi_res),
            frozenset((r + delta) % self.mod for r in self.lo_res),
        )._normalized()

    # -- canonical form ---------------------------------------------------

    def _normalized(self) -> "EPSet":
        mod = math.lcm(_min_period(self.hi_res, self.mod), _min_period(self.lo_res, self.mod))
        hi_res = frozenset(r % mod for r in self.hi_res)
        lo_res = frozenset(r % mod for r in self.lo_res)
        if hi_res == lo_res and all((n % mod in hi_res) == (n in self.mid) for n in range(self.lo, self.hi)):
            return EPSet(0, 0, mod, frozenset(), hi_res, lo_res)
        contains = self.__contains__
        hi = self.hi
        while contains(hi - 1) == ((hi - 1) % mod in hi_res):
            hi -= 1
        lo = self.lo
        while contains(lo) == (lo % mod in lo_res):
            lo += 1
        lo = min(lo, hi)
        mid = frozenset(n for n in range(lo, hi) if contains(n))
        return EPSet(lo, hi, mod, mid, hi_res, lo_res)

    # -- presentation -----------------------------------------------------

    def describe(self) -> str:
        if self.hi_res and self.hi_res == self.lo_res and self.lo == self.hi:
            if self.mod == 1:
                return "all n"
            return "n%{} in {{{}}}".format(self.mod, ",".join(map(str, sorted(self.hi_res))))
        parts = []
        if self.mid:
            parts.append("{" + ",".join(map(str, sorted(self.mid))) + "}")
        if self.hi_res:
            if self.mod == 1:
                parts.append(f"n>={self.hi}")
            else:
                rs = ",".join(map(str, sorted(self.hi_res)))
                parts.append(f"n>={self.hi} with n%{self.mod} in {{{rs}}}")
        if self.lo_res:
            if self.mod == 1:
                parts.append(f"n<{self.lo}")
            else:
                rs = ",".join(map(str, sorted(self.lo_res)))
                parts.append(f"n<{self.lo} with n%{self.mod} in {{{rs}}}")
        return " | ".join(parts) if parts else "{}"

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "mod": self.mod,
            "mid": sorted(self.mid),
            "hi_res": sorted(self.hi_res),
            "lo_res": sorted(self.lo_res),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EPSet":
        return cls._make(obj["lo"], obj["hi"], obj["mod"], obj["mid"], obj["hi_res"], obj["lo_res"])
