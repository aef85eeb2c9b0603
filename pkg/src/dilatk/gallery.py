"""Small hand-built objects that exercise the edge cases of the theory."""

from __future__ import annotations

from dataclasses import dataclass

from .dilation1 import BASE, DilationQuadruple, base_set
from .endo import FinFunc
from .symset import Elem, Subset, SymSet, TailAffineMap, Translate, UP


def swap_point_dilation() -> tuple[DilationQuadruple, FinFunc]:
    """Identity on one point, dilated by a swap of two points.

    ``i`` picks the second point, ``p`` collapses everything onto it.  The
    quadruple is a minimal dilation, but ``v`` carries the first point into
    ``i(A)``, so it is not co-invariant.
    """
    A = base_set(1)
    B = SymSet.of(("B", "fin", 2))
    i = TailAffineMap(A, B, {Elem(BASE, 0): Elem("B", 1)})
    v = TailAffineMap(B, B, {Elem("B", 0): Elem("B", 1), Elem("B", 1): Elem("B", 0)})
    p = TailAffineMap(B, B, {Elem("B", 0): Elem("B", 1), Elem("B", 1): Elem("B", 1)})
    return DilationQuadruple("swap", A, B, i, v, p), FinFunc([0])


def two_ray_dilation() -> tuple[DilationQuadruple, TailAffineMap]:
    """The successor on ``Z+`` dilated on two rays ``R0``, ``R1``.

    ``i(n) = (R0, n)``, ``v(R0, n) = (R1, n)``, ``v(R1, n) = (R0, n + 2)``,
    ``p(R0, n) = (R0, n)``, ``p(R1, n) = (R0, n + 1)``.  ``v`` is a shift
    with two ray orbits while the quadruple is not co-invariant.
    """
    A = SymSet.of(("N", "ray"))
    B = SymSet.of(("R0", "ray"), ("R1", "ray"))
    h = TailAffineMap(A, A, {}, {}, {("N", UP): Translate("N", 1)})
    i = TailAffineMap(A, B, {}, {}, {("N", UP): Translate("R0", 0)})
    v = TailAffineMap(B, B, {}, {}, {("R0", UP): Translate("R1", 0), ("R1", UP): Translate("R0", 2)})
    p = TailAffineMap(B, B, {}, {}, {("R0", UP): Translate("R0", 0), ("R1", UP): Translate("R0", 1)})
    return DilationQuadruple("two-ray", A, B, i, v, p), h


@dataclass(frozen=True, eq=False)
class ProjectionExample:
    v: TailAffineMap
    A: Subset
    h: TailAffineMap
    p: TailAffineMap


def swapped_ray_projection() -> ProjectionExample:
    """``v`` swaps 0 and 1 on ``Z+`` and fixes the rest; ``A = {n >= 1}`` with ``h`` the identity.

    ``p(0) = 1``, ``p(n) = n`` is a valid idempotent with ``p v^m = h^m`` on
    ``A``, yet ``A`` is not a difference of two ``v``-invariant sets.
    """
    B = SymSet.of(("N", "ray"))
    v = TailAffineMap(B, B, {Elem("N", 0): Elem("N", 1), Elem("N", 1): Elem("N", 0)}, {"N": 2},
                      {("N", UP): Translate("N", 0)})
    A = B.full() - B.subset([Elem("N", 0)])
    p = TailAffineMap(B, B, {Elem("N", 0): Elem("N", 1)}, {"N": 1}, {("N", UP): Translate("N", 0)})
    return ProjectionExample(v, A, TailAffineMap.identity(B), p)


def swapped_finite_projection(size: int = 4) -> ProjectionExample:
    """Finite truncation of :func:`swapped_ray_projection` on ``size`` points."""
    B = SymSet.of(("B", "fin", size))
    v = TailAffineMap.from_function(B, B, lambda x: Elem("B", {0: 1, 1: 0}.get(x.index, x.index)))
    A = B.full() - B.subset([Elem("B", 0)])
    p = TailAffineMap.from_function(B, B, lambda x: Elem("B", max(x.index, 1)))
    return ProjectionExample(v, A, TailAffineMap.identity(B), p)
