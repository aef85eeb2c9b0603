import math

import pytest
from hypothesis import given

from dilatk.corpus import archetypes
from dilatk.errors import NotInjective
from dilatk.gallery import two_ray_dilation
from dilatk.oracles import brute_orbit_profile, brute_wandering
from dilatk.symset import DOWN, UP, Elem, SymSet, TailAffineMap, Translate, image
from dilatk.wold import classify_orbits, is_shift, wandering_set, wold_decompose
from strategies import injective_maps

R = SymSet.of(("r", "ray"))
L = SymSet.of(("l", "line"))
RAY_SHIFT = TailAffineMap(R, R, {}, {}, {("r", UP): Translate("r", 1)})
LINE_SHIFT = TailAffineMap(L, L, {}, {}, {("l", UP): Translate("l", 1), ("l", DOWN): Translate("l", 1)})


def cycle(d):
    C = SymSet.of(("c", "cycle", d))
    return TailAffineMap.from_function(C, C, lambda x: Elem("c", (x.index + 1) % d))


def test_wandering_examples():
    assert wandering_set(RAY_SHIFT).elements() == [Elem("r", 0)]
    assert wandering_set(LINE_SHIFT).is_empty()
    v = two_ray_dilation()[0].v
    assert wandering_set(v).elements() == [Elem("R0", 0), Elem("R0", 1)]


def test_wold_examples():
    S = SymSet.of(("f", "fin", 1), ("r", "ray"))
    v = TailAffineMap(S, S, {Elem("f", 0): Elem("f", 0)}, {}, {("r", UP): Translate("r", 1)})
    split = wold_decompose(v)
    assert split.bijective_part == S.subset([Elem("f", 0)])
    assert split.shift_part == S.full() - S.subset([Elem("f", 0)])
    assert split.wandering.elements() == [Elem("r", 0)]
    c3 = cycle(3)
    assert wold_decompose(c3).shift_part.is_empty()
    assert wold_decompose(c3).bijective_part == c3.domain.full()
    assert wold_decompose(RAY_SHIFT).bijective_part.is_empty()


def test_classify_examples():
    p = classify_orbits(cycle(3))
    assert (p.cycles, p.lines, p.rays) == ({3: 1}, 0, 0)
    p = classify_orbits(LINE_SHIFT)
    assert (p.cycles, p.lines, p.rays) == ({}, 1, 0)
    RR = SymSet.of(("a", "ray"), ("b", "ray"))
    two = TailAffineMap(RR, RR, {}, {}, {("a", UP): Translate("a", 1), ("b", UP): Translate("b", 1)})
    p = classify_orbits(two)
    assert (p.cycles, p.lines, p.rays) == ({}, 0, 2)


def test_infinite_multiplicities():
    p = classify_orbits(TailAffineMap.identity(R))
    assert p.cycles == {1: math.inf}
    p = classify_orbits(archetypes()["ray shift by 3"])
    assert p.rays == 3


def test_is_shift_examples():
    assert is_shift(RAY_SHIFT)
    assert not is_shift(cycle(1))
    assert not is_shift(archetypes()["two lines swapped"])


def test_not_injective():
    F = SymSet.of(("f", "fin", 2))
    const = TailAffineMap.from_function(F, F, lambda x: Elem("f", 0))
    for fn in (wandering_set, wold_decompose, classify_orbits, is_shift):
        with pytest.raises(NotInjective):
            fn(const)


@pytest.mark.parametrize("name", sorted(archetypes()))
def test_archetypes_against_oracle(name):
    v = archetypes()[name]
    p = classify_orbits(v)
    assert (p.cycles, p.lines, p.rays) == brute_orbit_profile(v)


def check_split(v):
    split = wold_decompose(v)
    A = v.domain.full()
    assert split.wandering == A - image(v)
    assert split.shift_part | split.bijective_part == A
    assert (split.shift_part & split.bijective_part).is_empty()
    assert image(v, split.shift_part).issubset(split.shift_part)
    assert image(v, split.bijective_part) == split.bijective_part
    return split


@given(injective_maps())
def test_split_properties(v):
    split = check_split(v)
    bound = 6
    assert set(split.wandering.truncated(bound)) == brute_wandering(v, bound)
    # the wandering images are pairwise disjoint
    W = list(split.wandering.truncated(bound))
    orbits = [[v.power(w, n) for n in range(8)] for w in W]
    flat = [x for o in orbits for x in o]
    assert len(flat) == len(set(flat))


@given(injective_maps())
def test_profile_against_oracle(v):
    p = classify_orbits(v)
    assert (p.cycles, p.lines, p.rays) == brute_orbit_profile(v)
    assert is_shift(v) == wold_decompose(v).bijective_part.is_empty() == p.is_shift
