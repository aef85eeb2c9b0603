import random

import pytest
from hypothesis import given

from dilatk.corpus import archetypes
from dilatk.errors import InvalidElem, InvalidInput, NotInjective, ShapeMismatch
from dilatk.io import decode_map, encode_map
from dilatk.symset import (DOWN, UP, Elem, Periodic, SymSet, TailAffineMap, Translate, compose,
                           image, injectivity_report, window_region)
from strategies import injective_maps

R = SymSet.of(("r", "ray"))
L = SymSet.of(("l", "line"))


def ray_shift(k=1):
    return TailAffineMap(R, R, {}, {}, {("r", UP): Translate("r", k)})


def test_eval_translation():
    assert ray_shift()(Elem("r", 5)) == Elem("r", 6)


def test_eval_cycle():
    C = SymSet.of(("c", "cycle", 3))
    m = TailAffineMap.from_function(C, C, lambda x: Elem("c", (x.index + 1) % 3))
    assert m(Elem("c", 2)) == Elem("c", 0)


def test_eval_two_rays():
    RR = SymSet.of(("R0", "ray"), ("R1", "ray"))
    v = TailAffineMap(RR, RR, {}, {}, {("R0", UP): Translate("R1", 0), ("R1", UP): Translate("R0", 2)})
    assert v(Elem("R1", 3)) == Elem("R0", 5)


def test_eval_rejects_foreign_points():
    with pytest.raises(InvalidElem):
        ray_shift()(Elem("r", -1))
    with pytest.raises(InvalidElem):
        ray_shift()(Elem("q", 0))


def test_compose_identity_and_offsets():
    m = archetypes()["cycle, ray into line"]
    assert compose(TailAffineMap.identity(m.domain), m) == m
    assert compose(ray_shift(1), ray_shift(2)) == ray_shift(3)


def test_compose_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        compose(ray_shift(), TailAffineMap.identity(L))


def test_injectivity_examples():
    r = injectivity_report(ray_shift())
    assert r.injective and not r.bijective
    line = TailAffineMap(L, L, {}, {}, {("l", UP): Translate("l", 1), ("l", DOWN): Translate("l", 1)})
    assert injectivity_report(line).bijective
    F = SymSet.of(("x", "fin", 1), ("y", "fin", 1), ("a", "fin", 1))
    m = TailAffineMap(F, F, {Elem("x", 0): Elem("a", 0), Elem("y", 0): Elem("a", 0), Elem("a", 0): Elem("a", 0)})
    r = injectivity_report(m)
    assert not r.injective
    assert set(r.witness) == {Elem("x", 0), Elem("y", 0)}


def test_tail_collision_detected():
    # window sends r:0 onto r:2, which the tail also reaches from r:1
    m = TailAffineMap(R, R, {Elem("r", 0): Elem("r", 2)}, {"r": 1}, {("r", UP): Translate("r", 1)})
    r = injectivity_report(m)
    assert not r.injective
    assert m(r.witness[0]) == m(r.witness[1])


def brute_injective(m, bound):
    seen = {}
    for x in m.domain.elements(bound):
        y = m(x)
        if y in seen:
            return False
        seen[y] = x
    return True


def test_injectivity_against_brute_force():
    rng = random.Random(3)
    comps = SymSet.of(("a", "ray"), ("b", "line"), ("c", "fin", 2))
    thresholds = {"a": 1, "b": 1}
    targets = list(comps.elements(2))
    for _ in range(300):
        window = {x: rng.choice(targets) for x in window_region(comps, thresholds)}
        m = TailAffineMap(comps, comps, window, thresholds,
                          {("a", UP): Translate(rng.choice("ab"), rng.randint(0, 3)),
                           ("b", UP): Translate("b", rng.randint(-1, 3)),
                           ("b", DOWN): Translate("b", rng.randint(-3, 1))})
        assert injectivity_report(m).injective == brute_injective(m, 30)


def test_periodic_tail():
    C = SymSet.of(("c", "cycle", 2))
    RC = SymSet(list(R) + list(C))
    m = TailAffineMap(RC, RC, {Elem("c", 0): Elem("c", 1), Elem("c", 1): Elem("c", 0)}, {"r": 0},
                      {("r", UP): Periodic((Elem("c", 0), Elem("c", 1)))})
    assert [m(Elem("r", n)) for n in range(4)] == [Elem("c", 0), Elem("c", 1)] * 2
    with pytest.raises(NotInjective):
        from dilatk.wold import wold_decompose
        wold_decompose(m)


def test_invalid_rule_rejected():
    with pytest.raises(InvalidInput):
        TailAffineMap(R, R, {}, {}, {("r", UP): Translate("r", -1)})


def test_image_of_shift():
    assert image(ray_shift(2)) == R.full() - R.subset([Elem("r", 0), Elem("r", 1)])


@given(injective_maps())
def test_json_round_trip(m):
    assert decode_map(encode_map(m)) == m


@given(injective_maps())
def test_normalized_is_pointwise_equal(m):
    n = m.normalized()
    assert all(n(x) == m(x) for x in m.domain.elements(25))
    assert n == m
