import pytest

from dilatk.bcl import (BclData, all_bcl_data, bcl_analyze, bcl_multi_analyze, bcl_pair_report,
                        bcl_roundtrip_check, bcl_synthesize, cyclic_orders, shift_space, unilateral_shift)
from dilatk.errors import InvalidInput, NotCommuting, NotInjective, NotShift
from dilatk.symset import DOWN, UP, Elem, SymSet, TailAffineMap, Translate, compose, compose_all

R = SymSet.of(("r", "ray"))
L = SymSet.of(("l", "line"))
RAY_SHIFT = TailAffineMap(R, R, {}, {}, {("r", UP): Translate("r", 1)})
LINE_SHIFT = TailAffineMap(L, L, {}, {}, {("l", UP): Translate("l", 1), ("l", DOWN): Translate("l", 1)})


def test_data_validation():
    with pytest.raises(InvalidInput):
        BclData(["a", "a"], [0, 1], [])
    with pytest.raises(InvalidInput):
        BclData(["a", "b"], [0, 0], [])
    with pytest.raises(InvalidInput):
        BclData(["a"], [0], ["z"])


def test_counts():
    assert [len(list(all_bcl_data(k))) for k in (1, 2, 3)] == [2, 8, 48]


def test_synthesize_degenerate():
    A, s1, s2 = bcl_synthesize(BclData(["w"], [0], ["w"]))
    assert s1 == TailAffineMap.identity(A) and s2 == unilateral_shift(["w"])
    A, s1, s2 = bcl_synthesize(BclData(["w"], [0], []))
    assert s1 == unilateral_shift(["w"]) and s2 == TailAffineMap.identity(A)


def test_synthesize_swap():
    d = BclData(["w0", "w1"], [1, 0], ["w0"])
    A, s1, s2 = bcl_synthesize(d)
    shift = unilateral_shift(d.w)
    for x in A.elements(8):
        assert s1(s2(x)) == s2(s1(x)) == shift(x)
    assert bcl_pair_report(s1, s2, 8).ok


def test_round_trip_examples():
    assert bcl_roundtrip_check(BclData(["a", "b", "c"], [1, 2, 0], ["b"])).ok
    for d in all_bcl_data(2):
        an = bcl_analyze(*bcl_synthesize(d)[1:])
        assert an.data == d.canonical() and an.unitary_part.is_empty() and an.report.ok


def test_analyze_bijections():
    an = bcl_analyze(LINE_SHIFT, LINE_SHIFT)
    assert an.split.shift_part.is_empty()
    assert an.unitary_part == L.full()
    assert an.data.w == ()


def test_analyze_shift_and_identity():
    an = bcl_analyze(RAY_SHIFT, TailAffineMap.identity(R))
    assert an.wandering == (Elem("r", 0),)
    assert an.data == BclData(["w0"], [0], [])
    assert an.report.ok


def test_analyze_mixed_parts():
    S = SymSet.of(("c", "cycle", 2), ("r", "ray"))
    swap = TailAffineMap(S, S, {Elem("c", 0): Elem("c", 1), Elem("c", 1): Elem("c", 0)}, {},
                         {("r", UP): Translate("r", 0)})
    shift = TailAffineMap(S, S, {Elem("c", 0): Elem("c", 0), Elem("c", 1): Elem("c", 1)}, {},
                          {("r", UP): Translate("r", 1)})
    an = bcl_analyze(swap, shift)
    assert an.unitary_part == S.subset([Elem("c", 0), Elem("c", 1)])
    assert an.data == BclData(["w0"], [0], ["w0"])
    assert an.report.ok


def test_analyze_errors():
    F = SymSet.of(("f", "fin", 2))
    const = TailAffineMap.from_function(F, F, lambda x: Elem("f", 0))
    with pytest.raises(NotInjective):
        bcl_analyze(const, TailAffineMap.identity(F))
    RR = SymSet.of(("a", "ray"), ("b", "ray"))
    cross = TailAffineMap(RR, RR, {}, {}, {("a", UP): Translate("b", 0), ("b", UP): Translate("a", 1)})
    shift_a = TailAffineMap(RR, RR, {}, {}, {("a", UP): Translate("a", 1), ("b", UP): Translate("b", 0)})
    with pytest.raises(NotCommuting):
        bcl_analyze(cross, shift_a)
    with pytest.raises(NotShift):
        bcl_multi_analyze([LINE_SHIFT, LINE_SHIFT])


def test_mutated_pair_is_reported():
    d = BclData(["w0", "w1"], [1, 0], ["w0"])
    _, s1, s2 = bcl_synthesize(d)
    bad = s1.with_window_entry(Elem("w0", 0), Elem("w0", 0))
    rep = bcl_pair_report(bad, s2, 8)
    assert not rep.ok
    assert any(c.name.endswith("= 1 x s+") for c in rep.failed())


def test_cyclic_orders():
    assert cyclic_orders(3) == [(0, 1, 2), (1, 2, 0), (2, 0, 1)]


def test_multi_agrees_with_pair_analysis():
    for d in all_bcl_data(2):
        _, s1, s2 = bcl_synthesize(d)
        pair, multi = bcl_analyze(s1, s2), bcl_multi_analyze([s1, s2])
        assert multi.report.ok
        assert multi.s[0] == bcl_synthesize(pair.data)[1]
        assert multi.s[1] == bcl_synthesize(pair.data)[2]


def test_multi_two_identities_and_shift():
    ident = TailAffineMap.identity(R)
    m = bcl_multi_analyze([ident, ident, RAY_SHIFT])
    assert m.w == ("w0",)
    assert m.w_prime == (frozenset(), frozenset(), frozenset({"w0"}))
    assert all(t == (0,) for t in m.u)
    assert m.report.ok


def test_multi_reconstructs_triples():
    for d in all_bcl_data(2):
        A, s1, s2 = bcl_synthesize(d)
        ident = TailAffineMap.identity(A)
        for maps in ((s1, s2, ident), (ident, s1, s2), (s1, ident, s2)):
            m = bcl_multi_analyze(maps)
            assert m.report.ok
            assert compose_all(*m.s) == unilateral_shift(m.w)
            g = m.g
            for y in shift_space(m.w).elements(6):
                x = g.inverse(y)
                for v, s in zip(maps, m.s):
                    assert g(v(x)) == s(y)


def test_product_is_shift_for_every_small_case():
    for k in (1, 2, 3):
        for d in all_bcl_data(k):
            _, s1, s2 = bcl_synthesize(d)
            assert compose(s1, s2) == compose(s2, s1) == unilateral_shift(d.w)
