import random

import pytest
from hypothesis import given, strategies as st

from dilatk import io
from dilatk.bcl import BclData
from dilatk.dilation1 import defect_dilation, standard_dilation, unitary_dilation
from dilatk.endo import FinFunc, minimal_defect
from dilatk.errors import InvalidInput
from dilatk.ext import LinMap, MonoidAction, PresentedMonoid
from dilatk.lifting import Intertwiner
from dilatk.multivar import FuncFamily
from dilatk.report import VerificationReport
from strategies import finfuncs, injective_maps


def round_trip(x, kind=None):
    return io.loads(io.dumps(io.encode(x)), kind)


@given(finfuncs())
def test_function_round_trip(h):
    assert round_trip(h) == h
    assert io.decode(list(h.table)) == h


def test_inline_table():
    assert io.parse_inline_table("1,1,2") == FinFunc([1, 1, 2])
    assert io.parse_inline_table("[0]") == FinFunc([0])
    with pytest.raises(InvalidInput):
        io.parse_inline_table("1,x")


@given(injective_maps())
def test_map_and_set_round_trip(m):
    assert round_trip(m) == m
    assert round_trip(m.domain) == m.domain


@given(finfuncs(max_n=4))
def test_quadruple_round_trip(h):
    for q in (standard_dilation(h), unitary_dilation(h), defect_dilation(h, minimal_defect(h))):
        back = round_trip(q)
        assert back == q and back.kind == q.kind and back.bilateral == q.bilateral


@given(injective_maps())
def test_subset_round_trip(m):
    from dilatk.symset import image
    S = image(m)
    assert io.decode_subset(io.parse_json(io.dumps(io.encode_subset(S))), m.domain) == S


def test_other_round_trips():
    assert round_trip(FuncFamily([[0, 0], [1, 0]])) == FuncFamily([[0, 0], [1, 0]])
    assert round_trip(BclData(["a", "b"], [1, 0], ["a"])) == BclData(["a", "b"], [1, 0], ["a"])
    s = Intertwiner([0, 0], 2)
    assert round_trip(s) == s
    act = MonoidAction(PresentedMonoid.zplus(2), [[1, 0], [1, 0]])
    assert round_trip(act).maps == act.maps
    for field in ("q", "gf:3"):
        h = LinMap.random(3, field, random.Random(1))
        assert round_trip(h) == h


def test_report_round_trip():
    rep = VerificationReport("demo")
    rep.passed("a")
    rep.fail("b", {"x": 1}, "detail")
    rep.count("points", 3)
    back = round_trip(rep)
    assert back.ok == rep.ok and [c.name for c in back.checks] == [c.name for c in rep.checks]


@pytest.mark.parametrize("text", ["{", "[1, 2", "not json", '{"type": "nonsense"}', "42",
                                  '{"components": [{"kind": "blob"}]}'])
def test_malformed_documents(text):
    with pytest.raises(InvalidInput):
        io.loads(text)


@given(st.text(max_size=30))
def test_garbage_never_crashes(text):
    try:
        io.loads(text)
    except InvalidInput:
        pass
