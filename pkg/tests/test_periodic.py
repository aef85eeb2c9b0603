from hypothesis import given, strategies as st

from dilatk.periodic import EPSet

WINDOW = range(-40, 41)


@st.composite
def epsets(draw):
    kind = draw(st.sampled_from(["finite", "interval", "at_least", "at_most", "empty", "all"]))
    if kind == "finite":
        return EPSet.finite(draw(st.sets(st.integers(-15, 15), max_size=6)))
    if kind == "interval":
        a = draw(st.integers(-15, 15))
        return EPSet.interval(a, a + draw(st.integers(0, 10)))
    if kind == "at_least":
        return EPSet.at_least(draw(st.integers(-10, 10)), draw(st.integers(1, 4)))
    if kind == "at_most":
        return EPSet.at_most(draw(st.integers(-10, 10)), draw(st.integers(1, 4)))
    return EPSet.empty() if kind == "empty" else EPSet.everything()


def members(s):
    return {n for n in WINDOW if n in s}


def test_constructors():
    assert members(EPSet.at_least(3, 2)) == set(range(3, 41, 2))
    assert members(EPSet.at_most(0)) == set(range(-40, 1))
    assert EPSet.interval(2, 5).members() == [2, 3, 4]
    assert EPSet.empty().is_empty()
    assert not EPSet.everything().bounded_below()


@given(epsets(), epsets())
def test_boolean_ops_match_pointwise(a, b):
    assert members(a | b) == members(a) | members(b)
    assert members(a & b) == members(a) & members(b)
    assert members(a - b) == members(a) - members(b)
    assert members(a.complement()) == set(WINDOW) - members(a)


@given(epsets(), epsets())
def test_equality_is_extensional(a, b):
    # the normal form makes equal sets compare equal
    assert ((a | b) - b) | (a & b) == a
    assert a.issubset(a | b)


@given(epsets(), st.integers(-6, 6))
def test_shift(a, d):
    assert {n + d for n in members(a) if -34 <= n <= 34} == {n for n in members(a.shift(d)) if -34 + d <= n <= 34 + d}


@given(epsets())
def test_json_round_trip(a):
    assert EPSet.from_json(a.to_json()) == a
