import itertools

import pytest
from hypothesis import given

from dilatk.endo import (FinFunc, all_minimal_defects, count_minimal_defects, defect_space, eventual_image,
                         fibers, is_defect_space, is_minimal_defect, minimal_defect)
from dilatk.errors import InvalidInput, NotADefectSpace, OutOfRange
from strategies import finfuncs, func_with_subset


def brute_minimal_defects(h):
    """All inclusion-minimal subsets whose complement carries an injective restriction."""
    good = []
    for k in range(h.n + 1):
        for D in itertools.combinations(range(h.n), k):
            rest = [h(a) for a in range(h.n) if a not in D]
            if len(set(rest)) == len(rest):
                good.append(frozenset(D))
    return {D for D in good if not any(E < D for E in good)}


def test_fibers_examples():
    assert fibers(FinFunc([1, 1, 2])) == [(1, frozenset({0, 1})), (2, frozenset({2}))]
    assert fibers(FinFunc.identity(3)) == [(a, frozenset({a})) for a in range(3)]
    assert fibers(FinFunc([0] * 4)) == [(0, frozenset(range(4)))]


def test_is_defect_space_examples():
    h = FinFunc([1, 1, 2])
    assert is_defect_space(h, [1])
    assert not is_defect_space(h, [])
    assert is_defect_space(FinFunc([2, 0, 1]), [])


def test_minimal_defect_examples():
    assert minimal_defect(FinFunc([1, 1, 2])).members == (1,)
    assert minimal_defect(FinFunc([1, 2, 0])).members == ()
    assert minimal_defect(FinFunc([0, 0, 0])).members == (1, 2)


def test_count_examples():
    assert count_minimal_defects(FinFunc([1, 1, 2])) == 2
    assert count_minimal_defects(FinFunc([1, 2, 0])) == 1
    assert count_minimal_defects(FinFunc([0, 0, 0])) == 3


def test_errors():
    with pytest.raises(OutOfRange):
        is_defect_space(FinFunc([0, 0]), [2])
    with pytest.raises(NotADefectSpace):
        defect_space(FinFunc([0, 0]), [])
    with pytest.raises(InvalidInput):
        FinFunc([0, 3])
    with pytest.raises(InvalidInput):
        FinFunc([])


def test_minimal_defects_exhaustive_small():
    for n in range(1, 5):
        for table in itertools.product(range(n), repeat=n):
            h = FinFunc(table)
            brute = brute_minimal_defects(h)
            found = {frozenset(D.members) for D in all_minimal_defects(h)}
            assert found == brute
            assert count_minimal_defects(h) == len(brute)
            assert frozenset(minimal_defect(h).members) in brute


@given(func_with_subset())
def test_defect_space_agrees_with_predicate(case):
    h, D = case
    ok = is_defect_space(h, D)
    if ok:
        assert defect_space(h, D).members == tuple(D)
    else:
        with pytest.raises(NotADefectSpace):
            defect_space(h, D)
    assert is_minimal_defect(h, D) == (frozenset(D) in brute_minimal_defects(h))


@given(finfuncs())
def test_minimal_defect_is_minimal(h):
    D = minimal_defect(h)
    assert is_minimal_defect(h, D.members)
    assert (len(D) == 0) == h.is_injective()


@given(finfuncs())
def test_eventual_image_is_the_periodic_part(h):
    periodic = {a for a in range(h.n) if any(h.power(a, k) == a for k in range(1, h.n + 1))}
    assert eventual_image(h, range(h.n)) == frozenset(periodic)
