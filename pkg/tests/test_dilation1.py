import itertools

import pytest
from hypothesis import given

from dilatk.dilation1 import (BASE, DilationQuadruple, check_one_step, coinvariance_witness, defect_dilation,
                              defect_of_dilation, equivalence_to_defect_model, halmos_dilate, is_coinvariant,
                              point, shift_criterion, standard_dilation, unitary_dilation,
                              unrestricted_image_test, verify_power_dilation)
from dilatk.endo import FinFunc, all_minimal_defects, minimal_defect
from dilatk.errors import NotADefectSpace, NotCoinvariant, NotVerified
from dilatk.gallery import swap_point_dilation, two_ray_dilation
from dilatk.oracles import brute_orbit_profile
from dilatk.symset import Elem, TailAffineMap
from dilatk.wold import classify_orbits, is_shift
from strategies import finfuncs

ID1 = FinFunc([0])
SWAP = FinFunc([1, 0])
H112 = FinFunc([1, 1, 2])


def base(a):
    return Elem(BASE, a)


def brute_is_shift(v):
    cycles, lines, _ = brute_orbit_profile(v)
    return not cycles and lines == 0


def test_halmos_examples():
    q = halmos_dilate(ID1)
    assert q.v(point(0, 0)) == point(0, 1) and q.v(point(0, 1)) == point(0, 0)
    assert q.p(point(0, 1)) == point(0, 0)
    assert check_one_step(q, ID1).ok
    q = halmos_dilate(SWAP)
    assert [q.p(point(a, 1)) for a in range(2)] == [point(1, 0), point(0, 0)]
    assert check_one_step(halmos_dilate(H112), H112).ok


def test_standard_examples():
    q = standard_dilation(ID1)
    assert all(q.p(point(0, m)) == point(0, 0) for m in range(20))
    assert standard_dilation(H112).p(point(0, 2)) == point(1, 0)
    assert standard_dilation(SWAP).p(point(0, 3)) == point(1, 0)


def test_defect_examples():
    perm = FinFunc([2, 0, 1])
    q = defect_dilation(perm, [])
    assert q.B.is_finite and len(q.B) == 3
    assert [q.v(q.i(base(a))) for a in range(3)] == [q.i(base(perm(a))) for a in range(3)]
    assert all(q.p(x) == x for x in q.B.elements())
    q = defect_dilation(H112, [1])
    kinds = {c.id: (c.kind, c.size) for c in q.B}
    assert kinds == {"a0": ("fin", 1), "a1": ("ray", None), "a2": ("fin", 1)}
    assert verify_power_dilation(q, H112, 8).ok
    for h in (H112, SWAP, FinFunc([0, 0, 1])):
        assert defect_dilation(h, range(h.n)) == standard_dilation(h)


def test_defect_requires_defect_space():
    with pytest.raises(NotADefectSpace):
        defect_dilation(H112, [])
    with pytest.raises(NotADefectSpace):
        shift_criterion(H112, [2])


def test_unitary_examples():
    q = unitary_dilation(ID1)
    assert all(q.p(point(0, n)) == point(0, 0) for n in range(-10, 11))
    q = unitary_dilation(SWAP)
    assert q.p(point(0, -3)) == point(0, 0)
    assert q.p(point(0, 2)) == point(0, 0)
    assert q.p(point(0, 3)) == point(1, 0)
    assert verify_power_dilation(q, SWAP, 10).ok


def test_swap_point_example():
    q, h = swap_point_dilation()
    for depth in (0, 1, 5, 12):
        assert verify_power_dilation(q, h, depth).ok
    w = coinvariance_witness(q)
    assert w is not None and q.v(w) in {q.i(base(0))}
    assert not is_coinvariant(q)
    with pytest.raises(NotCoinvariant):
        defect_of_dilation(q)
    with pytest.raises(NotCoinvariant):
        equivalence_to_defect_model(q)


def test_two_ray_example():
    q, h = two_ray_dilation()
    assert verify_power_dilation(q, h, 10).ok
    assert not is_coinvariant(q)
    prof = classify_orbits(q.v)
    assert (prof.cycles, prof.lines, prof.rays) == ({}, 0, 2)


def test_corrupted_p_fails_at_first_step():
    q = standard_dilation(SWAP)
    bad = DilationQuadruple("corrupt", q.A, q.B, q.i, q.v, TailAffineMap.identity(q.B))
    rep = verify_power_dilation(bad, SWAP, 5)
    assert not rep.ok
    first = next(c for c in rep.failed() if c.name == "identity")
    assert first.witness["a"] == str(base(0)) and first.witness["n"] == 1


def test_not_verified():
    # co-invariant, but p is not idempotent far out on one fibre
    q = standard_dilation(SWAP)
    p = q.p.with_window_entry(point(0, 4), point(0, 3))
    bad = DilationQuadruple("corrupt", q.A, q.B, q.i, q.v, p)
    assert is_coinvariant(bad)
    with pytest.raises(NotVerified):
        defect_of_dilation(bad)


def test_defect_of_dilation_examples():
    assert defect_of_dilation(standard_dilation(H112)).members == (0, 1, 2)
    assert defect_of_dilation(defect_dilation(FinFunc([1, 2, 0]), [])).members == ()


def test_equivalence_examples():
    q = defect_dilation(H112, minimal_defect(H112))
    assert equivalence_to_defect_model(q, 6).is_identity()
    s = equivalence_to_defect_model(standard_dilation(H112), 6)
    assert s.is_identity() and s.defect == (0, 1, 2)


def test_shift_criterion_examples():
    assert shift_criterion(FinFunc([1, 2, 2]), [2])
    assert not shift_criterion(ID1, [])
    assert not shift_criterion(H112, [1])


def test_shift_criterion_counterexample_to_unrestricted_images():
    h, D = FinFunc([1, 0, 0]), [1]
    assert is_shift(defect_dilation(h, D).v)
    assert shift_criterion(h, D)
    assert not unrestricted_image_test(h, D)


def test_shift_criterion_exhaustive_small():
    for n in range(1, 5):
        for table in itertools.product(range(n), repeat=n):
            h = FinFunc(table)
            for D in all_minimal_defects(h):
                v = defect_dilation(h, D).v
                assert shift_criterion(h, D) == is_shift(v) == brute_is_shift(v)


@given(finfuncs(max_n=5))
def test_defect_round_trip(h):
    for D in all_minimal_defects(h):
        q = defect_dilation(h, D)
        assert verify_power_dilation(q, h, 6).ok
        assert is_coinvariant(q)
        assert defect_of_dilation(q, 6) == D


@given(finfuncs(max_n=6))
def test_standard_and_unitary_verify(h):
    assert verify_power_dilation(standard_dilation(h), h, 10).ok
    assert verify_power_dilation(unitary_dilation(h), h, 6).ok
    assert check_one_step(halmos_dilate(h), h).ok
