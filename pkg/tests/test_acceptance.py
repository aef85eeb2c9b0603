"""Acceptance criteria at full size, one printed verdict line per criterion."""

import io as stdio
import math

import pytest

from dilatk import bcl, cli, dilation1, errors, ext, lifting, multivar, suites
from dilatk.dilation1 import DilationQuadruple, point
from dilatk.dot import export_dot
from dilatk.endo import FinFunc, count_minimal_defects, defect_space, is_defect_space
from dilatk.gallery import swap_point_dilation
from dilatk.symset import DOWN, UP, Elem, SymSet, TailAffineMap, Translate, compose
from dilatk.wold import classify_orbits, is_shift, wandering_set, wold_decompose


def report(capsys, k, ok, text):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {k}: {text}")


def suite_text(*results):
    return "; ".join(f"{r.name}: {r.cases} cases, {r.failures} failures ({r.seconds:.1f}s)"
                     + (f", first witness {r.witness}" if r.witness is not None else "") for r in results)


def test_criterion_1_wold(capsys):
    res = suites.wold_suite(200, seed=0, levels=12)
    ok = res.ok and res.cases >= 200
    report(capsys, 1, ok, suite_text(res))
    assert ok


def test_criterion_2_dilations(capsys):
    res = suites.dilation_suite(5, 10)
    expected = sum(count_minimal_defects(h) for h in suites.endofunctions(5))
    ok = res.ok and res.cases == expected
    report(capsys, 2, ok, suite_text(res) + f"; expected {expected} (function, defect) pairs")
    assert ok


def test_criterion_3_shift_criterion(capsys):
    res = suites.shift_criterion_suite(5)
    ok = res.ok
    report(capsys, 3, ok, suite_text(res) + "; " + "; ".join(res.notes))
    assert ok


def test_criterion_4_golden(capsys):
    res = suites.golden_suite()
    ok = res.ok and res.cases == 8
    report(capsys, 4, ok, suite_text(res))
    assert ok


def test_criterion_5_intertwining(capsys):
    res = suites.intertwining_suite(3, 8)
    ok = res.ok
    report(capsys, 5, ok, suite_text(res))
    assert ok


def test_criterion_6_multivariable(capsys):
    comm = suites.commuting_suite(4, 4)
    free = suites.joint_defect_suite(4, 4)
    ok = comm.ok and free.ok
    report(capsys, 6, ok, suite_text(comm, free))
    assert ok


def test_criterion_7_bcl(capsys):
    res = suites.bcl_suite(3, 12, 6)
    pairs = sum(math.factorial(k) * 2 ** k for k in (1, 2, 3))
    triples = res.cases - pairs
    ok = res.ok and triples >= 50 and "pairs per |W|: 1: 2, 2: 8, 3: 48" in res.notes
    report(capsys, 7, ok, suite_text(res) + f"; {pairs} pairs, {triples} triples")
    assert ok


def test_criterion_8_monoid_and_linear(capsys):
    mon = suites.monoid_suite(5, 4, 6, seed=0)
    lin = suites.linear_suite(5, 10, 2, seed=0, fields=("q", "gf:2"))
    ok = mon.ok and lin.ok
    report(capsys, 8, ok, suite_text(mon, lin))
    assert ok


# -- criterion 9: negative paths -------------------------------------------------------------------

R = SymSet.of(("r", "ray"))
RAY_SHIFT = TailAffineMap(R, R, {}, {}, {("r", UP): Translate("r", 1)})
L = SymSet.of(("l", "line"))
LINE_SHIFT = TailAffineMap(L, L, {}, {}, {("l", UP): Translate("l", 1), ("l", DOWN): Translate("l", 1)})
F2 = SymSet.of(("f", "fin", 2))
CONST = TailAffineMap.from_function(F2, F2, lambda x: Elem("f", 0))
H112 = FinFunc([1, 1, 2])


def _fin_map(table):
    B = SymSet.of(("B", "fin", len(table)))
    return TailAffineMap.from_function(B, B, lambda x: Elem("B", table[x.index]))


def _corrupt_standard():
    q = dilation1.standard_dilation(FinFunc([1, 0]))
    return DilationQuadruple("corrupt", q.A, q.B, q.i, q.v, q.p.with_window_entry(point(0, 4), point(0, 3)))


def _broken_lift():
    q = dilation1.standard_dilation(FinFunc([1, 0]))
    r = TailAffineMap(q.B, q.B, {}, {}, {("a0", UP): Translate("a0", 1), ("a1", UP): Translate("a1", 1)})
    return lifting.Lift(r, q, q)


def _equivalence_with_wrong_defect():
    # fault injection: the recovered defect is replaced by a wrong one
    q = dilation1.defect_dilation(H112, [1])
    mp = pytest.MonkeyPatch()
    mp.setattr(dilation1, "defect_of_dilation", lambda q, depth=8: defect_space(H112, [0, 1, 2]))
    try:
        dilation1.equivalence_to_defect_model(q, 4)
    finally:
        mp.undo()


def _free_with_stray_point():
    f = multivar.FuncFamily([[0, 0], [1, 1]])
    q = multivar.noncommuting_defect_dilation(f, [1])
    stray = multivar.CallableDilation(
        2, 2, q.i, lambda j, x: ("stray", (j,) + x[1]) if x[0] == "stray" else q.v(j, x), q.p,
        lambda d: list(q.elements(d)) + [("stray", ())], lambda x: True)
    multivar.noncomm_classify(stray, 3)


def _free_hypothesis_violation():
    base = multivar.noncommuting_standard_dilation(multivar.FuncFamily([[0], [0]]))
    q = multivar.CallableDilation(1, 2, base.i, lambda j, x: x if (j, x) == (0, (0, ())) else base.v(j, x),
                                  base.p, base.elements, base.contains)
    multivar.noncomm_classify(q, 3)


def _free_not_coinvariant():
    base = multivar.noncommuting_standard_dilation(multivar.FuncFamily([[0, 0]]))
    q = multivar.CallableDilation(2, 1, base.i, lambda j, x: (0, ()) if x == (1, (0,)) else base.v(j, x),
                                  base.p, base.elements, base.contains)
    multivar.noncomm_classify(q, 3)


_RR = SymSet.of(("a", "ray"), ("b", "ray"))
_CROSS = TailAffineMap(_RR, _RR, {}, {}, {("a", UP): Translate("b", 0), ("b", UP): Translate("a", 1)})
_SHIFT_A = TailAffineMap(_RR, _RR, {}, {}, {("a", UP): Translate("a", 1), ("b", UP): Translate("b", 0)})
_TRUNC = ext.PresentedMonoid("trunc", 1, lambda w: (0,) * min(len(w), 2))

# (operation, error class, trigger)
NEGATIVE_PATHS = [
    ("eval", errors.InvalidElem, lambda: RAY_SHIFT(Elem("r", -1))),
    ("compose", errors.ShapeMismatch, lambda: compose(RAY_SHIFT, LINE_SHIFT)),
    ("is_defect_space", errors.OutOfRange, lambda: is_defect_space(H112, [3])),
    ("wandering_set", errors.NotInjective, lambda: wandering_set(CONST)),
    ("wold_decompose", errors.NotInjective, lambda: wold_decompose(CONST)),
    ("classify_orbits", errors.NotInjective, lambda: classify_orbits(CONST)),
    ("is_shift", errors.NotInjective, lambda: is_shift(CONST)),
    ("defect_dilation", errors.NotADefectSpace, lambda: dilation1.defect_dilation(H112, [])),
    ("defect_of_dilation", errors.NotCoinvariant, lambda: dilation1.defect_of_dilation(swap_point_dilation()[0])),
    ("defect_of_dilation", errors.NotVerified, lambda: dilation1.defect_of_dilation(_corrupt_standard())),
    ("equivalence_to_defect_model", errors.NotCoinvariant,
     lambda: dilation1.equivalence_to_defect_model(swap_point_dilation()[0])),
    ("equivalence_to_defect_model", errors.BijectionFailure, _equivalence_with_wrong_defect),
    ("shift_criterion", errors.NotADefectSpace, lambda: dilation1.shift_criterion(H112, [2])),
    ("intertwine_lift", errors.NotIntertwining,
     lambda: lifting.intertwine_lift(FinFunc([0, 1]), FinFunc([1, 0]), lifting.Intertwiner([0, 1], 2))),
    ("intertwine_compress", errors.LiftIdentitiesFail, lambda: lifting.intertwine_compress(_broken_lift())),
    ("defect_intertwine_lift", errors.DefectCompatibilityFail,
     lambda: lifting.defect_intertwine_lift(FinFunc([0]), [], FinFunc([1, 1]), [1], lifting.Intertwiner([0, 0], 1))),
    ("sarason_projection", errors.NotInvariant,
     lambda: lifting.sarason_projection(_fin_map([1, 2, 3, 0]), [], [("B", 0), ("B", 1)], _fin_map([1, 2, 3, 0]))),
    ("sarason_projection", errors.AgreementFail,
     lambda: lifting.sarason_projection(_fin_map([1, 2, 3, 0]), [], _fin_map([0] * 4).domain.full(),
                                        _fin_map([2, 2, 3, 0]))),
    ("find_invariant_sandwich", errors.TooLarge,
     lambda: lifting.find_invariant_sandwich(_fin_map(list(range(17))), [])),
    ("commuting_standard_dilation", errors.NotCommuting,
     lambda: multivar.commuting_standard_dilation(multivar.FuncFamily([[1, 0], [0, 0]]))),
    ("commuting_defect_dilation", errors.DefectInvalid,
     lambda: multivar.commuting_defect_dilation(multivar.FuncFamily([H112, H112]), [])),
    ("commuting_defect_dilation", errors.NotInvariantComplement,
     lambda: multivar.commuting_defect_dilation(multivar.FuncFamily([H112, H112]), [1])),
    ("noncommuting_defect_dilation", errors.DefectInvalid,
     lambda: multivar.noncommuting_defect_dilation(multivar.FuncFamily([[0, 0], [1, 1]]), [])),
    ("noncomm_classify", errors.HypothesisFail, _free_hypothesis_violation),
    ("noncomm_classify", errors.NotCoinvariant, _free_not_coinvariant),
    ("noncomm_classify", errors.BijectionFailure, _free_with_stray_point),
    ("bcl_analyze", errors.NotInjective, lambda: bcl.bcl_analyze(CONST, TailAffineMap.identity(F2))),
    ("bcl_analyze", errors.NotCommuting, lambda: bcl.bcl_analyze(_CROSS, _SHIFT_A)),
    ("bcl_multi_analyze", errors.NotCommuting, lambda: bcl.bcl_multi_analyze([_CROSS, _SHIFT_A, _SHIFT_A])),
    ("bcl_multi_analyze", errors.NotShift, lambda: bcl.bcl_multi_analyze([LINE_SHIFT, LINE_SHIFT])),
    ("monoid_standard_dilation", errors.NotLeftCancellative,
     lambda: ext.monoid_standard_dilation(ext.MonoidAction(_TRUNC, [[0]]))),
    ("monoid_standard_dilation", errors.RelationViolated,
     lambda: ext.monoid_standard_dilation(ext.MonoidAction(ext.PresentedMonoid.zplus(2), [[1, 0], [0, 0]]))),
    ("export_dot", errors.TooLarge,
     lambda: export_dot(dilation1.standard_dilation(FinFunc([0] * 50)), depth=20, max_nodes=100)),
]

# verification failures of a supplied object exit 1, bad input and failed preconditions exit 2
DOCUMENTED_EXIT = {errors.NotCoinvariant: 1, errors.NotVerified: 1, errors.BijectionFailure: 1,
                   errors.LiftIdentitiesFail: 1}

# commands run end to end, with the exit status each must produce
CLI_CASES = [
    ("malformed JSON", ["classify", "-"], "{oops", 2),
    ("not a defect space", ["dilate", "1,1,2", "--kind", "defect", "--defect", ""], "", 2),
    ("not intertwining", ["lift", "0,1", "1,0", "0,1"], "", 2),
    ("defect compatibility", ["lift", "0", "1,1", "0,0", "--defect", "", "1"], "", 2),
    ("relation violated", ["monoid", "-", "--preset", "zplus2"], '{"maps": [[1, 0], [0, 0]]}', 2),
    ("not commuting", ["multi", "-"], '{"maps": [[1, 0], [0, 0]]}', 2),
    ("node cap", ["export-dot", "-", "--max-nodes", "3"], "[0, 0, 0, 0]", 2),
    ("depth out of range", ["defect", "0", "--depth", "65"], "", 2),
    ("failed verification", ["verify", "-", "0"], None, 1),
]


def _run(argv, stdin):
    out, err = stdio.StringIO(), stdio.StringIO()
    return cli.run(argv, stdin=stdio.StringIO(stdin), stdout=out, stderr=err)


def _failing_quadruple_text():
    from dilatk import io
    q, _ = swap_point_dilation()
    doc = io.encode_quadruple(q)
    doc["p"]["window"] = [[["B", 0], ["B", 0]], [["B", 1], ["B", 0]]]
    return io.dumps(doc)


def test_criterion_9_negative_paths(capsys, monkeypatch):
    problems = []
    for op, cls, trigger in NEGATIVE_PATHS:
        try:
            trigger()
            problems.append(f"{op}: no {cls.__name__}")
        except cls as e:
            if type(e) is not cls:
                problems.append(f"{op}: raised {type(e).__name__} instead of {cls.__name__}")
        except Exception as e:  # noqa: BLE001
            problems.append(f"{op}: raised {type(e).__name__} instead of {cls.__name__}")

    # every class listed in an operation contract is exercised
    covered = {cls for _, cls, _ in NEGATIVE_PATHS}
    listed = {errors.InvalidElem, errors.ShapeMismatch, errors.OutOfRange, errors.NotInjective,
              errors.NotADefectSpace, errors.NotCoinvariant, errors.NotVerified, errors.BijectionFailure,
              errors.NotIntertwining, errors.LiftIdentitiesFail, errors.DefectCompatibilityFail,
              errors.NotInvariant, errors.AgreementFail, errors.TooLarge, errors.NotCommuting,
              errors.DefectInvalid, errors.NotInvariantComplement, errors.HypothesisFail, errors.NotShift,
              errors.NotLeftCancellative, errors.RelationViolated}
    if listed - covered:
        problems.append(f"untriggered: {sorted(c.__name__ for c in listed - covered)}")

    # each class reaches the shell with its documented status
    every = {cls for cls in vars(errors).values() if isinstance(cls, type) and issubclass(cls, errors.DilatkError)}
    for cls in sorted(every, key=lambda c: c.__name__):
        want = DOCUMENTED_EXIT.get(cls, 2)
        if cls.exit_code != want:
            problems.append(f"{cls.__name__}.exit_code = {cls.exit_code}, documented {want}")

        def boom(args, inp, out, cls=cls):
            raise cls("injected", witness=0)

        monkeypatch.setattr(cli, "cmd_defect", boom)
        code = _run(["defect", "0"], "")
        if code != want:
            problems.append(f"run() maps {cls.__name__} to {code}, documented {want}")
    monkeypatch.undo()

    for label, argv, stdin, want in CLI_CASES:
        code = _run(argv, _failing_quadruple_text() if stdin is None else stdin)
        if code != want:
            problems.append(f"cli {label}: exit {code}, expected {want}")

    ok = not problems
    text = (f"{len(NEGATIVE_PATHS)} error triggers over {len(covered)} error classes, "
            f"{len(every)} exit-code mappings, {len(CLI_CASES)} CLI cases")
    if problems:
        text += "; problems: " + "; ".join(problems)
    report(capsys, 9, ok, text)
    assert ok, problems
