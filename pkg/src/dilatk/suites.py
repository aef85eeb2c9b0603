"""Exhaustive and randomized sweeps behind the acceptance tests and ``dilatk selftest``.

Every suite returns a :class:`SuiteResult`; a suite never raises on a
failed case, it records the first witness and keeps counting.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import bcl, dilation1, ext, lifting, multivar
from .corpus import archetypes, random_injective_map
from .endo import FinFunc, all_minimal_defects
from .errors import DilatkError
from .gallery import (swap_point_dilation, swapped_finite_projection, swapped_ray_projection,
                      two_ray_dilation)
from .oracles import brute_orbit_profile, brute_wandering
from .symset import Subset, TailAffineMap, image
from .wold import classify_orbits, forward_closure, is_shift, wold_decompose


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    seconds: float = 0.0
    witness: object = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def fail(self, witness):
        self.failures += 1
        if self.witness is None:
            self.witness = witness

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        s = f"[{verdict}] {self.name}: {self.cases} cases, {self.failures} failures ({self.seconds:.1f}s)"
        if self.witness is not None:
            s += f"; first witness: {self.witness}"
        return s

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "cases": self.cases, "failures": self.failures,
                "seconds": round(self.seconds, 3), "witness": None if self.witness is None else str(self.witness),
                "notes": list(self.notes)}


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def run(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def endofunctions(max_n: int):
    for n in range(1, max_n + 1):
        yield from FinFunc.all(n)


# -- orbit structure ------------------------------------------------------------


def wold_corpus(count: int = 200, seed: int = 0) -> list[tuple[str, TailAffineMap]]:
    rng = random.Random(seed)
    maps = list(archetypes().items())
    maps += [(f"random #{k}", random_injective_map(rng)) for k in range(count)]
    return maps


def _split_is_valid(v: TailAffineMap, shift_part: Subset, bij_part: Subset) -> bool:
    """Both parts invariant, ``v`` onto the second, the first generated by its own wandering set."""
    if not (shift_part & bij_part).is_empty() or (shift_part | bij_part) != v.domain.full():
        return False
    if not image(v, shift_part).issubset(shift_part) or image(v, bij_part) != bij_part:
        return False
    w = shift_part - image(v, shift_part)
    if not w.is_finite():
        return False
    return forward_closure(v, w) == shift_part


def _perturbations(v: TailAffineMap, split, limit: int = 4):
    """Alternative splits obtained by moving one point or one forward orbit across."""
    bound = v.max_threshold() + 2
    pts = list(v.domain.elements(bound))[: limit * 2]
    for x in pts:
        one = v.domain.subset([x])
        orbit = forward_closure(v, one) if x in split.shift_part else None
        if x in split.shift_part:
            yield split.shift_part - one, split.bijective_part | one
            yield split.shift_part - orbit, split.bijective_part | orbit
        else:
            yield split.shift_part | one, split.bijective_part - one


@_timed
def wold_suite(count: int = 200, seed: int = 0, levels: int = 12) -> SuiteResult:
    res = SuiteResult("wold decomposition and orbit classification")
    for name, v in wold_corpus(count, seed):
        res.cases += 1
        try:
            split = wold_decompose(v)
            W = split.wandering
            if W != v.domain.full() - image(v):
                res.fail((name, "W != A minus v(A)"))
            if W.is_finite():
                bound = v.max_threshold() + 4
                if set(W.elements()) & set(v.domain.elements(bound)) != brute_wandering(v, bound):
                    res.fail((name, "wandering set disagrees with brute force"))
            lv = [W]
            for _ in range(levels):
                lv.append(image(v, lv[-1]))
            for m, n in itertools.combinations(range(levels + 1), 2):
                if not (lv[m] & lv[n]).is_empty():
                    res.fail((name, f"v^{m}(W) meets v^{n}(W)"))
                    break
            if not image(v, split.shift_part).issubset(split.shift_part):
                res.fail((name, "shift part not invariant"))
            if image(v, split.bijective_part) != split.bijective_part:
                res.fail((name, "v not onto the bijective part"))
            if not _split_is_valid(v, split.shift_part, split.bijective_part):
                res.fail((name, "the computed split fails its own characterization"))
            for s0, s1 in _perturbations(v, split):
                if _split_is_valid(v, s0, s1) and (s0 - image(v, s0)) != W:
                    res.fail((name, "a perturbed split is valid with a different wandering set"))
            prof = classify_orbits(v)
            cyc, lines, rays = brute_orbit_profile(v)
            if (prof.cycles, prof.lines, prof.rays) != (cyc, lines, rays):
                res.fail((name, f"orbits {prof.to_json()} vs brute force {(cyc, lines, rays)}"))
        except DilatkError as e:
            res.fail((name, f"{type(e).__name__}: {e}"))
    return res


# -- single-variable dilations --------------------------------------------------


@_timed
def dilation_suite(max_n: int = 5, depth: int = 10) -> SuiteResult:
    """Every endofunction and every minimal defect: verify, co-invariance, defect recovery."""
    res = SuiteResult(f"defect dilations, n <= {max_n}, depth {depth}")
    for h in endofunctions(max_n):
        for D in all_minimal_defects(h):
            res.cases += 1
            q = dilation1.defect_dilation(h, D)
            rep = dilation1.verify_power_dilation(q, h, depth)
            if not rep.ok:
                res.fail((h.table, D.members, rep.failed()[0].name))
                continue
            if not dilation1.is_coinvariant(q):
                res.fail((h.table, D.members, "not co-invariant"))
                continue
            try:
                got = dilation1.defect_of_dilation(q, depth)
            except DilatkError as e:
                res.fail((h.table, D.members, f"{type(e).__name__}: {e}"))
                continue
            if got.members != D.members:
                res.fail((h.table, D.members, f"recovered {got.members}"))
    return res


@_timed
def shift_criterion_suite(max_n: int = 5) -> SuiteResult:
    res = SuiteResult(f"shift criterion vs orbit analysis, n <= {max_n}")
    literal = 0
    for h in endofunctions(max_n):
        for D in all_minimal_defects(h):
            res.cases += 1
            q = dilation1.defect_dilation(h, D)
            want = is_shift(q.v)
            if dilation1.shift_criterion(h, D) != want:
                res.fail((h.table, D.members))
            if dilation1.unrestricted_image_test(h, D) != want:
                literal += 1
    res.notes.append(f"unrestricted image test disagrees on {literal} cases")
    return res


@_timed
def golden_suite() -> SuiteResult:
    res = SuiteResult("hand-built examples")

    def case(label, ok):
        res.cases += 1
        if not ok:
            res.fail(label)

    q, h = swap_point_dilation()
    case("swap: verifies", dilation1.verify_power_dilation(q, h, 10).ok)
    case("swap: not co-invariant", not dilation1.is_coinvariant(q))
    q, h = two_ray_dilation()
    case("two rays: verifies", dilation1.verify_power_dilation(q, h, 10).ok)
    case("two rays: not co-invariant", not dilation1.is_coinvariant(q))
    prof = classify_orbits(q.v)
    case("two rays: exactly 2 ray orbits", prof.rays == 2 and prof.lines == 0 and not prof.cycles)
    e = swapped_ray_projection()
    case("swapped ray: projection valid", lifting.check_projection(e.v, e.A, e.h, e.p, 10).ok)
    f = swapped_finite_projection()
    case("swapped finite: projection valid", lifting.check_projection(f.v, f.A, f.h, f.p, 10).ok)
    case("swapped finite: no invariant sandwich", lifting.find_invariant_sandwich(f.v, f.A) is None)
    return res


@_timed
def intertwining_suite(max_size: int = 3, depth: int = 8) -> SuiteResult:
    res = SuiteResult(f"intertwining lift round trip, sizes <= {max_size}")
    for n1, n2 in itertools.product(range(1, max_size + 1), repeat=2):
        for h1 in FinFunc.all(n1):
            for h2 in FinFunc.all(n2):
                for s in lifting.all_intertwiners(h1, h2):
                    res.cases += 1
                    lift = lifting.intertwine_lift(h1, h2, s)
                    if not lifting.lift_report(lift, s).ok:
                        res.fail((h1.table, h2.table, s.table, "exact identities"))
                    elif not lifting.lift_report_to_depth(lift, depth).ok:
                        res.fail((h1.table, h2.table, s.table, "pointwise identities"))
                    elif lifting.intertwine_compress(lift) != s:
                        res.fail((h1.table, h2.table, s.table, "compress"))
    return res


# -- families ----------------------------------------------------------------------


@_timed
def commuting_suite(max_n: int = 4, depth: int = 4) -> SuiteResult:
    res = SuiteResult(f"commuting pairs, n <= {max_n}, depth {depth}")
    for n in range(1, max_n + 1):
        fs = list(FinFunc.all(n))
        for h1, h2 in itertools.product(fs, fs):
            f = multivar.FuncFamily([h1, h2])
            if not f.commuting:
                continue
            res.cases += 1
            rep = multivar.verify_multivar(multivar.commuting_standard_dilation(f), f, depth)
            if not rep.ok:
                res.fail((h1.table, h2.table, rep.failed()[0].name))
    return res


@_timed
def joint_defect_suite(max_n: int = 4, depth: int = 4) -> SuiteResult:
    res = SuiteResult(f"free dilations over minimal joint defects, n <= {max_n}, depth {depth}")
    for n in range(1, max_n + 1):
        fs = list(FinFunc.all(n))
        for h1, h2 in itertools.product(fs, fs):
            f = multivar.FuncFamily([h1, h2])
            for D in multivar.all_minimal_joint_defects(f):
                res.cases += 1
                q = multivar.noncommuting_defect_dilation(f, D)
                try:
                    jd, psi = multivar.noncomm_classify(q, depth)
                except DilatkError as e:
                    res.fail((h1.table, h2.table, D.members, f"{type(e).__name__}: {e}"))
                    continue
                if jd.members != D.members or not psi.is_identity():
                    res.fail((h1.table, h2.table, D.members, f"recovered {jd.members}"))
    return res


@_timed
def bcl_suite(wmax: int = 3, depth: int = 12, tuple_depth: int = 6) -> SuiteResult:
    res = SuiteResult(f"BCL round trips |W| <= {wmax} and triples")
    per_size = {}
    triples = 0
    for size in range(1, wmax + 1):
        for d in bcl.all_bcl_data(size):
            res.cases += 1
            per_size[size] = per_size.get(size, 0) + 1
            rep = bcl.bcl_roundtrip_check(d, depth)
            if not rep.ok:
                res.fail((d.to_json(), rep.failed()[0].name))
            _, s1, s2 = bcl.bcl_synthesize(d)
            I = TailAffineMap.identity(s1.domain)
            for maps in ((s1, s2, I), (I, s1, s2), (s1, I, s2), (s1, s2, s1), (s2, s1, s2)):
                res.cases += 1
                triples += 1
                try:
                    out = bcl.bcl_multi_analyze(maps, tuple_depth)
                except DilatkError as e:
                    res.fail((d.to_json(), "triple", f"{type(e).__name__}: {e}"))
                    continue
                if not out.report.ok:
                    res.fail((d.to_json(), "triple", out.report.failed()[0].name))
    res.notes.append("pairs per |W|: " + ", ".join(f"{k}: {v}" for k, v in sorted(per_size.items())))
    res.notes.append(f"{triples} triples analyzed")
    return res


# -- monoids and linear maps ------------------------------------------------------


def random_action(monoid: ext.PresentedMonoid, n: int, rng: random.Random, tries: int = 200) -> ext.MonoidAction:
    """A random action respecting the relations, found by rejection."""
    for _ in range(tries):
        maps = [FinFunc(rng.randrange(n) for _ in range(n)) for _ in range(monoid.k)]
        if monoid.name.startswith("zd:"):
            d = int(monoid.name[3:])
            perm = list(range(n))
            rng.shuffle(perm)
            maps = [FinFunc(perm)]
            if maps[0].iterate(d) != FinFunc.identity(n):
                continue
        act = ext.MonoidAction(monoid, maps)
        try:
            act.check(3)
            return act
        except DilatkError:
            pass
    return ext.MonoidAction(monoid, [FinFunc.identity(n)] * monoid.k)


PRESETS = ("zplus1", "zplus2", "zplus3", "free1", "free2", "zd:2", "zd:3", "zd:5")


@_timed
def monoid_suite(length: int = 5, max_n: int = 4, per_preset: int = 6, seed: int = 0) -> SuiteResult:
    res = SuiteResult(f"monoid dilations, |s| <= {length}")
    rng = random.Random(seed)
    for spec in PRESETS:
        M = ext.PresentedMonoid.preset(spec)
        for k in range(per_preset):
            act = random_action(M, rng.randint(1, max_n), rng)
            res.cases += 1
            try:
                q = ext.monoid_standard_dilation(act)
            except DilatkError as e:
                res.fail((spec, act.to_json(), f"{type(e).__name__}: {e}"))
                continue
            rep = ext.verify_monoid_dilation(q, act, length)
            if not rep.ok:
                res.fail((spec, act.to_json(), rep.failed()[0].name))
    return res


@_timed
def linear_suite(max_dim: int = 5, depth: int = 10, per_dim: int = 2, seed: int = 0,
                 fields=("q", "gf:2")) -> SuiteResult:
    res = SuiteResult(f"linear dilations, dim <= {max_dim}, depth {depth}")
    rng = random.Random(seed)
    for fld in fields:
        for dim in range(1, max_dim + 1):
            for _ in range(per_dim):
                h = ext.LinMap.random(dim, fld, rng)
                res.cases += 1
                rep = ext.verify_linear_dilation(ext.linear_standard_dilation(h), depth)
                if not rep.ok:
                    res.fail((fld, h.to_json(), rep.failed()[0].name))
    return res


def run_all(quick: bool = True, seed: int = 0) -> list[SuiteResult]:
    """All suites; ``quick`` shrinks the exhaustive ranges for a fast self-test."""
    if quick:
        return [wold_suite(40, seed), dilation_suite(3, 8), shift_criterion_suite(4), golden_suite(),
                intertwining_suite(2, 6), commuting_suite(3, 3), joint_defect_suite(2, 3),
                bcl_suite(2, 8, 4), monoid_suite(4, 3, 2, seed), linear_suite(3, 6, 1, seed)]
    return [wold_suite(200, seed), dilation_suite(5, 10), shift_criterion_suite(5), golden_suite(),
            intertwining_suite(3, 8), commuting_suite(4, 4), joint_defect_suite(4, 4),
            bcl_suite(3, 12, 6), monoid_suite(5, 4, 6, seed), linear_suite(5, 10, 2, seed)]
