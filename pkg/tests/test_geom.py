"""Invariant metric families, signature checks, Levi-Civita curvature."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from eymsym.exact import RatFunc, rf
from eymsym.geom import (BadMetricShape, SignatureVerdict, invariance_residuals,
                         lorentz_check, lorentz_condition_holds,
                         solve_invariant_metric)
from eymsym.liecat import LiePair
from eymsym.linalg import FieldMatrix, inverse

A, B = RatFunc.var("a"), RatFunc.var("b")


def family_of(catalog, case_id):
    entry = catalog.get(case_id)
    return solve_invariant_metric(entry.pair, shape=entry.golden.metric,
                                  lorentz=entry.golden.lorentz)


def test_metric_shapes_adopted_and_dets(catalog):
    for entry in catalog.entries:
        fam = family_of(catalog, entry.pair.case_id)
        assert fam.g == entry.golden.metric
        assert fam.det_g == entry.golden.det, entry.pair.case_id


def test_invariance_system_rank_1_1_1(catalog):
    # ten unknowns, four free entries -> the constraint system has rank six
    entry = catalog.get("1.1^1(7)")
    fam = family_of(catalog, "1.1^1(7)")
    assert len(fam.free_params) == 4
    assert fam.free_params == ["a", "b", "c", "d"]


def test_solution_is_invariant_for_all_cases(catalog):
    for entry in catalog.entries:
        fam = family_of(catalog, entry.pair.case_id)
        for res in invariance_residuals(entry.pair, fam.g):
            assert res.is_zero(), entry.pair.case_id


def test_fallback_parameter_naming(catalog):
    fam = solve_invariant_metric(catalog.get("1.1^1(7)").pair)
    assert fam.free_params == ["a", "b", "c", "d"]
    assert fam.g == catalog.get("1.1^1(7)").golden.metric


def test_trivial_pair_full_family():
    # no isotropy at all: every symmetric bilinear form is invariant
    pair = LiePair(case_id="free", dim_h=0, brackets={})
    fam = solve_invariant_metric(pair)
    assert len(fam.free_params) == 10
    # same with an isotropy generator that acts trivially
    pair = LiePair(case_id="abelian", dim_h=1, brackets={})
    assert len(solve_invariant_metric(pair).free_params) == 10


def test_shape_rejected_when_not_general():
    pair = LiePair(case_id="free", dim_h=1, brackets={})
    too_small = FieldMatrix.from_rows(
        [[A, 0, 0, 0], [0, A, 0, 0], [0, 0, A, 0], [0, 0, 0, A]])
    with pytest.raises(BadMetricShape):
        solve_invariant_metric(pair, shape=too_small)


def test_lorentz_check_examples(catalog):
    fam = family_of(catalog, "1.1^1(7)")
    assert lorentz_check(fam, {"a": 1, "b": 1, "c": 0, "d": 1}) \
        is SignatureVerdict.LORENTZIAN
    fam35 = family_of(catalog, "3.5^2(2)")
    assert lorentz_check(fam35, {"a": 1, "b": 1}) is SignatureVerdict.RIEMANNIAN
    assert lorentz_check(fam35, {"a": 1, "b": -1}) is SignatureVerdict.LORENTZIAN
    euclid = FieldMatrix.identity(4)
    from eymsym.geom import MetricFamily
    from eymsym.linalg import det
    flat = MetricFamily(g=euclid, free_params=[], det_g=det(euclid))
    assert lorentz_check(flat, {}) is SignatureVerdict.RIEMANNIAN


def test_degenerate_sample_detected(catalog):
    fam = family_of(catalog, "1.1^1(7)")
    assert lorentz_check(fam, {"a": 0, "b": 1, "c": 0, "d": 1}) \
        is SignatureVerdict.DEGENERATE


def test_det_negative_iff_lorentzian(catalog):
    """det g < 0 exactly characterizes the Lorentzian samples."""
    rng = random.Random(101)
    for entry in catalog.entries:
        fam = family_of(catalog, entry.pair.case_id)
        names = sorted({v for row in fam.g.entries for x in row
                        for v in x.variables()})
        hits = 0
        while hits < 20:
            sample = {n: Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                      for n in names}
            d = fam.det_g.evaluate(sample)
            if d == 0:
                continue
            hits += 1
            verdict = lorentz_check(fam, sample)
            assert (d < 0) == (verdict is SignatureVerdict.LORENTZIAN), \
                (entry.pair.case_id, sample)


def test_recorded_lorentz_condition_matches_signature(catalog):
    """The catalog condition text agrees with the exact signature verdict
    at >= 20 nondegenerate samples per case, on both sides where possible."""
    rng = random.Random(202)
    for entry in catalog.entries:
        fam = family_of(catalog, entry.pair.case_id)
        cond = entry.golden.lorentz
        names = sorted({v for row in fam.g.entries for x in row
                        for v in x.variables()})
        hits = true_side = 0
        while hits < 20:
            sample = {n: Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                      for n in names}
            if fam.det_g.evaluate(sample) == 0:
                continue
            hits += 1
            expect = lorentz_condition_holds(cond, sample)
            true_side += expect
            got = lorentz_check(fam, sample) is SignatureVerdict.LORENTZIAN
            assert got == expect, (entry.pair.case_id, sample)


def test_ricci_and_scalar_goldens(catalog, reports):
    for entry in catalog.entries:
        r = reports[entry.pair.case_id]
        assert r.lc.ricci == entry.golden.ricci, entry.pair.case_id
        assert r.lc.scalar == entry.golden.scalar, entry.pair.case_id


def test_sign_convention_pinned(reports):
    r = reports["1.1^1(7)"]
    assert r.lc.ricci[0, 2] == rf(-1)
    assert r.lc.scalar == rf(-2) / A


def test_ricci_example_1_4_1(reports):
    r = reports["1.4^1(24)"]
    expected = FieldMatrix.from_rows(
        [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, -1, 0], [0, 0, 0, 0]])
    assert r.lc.ricci == expected and r.lc.scalar.is_zero()


def test_ricci_symmetric_everywhere(reports):
    for r in reports.values():
        assert r.lc.ricci.is_symmetric(), r.case_id


def test_scalar_equals_trace_of_g_inverse_ricci(reports):
    for r in reports.values():
        g_inv = inverse(r.family.g)
        trace = rf(0)
        for i in range(4):
            for j in range(4):
                trace = trace + g_inv[i, j] * r.lc.ricci[i, j]
        assert trace == r.lc.scalar, r.case_id


def test_nomizu_vanishes_on_symmetric_pairs(reports):
    for r in reports.values():
        assert all(alpha.is_zero() for alpha in r.lc.nomizu), r.case_id


def test_ricci_proportional_to_metric_under_full_isotropy(reports):
    # irreducible isotropy forces an Einstein family
    r = reports["6.1^3(1)"]
    three_over_a = rf(3) / A
    assert r.lc.ricci == r.family.g.scale(three_over_a)
    assert r.lc.scalar == rf(12) / A
