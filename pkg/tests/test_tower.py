import json
import logging
import math

import pytest
import sympy

from bianchitower.congruence import DEFAULT_CLOSURE_CAP, CongruenceKind, index_formula, member, psl2_order
from bianchitower.matgroup import BoundConstants, GroupContext, compute_entry_constants
from bianchitower.presets import figure8, picard
from bianchitower.quadfield import (
    FieldSpec,
    QuadInt,
    SquareFreeIdeal,
    find_split_prime_ideal,
    prime_ideal_of,
    prime_ideals_above,
)
from bianchitower.tower import (
    _index_assumption,
    ChainingFailure,
    Lemma51Violation,
    build_tower_closed,
    build_tower_noncompact,
    chaining_holds,
    closed_exponents,
    compute_c3,
    genus_ball_certificate,
    hecke0_threshold,
    lemma51_bound,
    norm_chain,
    theorem14_bounds,
    verify_lemma51,
)

K0, K1, KP = CongruenceKind.HECKE0, CongruenceKind.HECKE1, CongruenceKind.PRINCIPAL


def _consts(c1, c2):
    from fractions import Fraction

    return BoundConstants(c1, c2, Fraction(c1) ** 2, Fraction(c2) ** 2)


def test_c3_examples(figure8_ctx):
    ctx = GroupContext(figure8_ctx.field, figure8_ctx.generators, c_prime=1.0, systole=1.0)
    c3 = compute_c3(_consts(1, 1), ctx)
    assert c3.value == pytest.approx(8.000000008, rel=1e-12)
    assert compute_c3(_consts(2, 1), ctx).value == pytest.approx(4 * c3.value, rel=1e-12)
    for s in (0.3, 1.0, 1.7):
        ctx_s = GroupContext(ctx.field, ctx.generators, c_prime=2.5, systole=s)
        c = compute_c3(_consts(1.3, 1.1), ctx_s)
        for ell in (s, 2 * s, 10 * s):
            assert c.log_margin(ell) > 0


def test_lemma51_bound_examples():
    b = lemma51_bound(K0, 25)
    assert b.cosh_bound == pytest.approx(2.5) and b.t == pytest.approx(5 ** -0.5)
    assert lemma51_bound(KP, 25).cosh_bound == pytest.approx(12.5)
    assert lemma51_bound(KP, 25).t == 1.0
    b4 = lemma51_bound(K1, 4)
    assert b4.cosh_bound == pytest.approx(1.0) and b4.degenerate
    assert lemma51_bound(K1, 5).t == pytest.approx(5 ** -0.25)


def _picard_ideals_upto(bound):
    K = FieldSpec(1)
    primes = [P for p in sympy.primerange(2, bound + 1) for P in prime_ideals_above(K, p) if P.norm <= bound]
    out = []

    def rec(start, chosen, norm):
        if chosen:
            out.append(SquareFreeIdeal(chosen))
        for i in range(start, len(primes)):
            if norm * primes[i].norm <= bound:
                rec(i + 1, chosen + [primes[i]], norm * primes[i].norm)

    rec(0, [], 1)
    return out


@pytest.mark.slow
@pytest.mark.parametrize("ideal", _picard_ideals_upto(30), ids=lambda I: f"N{I.norm()}-" + "-".join(
    f"{P.p}.{P.split_root}" for P in I.factors))
def test_lemma51_brute_force_small_norms(picard_ctx, ideal):
    for kind in CongruenceKind:
        rep = verify_lemma51(picard_ctx, kind, ideal, 8)
        assert rep.min_cosh >= rep.cosh_bound - 1e-9
        assert rep.scored > 0


def test_lemma51_identity_excluded_and_exceptions(picard_ctx, p_2_plus_i):
    I = SquareFreeIdeal([p_2_plus_i])
    rep = verify_lemma51(picard_ctx, K0, I, 6)
    assert rep.min_cosh > 1.0
    # diag(i, -i) fixes infinity and the axis through j: outside the lemma's hypothesis
    assert rep.hypothesis_exceptions > 0 and rep.exception_min_cosh == pytest.approx(1.0)
    assert verify_lemma51(picard_ctx, K1, I, 6).hypothesis_exceptions == 0


def test_lemma51_violation_reports_witness(picard_ctx, p_2_plus_i):
    with pytest.raises(Lemma51Violation, match="cosh distance"):
        verify_lemma51(picard_ctx, KP, SquareFreeIdeal([p_2_plus_i]), 6, t=5 ** -0.5)


def test_lemma51_needs_integral_group(gauss, p_2_plus_i):
    from bianchitower.matgroup import Mat2

    ctx = GroupContext(gauss, (Mat2.from_lists([[1, (1, 0, 2)], [0, 1]], gauss),))
    with pytest.raises(ValueError):
        verify_lemma51(ctx, K0, SquareFreeIdeal([p_2_plus_i]), 2)


def test_certificate_hecke0_small_prime(p_2_plus_i):
    c = genus_ball_certificate(K0, SquareFreeIdeal([p_2_plus_i]), eps=0.05)
    assert c.genus_lb == pytest.approx(5 ** 0.25 / 4)
    assert c.genus_lb == pytest.approx(0.37384, abs=1e-5)
    assert c.index_upper_bound == 6
    assert not c.passed and c.exponent_claim.rhs == pytest.approx(6 ** 0.2)
    assert c.consistent()


def test_certificate_principal_25(gauss):
    P = prime_ideal_of(QuadInt(2, 1, gauss))
    I = SquareFreeIdeal([P, P.conjugate()])
    c = genus_ball_certificate(KP, I, v0=0.30532)
    assert c.inj_radius_lb == pytest.approx(0.5 * math.acosh(12.5), rel=1e-12)
    assert c.ball_volume_lb == pytest.approx(29.04, abs=0.01)
    assert c.degree_bound == 0.5 * 25 ** 3
    assert c.exponent_claim.constant == pytest.approx(1.4634, abs=1e-3)
    assert c.covolume == pytest.approx(0.30532 * index_formula(KP, I))
    assert c.consistent() and c.passed
    d = json.loads(json.dumps(c.as_dict()))
    assert d["status"] == "PASS" and d["norm"] == 25


def test_norm_chain_matches_certificate(gauss):
    P = find_split_prime_ideal(gauss, 13)
    I = SquareFreeIdeal([P, P.conjugate()])
    c = genus_ball_certificate(KP, I)
    n = norm_chain(KP, 169)
    assert n.ball_volume_lb == c.ball_volume_lb and n.constant == c.exponent_claim.constant


def test_theorem15_claims(p_2_plus_i):
    I = SquareFreeIdeal([p_2_plus_i])
    c = genus_ball_certificate(K0, I, v0=0.30532, theorem="ball-covolume")
    assert c.exponent_claim.exponent == pytest.approx(0.45)
    c = genus_ball_certificate(K1, I)
    assert c.exponent_claim.theorem == "ball-hecke1" and c.exponent_claim.constant > 0
    with pytest.raises(ValueError):
        genus_ball_certificate(K0, I, theorem="ball-covolume")


def test_ceiling_exponent_logged(caplog, gauss):
    P5, P13 = find_split_prime_ideal(gauss, 5), find_split_prime_ideal(gauss, 13)
    big = [find_split_prime_ideal(gauss, p) for p in (10009, 10037)]
    with caplog.at_level(logging.DEBUG, logger="bianchitower.tower"):
        for I in (SquareFreeIdeal([P5]), SquareFreeIdeal([P5, P13]), SquareFreeIdeal(big)):
            for kind in CongruenceKind:
                c = genus_ball_certificate(kind, I, v0=0.30532)
                if c.ceiling_exponent is not None:
                    assert c.ceiling_exponent <= 0.5
    assert not [r for r in caplog.records if r.levelno >= logging.WARNING and "ceiling" in r.message]


def test_hecke0_threshold():
    thr = hecke0_threshold(0.05)
    assert 1.0e12 < thr < 1.2e12
    assert hecke0_threshold(0.24) < 1e3
    assert hecke0_threshold(0.2) < hecke0_threshold(0.1) < thr
    with pytest.raises(ValueError):
        hecke0_threshold(0.25)


def test_noncompact_tower():
    levels = build_tower_noncompact(picard(), 0.05, 3)
    assert len(levels) == 3
    thr = hecke0_threshold(0.05)
    assert levels[0].cumulative_ideal.factors[0].p >= thr
    for i, L in enumerate(levels):
        assert L.certificate.passed and L.certificate.consistent()
        assert L.certificate.index_assumption == "formula-assumed"
        assert len(L.cumulative_ideal.factors) == i + 1
        if i:
            prev = levels[i - 1]
            assert set(prev.cumulative_ideal.factors) < set(L.cumulative_ideal.factors)
            assert L.certificate.index_upper_bound > prev.certificate.index_upper_bound
    assert build_tower_noncompact(picard(), 0.05, 0) == []
    small = build_tower_noncompact(picard(), 0.24, 1)
    assert small[0].cumulative_ideal.factors[0].p < 1e3
    p = small[0].cumulative_ideal.factors[0].p
    expected = "verified" if psl2_order(p) <= DEFAULT_CLOSURE_CAP else "formula-assumed"
    assert small[0].certificate.index_assumption == expected
    ctx = picard()
    P13 = find_split_prime_ideal(ctx.field, 13)
    assert _index_assumption(ctx, P13, DEFAULT_CLOSURE_CAP) == "verified"
    assert _index_assumption(ctx, P13, 100) == "formula-assumed"
    with pytest.raises(ValueError):
        build_tower_noncompact(picard(), 0.3, 1)


@pytest.fixture(scope="module")
def closed_levels():
    return build_tower_closed(figure8(), 0.1, 6, 2.0, levels=2)


def test_closed_tower(closed_levels):
    ctx = figure8()
    a, b = closed_exponents(ctx, 0.1)
    assert (a, b) == pytest.approx((0.075, 0.025))
    L1, L2 = closed_levels
    assert L1.certificate.depth_semantics == (6, 2.0)
    assert L2.certificate.depth_semantics == (6, 4.0)
    assert L1.certificate.genus_lb == pytest.approx(math.exp(1) / 4)
    assert L2.certificate.degree_bound == 0.5 * L2.cumulative_ideal.norm() ** 2
    assert set(L1.cumulative_ideal.factors) < set(L2.cumulative_ideal.factors)
    P1, P2 = L2.cumulative_ideal.factors
    assert chaining_holds(P2.norm, P1.norm * P2.norm, a, b)
    lhs = a * math.log(0.5 * P2.norm ** 2)
    rhs = b * math.log(0.5 * (P1.norm * P2.norm) ** 2)
    assert lhs > rhs
    inv = __import__("bianchitower.spectrum", fromlist=["x"]).enumerate_geodesics(ctx, 6, 4.0)
    I = L2.cumulative_ideal
    for rec in inv.records:
        assert not member(rec.elem, K1, I)


def test_closed_tower_errors():
    with pytest.raises(ValueError):
        build_tower_closed(figure8(), 0.25, 6, 2.0)


def test_theorem14(closed_levels):
    ctx = figure8()
    c3 = compute_c3(_consts(1, 1), ctx)
    r = theorem14_bounds(ctx, closed_levels[0], 0.1, c3, 2.02988)
    assert r.ineq_36.threshold is not None and math.isfinite(r.ineq_36.threshold)
    assert not r.ineq_36.marginal
    # at and beyond the threshold the inequality holds
    for ell in (r.ineq_36.threshold + 1e-6, r.ineq_36.threshold * 2, 50):
        lv = type(closed_levels[0])(1, closed_levels[0].cumulative_ideal, closed_levels[0].certificate)
        from dataclasses import replace

        lv.certificate = replace(closed_levels[0].certificate, depth_semantics=(6, ell))
        assert theorem14_bounds(ctx, lv, 0.1, c3, 2.02988).ineq_36.holds
    r0 = theorem14_bounds(ctx, closed_levels[0], 0.0, c3, 2.02988)
    assert r0.ineq_36.marginal and r0.ineq_36.threshold is None
    assert r.c1_check_passed and r.c1_check_min_ratio >= 1
    arith = GroupContext(ctx.field, ctx.generators, geodesic_count_exponent=1)
    ra = theorem14_bounds(arith, closed_levels[0], 0.1, c3, 2.02988)
    assert ra.arithmetic and ra.ball_claim.exponent == pytest.approx(0.4)
