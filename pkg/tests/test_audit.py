"""Proposition, theorem, and endpoint audits."""

import pytest

from dcclsc import ModelId, Params, Singularity
from dcclsc.audit import (
    AuditVerdict,
    audit_endpoints,
    audit_monotonicity,
    audit_ordering,
    audit_uniqueness,
    classify_direction,
    default_alpha_grid,
    prop4_subsidy_alternate_threshold,
    thresholds,
)

FIG3 = Params(alpha=0.5, c_m=6.0, c_r=4.0, s=1.5)
FIG4 = Params(alpha=0.5, c_m=10.0, c_r=6.0, s=6.0)
THRESHOLD_CASE = Params(alpha=0.5, c_m=1.0, c_r=0.5, s=0.2)


class TestThresholds:
    def test_price_ordering_threshold(self):
        th = thresholds(THRESHOLD_CASE)
        assert th.alpha_star == pytest.approx(7.2 / 21.9, abs=1e-12)
        assert th.alpha_star == pytest.approx(0.328767, abs=1e-6)

    def test_subsidy_ordering_threshold_outside_unit_interval(self):
        th = thresholds(THRESHOLD_CASE)
        assert th.alpha_hat == pytest.approx(1.5, abs=1e-12)
        assert not 0.0 < th.alpha_hat < 1.0

    def test_manufacturer_led_cost_thresholds(self):
        th = thresholds(FIG3)
        assert th.prop2["w"] == pytest.approx(8.0)
        assert th.prop2["p_m"] == pytest.approx(11.0)
        assert th.prop2["b_m"] == pytest.approx(11.0)
        assert th.prop2["p_r"] == pytest.approx(6.5)

    def test_threshold_counts(self):
        th = thresholds(THRESHOLD_CASE)
        assert len(set(th.prop2.values())) == 3
        assert len(th.prop4) == 5
        assert len(th.prop7) == 6

    def test_vanishing_denominator_raises(self):
        # 10*delta - 5*c_m + 10*s + 2 = 0 at (c_m=0.6, c_r=0.5, s=0)
        with pytest.raises(Singularity):
            thresholds(Params(alpha=0.5, c_m=0.6, c_r=0.5, s=0.0))


class TestOrdering:
    def test_direct_price_below_retail_everywhere(self):
        for p in (Params(alpha=0.5, c_m=0.3, c_r=0.1, s=0.05),
                  Params(alpha=0.8, c_m=1.4, c_r=0.2, s=0.4)):
            v = audit_ordering("P1", p)
            assert v.claimed == "less_than"
            assert v.observed == "less_than"
            assert v.agree
            assert len(v.evidence) == len(default_alpha_grid(ModelId.M))

    def test_retailer_led_ordering_above_pole(self):
        p = Params(alpha=0.65, c_m=1.5, c_r=0.7, s=0.2)
        v = audit_ordering("P3", p)
        assert v.claimed == "less_than"  # default grid sits above 2/9
        assert v.observed == "less_than"
        assert v.agree
        # worked values at alpha = 0.65 appear in the evidence
        diff = dict(v.evidence)[0.65]
        assert diff == pytest.approx(1.2016233766233766 - 1.532305194805195, abs=1e-9)

    def test_retailer_led_ordering_both_sides(self):
        p = Params(alpha=0.65, c_m=1.5, c_r=0.7, s=0.2)
        grid = (0.15, 0.18, 0.20, 0.30, 0.40, 0.60)
        v = audit_ordering("P3", p, alpha_grid=grid)
        assert any("above the pole" in n for n in v.notes)
        assert any("below the pole" in n for n in v.notes)

    def test_joint_price_ordering_does_not_flip_at_threshold(self):
        v = audit_ordering("P5", THRESHOLD_CASE)
        assert v.claimed == "mixed"  # threshold lies inside the grid
        assert v.observed == "greater_than"
        assert not v.agree
        assert any("OUTSIDE tolerance" in n for n in v.notes)

    def test_joint_subsidy_ordering_constant_but_reversed(self):
        v = audit_ordering("P6", THRESHOLD_CASE)
        assert v.claimed == "less_than"  # whole grid below alpha_hat = 1.5
        assert v.observed == "greater_than"
        assert not v.agree

    def test_verdict_reproducible(self):
        a = audit_ordering("P5", THRESHOLD_CASE)
        b = audit_ordering("P5", THRESHOLD_CASE)
        assert a == b


class TestMonotonicity:
    def test_classifier(self):
        assert classify_direction([1.0, 2.0, 3.0])[0] == "increasing"
        assert classify_direction([3.0, 2.0, 1.0])[0] == "decreasing"
        assert classify_direction([1.0, 0.5, 2.0])[0] == "non_monotone"
        assert classify_direction([1.0, 1.0, 1.0])[0] == "increasing"  # ties tolerated

    def test_wholesale_increasing_at_low_cost(self):
        p = Params(alpha=0.5, c_m=0.15, c_r=0.12, s=0.02)
        grid = tuple(round(0.05 + 0.01 * k, 10) for k in range(91))
        verdicts = {v.variable: v for v in audit_monotonicity("P2", p, alpha_grid=grid)}
        w = verdicts["w"]
        assert w.claimed == "increasing"  # 0.15 < 1.1
        assert w.condition_value == pytest.approx(1.1 - 0.15, abs=1e-12)
        assert w.observed == "increasing"
        assert w.agree
        evid = dict(w.evidence)
        assert evid[0.1] == pytest.approx(0.5756410256410256, abs=1e-12)
        assert evid[0.9] == pytest.approx(0.6983870967741935, abs=1e-12)

    def test_wholesale_dip_near_zero_detected_on_full_grid(self):
        # the strict classifier catches a ~3e-5 dip below alpha = 0.026 that
        # an endpoint comparison misses entirely
        p = Params(alpha=0.5, c_m=0.15, c_r=0.12, s=0.02)
        verdicts = {v.variable: v for v in audit_monotonicity("P2", p)}
        w = verdicts["w"]
        assert w.observed == "non_monotone"
        assert any("direction changes" in n for n in w.notes)

    def test_retailer_subsidy_erratum_flagged(self):
        verdicts = {v.variable: v for v in audit_monotonicity("P4", FIG4)}
        b_r = verdicts["b_r"]
        assert b_r.claimed == "increasing"  # condition 10 < 21 holds
        assert b_r.condition_value == pytest.approx(11.0)
        assert b_r.observed == "decreasing"
        assert not b_r.agree
        evid = dict(b_r.evidence)
        a35 = min(evid, key=lambda a: abs(a - 0.35))
        a90 = min(evid, key=lambda a: abs(a - 0.90))
        assert evid[a35] == pytest.approx(3.3478260869565215, abs=1e-4)
        assert evid[a90] == pytest.approx(1.6229508196721311, abs=1e-4)

    def test_erratum_verdict_stable_across_grid_resolution(self):
        coarse = {v.variable: v for v in audit_monotonicity("P4", FIG4)}
        lo, hi, step = 0.30, 0.95, 0.001
        fine_grid = tuple(lo + k * step for k in range(int((hi - lo) / step) + 1))
        fine = {v.variable: v for v in audit_monotonicity("P4", FIG4, alpha_grid=fine_grid)}
        assert coarse["b_r"].observed == fine["b_r"].observed == "decreasing"
        assert coarse["b_r"].agree is fine["b_r"].agree is False

    def test_alternate_subsidy_threshold_reported(self):
        verdicts = {v.variable: v for v in audit_monotonicity("P4", FIG4)}
        assert prop4_subsidy_alternate_threshold(FIG4) == pytest.approx(28.0 / 3.0)
        assert any("alternate published threshold" in n for n in verdicts["b_r"].notes)

    def test_transfer_price_has_inverted_condition(self):
        verdicts = {v.variable: v for v in audit_monotonicity("P4", FIG4)}
        t = verdicts["t"]
        # condition is c_m > threshold for the transfer price
        assert t.condition_value == pytest.approx(10.0 - 24.5)
        assert t.claimed == "decreasing"

    def test_retail_price_dip_at_figure_parameters(self):
        verdicts = {v.variable: v for v in audit_monotonicity("P2", FIG3)}
        assert verdicts["p_r"].observed == "non_monotone"
        assert not verdicts["p_r"].agree
        for var in ("w", "b_m", "p_m"):
            assert verdicts[var].agree, var

    def test_joint_model_covers_six_variables(self):
        verdicts = audit_monotonicity("P7", THRESHOLD_CASE)
        assert sorted(v.variable for v in verdicts) == \
            ["b_m", "b_r", "p_m", "p_r", "t", "w"]


class TestUniqueness:
    def test_manufacturer_led_unique(self, params_m):
        v = audit_uniqueness("T1", params_m)
        assert v.claimed == "unique"
        assert v.observed == "unique"
        assert v.agree

    def test_retailer_led_with_validity_caveat(self, params_r):
        v = audit_uniqueness("T2", params_r)
        assert v.observed == "unique"
        assert any("validity caveat" in n and "q1_in_unit" in n for n in v.notes)

    def test_joint_model_records_certified_variant(self, params_mr):
        v = audit_uniqueness("T3", params_mr)
        assert v.observed == "unique"
        assert any("stationary under variant: adopted" in n for n in v.notes)


class TestEndpoints:
    def test_manufacturer_led_pattern(self):
        p = Params(alpha=0.5, c_m=0.6, c_r=0.3, s=0.1)
        verdicts = {(v.variable, v.sub_id): v for v in audit_endpoints(ModelId.M, p)}
        assert len(verdicts) == 8
        assert all(v.agree for (var, sub), v in verdicts.items()
                   if not (var == "b_m" and sub == "alpha->1"))
        assert not verdicts[("b_m", "alpha->1")].agree

    def test_retailer_led_pattern(self):
        p = Params(alpha=0.5, c_m=0.6, c_r=0.3, s=0.1)
        verdicts = {(v.variable, v.sub_id): v for v in audit_endpoints(ModelId.R, p)}
        assert verdicts[("p_m", "alpha->0")].agree
        assert verdicts[("b_r", "alpha->0")].agree
        assert verdicts[("b_r", "alpha->1")].agree
        for key in (("w", "alpha->0"), ("p_r", "alpha->0"), ("t", "alpha->0"),
                    ("w", "alpha->1"), ("p_m", "alpha->1"), ("p_r", "alpha->1")):
            assert not verdicts[key].agree, key

    def test_indeterminate_transfer_endpoint(self):
        p = Params(alpha=0.5, c_m=0.6, c_r=0.3, s=0.1)
        verdicts = {(v.variable, v.sub_id): v for v in audit_endpoints(ModelId.R, p)}
        t1 = verdicts[("t", "alpha->1")]
        assert t1.observed == "indeterminate_as_printed"
        assert any("retains alpha" in n for n in t1.notes)

    def test_joint_model_has_no_published_endpoints(self, params_mr):
        assert audit_endpoints(ModelId.MR, params_mr) == []

    def test_mismatches_carry_both_values(self):
        p = Params(alpha=0.5, c_m=0.6, c_r=0.3, s=0.1)
        verdicts = {(v.variable, v.sub_id): v for v in audit_endpoints(ModelId.R, p)}
        w0 = verdicts[("w", "alpha->0")]
        computed, published = w0.evidence[0][1], w0.evidence[1][1]
        assert computed == pytest.approx((0.6 + 1.0) / 2.0, abs=1e-12)
        assert published == pytest.approx((0.6 - 1.0) / 2.0, abs=1e-12)


def test_verdict_serialization_round_trip():
    v = audit_ordering("P1", Params(alpha=0.5, c_m=0.3, c_r=0.1, s=0.05))
    assert isinstance(v, AuditVerdict)
    payload = v.as_dict()
    assert payload["prop_id"] == "P1"
    assert payload["agree"] is True
    assert payload["evidence"]
