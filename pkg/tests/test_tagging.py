import math

import numpy as np
import pytest
from pydantic import ValidationError

from physics.errors import ChannelNotFoundError, DomainError
from physics.kaon_core import CpParams, DecayChannel, PhysicsParams
from physics.ly_model import LyContext
from physics.tagging import (
    Fig1Curves,
    TagKind,
    decoherence_curve,
    fig1_curves,
    kl_tag_contamination,
    kl_tag_delta_t,
    ks_tag_contamination,
    ks_tag_delta_t,
    living_partner_purity,
    past_state_purity,
    purity_from_contamination,
    tag_report,
)


@pytest.fixture
def unit_dgamma_ctx() -> LyContext:
    """Delta Gamma = 1 exacto."""
    return LyContext.build(
        PhysicsParams(gamma_s=1.5, gamma_l=0.5, delta_m=0.6),
        CpParams(epsilon_s=0.002 + 0.002j, epsilon_l=0.002 + 0.002j),
        [DecayChannel.from_polar("f", 0.002, 0.76), DecayChannel.from_polar("g", 0.3, -1.0)],
    )


class TestThresholds:
    def test_ks_tag_worked_example(self, unit_dgamma_ctx):
        f = unit_dgamma_ctx.channel("f")
        delta_t = ks_tag_delta_t(f, 0.01, unit_dgamma_ctx.params)
        assert delta_t == pytest.approx(2.0 * math.log(50_000.0), rel=1e-14)
        assert delta_t == pytest.approx(21.64, abs=5e-3)

    @pytest.mark.parametrize("bound", [1e-6, 1e-4, 1e-3, 0.05])
    def test_forward_evaluation_reproduces_bound(self, unit_dgamma_ctx, bound):
        params = unit_dgamma_ctx.params
        for channel_id in ("f", "g"):
            f = unit_dgamma_ctx.channel(channel_id)
            dt_ks = ks_tag_delta_t(f, bound, params)
            assert ks_tag_contamination(f.eta_abs, dt_ks, params) == pytest.approx(bound, rel=1e-12)
            dt_kl = kl_tag_delta_t(f, bound, params)
            if bound < f.eta_abs:
                assert kl_tag_contamination(f.eta_abs, dt_kl, params) == pytest.approx(bound, rel=1e-12)
            else:
                assert dt_kl == 0.0

    def test_kl_tag_at_eta_is_immediate(self, ctx):
        f = ctx.channel("a")
        assert kl_tag_delta_t(f, f.eta_abs, ctx.params) == 0.0

    def test_ks_tag_clamps_at_zero(self, ctx):
        # eta = 1.5 y cota = 1: ya bajo la cota en dt = 0
        assert ks_tag_delta_t(ctx.channel("b"), 1.0, ctx.params) == 0.0

    @pytest.mark.parametrize("bound", [0.0, -1e-3])
    def test_non_positive_bound(self, ctx, bound):
        with pytest.raises(DomainError):
            ks_tag_delta_t(ctx.channel("a"), bound, ctx.params)
        with pytest.raises(DomainError):
            kl_tag_delta_t(ctx.channel("a"), bound, ctx.params)

    def test_tag_report(self, unit_dgamma_ctx):
        report = tag_report("KS_tag", "f", 0.01, unit_dgamma_ctx)
        assert report.kind is TagKind.KS_TAG
        assert report.channel == "f"
        assert report.contamination == pytest.approx(0.01, rel=1e-12)
        assert report.purity == pytest.approx(1.0 / 1.0001, rel=1e-12)

    def test_tag_report_unknown_channel(self, ctx):
        with pytest.raises(ChannelNotFoundError):
            tag_report(TagKind.KL_TAG, "missing", 0.01, ctx)

    def test_kl_tag_worked_examples(self, unit_dgamma_ctx):
        f = unit_dgamma_ctx.channel("f")
        delta_t = kl_tag_delta_t(f, 1e-5, unit_dgamma_ctx.params)
        assert delta_t == pytest.approx(2.0 * math.log(200.0), rel=1e-13)
        assert delta_t == pytest.approx(10.597, abs=5e-4)

        wide = PhysicsParams(gamma_s=2.5, gamma_l=0.5, delta_m=1.0)
        unit_eta = DecayChannel.from_polar("u", 1.0, 0.0)
        assert kl_tag_delta_t(unit_eta, math.exp(-3.0), wide) == pytest.approx(3.0, rel=1e-14)

    def test_ks_tag_needs_nonzero_eta(self, params):
        forbidden = DecayChannel(id="z", eta=0, amp_s=1)
        with pytest.raises(DomainError, match="'z'"):
            ks_tag_delta_t(forbidden, 0.01, params)
        with pytest.raises(DomainError):
            ks_tag_contamination(0.0, 1.0, params)
        assert kl_tag_delta_t(forbidden, 0.01, params) == 0.0

    def test_ks_tag_report_on_zero_eta_channel(self, params, cp, channels):
        ctx = LyContext.build(params, cp, [*channels, DecayChannel(id="z", eta=0, amp_s=1)])
        with pytest.raises(DomainError):
            tag_report(TagKind.KS_TAG, "z", 0.01, ctx)
        with pytest.raises(DomainError):
            past_state_purity("z", 3.0, 1.0, ctx)
        assert tag_report(TagKind.KL_TAG, "z", 0.01, ctx).delta_t == 0.0

    def test_purity(self):
        assert purity_from_contamination(0.0) == 1.0
        assert purity_from_contamination(1.0) == 0.5


class TestStatePurity:
    @pytest.mark.parametrize("offset", [600.0, 700.0, 740.0, 800.0, 1600.0])
    def test_past_state_contamination_far_from_production(self, ctx, offset):
        report = past_state_purity("a", 4.0 + offset, 1.5 + offset, ctx)
        assert report.contamination == pytest.approx(ks_tag_contamination(0.3, 2.5, ctx.params), rel=1e-12)
        assert report.contamination == pytest.approx(math.exp(-0.625) / 0.3, rel=1e-12)
        assert report.delta_t == pytest.approx(2.5)

    def test_past_state_contamination_depends_on_dt_only(self, ctx, rng):
        for _ in range(10):
            t1 = float(rng.uniform(0.0, 5.0))
            t2 = t1 + float(rng.uniform(0.0, 4.0))
            shift = float(rng.uniform(0.5, 5.0))
            here = past_state_purity("a", t2, t1, ctx)
            later = past_state_purity("a", t2 + shift, t1 + shift, ctx)
            assert later.contamination == pytest.approx(here.contamination, rel=1e-12)

    def test_past_state_contamination_formula(self, ctx):
        report = past_state_purity("a", 4.0, 1.5, ctx)
        expected = ks_tag_contamination(0.3, 2.5, ctx.params)
        assert report.contamination == pytest.approx(expected, rel=1e-12)
        assert report.kind is TagKind.KS_TAG

    def test_living_partner_contamination_formula(self, ctx):
        for dt in (0.0, 1.0, 6.0):
            report = living_partner_purity("b", dt, ctx)
            assert report.contamination == pytest.approx(kl_tag_contamination(1.5, dt, ctx.params), rel=1e-12)
            assert report.purity == pytest.approx(purity_from_contamination(report.contamination))

    def test_living_partner_is_k_l_dominated_after_twenty_lifetimes(self, unit_dgamma_ctx):
        report = living_partner_purity("f", 20.0, unit_dgamma_ctx)
        assert report.contamination == pytest.approx(0.002 * math.exp(-10.0), rel=1e-6)
        assert report.contamination == pytest.approx(9.1e-8, abs=1e-9)
        assert report.purity == pytest.approx(1.0, abs=1e-14)


class TestFigureCurves:
    grid = np.linspace(0.0, 3.0, 301)

    def test_all_curves_start_at_one(self, fig_ctx):
        curves = fig1_curves("pipi", 3.0, 100.0, self.grid, fig_ctx)
        assert curves.interference[0] == 1.0
        assert curves.decoherence[0] == 1.0
        assert curves.total_width[0] == 1.0

    def test_interference_vanishes_at_equal_times(self, fig_ctx):
        curves = fig1_curves("pipi", 3.0, 100.0, self.grid, fig_ctx)
        assert curves.t1_grid[-1] == 3.0
        assert curves.interference[-1] == 0.0

    def test_reference_exponentials(self, fig_ctx):
        curves = fig1_curves("pipi", 3.0, 100.0, self.grid, fig_ctx)
        t1 = np.asarray(curves.t1_grid)
        np.testing.assert_allclose(curves.decoherence, np.exp(-t1), rtol=0, atol=1e-14)
        np.testing.assert_allclose(curves.total_width, np.exp(-1.2 * t1), rtol=0, atol=1e-14)
        assert curves.total_width[100] == pytest.approx(0.301194, abs=1e-6)

    def test_channel_dependence(self, fig_ctx):
        same = fig1_curves("pipi", 3.0, 100.0, self.grid, fig_ctx)
        mixed = fig1_curves("pipi", 3.0, 100.0, self.grid, fig_ctx, f2="generic")
        assert np.max(np.abs(np.subtract(same.interference, mixed.interference))) > 1e-3
        assert np.max(np.abs(np.subtract(same.decoherence, mixed.decoherence))) == 0.0
        assert np.max(np.abs(np.subtract(same.total_width, mixed.total_width))) == 0.0

    def test_equal_channels_cancel_eta(self, fig_ctx):
        pipi = fig1_curves("pipi", 3.0, 100.0, self.grid, fig_ctx)
        generic = fig1_curves("generic", 3.0, 100.0, self.grid, fig_ctx)
        np.testing.assert_allclose(pipi.interference, generic.interference, rtol=1e-12, atol=1e-14)

    def test_grid_outside_range(self, fig_ctx):
        with pytest.raises(DomainError):
            fig1_curves("pipi", 3.0, 100.0, np.linspace(0.0, 4.0, 5), fig_ctx)
        with pytest.raises(DomainError):
            fig1_curves("pipi", 3.0, 100.0, [1.0, 0.5], fig_ctx)
        with pytest.raises(DomainError):
            fig1_curves("pipi", 3.0, 0.0, self.grid, fig_ctx)

    def test_rows_and_model_checks(self, fig_ctx):
        curves = fig1_curves("pipi", 3.0, 100.0, [0.0, 1.0, 2.0], fig_ctx)
        assert curves.rows()[1][0] == 1.0
        with pytest.raises(ValidationError):
            Fig1Curves(
                channel="x", t2=1.0, kappa=1.0, t1_grid=(0.0, 1.0),
                interference=(1.0,), decoherence=(1.0, 0.5), total_width=(1.0, 0.5),
            )

    def test_decoherence_curve_approaches_pure_exponential(self, fig_ctx):
        t2, curve = decoherence_curve("pipi", self.grid, fig_ctx)
        assert t2 > 3.0
        np.testing.assert_allclose(curve, np.exp(-self.grid), rtol=1e-4)
