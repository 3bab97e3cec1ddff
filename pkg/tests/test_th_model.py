import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from conftest import ordered_times, random_context
from physics.errors import DomainError
from physics.ly_model import intensity_scale, ly_intensity
from physics.th_model import (
    ThBreakdown,
    th_intensity,
    transition_probability,
    transition_probability_flavor,
)

RANDOM_CTX = random_context(np.random.default_rng(7))


class TestEquivalence:
    def test_time_history_equals_two_times_description(self, rng):
        for _ in range(1000):
            ctx = random_context(rng)
            f1, f2 = rng.choice(["c0", "c1"], size=2).tolist()
            t1, t2 = ordered_times(rng)
            th = th_intensity(f1, t1, f2, t2, ctx).total
            ly = ly_intensity(f1, t1, f2, t2, ctx)
            floor = intensity_scale(f1, t1, f2, t2, ctx)
            assert abs(th - ly) / max(th, ly, floor) < 1e-12

    def test_same_channel_same_time_is_exactly_zero(self, ctx):
        breakdown = th_intensity("b", 2.0, "b", 2.0, ctx)
        assert breakdown.step3_prob == 0.0
        assert breakdown.total == 0.0

    @given(
        t1=st.floats(min_value=0.0, max_value=15.0, allow_nan=False, allow_infinity=False),
        gap=st.floats(min_value=0.0, max_value=15.0, allow_nan=False, allow_infinity=False),
    )
    @settings(max_examples=50, deadline=None)
    def test_first_step_is_half_the_pair_survival(self, t1: float, gap: float):
        breakdown = th_intensity("c0", t1, "c1", t1 + gap, RANDOM_CTX)
        assert breakdown.step1_prob == pytest.approx(0.5 * math.exp(-RANDOM_CTX.params.gamma * t1))
        assert breakdown.total >= 0.0


class TestTransition:
    def test_matches_flavor_projection(self, ctx):
        for f1, f2 in (("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")):
            for dt in (0.0, 0.3, 2.0, 12.0):
                stable = transition_probability(f1, f2, dt, ctx)
                direct = transition_probability_flavor(f1, f2, dt, ctx)
                assert stable == pytest.approx(direct, rel=1e-10, abs=1e-16)

    def test_blocked_state_never_starts_in_its_own_complement(self, ctx):
        assert transition_probability("a", "a", 0.0, ctx) == 0.0
        assert transition_probability("a", "a", 1.0, ctx) > 0.0

    def test_probability_at_most_one(self, ctx):
        for dt in (0.0, 0.5, 5.0):
            assert 0.0 <= transition_probability("a", "b", dt, ctx) <= 1.0 + 1e-15

    def test_negative_delta_t(self, ctx):
        with pytest.raises(DomainError):
            transition_probability("a", "b", -0.1, ctx)
        with pytest.raises(DomainError):
            th_intensity("a", 3.0, "b", 1.0, ctx)


class TestBreakdown:
    def test_total_is_product(self, ctx):
        b = th_intensity("a", 0.7, "b", 2.2, ctx)
        product = b.step1_prob * abs(b.step2_amp) ** 2 * b.step3_prob * abs(b.step4_amp) ** 2
        assert b.total == pytest.approx(product, rel=1e-15)

    def test_inconsistent_total_rejected(self):
        with pytest.raises(ValidationError):
            ThBreakdown(step1_prob=0.5, step2_amp=1, step3_prob=0.5, step4_amp=1, total=1.0)

    def test_step1_bounded(self):
        with pytest.raises(ValidationError):
            ThBreakdown(step1_prob=0.6, step2_amp=1, step3_prob=0.5, step4_amp=1, total=0.3)
