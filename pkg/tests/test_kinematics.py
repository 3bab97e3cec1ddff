import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from pydantic import ValidationError

from physics.errors import DomainError
from physics.kinematics import (
    CausalClass,
    CmKinematics,
    classify,
    classify_many,
    interval_sq,
    lorentz_gamma,
)

beta_strategy = st.floats(min_value=0.0, max_value=0.99, allow_nan=False, allow_infinity=False)


class TestRatio:
    def test_phi_factory_velocity(self):
        assert 0.638 <= CmKinematics(beta_k=0.22).ratio_r <= 0.641

    def test_fast_kaons(self):
        assert 0.0255 <= CmKinematics(beta_k=0.95).ratio_r <= 0.0257

    def test_beta_range(self):
        with pytest.raises(ValidationError):
            CmKinematics(beta_k=1.0)
        with pytest.raises(ValidationError):
            CmKinematics(beta_k=-0.1)
        with pytest.raises(DomainError):
            lorentz_gamma(1.0)
        assert lorentz_gamma(0.6) == pytest.approx(1.25)


class TestClassify:
    def test_examples(self):
        kin = CmKinematics(beta_k=0.22)
        assert classify(0.5, 1.0, kin) is CausalClass.TIME_LIKE
        assert classify(0.7, 1.0, kin) is CausalClass.SPACE_LIKE
        assert classify(1.0, 1.0, kin) is CausalClass.SPACE_LIKE

    def test_kaons_at_rest_are_time_like(self):
        kin = CmKinematics(beta_k=0.0)
        assert classify(0.3, 1.0, kin) is CausalClass.TIME_LIKE
        assert classify(2.0, 2.0, kin) is CausalClass.LIGHT_LIKE

    def test_boundary_is_light_like(self):
        kin = CmKinematics(beta_k=0.22)
        for t2 in (0.4, 1.0, 17.0):
            assert classify(kin.ratio_r * t2, t2, kin) is CausalClass.LIGHT_LIKE

    @pytest.mark.parametrize("t1,t2", [(0.0, 0.0), (-0.1, 1.0), (2.0, 1.0)])
    def test_invalid_times(self, t1, t2):
        kin = CmKinematics(beta_k=0.22)
        with pytest.raises(DomainError):
            classify(t1, t2, kin)
        with pytest.raises(DomainError):
            interval_sq(t1, t2, kin)

    def test_interval_sign_matches_label(self, rng):
        kin = CmKinematics(beta_k=0.4)
        for _ in range(200):
            t2 = float(rng.uniform(0.01, 20.0))
            t1 = float(rng.uniform(0.0, t2))
            label = classify(t1, t2, kin)
            s2 = interval_sq(t1, t2, kin)
            if label is CausalClass.TIME_LIKE:
                assert s2 > 0.0
            elif label is CausalClass.SPACE_LIKE:
                assert s2 < 0.0

    @given(b1=beta_strategy, b2=beta_strategy, frac=st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=200, deadline=None)
    def test_faster_kaons_never_turn_space_like_into_time_like(self, b1: float, b2: float, frac: float):
        assume(b1 < b2)
        t2 = 5.0
        t1 = frac * t2
        slow = classify(t1, t2, CmKinematics(beta_k=b1))
        fast = classify(t1, t2, CmKinematics(beta_k=b2))
        assert CmKinematics(beta_k=b2).ratio_r <= CmKinematics(beta_k=b1).ratio_r
        if slow is CausalClass.SPACE_LIKE:
            assert fast is not CausalClass.TIME_LIKE


class TestClassifyMany:
    def test_agrees_with_scalar(self, rng):
        kin = CmKinematics(beta_k=0.22)
        t2 = rng.uniform(0.01, 10.0, size=500)
        t1 = t2 * rng.uniform(0.0, 1.0, size=500)
        t1[:3] = kin.ratio_r * t2[:3]
        labels = classify_many(t1, t2, kin)
        assert labels == [classify(a, b, kin) for a, b in zip(t1.tolist(), t2.tolist())]
        assert labels[0] is CausalClass.LIGHT_LIKE

    def test_rejects_unordered(self):
        with pytest.raises(DomainError):
            classify_many(np.array([2.0]), np.array([1.0]), CmKinematics(beta_k=0.1))
