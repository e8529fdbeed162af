from fractions import Fraction

import pytest

from chainring.approx import ApproxReal, TruncationPolicy, default_policy


class TestArithmetic:
    def test_addition_accumulates_bounds(self):
        a = ApproxReal(1.0, 1e-9)
        b = ApproxReal(2.0, 2e-9)
        c = a + b
        assert c.value == 3.0
        assert 3e-9 <= c.abs_error < 3.1e-9

    def test_multiplication_includes_cross_term(self):
        a = ApproxReal(2.0, 1e-6)
        b = ApproxReal(3.0, 1e-6)
        c = a * b
        assert c.value == 6.0
        assert c.abs_error >= 2e-6 + 3e-6

    def test_reciprocal_bound_is_valid(self):
        a = ApproxReal(2.0, 1e-3)
        r = a.reciprocal()
        # worst case: 1/(2 - 1e-3) deviates from 1/2 by just under the bound
        worst = abs(1.0 / (2.0 - 1e-3) - 0.5)
        assert r.abs_error >= worst

    def test_reciprocal_rejects_interval_through_zero(self):
        with pytest.raises(ZeroDivisionError):
            ApproxReal(1e-4, 1e-3).reciprocal()

    def test_division_chain(self):
        x = ApproxReal(1.0, 0.0) / ApproxReal(3.0, 0.0)
        assert x.value == pytest.approx(1 / 3)

    def test_agrees_with(self):
        assert ApproxReal(1.0, 1e-6).agrees_with(ApproxReal(1.000001, 1e-6))
        assert not ApproxReal(1.0, 1e-9).agrees_with(ApproxReal(1.1, 1e-9))

    def test_fraction_coercion_carries_conversion_slack(self):
        x = ApproxReal(0.0, 0.0) + Fraction(1, 3)
        assert x.abs_error > 0

    def test_invalid_bound_rejected(self):
        with pytest.raises(ValueError):
            ApproxReal(1.0, -1e-9)
        with pytest.raises(ValueError):
            ApproxReal(1.0, float("nan"))


class TestPolicy:
    def test_defaults(self):
        policy = TruncationPolicy()
        assert policy.max_index == 512 and policy.target_tail == 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            TruncationPolicy(max_index=0)
        with pytest.raises(ValueError):
            TruncationPolicy(target_tail=0.0)

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("CHAINRING_TARGET_TAIL", "1e-8")
        monkeypatch.setenv("CHAINRING_MAX_INDEX", "100")
        policy = default_policy()
        assert policy.target_tail == 1e-8 and policy.max_index == 100
