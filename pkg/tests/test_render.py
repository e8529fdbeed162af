from fractions import Fraction

import pytest

from chainring.render import render_ratio, render_scientific


class TestScientific:
    def test_three_significant_digits(self):
        assert render_scientific(Fraction(107, 10 ** 33), 3) == "1.07e-31"
        assert render_scientific(Fraction(370, 10 ** 64), 3) == "3.70e-62"

    def test_two_significant_digits(self):
        assert render_scientific(Fraction(14, 10 ** 11), 2) == "1.4e-10"

    def test_mantissa_rollover(self):
        assert render_scientific(Fraction(996, 1000), 2) == "1.0e+0"

    def test_positive_exponent(self):
        assert render_scientific(Fraction(12345, 10), 3) == "1.23e+3"

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            render_scientific(Fraction(0), 3)


class TestRatio:
    def test_fixed_point_banker_rounding(self):
        assert render_ratio(Fraction(3, 4), 6) == "0.750000"
        assert render_ratio(Fraction(1, 2) + Fraction(5, 10 ** 7), 6) == "0.500000"  # half-even
        assert render_ratio(Fraction(1, 2) + Fraction(15, 10 ** 7), 6) == "0.500002"

    def test_extremes(self):
        assert render_ratio(Fraction(0), 6) == "0.000000"
        assert render_ratio(Fraction(1), 6) == "1.000000"

    def test_scientific_below_cut(self):
        assert render_ratio(Fraction(1, 10 ** 5), 6) == "1.00e-5"
        assert render_ratio(Fraction(9999, 10 ** 8), 6) == "1.00e-4"

    def test_hybrid_near_one(self):
        value = 1 - Fraction(14, 10 ** 11)
        assert render_ratio(value, 6) == "1-1.4e-10"
        # just outside the hybrid window: plain decimal
        assert render_ratio(1 - Fraction(9, 10 ** 7), 6) == "0.999999"

    def test_hybrid_window_override(self):
        value = 1 - Fraction(85, 10 ** 7)
        assert render_ratio(value, 5, hybrid_below=Fraction(1, 10 ** 5)) == "1-8.5e-6"
        assert render_ratio(value, 5) == "0.99999"

    def test_values_above_one(self):
        assert render_ratio(Fraction(16, 5), 6) == "3.200000"

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            render_ratio(Fraction(-1, 2), 6)
