import math

import numpy as np
import pytest
from scipy import special

from divbounds.oracle import (
    McConfig,
    QuadConfig,
    QuadratureError,
    adaptive_gauss_legendre,
    composite_gauss_legendre,
    monte_carlo_price,
    quadrature_estimate,
    quadrature_price,
)
from divbounds.oracle import _uniforms
from divbounds.terminal import bs_call, value_pre_dividend

from conftest import random_problems, table1_problem

# 40-digit mpmath integration of the dividend-date value against the density
TABLE1_EXACT = 12.870449580110587996


class TestAdaptiveGaussLegendre:
    def test_known_integrals(self):
        assert adaptive_gauss_legendre(np.sin, 0, math.pi, 1e-13).value == pytest.approx(2.0, abs=1e-13)
        assert adaptive_gauss_legendre(np.exp, -1, 2, 1e-12).value == pytest.approx(math.e**2 - math.exp(-1), abs=1e-12)

    def test_kinked_integrand_refines(self):
        res = adaptive_gauss_legendre(np.abs, -1, 2 / 3, 1e-10)
        assert res.value == pytest.approx(0.5 + 2 / 9, abs=1e-10)
        assert res.panels > 8

    def test_empty_interval(self):
        assert adaptive_gauss_legendre(np.exp, 1.0, 1.0, 1e-8).value == 0.0

    def test_panel_budget(self):
        with pytest.raises(QuadratureError):
            adaptive_gauss_legendre(np.abs, -1, 2 / 3, 1e-14, max_panels=10)

    def test_composite_rule(self):
        assert composite_gauss_legendre(np.cos, np.linspace(0, 1, 3)) == pytest.approx(math.sin(1), abs=1e-15)


class TestQuadraturePrice:
    def test_table_value(self, problem):
        v = quadrature_price(problem)
        assert round(v, 2) == 12.87
        assert v == pytest.approx(TABLE1_EXACT, abs=1e-9)

    @pytest.mark.parametrize("spot, strike", [(110, 100), (60, 140), (250, 30)])
    def test_zero_dividend_is_black_scholes(self, spot, strike):
        p = table1_problem(spot=spot, strike=strike, dividend_amount=0.0)
        assert quadrature_price(p) == pytest.approx(bs_call(spot, strike, 0.03, 0.2, 1.0), abs=1e-6)

    def test_short_horizon(self):
        # second-order moment expansion around the forward
        tau, r, vol = 0.001, 0.03, 0.2
        p = table1_problem(dividend_time=tau)
        fwd = 110 * math.exp(r * tau)
        var = fwd**2 * math.expm1(vol**2 * tau)
        h = 1e-2
        v = lambda s: value_pre_dividend(s, p)
        gamma = (v(fwd + h) - 2 * v(fwd) + v(fwd - h)) / h**2
        approx = math.exp(-r * tau) * (v(fwd) + 0.5 * gamma * var)
        assert quadrature_price(p) == pytest.approx(approx, abs=1e-4)

    def test_huge_dividend_is_worthless(self):
        p = table1_problem(spot=20.0, dividend_amount=19.99, volatility=0.05, dividend_time=0.1)
        assert quadrature_price(p) < 1e-12

    def test_dividend_beyond_truncation(self):
        # kink beyond 12 standard deviations: nothing left to integrate
        p = table1_problem(spot=10.0, dividend_amount=11.0, volatility=0.05, dividend_time=0.01)
        res = quadrature_estimate(p)
        assert res.value == 0.0 and res.panels == 0

    @pytest.mark.parametrize("p", random_problems(10, seed=51), ids=lambda p: f"S{p.spot:.0f}")
    def test_self_consistent(self, p):
        loose = quadrature_estimate(p, QuadConfig(target_abs_error=1e-6))
        tight = quadrature_estimate(p, QuadConfig(target_abs_error=1e-12))
        assert abs(loose.value - tight.value) <= max(loose.abs_error, 1e-15)
        assert tight.panels >= loose.panels

    def test_drift_never_read(self, problem):
        assert quadrature_price(problem) == quadrature_price(table1_problem(drift=-0.4))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            QuadConfig(truncation_width=6)
        with pytest.raises(ValueError):
            QuadConfig(target_abs_error=0)

    def test_reports_missed_target(self, problem):
        with pytest.raises(QuadratureError):
            quadrature_price(problem, QuadConfig(target_abs_error=1e-300, max_panels=64))


class TestMonteCarlo:
    def test_single_path_reproducible(self, problem):
        cfg = McConfig(paths=1, seed=7)
        a, se = monte_carlo_price(problem, cfg)
        assert a == monte_carlo_price(problem, cfg)[0]
        assert math.isnan(se)

    def test_seed_matters(self, problem):
        a = monte_carlo_price(problem, McConfig(paths=1000, seed=1))
        b = monte_carlo_price(problem, McConfig(paths=1000, seed=2))
        assert a != b

    def test_table_value(self, problem):
        price, se = monte_carlo_price(problem, McConfig(paths=1_000_000, seed=2024))
        assert abs(price - TABLE1_EXACT) <= 3 * se
        assert se < 0.02

    def test_blocks_merge_like_one_pass(self, problem):
        # one block against a direct recomputation from the same draws
        cfg = McConfig(paths=5000, seed=3, block_size=5000)
        single, se1 = monte_carlo_price(problem, cfg)
        z = special.ndtri(_uniforms(np.random.Philox(3).jumped(0), 5000))
        tau, vt = 0.5, 0.2 * math.sqrt(0.5)
        pay = math.exp(-0.03 * tau) * value_pre_dividend(110 * np.exp((0.03 - 0.02) * tau + vt * z), problem)
        assert single == pytest.approx(pay.mean(), rel=1e-13)
        assert se1 == pytest.approx(pay.std(ddof=1) / math.sqrt(5000), rel=1e-10)

    def test_huge_dividend(self):
        p = table1_problem(spot=50.0, dividend_amount=50.0 * math.exp(0.015 + 6 * 0.2 * math.sqrt(0.5)))
        price, _ = monte_carlo_price(p, McConfig(paths=100_000, seed=5))
        assert price == pytest.approx(0.0, abs=1e-8)

    @pytest.mark.parametrize("spot", [80.0, 110.0, 150.0])
    @pytest.mark.parametrize("div", [0.0, 5.0, 20.0])
    def test_agrees_with_quadrature(self, spot, div):
        p = table1_problem(spot=spot, dividend_amount=div)
        price, se = monte_carlo_price(p, McConfig(paths=1_000_000, seed=99))
        assert abs(price - quadrature_price(p)) <= 4 * se

    def test_drift_never_read(self, problem):
        cfg = McConfig(paths=2000, seed=11)
        assert monte_carlo_price(problem, cfg) == monte_carlo_price(table1_problem(drift=0.3), cfg)
