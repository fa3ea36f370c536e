import math

import numpy as np
import pytest

from sc3loop.baselines import (
    StaticConfig,
    TradeoffConfig,
    solve_static,
    solve_tradeoff,
    tradeoff_time_lp,
)
from sc3loop.errors import ConfigError
from sc3loop.link import LinkBudget
from sc3loop.model import ComputeModel, LoopBudget, evaluate_allocation
from sc3loop.optimizer import OptimizerConfig, optimize


def lp_grid(r_u, r_d, rho, alpha, f, T, d0, w, n=200):
    """Brute-force maximum of the tradeoff LP on an n x n time grid.

    The grid is laid out in (time used, disparity) coordinates,
    ``s = a t_u + t_d`` and ``u = rho t_u r_u - t_d r_d``, an invertible
    linear map of ``(t_u, t_d)``, so the thin disparity band is sampled
    across its whole width.
    """
    a = 1 + alpha * r_u / f
    u_lo, u_hi = max(-d0, -r_d * T), min(d0, rho * r_u * T / a)
    s = np.linspace(0, T, n)[:, None]
    u = np.linspace(u_lo, u_hi, n)[None, :]
    t_u = (s * r_d + u) / (a * r_d + rho * r_u)
    t_d = s - a * t_u
    val = np.where((t_u >= 0) & (t_d >= 0), w * t_u * r_u + t_d * r_d, -np.inf)
    return val.max()


class TestTradeoffLP:
    @pytest.mark.parametrize("seed", range(20))
    def test_vertex_enumeration_matches_grid(self, seed):
        rng = np.random.default_rng(seed)
        r_u, r_d = 10 ** rng.uniform(5, 7.5, size=2)
        rho = 10 ** rng.uniform(-3, np.log10(0.5))
        alpha = 10 ** rng.uniform(0, 3)
        T = 10 ** rng.uniform(-3, -1)
        d0 = 10 ** rng.uniform(0, 3)
        for w in (1.0, rho):
            t_u, t_d = tradeoff_time_lp(r_u, r_d, rho, alpha, 1e9, T, d0, w)
            exact = w * t_u * r_u + t_d * r_d
            grid = lp_grid(r_u, r_d, rho, alpha, 1e9, T, d0, w)
            assert exact >= grid * (1 - 1e-12)
            assert exact == pytest.approx(grid, rel=1e-3)
            assert t_u * (1 + alpha * r_u / 1e9) + t_d <= T * (1 + 1e-12)
            assert abs(rho * t_u * r_u - t_d * r_d) <= d0 * (1 + 1e-9) + 1e-9

    def test_zero_disparity_is_balanced(self):
        t_u, t_d = tradeoff_time_lp(1e7, 1e6, 0.01, 100, 1e9, 0.02, 0.0, 1.0)
        assert 0.01 * t_u * 1e7 == pytest.approx(t_d * 1e6, rel=1e-12)


class TestTradeoff:
    def test_reference_sum_rate_favors_uplink(self, ref_scenario):
        sol = solve_tradeoff(*ref_scenario, TradeoffConfig(d0=100))
        o = sol.outcome
        assert 0.01 * o.d_u > o.d_d
        assert 0.01 * o.d_u - o.d_d == pytest.approx(100, rel=1e-6)
        assert o.d_sc3 == o.d_d

    def test_task_weighted_objective_favors_downlink(self, ref_scenario):
        sol = solve_tradeoff(*ref_scenario, TradeoffConfig(d0=100, objective="task_weighted"))
        assert 0.01 * sol.outcome.d_u < sol.outcome.d_d

    @pytest.mark.parametrize("objective", ["sum_rate", "task_weighted"])
    @pytest.mark.parametrize("d0", [0.0, 100.0, 1e12])
    def test_never_beats_proposed(self, ref_scenario, objective, d0):
        prop = optimize(*ref_scenario).outcome
        trade = solve_tradeoff(*ref_scenario, TradeoffConfig(d0=d0, objective=objective)).outcome
        assert trade.d_sc3 <= prop.d_sc3 * (1 + 1e-12)
        assert trade.lqr_cost >= prop.lqr_cost

    def test_zero_disparity_close_to_proposed(self, ref_scenario):
        prop = optimize(*ref_scenario).outcome
        trade = solve_tradeoff(*ref_scenario, TradeoffConfig(d0=0.0)).outcome
        assert 0.01 * trade.d_u == pytest.approx(trade.d_d, rel=1e-9)
        assert trade.d_sc3 <= prop.d_sc3 * (1 + 1e-12)

    def test_allocation_is_feasible(self, ref_scenario):
        sol = solve_tradeoff(*ref_scenario)
        out = evaluate_allocation(*ref_scenario, sol.allocation)
        assert out.d_sc3 == pytest.approx(sol.outcome.d_sc3, rel=1e-9)

    def test_equal_split_flag(self, ref_scenario):
        sol = solve_tradeoff(*ref_scenario, TradeoffConfig(optimize_bandwidth=False))
        assert sol.allocation.b_u == 5e5

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            TradeoffConfig(d0=-1)
        with pytest.raises(ConfigError):
            TradeoffConfig(objective="latency")


class TestStatic:
    def test_reference_parameters(self, ref_scenario):
        o = solve_static(*ref_scenario).outcome
        cap = 1e9 * (0.02 / 14) / 100
        assert cap == pytest.approx(14285.714, rel=1e-7)
        assert o.d_u == pytest.approx(cap, rel=1e-12)
        assert 0.01 * o.d_u == pytest.approx(142.857, rel=1e-5)
        dl = ref_scenario[3]
        assert o.d_d == pytest.approx(0.02 / 14 * dl.rate(5e5), rel=1e-12)
        assert o.d_d == pytest.approx(1.15e4, rel=0.01)
        assert o.d_sc3 == pytest.approx(142.857, rel=1e-5)
        expected_lqr = 1 / (2 ** (0.02 * (1e9 * 0.02 / 14 / 100 * 0.01 - 50)) - 1) + 1
        assert o.lqr_cost == pytest.approx(expected_lqr, rel=1e-12)
        assert o.lqr_cost == pytest.approx(1.3815, rel=5e-4)
        # uplink is the bottleneck
        assert 0.01 * o.d_u < o.d_d

    def test_free_compute_is_transmission_limited(self, ref_plant, ref_links, ref_budget):
        ul, dl = ref_links
        o = solve_static(ref_plant, ComputeModel(0.01, 0.0, 1e9), ul, dl, ref_budget).outcome
        assert o.d_u == pytest.approx(6 * 0.02 / 7 * ul.rate(5e5), rel=1e-12)

    def test_uncapped_variant(self, ref_scenario):
        ul = ref_scenario[2]
        o = solve_static(*ref_scenario, StaticConfig(compute_cap=False)).outcome
        assert o.d_u == pytest.approx(6 * 0.02 / 7 * ul.rate(5e5), rel=1e-12)

    def test_static_ignores_search_settings(self, ref_scenario):
        # no search inside: identical whatever tolerance the optimizer uses
        a = solve_static(*ref_scenario)
        optimize(*ref_scenario, cfg=OptimizerConfig(bandwidth_tol=1e3))
        b = solve_static(*ref_scenario)
        assert a == b

    def test_fraction_validation(self):
        with pytest.raises(ConfigError):
            StaticConfig(ul_fraction=0.5, compute_fraction=0.1, dl_fraction=0.1)


@pytest.mark.parametrize("seed", range(10))
def test_proposed_has_lowest_lqr(ref_plant, ref_links, seed):
    rng = np.random.default_rng(100 + seed)
    ul0, dl0 = ref_links
    logu = lambda lo, hi: float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    ul = LinkBudget(logu(0.01, 10), ul0.channel_gain, ul0.n0)
    dl = LinkBudget(logu(0.01, 10), dl0.channel_gain, dl0.n0)
    compute = ComputeModel(logu(1e-3, 0.5), logu(1, 1000), 1e9)
    budget = LoopBudget(logu(1e-3, 1e-1), logu(1e5, 1e7))
    args = (ref_plant, compute, ul, dl, budget)
    prop = optimize(*args).outcome
    for other in (solve_tradeoff(*args).outcome, solve_static(*args).outcome):
        assert prop.d_sc3 >= other.d_sc3 * (1 - 1e-12)
        assert prop.lqr_cost <= other.lqr_cost or math.isinf(prop.lqr_cost) and math.isinf(other.lqr_cost)
