"""Comparison schemes: disparity-constrained sum-rate tradeoff, and a static split.

Both run at full power and full CPU frequency so that the comparison with
the task-oriented optimizer isolates how time and bandwidth are divided.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InfeasibleAllocationError
from .model import Allocation, LoopOutcome, closed_loop_info, evaluate_allocation, lqr_bound
from .optimizer import OptimalSolution, OptimizerConfig, golden_section_minimize, p3_objective

SUM_RATE = "sum_rate"
TASK_WEIGHTED = "task_weighted"


@dataclass(frozen=True)
class TradeoffConfig:
    """Sum-rate scheme with a cap on the UL/DL task-information disparity.

    Parameters
    ----------
    d0 : float
        Cap on ``|rho D_u - D_d|`` in bits.
    objective : {"sum_rate", "task_weighted"}
        ``"sum_rate"`` maximizes ``D_u + D_d``; ``"task_weighted"``
        maximizes ``rho D_u + D_d``.
    optimize_bandwidth : bool
        Search the bandwidth split; when False use an equal split.
    n_coarse : int
        Grid points of the coarse bandwidth scan that seeds the refinement.
    """

    d0: float = 100.0
    objective: str = SUM_RATE
    optimize_bandwidth: bool = True
    n_coarse: int = 256

    def __post_init__(self):
        if not (self.d0 >= 0):
            raise ConfigError(f"d0 must be >= 0, got {self.d0}")
        if self.objective not in (SUM_RATE, TASK_WEIGHTED):
            raise ConfigError(f"unknown tradeoff objective {self.objective!r}")
        if self.n_coarse < 3:
            raise ConfigError("n_coarse must be >= 3")


@dataclass(frozen=True)
class StaticConfig:
    """Fixed TDD-style split of the cycle and the band.

    Defaults follow 5G NR slot format 34: 12 uplink symbols, one for
    computing, one downlink, out of 14.
    """

    ul_fraction: float = 6 / 7
    compute_fraction: float = 1 / 14
    dl_fraction: float = 1 / 14
    bandwidth_split: float = 0.5
    compute_cap: bool = True

    def __post_init__(self):
        fractions = (self.ul_fraction, self.compute_fraction, self.dl_fraction)
        if any(not 0 <= x <= 1 for x in fractions + (self.bandwidth_split,)):
            raise ConfigError("static fractions must lie in [0, 1]")
        if not math.isclose(sum(fractions), 1.0, rel_tol=1e-12):
            raise ConfigError(f"static time fractions must sum to 1, got {sum(fractions)}")


def _solve_2x2(a11, a12, b1, a21, a22, b2):
    det = a11 * a22 - a12 * a21
    if det == 0:
        return None
    return (b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det


def tradeoff_time_lp(r_u, r_d, rho, alpha, f, T, d0, weight_u):
    """Exact solution of the inner linear program in ``(t_u, t_d)``.

    maximize    weight_u * t_u * r_u + t_d * r_d
    subject to  t_u * (1 + alpha * r_u / f) + t_d <= T
                |rho * t_u * r_u - t_d * r_d| <= d0
                t_u, t_d >= 0

    The feasible set is a polygon, so the optimum sits on a vertex; all
    pairwise intersections of the constraint lines are enumerated.

    Returns
    -------
    (t_u, t_d) : tuple of float
    """
    a = 1.0 + alpha * r_u / f
    x = rho * r_u
    # rows: (c1, c2, rhs) for c1 * t_u + c2 * t_d <= rhs
    rows = [
        (a, 1.0, T),
        (x, -r_d, d0),
        (-x, r_d, d0),
        (-1.0, 0.0, 0.0),
        (0.0, -1.0, 0.0),
    ]
    scale = max(T, d0 / max(x, r_d, 1e-300))
    best, best_val = None, -math.inf
    for (p, q) in itertools.combinations(rows, 2):
        pt = _solve_2x2(p[0], p[1], p[2], q[0], q[1], q[2])
        if pt is None:
            continue
        t_u, t_d = pt
        feasible = all(c1 * t_u + c2 * t_d <= rhs + 1e-12 * (abs(rhs) + abs(c1) * scale + abs(c2) * scale) for c1, c2, rhs in rows)
        if not feasible:
            continue
        t_u, t_d = max(t_u, 0.0), max(t_d, 0.0)
        val = weight_u * t_u * r_u + t_d * r_d
        if val > best_val:
            best, best_val = (t_u, t_d), val
    if best is None:
        raise InfeasibleAllocationError("time", "tradeoff linear program has no feasible vertex")
    t_u, t_d = best
    # snap the cycle constraint exactly; vertex arithmetic can overshoot by an ulp
    excess = a * t_u + t_d - T
    if excess > 0:
        t_d = max(t_d - excess, 0.0)
    return t_u, t_d


def _tradeoff_at(plant, compute, ul, dl, budget, cfg, b_u):
    b_d = budget.b_max - b_u
    r_u, r_d = ul.rate(b_u), dl.rate(b_d)
    weight_u = 1.0 if cfg.objective == SUM_RATE else compute.rho
    t_u, t_d = tradeoff_time_lp(
        r_u, r_d, compute.rho, compute.alpha, compute.f_max, budget.cycle_time, cfg.d0, weight_u
    )
    d_u, d_d = t_u * r_u, t_d * r_d
    return weight_u * d_u + d_d, (b_u, b_d, r_u, r_d, t_u, t_d, d_u, d_d)


def solve_tradeoff(plant, compute, ul, dl, budget, cfg=None, opt_cfg=None):
    """Sum-rate scheme with a UL/DL disparity cap.

    The bandwidth split is chosen by a coarse scan followed by golden-section
    refinement around the best scan point; for each split the time
    allocation is the exact LP optimum. Computing time is charged inside the
    cycle exactly as for the proposed scheme.

    Returns
    -------
    OptimalSolution
        Its outcome reports ``d_sc3 = min(rho D_u, D_d)`` and the matching
        LQR bound, whatever the objective maximized.
    """
    cfg = cfg or TradeoffConfig()
    opt_cfg = opt_cfg or OptimizerConfig()
    b_max = budget.b_max

    def neg_obj(b):
        return -_tradeoff_at(plant, compute, ul, dl, budget, cfg, b)[0]

    if cfg.optimize_bandwidth:
        grid = b_max * np.arange(1, cfg.n_coarse + 1) / (cfg.n_coarse + 1)
        vals = [neg_obj(b) for b in grid]
        k = int(np.argmin(vals))
        lo = grid[k - 1] if k > 0 else 0.0
        hi = grid[k + 1] if k + 1 < len(grid) else b_max
        b_u, val = golden_section_minimize(neg_obj, lo, hi, opt_cfg.bandwidth_tol)
        if vals[k] < val:
            b_u = grid[k]
    else:
        b_u = 0.5 * b_max

    _, (b_u, b_d, r_u, r_d, t_u, t_d, d_u, d_d) = _tradeoff_at(plant, compute, ul, dl, budget, cfg, b_u)
    t_c = compute.alpha * d_u / compute.f_max
    d_sc3 = closed_loop_info(d_u, d_d, compute.rho)
    cost = lqr_bound(plant, d_sc3)
    alloc = Allocation(p_u=ul.p_max, p_d=dl.p_max, t_u=t_u, t_d=t_d, b_u=b_u, b_d=b_d, f=compute.f_max)
    outcome = LoopOutcome(d_u=d_u, d_d=d_d, t_c=t_c, d_sc3=d_sc3, lqr_cost=cost, stable=math.isfinite(cost))
    return OptimalSolution(allocation=alloc, outcome=outcome, p3_objective=p3_objective(b_u, ul, dl, compute.rho, b_max))


def solve_static(plant, compute, ul, dl, budget, cfg=None):
    """Fixed time and bandwidth split, full power and CPU.

    With ``compute_cap`` the uplink information is limited to what the
    pinned computing slot can process, ``f_max * t_c / alpha``; without
    it, every uploaded bit counts.
    """
    cfg = cfg or StaticConfig()
    T = budget.cycle_time
    b_u = cfg.bandwidth_split * budget.b_max
    alloc = Allocation(
        p_u=ul.p_max, p_d=dl.p_max,
        t_u=cfg.ul_fraction * T, t_d=cfg.dl_fraction * T,
        b_u=b_u, b_d=budget.b_max - b_u, f=compute.f_max,
    )
    t_c = cfg.compute_fraction * T
    if cfg.compute_cap:
        outcome = evaluate_allocation(plant, compute, ul, dl, budget, alloc, compute_time=t_c)
    else:
        d_u = alloc.t_u * ul.rate(alloc.b_u)
        d_d = alloc.t_d * dl.rate(alloc.b_d)
        d_sc3 = closed_loop_info(d_u, d_d, compute.rho)
        cost = lqr_bound(plant, d_sc3)
        outcome = LoopOutcome(d_u=d_u, d_d=d_d, t_c=t_c, d_sc3=d_sc3, lqr_cost=cost, stable=math.isfinite(cost))
    return OptimalSolution(
        allocation=alloc, outcome=outcome,
        p3_objective=p3_objective(b_u, ul, dl, compute.rho, budget.b_max),
    )
