"""Task-oriented joint uplink/downlink allocation.

The loop's LQR bound decreases with the closed-loop entropy rate, so the
optimizer maximizes the task bits delivered per cycle:

1. transmit powers and CPU frequency sit at their caps;
2. the bandwidth split minimizes the time needed to carry one task bit
   end to end, ``1/(rho R_u(B_u)) + 1/R_d(B_max - B_u)``, a convex 1-D
   problem solved by golden-section search;
3. times follow in closed form from balancing ``rho D_u = D_d`` and
   filling the cycle exactly.
"""

import itertools
import math
from dataclasses import dataclass

from .errors import ConfigError, DomainError
from .model import Allocation, LoopOutcome, closed_loop_info, lqr_bound

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    """Search tolerances.

    Parameters
    ----------
    bandwidth_tol : float
        Final bracket width of the bandwidth search, in Hz.
    objective_tol : float
        Stall guard: the search also stops when ten consecutive iterations
        improve the objective by less than this relative amount.
    """

    bandwidth_tol: float = 0.1
    objective_tol: float = 1e-15

    def __post_init__(self):
        if not (self.bandwidth_tol > 0 and self.objective_tol > 0):
            raise ConfigError("bandwidth_tol and objective_tol must be positive")


@dataclass(frozen=True)
class OptimalSolution:
    """Result of a scheme: the allocation, its outcome, and the per-bit time cost."""

    allocation: Allocation
    outcome: LoopOutcome
    p3_objective: float

    @property
    def rate_u(self):
        return self.outcome.d_u / self.allocation.t_u if self.allocation.t_u > 0 else 0.0

    @property
    def rate_d(self):
        return self.outcome.d_d / self.allocation.t_d if self.allocation.t_d > 0 else 0.0


def p3_objective(b_u, ul, dl, rho, b_max):
    """Seconds of UL+DL airtime per delivered task bit at split ``b_u``.

    Returns ``inf`` when either side gets no bandwidth.
    """
    if not 0 <= b_u <= b_max:
        raise DomainError(f"b_u must lie in [0, {b_max}], got {b_u}")
    r_u = ul.rate(b_u)
    r_d = dl.rate(b_max - b_u)
    if r_u <= 0 or r_d <= 0:
        return math.inf
    return 1.0 / (rho * r_u) + 1.0 / r_d


def golden_section_minimize(func, lo, hi, xtol, ftol=0.0, stall=10, max_iter=500):
    """Minimize a unimodal ``func`` on ``[lo, hi]``.

    Narrows the bracket to width ``xtol``. Also stops once the best value
    has improved by less than relative ``ftol`` over ``stall`` consecutive
    iterations, which only happens when the objective is flat to rounding
    precision. Returns ``(x, fx)``.
    """
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = func(x1), func(x2)
    history = [min(f1, f2)]
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = func(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = func(x2)
        history.append(min(f1, f2))
        if len(history) > stall:
            old = history[-stall - 1]
            if math.isfinite(old) and old - history[-1] <= ftol * abs(old):
                break
    return (x1, f1) if f1 <= f2 else (x2, f2)


def solve_p3(ul, dl, rho, b_max, cfg=None):
    """Optimal bandwidth split.

    Returns
    -------
    (b_u, b_d, objective) : tuple of float
        ``b_u + b_d == b_max``; all bandwidth is used because each rate
        grows with its bandwidth.
    """
    cfg = cfg or OptimizerConfig()
    if cfg.bandwidth_tol >= b_max:
        raise ConfigError(f"bandwidth_tol={cfg.bandwidth_tol} is not narrower than b_max={b_max}")
    b_u, obj = golden_section_minimize(
        lambda b: p3_objective(b, ul, dl, rho, b_max), 0.0, b_max, cfg.bandwidth_tol, cfg.objective_tol
    )
    return b_u, b_max - b_u, obj


def _closed_form(plant, compute, ul, dl, budget, b_u, p_u, p_d, f):
    """Balanced, cycle-filling time allocation for a fixed split and power/CPU point."""
    b_d = budget.b_max - b_u
    rho, T = compute.rho, budget.cycle_time
    r_u = ul.rate(b_u, power=p_u)
    r_d = dl.rate(b_d, power=p_d)
    if r_u <= 0 or r_d <= 0 or f <= 0:
        t_u = t_d = 0.0
        per_bit = math.inf
    else:
        per_bit = 1.0 / (rho * r_u) + 1.0 / r_d
        denom = per_bit + compute.alpha / (rho * f)
        t_u = T / (rho * r_u) / denom
        t_d = T / r_d / denom
    d_u = t_u * r_u
    d_d = t_d * r_d
    t_c = compute.alpha * d_u / f if f > 0 else 0.0
    d_sc3 = closed_loop_info(d_u, d_d, rho)
    cost = lqr_bound(plant, d_sc3)
    alloc = Allocation(p_u=p_u, p_d=p_d, t_u=t_u, t_d=t_d, b_u=b_u, b_d=b_d, f=f)
    outcome = LoopOutcome(d_u=d_u, d_d=d_d, t_c=t_c, d_sc3=d_sc3, lqr_cost=cost, stable=math.isfinite(cost))
    return OptimalSolution(allocation=alloc, outcome=outcome, p3_objective=per_bit)


def optimize(plant, compute, ul, dl, budget, cfg=None, pin_resources=True):
    """Minimize the LQR bound over power, time, bandwidth and CPU frequency.

    Parameters
    ----------
    plant : ControlPlant
    compute : ComputeModel
    ul, dl : LinkBudget
    budget : LoopBudget
    cfg : OptimizerConfig, optional
    pin_resources : bool
        When False, powers and CPU frequency are searched over a coarse
        grid of fractions of their caps instead of being fixed at the caps.
        Debug aid for checking empirically that full utilization is optimal.

    Returns
    -------
    OptimalSolution
        With ``rho * d_u == d_d`` and ``t_u + t_c + t_d == T``.
    """
    cfg = cfg or OptimizerConfig()
    if pin_resources:
        b_u, _, _ = solve_p3(ul, dl, compute.rho, budget.b_max, cfg)
        return _closed_form(plant, compute, ul, dl, budget, b_u, ul.p_max, dl.p_max, compute.f_max)

    fractions = (0.25, 0.5, 0.75, 1.0)
    best = None
    for fu, fd, ff in itertools.product(fractions, repeat=3):
        ul_k = type(ul)(ul.p_max * fu, ul.channel_gain, ul.n0)
        dl_k = type(dl)(dl.p_max * fd, dl.channel_gain, dl.n0)
        b_u, _, _ = solve_p3(ul_k, dl_k, compute.rho, budget.b_max, cfg)
        sol = _closed_form(plant, compute, ul, dl, budget, b_u, ul_k.p_max, dl_k.p_max, compute.f_max * ff)
        # strict '>' keeps the first (smallest-resource) point on ties
        if best is None or sol.outcome.d_sc3 > best.outcome.d_sc3:
            best = sol
    return best
