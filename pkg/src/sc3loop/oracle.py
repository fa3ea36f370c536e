"""Brute-force reference solver for the time/bandwidth problem.

Deliberately independent of :mod:`sc3loop.optimizer`: no balance condition,
no closed form, no bandwidth search. It scans uplink bandwidth and uplink
time on a grid, gives all remaining time to the downlink after computing,
and keeps the best ``min(rho D_u, D_d)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .model import Allocation, LoopOutcome, lqr_bound
from .optimizer import OptimalSolution

MAX_GRID_POINTS = 10**8


@dataclass(frozen=True)
class GridSpec:
    """Grid resolution for uplink bandwidth and uplink time.

    Points are interior: ``k / (n + 1)`` of the range for ``k = 1..n``, so a
    grid with ``n_fine + 1 = 2 (n_coarse + 1)`` contains the coarse one.
    """

    n_bandwidth: int = 2000
    n_time: int = 2000

    def __post_init__(self):
        if self.n_bandwidth < 2 or self.n_time < 2:
            raise ConfigError("grid resolutions must be >= 2")
        if self.n_bandwidth * self.n_time > MAX_GRID_POINTS:
            raise ConfigError(f"grid of {self.n_bandwidth}x{self.n_time} exceeds {MAX_GRID_POINTS} points")


def interior_points(upper, n):
    return upper * np.arange(1, n + 1) / (n + 1)


def scan_p2(r_u, r_d, times, rho, alpha, f_max, cycle_time):
    """Closed-loop entropy rate on a (bandwidth, time) grid.

    Parameters
    ----------
    r_u, r_d : ndarray, shape (nb,)
        Uplink/downlink rates at each bandwidth grid point.
    times : ndarray, shape (nt,)
        Uplink times to try.

    Returns
    -------
    ndarray, shape (nb, nt)
        ``min(rho D_u, D_d)``, or ``-inf`` where the cycle overflows.
    """
    t_u = times[None, :]
    d_u = t_u * r_u[:, None]
    t_c = alpha * d_u / f_max
    t_d = cycle_time - t_u - t_c
    d_d = t_d * r_d[:, None]
    d_sc3 = np.minimum(rho * d_u, d_d)
    return np.where(t_d >= 0, d_sc3, -np.inf)


def brute_force_p2(plant, compute, ul, dl, budget, grid=None):
    """Exhaustive grid maximizer of the closed-loop entropy rate.

    Ties go to the smaller uplink bandwidth, then the smaller uplink time.

    Returns
    -------
    OptimalSolution
    """
    grid = grid or GridSpec()
    T = budget.cycle_time
    b_u = interior_points(budget.b_max, grid.n_bandwidth)
    r_u = np.asarray(ul.rate(b_u))
    r_d = np.asarray(dl.rate(budget.b_max - b_u))
    times = interior_points(T, grid.n_time)

    best_val, best_idx = -np.inf, (0, 0)
    # row blocks keep peak memory around 8 * 4e6 bytes per temporary
    block = max(1, 4_000_000 // grid.n_time)
    for start in range(0, grid.n_bandwidth, block):
        stop = min(start + block, grid.n_bandwidth)
        vals = scan_p2(r_u[start:stop], r_d[start:stop], times, compute.rho, compute.alpha, compute.f_max, T)
        flat = int(np.argmax(vals))
        i, j = divmod(flat, grid.n_time)
        if vals[i, j] > best_val:
            best_val, best_idx = float(vals[i, j]), (start + i, j)

    i, j = best_idx
    # every grid point overflows the cycle: report the empty loop
    t_u = float(times[j]) if math.isfinite(best_val) else 0.0
    d_u = t_u * float(r_u[i])
    t_c = compute.alpha * d_u / compute.f_max
    t_d = max(T - t_u - t_c, 0.0)
    d_d = t_d * float(r_d[i])
    d_sc3 = min(compute.rho * d_u, d_d)
    cost = lqr_bound(plant, d_sc3)
    alloc = Allocation(
        p_u=ul.p_max, p_d=dl.p_max, t_u=t_u, t_d=t_d,
        b_u=float(b_u[i]), b_d=float(budget.b_max - b_u[i]), f=compute.f_max,
    )
    outcome = LoopOutcome(d_u=d_u, d_d=d_d, t_c=t_c, d_sc3=d_sc3, lqr_cost=cost, stable=math.isfinite(cost))
    per_bit = 1.0 / (compute.rho * r_u[i]) + 1.0 / r_d[i]
    return OptimalSolution(allocation=alloc, outcome=outcome, p3_objective=float(per_bit))
