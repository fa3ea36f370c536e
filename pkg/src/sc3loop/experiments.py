"""Experiment runners: single solve, bandwidth sweep, balance report, contour, oracle check.

Every runner returns ``(header, rows)``; :func:`write_csv` serializes them.
Floats are written with ``repr`` so CSV output is exact, locale independent
and byte-stable; infinite LQR costs appear as ``inf``.
"""

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import solve_static, solve_tradeoff
from .link import LinkBudget
from .model import ComputeModel, LoopBudget
from .optimizer import optimize
from .oracle import brute_force_p2

SCHEMES = ("proposed", "tradeoff", "static")
MAX_CONTOUR_CELLS = 10**6


def solve_scheme(config, scheme, b_max=None, f_max=None):
    """Run one scheme on the config's scenario, optionally overriding ``b_max``/``f_max``."""
    args = config.scenario(b_max, f_max)
    if scheme == "proposed":
        return optimize(*args, cfg=config.optimizer_config())
    if scheme == "tradeoff":
        return solve_tradeoff(*args, cfg=config.tradeoff_config(), opt_cfg=config.optimizer_config())
    if scheme == "static":
        return solve_static(*args, cfg=config.static_config())
    raise ValueError(f"unknown scheme {scheme!r}")


def _map(func, items, jobs):
    if jobs is None or jobs <= 1 or len(items) < 2:
        return [func(item) for item in items]
    # Executor.map yields in submission order, so output does not depend on jobs
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * jobs))))


def fmt(value):
    if isinstance(value, str):
        return value
    return repr(float(value))


def write_csv(header, rows, fh=None):
    """Write a header and rows as CSV; returns the text when ``fh`` is None."""
    out = fh if fh is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    if fh is None:
        return out.getvalue()


@dataclass(frozen=True)
class SolveReport:
    config: object
    solution: object

    def lines(self):
        sol, cfg = self.solution, self.config
        a, o = sol.allocation, sol.outcome
        rho = cfg.rho
        return [
            f"uplink:    p_u = {a.p_u:.6g} W, B_u = {a.b_u:.6g} Hz, t_u = {a.t_u:.6g} s, D_u = {o.d_u:.6g} bits",
            f"computing: f = {a.f:.6g} Hz, t_c = {o.t_c:.6g} s",
            f"downlink:  p_d = {a.p_d:.6g} W, B_d = {a.b_d:.6g} Hz, t_d = {a.t_d:.6g} s, D_d = {o.d_d:.6g} bits",
            f"balance:   rho*D_u = {rho * o.d_u:.9g} bits, D_d = {o.d_d:.9g} bits",
            f"per-bit UL+DL time: {sol.p3_objective:.6g} s/bit",
            f"closed-loop entropy rate: {o.d_sc3:.9g} bits/cycle "
            f"(intrinsic {cfg.plant.intrinsic_entropy_rate:.6g})",
            f"stable: {str(o.stable).lower()}",
            f"LQR cost: {fmt(o.lqr_cost)}",
        ]

    def text(self):
        return "\n".join(self.lines()) + "\n"


def run_solve(config):
    """Optimal allocation for the config's operating point."""
    return SolveReport(config, solve_scheme(config, "proposed"))


def sweep_values(lo, hi, points):
    if points == 1:
        return np.array([float(lo)])
    return np.linspace(lo, hi, points)


def _sweep_row(task):
    config, schemes, b_max = task
    sols = [solve_scheme(config, s, b_max=b_max) for s in schemes]
    return [b_max] + [s.outcome.lqr_cost for s in sols] + [s.outcome.d_sc3 for s in sols]


def run_bandwidth_sweep(config, scheme="all", points=None, jobs=1):
    """LQR cost versus total bandwidth for one or all schemes.

    Columns: ``b_max``, ``lqr_<scheme>`` for each scheme, then
    ``d_sc3_<scheme>`` for each scheme.
    """
    schemes = SCHEMES if scheme == "all" else (scheme,)
    for s in schemes:
        if s not in SCHEMES:
            raise ValueError(f"unknown scheme {s!r}")
    points = points or config.sweep_points
    grid = sweep_values(config.sweep_b_min_hz, config.sweep_b_max_hz, points)
    config.plant  # build once before fan-out
    header = ["b_max"] + [f"lqr_{s}" for s in schemes] + [f"d_sc3_{s}" for s in schemes]
    rows = _map(_sweep_row, [(config, schemes, float(b)) for b in grid], jobs)
    return header, rows


def run_balance_report(config):
    """Per-scheme task information on each link at the config's bandwidth.

    Columns: ``scheme, rho_d_u, d_d, d_sc3, lqr``.
    """
    rows = []
    for scheme in SCHEMES:
        o = solve_scheme(config, scheme).outcome
        rows.append([scheme, config.rho * o.d_u, o.d_d, o.d_sc3, o.lqr_cost])
    return ["scheme", "rho_d_u", "d_d", "d_sc3", "lqr"], rows


def _contour_row(task):
    config, b_values, f_max = task
    out = []
    for b in b_values:
        o = solve_scheme(config, "proposed", b_max=b, f_max=f_max).outcome
        out.append([b, f_max, o.lqr_cost, o.d_sc3])
    return out


def run_contour(config, grid=None, jobs=1):
    """Optimal LQR cost over a (bandwidth, CPU frequency) grid.

    Rows are ordered with ``f_max`` outer and ``b_max`` inner. Columns:
    ``b_max, f_max, lqr, d_sc3``.

    Parameters
    ----------
    grid : (int, int), optional
        Number of bandwidth and CPU-frequency points; defaults to the config.
    """
    nb, nf = grid or (config.contour_b_points, config.contour_f_points)
    if nb < 1 or nf < 1:
        raise ValueError("contour grid needs at least one point per axis")
    if nb * nf > MAX_CONTOUR_CELLS:
        raise ValueError(f"contour grid {nb}x{nf} exceeds {MAX_CONTOUR_CELLS} cells")
    b_values = [float(b) for b in sweep_values(config.contour_b_min_hz, config.contour_b_max_hz, nb)]
    f_values = sweep_values(config.contour_f_min_hz, config.contour_f_max_hz, nf)
    config.plant
    blocks = _map(_contour_row, [(config, b_values, float(f)) for f in f_values], jobs)
    return ["b_max", "f_max", "lqr", "d_sc3"], [row for block in blocks for row in block]


def level_set(rows, level):
    """Bandwidth at which the contour's LQR crosses ``level``, per CPU frequency.

    Linear interpolation between the two bandwidth samples bracketing the
    level. Rows whose bandwidth range never crosses it are skipped.

    Returns
    -------
    list of (f_max, b_max) sorted by ``f_max``.
    """
    by_f = {}
    for b, f, lqr, _ in rows:
        by_f.setdefault(f, []).append((b, lqr))
    points = []
    for f in sorted(by_f):
        line = sorted(by_f[f])
        for (b0, l0), (b1, l1) in zip(line, line[1:]):
            if l0 >= level > l1:
                if math.isinf(l0):
                    b = b0
                else:
                    b = b0 + (l0 - level) / (l0 - l1) * (b1 - b0)
                points.append((f, b))
                break
    return points


def level_set_slopes(points):
    """``|df/dB|`` at the high-CPU (bandwidth-constrained) and low-CPU (CPU-constrained) ends.

    Returns
    -------
    (bandwidth_end, cpu_end) : tuple of float
    """
    if len(points) < 4:
        raise ValueError("level set needs at least four points")
    (f0, b0), (f1, b1) = points[0], points[1]
    (g0, c0), (g1, c1) = points[-2], points[-1]
    cpu_end = abs((f1 - f0) / (b1 - b0)) if b1 != b0 else math.inf
    bandwidth_end = abs((g1 - g0) / (c1 - c0)) if c1 != c0 else math.inf
    return bandwidth_end, cpu_end


def random_instance(rng, config):
    """Random budget instance around the config's links and CPU.

    Log-uniform powers in [0.01, 10] W, bandwidth in [0.1, 10] MHz, cycle
    time in [1, 100] ms, rho in [0.001, 0.5], alpha in [1, 1000] cycles/bit.
    """
    def logu(lo, hi):
        return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))

    ul, dl = config.uplink(), config.downlink()
    p_u, p_d = logu(0.01, 10), logu(0.01, 10)
    b_max, T = logu(1e5, 1e7), logu(1e-3, 1e-1)
    rho, alpha = logu(1e-3, 0.5), logu(1, 1000)
    return (
        config.plant,
        ComputeModel(rho=rho, alpha=alpha, f_max=config.f_max_hz),
        LinkBudget(p_u, ul.channel_gain, ul.n0),
        LinkBudget(p_d, dl.channel_gain, dl.n0),
        LoopBudget(cycle_time=T, b_max=b_max),
    )


def run_oracle_check(config, instances=None, grid=None, seed=0, rtol=1e-3):
    """Compare the closed-form optimum with the brute-force grid on random instances.

    Columns: ``instance, b_max, cycle_time, rho, alpha, d_sc3_proposed,
    d_sc3_oracle, balance_error, ok``. ``ok`` requires the proposed value
    to reach at least ``(1 - rtol)`` of the oracle's.
    """
    rng = np.random.default_rng(seed)
    instances = instances or config.oracle_instances
    grid = grid or config.oracle_grid()
    rows = []
    for k in range(instances):
        args = random_instance(rng, config)
        compute, budget = args[1], args[4]
        prop = optimize(*args, cfg=config.optimizer_config()).outcome
        orc = brute_force_p2(*args, grid=grid).outcome
        balance = abs(compute.rho * prop.d_u - prop.d_d) / max(prop.d_d, 1e-300)
        ok = prop.d_sc3 >= (1 - rtol) * orc.d_sc3
        rows.append([str(k), budget.b_max, budget.cycle_time, compute.rho, compute.alpha,
                     prop.d_sc3, orc.d_sc3, balance, "true" if ok else "false"])
    header = ["instance", "b_max", "cycle_time", "rho", "alpha", "d_sc3_proposed", "d_sc3_oracle",
              "balance_error", "ok"]
    return header, rows
