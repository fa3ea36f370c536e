"""Domain types of the SC3 loop and the information/latency/LQR relations.

A loop cycle of length ``T`` runs uplink (sensor to computing center),
computing, and downlink (computing center to actuator). The actuator
receives ``min(rho * D_u, D_d)`` task bits per cycle, and that closed-loop
entropy rate lower-bounds the achievable LQR cost.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleAllocationError, UnsupportedError

# Relative slack for budget checks; optimizers land exactly on the boundary.
FEASIBILITY_RTOL = 1e-9

_LN2 = math.log(2.0)


def _require(cond, message):
    if not cond:
        raise DomainError(message)


@dataclass(frozen=True)
class ControlPlant:
    """Scalar summary of a linear plant for the LQR lower bound.

    Parameters
    ----------
    n, m : int
        State and input dimensions.
    intrinsic_entropy_rate : float
        ``log2|det A|`` in bits/cycle.
    lqr_scale : float
        ``n * N(v) * |det M|^(1/n)``, the numerator of the rate-dependent term.
    lqr_offset : float
        ``tr(Sigma_v S)``, the cost floor reached with unlimited information.
    """

    n: int
    m: int
    intrinsic_entropy_rate: float
    lqr_scale: float
    lqr_offset: float

    def __post_init__(self):
        _require(int(self.n) == self.n and self.n >= 1, f"n must be a positive integer, got {self.n}")
        _require(int(self.m) == self.m and self.m >= 1, f"m must be a positive integer, got {self.m}")
        _require(math.isfinite(self.intrinsic_entropy_rate), "intrinsic_entropy_rate must be finite")
        _require(self.lqr_scale >= 0 and math.isfinite(self.lqr_scale), "lqr_scale must be finite and >= 0")
        _require(self.lqr_offset >= 0 and math.isfinite(self.lqr_offset), "lqr_offset must be finite and >= 0")

    @classmethod
    def from_matrices(cls, A, B, Q, R, sigma_v, tol=1e-10, max_iter=100_000):
        """Derive the plant scalars from full matrices via the Riccati solver."""
        from .riccati import plant_from_matrices

        return plant_from_matrices(A, B, Q, R, sigma_v, tol=tol, max_iter=max_iter)


@dataclass(frozen=True)
class ComputeModel:
    """Computing center: extraction ratio, cycles per bit, CPU cap.

    ``rho = 1`` and ``alpha = 0`` are accepted as limiting cases (lossless
    extraction, free computing).
    """

    rho: float
    alpha: float
    f_max: float

    def __post_init__(self):
        _require(0 < self.rho <= 1, f"rho must lie in (0, 1], got {self.rho}")
        _require(self.alpha >= 0 and math.isfinite(self.alpha), f"alpha must be finite and >= 0, got {self.alpha}")
        _require(self.f_max > 0 and math.isfinite(self.f_max), f"f_max must be positive, got {self.f_max}")


@dataclass(frozen=True)
class LoopBudget:
    """Cycle time ``T`` in seconds and total bandwidth in Hz."""

    cycle_time: float
    b_max: float

    def __post_init__(self):
        _require(self.cycle_time > 0 and math.isfinite(self.cycle_time), "cycle_time must be positive")
        _require(self.b_max > 0 and math.isfinite(self.b_max), "b_max must be positive")


@dataclass(frozen=True)
class Allocation:
    """An operating point: powers (W), times (s), bandwidths (Hz), CPU frequency (cycles/s)."""

    p_u: float
    p_d: float
    t_u: float
    t_d: float
    b_u: float
    b_d: float
    f: float

    def __post_init__(self):
        for name in ("p_u", "p_d", "t_u", "t_d", "b_u", "b_d", "f"):
            value = getattr(self, name)
            _require(value >= 0 and math.isfinite(value), f"Allocation.{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class LoopOutcome:
    """Per-cycle information flow and the resulting LQR bound."""

    d_u: float
    d_d: float
    t_c: float
    d_sc3: float
    lqr_cost: float
    stable: bool


def entropy_power(covariance, gaussian=True):
    """Entropy power of a zero-mean noise vector.

    For Gaussian noise ``N(v) = det(Sigma)^(1/n)``.

    Raises
    ------
    DomainError
        If the covariance is not symmetric positive definite.
    UnsupportedError
        If ``gaussian`` is False.
    """
    if not gaussian:
        raise UnsupportedError("only Gaussian entropy power is implemented")
    cov = np.atleast_2d(np.asarray(covariance, dtype=float))
    n = cov.shape[0]
    if cov.shape != (n, n):
        raise DomainError(f"covariance must be square, got shape {cov.shape}")
    if not np.allclose(cov, cov.T, rtol=1e-10, atol=1e-14):
        raise DomainError("covariance must be symmetric")
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise DomainError("covariance must be positive definite") from None
    _, logdet = np.linalg.slogdet(cov)
    return math.exp(logdet / n)


def closed_loop_info(d_u, d_d, rho):
    """Task bits reaching the actuator: ``min(rho * d_u, d_d)``."""
    if d_u < 0 or d_d < 0:
        raise DomainError(f"information amounts must be nonnegative, got d_u={d_u}, d_d={d_d}")
    if not 0 < rho <= 1:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    return min(rho * d_u, d_d)


def lqr_bound(plant, d_sc3):
    """Lower bound on the LQR cost at closed-loop entropy rate ``d_sc3``.

    Returns ``inf`` when ``d_sc3 <= log2|det A|`` (the loop cannot be
    stabilized); otherwise
    ``lqr_scale / (2^((2/n)(d_sc3 - log2|det A|)) - 1) + lqr_offset``.
    """
    if d_sc3 < 0 or math.isnan(d_sc3):
        raise DomainError(f"d_sc3 must be nonnegative, got {d_sc3}")
    excess = d_sc3 - plant.intrinsic_entropy_rate
    if excess <= 0:
        return math.inf
    if plant.lqr_scale == 0:
        return plant.lqr_offset
    try:
        denom = math.expm1(2.0 / plant.n * excess * _LN2)
    except OverflowError:
        return plant.lqr_offset
    return plant.lqr_scale / denom + plant.lqr_offset


def _check_le(value, cap, constraint, label):
    if value > cap * (1 + FEASIBILITY_RTOL):
        raise InfeasibleAllocationError(constraint, f"{label} = {value:.9g} exceeds {cap:.9g}")


def evaluate_allocation(plant, compute, ul, dl, budget, alloc, compute_time=None):
    """Evaluate an operating point end to end.

    Parameters
    ----------
    plant : ControlPlant
    compute : ComputeModel
    ul, dl : LinkBudget
    budget : LoopBudget
    alloc : Allocation
    compute_time : float, optional
        Pin the computing slot to this many seconds. The uplink information
        is then capped at ``alloc.f * compute_time / alpha``, the number of
        bits the slot can process. By default the computing time follows
        from the uploaded bits, ``alpha * d_u / f``.

    Returns
    -------
    LoopOutcome

    Raises
    ------
    InfeasibleAllocationError
        If the allocation breaks a power, CPU, bandwidth or cycle-time budget.
    """
    _check_le(alloc.p_u, ul.p_max, "uplink_power", "p_u")
    _check_le(alloc.p_d, dl.p_max, "downlink_power", "p_d")
    _check_le(alloc.f, compute.f_max, "cpu_frequency", "f")
    _check_le(alloc.b_u + alloc.b_d, budget.b_max, "bandwidth", "b_u + b_d")

    d_u = alloc.t_u * ul.rate(alloc.b_u, power=alloc.p_u)
    d_d = alloc.t_d * dl.rate(alloc.b_d, power=alloc.p_d)
    if compute_time is None:
        if d_u > 0 and compute.alpha > 0:
            if alloc.f == 0:
                raise InfeasibleAllocationError("cpu_frequency", "uplink bits to process but f = 0")
            t_c = compute.alpha * d_u / alloc.f
        else:
            t_c = 0.0
    else:
        _require(compute_time >= 0, "compute_time must be nonnegative")
        t_c = compute_time
        if compute.alpha > 0:
            d_u = min(d_u, alloc.f * compute_time / compute.alpha)
    _check_le(alloc.t_u + t_c + alloc.t_d, budget.cycle_time, "time", "t_u + t_c + t_d")

    d_sc3 = closed_loop_info(d_u, d_d, compute.rho)
    cost = lqr_bound(plant, d_sc3)
    return LoopOutcome(d_u=d_u, d_d=d_d, t_c=t_c, d_sc3=d_sc3, lqr_cost=cost, stable=math.isfinite(cost))
