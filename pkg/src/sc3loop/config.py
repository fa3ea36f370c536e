"""Flat ``key = value`` experiment configuration.

Lines are ``key = value``; ``#`` starts a comment. Values are SI except
``n0_dbm_per_hz`` (dBm/Hz), ``fc_mhz`` (MHz) and the ``*_km`` distances.
"""

import math
from dataclasses import MISSING, dataclass, fields
from functools import cached_property
from importlib import resources

import numpy as np

from .baselines import StaticConfig, TradeoffConfig
from .errors import ConfigError
from .link import LinkBudget
from .model import ComputeModel, LoopBudget
from .optimizer import OptimizerConfig
from .oracle import GridSpec
from .riccati import plant_from_matrices


@dataclass(frozen=True)
class ExperimentConfig:
    # links
    p_umax_w: float
    p_dmax_w: float
    b_max_hz: float
    n0_dbm_per_hz: float
    fc_mhz: float
    d_u_km: float
    d_d_km: float
    # plant: A = 2^(intrinsic/n) I, B = b_scale I, Q = q_scale I, R = r_scale I, Sigma_v = sigma_v_scale I
    n: int
    m: int
    intrinsic_entropy_rate: float
    q_scale: float
    r_scale: float
    b_scale: float
    sigma_v_scale: float
    # loop and computing
    cycle_time_s: float
    f_max_hz: float
    alpha_cycles_per_bit: float
    rho: float
    # baselines
    d0_bits: float
    tradeoff_objective: str = "sum_rate"
    tradeoff_optimize_bandwidth: bool = True
    static_compute_cap: bool = True
    # sweeps
    sweep_b_min_hz: float = 2e5
    sweep_b_max_hz: float = 2e6
    sweep_points: int = 40
    contour_b_min_hz: float = 4e4
    contour_b_max_hz: float = 2e5
    contour_b_points: int = 41
    contour_f_min_hz: float = 2e8
    contour_f_max_hz: float = 3e9
    contour_f_points: int = 41
    # numerics
    bandwidth_tol_hz: float = 0.1
    riccati_tol: float = 1e-10
    riccati_max_iter: int = 100_000
    oracle_grid_b: int = 2000
    oracle_grid_t: int = 2000
    oracle_instances: int = 50

    def __post_init__(self):
        positive = (
            "p_umax_w", "p_dmax_w", "b_max_hz", "fc_mhz", "d_u_km", "d_d_km", "n", "m",
            "b_scale", "sigma_v_scale", "cycle_time_s", "f_max_hz", "rho",
            "sweep_b_min_hz", "sweep_b_max_hz", "sweep_points",
            "contour_b_min_hz", "contour_b_max_hz", "contour_b_points",
            "contour_f_min_hz", "contour_f_max_hz", "contour_f_points",
            "bandwidth_tol_hz", "riccati_tol", "riccati_max_iter",
            "oracle_grid_b", "oracle_grid_t", "oracle_instances",
        )
        for key in positive:
            value = getattr(self, key)
            if not (value > 0 and math.isfinite(value)):
                raise ConfigError(f"{key} must be positive, got {value}", key=key)
        for key in ("q_scale", "r_scale", "alpha_cycles_per_bit", "d0_bits"):
            if not getattr(self, key) >= 0:
                raise ConfigError(f"{key} must be >= 0", key=key)
        if self.rho > 1:
            raise ConfigError("rho must lie in (0, 1]", key="rho")
        for lo, hi, pts in (
            ("sweep_b_min_hz", "sweep_b_max_hz", "sweep_points"),
            ("contour_b_min_hz", "contour_b_max_hz", "contour_b_points"),
            ("contour_f_min_hz", "contour_f_max_hz", "contour_f_points"),
        ):
            # a single point sweeps only the lower end, so equal bounds are fine there
            if getattr(self, lo) > getattr(self, hi) or (getattr(self, pts) > 1 and getattr(self, lo) == getattr(self, hi)):
                raise ConfigError(f"{lo} must be below {hi}", key=lo)
        # validates option values early
        self.tradeoff_config()
        self.oracle_grid()

    @cached_property
    def plant(self):
        n, m = self.n, self.m
        A = 2.0 ** (self.intrinsic_entropy_rate / n) * np.eye(n)
        return plant_from_matrices(
            A, self.b_scale * np.eye(n, m), self.q_scale * np.eye(n), self.r_scale * np.eye(m),
            self.sigma_v_scale * np.eye(n), tol=self.riccati_tol, max_iter=self.riccati_max_iter,
        )

    def compute(self, f_max=None):
        return ComputeModel(rho=self.rho, alpha=self.alpha_cycles_per_bit, f_max=f_max or self.f_max_hz)

    def uplink(self):
        return LinkBudget.from_path_loss(self.p_umax_w, self.fc_mhz, self.d_u_km, self.n0_dbm_per_hz)

    def downlink(self):
        return LinkBudget.from_path_loss(self.p_dmax_w, self.fc_mhz, self.d_d_km, self.n0_dbm_per_hz)

    def budget(self, b_max=None):
        return LoopBudget(cycle_time=self.cycle_time_s, b_max=b_max or self.b_max_hz)

    def optimizer_config(self):
        return OptimizerConfig(bandwidth_tol=self.bandwidth_tol_hz)

    def tradeoff_config(self):
        return TradeoffConfig(
            d0=self.d0_bits, objective=self.tradeoff_objective,
            optimize_bandwidth=self.tradeoff_optimize_bandwidth,
        )

    def static_config(self):
        return StaticConfig(compute_cap=self.static_compute_cap)

    def oracle_grid(self):
        return GridSpec(n_bandwidth=self.oracle_grid_b, n_time=self.oracle_grid_t)

    def scenario(self, b_max=None, f_max=None):
        """Positional arguments shared by every scheme solver."""
        return (self.plant, self.compute(f_max), self.uplink(), self.downlink(), self.budget(b_max))

    def replace(self, **changes):
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return ExperimentConfig(**values)


_FIELDS = {f.name: f for f in fields(ExperimentConfig)}
_REQUIRED = [f.name for f in fields(ExperimentConfig) if f.default is MISSING]


def _convert(key, raw, line):
    kind = _FIELDS[key].type
    try:
        if kind is int:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if kind is float:
            return float(raw)
        if kind is bool:
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError
        return raw
    except ValueError:
        raise ConfigError(f"cannot parse {key} = {raw!r} as {kind.__name__}", line=line, key=key) from None


def parse_config(text):
    """Parse config text into an :class:`ExperimentConfig`.

    Raises
    ------
    ConfigError
        With the offending line number for syntax errors, unknown or
        duplicated keys and unparsable values; naming the key for missing
        entries and out-of-range values.
    """
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", line=lineno)
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"unknown key {key!r}", line=lineno, key=key)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", line=lineno, key=key)
        if not raw:
            raise ConfigError(f"missing value for {key!r}", line=lineno, key=key)
        values[key] = _convert(key, raw, lineno)
    for key in _REQUIRED:
        if key not in values:
            raise ConfigError(f"missing required key {key!r}", key=key)
    return ExperimentConfig(**values)


def load_config(path=None):
    """Load a config file; ``None`` loads the bundled ``paper.cfg``."""
    if path is None:
        return parse_config(resources.files("sc3loop").joinpath("data/paper.cfg").read_text())
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)
