"""Task-oriented joint uplink/downlink allocation for SC3 control loops."""

from .config import ExperimentConfig, load_config, parse_config
from .baselines import StaticConfig, TradeoffConfig, solve_static, solve_tradeoff
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InfeasibleAllocationError,
    NumericalError,
    SC3Error,
    SingularityError,
    UnsupportedError,
)
from .link import LinkBudget, PathLossParams, channel_gain, path_loss_db, shannon_rate
from .model import (
    Allocation,
    ComputeModel,
    ControlPlant,
    LoopBudget,
    LoopOutcome,
    closed_loop_info,
    entropy_power,
    evaluate_allocation,
    lqr_bound,
)
from .optimizer import OptimalSolution, OptimizerConfig, optimize, p3_objective, solve_p3
from .oracle import GridSpec, brute_force_p2
from .riccati import RiccatiProblem, RiccatiSolution, plant_from_matrices, solve_riccati

__version__ = "0.1.0"
