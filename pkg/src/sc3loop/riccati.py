"""Coupled Riccati fixed point for the LQR bound.

Solves::

    S = Q + A^T (S - M) A
    M = S B (R + B^T S B)^{-1} B^T S

by plain fixed-point iteration from ``S = Q``. The second identity is the
standard DARE gain term; writing ``B^T S B`` inside the inverse is what makes
the dimensions agree when ``m != n``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, SingularityError
from .model import ControlPlant, entropy_power


@dataclass(frozen=True)
class RiccatiProblem:
    A: np.ndarray
    B: np.ndarray
    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        A, B, Q, R = (np.atleast_2d(np.asarray(x, dtype=float)) for x in (self.A, self.B, self.Q, self.R))
        n = A.shape[0]
        if A.shape != (n, n):
            raise DomainError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise DomainError(f"B must have {n} rows, got {B.shape}")
        m = B.shape[1]
        if Q.shape != (n, n) or R.shape != (m, m):
            raise DomainError(f"Q must be {n}x{n} and R {m}x{m}, got {Q.shape} and {R.shape}")
        for name, W in (("Q", Q), ("R", R)):
            if not np.allclose(W, W.T, atol=1e-12):
                raise DomainError(f"{name} must be symmetric")
            if np.linalg.eigvalsh(W).min() < -1e-12 * max(1.0, np.abs(W).max()):
                raise DomainError(f"{name} must be positive semidefinite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]


@dataclass(frozen=True)
class RiccatiSolution:
    S: np.ndarray
    M: np.ndarray
    iterations: int
    residual_s: float
    residual_m: float

    @property
    def det_m_root(self):
        """``|det M|^(1/n)``."""
        n = self.M.shape[0]
        sign, logdet = np.linalg.slogdet(self.M)
        if sign == 0:
            return 0.0
        return math.exp(logdet / n)

    def trace_term(self, sigma_v):
        """``tr(Sigma_v S)``."""
        return float(np.trace(np.atleast_2d(sigma_v) @ self.S))


def _gain_term(S, B, R):
    G = R + B.T @ S @ B
    # rcond guard: R = 0 with rank-deficient B^T S B is common in misconfigured plants
    if np.linalg.cond(G) > 1e14:
        raise SingularityError("R + B^T S B is singular")
    return S @ B @ np.linalg.solve(G, B.T @ S)


def riccati_residuals(problem, S, M):
    """Max-abs residuals of both fixed-point identities."""
    A, B, Q, R = problem.A, problem.B, problem.Q, problem.R
    res_s = np.abs(S - Q - A.T @ (S - M) @ A).max()
    res_m = np.abs(M - _gain_term(S, B, R)).max()
    return float(res_s), float(res_m)


def solve_riccati(problem, tol=1e-10, max_iter=100_000):
    """Iterate ``S <- Q + A^T (S - M(S)) A`` to a fixed point.

    Parameters
    ----------
    problem : RiccatiProblem
    tol : float
        Stop once the max-abs elementwise change of ``S`` drops below
        ``tol * max(1, max|S|)``.
    max_iter : int

    Returns
    -------
    RiccatiSolution

    Raises
    ------
    SingularityError
        If ``R + B^T S B`` cannot be inverted along the iteration.
    ConvergenceError
        If ``max_iter`` is exhausted, or the iterate blows up.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    A, B, Q, R = problem.A, problem.B, problem.Q, problem.R
    S = Q.copy()
    step = math.inf
    for k in range(1, max_iter + 1):
        M = _gain_term(S, B, R)
        S_next = Q + A.T @ (S - M) @ A
        S_next = 0.5 * (S_next + S_next.T)
        step = float(np.abs(S_next - S).max())
        S = S_next
        if not math.isfinite(step):
            raise ConvergenceError("Riccati iteration diverged", step, k)
        # scaled by |S| so tol stays attainable in floating point for large S
        if step < tol * max(1.0, float(np.abs(S).max())):
            M = _gain_term(S, B, R)
            M = 0.5 * (M + M.T)
            res_s, res_m = riccati_residuals(problem, S, M)
            return RiccatiSolution(S=S, M=M, iterations=k, residual_s=res_s, residual_m=res_m)
    raise ConvergenceError("Riccati iteration did not converge", step, max_iter)


def plant_from_matrices(A, B, Q, R, sigma_v, tol=1e-10, max_iter=100_000):
    """Build a :class:`ControlPlant` from full plant matrices.

    ``lqr_scale = n * N(v) * |det M|^(1/n)`` and ``lqr_offset = tr(Sigma_v S)``.

    Raises
    ------
    DomainError
        If ``A`` is singular (intrinsic entropy rate of minus infinity).
    """
    problem = RiccatiProblem(A, B, Q, R)
    sign, logdet = np.linalg.slogdet(problem.A)
    if sign == 0 or not math.isfinite(logdet):
        raise DomainError("A is singular; log2|det A| would be -inf")
    sigma_v = np.atleast_2d(np.asarray(sigma_v, dtype=float))
    if sigma_v.shape != (problem.n, problem.n):
        raise DomainError(f"sigma_v must be {problem.n}x{problem.n}, got {sigma_v.shape}")
    noise_power = entropy_power(sigma_v)
    sol = solve_riccati(problem, tol=tol, max_iter=max_iter)
    return ControlPlant(
        n=problem.n,
        m=problem.m,
        intrinsic_entropy_rate=float(logdet) / math.log(2.0),
        lqr_scale=problem.n * noise_power * sol.det_m_root,
        lqr_offset=sol.trace_term(sigma_v),
    )
