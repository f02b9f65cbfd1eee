"""Product-integration solver for the mild formulation.

The state satisfies

    u(t) = E(t) u0 + S(t) u1 + int_0^t R(t - s) f(u(s)) ds,

mode by mode. On a mesh ``0 = t_0 < ... < t_N`` the density ``f(u)`` is
frozen at the right endpoint of each interval and the kernel is integrated
exactly through the primitive

    int_0^tau s^(a-1) E_{a,a}(-lam s^a) ds = tau^a E_{a,a+1}(-lam tau^a),

so the newest interval makes every step implicit; it is resolved by Picard
sweeps.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np
from scipy import optimize

from . import kernels
from .errors import ConfigurationError, DomainError
from .mittag_leffler import mlf_array, mlf_neg
from .nonlinearity import CriticalParams, Kind, NonlinearitySpec, evaluate_f_coeffs
from .operators import Family, multiplier
from .spectral import DomainSpec, FractionalIndex, SpectralField, eigenvalues, x2_norms, x_norm

SEEDS = ("previous", "zero", "linear")


class Status(str, enum.Enum):
    COMPLETED = "completed"
    BLOWUP = "blowup_detected"
    PICARD_FAILED = "picard_failed"


@dataclass(frozen=True)
class ProblemSpec:
    """Cauchy problem for the fractional diffusion-wave equation.

    ``u1_index`` is the regularity index claimed for ``u1``; it must lie in
    ``(1 - 1/alpha, 1]``.
    """

    alpha: float
    domain: DomainSpec
    f: NonlinearitySpec
    u0: SpectralField
    u1: SpectralField
    params: CriticalParams
    u1_index: float = 1.0

    def __post_init__(self):
        if not (1.0 < self.alpha < 2.0):
            raise DomainError(f"alpha must lie in (1, 2), got {self.alpha!r}")
        if not (1.0 - 1.0 / self.alpha < self.u1_index <= 1.0):
            raise DomainError(
                f"u1_index must lie in (1 - 1/alpha, 1] = ({1.0 - 1.0 / self.alpha:.6g}, 1], got {self.u1_index!r}")
        for name in ("u0", "u1"):
            if getattr(self, name).domain != self.domain:
                raise DomainError(f"{name} lives on a different domain")
        if abs(self.params.alpha - self.alpha) > 1e-15:
            raise DomainError(f"params.alpha {self.params.alpha!r} differs from alpha {self.alpha!r}")
        if self.f.kind is Kind.POWER and abs(self.f.rho - self.params.rho) > 1e-12:
            raise DomainError(f"nonlinearity rho {self.f.rho!r} differs from params rho {self.params.rho!r}")
        if self.domain.dim > self.params.N:
            raise DomainError(f"domain dimension {self.domain.dim} exceeds formula dimension {self.params.N}")

    @property
    def eps(self) -> float:
        return self.params.eps

    def with_data(self, u0: SpectralField, u1: SpectralField) -> "ProblemSpec":
        return ProblemSpec(self.alpha, self.domain, self.f, u0, u1, self.params, self.u1_index)


@dataclass(frozen=True)
class SolverConfig:
    t_end: float
    n_steps: int = 128
    grading: float = 2.0
    picard_tol: float = 1e-10
    picard_max: int = 50
    blowup_cap: float = 1e6
    seed: str = "previous"

    def __post_init__(self):
        if not (self.t_end > 0.0 and math.isfinite(self.t_end)):
            raise ConfigurationError(f"must be positive and finite, got {self.t_end!r}", key="solver.t_end")
        if int(self.n_steps) != self.n_steps or self.n_steps < 2:
            raise ConfigurationError(f"must be an integer >= 2, got {self.n_steps!r}", key="solver.n_steps")
        if not self.grading >= 1.0:
            raise ConfigurationError(f"must be >= 1, got {self.grading!r}", key="solver.grading")
        if not self.picard_tol > 0.0:
            raise ConfigurationError(f"must be positive, got {self.picard_tol!r}", key="solver.picard_tol")
        if int(self.picard_max) != self.picard_max or self.picard_max < 1:
            raise ConfigurationError(f"must be a positive integer, got {self.picard_max!r}", key="solver.picard_max")
        if not self.blowup_cap > 0.0:
            raise ConfigurationError(f"must be positive, got {self.blowup_cap!r}", key="solver.blowup_cap")
        if self.seed not in SEEDS:
            raise ConfigurationError(f"must be one of {SEEDS}, got {self.seed!r}", key="solver.seed")

    def mesh(self) -> np.ndarray:
        return graded_mesh(self.t_end, self.n_steps, self.grading)


def graded_mesh(t_end: float, n_steps: int, grading: float, n_max: Optional[int] = None) -> np.ndarray:
    """Points ``t_end (n / n_steps)**grading`` for ``n = 0..n_max``."""
    n = np.arange((n_steps if n_max is None else n_max) + 1, dtype=float)
    t = t_end * (n / n_steps) ** grading
    if n_max is None:
        t[-1] = t_end
    return t


@dataclass
class Trajectory:
    """Solution on a mesh with per-step diagnostics.

    ``coeffs[n]`` holds the flattened state at ``times[n]`` and ``forcing[n]``
    the projected ``f(u_n)``. ``weighted_norms`` use the ``X^(1+eps)_2`` frame.
    """

    times: np.ndarray
    coeffs: np.ndarray
    forcing: np.ndarray
    weighted_norms: np.ndarray
    picard_iters: np.ndarray
    residuals: np.ndarray
    status: Status
    domain: DomainSpec
    failure_time: Optional[float] = None

    @property
    def states(self) -> List[SpectralField]:
        return [SpectralField(self.domain, c) for c in self.coeffs]

    def state(self, n: int) -> SpectralField:
        return SpectralField(self.domain, self.coeffs[n])

    def __len__(self):
        return len(self.times)


def convolution_weights(alpha: float, lambda_k, t_grid, n: int) -> np.ndarray:
    """Exact kernel integrals over each source interval ``[t_j, t_{j+1}]``, ``j < n``.

    Returns an array of shape ``(n,) + shape(lambda_k)``.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if not (1 <= n < len(t_grid)):
        raise IndexError(f"target index {n} outside mesh of {len(t_grid)} points")
    lam = np.asarray(lambda_k, dtype=float)
    prim = kernel_primitive(alpha, lam, t_grid[n] - t_grid[:n + 1])
    return prim[:-1] - prim[1:]


def kernel_primitive(alpha: float, lam: np.ndarray, lags: np.ndarray) -> np.ndarray:
    """``tau^a E_{a,a+1}(-lam tau^a)`` on the outer grid ``lags x lam``."""
    lags = np.asarray(lags, dtype=float)
    lam = np.asarray(lam, dtype=float)
    ta = lags.reshape(lags.shape + (1,) * lam.ndim) ** alpha
    if alpha == 1.0:
        # exponential reduction, E_{1,2}(-x) = (1 - e^-x) / x
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(lam > 0, -np.expm1(-lam * ta) / np.where(lam > 0, lam, 1.0), ta)
        return out
    return ta * mlf_neg(alpha, alpha + 1.0, lam * ta)


def _linear_part(alpha, lam, t, c0, c1):
    out = multiplier(Family.E, alpha, t, lam) * c0
    if np.any(c1):
        out = out + multiplier(Family.S, alpha, t, lam) * c1
    return out


class _Workspace(NamedTuple):
    lam: np.ndarray
    c0: np.ndarray
    c1: np.ndarray
    w2: np.ndarray  # squared X^(1+eps)_2 weights


def _workspace(problem: ProblemSpec) -> _Workspace:
    lam = eigenvalues(problem.domain).ravel()
    w2 = problem.domain.norm_factor * lam ** (2.0 * problem.eps)
    return _Workspace(lam, problem.u0.coeffs.ravel(), problem.u1.coeffs.ravel(), w2)


def _norm(ws: _Workspace, c) -> float:
    return math.sqrt(float(np.dot(ws.w2, c * c)))


def _march(problem: ProblemSpec, config: SolverConfig, times: np.ndarray,
           traj: Optional[Trajectory] = None) -> Trajectory:
    """Advance from the end of ``traj`` (or from t = 0) over ``times``."""
    ws = _workspace(problem)
    dom = problem.domain
    K = ws.lam.size
    N = len(times) - 1
    alpha, eps = problem.alpha, problem.eps
    coeffs = np.zeros((N + 1, K))
    forcing = np.zeros((N + 1, K))
    wn = np.zeros(N + 1)
    iters = np.zeros(N + 1, dtype=int)
    resid = np.zeros(N + 1)
    if traj is None:
        start = 1
        coeffs[0] = ws.c0
        forcing[0] = evaluate_f_coeffs(problem.f, ws.c0, dom).ravel()
    else:
        start = len(traj.times)
        coeffs[:start] = traj.coeffs
        forcing[:start] = traj.forcing
        wn[:start] = traj.weighted_norms
        iters[:start] = traj.picard_iters
        resid[:start] = traj.residuals
    is_zero = problem.f.kind is Kind.ZERO
    status, fail_t, last = Status.COMPLETED, None, N

    def fmap(c):
        return evaluate_f_coeffs(problem.f, c, dom).ravel()

    for n in range(start, N + 1):
        t = times[n]
        lin = _linear_part(alpha, ws.lam, t, ws.c0, ws.c1)
        prim = kernel_primitive(alpha, ws.lam, t - times[:n + 1])
        hist = kernels.weighted_history(prim, forcing[:n + 1])
        w_last = prim[n - 1] - prim[n]
        base = lin + hist
        if is_zero:
            u, fu, k, change = base, np.zeros(K), 1, 0.0
        else:
            if config.seed == "previous":
                u = coeffs[n - 1].copy()
            elif config.seed == "zero":
                u = np.zeros(K)
            else:
                u = lin.copy()
            fu = fmap(u)
            change = math.inf
            with np.errstate(all="ignore"):
                for k in range(1, config.picard_max + 1):
                    new = base + w_last * fu
                    change = _norm(ws, new - u)
                    u = new
                    fu = fmap(u)
                    if not np.all(np.isfinite(u)) or not math.isfinite(change) or change <= config.picard_tol:
                        break
        coeffs[n], forcing[n], iters[n], resid[n] = u, fu, k, change
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(fu))):
            status, fail_t, last = Status.BLOWUP, float(t), n
            break
        wn[n] = t ** (alpha * eps) * _norm(ws, u)
        if not change <= config.picard_tol and not is_zero:
            status, fail_t, last = Status.PICARD_FAILED, float(t), n
            break
        if wn[n] > config.blowup_cap:
            status, fail_t, last = Status.BLOWUP, float(t), n
            break
    sl = slice(0, last + 1)
    return Trajectory(times=np.array(times[sl]), coeffs=coeffs[sl], forcing=forcing[sl],
                      weighted_norms=wn[sl], picard_iters=iters[sl], residuals=resid[sl],
                      status=status, domain=dom, failure_time=fail_t)


def solve(problem: ProblemSpec, config: SolverConfig, times=None) -> Trajectory:
    """Compute the mild solution on the graded mesh of ``config``.

    ``times`` optionally replaces the mesh; it must start at 0 and increase
    strictly.
    """
    if times is None:
        times = config.mesh()
    else:
        times = np.asarray(times, dtype=float)
        if times[0] != 0.0 or np.any(np.diff(times) <= 0.0) or times.size < 2:
            raise ConfigurationError("mesh must start at 0 and increase strictly", key="solver.times")
    return _march(problem, config, times)


def continuation_mesh(config: SolverConfig, extra_T: float) -> np.ndarray:
    """The graded mesh of ``config`` extended by the same formula to ``t_end + extra_T``."""
    T, N, g = config.t_end, config.n_steps, config.grading
    T_new = T + extra_T
    n_new = int(math.ceil(N * (T_new / T) ** (1.0 / g) - 1e-9))
    t = graded_mesh(T, N, g, n_max=n_new)
    t[:N + 1] = config.mesh()
    t[-1] = T_new
    return t


def continue_solution(traj: Trajectory, problem: ProblemSpec, config: SolverConfig,
                      extra_T: float) -> Trajectory:
    """Extend a completed trajectory to ``t_end + extra_T`` reusing its memory term."""
    if traj.status is not Status.COMPLETED:
        raise DomainError(f"cannot continue a trajectory with status {traj.status.value}")
    if not extra_T >= 0.0:
        raise DomainError(f"extra_T must be non-negative, got {extra_T!r}")
    if extra_T == 0.0:
        return traj
    times = continuation_mesh(config, extra_T)
    if len(traj.times) != config.n_steps + 1 or not np.array_equal(times[:len(traj.times)], traj.times):
        raise DomainError("trajectory mesh does not match the configuration")
    return _march(problem, config, times, traj)


def resubstitution_residual(traj: Trajectory, problem: ProblemSpec) -> float:
    """Max ``X^(1+eps)_2`` gap between the states and the mild right-hand side.

    The nonlinearity is re-evaluated from the stored states and the memory
    term recomputed with the same exact weights.
    """
    ws = _workspace(problem)
    dom = problem.domain
    F = np.array([evaluate_f_coeffs(problem.f, c, dom).ravel() for c in traj.coeffs])
    worst = 0.0
    for n in range(1, len(traj.times)):
        t = traj.times[n]
        prim = kernel_primitive(problem.alpha, ws.lam, t - traj.times[:n + 1])
        rhs = _linear_part(problem.alpha, ws.lam, t, ws.c0, ws.c1) + np.einsum(
            "jk,jk->k", prim[:-1] - prim[1:], F[1:n + 1])
        worst = max(worst, _norm(ws, rhs - traj.coeffs[n]))
    return worst


def weighted_norm_monitor(traj: Trajectory, alpha: float, eps: float, q: float = 2.0):
    """``max_n t_n^(alpha eps) ||u(t_n)||_{X^(1+eps)_q}`` and the time attaining it."""
    if len(traj.times) == 0:
        raise DomainError("empty trajectory")
    if q == 2.0:
        norms = x2_norms(traj.coeffs, traj.domain, 1.0 + eps)
    else:
        idx = FractionalIndex(1.0 + eps, q)
        norms = np.array([x_norm(s, idx) for s in traj.states])
    vals = traj.times ** (alpha * eps) * norms
    vals[traj.times == 0.0] = 0.0
    i = int(np.argmax(vals))
    return float(vals[i]), float(traj.times[i])


def detect_blowup(traj: Trajectory, cap: float) -> Optional[float]:
    """First time the weighted norm exceeds ``cap``, or the failure time; None otherwise.

    A numerical indicator only; it does not prove blow-up.
    """
    over = np.flatnonzero(traj.weighted_norms > cap)
    if over.size:
        return float(traj.times[over[0]])
    if traj.status is not Status.COMPLETED:
        return traj.failure_time
    return None


class IllposedCurve(NamedTuple):
    times: np.ndarray
    values: np.ndarray
    crossing_time: Optional[float]
    flagged: bool


def illposed_demo(alpha: float, lam: float, t_end: float, n_points: int = 400,
                  threshold: float = 1e6) -> IllposedCurve:
    """Growth curve ``t -> E_{a,1}(lam t^a)`` of the backward single-mode problem."""
    if not lam > 0.0:
        raise DomainError(f"lambda must be positive, got {lam!r}")
    t = np.linspace(0.0, t_end, n_points)
    vals = mlf_array(alpha, 1.0, lam * t ** alpha)
    over = np.flatnonzero(vals > threshold)
    crossing = None
    if over.size:
        i = over[0]
        crossing = float(t[i]) if i == 0 else optimize.brentq(
            lambda s: mlf_array(alpha, 1.0, lam * s ** alpha) - threshold, t[i - 1], t[i], xtol=1e-14)
    return IllposedCurve(t, vals, crossing, bool(over.size))
