"""Nonlinear terms and the critical-exponent calculators.

The power family ``f(u) = coef * u |u|**(rho-1)`` satisfies
``|f(r) - f(s)| <= c (|r|**(rho-1) + |s|**(rho-1)) |r - s|`` with
``c = |coef| rho`` by the mean value theorem.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError
from .mittag_leffler import beta_fn
from .spectral import (DomainSpec, FractionalIndex, SpectralField, analyze, eigenvalues,
                       random_field, synthesize, x_norm)


class Kind(str, enum.Enum):
    POWER = "power"
    ZERO = "zero"
    ILLPOSED = "illposed_demo"


@dataclass(frozen=True)
class NonlinearitySpec:
    """The map ``f``; ``rho`` and ``coef`` are used by the power kind only."""

    kind: Kind = Kind.ZERO
    rho: Optional[float] = None
    coef: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.POWER:
            if self.rho is None or not (self.rho > 1.0 and math.isfinite(self.rho)):
                raise DomainError(f"power nonlinearity needs rho > 1, got {self.rho!r}")
            if not math.isfinite(self.coef):
                raise DomainError(f"coef must be finite, got {self.coef!r}")

    @classmethod
    def power(cls, rho: float, coef: float = 1.0) -> "NonlinearitySpec":
        return cls(Kind.POWER, float(rho), float(coef))

    @property
    def c(self) -> float:
        """Lipschitz constant of the power kind (0 for the zero map)."""
        if self.kind is Kind.ZERO:
            return 0.0
        return lipschitz_constant(self)

    def pointwise(self, u):
        """Evaluate the power or zero map on grid values."""
        u = np.asarray(u, dtype=float)
        if self.kind is Kind.ZERO:
            return np.zeros_like(u)
        if self.kind is Kind.ILLPOSED:
            raise DomainError("the ill-posed demo term is not a pointwise map")
        if self.rho == 3.0:
            return self.coef * u * u * u
        return self.coef * u * np.abs(u) ** (self.rho - 1.0)


class EpsilonRegularReport(NamedTuple):
    max_ratio: float
    max_growth_ratio: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class CriticalParams:
    """Critical configuration ``(N, q, rho, alpha, eps)``.

    ``N`` is the dimension entering the exponent formulas; solver runs may use
    a lower-dimensional box as a surrogate.
    """

    N: int
    q: float
    rho: float
    alpha: float
    eps: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        if not (1.0 < self.alpha < 2.0):
            raise DomainError(f"alpha must lie in (1, 2), got {self.alpha!r}")
        q_crit = critical_q(self.N, self.rho)
        if abs(self.q - q_crit) > 1e-12 * max(1.0, q_crit):
            raise DomainError(f"q = {self.q!r} is not critical: N (rho - 1) / 2 = {q_crit!r}")
        if not self.q > 1.0:
            raise DomainError(f"critical q = {self.q!r} must exceed 1")
        lo, hi = admissible_epsilon(self.N, self.q, self.alpha, self.rho)
        if not (lo < self.eps < hi):
            raise DomainError(f"eps = {self.eps!r} outside the admissible interval (0, {hi!r})")


def lipschitz_constant(spec: NonlinearitySpec) -> float:
    if spec.kind is not Kind.POWER:
        raise DomainError(f"Lipschitz certificate is defined for the power kind, not {spec.kind.value}")
    return abs(spec.coef) * spec.rho


def _eval_points(modes, rho):
    # odd integer powers alias-free once n + 1 > (rho + 1) K / 2
    if rho == round(rho) and int(round(rho)) % 2 == 1:
        factor = math.ceil((rho + 1.0) / 2.0)
    else:
        factor = 4
    return tuple(factor * k for k in modes)


def evaluate_f(spec: NonlinearitySpec, field: SpectralField) -> SpectralField:
    """``f(u)`` projected back onto the retained modes of ``field``."""
    return SpectralField(field.domain, evaluate_f_coeffs(spec, field.coeffs, field.domain))


def evaluate_f_coeffs(spec: NonlinearitySpec, coeffs: np.ndarray, domain: DomainSpec) -> np.ndarray:
    """Coefficient-level ``f`` used inside the solver loop."""
    coeffs = np.asarray(coeffs, dtype=float).reshape(domain.modes)
    if spec.kind is Kind.ZERO:
        return np.zeros(domain.modes)
    if spec.kind is Kind.ILLPOSED:
        return 2.0 * eigenvalues(domain) * coeffs
    samples = synthesize(coeffs, _eval_points(domain.modes, spec.rho))
    return analyze(spec.pointwise(samples), domain.modes)


def critical_q(N: int, rho: float) -> float:
    """Critical Lebesgue exponent ``q = N (rho - 1) / 2``."""
    if not rho > 1.0:
        raise DomainError(f"rho must exceed 1, got {rho!r}")
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    return N * (rho - 1.0) / 2.0


def critical_q_admissible(N: int, rho: float) -> bool:
    """Whether the critical exponent exceeds 1 as the theory requires."""
    return critical_q(N, rho) > 1.0


def admissible_epsilon(N: int, q: float, alpha: float, rho: float) -> tuple:
    """Open interval ``(0, eps_max)`` with ``eps_max = min(N / (N + 2q), 1 / (alpha rho))``."""
    q_crit = critical_q(N, rho)
    if abs(q - q_crit) > 1e-12 * max(1.0, q_crit):
        raise DomainError(f"q = {q!r} is off-critical for N = {N}, rho = {rho!r} (expected {q_crit!r})")
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"alpha must lie in (1, 2), got {alpha!r}")
    return (0.0, min(N / (N + 2.0 * q), 1.0 / (alpha * rho)))


def mu_radius(M: float, c: float, alpha: float, rho: float, eps: float) -> tuple:
    """Fixed-point radius ``mu`` and data radius ``r = mu / (4 M)``.

    ``mu`` solves ``M c mu**(rho-1) B(alpha (rho-1) eps, 1 - alpha rho eps) = 1/4``.
    """
    if not (M > 0.0 and c > 0.0):
        raise DomainError(f"M and c must be positive, got M={M!r}, c={c!r}")
    a1 = alpha * (rho - 1.0) * eps
    a2 = 1.0 - alpha * rho * eps
    if not (a1 > 0.0 and a2 > 0.0):
        raise DomainError(f"inadmissible Beta arguments ({a1!r}, {a2!r}); need rho > 1 and alpha rho eps < 1")
    mu = (4.0 * M * c * beta_fn(a1, a2)) ** (-1.0 / (rho - 1.0))
    return mu, mu / (4.0 * M)


def check_epsilon_regular(spec: NonlinearitySpec, params: CriticalParams, domain: DomainSpec,
                          n_samples: int = 500, seed: int = 0, bound: float = 1.0) -> EpsilonRegularReport:
    """Empirical constant in ``||f(u) - f(v)||_{X^{rho eps}} <= c (...) ||u - v||_{X^{1+eps}}``.

    Random band-limited pairs with log-uniform amplitudes are drawn from a
    seeded generator. Every fourth pair has ``v = 0``, which probes the growth
    form ``||f(u)|| <= c ||u||**rho``.
    """
    if abs(spec.rho - params.rho) > 1e-12:
        raise DomainError(f"spec rho {spec.rho!r} differs from params rho {params.rho!r}")
    c = lipschitz_constant(spec)
    src = FractionalIndex(1.0 + params.eps, params.q)
    dst = FractionalIndex(params.rho * params.eps, params.q)
    rng = np.random.default_rng(seed)
    worst, worst_growth = 0.0, 0.0
    for i in range(n_samples):
        u = random_field(domain, rng, amplitude=10.0 ** rng.uniform(-2, 1))
        if i % 4 == 3:
            v = SpectralField.zeros(domain)
        else:
            v = random_field(domain, rng, amplitude=10.0 ** rng.uniform(-2, 1))
        nu, nv, nd = x_norm(u, src), x_norm(v, src), x_norm(u - v, src)
        lhs = x_norm(evaluate_f(spec, u) - evaluate_f(spec, v), dst)
        rhs = c * (nu ** (params.rho - 1.0) + nv ** (params.rho - 1.0)) * nd
        ratio = lhs / rhs if rhs > 0.0 else 0.0
        worst = max(worst, ratio)
        if i % 4 == 3:
            worst_growth = max(worst_growth, lhs / (c * nu ** params.rho))
    return EpsilonRegularReport(float(worst), float(worst_growth), float(bound), bool(worst <= bound))
