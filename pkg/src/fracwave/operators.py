"""Mittag-Leffler solution families as diagonal spectral multipliers.

For eigenvalue ``lam`` and time ``t`` the three families act by

* ``E``: ``E_{a,1}(-lam t^a)``, propagating the initial value;
* ``S``: ``t E_{a,2}(-lam t^a)``, propagating the initial velocity;
* ``R``: ``t^(a-1) E_{a,a}(-lam t^a)``, the convolution kernel.

On the Hilbert scale the operator norm from ``X^beta_2`` to ``X^(1+theta)_2``
is the sup over modes of ``lam**(1+theta-beta) |m(t, lam)|``; after the
substitution ``x = lam t^a`` it is bounded by a power of ``t`` times
``sup_x x**p |E_{a,b}(-x)|`` with ``p = 1 + theta - beta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError
from .mittag_leffler import MlfParams, mlf_envelope_sup, mlf_neg
from .spectral import DomainSpec, SpectralField, eigenvalues

# The Dirichlet Laplacian is self-adjoint and negative, so its sectorial angle
# is pi for every q in this realization; the constraint 1 < alpha < 2 phi / pi
# therefore reduces to 1 < alpha < 2.
SECTOR_ANGLE = math.pi


class Family(str, enum.Enum):
    E = "E"
    S = "S"
    R = "R"


@dataclass(frozen=True)
class OperatorFamily:
    """One of the families ``E``, ``S``, ``R`` at order ``alpha`` in (1, 2)."""

    kind: Family
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Family(self.kind))
        if not (1.0 < self.alpha < 2.0 * SECTOR_ANGLE / math.pi):
            raise DomainError(f"alpha must lie in (1, 2), got {self.alpha!r}")

    @property
    def mlf_beta(self) -> float:
        return _mlf_beta(self.kind, self.alpha)


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit ``log y = slope log t + intercept``."""

    slope: float
    intercept: float
    residual: float
    target: float = math.nan


def _mlf_beta(kind, alpha):
    return {Family.E: 1.0, Family.S: 2.0, Family.R: alpha}[Family(kind)]


def multiplier(kind, alpha: float, t: float, lam, backend=None) -> np.ndarray:
    """Mode-wise multiplier of family ``kind`` at time ``t``.

    Accepts ``alpha`` in [1, 2) so that the heat case ``alpha = 1`` can be
    compared against ``exp(-lam t)``.
    """
    kind = Family(kind)
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"time must be finite and non-negative, got {t!r}")
    if not (1.0 <= alpha < 2.0):
        raise DomainError(f"alpha must lie in [1, 2), got {alpha!r}")
    lam = np.asarray(lam, dtype=float)
    if t == 0.0:
        if kind is Family.E:
            return np.ones_like(lam)
        if kind is Family.S:
            return np.zeros_like(lam)
        raise DomainError("the R family is only defined for t > 0")
    x = lam * t ** alpha
    e = mlf_neg(alpha, _mlf_beta(kind, alpha), x, backend=backend)
    if kind is Family.E:
        return e
    if kind is Family.S:
        return t * e
    return t ** (alpha - 1.0) * e


def apply(family: OperatorFamily, t: float, field: SpectralField) -> SpectralField:
    """Apply ``family(t)`` to ``field`` mode by mode."""
    m = multiplier(family.kind, family.alpha, t, eigenvalues(field.domain))
    return SpectralField(field.domain, m * field.coeffs)


def envelope_exponent(beta: float, theta: float) -> float:
    return 1.0 + theta - beta


def lemma_exponent(kind, alpha: float, beta: float, theta: float) -> float:
    """Power of ``t`` in the smoothing estimate for ``X^beta -> X^(1+theta)``."""
    kind = Family(kind)
    if kind is Family.E:
        return -alpha * (1.0 + theta - beta)
    if kind is Family.S:
        return 1.0 - alpha * (1.0 + theta - beta)
    return -1.0 - alpha * (theta - beta)


def _check_pair(beta, theta):
    if not (0.0 <= theta < beta <= 1.0):
        raise DomainError(f"need 0 <= theta < beta <= 1, got beta={beta!r}, theta={theta!r}")


def operator_norm(family: OperatorFamily, t: float, beta: float, theta: float,
                  domain: DomainSpec) -> float:
    """Exact ``X^beta_2 -> X^(1+theta)_2`` norm over the retained modes."""
    _check_pair(beta, theta)
    lam = eigenvalues(domain).ravel()
    m = multiplier(family.kind, family.alpha, t, lam)
    return float(np.max(lam ** envelope_exponent(beta, theta) * np.abs(m)))


@lru_cache(maxsize=256)
def _sharp_M(kind: Family, alpha: float, p: float) -> float:
    return mlf_envelope_sup(MlfParams(alpha, _mlf_beta(kind, alpha)), p)


def sharp_M(family: OperatorFamily, beta: float, theta: float) -> float:
    """Smallest ``M`` with ``operator_norm(t) <= M t**lemma_exponent`` on every box.

    Equals ``sup_{x >= 0} x**p |E_{a,b}(-x)|`` with ``p = 1 + theta - beta``
    and ``b`` the second Mittag-Leffler index of the family.
    """
    p = envelope_exponent(beta, theta)
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"envelope exponent 1 + theta - beta = {p!r} must lie in [0, 1]")
    return _sharp_M(family.kind, family.alpha, p)


def fit_loglog(t, y, target=math.nan) -> RateFit:
    """Least-squares line through ``(log t, log y)``."""
    lt, ly = np.log(np.asarray(t, dtype=float)), np.log(np.asarray(y, dtype=float))
    A = np.vstack([lt, np.ones_like(lt)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    return RateFit(float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid ** 2))), float(target))


def smoothing_rate_fit(family: OperatorFamily, beta: float, theta: float,
                       domain: DomainSpec, t_grid) -> RateFit:
    """Fit the decay exponent of ``operator_norm`` over ``t_grid``.

    ``RateFit.target`` carries the exponent predicted by the smoothing lemma.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size < 4:
        raise ConfigurationError(f"need at least 4 time points, got {t_grid.size}", key="t_grid")
    if np.any(t_grid <= 0.0):
        raise ConfigurationError("time points must be positive", key="t_grid")
    norms = [operator_norm(family, t, beta, theta, domain) for t in t_grid]
    return fit_loglog(t_grid, norms, lemma_exponent(family.kind, family.alpha, beta, theta))
