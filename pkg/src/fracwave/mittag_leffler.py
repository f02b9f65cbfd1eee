"""Gamma, Beta and the two-parameter Mittag-Leffler function on the real line.

``E_{a,b}(z) = sum_n z**n / Gamma(a*n + b)`` is evaluated by

* a Taylor series for ``|z| <= 1``;
* a log-domain series for ``z > 1``;
* for ``z < -1``, after lowering ``b`` below ``a`` with the recurrence
  ``E_{a,b}(z) = z E_{a,a+b}(z) + 1/Gamma(b)``, either a trapezoidal sum over a
  double-exponentially mapped ray of the inverse Laplace integral (plus the
  pole residues the ray sweeps past) or, beyond a threshold, the algebraic
  asymptotic expansion (plus the same residues when a > 1).

The ray tables depend only on ``(a, b)`` and are cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from . import kernels
from .errors import DomainError, EvaluationError

ALPHA_MAX = 2.0
BETA_MAX = 8.0

_SERIES_TOL = 1e-18
_SERIES_CAP = 20000
_NODE_STEP = 1.0 / 20.0
_NODE_RANGE = (-5.5, 7.0)
_NODE_TOL = 1e-18
_ASYM_TERMS = 15


def gamma(x: float) -> float:
    """Gamma function for positive finite arguments."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma requires a finite positive argument, got {x!r}")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """Reciprocal Gamma, entire; zero at the non-positive integers."""
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x > 171.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def beta_fn(a: float, b: float) -> float:
    """Euler Beta function ``B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)``.

    Arguments are sorted first so that ``beta_fn(a, b) == beta_fn(b, a)``
    bit for bit.
    """
    a, b = float(a), float(b)
    for v in (a, b):
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError(f"beta_fn requires finite positive arguments, got ({a!r}, {b!r})")
    lo, hi = (a, b) if a <= b else (b, a)
    s = lo + hi
    if s < 171.0:
        return math.gamma(lo) * math.gamma(hi) / math.gamma(s)
    return math.exp(math.lgamma(lo) + math.lgamma(hi) - math.lgamma(s))


@dataclass(frozen=True)
class MlfParams:
    """Parameters ``(alpha, beta)`` of ``E_{alpha,beta}``.

    ``alpha`` must lie in (0, 2] and ``beta`` in (0, 8]; the wider beta range
    admits the recurrence partners ``E_{a, a+b}`` of every family used.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and 0.0 < a <= ALPHA_MAX):
            raise DomainError(f"alpha must lie in (0, {ALPHA_MAX:g}], got {self.alpha!r}")
        if not (math.isfinite(b) and 0.0 < b <= BETA_MAX):
            raise DomainError(f"beta must lie in (0, {BETA_MAX:g}], got {self.beta!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)


@dataclass(frozen=True)
class _RayTable:
    alpha: float
    beta: float
    a_re: np.ndarray
    a_im: np.ndarray
    b_re: np.ndarray
    b_im: np.ndarray
    asym: np.ndarray
    x_asym: float
    contour_residue: bool
    has_poles: bool


@lru_cache(maxsize=None)
def _series_coeffs(alpha: float, beta: float) -> np.ndarray:
    coeffs = []
    for n in range(_SERIES_CAP):
        c = rgamma(alpha * n + beta)
        coeffs.append(c)
        # stop once past the Gamma minimum and negligible
        if alpha * n + beta > 3.0 and abs(c) < _SERIES_TOL:
            break
    return np.array(coeffs)


@lru_cache(maxsize=None)
def _ray_table(alpha: float, beta: float) -> _RayTable:
    pa = math.pi / alpha
    if alpha <= 1.0:
        phi, residue = 0.75 * math.pi, False
    elif pa - 0.5 * math.pi >= math.pi - pa:
        phi, residue = 0.5 * (0.5 * math.pi + pa), False
    else:
        phi, residue = 0.5 * (pa + math.pi), True

    h = _NODE_STEP
    u = np.arange(_NODE_RANGE[0], _NODE_RANGE[1], h)
    r = np.exp(u - np.exp(-u))
    dr = r * (1.0 + np.exp(-u))
    eph = np.exp(1j * phi)
    with np.errstate(all="ignore"):
        b = (h / math.pi) * dr * eph * np.exp(r * eph) * r ** (alpha - beta) \
            * np.exp(1j * phi * (alpha - beta))
        a = r ** alpha * np.exp(1j * alpha * phi)
    keep = np.isfinite(b) & (np.abs(b) > _NODE_TOL) & np.isfinite(a)
    a, b = a[keep], b[keep]

    k = np.arange(1, _ASYM_TERMS + 2)
    coef = np.array([rgamma(beta - alpha * kk) for kk in k])
    # switch to the expansion once its truncation error is below ~1e-17
    x_alg = max((abs(coef[j]) / 1e-17) ** (1.0 / k[j]) for j in range(_ASYM_TERMS - 2, _ASYM_TERMS + 1))
    x_asym = max(x_alg, 40.0 ** alpha)
    return _RayTable(
        alpha=alpha, beta=beta,
        a_re=np.ascontiguousarray(a.real), a_im=np.ascontiguousarray(a.imag),
        b_re=np.ascontiguousarray(b.real), b_im=np.ascontiguousarray(b.imag),
        asym=np.ascontiguousarray(coef[:_ASYM_TERMS]), x_asym=float(x_asym),
        contour_residue=residue, has_poles=alpha > 1.0,
    )


def _reduction(alpha: float, beta: float):
    """Lower ``beta`` into (0, alpha]; return it with the dropped 1/Gamma values."""
    shifts = []
    while beta > alpha:
        beta -= alpha
        shifts.append(rgamma(beta))
    return beta, shifts


def _neg_large(alpha: float, beta: float, x: np.ndarray, backend=None) -> np.ndarray:
    b0, shifts = _reduction(alpha, beta)
    vals = kernels.ml_large(x, _ray_table(alpha, b0), backend=backend)
    # climb back: E_{a,b+a}(-x) = (1/Gamma(b) - E_{a,b}(-x)) / x
    for g in reversed(shifts):
        vals = (g - vals) / x
    return vals


def _pos_large(alpha: float, beta: float, z: float) -> float:
    # terms z**n / Gamma(a n + b) in log form; all positive since b > 0
    lz = math.log(z)
    logs = []
    peak = -math.inf
    for n in range(_SERIES_CAP):
        lt = n * lz - math.lgamma(alpha * n + beta)
        logs.append(lt)
        peak = max(peak, lt)
        if n > 0 and lt < logs[-2] and lt < peak + math.log(_SERIES_TOL):
            break
    else:
        raise EvaluationError("Mittag-Leffler series did not converge", alpha=alpha, beta=beta, z=z)
    if peak > 709.0:
        return math.inf
    return math.fsum(math.exp(v) for v in logs)


def mlf_array(alpha: float, beta: float, z, backend=None) -> np.ndarray:
    """Vectorized ``E_{alpha,beta}(z)`` for real ``z`` (any array shape)."""
    params = MlfParams(alpha, beta)
    alpha, beta = params.alpha, params.beta
    z = np.asarray(z, dtype=float)
    flat = z.ravel()
    if not np.all(np.isfinite(flat)):
        raise DomainError("Mittag-Leffler argument must be finite")
    out = np.empty_like(flat)
    small = np.abs(flat) <= 1.0
    if small.any():
        out[small] = kernels.series_horner(flat[small], _series_coeffs(alpha, beta), backend=backend)
    neg = flat < -1.0
    if neg.any():
        out[neg] = _neg_large(alpha, beta, -flat[neg], backend=backend)
    pos = np.flatnonzero(flat > 1.0)
    for i in pos:
        out[i] = _pos_large(alpha, beta, float(flat[i]))
    return out.reshape(z.shape)


def mlf_neg(alpha: float, beta: float, x, backend=None) -> np.ndarray:
    """``E_{alpha,beta}(-x)`` for ``x >= 0``; the fast path of the operator layer."""
    return mlf_array(alpha, beta, -np.asarray(x, dtype=float), backend=backend)


def mlf(params: MlfParams, z: float) -> float:
    """Scalar ``E_{alpha,beta}(z)``.

    Examples
    --------
    >>> round(mlf(MlfParams(1.0, 1.0), 1.0), 12)
    2.718281828459
    """
    return float(mlf_array(params.alpha, params.beta, np.array([float(z)]))[0])


def _envelope(alpha, beta, p, x):
    x = np.asarray(x, dtype=float)
    return x ** p * np.abs(mlf_neg(alpha, beta, x))


def mlf_envelope_sup(params: MlfParams, p: float) -> float:
    """``sup_{x >= 0} x**p |E_{alpha,beta}(-x)|`` for ``p`` in [0, 1].

    A logarithmic grid on [1e-8, 1e10] locates the maximum, Brent's method
    refines it in ``log x``, and the limits at 0 and infinity are included.
    """
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"envelope exponent p must lie in [0, 1], got {p!r}")
    a, b = params.alpha, params.beta
    logs = np.linspace(math.log(1e-8), math.log(1e10), 4001)
    vals = _envelope(a, b, p, np.exp(logs))
    best = float(vals.max())
    # refine around the few largest local maxima
    interior = np.flatnonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    order = interior[np.argsort(vals[interior])[::-1][:4]]
    for i in order:
        res = optimize.minimize_scalar(
            lambda s: -_envelope(a, b, p, [math.exp(s)])[0],
            bounds=(logs[i - 1], logs[i + 1]), method="bounded",
            options={"xatol": 1e-13},
        )
        best = max(best, -float(res.fun))
    if p == 0.0:
        best = max(best, abs(rgamma(b)))
    if p == 1.0:
        best = max(best, abs(rgamma(b - a)))
    return best
