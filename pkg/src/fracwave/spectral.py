"""Dirichlet Laplacian eigen-calculus on intervals and rectangles.

Fields are stored as coefficients on the sine basis
``phi_k(x) = prod_i sin(k_i pi x_i / L_i)`` with eigenvalues
``lambda_k = sum_i (k_i pi / L_i)**2``. Grid samples live on the open uniform
grid ``x_j = j L / (n + 1)``, ``j = 1..n``, and are related to coefficients by
the type-I discrete sine transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import fft

from .errors import DomainError, ShapeError
from .kernels import thread_count


def _tuple(value, dim, cast):
    if np.ndim(value) == 0:
        return (cast(value),) * dim
    out = tuple(cast(v) for v in value)
    if len(out) != dim:
        raise ShapeError(f"expected {dim} per-axis values, got {len(out)}")
    return out


@dataclass(frozen=True)
class DomainSpec:
    """A box ``prod_i (0, L_i)`` with a sine-mode truncation and sampling grid.

    Parameters
    ----------
    dim : int
        Spatial dimension, 1 or 2.
    lengths : sequence of float
        Side lengths ``L_i > 0``.
    modes : sequence of int
        Retained modes ``K_i >= 1`` per axis.
    grid_points : sequence of int, optional
        Interior grid points per axis, at least ``2 K_i``. Defaults to
        ``max(2 K_i, 256)``.
    """

    dim: int
    lengths: tuple
    modes: tuple
    grid_points: tuple = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DomainError(f"dim must be 1 or 2, got {self.dim!r}")
        lengths = _tuple(self.lengths, self.dim, float)
        modes = _tuple(self.modes, self.dim, int)
        if self.grid_points is None:
            grid = tuple(max(2 * k, 256) for k in modes)
        else:
            grid = _tuple(self.grid_points, self.dim, int)
        if any(not (math.isfinite(L) and L > 0.0) for L in lengths):
            raise DomainError(f"lengths must be positive, got {lengths}")
        if any(k < 1 for k in modes):
            raise DomainError(f"modes must be >= 1, got {modes}")
        if any(n < 2 * k for n, k in zip(grid, modes)):
            raise DomainError(f"grid_points {grid} must be at least twice modes {modes}")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "grid_points", grid)

    @classmethod
    def interval(cls, length=1.0, modes=32, grid_points=None):
        return cls(1, (length,), (modes,), None if grid_points is None else (grid_points,))

    @classmethod
    def box(cls, lengths=(1.0, 1.0), modes=(16, 16), grid_points=None):
        return cls(2, lengths, modes, grid_points)

    @property
    def n_modes(self) -> int:
        return int(np.prod(self.modes))

    @property
    def spacing(self) -> tuple:
        return tuple(L / (n + 1) for L, n in zip(self.lengths, self.grid_points))

    @property
    def norm_factor(self) -> float:
        """``||phi_k||_{L^2}^2 = prod_i L_i / 2``."""
        return float(np.prod([L / 2.0 for L in self.lengths]))

    def axes(self, grid_points=None):
        grid = self.grid_points if grid_points is None else grid_points
        return [np.arange(1, n + 1) * (L / (n + 1)) for L, n in zip(self.lengths, grid)]

    def with_modes(self, modes, grid_points=None):
        return DomainSpec(self.dim, self.lengths, modes, grid_points)


@dataclass(frozen=True)
class FractionalIndex:
    """Index ``(gamma, q)`` of the scale space ``X^gamma_q``."""

    gamma: float
    q: float = 2.0

    def __post_init__(self):
        if not (self.q > 1.0 and math.isfinite(self.q)):
            raise DomainError(f"q must lie in (1, inf), got {self.q!r}")


_EIG_CACHE: dict = {}


def eigenvalues(domain: DomainSpec) -> np.ndarray:
    """Dirichlet eigenvalues with the shape of ``domain.modes`` (read-only)."""
    key = (domain.lengths, domain.modes)
    lam = _EIG_CACHE.get(key)
    if lam is None:
        parts = [(np.arange(1, k + 1) * math.pi / L) ** 2 for k, L in zip(domain.modes, domain.lengths)]
        lam = parts[0] if domain.dim == 1 else parts[0][:, None] + parts[1][None, :]
        lam = np.ascontiguousarray(lam, dtype=float)
        lam.flags.writeable = False
        _EIG_CACHE[key] = lam
    return lam


def synthesize(coeffs: np.ndarray, grid_points: Sequence[int]) -> np.ndarray:
    """Grid samples of ``sum_k c_k phi_k`` on an open grid of the given size."""
    coeffs = np.asarray(coeffs, dtype=float)
    shape = tuple(int(n) for n in grid_points)
    out = fft.dstn(coeffs, type=1, s=shape, workers=thread_count())
    return out / 2.0 ** coeffs.ndim


def analyze(samples: np.ndarray, modes: Sequence[int]) -> np.ndarray:
    """Sine coefficients of grid samples, truncated to ``modes``."""
    samples = np.asarray(samples, dtype=float)
    c = fft.dstn(samples, type=1, workers=thread_count())
    c /= float(np.prod([n + 1 for n in samples.shape]))
    return c[tuple(slice(0, int(k)) for k in modes)]


class SpectralField:
    """Immutable state on a :class:`DomainSpec`, held by its sine coefficients."""

    def __init__(self, domain: DomainSpec, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.size != domain.n_modes:
            raise ShapeError(f"{c.size} coefficients for a domain with {domain.n_modes} modes")
        c = c.reshape(domain.modes)
        c.flags.writeable = False
        self.domain = domain
        self.coeffs = c

    @classmethod
    def zeros(cls, domain: DomainSpec) -> "SpectralField":
        return cls(domain, np.zeros(domain.modes))

    @classmethod
    def mode(cls, domain: DomainSpec, k, amplitude=1.0) -> "SpectralField":
        """Single eigenmode ``amplitude * phi_k`` with 1-based multi-index ``k``."""
        c = np.zeros(domain.modes)
        idx = tuple(int(i) - 1 for i in np.atleast_1d(k))
        if len(idx) != domain.dim or any(not 0 <= i < n for i, n in zip(idx, domain.modes)):
            raise DomainError(f"mode index {k!r} outside the retained modes {domain.modes}")
        c[idx] = amplitude
        return cls(domain, c)

    @classmethod
    def from_function(cls, domain: DomainSpec, func) -> "SpectralField":
        axes = domain.axes()
        pts = np.meshgrid(*axes, indexing="ij")
        return to_spectral(np.asarray(func(*pts), dtype=float), domain)

    @cached_property
    def grid(self) -> np.ndarray:
        g = synthesize(self.coeffs, self.domain.grid_points)
        g.flags.writeable = False
        return g

    def _check(self, other):
        if other.domain != self.domain:
            raise ShapeError("fields live on different domains")

    def __add__(self, other):
        self._check(other)
        return SpectralField(self.domain, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return SpectralField(self.domain, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return SpectralField(self.domain, float(scalar) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralField(self.domain, -self.coeffs)

    def __repr__(self):
        return f"SpectralField(modes={self.domain.modes}, lengths={self.domain.lengths})"


def to_grid(field: SpectralField) -> np.ndarray:
    """Samples of ``field`` on its domain grid."""
    return field.grid


def to_spectral(samples, domain: DomainSpec) -> SpectralField:
    """Project grid samples onto the retained sine modes."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != domain.grid_points:
        raise ShapeError(f"samples of shape {samples.shape} do not match grid {domain.grid_points}")
    return SpectralField(domain, analyze(samples, domain.modes))


def frac_power_apply(field: SpectralField, sigma: float) -> SpectralField:
    """Apply ``L**sigma``, the multiplier ``lambda_k**sigma``."""
    if sigma == 0.0:
        return field
    return SpectralField(field.domain, eigenvalues(field.domain) ** sigma * field.coeffs)


def lq_norm(samples: np.ndarray, domain: DomainSpec, q: float) -> float:
    """Trapezoidal ``L^q`` norm of samples vanishing on the boundary."""
    h = float(np.prod(domain.spacing))
    return float((h * np.sum(np.abs(samples) ** q)) ** (1.0 / q))


def x_norm(field: SpectralField, index: FractionalIndex) -> float:
    """``||u||_{X^gamma_q} = ||L^(gamma-1) u||_{L^q}``.

    Exact Parseval sum for ``q = 2``, trapezoid rule on the grid otherwise.
    """
    if not isinstance(index, FractionalIndex):
        index = FractionalIndex(*index)
    weighted = eigenvalues(field.domain) ** (index.gamma - 1.0) * field.coeffs
    if index.q == 2.0:
        return float(math.sqrt(field.domain.norm_factor * np.sum(weighted * weighted)))
    samples = synthesize(weighted, field.domain.grid_points)
    return lq_norm(samples, field.domain, index.q)


def x2_norms(coeffs: np.ndarray, domain: DomainSpec, gamma: float) -> np.ndarray:
    """Batched ``X^gamma_2`` norms of coefficient arrays stacked on axis 0."""
    w = eigenvalues(domain) ** (gamma - 1.0)
    c = np.asarray(coeffs).reshape((-1,) + domain.modes) * w
    return np.sqrt(domain.norm_factor * np.sum((c * c).reshape(c.shape[0], -1), axis=1))


def embedding_exponent(beta: float, q: float, N: int) -> float:
    """Largest ``r`` with ``X^beta_q`` embedded in ``L^r``.

    Returns ``N q / (N + 2q - 2 beta q)`` or ``math.inf`` (unbounded) once
    ``beta >= 1 + N / (2q)``.
    """
    if beta < 1.0:
        raise DomainError(f"embedding_exponent needs beta >= 1, got {beta!r}")
    if not q > 1.0:
        raise DomainError(f"q must exceed 1, got {q!r}")
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    denom = N + 2.0 * q - 2.0 * beta * q
    if denom <= 0.0:
        return math.inf
    return N * q / denom


def random_field(domain: DomainSpec, rng: np.random.Generator, decay: float = 2.0,
                 amplitude: float = 1.0) -> SpectralField:
    """Seeded band-limited field with coefficients ``~ N(0,1) / |k|**decay``."""
    grids = np.meshgrid(*[np.arange(1, k + 1) for k in domain.modes], indexing="ij")
    kk = np.sqrt(sum(g.astype(float) ** 2 for g in grids))
    return SpectralField(domain, amplitude * rng.standard_normal(domain.modes) / kk ** decay)
