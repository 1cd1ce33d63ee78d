"""Spatial grids, sampled wave fields, and the bi-orthogonal eigenbasis.

States come in two closed forms: the nodeless state

    psi_0(x) = kappa_0 / alpha(x) * exp(i lam F(x)),   F(x) = int_0^x alpha(y)^-2 dy,

with energy -1, and for n >= 0 the intertwined states

    psi_{n+1}(x) = [phi_n'(x) - (alpha'/alpha)(x) phi_n(x)
                    + i lam alpha(x)^-2 phi_n(x)] / sqrt(2(n+1)),

with energies 2(n+1) - 1, where phi_n are oscillator eigenfunctions.  All
derivatives are analytic: phi_n' comes from the ladder identity and the
envelope derivatives from closed-form expressions, so the fields inherit
quadrature-level accuracy.  Dual states are pointwise complex conjugates.

The bi-product used everywhere is the conjugation-free pairing
``int psi_m(x) psi_n(x) dx``; on the exactly solvable parameter manifold the
Gram matrix of a built basis is the identity to quadrature accuracy.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import NormalizationError, ResolutionError
from .potential import solvability_defect, validate
from .specfun import cumulative_integral, erf, simpson_weights

__all__ = [
    "SpatialGrid", "WaveField", "BasisSet", "default_grid", "oscillator_state",
    "ground_state", "excited_state", "build_basis", "gram_matrix", "bi_product",
]

DEFAULT_STEP = 0.01
MAX_BASIS_INDEX = 60


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid x_i = -extent + i*step, symmetric about 0, odd node count."""

    extent: float
    step: float

    def __post_init__(self):
        if self.step <= 0 or self.extent <= 0:
            raise ValueError("extent and step must be positive")
        half = self.extent / self.step
        if abs(half - round(half)) > 1e-9:
            raise ValueError("extent must be an integer multiple of step; "
                             "use SpatialGrid.make to snap it")
        if round(half) < 4:
            raise ValueError("grid too small for the composite Simpson rule")

    @classmethod
    def make(cls, extent, step=DEFAULT_STEP):
        """Grid with the extent snapped to the nearest multiple of ``step``."""
        half = max(4, round(extent / step))
        return cls(extent=half * step, step=step)

    @property
    def node_count(self):
        return 2 * round(self.extent / self.step) + 1

    @property
    def center_index(self):
        return self.node_count // 2

    @cached_property
    def nodes(self):
        return -self.extent + self.step * np.arange(self.node_count)

    @cached_property
    def weights(self):
        """Composite Simpson weights matching the nodes."""
        return simpson_weights(self.node_count, self.step)


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex amplitudes sampled on a spatial grid."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))
        if self.values.shape != (self.grid.node_count,):
            raise ValueError("amplitude count must equal the grid node count")

    def conj(self):
        return WaveField(self.grid, np.conj(self.values))


def default_grid(max_index, step=DEFAULT_STEP):
    """Grid sized for states up to ``max_index``: covers the classical turning
    points of energy 2*max_index + 1 plus ~8 units of Gaussian tail, clamped
    to extents [10, 40]."""
    energy = 2.0 * max_index + 1.0
    extent = min(max(math.sqrt(2.0 * energy) + 8.0, 10.0), 40.0)
    return SpatialGrid.make(extent, step)


def bi_product(bra, ket):
    """Bi-orthogonal pairing int conj(bra)(x) ket(x) dx on the common grid.

    Pass a dual field as ``bra`` to realize the conjugation-free products:
    for duals equal to conjugates this equals ``int bra* ket = int psi ket``.
    """
    if bra.grid != ket.grid:
        raise ValueError("fields live on different grids")
    return complex(np.sum(bra.grid.weights * np.conj(bra.values) * ket.values))


def _check_resolution(n, grid):
    turning_point = math.sqrt(2.0 * n + 1.0)
    if turning_point > 0.8 * grid.extent:
        raise ResolutionError(
            f"state index {n} has turning point {turning_point:.2f} beyond "
            f"0.8 * extent = {0.8 * grid.extent:.2f}; enlarge the grid")


def oscillator_state(n, grid):
    """Oscillator eigenfunction phi_n sampled on the grid."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    _check_resolution(n, grid)
    table = _kernels.hermite_table(grid.nodes, n)
    return WaveField(grid, table[n].astype(complex))


class _EnvelopeData:
    """Closed-form envelope quantities sampled once per (params, grid)."""

    def __init__(self, params, grid):
        x = grid.nodes
        e = erf(x)
        e_prime = 2.0 / math.sqrt(math.pi) * np.exp(-x * x)
        self.g = params.a * e * e + params.b * e + params.c
        self.g_prime = (2.0 * params.a * e + params.b) * e_prime
        self.g_second = 2.0 * params.a * e_prime * e_prime - 2.0 * x * self.g_prime
        self.beta = x + self.g_prime / (2.0 * self.g)                # alpha'/alpha
        self.beta_prime = 1.0 + (self.g_second * self.g - self.g_prime ** 2) \
            / (2.0 * self.g * self.g)
        self.inv_alpha_sq = np.exp(-x * x) / self.g                  # alpha^-2
        self.inv_alpha_sq_prime = -self.inv_alpha_sq * (2.0 * x + self.g_prime / self.g)
        self.inv_alpha = np.exp(-0.5 * x * x) / np.sqrt(self.g)      # alpha^-1
        self.phase = cumulative_integral(self.inv_alpha_sq, grid.step)  # F(x)


def _ground_pair(params, grid, env):
    """(psi_0, psi_0') with the principal-root normalization convention."""
    lam = params.lam
    phase_factor = np.exp(1j * lam * env.phase)
    binorm_integrand = env.inv_alpha_sq * phase_factor ** 2
    integral = complex(np.sum(grid.weights * binorm_integrand))
    if abs(integral) < 1e-12:
        raise NormalizationError(
            "bi-norm integral of the nodeless state is degenerate "
            f"(|integral| = {abs(integral):.3e})")
    norm_const = 1.0 / np.sqrt(integral)  # principal root: arg in (-pi/2, pi/2]
    values = norm_const * env.inv_alpha * phase_factor
    derivative = values * (-env.beta + 1j * lam * env.inv_alpha_sq)
    return values, derivative


def _excited_pair(n, env, lam, phi, phi_deriv, x):
    """(psi_{n+1}, psi_{n+1}') from phi_n and its analytic derivative."""
    scale = 1.0 / math.sqrt(2.0 * (n + 1.0))
    op_factor = -env.beta + 1j * lam * env.inv_alpha_sq
    values = scale * (phi_deriv + op_factor * phi)
    # phi_n'' from the oscillator equation: phi'' = (x^2 - (2n+1)) phi
    phi_second = (x * x - (2.0 * n + 1.0)) * phi
    op_factor_prime = -env.beta_prime + 1j * lam * env.inv_alpha_sq_prime
    derivative = scale * (phi_second + op_factor_prime * phi + op_factor * phi_deriv)
    return values, derivative


def ground_state(params, grid):
    """Nodeless eigenstate psi_0, bi-normalized so int psi_0(x)^2 dx = 1."""
    validate(params)
    env = _EnvelopeData(params, grid)
    values, _ = _ground_pair(params, grid, env)
    return WaveField(grid, values)


def excited_state(params, n, grid):
    """State psi_{n+1} obtained by intertwining the oscillator state phi_n."""
    validate(params)
    if n < 0:
        raise ValueError("n must be nonnegative")
    _check_resolution(n + 1, grid)
    env = _EnvelopeData(params, grid)
    x = grid.nodes
    table = _kernels.hermite_table(x, n + 1)
    phi = table[n]
    lower = math.sqrt(n / 2.0) * table[n - 1] if n >= 1 else 0.0
    phi_deriv = lower - math.sqrt((n + 1) / 2.0) * table[n + 1]
    values, _ = _excited_pair(n, env, params.lam, phi, phi_deriv, x)
    return WaveField(grid, values)


@dataclass(frozen=True, eq=False)
class BasisSet:
    """Eigenstates psi_0..psi_N with duals, energies and analytic derivatives.

    ``duals[n]`` is the pointwise conjugate of ``states[n]``; energies are
    exactly 2n - 1.  ``defect`` records the departure from the exactly
    solvable manifold (zero there); bi-orthonormality degrades smoothly as
    it grows.
    """

    params: object
    grid: SpatialGrid
    states: tuple
    duals: tuple
    energies: np.ndarray
    state_derivatives: tuple
    defect: float = field(default=0.0)

    @property
    def size(self):
        return len(self.states)


def build_basis(params, n_top, grid=None):
    """Build psi_0..psi_{n_top} (and duals) on ``grid``.

    ``grid`` defaults to :func:`default_grid` for the requested size.  Raises
    :class:`ResolutionError` when the top state's turning point does not fit;
    indices above 60 are rejected outright since the default extents stop
    growing there.
    """
    validate(params)
    if n_top < 0:
        raise ValueError("n_top must be nonnegative")
    if n_top > MAX_BASIS_INDEX:
        raise ResolutionError(f"basis index {n_top} exceeds the supported "
                              f"ceiling {MAX_BASIS_INDEX}")
    if grid is None:
        grid = default_grid(n_top)
    _check_resolution(n_top, grid)

    env = _EnvelopeData(params, grid)
    x = grid.nodes
    table = _kernels.hermite_table(x, n_top + 1) if n_top >= 1 else \
        _kernels.hermite_table(x, 1)

    states, derivs = [], []
    values, derivative = _ground_pair(params, grid, env)
    states.append(values)
    derivs.append(derivative)
    for n in range(n_top):
        phi = table[n]
        lower = math.sqrt(n / 2.0) * table[n - 1] if n >= 1 else 0.0
        phi_deriv = lower - math.sqrt((n + 1) / 2.0) * table[n + 1]
        values, derivative = _excited_pair(n, env, params.lam, phi, phi_deriv, x)
        states.append(values)
        derivs.append(derivative)

    state_fields = tuple(WaveField(grid, v) for v in states)
    dual_fields = tuple(WaveField(grid, np.conj(v)) for v in states)
    deriv_fields = tuple(WaveField(grid, v) for v in derivs)
    energies = 2.0 * np.arange(n_top + 1.0) - 1.0
    return BasisSet(params=params, grid=grid, states=state_fields,
                    duals=dual_fields, energies=energies,
                    state_derivatives=deriv_fields,
                    defect=solvability_defect(params))


def gram_matrix(basis):
    """Matrix of conjugation-free bi-products G[m, n] = int psi_m psi_n dx."""
    stacked = np.array([s.values for s in basis.states])
    weighted = stacked * basis.grid.weights
    return weighted @ stacked.T
