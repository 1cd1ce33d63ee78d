"""Wigner phase-space maps for oscillator-limit states, by two routes.

The transform convention (dimensionless units, hbar = 1) is

    W(x, p) = (1/pi) int phi*(x + y) phi(x - y) exp(2 i p y) dy.

Route one integrates that definition over the sampled field: the abscissae
are restricted to the field's own lattice so that x +- y lands exactly on
grid nodes and the cross products need no interpolation.  Route two sums the
closed-form cross-Wigner kernels of oscillator number states over a Fock
coefficient vector.  The two routes share no code path and serve as
independent cross-checks of each other.

Both produce real fields bounded by 1/pi in magnitude (pure states), whose
row/column sums reproduce the position and momentum marginals.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import ConsistencyError, GridAlignmentError, NormalizationError
from .specfun import log_gamma, simpson_weights

__all__ = [
    "PhaseSpaceGrid", "WignerField", "ClassicalityReport", "default_phase_grid",
    "wigner_by_quadrature", "wigner_by_closed_form", "classicality_report",
    "marginals", "pacs_fidelity",
]

MIN_PHASE_NODES = 32
_ROW_BLOCK = 8  # fixed row blocking => results independent of worker count


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    """Rectangular phase-space lattice given by explicit node arrays."""

    x_nodes: np.ndarray
    p_nodes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_nodes", np.asarray(self.x_nodes, dtype=float))
        object.__setattr__(self, "p_nodes", np.asarray(self.p_nodes, dtype=float))
        if self.x_count < MIN_PHASE_NODES or self.p_count < MIN_PHASE_NODES:
            raise ValueError(f"phase-space grids need at least "
                             f"{MIN_PHASE_NODES} nodes per axis")
        if self.x_extent <= 0 or self.p_extent <= 0:
            raise ValueError("phase-space extents must be positive")

    @classmethod
    def regular(cls, x_extent, p_extent, x_count=201, p_count=201):
        return cls(np.linspace(-x_extent, x_extent, x_count),
                   np.linspace(-p_extent, p_extent, p_count))

    @classmethod
    def aligned(cls, spatial_grid, x_extent, p_extent, x_count=201, p_count=201):
        """Grid whose x nodes are an exact subset of a spatial lattice.

        ``x_count`` must be odd; the realized x extent is the multiple of
        the snapped lattice stride nearest the request.
        """
        if x_count % 2 == 0:
            raise ValueError("aligned grids need an odd x_count")
        half = (x_count - 1) // 2
        stride = max(1, round(x_extent / (half * spatial_grid.step)))
        if stride * half > spatial_grid.center_index:
            raise GridAlignmentError("phase window exceeds the spatial grid")
        offsets = stride * np.arange(-half, half + 1)
        x_nodes = spatial_grid.nodes[spatial_grid.center_index + offsets]
        return cls(x_nodes, np.linspace(-p_extent, p_extent, p_count))

    @property
    def x_count(self):
        return self.x_nodes.size

    @property
    def p_count(self):
        return self.p_nodes.size

    @property
    def x_extent(self):
        return float(max(abs(self.x_nodes[0]), abs(self.x_nodes[-1])))

    @property
    def p_extent(self):
        return float(max(abs(self.p_nodes[0]), abs(self.p_nodes[-1])))

    @cached_property
    def cell_area(self):
        dx = (self.x_nodes[-1] - self.x_nodes[0]) / (self.x_count - 1)
        dp = (self.p_nodes[-1] - self.p_nodes[0]) / (self.p_count - 1)
        return float(dx * dp)


@dataclass(frozen=True, eq=False)
class WignerField:
    """Real phase-space map W(x_i, p_j) plus a description of its source."""

    grid: PhaseSpaceGrid
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (self.grid.x_count, self.grid.p_count):
            raise ValueError("value matrix must be (x_count, p_count)")


def default_phase_grid(max_energy, spatial_grid=None, x_count=201, p_count=201):
    """Window sqrt(2 * max_energy) + 3 per axis, aligned when a grid is given."""
    extent = math.sqrt(2.0 * max_energy) + 3.0
    if spatial_grid is None:
        return PhaseSpaceGrid.regular(extent, extent, x_count, p_count)
    return PhaseSpaceGrid.aligned(spatial_grid, extent, extent, x_count, p_count)


def _map_row_blocks(compute_block, n_rows, workers):
    """Assemble per-block results in index order.

    The block decomposition is fixed, so the assembled array is bitwise
    identical no matter how many workers execute the blocks.
    """
    blocks = [(start, min(start + _ROW_BLOCK, n_rows))
              for start in range(0, n_rows, _ROW_BLOCK)]
    if workers <= 1:
        parts = [compute_block(lo, hi) for lo, hi in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda span: compute_block(*span), blocks))
    return np.concatenate(parts, axis=0)


def wigner_by_quadrature(wave_field, grid, workers=1):
    """Wigner map by direct quadrature of the defining integral.

    Requires a normalized field (grid norm within 1e-6 of 1) and phase-space
    x nodes lying on the field's lattice.  The y integral runs over the full
    lattice with composite Simpson weights; products with either argument
    outside the sampled window are dropped (the field has decayed there).
    The discrete sum is Hermitian-symmetric, so the imaginary residue is pure
    roundoff; it is verified below 1e-8 and discarded.
    """
    sgrid = wave_field.grid
    f = wave_field.values
    norm = float(np.sum(sgrid.weights * np.abs(f) ** 2))
    if abs(norm - 1.0) > 1e-6:
        raise NormalizationError(f"field norm {norm:.8f} is not 1 within 1e-6")

    positions = (grid.x_nodes + sgrid.extent) / sgrid.step
    indices = np.round(positions).astype(int)
    if np.max(np.abs(positions - indices)) > 1e-6:
        raise GridAlignmentError(
            "phase-space x nodes must lie on the field lattice; "
            "build the grid with PhaseSpaceGrid.aligned")

    half = sgrid.center_index
    count = 2 * half + 1
    weights = simpson_weights(count, sgrid.step)
    offsets = np.arange(-half, half + 1)
    padded = np.zeros(f.size + 2 * count, dtype=complex)
    padded[count:count + f.size] = f

    kernel = np.exp(2j * np.outer(offsets * sgrid.step, grid.p_nodes))
    residues = []  # list.append is atomic, so threaded blocks may share it

    def compute_block(lo, hi):
        centers = indices[lo:hi, None] + count
        products = np.conj(padded[centers + offsets]) * padded[centers - offsets]
        transform = (products * weights) @ kernel
        residue = np.max(np.abs(transform.imag)) / math.pi if transform.size else 0.0
        if residue > 1e-8:
            raise ConsistencyError(f"imaginary residue {residue:.3e} exceeds 1e-8")
        residues.append(residue)
        return transform.real / math.pi

    values = _map_row_blocks(compute_block, grid.x_count, workers)
    return WignerField(grid=grid, values=values,
                       metadata={"method": "quadrature", "norm": norm,
                                 "max_imag_residue": max(residues)})


def wigner_by_closed_form(coeffs, grid, workers=1):
    """Wigner map of sum_k c_k phi_{k + r} from the Fock-state kernels.

    ``coeffs`` is a :class:`~cxosc.states.CoefficientVector` read in the
    oscillator's number basis (offset included).  Agrees with
    :func:`wigner_by_quadrature` uniformly to quadrature accuracy.
    """
    fock = np.zeros(coeffs.offset + coeffs.size, dtype=complex)
    fock[coeffs.offset:] = coeffs.coefficients

    def compute_block(lo, hi):
        return _kernels.fock_wigner(fock, grid.x_nodes[lo:hi], grid.p_nodes)

    values = _map_row_blocks(compute_block, grid.x_count, workers)
    return WignerField(grid=grid, values=values,
                       metadata={"method": "closed-form",
                                 "fock_cutoff": int(fock.size - 1)})


@dataclass(frozen=True)
class ClassicalityReport:
    """Negativity summary of a Wigner map."""

    min_value: float
    min_location: tuple
    negative_volume: float

    def as_dict(self):
        return {"min_value": self.min_value,
                "min_location": list(self.min_location),
                "negative_volume": self.negative_volume}


def classicality_report(wigner_field):
    """Minimum value and location, and the integrated negative part."""
    values = wigner_field.values
    flat_index = int(np.argmin(values))
    i, j = np.unravel_index(flat_index, values.shape)
    negative_volume = float(np.sum(np.maximum(0.0, -values))
                            * wigner_field.grid.cell_area)
    return ClassicalityReport(
        min_value=float(values[i, j]),
        min_location=(float(wigner_field.grid.x_nodes[i]),
                      float(wigner_field.grid.p_nodes[j])),
        negative_volume=negative_volume)


def marginals(wigner_field):
    """(position marginal int W dp, momentum marginal int W dx) by grid summation.

    Plain rectangle sums: the aliasing terms of a uniform sum over W sit at
    translates of the field far outside its support, so uniform weights are
    the accurate choice here.
    """
    grid = wigner_field.grid
    dx = (grid.x_nodes[-1] - grid.x_nodes[0]) / (grid.x_count - 1)
    dp = (grid.p_nodes[-1] - grid.p_nodes[0]) / (grid.p_count - 1)
    position = np.sum(wigner_field.values, axis=1) * dp
    momentum = np.sum(wigner_field.values, axis=0) * dx
    return position, momentum


def pacs_fidelity(poisson_spec):
    """Overlap probability of an offset Poisson packet with the matching
    photon-added coherent state.

    The reference state applies r raising operators to the coherent state of
    the same amplitude and renormalizes; the overlap is computed in the
    number basis at the packet's own truncation.  Diagnostic only.
    """
    r = poisson_spec.r
    z = complex(poisson_spec.z)
    k = np.arange(poisson_spec.truncation + 1)
    from .states import poisson_coefficients  # local import avoids a cycle
    packet = poisson_coefficients(poisson_spec).coefficients

    if abs(z) == 0.0:
        return 1.0  # both states collapse to the pure number state r
    # added-photon amplitudes: b_{k+r} ~ z^k sqrt((k+r)!) / k!, log-space
    log_mag = k * math.log(abs(z)) + 0.5 * log_gamma(k + r + 1.0) - log_gamma(k + 1.0)
    log_mag = log_mag - 0.5 * abs(z) ** 2
    reference = np.exp(log_mag) * np.exp(1j * k * np.angle(z))
    reference = reference / math.sqrt(float(np.sum(np.abs(reference) ** 2)))
    overlap = np.sum(np.conj(reference) * packet)
    return float(abs(overlap) ** 2)
