"""Numerics for a family of exactly solvable complex oscillator potentials.

Builds the bi-orthogonal eigenbasis on a grid, tailors binomial and Poisson
superpositions, evolves them spectrally, verifies the bi-orthogonal
continuity law, and computes Wigner phase-space maps of oscillator-limit
states by two independent routes.
"""

from ._kernels import active_backend
from .errors import (BasisSizeError, ConsistencyError, CxoscError,
                     GridAlignmentError, NormalizationError,
                     ParameterDomainError, ResolutionError,
                     UnsupportedRegimeError)
from .eigenstates import (BasisSet, SpatialGrid, WaveField, bi_product,
                          build_basis, default_grid, excited_state,
                          gram_matrix, ground_state, oscillator_state)
from .potential import (PotentialParams, alpha, alpha_log_derivative,
                        consistent_lambda, potential_value,
                        solvability_defect, validate)
from .specfun import (QuadratureRule, binomial_pmf, build_rule,
                      cumulative_integral, erf, integrate, log_gamma,
                      normalized_hermite_sequence, poisson_amplitude)
from .states import (BinomialSpec, CoefficientVector, DensityCurrentFrame,
                     PoissonSpec, binomial_coefficients, continuity_residuals,
                     density_current_frame, energy_expectation, evolve,
                     fourier_analyze, poisson_coefficients, spatial_derivative,
                     synthesize)
from .wigner import (ClassicalityReport, PhaseSpaceGrid, WignerField,
                     classicality_report, default_phase_grid, marginals,
                     pacs_fidelity, wigner_by_closed_form,
                     wigner_by_quadrature)

__version__ = "0.1.0"
