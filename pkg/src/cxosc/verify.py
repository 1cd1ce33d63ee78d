"""Self-check suites: each returns measured values against pinned tolerances.

These are the checks behind ``cxosc verify``.  Defaults use the documented
reference parameter set (a = pi/4, b = sqrt(pi)/2, c = 1) with the matching
imaginary strength, where the eigenstate formulas are exact and every check
must sit at its discretization floor.
"""

import math

import numpy as np

from .eigenstates import (WaveField, build_basis, default_grid, gram_matrix,
                          oscillator_state)
from .potential import PotentialParams, consistent_lambda, potential_value
from .states import (BinomialSpec, CoefficientVector, binomial_coefficients,
                     continuity_residuals, density_current_frame, evolve,
                     spatial_derivative, synthesize)
from .wigner import default_phase_grid, wigner_by_closed_form, wigner_by_quadrature

__all__ = ["reference_params", "run_suites", "SUITES"]


def reference_params(lam=None):
    """The documented reference parameter set; ``lam`` defaults to the
    exactly solvable value for (a, b, c)."""
    a, b, c = math.pi / 4.0, math.sqrt(math.pi) / 2.0, 1.0
    if lam is None:
        lam = consistent_lambda(a, b, c)
    return PotentialParams(a=a, b=b, c=c, lam=lam)


def _entry(name, measured, tolerance):
    return {"name": name, "measured": float(measured),
            "tolerance": float(tolerance),
            "passed": bool(measured < tolerance)}


def check_gram(params=None, n_top=12, grid=None):
    """max |Gram - I| over the built basis."""
    params = params or reference_params()
    basis = build_basis(params, n_top, grid)
    deviation = np.max(np.abs(gram_matrix(basis) - np.eye(basis.size)))
    return [_entry("gram_identity", deviation, 1e-6)]


def check_binorm(params=None, grid=None):
    """Bi-norm invariance under evolution, in coefficient space and by quadrature."""
    params = params or reference_params()
    spec = BinomialSpec(n=30, p=0.1, r=2)
    coeffs = binomial_coefficients(spec)
    basis = build_basis(params, spec.n + spec.r, grid)
    worst_coeff, worst_quad = 0.0, 0.0
    for t in (0.1, 0.5, 1.0, 2.0, 5.0):
        evolved = evolve(coeffs, t)
        worst_coeff = max(worst_coeff, abs(evolved.binorm - 1.0))
        phi, phi_dual = synthesize(evolved, basis)
        quad = np.sum(basis.grid.weights * np.conj(phi_dual.values) * phi.values)
        worst_quad = max(worst_quad, abs(quad - 1.0))
    return [_entry("binorm_coefficient", worst_coeff, 1e-12),
            _entry("binorm_quadrature", worst_quad, 1e-6)]


def check_continuity(params=None, grid=None):
    """Bi-orthogonal and conventional continuity balances, relative to the
    peak current divergence."""
    params = params or reference_params()
    spec = BinomialSpec(n=30, p=0.1, r=2)
    coeffs = binomial_coefficients(spec)
    basis = build_basis(params, spec.n + spec.r, grid)
    t = 0.4
    residual_b, residual = continuity_residuals(coeffs, basis, t, dt=1e-4)
    frame = density_current_frame(coeffs, basis, t)
    scale = np.max(np.abs(spatial_derivative(frame.current_b, basis.grid.step)))
    return [_entry("continuity_biorthogonal", np.max(residual_b) / scale, 1e-2),
            _entry("continuity_conventional", np.max(residual) / scale, 1e-2)]


def check_wigner_dual(seed=20240915, trials=5):
    """Uniform gap between the quadrature and closed-form Wigner routes."""
    rng = np.random.default_rng(seed)
    sgrid = default_grid(8)
    worst = 0.0
    for _ in range(trials):
        r = int(rng.integers(0, 4))
        raw = rng.normal(size=5) + 1j * rng.normal(size=5)
        raw /= np.linalg.norm(raw)
        coeffs = CoefficientVector(offset=r, coefficients=raw)
        fock = np.zeros(r + 5, dtype=complex)
        fock[r:] = raw
        table = np.array([oscillator_state(k, sgrid).values
                          for k in range(fock.size)])
        wave = WaveField(sgrid, fock @ table)
        pgrid = default_phase_grid(2 * (fock.size - 1) + 1, sgrid,
                                   x_count=101, p_count=101)
        quad = wigner_by_quadrature(wave, pgrid)
        closed = wigner_by_closed_form(coeffs, pgrid)
        worst = max(worst, float(np.max(np.abs(quad.values - closed.values))))
    return [_entry("wigner_dual_path", worst, 1e-6)]


def check_oscillator_limit(grid=None):
    """Recovery of the oscillator: overlaps and the bare parabola."""
    params = PotentialParams(a=0.0, b=0.0, c=1.0, lam=0.0)
    basis = build_basis(params, 11, grid)
    worst = 0.0
    for n in range(11):
        phi = oscillator_state(n + 1, basis.grid)
        overlap = np.sum(basis.grid.weights * phi.values
                         * basis.states[n + 1].values)
        worst = max(worst, abs(abs(overlap) - 1.0))
    potential_gap = np.max(np.abs(potential_value(params, basis.grid.nodes)
                                  - (basis.grid.nodes ** 2 - 2.0)))
    return [_entry("oscillator_limit_overlap", worst, 1e-8),
            _entry("oscillator_limit_potential", potential_gap, 1e-13)]


SUITES = {
    "gram": check_gram,
    "binorm": check_binorm,
    "continuity": check_continuity,
    "wigner-dual": check_wigner_dual,
    "oscillator-limit": check_oscillator_limit,
}


def run_suites(names=None, params=None, grid=None):
    """Run the named suites (all by default) and collect their reports."""
    if names is None:
        names = list(SUITES)
    checks = []
    for name in names:
        suite = SUITES[name]
        if name in ("wigner-dual",):
            checks.extend(suite())
        elif name == "oscillator-limit":
            checks.extend(suite(grid=grid))
        else:
            checks.extend(suite(params=params, grid=grid))
    return {"checks": checks, "all_passed": all(c["passed"] for c in checks)}
