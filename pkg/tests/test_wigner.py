import math

import numpy as np
import pytest

from cxosc.eigenstates import WaveField, default_grid, oscillator_state
from cxosc.errors import GridAlignmentError, NormalizationError
from cxosc.states import CoefficientVector, PoissonSpec, poisson_coefficients
from cxosc.wigner import (PhaseSpaceGrid, classicality_report,
                          default_phase_grid, marginals, pacs_fidelity,
                          wigner_by_closed_form, wigner_by_quadrature)

INV_PI = 1.0 / math.pi


def fock_vector(k, r=0):
    c = np.zeros(k + 1, dtype=complex)
    c[k] = 1.0
    return CoefficientVector(offset=r, coefficients=c)


def sample_fock_field(coeffs, grid):
    """Synthesize sum_k c_k phi_{k+r} directly in the number basis."""
    top = coeffs.offset + coeffs.size - 1
    table = np.array([oscillator_state(k, grid).values for k in range(top + 1)])
    full = np.zeros(top + 1, dtype=complex)
    full[coeffs.offset:] = coeffs.coefficients
    return WaveField(grid, full @ table)


class TestPhaseSpaceGrid:
    def test_minimum_counts(self):
        with pytest.raises(ValueError):
            PhaseSpaceGrid.regular(5.0, 5.0, 16, 64)

    def test_aligned_nodes_subset(self):
        sgrid = default_grid(4)
        pgrid = PhaseSpaceGrid.aligned(sgrid, 6.0, 6.0, x_count=61, p_count=65)
        positions = (pgrid.x_nodes + sgrid.extent) / sgrid.step
        assert np.max(np.abs(positions - np.round(positions))) < 1e-9

    def test_window_guard(self):
        sgrid = default_grid(0)
        with pytest.raises(GridAlignmentError):
            PhaseSpaceGrid.aligned(sgrid, 50.0, 5.0, x_count=4001, p_count=65)

    def test_cell_area(self):
        grid = PhaseSpaceGrid.regular(2.0, 1.0, 41, 41)
        assert grid.cell_area == pytest.approx(0.1 * 0.05, rel=1e-12)


class TestClosedFormKnownFields:
    def test_gaussian_ground_state(self):
        grid = PhaseSpaceGrid.regular(4.0, 4.0, 81, 81)
        field = wigner_by_closed_form(fock_vector(0), grid)
        xx, pp = np.meshgrid(grid.x_nodes, grid.p_nodes, indexing="ij")
        expected = INV_PI * np.exp(-xx ** 2 - pp ** 2)
        assert np.max(np.abs(field.values - expected)) < 1e-12

    def test_first_excited_origin(self):
        grid = PhaseSpaceGrid.regular(4.0, 4.0, 81, 81)
        field = wigner_by_closed_form(fock_vector(1), grid)
        center = field.values[40, 40]
        assert center == pytest.approx(-INV_PI, abs=1e-12)

    def test_offset_matches_shifted_vector(self):
        grid = PhaseSpaceGrid.regular(5.0, 5.0, 65, 65)
        direct = wigner_by_closed_form(fock_vector(3), grid)
        offset = wigner_by_closed_form(fock_vector(0, r=3), grid)
        assert np.max(np.abs(direct.values - offset.values)) < 1e-14

    def test_diagonal_mixture_linearity(self):
        grid = PhaseSpaceGrid.regular(5.0, 5.0, 65, 65)
        weights = np.array([0.6, 0.8])
        summed = sum(w ** 2 * wigner_by_closed_form(fock_vector(k), grid).values
                     for k, w in enumerate(weights))
        # zeroing the cross terms of a superposition leaves the diagonal mixture
        cross = wigner_by_closed_form(
            CoefficientVector(offset=0, coefficients=weights.astype(complex)), grid)
        interference = cross.values - summed
        assert np.max(np.abs(interference)) > 1e-3  # cross terms are real content
        mass = np.sum(interference) * grid.cell_area
        assert abs(mass) < 1e-6  # but carry no net volume


class TestDualPath:
    def test_seeded_random_packets(self):
        rng = np.random.default_rng(20240915)
        sgrid = default_grid(8)
        worst = 0.0
        for _ in range(5):
            r = int(rng.integers(0, 4))
            raw = rng.normal(size=5) + 1j * rng.normal(size=5)
            raw /= np.linalg.norm(raw)
            coeffs = CoefficientVector(offset=r, coefficients=raw)
            wave = sample_fock_field(coeffs, sgrid)
            pgrid = default_phase_grid(2 * (r + 4) + 1, sgrid,
                                       x_count=101, p_count=101)
            quad = wigner_by_quadrature(wave, pgrid)
            closed = wigner_by_closed_form(coeffs, pgrid)
            worst = max(worst, float(np.max(np.abs(quad.values - closed.values))))
        assert worst < 1e-6

    def test_quadrature_residue_and_bound(self):
        sgrid = default_grid(5)
        coeffs = CoefficientVector(
            offset=0, coefficients=np.array([0.5, 0.5j, -0.5, 0.5, 0.0]))
        wave = sample_fock_field(coeffs, sgrid)
        pgrid = default_phase_grid(11, sgrid, x_count=65, p_count=65)
        field = wigner_by_quadrature(wave, pgrid)
        assert field.metadata["max_imag_residue"] < 1e-10
        assert np.max(np.abs(field.values)) <= INV_PI + 1e-6

    def test_unnormalized_rejected(self):
        sgrid = default_grid(2)
        wave = WaveField(sgrid, 2.0 * oscillator_state(0, sgrid).values)
        pgrid = default_phase_grid(5, sgrid, x_count=65, p_count=65)
        with pytest.raises(NormalizationError):
            wigner_by_quadrature(wave, pgrid)

    def test_misaligned_grid_rejected(self):
        sgrid = default_grid(2)
        wave = WaveField(sgrid, oscillator_state(0, sgrid).values)
        pgrid = PhaseSpaceGrid.regular(5.003, 5.0, 65, 65)
        with pytest.raises(GridAlignmentError):
            wigner_by_quadrature(wave, pgrid)

    def test_worker_count_invariance(self):
        sgrid = default_grid(4)
        coeffs = CoefficientVector(offset=1,
                                   coefficients=np.array([0.6, 0.0, 0.8j]))
        wave = sample_fock_field(coeffs, sgrid)
        pgrid = default_phase_grid(9, sgrid, x_count=65, p_count=65)
        serial = wigner_by_quadrature(wave, pgrid, workers=1)
        threaded = wigner_by_quadrature(wave, pgrid, workers=4)
        assert np.array_equal(serial.values, threaded.values)
        closed_serial = wigner_by_closed_form(coeffs, pgrid, workers=1)
        closed_threaded = wigner_by_closed_form(coeffs, pgrid, workers=3)
        assert np.array_equal(closed_serial.values, closed_threaded.values)


class TestDiagnostics:
    def test_classicality_of_ground_state(self):
        grid = PhaseSpaceGrid.regular(5.0, 5.0, 101, 101)
        report = classicality_report(wigner_by_closed_form(fock_vector(0), grid))
        assert report.min_value >= -1e-6
        assert report.negative_volume < 1e-9

    def test_classicality_of_first_excited(self):
        grid = PhaseSpaceGrid.regular(5.0, 5.0, 101, 101)
        report = classicality_report(wigner_by_closed_form(fock_vector(1), grid))
        assert report.min_value == pytest.approx(-INV_PI, abs=1e-9)
        assert report.min_location == (0.0, 0.0)
        assert report.negative_volume > 0.05

    def test_marginals_of_ground_state(self):
        grid = PhaseSpaceGrid.regular(6.0, 6.0, 121, 121)
        position, momentum = marginals(wigner_by_closed_form(fock_vector(0), grid))
        expected = np.exp(-grid.x_nodes ** 2) / math.sqrt(math.pi)
        assert np.max(np.abs(position - expected)) < 1e-4
        dx = grid.x_nodes[1] - grid.x_nodes[0]
        assert abs(np.sum(position) * dx - 1.0) < 1e-3
        assert abs(np.sum(momentum) * dx - 1.0) < 1e-3

    def test_marginal_against_sampled_density(self):
        sgrid = default_grid(6)
        coeffs = CoefficientVector(
            offset=2, coefficients=np.array([0.5, -0.5, 0.5, 0.5]))
        wave = sample_fock_field(coeffs, sgrid)
        pgrid = default_phase_grid(13, sgrid, x_count=101, p_count=101)
        field = wigner_by_closed_form(coeffs, pgrid)
        position, _ = marginals(field)
        indices = np.round((pgrid.x_nodes + sgrid.extent) / sgrid.step).astype(int)
        density = np.abs(wave.values[indices]) ** 2
        assert np.max(np.abs(position - density)) < 1e-4

    def test_quantum_packet_at_high_success_probability(self):
        from cxosc.states import BinomialSpec, binomial_coefficients
        coeffs = binomial_coefficients(BinomialSpec(n=30, p=0.9, r=0))
        grid = default_phase_grid(61, x_count=201, p_count=201)
        report = classicality_report(wigner_by_closed_form(coeffs, grid))
        assert report.min_value < -0.01

    def test_poisson_squeezing_with_photon_addition(self):
        variances, reports = [], []
        for r in range(4):
            spec = PoissonSpec(z=3.0, r=r)
            coeffs = poisson_coefficients(spec)
            grid = default_phase_grid(2 * (spec.truncation + r) + 1,
                                      x_count=161, p_count=161)
            field = wigner_by_closed_form(coeffs, grid)
            position, _ = marginals(field)
            dx = grid.x_nodes[1] - grid.x_nodes[0]
            mass = np.sum(position) * dx
            mean = np.sum(grid.x_nodes * position) * dx / mass
            variances.append(np.sum((grid.x_nodes - mean) ** 2 * position)
                             * dx / mass)
            reports.append(classicality_report(field))
        # mainly nonnegative at large amplitude, squeezing grows with r
        assert all(rep.negative_volume < 0.01 for rep in reports)
        assert all(earlier > later for earlier, later
                   in zip(variances, variances[1:]))

    def test_pacs_fidelity_reference_points(self):
        assert pacs_fidelity(PoissonSpec(z=0.0, r=3)) == 1.0
        assert pacs_fidelity(PoissonSpec(z=0.6, r=0)) == pytest.approx(1.0, abs=1e-10)
        mid = pacs_fidelity(PoissonSpec(z=0.6, r=2))
        assert 0.5 < mid < 1.0
