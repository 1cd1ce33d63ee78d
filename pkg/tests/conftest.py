import pytest

from cxosc import (BinomialSpec, PotentialParams, binomial_coefficients,
                   build_basis, default_phase_grid, wigner_by_closed_form)
from cxosc.verify import reference_params

# packet cells exercised by the classicality and marginal acceptance criteria
CLASSICALITY_CELLS = ((0.1, 0), (0.1, 1), (0.5, 0), (0.5, 1), (0.5, 2), (0.5, 3))


@pytest.fixture(scope="session")
def ref_params():
    """Reference parameter set on the exactly solvable manifold."""
    return reference_params()


@pytest.fixture(scope="session")
def oscillator_params():
    return PotentialParams(a=0.0, b=0.0, c=1.0, lam=0.0)


@pytest.fixture(scope="session")
def ref_basis_12(ref_params):
    return build_basis(ref_params, 12)


@pytest.fixture(scope="session")
def oscillator_basis_12(oscillator_params):
    return build_basis(oscillator_params, 12)


@pytest.fixture(scope="session")
def classicality_fields():
    """Oscillator-limit Wigner maps of the 31-state binomial packets used by
    the classicality and marginal criteria, on the default 201x201 window."""
    top_index = 30 + max(r for _, r in CLASSICALITY_CELLS)
    grid = default_phase_grid(2.0 * top_index + 1.0)
    fields = {}
    for p, r in CLASSICALITY_CELLS:
        coeffs = binomial_coefficients(BinomialSpec(n=30, p=p, r=r))
        fields[(p, r)] = wigner_by_closed_form(coeffs, grid)
    return fields
