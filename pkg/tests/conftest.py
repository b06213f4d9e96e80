"""Session fixtures shared across test modules.

The gamma-term fixtures chain: the worked Γ-quotient term feeds the
minimal-telescoper computation, whose operator in turn seeds the operator
ideal used by the contraction tests.  Computing each once per session keeps
the suite's expensive exact solves from repeating.
"""

import json
from pathlib import Path

import pytest

from odh.hyperterm import LeDecomposition, ProperTerm, minimal_telescoper

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def gamma_term() -> ProperTerm:
    return ProperTerm.from_json(
        json.loads((FIXTURES / "gamma_ratio_term.json").read_text())
    )


@pytest.fixture(scope="session")
def pole_sum() -> LeDecomposition:
    return LeDecomposition.from_json(
        json.loads((FIXTURES / "shift_pole_decomposition.json").read_text())
    )


@pytest.fixture(scope="session")
def minimal_gamma_certificate(gamma_term):
    return minimal_telescoper(gamma_term)


@pytest.fixture(scope="session")
def gamma_ideal_data():
    """Committed base-plus-witness bundle for the gamma term's ideal."""
    from odh.contraction import ContractionData

    return ContractionData.from_json(
        json.loads((FIXTURES / "contraction_witness_data.json").read_text())
    )
