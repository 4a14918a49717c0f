import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from manyworlds.states import HermitianOperator, StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_state(rng, num_qubits: int) -> StateVector:
    dim = 1 << num_qubits
    raw = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(raw / np.linalg.norm(raw))


def random_hermitian(rng, dim: int) -> HermitianOperator:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator((raw + raw.conj().T) / 2.0)
