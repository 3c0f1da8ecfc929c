"""
Shared fixtures for the fdqc test suite.
"""

from pathlib import Path

import numpy as np
import pytest

from fdqc.quantum import qsim
from fdqc.quantum.gateset import parse_program

PROGRAMS_DIR = Path(__file__).parent.parent / "programs"


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so random states are reproducible per test."""
    return np.random.default_rng(1234)


@pytest.fixture
def bell_state() -> qsim.Statevector:
    """(|00> + |11>) / sqrt(2)."""
    return qsim.Statevector(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))


@pytest.fixture
def plus_state() -> qsim.Statevector:
    return qsim.Statevector(np.array([1, 1], dtype=complex) / np.sqrt(2))


@pytest.fixture
def ph_program():
    """U = P H on one qubit; maps |0> to (|0> + i|1>) / sqrt(2)."""
    return parse_program("qubits 1\nH 0\nP 0\n")


@pytest.fixture
def toffoli_program():
    return parse_program("qubits 3\nT 0 1 2\n")


@pytest.fixture
def program_file(tmp_path: Path):
    """Factory writing program text into ``tmp_path`` and returning its path."""

    def _write(text: str, name: str = "program.qc") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def bundled_programs() -> Path:
    """Directory holding the example programs shipped with the repo."""
    return PROGRAMS_DIR


@pytest.fixture(autouse=True)
def _isolated_environment(monkeypatch):
    """Keep FDQC_* variables from the developer's shell out of the tests."""
    import os

    for key in list(os.environ):
        if key.startswith("FDQC_"):
            monkeypatch.delenv(key, raising=False)
