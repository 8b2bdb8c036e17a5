"""Stabilizer-code penalty Hamiltonians for fault-tolerant adiabatic computation."""

__version__ = "0.1.0"

from .pauli import PauliString, PauliSum, commutes, multiply, substitute  # noqa: E402
from .stabilizer import StabilizerCode, five_qubit_code, four_qubit_code  # noqa: E402
from .encoding import EncodedHamiltonian, encode  # noqa: E402

__all__ = [
    "PauliString", "PauliSum", "commutes", "multiply", "substitute",
    "StabilizerCode", "four_qubit_code", "five_qubit_code",
    "EncodedHamiltonian", "encode",
]
