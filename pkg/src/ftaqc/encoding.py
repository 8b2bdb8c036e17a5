"""Penalty-protected encoded Hamiltonians.

Encoded qubit ``j`` occupies physical qubits ``[j*n, (j+1)*n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliSum, substitute
from .stabilizer import StabilizerCode, codespace_projector, encoding_isometry

SPECTRUM_TOL = 1e-8


def default_penalty(h: PauliSum) -> float:
    """Four times the coefficient one-norm; at least 1 for an all-zero input."""
    return 4.0 * h.one_norm if h.one_norm > 0 else 1.0


def penalty_hamiltonian(code: StabilizerCode, n_logical: int, e_p: float) -> PauliSum:
    """-E_p times every generator on every block."""
    n_total = n_logical * code.n
    terms = [
        (-e_p, g.embed(n_total, j * code.n))
        for j in range(n_logical)
        for g in code.generators
    ]
    return PauliSum.from_terms(n_total, terms)


@dataclass(frozen=True)
class EncodedHamiltonian:
    original: PauliSum
    code: StabilizerCode
    penalty_weight: float
    h_sl: PauliSum
    h_sp: PauliSum

    @property
    def h_s(self) -> PauliSum:
        return self.h_sl + self.h_sp

    @property
    def n_logical(self) -> int:
        return self.original.n

    @property
    def n_physical(self) -> int:
        return self.h_sl.n

    @property
    def penalty_offset(self) -> float:
        """Energy of H_SP on the codespace."""
        return -self.penalty_weight * len(self.code.generators) * self.n_logical

    def projector(self) -> np.ndarray:
        """Codespace projector on all blocks."""
        block = codespace_projector(self.code)
        out = np.ones((1, 1), dtype=complex)
        for _ in range(self.n_logical):
            out = np.kron(out, block)
        return out


def encode(h: PauliSum, code: StabilizerCode, e_p: float | None = None) -> EncodedHamiltonian:
    """Substitute logical operators into ``h`` and add the penalty on every block.

    ``e_p=None`` uses :func:`default_penalty`. ``e_p=0`` is accepted so that
    unprotected runs can be compared against protected ones.
    """
    if code.k != 1:
        raise ValueError("encoding needs a k = 1 code")
    if e_p is None:
        e_p = default_penalty(h)
    if e_p < 0:
        raise ValueError("penalty weight must be non-negative")
    h_sl = substitute(h, code.logical_map())
    h_sp = penalty_hamiltonian(code, h.n, float(e_p))
    return EncodedHamiltonian(h, code, float(e_p), h_sl, h_sp)


def codespace_spectrum(enc: EncodedHamiltonian) -> np.ndarray:
    """Eigenvalues of H_S compressed to the codespace, ascending."""
    w = encoding_isometry(enc.code, enc.n_logical)
    h = w.conj().T @ enc.h_s.to_matrix() @ w
    return np.linalg.eigvalsh(0.5 * (h + h.conj().T))


def codespace_spectrum_match(enc: EncodedHamiltonian, tol: float = SPECTRUM_TOL) -> bool:
    """Codespace spectrum of H_S equals the original spectrum shifted by the penalty offset."""
    expected = np.linalg.eigvalsh(enc.original.to_matrix()) + enc.penalty_offset
    got = codespace_spectrum(enc)
    return bool(np.allclose(got, expected, rtol=0.0, atol=tol))


def leakage_gap(enc: EncodedHamiltonian) -> float:
    """Lowest C-perp eigenvalue of H_S minus the global ground energy."""
    from .spectral import classify_sectors, diagonalize

    spec = classify_sectors(diagonalize(enc.h_s), enc.projector())
    outside = spec.eigenvalues[~spec.sector_flags]
    if outside.size == 0:
        return float("inf")
    return float(outside.min() - spec.eigenvalues.min())


def commutator_norm(enc: EncodedHamiltonian) -> float:
    a = enc.h_sl.to_matrix()
    b = enc.h_sp.to_matrix()
    return float(np.abs(a @ b - b @ a).max())

