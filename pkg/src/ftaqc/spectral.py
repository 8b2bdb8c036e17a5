"""Exact diagonalization, sector classification and gap profiles."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import NumericalError
from .pauli import PauliSum

DEGENERACY_TOL = 1e-9
SECTOR_TOL = 1e-6


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sector_flags: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def ground_projector(self, tol: float = DEGENERACY_TOL) -> np.ndarray:
        """Projector onto the lowest eigenspace."""
        v = self.eigenvectors[:, self.ground_indices(tol)]
        return v @ v.conj().T

    def ground_indices(self, tol: float = DEGENERACY_TOL) -> np.ndarray:
        w = self.eigenvalues
        return np.flatnonzero(w - w[0] <= tol * max(1.0, abs(w[0])))


@dataclass(frozen=True)
class Schedule:
    """Linear interpolation H(s) = (1 - s) h_start + s h_end, s = t / T."""

    h_start: PauliSum
    h_end: PauliSum
    total_time: float

    def __post_init__(self):
        if self.h_start.n != self.h_end.n:
            raise ValueError("schedule endpoints act on different qubit counts")
        if not self.total_time > 0:
            raise ValueError("total time must be positive")

    @property
    def n(self) -> int:
        return self.h_start.n

    @property
    def is_static(self) -> bool:
        return self.h_start.is_close(self.h_end, 0.0)

    def hamiltonian(self, s: float) -> PauliSum:
        return (1.0 - s) * self.h_start + s * self.h_end

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return self.h_start.to_matrix(), self.h_end.to_matrix()


def _as_matrix(h) -> np.ndarray:
    return h.to_matrix() if isinstance(h, PauliSum) else np.asarray(h)


def diagonalize(h) -> Spectrum:
    """Full eigendecomposition of a PauliSum or a Hermitian matrix."""
    m = _as_matrix(h)
    try:
        w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    return Spectrum(w, v)


def degenerate_clusters(w: np.ndarray, tol: float = DEGENERACY_TOL) -> list[np.ndarray]:
    """Index groups of (ascending) eigenvalues closer than ``tol`` (relative to scale)."""
    if len(w) == 0:
        return []
    scale = max(1.0, float(np.abs(w).max()))
    breaks = np.flatnonzero(np.diff(w) > tol * scale) + 1
    return np.split(np.arange(len(w)), breaks)


def classify_sectors(spec: Spectrum, projector: np.ndarray) -> Spectrum:
    """Flag eigenvectors inside the projector's range.

    Within each degenerate eigenspace the basis is rotated to diagonalize
    the projector, codespace vectors first. Raises when a vector stays
    ambiguous, which means the Hamiltonian does not commute with the projector.
    """
    vecs = spec.eigenvectors.copy()
    flags = np.zeros(len(spec), dtype=bool)
    for idx in degenerate_clusters(spec.eigenvalues):
        block = vecs[:, idx]
        p_block = block.conj().T @ projector @ block
        pw, pv = np.linalg.eigh(0.5 * (p_block + p_block.conj().T))
        order = np.argsort(-pw, kind="stable")
        pw, pv = pw[order], pv[:, order]
        if np.any(np.minimum(np.abs(pw), np.abs(pw - 1.0)) > SECTOR_TOL):
            raise NumericalError("eigenvector straddles the codespace boundary; [H, P] != 0")
        vecs[:, idx] = block @ pv
        flags[idx] = pw > 0.5
    return replace(spec, eigenvectors=vecs, sector_flags=flags)


@dataclass(frozen=True)
class GapRow:
    s: float
    omega_0: float
    omega_1: float
    gap: float
    gap_in_codespace: Optional[float]


def _gap(w: np.ndarray) -> float:
    if len(w) < 2:
        return float("inf")
    g = float(w[1] - w[0])
    return 0.0 if g <= DEGENERACY_TOL * max(1.0, abs(float(w[0]))) else g


def gap_profile(sch: Schedule, samples: int = 201, projector: np.ndarray | None = None,
                jobs: int = 1) -> list[GapRow]:
    """Instantaneous gap on a uniform s-grid; codespace gap too when a projector is given."""
    if samples < 2:
        raise ValueError("need at least two samples")
    a, b = sch.matrices()
    grid = np.linspace(0.0, 1.0, samples)

    def row(s: float) -> GapRow:
        spec = diagonalize((1.0 - s) * a + s * b)
        w = spec.eigenvalues
        gc = None
        if projector is not None:
            spec = classify_sectors(spec, projector)
            gc = _gap(w[spec.sector_flags])
        return GapRow(float(s), float(w[0]), float(w[1]) if len(w) > 1 else float("nan"), _gap(w), gc)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(row, grid))
    return [row(s) for s in grid]


def min_gap_along_path(sch: Schedule, samples: int = 201) -> tuple[float, float]:
    """(s*, minimum gap) over the sample grid; ties resolve to the smallest s."""
    rows = gap_profile(sch, samples)
    best = min(rows, key=lambda r: r.gap)
    return best.s, best.gap
