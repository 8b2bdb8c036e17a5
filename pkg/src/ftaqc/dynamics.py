"""Closed and open time evolution along a schedule.

The open-system generator is the weak-coupling master equation for spins
coupled independently to a photon bath through sigma_+ = |0><1| and
sigma_- = |1><0| on each qubit. Written in the instantaneous eigenbasis
{|a>} of H_S it reads

    drho/dt = -i[H_S, rho] - sum_{a,b} M_ab E_ab(rho)
    E_ab(rho) = |a><a| rho + rho |a><a| - 2 |b><a| rho |a><b|

with M_ab the absorption rate N(w_b - w_a) |g_ba|^2 |<b|s+|a>|^2 (w_b > w_a)
plus the emission rate (N(w_a - w_b) + 1) |g_ab|^2 |<a|s+|b>|^2 (w_a > w_b),
each summed over qubits. With M_ab >= 0 this sign moves population from a
to b at rate 2 M_ab, so the trace is conserved and populations relax to the
Gibbs state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ResourceError, StepSizeError
from .pauli import PauliSum
from .spectral import (
    DEGENERACY_TOL,
    Schedule,
    Spectrum,
    classify_sectors,
    degenerate_clusters,
    diagonalize,
)
from .stabilizer import StabilizerCode

OPEN_LIMIT = 10
NORM_STEP = 0.05
TRACE_TOL = 1e-6
NORM_TOL = 1e-8


@dataclass(frozen=True)
class NoiseModel:
    """Bath temperature, coupling strength and spectral density."""

    beta: float
    lam: float = 0.0
    spectral_density: str = "constant"
    g0: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")
        if self.spectral_density not in ("constant", "ohmic"):
            raise ValueError(f"unknown spectral density {self.spectral_density!r}")

    def g(self, omega):
        omega = np.asarray(omega, dtype=float)
        if self.spectral_density == "constant":
            return np.full_like(omega, self.g0)
        return self.g0 * np.sqrt(omega)

    def occupation(self, omega):
        """Bose-Einstein number 1 / (exp(beta omega) - 1)."""
        return 1.0 / np.expm1(self.beta * np.asarray(omega, dtype=float))

    def to_dict(self) -> dict:
        return {"beta": self.beta, "lambda": self.lam,
                "spectral_density": self.spectral_density, "g0": self.g0}


def _qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def sigma_plus_index(n: int, qubit: int) -> tuple[np.ndarray, np.ndarray]:
    """(rows, cols) of the unit entries of sigma_+ = |0><1| on ``qubit``."""
    bit = 1 << (n - 1 - qubit)
    idx = np.arange(1 << n)
    rows = idx[(idx & bit) == 0]
    return rows, rows | bit


def sigma_plus(n: int, qubit: int) -> np.ndarray:
    rows, cols = sigma_plus_index(n, qubit)
    out = np.zeros((1 << n, 1 << n))
    out[rows, cols] = 1.0
    return out


def raising_weights(spec: Spectrum) -> np.ndarray:
    """A[b, a] = sum_i |<b| sigma_+^(i) |a>|^2 in the eigenbasis."""
    v = spec.eigenvectors
    n = _qubit_count(v.shape[0])
    out = np.zeros(v.shape, dtype=float)
    for q in range(n):
        rows, cols = sigma_plus_index(n, q)
        s = v[rows].conj().T @ v[cols]
        out += s.real ** 2 + s.imag ** 2
    return out


def transition_rates(spec: Spectrum, noise: NoiseModel, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """The scalar M_ab for every ordered pair of eigenvectors.

    Gaps below ``tol`` (relative to the spectral scale) count as degenerate
    and carry no rate.
    """
    w = spec.eigenvalues
    dim = len(w)
    rates = np.zeros((dim, dim))
    if noise.lam == 0.0:
        return rates
    a_weights = raising_weights(spec)
    delta = w[None, :] - w[:, None]  # delta[a, b] = w_b - w_a
    cut = tol * max(1.0, float(np.abs(w).max()))
    up = delta > cut
    down = delta < -cut
    lam2 = noise.lam ** 2
    d_up = delta[up]
    rates[up] = noise.occupation(d_up) * lam2 * np.abs(noise.g(d_up)) ** 2 * a_weights.T[up]
    d_down = -delta[down]
    rates[down] = (noise.occupation(d_down) + 1.0) * lam2 * np.abs(noise.g(d_down)) ** 2 * a_weights[down]
    return rates


def _dissipator(rho: np.ndarray, vecs: np.ndarray, rates: np.ndarray) -> np.ndarray:
    r = vecs.conj().T @ rho @ vecs
    gamma = rates.sum(axis=1)
    gain = rates.T @ np.real(np.diag(r))
    d = gamma[:, None] * r + r * gamma[None, :]
    d[np.diag_indices_from(d)] -= 2.0 * gain
    return vecs @ d @ vecs.conj().T


def _rhs(rho, h, vecs, rates):
    out = -1j * (h @ rho - rho @ h)
    if rates is not None and rates.any():
        out -= _dissipator(rho, vecs, rates)
    return out


def _check_density(rho, tol: float = 1e-8) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError("density matrix does not have unit trace")
    return rho


def lindblad_rhs(rho: np.ndarray, spec: Spectrum, noise: NoiseModel,
                 rates: np.ndarray | None = None, tol: float = 1e-8) -> np.ndarray:
    """Time derivative of ``rho`` under H_S = V diag(w) V^dagger and the bath."""
    rho = _check_density(rho, tol)
    vecs = spec.eigenvectors
    h = (vecs * spec.eigenvalues) @ vecs.conj().T
    if rates is None:
        rates = transition_rates(spec, noise)
    return _rhs(rho, h, vecs, rates)


@dataclass
class EvolutionResult:
    times: np.ndarray
    ground_fidelity: np.ndarray
    codespace_population: Optional[np.ndarray]
    trace_error: np.ndarray
    hermiticity_error: np.ndarray
    final_state: np.ndarray
    dt: float = 0.0
    meta: dict = field(default_factory=dict)

    def rows(self) -> list[tuple]:
        pop = self.codespace_population
        return [
            (float(t), float(f), float(pop[i]) if pop is not None else float("nan"), float(e))
            for i, (t, f, e) in enumerate(zip(self.times, self.ground_fidelity, self.trace_error))
        ]


def default_dt(sch: Schedule, a: np.ndarray | None = None, b: np.ndarray | None = None) -> float:
    """Step with ||H|| dt <= 0.05, using the larger endpoint spectral norm."""
    if a is None or b is None:
        a, b = sch.matrices()
    norm = max(np.abs(np.linalg.eigvalsh(a)).max(), np.abs(np.linalg.eigvalsh(b)).max(), 1e-12)
    return NORM_STEP / norm


def _steps(sch: Schedule, dt: float | None, a, b) -> tuple[int, float]:
    if dt is None:
        dt = default_dt(sch, a, b)
    if not dt > 0:
        raise ValueError("dt must be positive")
    n_steps = max(1, math.ceil(sch.total_time / dt - 1e-9))
    return n_steps, sch.total_time / n_steps


def _ground_state(spec: Spectrum) -> np.ndarray:
    return spec.eigenvectors[:, 0]


# closed evolution --------------------------------------------------------------

_C1 = 0.5 - math.sqrt(3) / 6
_C2 = 0.5 + math.sqrt(3) / 6
_A1 = (3 - 2 * math.sqrt(3)) / 12
_A2 = (3 + 2 * math.sqrt(3)) / 12


def _expmi(h: np.ndarray, tau: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * tau * w)) @ v.conj().T


def evolve_closed(sch: Schedule, dt: float | None = None, record_every: int = 1,
                  norm_tol: float = NORM_TOL, projector: np.ndarray | None = None) -> EvolutionResult:
    """Pure-state Schrodinger evolution from the ground state of h_start.

    Uses the fourth-order commutator-free Magnus step, which is unitary by
    construction. The fidelity is the weight on the instantaneous ground
    eigenspace. A degenerate initial ground space starts from the first
    eigenvector returned by the eigensolver.
    """
    a, b = sch.matrices()
    n_steps, dt = _steps(sch, dt, a, b)
    big_t = sch.total_time
    psi = _ground_state(diagonalize(a)).astype(complex)

    times, fid, pop, terr, herr = [], [], [], [], []

    def record(step: int):
        s = step * dt / big_t
        spec = diagonalize((1 - s) * a + s * b)
        p = spec.ground_projector()
        times.append(step * dt)
        fid.append(float(np.real(np.vdot(psi, p @ psi))))
        if projector is not None:
            pop.append(float(np.real(np.vdot(psi, projector @ psi))))
        terr.append(abs(np.vdot(psi, psi).real - 1.0))
        herr.append(0.0)

    record(0)
    for step in range(n_steps):
        t = step * dt
        h1 = (1 - (t + _C1 * dt) / big_t) * a + (t + _C1 * dt) / big_t * b
        h2 = (1 - (t + _C2 * dt) / big_t) * a + (t + _C2 * dt) / big_t * b
        psi = _expmi(_A1 * h1 + _A2 * h2, dt) @ (_expmi(_A2 * h1 + _A1 * h2, dt) @ psi)
        drift = abs(np.vdot(psi, psi).real - 1.0)
        if drift > norm_tol:
            raise StepSizeError(f"norm drift {drift:.2e} at t={t + dt:.6g}")
        if (step + 1) % record_every == 0 or step + 1 == n_steps:
            record(step + 1)
    return EvolutionResult(
        times=np.array(times), ground_fidelity=np.array(fid),
        codespace_population=np.array(pop) if projector is not None else None,
        trace_error=np.array(terr), hermiticity_error=np.array(herr),
        final_state=np.outer(psi, psi.conj()), dt=dt,
    )


# open evolution -----------------------------------------------------------------

@dataclass
class _Frame:
    h: np.ndarray
    spec: Optional[Spectrum]
    rates: Optional[np.ndarray]


def _align(spec: Spectrum, ref: Spectrum) -> Spectrum:
    """Rotate each degenerate eigenspace onto the previous frame's vectors."""
    vecs = spec.eigenvectors.copy()
    flags = spec.sector_flags
    for idx in degenerate_clusters(spec.eigenvalues):
        groups = [idx] if flags is None else [idx[flags[idx]], idx[~flags[idx]]]
        for g in groups:
            if g.size == 0:
                continue
            overlap = vecs[:, g].conj().T @ ref.eigenvectors[:, g]
            u, _, vh = np.linalg.svd(overlap)
            vecs[:, g] = vecs[:, g] @ (u @ vh)
    return Spectrum(spec.eigenvalues, vecs, flags)


class _OpenGenerator:
    def __init__(self, sch: Schedule, noise: NoiseModel, projector):
        self.a, self.b = sch.matrices()
        self.total_time = sch.total_time
        self.noise = noise
        self.projector = projector
        self.static = sch.is_static
        self.dissipative = noise.lam > 0
        self._static_frame = self._frame(0.0, None) if self.static else None
        self.ref: Optional[Spectrum] = None

    def hamiltonian(self, t: float) -> np.ndarray:
        s = t / self.total_time
        return (1 - s) * self.a + s * self.b

    def spectrum(self, t: float, ref: Optional[Spectrum]) -> Spectrum:
        spec = diagonalize(self.hamiltonian(t))
        if self.projector is not None:
            spec = classify_sectors(spec, self.projector)
        if ref is not None:
            spec = _align(spec, ref)
        return spec

    def _frame(self, t: float, ref: Optional[Spectrum]) -> _Frame:
        h = self.hamiltonian(t)
        if not self.dissipative:
            return _Frame(h, None, None)
        spec = self.spectrum(t, ref)
        return _Frame(h, spec, transition_rates(spec, self.noise))

    def frame(self, t: float) -> _Frame:
        if self.static:
            return self._static_frame
        return self._frame(t, self.ref)

    def __call__(self, frame: _Frame, rho: np.ndarray) -> np.ndarray:
        vecs = frame.spec.eigenvectors if frame.spec is not None else None
        return _rhs(rho, frame.h, vecs, frame.rates)


def ground_density(spec: Spectrum) -> np.ndarray:
    p = spec.ground_projector()
    return p / np.trace(p).real


def evolve_open(sch: Schedule, noise: NoiseModel, dt: float | None = None,
                projector: np.ndarray | None = None, rho0: np.ndarray | None = None,
                record_every: int = 1, trace_tol: float = TRACE_TOL,
                limit: int = OPEN_LIMIT) -> EvolutionResult:
    """Fixed-step RK4 integration of the master equation along ``sch``.

    The eigenbasis is recomputed at every stage time and degenerate
    eigenspaces are rotated to match the previous step. ``rho0`` defaults
    to the normalized ground projector of h_start.
    """
    if sch.n > limit:
        raise ResourceError(f"open-system evolution limited to {limit} qubits")
    gen = _OpenGenerator(sch, noise, projector)
    n_steps, dt = _steps(sch, dt, gen.a, gen.b)
    if rho0 is None:
        rho0 = ground_density(diagonalize(gen.a))
    rho = np.array(rho0, dtype=complex)

    times, fid, pop, terr, herr = [], [], [], [], []
    ground_cache = {}

    def record(t: float, spec: Optional[Spectrum]):
        if gen.static:
            if "p" not in ground_cache:
                ground_cache["p"] = diagonalize(gen.a).ground_projector()
            pg = ground_cache["p"]
        else:
            pg = (spec if spec is not None else diagonalize(gen.hamiltonian(t))).ground_projector()
        times.append(t)
        fid.append(float(np.real(np.trace(pg @ rho))))
        if projector is not None:
            pop.append(float(np.real(np.trace(projector @ rho))))
        terr.append(abs(np.trace(rho).real - 1.0))
        herr.append(float(np.abs(rho - rho.conj().T).max()))

    start = gen.frame(0.0)
    gen.ref = start.spec
    record(0.0, start.spec)
    for step in range(n_steps):
        t = step * dt
        mid = gen.frame(t + 0.5 * dt)
        end = gen.frame(t + dt)
        k1 = gen(start, rho)
        k2 = gen(mid, rho + 0.5 * dt * k1)
        k3 = gen(mid, rho + 0.5 * dt * k2)
        k4 = gen(end, rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = abs(np.trace(rho).real - 1.0)
        if drift > trace_tol:
            raise StepSizeError(f"trace drift {drift:.2e} at t={t + dt:.6g}")
        start = end
        if end.spec is not None:
            gen.ref = end.spec
        if (step + 1) % record_every == 0 or step + 1 == n_steps:
            record(t + dt, end.spec)
    return EvolutionResult(
        times=np.array(times), ground_fidelity=np.array(fid),
        codespace_population=np.array(pop) if projector is not None else None,
        trace_error=np.array(terr), hermiticity_error=np.array(herr),
        final_state=rho, dt=dt,
    )


# leakage ------------------------------------------------------------------------

def leakage_rate(spec: Spectrum, noise: NoiseModel, projector: np.ndarray, rho: np.ndarray) -> float:
    """d(1 - Tr P rho)/dt for the given state.

    H_S commutes with P, so only the dissipator contributes; the commutator
    term is skipped rather than left as roundoff.
    """
    rho = _check_density(rho)
    rates = transition_rates(spec, noise)
    if not rates.any():
        return 0.0
    d = _dissipator(rho, spec.eigenvectors, rates)
    return float(np.real(np.trace(projector @ d)))


def codespace_ground_density(spec: Spectrum) -> np.ndarray:
    """Normalized projector on the lowest eigenspace inside the codespace."""
    if spec.sector_flags is None:
        raise ValueError("spectrum has no sector flags")
    inside = np.flatnonzero(spec.sector_flags)
    w = spec.eigenvalues[inside]
    ground = inside[w - w.min() <= DEGENERACY_TOL * max(1.0, abs(w.min()))]
    v = spec.eigenvectors[:, ground]
    return (v @ v.conj().T) / len(ground)


@dataclass(frozen=True)
class LeakageRow:
    e_p: float
    leakage_gap: float
    beta_gap: float
    rate: float
    slope: float


@dataclass(frozen=True)
class LeakageReport:
    rows: tuple[LeakageRow, ...]
    fitted_slope: float
    noise: NoiseModel


def leakage_suppression_report(h: PauliSum, code: StabilizerCode, e_p_list,
                               noise: NoiseModel) -> LeakageReport:
    """t = 0 leakage rate out of the codespace for each penalty weight.

    The initial state is the encoded ground space of ``h`` (the lowest
    codespace eigenspace of H_S), which for E_p > 0 is the ground space of
    H_S itself. ``slope`` is d ln(rate) / d(beta * leakage gap) between a row
    and its predecessor; ``fitted_slope`` is the least-squares slope over all
    rows with positive rate and gap.
    """
    from .encoding import encode

    rows = []
    prev = None
    for e_p in e_p_list:
        enc = encode(h, code, float(e_p))
        proj = enc.projector()
        spec = classify_sectors(diagonalize(enc.h_s), proj)
        rho = codespace_ground_density(spec)
        outside = spec.eigenvalues[~spec.sector_flags]
        ground = spec.eigenvalues[spec.sector_flags].min()
        gap = float(outside.min() - ground) if outside.size else float("inf")
        rate = leakage_rate(spec, noise, proj, rho)
        bg = noise.beta * gap
        slope = float("nan")
        if prev is not None and prev.rate > 0 and rate > 0 and bg != prev.beta_gap:
            slope = (math.log(rate) - math.log(prev.rate)) / (bg - prev.beta_gap)
        row = LeakageRow(float(e_p), gap, bg, rate, slope)
        rows.append(row)
        prev = row
    usable = [r for r in rows if r.rate > 0 and r.leakage_gap > 0 and math.isfinite(r.beta_gap)]
    fitted = float("nan")
    if len(usable) >= 2:
        xs = np.array([r.beta_gap for r in usable])
        ys = np.log([r.rate for r in usable])
        fitted = float(np.polyfit(xs, ys, 1)[0])
    return LeakageReport(tuple(rows), fitted, noise)
