"""Reference constructions that avoid the package's symplectic code paths."""

from functools import reduce

import numpy as np
import scipy.linalg

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # (X + iY)/2 = |0><1|


def kron_all(mats):
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


def pauli_matrix(label):
    sign = 1.0
    if label.startswith("-"):
        sign, label = -1.0, label[1:]
    return sign * kron_all(PAULI[c] for c in label)


def hamiltonian_matrix(terms):
    """terms: iterable of (coefficient, label)."""
    terms = list(terms)
    n = len(terms[0][1].lstrip("-"))
    out = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for c, lab in terms:
        out += c * pauli_matrix(lab)
    return out


def ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


# codewords as printed, amplitudes copied term by term

def ket_sum(terms, scale):
    return scale * sum(c * ket(bits) for c, bits in terms)


PAPER_4Q_ZERO = ket_sum([(1, "0000"), (1j, "0011"), (1j, "1100"), (1, "1111")], 0.5)
PAPER_4Q_ONE = ket_sum([(-1, "0101"), (1j, "0110"), (1j, "1001"), (-1, "1010")], 0.5)

_5Q_ZERO = """+00000 +10010 +01001 +10100 +01010 -11011 -00110 -11000
-11101 -00011 -11110 -01111 -10001 -01100 -10111 +00101"""
_5Q_ONE = """+11111 +01101 +10110 +01011 +10101 -00100 -11001 -00111
-00010 -11100 -00001 -10000 -01110 -10011 -01000 +11010"""


def _parse_kets(text):
    return ket_sum([(1 if t[0] == "+" else -1, t[1:]) for t in text.split()], 0.25)


PAPER_5Q_ZERO = _parse_kets(_5Q_ZERO)
PAPER_5Q_ONE = _parse_kets(_5Q_ONE)


def local_op(op, qubit, n):
    return kron_all(op if q == qubit else I2 for q in range(n))


def overlap_up_to_phase(a, b):
    return abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))


def bose(x):
    return 1.0 / (np.exp(x) - 1.0)


def propagate_expm(h0, h1, total_time, steps):
    """Midpoint-rule product of scipy matrix exponentials from the h0 ground state."""
    w, v = np.linalg.eigh(h0)
    psi = v[:, 0].astype(complex)
    dt = total_time / steps
    for k in range(steps):
        s = (k + 0.5) * dt / total_time
        psi = scipy.linalg.expm(-1j * dt * ((1 - s) * h0 + s * h1)) @ psi
    return psi


def ground_fidelity(h, psi):
    w, v = np.linalg.eigh(h)
    return abs(np.vdot(v[:, 0], psi)) ** 2


def sector_eigenbasis(h, projector):
    """Eigenpairs of h computed separately inside and outside range(projector)."""
    dim = h.shape[0]
    blocks = []
    for p in (projector, np.eye(dim) - projector):
        basis = scipy.linalg.orth(p)
        w, u = np.linalg.eigh(basis.conj().T @ h @ basis)
        blocks.append((w, basis @ u))
    w = np.concatenate([b[0] for b in blocks])
    v = np.hstack([b[1] for b in blocks])
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def ground_state_rhs(h, w, v, ground, beta, lam, g0=1.0):
    """-i[H, rho] - sum_b M_0b E_0b(rho) for rho = |0><0|, constant g = g0.

    ``ground`` indexes |0> among the columns of v; rows of v are basis states.
    """
    n = int(np.log2(h.shape[0]))
    zero = v[:, ground]
    rho = np.outer(zero, zero.conj())
    out = -1j * (h @ rho - rho @ h)
    for b in range(len(w)):
        gap = w[b] - w[ground]
        if gap <= 1e-9 * max(1.0, np.abs(w).max()):
            continue
        m = sum(abs(np.vdot(v[:, b], local_op(SIGMA_PLUS, i, n) @ zero)) ** 2 for i in range(n))
        m *= bose(beta * gap) * lam ** 2 * g0 ** 2
        vb = v[:, b]
        e = 2 * rho - 2 * np.outer(vb, vb.conj())
        out -= m * e
    return out
