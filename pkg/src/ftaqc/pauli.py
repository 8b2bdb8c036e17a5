"""Symplectic Pauli algebra.

An n-qubit Pauli string is stored as two int bitsets ``x`` and ``z`` plus a
phase exponent ``phase`` (the operator carries a global factor i**phase).
Qubit 0 is the leftmost tensor factor and maps to the most significant bit
of both the bitsets and the computational-basis index, so ``X^x`` acting on
basis state ``|idx>`` gives ``|idx ^ x>``.

Per qubit, (x, z) = (0,0) is I, (1,0) is X, (0,1) is Z and (1,1) is Y, with
Y the Hermitian Pauli matrix. Equivalently the string equals
``i**(phase + |x & z|) X^x Z^z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ResourceError

MATRIX_LIMIT = 14
MERGE_TOL = 1e-12

_PHASE_PREFIX = {"": 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}
_PHASE_LABEL = {0: "", 1: "i", 2: "-", 3: "-i"}
_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTER.items()}


def set_matrix_limit(n: int) -> None:
    """Change the largest qubit count allowed for dense matrices."""
    global MATRIX_LIMIT
    if n < 1:
        raise ValueError("matrix limit must be positive")
    MATRIX_LIMIT = int(n)


def check_matrix_size(n: int, limit: int | None = None) -> None:
    limit = MATRIX_LIMIT if limit is None else limit
    if n > limit:
        raise ResourceError(
            f"dense matrix on {n} qubits exceeds the limit of {limit} qubits"
        )


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Phase-tracked tensor product of single-qubit Paulis."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise ValueError(f"bitsets do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction ---------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels such as ``"XZIY"``, ``"-IXXI"`` or ``"iZZ"``."""
        label = label.strip()
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PHASE_PREFIX:
            raise ValueError(f"bad phase prefix {prefix!r} in {label!r}")
        x = z = 0
        for ch in body:
            if ch not in "IXYZ":
                raise ValueError(f"invalid Pauli character {ch!r} in {label!r}")
            bx, bz = _BITS[ch]
            x = (x << 1) | bx
            z = (z << 1) | bz
        return cls(len(body), x, z, _PHASE_PREFIX[prefix])

    @classmethod
    def from_bits(cls, x_bits: Sequence[int], z_bits: Sequence[int], phase: int = 0) -> "PauliString":
        if len(x_bits) != len(z_bits):
            raise ValueError("x and z bit vectors differ in length")
        x = z = 0
        for bx, bz in zip(x_bits, z_bits):
            x = (x << 1) | (int(bx) & 1)
            z = (z << 1) | (int(bz) & 1)
        return cls(len(x_bits), x, z, phase)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """Weight-one string with ``letter`` on ``qubit``."""
        bx, bz = _BITS[letter]
        shift = n - 1 - qubit
        return cls(n, bx << shift, bz << shift)

    # views ------------------------------------------------------------------

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> (self.n - 1 - i)) & 1 for i in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> (self.n - 1 - i)) & 1 for i in range(self.n))

    @property
    def letters(self) -> str:
        return "".join(_LETTER[b] for b in zip(self.x_bits, self.z_bits))

    @property
    def label(self) -> str:
        return _PHASE_LABEL[self.phase] + self.letters

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, (bx, bz) in enumerate(zip(self.x_bits, self.z_bits)) if bx or bz)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def symplectic(self) -> int:
        """The 2n-bit vector ``x << n | z`` used for GF(2) work."""
        return (self.x << self.n) | self.z

    def unsigned(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, 0)

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"PauliString({self.label!r})"

    # algebra ----------------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    def commutes(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def tensor(self, other: "PauliString") -> "PauliString":
        """Kronecker product with ``self`` on the left."""
        return PauliString(
            self.n + other.n,
            (self.x << other.n) | other.x,
            (self.z << other.n) | other.z,
            self.phase + other.phase,
        )

    def embed(self, n_total: int, offset: int) -> "PauliString":
        """Place this string on qubits ``[offset, offset + n)`` of ``n_total``."""
        if offset < 0 or offset + self.n > n_total:
            raise ValueError("embedding does not fit")
        shift = n_total - offset - self.n
        return PauliString(n_total, self.x << shift, self.z << shift, self.phase)

    def to_matrix(self) -> np.ndarray:
        return string_matrix(self)


def _require_same_n(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Operator product ``a @ b`` with exact phase."""
    _require_same_n(a, b)
    # a b = i^(pa+pb+|xa za|+|xb zb|) X^xa Z^za X^xb Z^zb, Z^za X^xb = (-1)^|za xb| X^xb Z^za
    x = a.x ^ b.x
    z = a.z ^ b.z
    phase = (
        a.phase + b.phase
        + _popcount(a.x & a.z) + _popcount(b.x & b.z)
        + 2 * _popcount(a.z & b.x)
        - _popcount(x & z)
    )
    return PauliString(a.n, x, z, phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    _require_same_n(a, b)
    return _popcount((a.x & b.z) ^ (a.z & b.x)) % 2 == 0


def product(strings: Iterable[PauliString], n: int) -> PauliString:
    out = PauliString.identity(n)
    for s in strings:
        out = out * s
    return out


def all_strings(n: int, max_weight: int | None = None) -> Iterator[PauliString]:
    """Every phase-free n-qubit string, ordered by weight then label."""
    max_weight = n if max_weight is None else max_weight
    by_weight: dict[int, list[PauliString]] = {}
    for x in range(1 << n):
        for z in range(1 << n):
            w = _popcount(x | z)
            if w <= max_weight:
                by_weight.setdefault(w, []).append(PauliString(n, x, z))
    for w in sorted(by_weight):
        yield from sorted(by_weight[w], key=lambda p: p.letters)


@dataclass(frozen=True)
class PauliSum:
    """Hermitian operator as a real-weighted sum of Hermitian Pauli strings.

    Terms keep first-appearance order; that order is also the summation order
    for every reduction, so results are bit-reproducible.
    """

    n: int
    terms: tuple[tuple[float, PauliString], ...] = field(default=())

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[float, PauliString]],
                   tol: float = MERGE_TOL) -> "PauliSum":
        merged: dict[tuple[int, int], float] = {}
        for coeff, s in terms:
            if s.n != n:
                raise ValueError(f"term {s} has {s.n} qubits, expected {n}")
            if not s.is_hermitian:
                raise ValueError(f"term {s} is anti-Hermitian; coefficients must stay real")
            c = float(coeff) * (-1.0 if s.phase == 2 else 1.0)
            key = (s.x, s.z)
            merged[key] = merged.get(key, 0.0) + c
        kept = tuple(
            (c, PauliString(n, x, z)) for (x, z), c in merged.items() if abs(c) > tol
        )
        return cls(n, kept)

    @classmethod
    def from_strings(cls, strings: Sequence[PauliString], coeffs: Sequence[float] | None = None) -> "PauliSum":
        if not strings:
            raise ValueError("need at least one string to infer the qubit count")
        coeffs = [1.0] * len(strings) if coeffs is None else coeffs
        return cls.from_terms(strings[0].n, zip(coeffs, strings))

    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n, ())

    @classmethod
    def from_text(cls, text: str) -> "PauliSum":
        """Parse lines of ``<coefficient> <string>``; blank lines and ``#`` comments skipped."""
        terms = []
        n = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected '<coefficient> <string>', got {raw!r}")
            try:
                coeff = float(parts[0])
            except ValueError:
                raise ValueError(f"line {lineno}: bad coefficient {parts[0]!r}") from None
            if not parts[1] or set(parts[1]) - set("IXYZ"):
                raise ValueError(f"line {lineno}: string {parts[1]!r} must use only I, X, Y, Z")
            s = PauliString.from_label(parts[1])
            if n is None:
                n = s.n
            elif s.n != n:
                raise ValueError(f"line {lineno}: string length {s.n} differs from {n}")
            terms.append((coeff, s))
        if n is None:
            raise ValueError("empty Hamiltonian text; give at least one term (e.g. '0 I')")
        return cls.from_terms(n, terms)

    def to_text(self) -> str:
        if not self.terms:
            return f"0 {'I' * self.n}\n"
        return "".join(f"{c!r} {s.letters}\n" for c, s in self.terms)

    # algebra ------------------------------------------------------------------

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.n != self.n:
            raise ValueError("qubit count mismatch")
        return PauliSum.from_terms(self.n, self.terms + other.terms)

    def __mul__(self, scalar: float) -> "PauliSum":
        return PauliSum.from_terms(self.n, ((scalar * c, s) for c, s in self.terms))

    __rmul__ = __mul__

    def __neg__(self) -> "PauliSum":
        return self * -1.0

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def locality(self) -> int:
        return max((s.weight for _, s in self.terms), default=0)

    @property
    def identity_coefficient(self) -> float:
        return sum((c for c, s in self.terms if s.weight == 0), 0.0)

    @property
    def one_norm(self) -> float:
        return sum(abs(c) for c, _ in self.terms)

    def trace(self) -> float:
        return (2.0 ** self.n) * self.identity_coefficient

    def is_close(self, other: "PauliSum", tol: float = 1e-12) -> bool:
        diff = self - other
        return all(abs(c) <= tol for c, _ in diff.terms)

    def to_matrix(self, limit: int | None = None) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix, qubit 0 most significant."""
        check_matrix_size(self.n, limit)
        dim = 1 << self.n
        out = np.zeros((dim, dim), dtype=complex)
        idx = np.arange(dim)
        for coeff, s in self.terms:
            out[idx ^ s.x, idx] += coeff * _string_column_phases(s, idx)
        return out


_IPOW = np.array([1, 1j, -1, -1j])


def _string_column_phases(s: PauliString, idx: np.ndarray) -> np.ndarray:
    # entry <idx ^ x| P |idx> = i^(phase + |x&z|) (-1)^|idx & z|
    parity = np.zeros(idx.shape, dtype=np.int64)
    masked = idx & s.z
    while np.any(masked):
        parity ^= masked & 1
        masked = masked >> 1
    return _IPOW[(s.phase + _popcount(s.x & s.z)) % 4] * (1 - 2 * parity)


def string_matrix(s: PauliString, limit: int | None = None) -> np.ndarray:
    """Dense matrix of a single string including its phase."""
    check_matrix_size(s.n, limit)
    dim = 1 << s.n
    idx = np.arange(dim)
    out = np.zeros((dim, dim), dtype=complex)
    out[idx ^ s.x, idx] = _string_column_phases(s, idx)
    return out


def substitute(h: PauliSum, mapping: Mapping[str, PauliString]) -> PauliSum:
    """Replace every single-qubit factor of every term by an m-qubit string.

    ``mapping`` must provide ``"I"``, ``"X"``, ``"Y"`` and ``"Z"``. Qubit ``j`` of
    ``h`` becomes block ``[j*m, (j+1)*m)`` of the result. Signs carried by the
    replacement strings are folded into the coefficients.
    """
    missing = {"I", "X", "Y", "Z"} - set(mapping)
    if missing:
        raise ValueError(f"replacement map lacks {sorted(missing)}")
    sizes = {p.n for p in mapping.values()}
    if len(sizes) != 1:
        raise ValueError(f"replacement strings have inconsistent sizes {sorted(sizes)}")
    m = sizes.pop()
    for letter, p in mapping.items():
        if not p.is_hermitian:
            raise ValueError(f"replacement for {letter} is not Hermitian")
    out = []
    for coeff, s in h.terms:
        enc = PauliString(0)
        for letter in s.letters:
            enc = enc.tensor(mapping[letter])
        out.append((coeff, enc))
    return PauliSum.from_terms(h.n * m, out)
