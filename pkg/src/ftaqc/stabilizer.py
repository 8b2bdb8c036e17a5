"""Stabilizer codes with one logical qubit."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import gf2
from .errors import NumericalError, ResourceError
from .pauli import PauliString, all_strings, check_matrix_size, string_matrix

DISTANCE_LIMIT = 8
DETECTION_CROSSCHECK_LIMIT = 6


class CodeError(ValueError):
    """A code violates a stabilizer-code invariant."""


@dataclass(frozen=True)
class StabilizerCode:
    """Generators plus logical X, Y, Z for a k = 1 stabilizer code.

    Construction validates every invariant: generators Hermitian, pairwise
    commuting and independent; logicals commute with all generators;
    X_L and Z_L anticommute; Y_L equals i X_L Z_L times a stabilizer element.
    """

    name: str
    n: int
    generators: tuple[PauliString, ...]
    logical_x: PauliString
    logical_y: PauliString
    logical_z: PauliString
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        self._validate()

    def _validate(self) -> None:
        if self.k != 1:
            raise CodeError("only k = 1 codes are supported")
        ops = self.generators + self.logicals
        if any(p.n != self.n for p in ops):
            raise CodeError("operator sizes differ from n")
        if len(self.generators) != self.n - self.k:
            raise CodeError(f"need {self.n - self.k} generators, got {len(self.generators)}")
        for g in self.generators:
            if not g.is_hermitian or g.weight == 0:
                raise CodeError(f"generator {g} must be a non-identity Hermitian string")
        for i, g in enumerate(self.generators):
            for h in self.generators[i + 1:]:
                if not g.commutes(h):
                    raise CodeError(f"generators {g} and {h} anticommute")
        if gf2.rank(g.symplectic() for g in self.generators) != len(self.generators):
            raise CodeError("generators are not independent")
        for name, op in zip("XYZ", self.logicals):
            if not op.is_hermitian:
                raise CodeError(f"logical {name} is not Hermitian")
            for g in self.generators:
                if not op.commutes(g):
                    raise CodeError(f"logical {name} anticommutes with generator {g}")
        if self.logical_x.commutes(self.logical_z):
            raise CodeError("logical X and Z must anticommute")
        ixz = PauliString(self.n, phase=1) * self.logical_x * self.logical_z
        if not self.is_stabilizer_element(ixz * self.logical_y):
            raise CodeError("logical Y is not i X_L Z_L up to a stabilizer element")

    @property
    def logicals(self) -> tuple[PauliString, PauliString, PauliString]:
        return (self.logical_x, self.logical_y, self.logical_z)

    def logical_map(self) -> dict[str, PauliString]:
        """Replacement table I, X, Y, Z -> encoded operators."""
        return {
            "I": PauliString.identity(self.n),
            "X": self.logical_x,
            "Y": self.logical_y,
            "Z": self.logical_z,
        }

    # group membership -----------------------------------------------------------

    def group_element(self, p: PauliString) -> Optional[PauliString]:
        """The stabilizer-group element with the same Pauli letters as ``p``, or None."""
        combo = gf2.solve(p.symplectic(), [g.symplectic() for g in self.generators])
        if combo is None:
            return None
        out = PauliString.identity(self.n)
        for i, g in enumerate(self.generators):
            if combo >> i & 1:
                out = out * g
        return out

    def in_stabilizer_up_to_phase(self, p: PauliString) -> bool:
        return self.group_element(p) is not None

    def is_stabilizer_element(self, p: PauliString) -> bool:
        """True iff ``p`` (phase included) lies in the stabilizer group."""
        s = self.group_element(p)
        return s is not None and s.phase == p.phase

    def stabilizer_group(self) -> list[PauliString]:
        """All 2**(n-k) elements with their phases."""
        out = [PauliString.identity(self.n)]
        for g in self.generators:
            out += [s * g for s in out]
        return out

    def syndrome(self, p: PauliString) -> tuple[int, ...]:
        return tuple(0 if p.commutes(g) else 1 for g in self.generators)

    # serialization --------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "generators": [g.label for g in self.generators],
            "logical_x": self.logical_x.label,
            "logical_y": self.logical_y.label,
            "logical_z": self.logical_z.label,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StabilizerCode":
        expected = {"name", "n", "k", "generators", "logical_x", "logical_y", "logical_z"}
        unknown = set(data) - expected
        if unknown:
            raise CodeError(f"unknown code keys {sorted(unknown)}")
        missing = expected - {"k"} - set(data)
        if missing:
            raise CodeError(f"code JSON lacks {sorted(missing)}")
        try:
            return cls(
                name=str(data["name"]),
                n=int(data["n"]),
                k=int(data.get("k", 1)),
                generators=tuple(PauliString.from_label(g) for g in data["generators"]),
                logical_x=PauliString.from_label(data["logical_x"]),
                logical_y=PauliString.from_label(data["logical_y"]),
                logical_z=PauliString.from_label(data["logical_z"]),
            )
        except (TypeError, AttributeError) as exc:
            raise CodeError(f"malformed code JSON: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "StabilizerCode":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CodeError(f"code JSON does not parse: {exc}") from exc
        if not isinstance(data, dict):
            raise CodeError("code JSON must be an object")
        return cls.from_dict(data)


def _code(name: str, gens: list[str], lx: str, ly: str, lz: str) -> StabilizerCode:
    P = PauliString.from_label
    return StabilizerCode(
        name=name,
        n=P(gens[0]).n if gens else P(lx).n,
        generators=tuple(P(g) for g in gens),
        logical_x=P(lx),
        logical_y=P(ly),
        logical_z=P(lz),
    )


def four_qubit_code() -> StabilizerCode:
    """Distance-2 code on 4 qubits with 2-local logical operators."""
    return _code("four_qubit", ["XXXX", "ZZZZ", "XYZI"], "YIYI", "-IXXI", "ZZII")


def five_qubit_code() -> StabilizerCode:
    """The 5-qubit perfect code with 3-local logical operators."""
    return _code(
        "five_qubit",
        ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
        "-XIYYI", "-ZZIYI", "-YZYII",
    )


def trivial_code() -> StabilizerCode:
    """One physical qubit, no generators: the unencoded qubit."""
    return _code("trivial", [], "X", "Y", "Z")


NAMED_CODES = {
    "four_qubit": four_qubit_code,
    "five_qubit": five_qubit_code,
    "trivial": trivial_code,
}


# matrix-level views -------------------------------------------------------------

def codespace_projector(code: StabilizerCode, limit: int | None = None) -> np.ndarray:
    """Product of (I + g)/2 over the generators."""
    check_matrix_size(code.n, limit)
    dim = 1 << code.n
    proj = np.eye(dim, dtype=complex)
    for g in code.generators:
        proj = proj @ (0.5 * (np.eye(dim) + string_matrix(g)))
    return proj


def _fix_phase(v: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > tol)
    if nz.size == 0:
        raise NumericalError("zero vector has no phase")
    a = v[nz[0]]
    return v * (abs(a) / a)


def extract_codewords(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    """|0_L> (+1 eigenvector of Z_L in the codespace) and |1_L> = X_L |0_L>.

    The global phase of |0_L> makes its first nonzero amplitude real positive.
    """
    dim = 1 << code.n
    proj = codespace_projector(code) @ (0.5 * (np.eye(dim) + string_matrix(code.logical_z)))
    w, v = np.linalg.eigh(0.5 * (proj + proj.conj().T))
    ones = np.flatnonzero(np.abs(w - 1.0) < 1e-8)
    if ones.size != 1 or np.any(np.abs(np.delete(w, ones)) > 1e-8):
        raise NumericalError("codespace Z_L = +1 projector is not rank one")
    zero = _fix_phase(v[:, ones[0]])
    zero = zero / np.linalg.norm(zero)
    one = string_matrix(code.logical_x) @ zero
    return zero, one


def encoding_isometry(code: StabilizerCode, n_logical: int = 1) -> np.ndarray:
    """Columns are the encoded computational basis states of ``n_logical`` blocks."""
    zero, one = extract_codewords(code)
    block = np.column_stack([zero, one])
    check_matrix_size(code.n * n_logical)
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n_logical):
        out = np.kron(out, block)
    return out


# code properties -----------------------------------------------------------------

def _single_qubit_errors(n: int):
    for q in range(n):
        for letter in "XYZ":
            yield PauliString.single(n, q, letter)


def detects_all(code: StabilizerCode, errors) -> bool:
    return all(any(not e.commutes(g) for g in code.generators) for e in errors)


def verify_detection(code: StabilizerCode, t: int, cross_check: bool = True) -> bool:
    """Every non-identity Pauli of weight <= t anticommutes with some generator.

    For n <= 6 the answer is also recomputed from codeword matrix elements
    <a|E|b> and the two must agree.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    errors = [p for p in all_strings(code.n, min(t, code.n)) if p.weight > 0]
    result = detects_all(code, errors)
    if cross_check and code.n <= DETECTION_CROSSCHECK_LIMIT:
        zero, one = extract_codewords(code)
        words = (zero, one)
        matrix_result = True
        for e in errors:
            m = string_matrix(e)
            if any(abs(np.vdot(a, m @ b)) > 1e-10 for a in words for b in words):
                matrix_result = False
                break
        if matrix_result != result:
            raise NumericalError("symplectic and matrix-level detection checks disagree")
    return result


def undetectable_errors(code: StabilizerCode, weight: int) -> list[PauliString]:
    """Weight-``weight`` strings that commute with all generators but are not stabilizers."""
    gens = [g.symplectic() for g in code.generators]
    out = []
    for p in all_strings(code.n, weight):
        if p.weight != weight:
            continue
        if all(p.commutes(g) for g in code.generators) and not gf2.in_span(p.symplectic(), gens):
            out.append(p)
    return out


def distance(code: StabilizerCode) -> int:
    """Minimum weight of a logical (normalizer minus stabilizer) Pauli string."""
    if code.n > DISTANCE_LIMIT:
        raise ResourceError(f"distance enumeration limited to n <= {DISTANCE_LIMIT}")
    gens = [g.symplectic() for g in code.generators]
    for p in all_strings(code.n):
        if p.weight == 0:
            continue
        if all(p.commutes(g) for g in code.generators) and not gf2.in_span(p.symplectic(), gens):
            return p.weight
    raise NumericalError("no nontrivial logical operator found")


@dataclass(frozen=True)
class CodeReport:
    distance: int
    detects_up_to: int
    logical_locality: int
    projector_rank: int

    def to_dict(self) -> dict:
        return {
            "distance": self.distance,
            "detects_up_to": self.detects_up_to,
            "logical_locality": self.logical_locality,
            "projector_rank": self.projector_rank,
        }


def code_report(code: StabilizerCode) -> CodeReport:
    d = distance(code)
    proj = codespace_projector(code)
    return CodeReport(
        distance=d,
        detects_up_to=d - 1,
        logical_locality=max(p.weight for p in code.logicals),
        projector_rank=int(round(np.trace(proj).real)),
    )
