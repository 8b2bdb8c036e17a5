"""Experiment configuration files.

A config is a JSON object. Hamiltonians are given as Pauli-sum text, either
one string with newline-separated ``<coefficient> <string>`` lines or a list
of such lines. Unknown keys are rejected at every level.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .dynamics import NoiseModel
from .errors import ConfigError
from .pauli import PauliSum
from .spectral import Schedule
from .stabilizer import NAMED_CODES, CodeError, StabilizerCode

TOP_KEYS = {"hamiltonian", "code", "penalty_weight", "schedule", "noise",
            "samples", "e_p_list", "record_every", "out"}
SCHEDULE_KEYS = {"h_start", "h_end", "T", "dt"}
NOISE_KEYS = {"beta", "lambda", "spectral_density", "g0"}


def parse_hamiltonian(value: Any, where: str) -> PauliSum:
    if isinstance(value, list):
        if not all(isinstance(v, str) for v in value):
            raise ConfigError(f"{where}: list entries must be strings")
        value = "\n".join(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where}: expected Pauli-sum text")
    try:
        return PauliSum.from_text(value)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def resolve_code(value: Any) -> StabilizerCode:
    """Named code, inline code object, JSON text or a path to a code JSON file."""
    try:
        if isinstance(value, dict):
            return StabilizerCode.from_dict(value)
        if not isinstance(value, str):
            raise ConfigError("code must be a name, a JSON object or a file path")
        if value in NAMED_CODES:
            return NAMED_CODES[value]()
        if value.lstrip().startswith("{"):
            return StabilizerCode.from_json(value)
        path = Path(value)
        if path.is_file():
            return StabilizerCode.from_json(path.read_text())
    except CodeError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown code {value!r}; use {', '.join(NAMED_CODES)} or inline JSON")


def _number(section: dict, key: str, where: str, default=None, positive=False, nonneg=False):
    if key not in section:
        if default is None:
            raise ConfigError(f"{where}: missing {key!r}")
        return default
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number")
    v = float(v)
    if positive and not v > 0:
        raise ConfigError(f"{where}.{key}: must be > 0")
    if nonneg and v < 0:
        raise ConfigError(f"{where}.{key}: must be >= 0")
    return v


def _check_keys(section: Any, allowed: set[str], where: str) -> dict:
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    return section


@dataclass(frozen=True)
class ScheduleConfig:
    h_start: PauliSum
    h_end: PauliSum
    total_time: float
    dt: Optional[float]

    def schedule(self) -> Schedule:
        return Schedule(self.h_start, self.h_end, self.total_time)


@dataclass(frozen=True)
class ExperimentConfig:
    raw: dict
    hamiltonian: Optional[PauliSum] = None
    code: Optional[StabilizerCode] = None
    penalty_weight: Optional[float] = None
    schedule: Optional[ScheduleConfig] = None
    noise: Optional[NoiseModel] = None
    samples: int = 201
    e_p_list: Optional[tuple[float, ...]] = None
    record_every: int = 1
    out: Optional[str] = None

    @property
    def config_hash(self) -> str:
        return config_hash(self.raw)

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError(f"config lacks required entries {missing}")


def config_hash(raw: dict) -> str:
    canon = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def parse_config(raw: Any) -> ExperimentConfig:
    raw = _check_keys(raw, TOP_KEYS, "config")
    kw: dict[str, Any] = {"raw": raw}
    if "hamiltonian" in raw:
        kw["hamiltonian"] = parse_hamiltonian(raw["hamiltonian"], "hamiltonian")
    if "code" in raw and raw["code"] is not None:
        kw["code"] = resolve_code(raw["code"])
    if "penalty_weight" in raw:
        kw["penalty_weight"] = _number(raw, "penalty_weight", "config", nonneg=True)
    if "schedule" in raw:
        sec = _check_keys(raw["schedule"], SCHEDULE_KEYS, "schedule")
        h0 = parse_hamiltonian(sec.get("h_start"), "schedule.h_start")
        h1 = parse_hamiltonian(sec.get("h_end"), "schedule.h_end")
        if h0.n != h1.n:
            raise ConfigError("schedule: h_start and h_end act on different qubit counts")
        dt = _number(sec, "dt", "schedule", positive=True) if "dt" in sec else None
        kw["schedule"] = ScheduleConfig(h0, h1, _number(sec, "T", "schedule", positive=True), dt)
    if "noise" in raw:
        sec = _check_keys(raw["noise"], NOISE_KEYS, "noise")
        density = sec.get("spectral_density", "constant")
        if density not in ("constant", "ohmic"):
            raise ConfigError("noise.spectral_density: must be 'constant' or 'ohmic'")
        kw["noise"] = NoiseModel(
            beta=_number(sec, "beta", "noise", positive=True),
            lam=_number(sec, "lambda", "noise", default=0.0, nonneg=True),
            spectral_density=density,
            g0=_number(sec, "g0", "noise", default=1.0),
        )
    if "samples" in raw:
        s = raw["samples"]
        if isinstance(s, bool) or not isinstance(s, int) or s < 2:
            raise ConfigError("samples: expected an integer >= 2")
        kw["samples"] = s
    if "record_every" in raw:
        s = raw["record_every"]
        if isinstance(s, bool) or not isinstance(s, int) or s < 1:
            raise ConfigError("record_every: expected a positive integer")
        kw["record_every"] = s
    if "e_p_list" in raw:
        lst = raw["e_p_list"]
        if not isinstance(lst, list) or not lst:
            raise ConfigError("e_p_list: expected a non-empty list of numbers")
        kw["e_p_list"] = tuple(
            _number({"v": v}, "v", "e_p_list", nonneg=True) for v in lst
        )
    if "out" in raw:
        if not isinstance(raw["out"], str):
            raise ConfigError("out: expected a directory path")
        kw["out"] = raw["out"]
    return ExperimentConfig(**kw)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)
