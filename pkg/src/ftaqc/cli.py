"""Command-line entry point.

Exit codes: 0 success, 1 a verification failed, 2 bad configuration or
input, 3 resource limit exceeded, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, pauli
from .pauli import string_matrix
from .config import ExperimentConfig, config_hash, load_config, resolve_code
from .dynamics import evolve_closed, evolve_open, leakage_suppression_report
from .encoding import (
    codespace_spectrum_match,
    commutator_norm,
    default_penalty,
    encode,
    leakage_gap,
)
from .errors import ConfigError, NumericalError, ResourceError
from .io import (
    GAP_COLUMNS,
    LEAKAGE_COLUMNS,
    SERIES_COLUMNS,
    SPECTRUM_COLUMNS,
    write_csv,
    write_json,
)
from .search import CLAIMS, run_claim, singleton_check
from .spectral import Schedule, classify_sectors, diagonalize, gap_profile
from .stabilizer import (
    code_report,
    codespace_projector,
    extract_codewords,
    verify_detection,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE, EXIT_NUMERICAL = 0, 1, 2, 3, 4

SEARCH_ALIASES = {
    "no-3qubit-code": "no_3qubit_detecting_code",
    "fourqubit-logicals": "fourqubit_logicals_2local_optimal",
    "fivequbit-logicals": "fivequbit_logicals_3local_optimal",
}


# verify-code ------------------------------------------------------------------

def code_checks(code) -> tuple[dict, list[tuple[str, bool]]]:
    """Run the property suite; returns the report dict and named pass/fail checks."""
    report = code_report(code)
    checks: list[tuple[str, bool]] = []
    proj = codespace_projector(code)
    checks.append(("projector_idempotent", bool(np.allclose(proj @ proj, proj, atol=1e-10))))
    checks.append(("projector_hermitian", bool(np.allclose(proj, proj.conj().T, atol=1e-10))))
    checks.append(("projector_rank_2", report.projector_rank == 2))
    zero, one = extract_codewords(code)
    checks.append(("codewords_orthonormal", bool(
        abs(np.vdot(zero, one)) < 1e-10 and abs(np.linalg.norm(one) - 1) < 1e-10)))
    mx, my, mz = (string_matrix(p) for p in code.logicals)
    actions = {
        "X_L|0>=|1>": (mx @ zero, one), "X_L|1>=|0>": (mx @ one, zero),
        "Y_L|0>=i|1>": (my @ zero, 1j * one), "Y_L|1>=-i|0>": (my @ one, -1j * zero),
        "Z_L|0>=|0>": (mz @ zero, zero), "Z_L|1>=-|1>": (mz @ one, -one),
    }
    for name, (got, want) in actions.items():
        checks.append((f"logical_action {name}", bool(np.allclose(got, want, atol=1e-10))))
    d = report.distance
    if d >= 2:
        checks.append((f"detects_weight_{d - 1}", verify_detection(code, d - 1)))
    checks.append((f"misses_weight_{d}", not verify_detection(code, d)))
    return report.to_dict(), checks


def cmd_verify_code(args) -> int:
    code = resolve_code(args.code)
    report, checks = code_checks(code)
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    print(json.dumps({"code": code.name, **report}, sort_keys=True))
    failed = [name for name, ok in checks if not ok]
    if failed:
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# config-driven commands ---------------------------------------------------------

def _out_dir(args, cfg: ExperimentConfig | None) -> Path:
    if args.out:
        return Path(args.out)
    if cfg is not None and cfg.out:
        return Path(cfg.out)
    return Path("results")


def _metadata(command: str, cfg: ExperimentConfig, **extra) -> dict:
    meta = {
        "command": command,
        "version": __version__,
        "config": cfg.raw,
        "config_hash": config_hash(cfg.raw),
    }
    if cfg.code is not None:
        meta["code"] = cfg.code.to_dict()
    if cfg.noise is not None:
        meta["noise"] = cfg.noise.to_dict()
    if cfg.schedule is not None:
        meta["schedule"] = {
            "h_start": cfg.schedule.h_start.to_text(),
            "h_end": cfg.schedule.h_end.to_text(),
            "T": cfg.schedule.total_time,
            "dt": cfg.schedule.dt,
        }
    meta.update(extra)
    return meta


def _penalty(cfg: ExperimentConfig, *hams) -> float:
    if cfg.penalty_weight is not None:
        return cfg.penalty_weight
    return max(default_penalty(h) for h in hams)


def _encoded_schedule(cfg: ExperimentConfig):
    """Bare or encoded schedule, the codespace projector (or None) and E_p (or None)."""
    sc = cfg.schedule
    if cfg.code is None:
        return Schedule(sc.h_start, sc.h_end, sc.total_time), None, None
    e_p = _penalty(cfg, sc.h_start, sc.h_end)
    start = encode(sc.h_start, cfg.code, e_p)
    end = encode(sc.h_end, cfg.code, e_p)
    return Schedule(start.h_s, end.h_s, sc.total_time), start.projector(), e_p


def cmd_encode(args, cfg: ExperimentConfig) -> int:
    cfg.require("hamiltonian", "code")
    enc = encode(cfg.hamiltonian, cfg.code, _penalty(cfg, cfg.hamiltonian))
    out = _out_dir(args, cfg)
    summary = {
        "original": enc.original.to_text(),
        "code": enc.code.to_dict(),
        "penalty_weight": enc.penalty_weight,
        "h_sl": enc.h_sl.to_text(),
        "h_sp": enc.h_sp.to_text(),
        "h_s": enc.h_s.to_text(),
        "n_physical": enc.n_physical,
        "locality_in": enc.original.locality,
        "locality_out": enc.h_s.locality,
    }
    if enc.n_physical <= pauli.MATRIX_LIMIT:
        summary["commutator_max_abs"] = commutator_norm(enc)
        summary["codespace_spectrum_match"] = codespace_spectrum_match(enc)
        summary["leakage_gap"] = leakage_gap(enc)
    write_json(out / "encoded.json", summary)
    write_json(out / "metadata.json", _metadata("encode", cfg, penalty_weight=enc.penalty_weight))
    print(f"wrote {out / 'encoded.json'}")
    return EXIT_OK


def cmd_spectrum(args, cfg: ExperimentConfig) -> int:
    cfg.require("hamiltonian")
    h = cfg.hamiltonian
    proj = None
    e_p = None
    if cfg.code is not None:
        e_p = _penalty(cfg, h)
        enc = encode(h, cfg.code, e_p)
        h, proj = enc.h_s, enc.projector()
    spec = diagonalize(h)
    if proj is not None:
        spec = classify_sectors(spec, proj)
    flags = spec.sector_flags
    rows = [
        (i, float(w), bool(flags[i]) if flags is not None else None)
        for i, w in enumerate(spec.eigenvalues)
    ]
    out = _out_dir(args, cfg)
    write_csv(out / "spectrum.csv", SPECTRUM_COLUMNS, rows)
    write_json(out / "metadata.json", _metadata("spectrum", cfg, penalty_weight=e_p))
    print(f"wrote {out / 'spectrum.csv'}")
    return EXIT_OK


def cmd_gap_path(args, cfg: ExperimentConfig) -> int:
    cfg.require("schedule")
    sch, proj, e_p = _encoded_schedule(cfg)
    rows = gap_profile(sch, cfg.samples, proj, jobs=args.jobs)
    out = _out_dir(args, cfg)
    write_csv(out / "gap_path.csv", GAP_COLUMNS,
              [(r.s, r.omega_0, r.omega_1, r.gap, r.gap_in_codespace) for r in rows])
    best = min(rows, key=lambda r: r.gap)
    write_json(out / "metadata.json", _metadata(
        "gap-path", cfg, penalty_weight=e_p, samples=cfg.samples,
        min_gap={"s": best.s, "gap": best.gap}))
    print(f"min gap {best.gap!r} at s={best.s!r}")
    return EXIT_OK


def _write_series(out: Path, res) -> None:
    write_csv(out / "timeseries.csv", SERIES_COLUMNS, res.rows())


def cmd_evolve(args, cfg: ExperimentConfig) -> int:
    cfg.require("schedule")
    sch, proj, e_p = _encoded_schedule(cfg)
    res = evolve_closed(sch, cfg.schedule.dt, record_every=cfg.record_every, projector=proj)
    out = _out_dir(args, cfg)
    _write_series(out, res)
    write_json(out / "metadata.json", _metadata(
        "evolve", cfg, penalty_weight=e_p, dt_used=res.dt,
        final_ground_fidelity=float(res.ground_fidelity[-1])))
    print(f"final ground fidelity {float(res.ground_fidelity[-1])!r}")
    return EXIT_OK


def cmd_master_eq(args, cfg: ExperimentConfig) -> int:
    cfg.require("schedule", "noise")
    sch, proj, e_p = _encoded_schedule(cfg)
    res = evolve_open(sch, cfg.noise, cfg.schedule.dt, projector=proj,
                      record_every=cfg.record_every)
    out = _out_dir(args, cfg)
    _write_series(out, res)
    extra = {"penalty_weight": e_p, "dt_used": res.dt,
             "final_ground_fidelity": float(res.ground_fidelity[-1]),
             "max_trace_error": float(res.trace_error.max())}
    if cfg.e_p_list is not None:
        if cfg.code is None:
            raise ConfigError("e_p_list needs a code")
        rep = leakage_suppression_report(cfg.schedule.h_start, cfg.code, cfg.e_p_list, cfg.noise)
        write_csv(out / "leakage.csv", LEAKAGE_COLUMNS,
                  [(r.e_p, r.leakage_gap, r.beta_gap, r.rate, r.slope) for r in rep.rows])
        extra["leakage_fitted_slope"] = rep.fitted_slope
    write_json(out / "metadata.json", _metadata("master-eq", cfg, **extra))
    print(f"final ground fidelity {float(res.ground_fidelity[-1])!r}")
    return EXIT_OK


def cmd_search(args) -> int:
    names = list(CLAIMS) if args.claim == "all" else [SEARCH_ALIASES.get(args.claim, args.claim)]
    for name in names:
        if name not in CLAIMS:
            raise ConfigError(f"unknown claim {args.claim!r}")
    certs = [run_claim(name).to_dict() for name in names]
    out = _out_dir(args, None)
    path = write_json(out / "certificate.json", certs[0] if len(certs) == 1 else certs)
    for c in certs:
        print(f"{'CONFIRMED' if c['result'] else 'REFUTED'} {c['claim']} "
              f"({c['witnesses_checked']}/{c['search_space_size']} checked)")
    print(f"wrote {path}")
    return EXIT_OK if all(c["result"] for c in certs) else EXIT_FAIL


def cmd_singleton(args) -> int:
    holds = singleton_check(args.n, args.k, args.d)
    print(json.dumps({"n": args.n, "k": args.k, "d": args.d, "holds": holds,
                      "slack": (args.n - args.k) - 2 * (args.d - 1)}))
    return EXIT_OK if holds else EXIT_FAIL


CONFIG_COMMANDS = {
    "encode": cmd_encode,
    "spectrum": cmd_spectrum,
    "gap-path": cmd_gap_path,
    "evolve": cmd_evolve,
    "master-eq": cmd_master_eq,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="experiment config JSON")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    common.add_argument("--matrix-limit", type=int, default=None,
                        help="largest qubit count for dense matrices")

    parser = argparse.ArgumentParser(prog="ftaqc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-code", parents=[common], help="check a code's properties")
    p.add_argument("code", help="four_qubit, five_qubit, inline JSON or a JSON file")
    for name in CONFIG_COMMANDS:
        sub.add_parser(name, parents=[common])
    p = sub.add_parser("search", parents=[common], help="exhaustive optimality searches")
    p.add_argument("claim", help="no-3qubit-code, fourqubit-logicals, fivequbit-logicals or all")
    p = sub.add_parser("singleton", parents=[common], help="quantum singleton bound")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("d", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    saved_limit = pauli.MATRIX_LIMIT
    try:
        if args.matrix_limit is not None:
            pauli.set_matrix_limit(args.matrix_limit)
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        if args.command == "verify-code":
            return cmd_verify_code(args)
        if args.command == "search":
            return cmd_search(args)
        if args.command == "singleton":
            return cmd_singleton(args)
        if args.config is None:
            raise ConfigError(f"{args.command} needs --config")
        cfg = load_config(args.config)
        return CONFIG_COMMANDS[args.command](args, cfg)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        pauli.set_matrix_limit(saved_limit)


if __name__ == "__main__":
    sys.exit(main())
