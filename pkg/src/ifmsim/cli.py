"""Command-line front end.

Subcommands::

    ifmsim run          --alpha A --beta B --gamma G
    ifmsim sweep-alpha  [--points N]
    ifmsim sweep-gamma  [--points N]
    ifmsim sample       --alpha A --beta B --gamma G [--n N] [--seed S]
    ifmsim dicke        --alpha A --beta B

All accept ``--format csv|json`` (default csv) and ``--out PATH`` (default
``-``, standard output).

Exit codes: 0 success, 1 statistical check failed, 2 invalid input,
3 output could not be written.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__
from .dicke import DickeConfig, condition_on_null, dicke_entanglement, dicke_entanglement_numeric, dicke_state
from .errors import IFMError, ZeroProbability
from .interferometer import (
    EVConfig,
    InteractionSpec,
    Outcome,
    conditional_object_state,
    correlation_c,
    detector_probabilities,
    entanglement_alpha,
    entanglement_gamma,
    entropy_alpha_closed,
    entropy_gamma_closed,
    run_ev,
)
from .montecarlo import OUTCOME_ORDER, frequency_check, sample_outcomes
from .qstate import ObjectState, Subsystem, basis_labels, entanglement_entropy, overlap_squared

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_INVALID = 2
EXIT_IO = 3

INPUT_TOL = 1e-8  # admits 8-digit inputs such as 0.70710678; values are renormalized
AGREEMENT_TOL = 1e-9

ALPHA_COLUMNS = ("alpha", "entropy_closed", "entropy_numeric", "correlation")
GAMMA_COLUMNS = ("gamma", "entropy_closed", "entropy_numeric", "p_dd")


class InputError(Exception):
    """Invalid command-line input (exit code 2)."""


class OutputError(Exception):
    """Output destination not writable (exit code 3)."""


def fmt(x: float) -> str:
    # shortest round-trip repr: full double precision, '.' separator, no locale
    return repr(float(x))


# --------------------------------------------------------------------------
# input validation


def _ev_config(alpha: float, beta: float) -> EVConfig:
    for name, v in (("alpha", alpha), ("beta", beta)):
        if not math.isfinite(v) or v < 0.0:
            raise InputError(f"{name} must be a finite nonnegative real, got {v!r}")
    weight = alpha * alpha + beta * beta
    if abs(weight - 1.0) > INPUT_TOL:
        raise InputError(f"normalization |alpha|^2 + |beta|^2 = 1 violated (got {weight!r})")
    norm = math.sqrt(weight)
    return EVConfig(alpha / norm, beta / norm)


def _dicke_config(alpha: float, beta: float) -> DickeConfig:
    cfg = _ev_config(alpha, beta)
    return DickeConfig(cfg.alpha, cfg.beta)


def _interaction(gamma: float) -> InteractionSpec:
    if not (math.isfinite(gamma) and 0.0 <= gamma <= 1.0):
        raise InputError(f"gamma must lie in [0, 1], got {gamma!r}")
    return InteractionSpec.from_gamma(gamma)


def _points(n: int) -> int:
    if n < 2:
        raise InputError(f"points must be >= 2, got {n}")
    return n


# --------------------------------------------------------------------------
# report builders (pure; return plain data)


def _meta(command: str, **extra) -> dict[str, Any]:
    return {"command": command, "tool_version": __version__, **extra}


def run_report(alpha: float, beta: float, gamma: float) -> dict[str, Any]:
    cfg = _ev_config(alpha, beta)
    spec = _interaction(gamma)
    trace = run_ev(cfg, spec)
    final = trace.psi_final
    dist = detector_probabilities(final)

    stages = {
        name: [
            {"photon": p.name, "object": o.name, "re": float(a.real), "im": float(a.imag)}
            for (p, o), a in zip(basis_labels(), state.amps)
        ]
        for name, state in trace.stages()
    }
    conditional: dict[str, Any] = {}
    for outcome in OUTCOME_ORDER:
        try:
            vec = conditional_object_state(final, outcome)
        except ZeroProbability:
            conditional[outcome.value] = None
            continue
        conditional[outcome.value] = [
            {"object": o.name, "re": float(vec[o].real), "im": float(vec[o].imag)}
            for o in ObjectState
        ]

    if dist.p_dd > 1e-12:
        dd_state = conditional_object_state(final, Outcome.DD)
        postselected = overlap_squared(dd_state, cfg.object_vector())
    else:
        postselected = None

    if spec.gamma == 0:
        entropy_closed = entropy_alpha_closed(abs(cfg.alpha))
    elif cfg.alpha == 0:
        entropy_closed = entropy_gamma_closed(abs(spec.gamma))
    else:
        entropy_closed = None

    return {
        "meta": _meta("run"),
        "params": {
            "alpha": cfg.alpha.real,
            "beta": cfg.beta.real,
            "gamma": spec.gamma.real,
            "delta": spec.delta.real,
        },
        "stages": stages,
        "probabilities": {"p_ld": dist.p_ld, "p_dd": dist.p_dd, "p_abs": dist.p_abs},
        "conditional_states": conditional,
        # closed form assumes full absorption
        "correlation": correlation_c(cfg) if spec.gamma == 0 else None,
        "correlation_postselected": postselected,
        "entropy_closed": entropy_closed,
        "entropy_numeric": entanglement_entropy(final, Subsystem.PHOTON),
        "entropy_numeric_object": entanglement_entropy(final, Subsystem.OBJECT),
    }


def _check_row(row: dict[str, float]) -> dict[str, float]:
    if abs(row["entropy_closed"] - row["entropy_numeric"]) >= AGREEMENT_TOL:
        raise RuntimeError(f"closed form and numeric entropy disagree: {row}")
    return row


def sweep_alpha_rows(points: int) -> list[dict[str, float]]:
    rows = []
    for a in np.linspace(0.0, 1.0, _points(points)):
        cfg = EVConfig.from_modulus(float(a))
        closed, numeric = entanglement_alpha(cfg)
        rows.append(
            _check_row(
                {
                    "alpha": float(a),
                    "entropy_closed": closed,
                    "entropy_numeric": numeric,
                    "correlation": correlation_c(cfg),
                }
            )
        )
    return rows


def sweep_gamma_rows(points: int) -> list[dict[str, float]]:
    rows = []
    ev = EVConfig(0.0, 1.0)
    for g in np.linspace(0.0, 1.0, _points(points)):
        g = float(g)
        closed, numeric = entanglement_gamma(g)
        p_dd = detector_probabilities(run_ev(ev, InteractionSpec.from_gamma(g)).psi_final).p_dd
        rows.append(
            _check_row({"gamma": g, "entropy_closed": closed, "entropy_numeric": numeric, "p_dd": p_dd})
        )
    return rows


def sample_report(alpha: float, beta: float, gamma: float, n: int, seed: int) -> dict[str, Any]:
    cfg = _ev_config(alpha, beta)
    spec = _interaction(gamma)
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    dist = detector_probabilities(run_ev(cfg, spec).psi_final)
    report = frequency_check(sample_outcomes(dist, n, seed), dist)
    return {
        "meta": _meta("sample", seed=seed, n=n),
        "params": {"alpha": cfg.alpha.real, "beta": cfg.beta.real, "gamma": spec.gamma.real},
        **report.to_dict(),
    }


def dicke_report(alpha: float, beta: float) -> dict[str, Any]:
    cfg = _dicke_config(alpha, beta)
    state = dicke_state(cfg)
    labels = ("free,free", "free,scatt", "scatt,free", "scatt,scatt")
    try:
        target, prob = condition_on_null(state)
        target_out = [{"re": float(x.real), "im": float(x.imag)} for x in target]
        overlap = abs(target[0]) ** 2
    except ZeroProbability:
        target_out, prob, overlap = None, 0.0, None
    return {
        "meta": _meta("dicke"),
        "params": {"alpha": cfg.alpha.real, "beta": cfg.beta.real},
        "state": [
            {"probe_target": lab, "re": float(a.real), "im": float(a.imag)}
            for lab, a in zip(labels, state.amps)
        ],
        "null_probability": prob,
        "null_target_state": target_out,
        "null_target_overlap_free": overlap,
        "entanglement_closed": dicke_entanglement(cfg),
        "entanglement_numeric": dicke_entanglement_numeric(cfg),
    }


# --------------------------------------------------------------------------
# serialization


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _json_text(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _sweep_text(command: str, columns: Sequence[str], rows, fmt_name: str) -> str:
    if fmt_name == "json":
        return _json_text({"meta": _meta(command, points=len(rows)), "columns": list(columns), "rows": rows})
    return _csv_text(columns, [[row[c] for c in columns] for row in rows])


def _run_csv(report: dict[str, Any]) -> str:
    rows: list[list[Any]] = []
    for stage, amps in report["stages"].items():
        for entry in amps:
            rows.append([stage, f"{entry['photon']}|{entry['object']}", entry["re"], entry["im"]])
    for key, value in report["probabilities"].items():
        rows.append(["probability", key, value, 0.0])
    for outcome, vec in report["conditional_states"].items():
        if vec is None:
            continue
        for entry in vec:
            rows.append([f"conditional_{outcome}", entry["object"], entry["re"], entry["im"]])
    for key in ("correlation", "correlation_postselected", "entropy_closed", "entropy_numeric",
                "entropy_numeric_object"):
        if report[key] is not None:
            rows.append(["scalar", key, float(report[key]), 0.0])
    return _csv_text(("section", "label", "re", "im"), rows)


def _sample_csv(report: dict[str, Any]) -> str:
    rows = [
        [o.value, report["counts"][o.value], float(report["empirical"][o.value]),
         float(report["expected"][o.value]), float(report["z_scores"][o.value])]
        for o in OUTCOME_ORDER
    ]
    return _csv_text(("outcome", "count", "empirical", "expected", "z_score"), rows)


def _dicke_csv(report: dict[str, Any]) -> str:
    rows: list[list[Any]] = [
        ["state", e["probe_target"].replace(",", "|"), e["re"], e["im"]] for e in report["state"]
    ]
    rows.append(["scalar", "null_probability", float(report["null_probability"]), 0.0])
    if report["null_target_state"] is not None:
        for lab, e in zip(("free", "scatt"), report["null_target_state"]):
            rows.append(["null_target", lab, e["re"], e["im"]])
        rows.append(["scalar", "null_target_overlap_free", float(report["null_target_overlap_free"]), 0.0])
    rows.append(["scalar", "entanglement_closed", float(report["entanglement_closed"]), 0.0])
    rows.append(["scalar", "entanglement_numeric", float(report["entanglement_numeric"]), 0.0])
    return _csv_text(("section", "label", "re", "im"), rows)


def write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {out}: {exc.strerror or exc}") from exc


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifmsim",
        description="Interaction-free measurement interferometer and collision-model simulator.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")

    def amplitudes(p):
        p.add_argument("--alpha", type=float, required=True, help="amplitude on region X / free branch")
        p.add_argument("--beta", type=float, required=True, help="amplitude on region Y / scattered branch")

    p = sub.add_parser("run", help="single interferometer run with every stage")
    amplitudes(p)
    p.add_argument("--gamma", type=float, required=True, help="pass-through amplitude in [0, 1]")
    common(p)

    for name, help_text in (
        ("sweep-alpha", "entanglement and correlation versus |alpha|, full absorption"),
        ("sweep-gamma", "entanglement and DD probability versus gamma, object in |GY>"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--points", type=int, default=101)
        common(p)

    p = sub.add_parser("sample", help="Monte Carlo detector clicks with a 4-sigma frequency check")
    amplitudes(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    common(p)

    p = sub.add_parser("dicke", help="probe/target collision model and its null result")
    amplitudes(p)
    common(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    status = EXIT_OK
    try:
        if args.command == "run":
            report = run_report(args.alpha, args.beta, args.gamma)
            text = _json_text(report) if args.format == "json" else _run_csv(report)
        elif args.command == "sweep-alpha":
            text = _sweep_text(args.command, ALPHA_COLUMNS, sweep_alpha_rows(args.points), args.format)
        elif args.command == "sweep-gamma":
            text = _sweep_text(args.command, GAMMA_COLUMNS, sweep_gamma_rows(args.points), args.format)
        elif args.command == "sample":
            report = sample_report(args.alpha, args.beta, args.gamma, args.n, args.seed)
            text = _json_text(report) if args.format == "json" else _sample_csv(report)
            if not report["passed"]:
                status = EXIT_STAT_FAIL
        elif args.command == "dicke":
            report = dicke_report(args.alpha, args.beta)
            text = _json_text(report) if args.format == "json" else _dicke_csv(report)
        else:  # pragma: no cover - argparse rejects unknown commands
            raise InputError(f"unknown command {args.command}")
        write_output(text, args.out)
    except (InputError, IFMError) as exc:
        print(f"ifmsim: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OutputError as exc:
        print(f"ifmsim: error: {exc}", file=sys.stderr)
        return EXIT_IO
    if status == EXIT_STAT_FAIL:
        print("ifmsim: frequency check failed (|z| >= 4)", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
