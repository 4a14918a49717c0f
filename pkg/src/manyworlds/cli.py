"""Command-line interface: every analysis as a reproducible subcommand.

Identical invocations write byte-identical output. Results go to stdout, to
``--output``, or (when ``--output`` is absent) to the directory named by the
MANYWORLDS_OUT_DIR environment variable under ``<subcommand>.<ext>``.

Exit codes: 0 success, 1 runtime error (capacity overruns name the flag that
raises the cap), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .branches import (
    DEFAULT_ENUMERATION_CAP,
    enumerate_branches,
    everett_limit_scan,
    measure_report_analytic,
    measure_report_exact,
)
from .errors import CapacityError, ValidationError
from .measurement import SpinPreparation, overlap_curve, premeasure
from .sampling import (
    COUNTING_SEED_OFFSET,
    MaverickCriterion,
    compare_runs,
    sample_born,
    sample_counting,
)

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "MANYWORLDS_OUT_DIR"
DEFAULT_EPSILON = 0.05
DEFAULT_THETA = math.pi / 2.0

REPORT_COLUMNS = [
    "n",
    "p",
    "epsilon",
    "counting_maverick_fraction",
    "born_maverick_weight",
    "log10_born_maverick_weight",
    "hoeffding_bound",
]
OVERLAP_COLUMNS = ["n_env", "overlap", "log10_overlap"]
BRANCH_COLUMNS = ["bits", "amplitude_re", "amplitude_im", "born_weight", "plus_count"]
SAMPLE_COLUMNS = ["mode", "n", "trials", "seed", "p", "k", "count"]
COMPARE_COLUMNS = [
    "n",
    "p",
    "epsilon",
    "born_trials",
    "counting_trials",
    "born_empirical_maverick",
    "born_expected_maverick",
    "born_zscore",
    "counting_empirical_maverick",
    "counting_expected_maverick",
    "counting_zscore",
]
STATE_COLUMNS = ["index", "re", "im"]


@dataclass
class RunConfig:
    """Parsed invocation: subcommand, typed parameters, output destination."""

    subcommand: str
    params: dict[str, Any] = field(default_factory=dict)
    output_format: str = "json"
    output_path: str | None = None

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "params": self.params,
            "output_format": self.output_format,
            "output_path": self.output_path,
        }

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        return cls(
            subcommand=data["subcommand"],
            params=dict(data["params"]),
            output_format=data["output_format"],
            output_path=data["output_path"],
        )


def _parse_amplitude(text: str) -> dict[str, float]:
    """Amplitude input: 're', 're,im', or 'mag@phase' (phase in radians)."""
    try:
        if "@" in text:
            mag, _, phase = text.partition("@")
            return {"mag": float(mag), "phase": float(phase)}
        if "," in text:
            re, _, im = text.partition(",")
            return {"re": float(re), "im": float(im)}
        return {"re": float(text), "im": 0.0}
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 're', 're,im' or 'mag@phase', got {text!r}"
        ) from None


def _amplitude_complex(spec: dict[str, float]) -> complex:
    if "mag" in spec:
        import cmath

        return cmath.rect(spec["mag"], spec["phase"])
    return complex(spec["re"], spec["im"])


def _prep_from_params(params: dict) -> SpinPreparation:
    if params.get("p") is not None:
        return SpinPreparation.from_probability(params["p"])
    cp, cm = params["c_plus"], params["c_minus"]
    if "mag" in cp and "mag" in cm:
        return SpinPreparation.from_polar(cp["mag"], cm["mag"], cp["phase"], cm["phase"])
    return SpinPreparation(_amplitude_complex(cp), _amplitude_complex(cm))


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("need at least one spin count")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manyworlds",
        description="No-collapse measurement simulator and branch-measure analyzer.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_output_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    def add_amplitude_flags(p: argparse.ArgumentParser, with_p: bool = True) -> None:
        p.add_argument("--c-plus", type=_parse_amplitude, default=None, metavar="AMP")
        p.add_argument("--c-minus", type=_parse_amplitude, default=None, metavar="AMP")
        if with_p:
            p.add_argument("--p", type=float, default=None, help="plus probability |c+|^2")

    p = sub.add_parser("premeasure", help="entangle one spin with the apparatus qubit")
    add_amplitude_flags(p)
    add_output_flags(p)

    p = sub.add_parser("decohere", help="record overlap versus environment size")
    p.add_argument("--theta", type=float, default=DEFAULT_THETA, help="kick angle in radians")
    p.add_argument("--env-max", type=int, default=20, help="largest environment size")
    add_output_flags(p)

    p = sub.add_parser("branches", help="enumerate all outcome branches")
    p.add_argument("--n", type=int, required=True, help="number of spins")
    add_amplitude_flags(p)
    p.add_argument("--max-qubits", type=int, default=DEFAULT_ENUMERATION_CAP)
    add_output_flags(p)

    p = sub.add_parser("measures", help="counting vs Born maverick statistics")
    p.add_argument("--n", type=int, required=True)
    add_amplitude_flags(p)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--max-qubits", type=int, default=DEFAULT_ENUMERATION_CAP,
                   help="largest n evaluated by full enumeration")
    add_output_flags(p)

    p = sub.add_parser("everett", help="maverick weights across growing spin counts")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--n", type=_parse_n_list, required=True, metavar="N1,N2,...")
    add_output_flags(p)

    p = sub.add_parser("sample", help="simulate repeated collapse-style trials")
    p.add_argument("--mode", choices=["born", "counting"], required=True)
    add_amplitude_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    add_output_flags(p)

    p = sub.add_parser("compare", help="Born sampling against counting sampling")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    add_output_flags(p)

    return parser


def _validate_probability(parser, flag: str, value: float | None) -> None:
    if value is not None and not 0.0 <= value <= 1.0:
        parser.error(f"{flag} must lie in [0, 1], got {value}")


def _validate_amplitudes(parser, args) -> None:
    has_amps = args.c_plus is not None or args.c_minus is not None
    has_p = getattr(args, "p", None) is not None
    if has_p and has_amps:
        parser.error("--p and --c-plus/--c-minus are mutually exclusive")
    if has_amps and (args.c_plus is None or args.c_minus is None):
        parser.error("--c-plus and --c-minus must be given together")
    if not has_p and not has_amps:
        parser.error("need --p or both of --c-plus/--c-minus")
    if has_amps:
        try:
            _prep_from_params({"c_plus": args.c_plus, "c_minus": args.c_minus, "p": None})
        except ValidationError as exc:
            parser.error(f"--c-plus/--c-minus: {exc}")
    else:
        _validate_probability(parser, "--p", args.p)


def parse_args(argv: list[str] | None = None) -> RunConfig:
    """Parse an invocation into a RunConfig; usage problems exit with code 2."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    cmd = args.subcommand
    params: dict[str, Any] = {}

    if cmd == "premeasure":
        _validate_amplitudes(parser, args)
        params = {"c_plus": args.c_plus, "c_minus": args.c_minus, "p": getattr(args, "p", None)}
    elif cmd == "decohere":
        if not 0.0 <= args.theta <= math.pi:
            parser.error(f"--theta must lie in [0, pi], got {args.theta}")
        if args.env_max < 0:
            parser.error(f"--env-max must be nonnegative, got {args.env_max}")
        params = {"theta": args.theta, "env_max": args.env_max}
    elif cmd == "branches":
        if args.n < 1:
            parser.error(f"--n must be at least 1, got {args.n}")
        _validate_amplitudes(parser, args)
        params = {
            "n": args.n,
            "c_plus": args.c_plus,
            "c_minus": args.c_minus,
            "p": args.p,
            "max_qubits": args.max_qubits,
        }
    elif cmd == "measures":
        if args.n < 1:
            parser.error(f"--n must be at least 1, got {args.n}")
        if not 0.0 < args.epsilon < 1.0:
            parser.error(f"--epsilon must lie in (0, 1), got {args.epsilon}")
        _validate_amplitudes(parser, args)
        params = {
            "n": args.n,
            "c_plus": args.c_plus,
            "c_minus": args.c_minus,
            "p": args.p,
            "epsilon": args.epsilon,
            "max_qubits": args.max_qubits,
        }
    elif cmd == "everett":
        _validate_probability(parser, "--p", args.p)
        if not 0.0 < args.epsilon < 1.0:
            parser.error(f"--epsilon must lie in (0, 1), got {args.epsilon}")
        if any(b <= a for a, b in zip(args.n, args.n[1:])):
            parser.error(f"--n values must be strictly ascending, got {args.n}")
        if args.n[0] < 1:
            parser.error("--n values must be at least 1")
        params = {"p": args.p, "epsilon": args.epsilon, "n_values": args.n}
    elif cmd == "sample":
        if args.n < 1:
            parser.error(f"--n must be at least 1, got {args.n}")
        if args.trials < 1:
            parser.error(f"--trials must be at least 1, got {args.trials}")
        if not 0 <= args.seed < (1 << 64):
            parser.error(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
        if args.mode == "counting":
            if args.p is not None or args.c_plus is not None or args.c_minus is not None:
                parser.error("counting mode samples observers uniformly and takes no preparation")
            params = {"mode": "counting", "n": args.n, "trials": args.trials, "seed": args.seed}
        else:
            _validate_amplitudes(parser, args)
            params = {
                "mode": "born",
                "c_plus": args.c_plus,
                "c_minus": args.c_minus,
                "p": args.p,
                "n": args.n,
                "trials": args.trials,
                "seed": args.seed,
            }
    elif cmd == "compare":
        _validate_probability(parser, "--p", args.p)
        if not 0.0 < args.epsilon < 1.0:
            parser.error(f"--epsilon must lie in (0, 1), got {args.epsilon}")
        if args.n < 1:
            parser.error(f"--n must be at least 1, got {args.n}")
        if args.trials < 1:
            parser.error(f"--trials must be at least 1, got {args.trials}")
        if not 0 <= args.seed < (1 << 64):
            parser.error(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
        params = {
            "p": args.p,
            "epsilon": args.epsilon,
            "n": args.n,
            "trials": args.trials,
            "seed": args.seed,
        }

    return RunConfig(
        subcommand=cmd,
        params=params,
        output_format=args.format,
        output_path=args.output,
    )


def _json_safe(value):
    """Replace non-finite floats with None so the JSON stays standard."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _format_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _render(config: RunConfig, columns: list[str], rows: list[dict], results) -> str:
    if config.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in columns])
        return buf.getvalue()
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": config.subcommand,
        "params": _json_safe(config.params),
        "results": _json_safe(results),
    }
    return json.dumps(envelope, indent=2) + "\n"


def _execute(config: RunConfig) -> str:
    params = config.params
    cmd = config.subcommand

    if cmd == "premeasure":
        state = premeasure(_prep_from_params(params))
        pairs = state.to_pairs()
        rows = [
            {"index": i, "re": re, "im": im} for i, (re, im) in enumerate(pairs)
        ]
        results = {"num_qubits": state.num_qubits, "amplitudes": pairs}
        return _render(config, STATE_COLUMNS, rows, results)

    if cmd == "decohere":
        curve = overlap_curve(params["theta"], params["env_max"])
        rows = curve.rows()
        return _render(config, OVERLAP_COLUMNS, rows, rows)

    if cmd == "branches":
        prep = _prep_from_params(params)
        rows = []
        results = []
        for branch in enumerate_branches(prep, params["n"], max_bits=params["max_qubits"]):
            rows.append(
                {
                    "bits": branch.outcome_bits,
                    "amplitude_re": branch.amplitude.real,
                    "amplitude_im": branch.amplitude.imag,
                    "born_weight": branch.born_weight,
                    "plus_count": branch.plus_count,
                }
            )
            results.append(
                {
                    "bits": branch.outcome_bits,
                    "amplitude": [branch.amplitude.real, branch.amplitude.imag],
                    "born_weight": branch.born_weight,
                    "plus_count": branch.plus_count,
                }
            )
        return _render(config, BRANCH_COLUMNS, rows, results)

    if cmd == "measures":
        n, epsilon = params["n"], params["epsilon"]
        if n <= params["max_qubits"]:
            report = measure_report_exact(
                _prep_from_params(params), n, epsilon, max_bits=params["max_qubits"]
            )
        else:
            prep = _prep_from_params(params)
            report = measure_report_analytic(prep.p, n, epsilon)
        row = report.to_row()
        return _render(config, REPORT_COLUMNS, [row], row)

    if cmd == "everett":
        reports = everett_limit_scan(params["p"], params["epsilon"], params["n_values"])
        rows = [r.to_row() for r in reports]
        return _render(config, REPORT_COLUMNS, rows, rows)

    if cmd == "sample":
        if params["mode"] == "born":
            prep = _prep_from_params(params)
            run_ = sample_born(prep, params["n"], params["trials"], params["seed"])
            p_used = prep.p
        else:
            run_ = sample_counting(params["n"], params["trials"], params["seed"])
            p_used = 0.5
        rows = [
            {
                "mode": run_.mode,
                "n": run_.n,
                "trials": run_.trials,
                "seed": run_.seed,
                "p": p_used,
                "k": k,
                "count": count,
            }
            for k, count in sorted(run_.outcome_histogram.items())
        ]
        return _render(config, SAMPLE_COLUMNS, rows, run_.to_dict())

    if cmd == "compare":
        crit = MaverickCriterion(epsilon=params["epsilon"], p=params["p"])
        prep = SpinPreparation.from_probability(params["p"])
        born = sample_born(prep, params["n"], params["trials"], params["seed"])
        counting = sample_counting(
            params["n"], params["trials"], (params["seed"] + COUNTING_SEED_OFFSET) % (1 << 64)
        )
        comparison = compare_runs(born, counting, crit)
        row = comparison.to_dict()
        return _render(config, COMPARE_COLUMNS, [row], row)

    raise ValidationError(f"unknown subcommand {cmd!r}")


def _resolve_output_path(config: RunConfig) -> Path | None:
    if config.output_path:
        return Path(config.output_path)
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        ext = "csv" if config.output_format == "csv" else "json"
        return Path(out_dir) / f"{config.subcommand}.{ext}"
    return None


def run(config: RunConfig) -> int:
    """Execute a parsed config; returns the process exit code."""
    try:
        text = _execute(config)
    except CapacityError as exc:
        print(f"error: {exc} (raise it with --max-qubits)", file=sys.stderr)
        return 1
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    path = _resolve_output_path(config)
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as exc:
            print(f"error: cannot write {path}: {exc}", file=sys.stderr)
            return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
