"""Command-line interface with stable machine-readable output.

Commands: enumerate, solve, sweep, state, verify, sample. Output is JSON
(or CSV for tabular commands), byte-identical for identical configuration
including the seed. Exit codes: 0 success, 1 domain error (one-line
diagnostic on stderr), 2 usage error.
"""

import argparse
import io
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .analysis import (
    SCHEDULE_PROVENANCE,
    compare,
    crossovers,
    sweep,
    three_intersection_schedule,
)
from .model import InstructionArray, PayoffSchedule, expected_payoff, payoff_of_array
from .polytope import PolytopeVertex, enumerate_vertices
from .quantum import (
    born_distribution,
    load_state,
    sample_outcomes,
    state_from_vertex,
    state_to_dict,
    verify_indistinguishability,
)

OUT_ENV_VAR = "AMDRIVER_OUT"


@dataclass(frozen=True)
class RunConfig:
    command: str
    intersections: int | None = None
    exit_payoffs: tuple[float, ...] | None = None
    motel: float | None = None
    payoff_n: float | None = None
    n_min: float | None = None
    n_max: float | None = None
    step: float | None = None
    vertex: str | None = None
    phases: tuple[float, ...] | None = None
    state_file: str | None = None
    shots: int | None = None
    seed: int | None = None
    tol: float | None = None
    format: str = "json"
    out: str | None = None


def vertex_label(vertex_id: tuple[int, ...], n: int) -> str:
    return "+".join(InstructionArray.from_int(code, n).bitstring() for code in vertex_id)


def parse_vertex_label(label: str) -> tuple[int, tuple[int, ...]]:
    """Parse a '+'-joined bit-string label into (n, sorted encodings)."""
    parts = label.split("+")
    if not parts or any(not part or set(part) - {"0", "1"} for part in parts):
        raise ValueError(f"malformed vertex label {label!r}")
    lengths = {len(part) for part in parts}
    if len(lengths) != 1:
        raise ValueError(f"vertex label {label!r} mixes array lengths")
    n = lengths.pop()
    return n, tuple(sorted(int(part, 2) for part in parts))


def _lookup_vertex(label: str) -> PolytopeVertex:
    n, vertex_id = parse_vertex_label(label)
    for vertex in enumerate_vertices(n):
        if vertex.vertex_id == vertex_id:
            return vertex
    raise ValueError(f"{label!r} is not a vertex of the {n}-intersection polytope")


def _schedule_dict(schedule: PayoffSchedule | None) -> dict | None:
    if schedule is None:
        return None
    return {"exit_payoffs": list(schedule.exit_payoffs), "motel": schedule.motel_payoff}


def _metadata(n_intersections: int | None, schedule: PayoffSchedule | None) -> dict:
    return {
        "tool_version": __version__,
        "n_intersections": n_intersections,
        "schedule": _schedule_dict(schedule),
    }


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(payload: dict, out: str | None) -> None:
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", out)


def _schedule_from_config(config: RunConfig, required: bool = True) -> PayoffSchedule | None:
    if config.payoff_n is not None:
        return three_intersection_schedule(config.payoff_n)
    if config.exit_payoffs is None:
        if required:
            raise ValueError("a payoff schedule is required (--exit-payoffs/--motel or --payoff-n)")
        return None
    if config.motel is None:
        raise ValueError("--motel is required with --exit-payoffs")
    schedule = PayoffSchedule(config.exit_payoffs, config.motel)
    if config.intersections is not None and config.intersections != schedule.n:
        raise ValueError(
            f"--intersections {config.intersections} does not match {schedule.n} exit payoffs"
        )
    return schedule


def _run_enumerate(config: RunConfig) -> dict | str:
    n = config.intersections
    vertices = enumerate_vertices(n)
    if config.format == "csv":
        buf = io.StringIO()
        buf.write("vertex,support_size,weights\n")
        for v in vertices:
            weights = "+".join(_fmt(w) for _, w in v.dist.items())
            buf.write(f"{vertex_label(v.vertex_id, n)},{len(v.vertex_id)},{weights}\n")
        return buf.getvalue()
    payload = _metadata(n, None)
    payload["vertices"] = [
        {
            "vertex": vertex_label(v.vertex_id, n),
            "support": [arr.bitstring() for arr, _ in v.dist.items()],
            "weights": [w for _, w in v.dist.items()],
        }
        for v in vertices
    ]
    return payload


def _run_solve(config: RunConfig) -> dict:
    schedule = _schedule_from_config(config)
    result = compare(schedule)
    payload = _metadata(schedule.n, schedule)
    payload["deterministic"] = {
        "payoff": result.deterministic.payoff,
        "action": result.deterministic.action.value,
    }
    payload["probabilistic"] = {
        "p": result.probabilistic.p_star,
        "payoff": result.probabilistic.payoff,
    }
    payload["quantum"] = {
        "payoff": result.quantum.payoff,
        "vertex": vertex_label(result.quantum.vertex_id, schedule.n),
    }
    return payload


def _run_sweep(config: RunConfig) -> dict | str:
    curve = sweep(config.n_min, config.n_max, config.step)
    if config.format == "csv":
        buf = io.StringIO()
        buf.write("n,deterministic,probabilistic,quantum,optimal_vertex\n")
        for row in curve.rows:
            buf.write(
                f"{_fmt(row.n)},{_fmt(row.deterministic)},{_fmt(row.probabilistic)},"
                f"{_fmt(row.quantum)},{vertex_label(row.optimal_vertex_id, 3)}\n"
            )
        return buf.getvalue()
    payload = _metadata(3, None)
    payload["schedule"] = {"exit_payoffs": [0.0, None, 4.0], "motel": 1.0, "varying": "second exit payoff"}
    payload["schedule_provenance"] = SCHEDULE_PROVENANCE
    payload["rows"] = [
        {
            "n": row.n,
            "deterministic": row.deterministic,
            "probabilistic": row.probabilistic,
            "quantum": row.quantum,
            "optimal_vertex": vertex_label(row.optimal_vertex_id, 3),
        }
        for row in curve.rows
    ]
    payload["crossovers"] = [
        {
            "n": c.n,
            "vertex_before": vertex_label(c.vertex_before, 3),
            "vertex_after": vertex_label(c.vertex_after, 3),
        }
        for c in crossovers(curve)
    ]
    return payload


def _run_state(config: RunConfig) -> dict:
    vertex = _lookup_vertex(config.vertex)
    phases = config.phases
    state = state_from_vertex(vertex, phases)
    payload = _metadata(vertex.n, None)
    payload.update(state_to_dict(state))
    return payload


def _run_verify(config: RunConfig) -> dict:
    state = load_state(config.state_file)
    tol = config.tol if config.tol is not None else 1e-9
    ok, max_dev = verify_indistinguishability(state, tol)
    payload = _metadata(state.n, None)
    payload.update({"ok": ok, "max_deviation": max_dev, "tol": tol})
    return payload


def _run_sample(config: RunConfig) -> dict:
    state = load_state(config.state_file)
    schedule = _schedule_from_config(config, required=False)
    if schedule is not None and schedule.n != state.n:
        raise ValueError(f"schedule has {schedule.n} intersections, state has {state.n}")
    outcomes = sample_outcomes(state, config.shots, config.seed)
    counts: dict[str, int] = {}
    for arr in outcomes:
        key = arr.bitstring()
        counts[key] = counts.get(key, 0) + 1
    payload = _metadata(state.n, schedule)
    payload.update({"shots": config.shots, "seed": config.seed, "counts": counts})
    if schedule is not None:
        payoff_by_key = {
            key: payoff_of_array(InstructionArray(tuple(int(b) for b in key)), schedule)
            for key in counts
        }
        total = sum(count * payoff_by_key[key] for key, count in counts.items())
        payload["empirical_mean_payoff"] = total / config.shots
        payload["expected_payoff"] = expected_payoff(born_distribution(state), schedule)
    return payload


_RUNNERS = {
    "enumerate": _run_enumerate,
    "solve": _run_solve,
    "sweep": _run_sweep,
    "state": _run_state,
    "verify": _run_verify,
    "sample": _run_sample,
}


def run(config: RunConfig) -> int:
    """Execute one validated command; returns the process exit code."""
    out = config.out if config.out is not None else os.environ.get(OUT_ENV_VAR)
    try:
        result = _RUNNERS[config.command](config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, str):
        _emit(result, out)
    else:
        _emit_json(result, out)
    return 0


def _csv_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amdriver",
        description=(
            "Optimal deterministic, probabilistic, and entanglement-assisted "
            "strategies for the absent-minded driver decision problem."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help=f"output path (default stdout, or ${OUT_ENV_VAR})")

    def add_schedule(p: argparse.ArgumentParser, with_payoff_n: bool) -> None:
        p.add_argument("--exit-payoffs", type=_csv_floats, help="comma-separated exit payoffs r1,..,rN")
        p.add_argument("--motel", type=float, help="payoff for never exiting")
        p.add_argument("--intersections", type=int, help="number of intersections (consistency check)")
        if with_payoff_n:
            p.add_argument(
                "--payoff-n",
                type=float,
                help="use the three-intersection schedule (0, n, 4; motel 1) with this n",
            )

    p = sub.add_parser("enumerate", help="enumerate polytope vertices")
    p.add_argument("--intersections", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    add_out(p)

    p = sub.add_parser("solve", help="optimal strategies for one schedule")
    add_schedule(p, with_payoff_n=True)
    add_out(p)

    p = sub.add_parser("sweep", help="payoff curves over the three-intersection schedule")
    p.add_argument("--n-min", type=float, required=True)
    p.add_argument("--n-max", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    add_out(p)

    p = sub.add_parser("state", help="build the entangled state for a vertex")
    p.add_argument("--vertex", required=True, help="vertex label, e.g. 001+110")
    p.add_argument("--phases", type=_csv_floats, help="comma-separated phases, one per support array")
    add_out(p)

    p = sub.add_parser("verify", help="check a state file for indistinguishability")
    p.add_argument("--state", required=True, dest="state_file")
    p.add_argument("--tol", type=float, default=1e-9)
    add_out(p)

    p = sub.add_parser("sample", help="draw seeded measurement outcomes from a state file")
    p.add_argument("--state", required=True, dest="state_file")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    add_schedule(p, with_payoff_n=False)
    add_out(p)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {}
    for name in RunConfig.__dataclass_fields__:
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    return RunConfig(**fields)


def _validate_usage(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Flag-combination checks that argparse cannot express; failures are
    usage errors (exit 2), not domain errors."""
    if args.command == "solve":
        if args.payoff_n is not None and args.exit_payoffs is not None:
            parser.error("give either --payoff-n or --exit-payoffs, not both")
        if args.payoff_n is None and args.exit_payoffs is None:
            parser.error("solve needs a schedule: --exit-payoffs/--motel or --payoff-n")
    if args.command in ("solve", "sample"):
        if args.exit_payoffs is not None and args.motel is None:
            parser.error("--motel is required with --exit-payoffs")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate_usage(parser, args)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
