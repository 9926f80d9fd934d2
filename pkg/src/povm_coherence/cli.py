"""Command-line front end.

Problem files are JSON documents::

    {
      "format_version": "1",
      "povm": [<matrix>, ...],
      "channels": {"u_max": {"kind": "unitary", "matrices": [<matrix>]}, ...},
      "states": {"zero": {"matrix": <matrix>}, "plus": {"bloch": {"p": 1, "theta": 1.57, "phi": 0}}},
      "optimizer": {"restarts": 64, "seed": 0, ...}
    }

A ``<matrix>`` is a row-major nested list whose entries are ``[re, im]``
pairs. Exit codes: 0 success, 1 reproduction failure, 2 parse error,
3 validation error, 4 numerical inconsistency.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from .coherence import povm_relative_entropy_coherence
from .core import BlochPoint, Channel, DensityMatrix, Povm, bloch_state
from .dynamical import OptimizerConfig, power, verdict_from_power
from .errors import CoherenceError, NumericalInconsistencyError, OptimizerError, ValidationError
from .scenarios import (
    U_MAX,
    U_MIN,
    U_MIN_PRIME,
    depolarize_to_mixed,
    four_outcome_povm,
    sweep_pure_states,
)

EXIT_OK, EXIT_REPRO, EXIT_PARSE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3, 4
FORMAT_VERSION = "1"
CHANNEL_KINDS = ("unitary", "kraus", "mixed-unitary")


class ProblemParseError(CoherenceError):
    code = "E_PARSE"


@dataclass
class ProblemFile:
    format_version: str
    povm: list = None
    channels: dict = field(default_factory=dict)
    states: dict = field(default_factory=dict)
    optimizer: dict = field(default_factory=dict)


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(obj, where):
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ProblemParseError(f"{where}: expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(obj):
        vals = []
        for j, z in enumerate(row):
            ok = (
                isinstance(z, list) and len(z) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            )
            if not ok:
                raise ProblemParseError(f"{where}[{i}][{j}]: complex entries must be [re, im] pairs")
            vals.append(complex(z[0], z[1]))
        rows.append(vals)
    if len({len(r) for r in rows}) != 1:
        raise ProblemParseError(f"{where}: rows have different lengths")
    return np.array(rows, dtype=complex)


def _require(obj, key, kind, where):
    if key not in obj:
        raise ProblemParseError(f"{where}: missing field '{key}'")
    if not isinstance(obj[key], kind):
        raise ProblemParseError(f"{where}.{key}: wrong type {type(obj[key]).__name__}")
    return obj[key]


def parse_problem(text):
    """Parse problem-file text; raises ProblemParseError with line/field context."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ProblemParseError("top level must be an object")
    version = _require(doc, "format_version", str, "problem")
    if version != FORMAT_VERSION:
        raise ProblemParseError(f"format_version: unsupported version {version!r}")
    prob = ProblemFile(version)
    if doc.get("povm") is not None:
        effects = _require(doc, "povm", list, "problem")
        prob.povm = [decode_matrix(e, f"povm[{i}]") for i, e in enumerate(effects)]
    for name, ch in doc.get("channels", {}).items():
        where = f"channels.{name}"
        if not isinstance(ch, dict):
            raise ProblemParseError(f"{where}: expected an object")
        kind = _require(ch, "kind", str, where)
        if kind not in CHANNEL_KINDS:
            raise ProblemParseError(f"{where}.kind: must be one of {', '.join(CHANNEL_KINDS)}")
        mats = [decode_matrix(m, f"{where}.matrices[{i}]")
                for i, m in enumerate(_require(ch, "matrices", list, where))]
        weights = ch.get("weights")
        if kind == "mixed-unitary":
            weights = _require(ch, "weights", list, where)
        prob.channels[name] = dict(kind=kind, matrices=mats, weights=weights)
    for name, st in doc.get("states", {}).items():
        where = f"states.{name}"
        if not isinstance(st, dict) or len({"matrix", "bloch"} & set(st)) != 1:
            raise ProblemParseError(f"{where}: give exactly one of 'matrix' or 'bloch'")
        if "matrix" in st:
            prob.states[name] = ("matrix", decode_matrix(st["matrix"], f"{where}.matrix"))
        else:
            b = st["bloch"]
            try:
                prob.states[name] = ("bloch", tuple(float(b[k]) for k in ("p", "theta", "phi")))
            except (KeyError, TypeError, ValueError):
                raise ProblemParseError(f"{where}.bloch: needs numeric p, theta, phi") from None
    opt = doc.get("optimizer", {})
    if not isinstance(opt, dict):
        raise ProblemParseError("optimizer: expected an object")
    unknown = set(opt) - set(OptimizerConfig.__dataclass_fields__)
    if unknown:
        raise ProblemParseError(f"optimizer: unknown fields {sorted(unknown)}")
    prob.optimizer = opt
    return prob


def build_povm(prob):
    if prob.povm is None:
        raise ValidationError("problem file has no 'povm' section")
    return Povm(prob.povm)


def build_channel(prob, name):
    if name not in prob.channels:
        raise ValidationError(f"channel {name!r} is not defined in the 'channels' section")
    ch = prob.channels[name]
    if ch["kind"] == "mixed-unitary":
        return Channel.mixed_unitary(zip(ch["weights"], ch["matrices"]))
    return Channel(ch["kind"], ch["matrices"])


def build_state(prob, name):
    if name not in prob.states:
        raise ValidationError(f"state {name!r} is not defined in the 'states' section")
    kind, data = prob.states[name]
    return DensityMatrix(data) if kind == "matrix" else bloch_state(BlochPoint(*data))


def example_problem():
    """Problem document for the four-outcome qubit example."""
    channels = {
        "identity": dict(kind="unitary", matrices=[encode_matrix(np.eye(2))]),
        "u_max": dict(kind="unitary", matrices=[encode_matrix(U_MAX)]),
        "u_min": dict(kind="unitary", matrices=[encode_matrix(U_MIN)]),
        "u_min_prime": dict(kind="unitary", matrices=[encode_matrix(U_MIN_PRIME)]),
        "lambda_mixed": dict(kind="mixed-unitary", weights=[0.5, 0.5],
                             matrices=[encode_matrix(U_MIN), encode_matrix(U_MIN_PRIME)]),
        "depolarize-to-mixed": dict(kind="kraus",
                                    matrices=[encode_matrix(k) for k in depolarize_to_mixed().operators]),
    }
    states = {
        "|0><0|": dict(matrix=encode_matrix([[1, 0], [0, 0]])),
        "|+><+|": dict(matrix=encode_matrix([[0.5, 0.5], [0.5, 0.5]])),
        "maximally-mixed": dict(matrix=encode_matrix(np.eye(2) / 2)),
        "bloch-example": dict(bloch=dict(p=0.3, theta=float(np.pi / 2), phi=0.0)),
    }
    return dict(
        format_version=FORMAT_VERSION,
        povm=[encode_matrix(e) for e in four_outcome_povm().effects],
        channels=channels,
        states=states,
    )


def _fmt(x):
    x = float(x)
    return f"{(0.0 if abs(x) < 5e-13 else x):.12f}"


def _config(prob, args):
    try:
        cfg = OptimizerConfig(**(prob.optimizer if prob else {}))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"optimizer: {exc}") from None
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.restarts is not None:
        overrides["restarts"] = args.restarts
    if args.grid is not None:
        overrides["grid_resolution"] = (args.grid,) * 3
    if args.tolerance is not None:
        overrides["budget_tolerance"] = args.tolerance
    return replace(cfg, **overrides)


def _record(out, **fields):
    out.write(json.dumps(fields, sort_keys=True) + "\n")


def _read_problem(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text)


def cmd_coherence(args, out):
    prob = _read_problem(args.problem)
    povm = build_povm(prob)
    rho = build_state(prob, args.state)
    value = povm_relative_entropy_coherence(rho, povm)
    out.write(_fmt(value) + "\n")
    _record(out, command="coherence", state=args.state, coherence=float(_fmt(value)))
    return EXIT_OK


def sweep_csv(table):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["theta", "phi", "coherence"]
    if table.coherence_after is not None:
        header.append("coherence_after")
    writer.writerow(header)
    for i in range(len(table)):
        row = [f"{table.theta[i]:.10g}", f"{table.phi[i]:.10g}", _fmt(table.coherence[i])]
        if table.coherence_after is not None:
            row.append(_fmt(table.coherence_after[i]))
        writer.writerow(row)
    return buf.getvalue()


def cmd_sweep(args, out):
    prob = _read_problem(args.problem)
    povm = build_povm(prob)
    channel = build_channel(prob, args.channel) if args.channel else None
    n_theta = args.n_theta or args.grid or 61
    n_phi = args.n_phi or args.grid or 61
    table = sweep_pure_states(povm, channel, n_theta, n_phi)
    out.write(sweep_csv(table))
    return EXIT_OK


def cmd_dynamical(args, out):
    prob = _read_problem(args.problem)
    povm = build_povm(prob)
    channel = build_channel(prob, args.channel)
    cfg = _config(prob, args)
    result = power(channel, Channel.identity(channel.dim), povm, cfg)
    verdict = verdict_from_power(result, cfg)
    measure = max(result.value, 0.0)
    label = "CMIO within budget" if verdict.certified_within_budget else "not CMIO"
    out.write(f"dynamical_coherence = {_fmt(measure)}\n")
    out.write(f"power_over_identity = {_fmt(result.value)}\n")
    out.write(f"oracle_value        = {_fmt(result.oracle_value)}\n")
    pt = result.witness_point
    if pt is not None:
        out.write(f"witness             = p={_fmt(pt.p)} theta={_fmt(pt.theta)} phi={_fmt(pt.phi)}\n")
    out.write(f"verdict             = {label}\n")
    _record(
        out,
        command="dynamical",
        channel=args.channel,
        dynamical_coherence=float(_fmt(measure)),
        oracle_value=float(_fmt(result.oracle_value)),
        witness=None if pt is None else dict(p=pt.p, theta=pt.theta, phi=pt.phi),
        witness_matrix=encode_matrix(result.witness.matrix),
        verdict=label,
        restarts=result.diagnostics.get("restarts"),
    )
    return EXIT_OK


def cmd_paper_repro(args, out):
    from .repro import format_report, run_example_checks

    cfg = _config(None, args)
    checks = run_example_checks(cfg, corrupt=args.corrupt_fixture, ceiling_samples=args.ceiling_samples)
    out.write(format_report(checks) + "\n")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_REPRO


def cmd_example_problem(args, out):
    out.write(json.dumps(example_problem(), indent=1) + "\n")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="optimizer seed")
    common.add_argument("--restarts", type=int, default=None, help="local-search restarts")
    common.add_argument("--grid", type=int, default=None, help="grid points per parameter")
    common.add_argument("--tolerance", type=float, default=None, help="certification budget tolerance")
    common.add_argument("--output", default=None, help="write output to this path")

    parser = argparse.ArgumentParser(prog="povm-coherence", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coherence", parents=[common], help="POVM coherence of a named state")
    p.add_argument("problem")
    p.add_argument("state")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("sweep", parents=[common], help="pure-state sweep as CSV")
    p.add_argument("problem")
    p.add_argument("--channel", default=None)
    p.add_argument("--n-theta", type=int, default=None)
    p.add_argument("--n-phi", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dynamical", parents=[common], help="dynamical coherence of a named channel")
    p.add_argument("problem")
    p.add_argument("channel")
    p.set_defaults(func=cmd_dynamical)

    p = sub.add_parser("paper-repro", parents=[common], help="run the worked-example checks")
    p.add_argument("--ceiling-samples", type=int, default=100)
    p.add_argument("--corrupt-fixture", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_paper_repro)

    p = sub.add_parser("example-problem", parents=[common], help="print the worked-example problem file")
    p.set_defaults(func=cmd_example_problem)
    return parser


def _fail(err, code, exc):
    err.write(f"error[{exc.code}]: {exc}\n")
    return code


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.output is None:
            return args.func(args, out)
        buf = io.StringIO()
        code = args.func(args, buf)
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        return code
    except ProblemParseError as exc:
        return _fail(err, EXIT_PARSE, exc)
    except (NumericalInconsistencyError, OptimizerError) as exc:
        return _fail(err, EXIT_NUMERICAL, exc)
    except ValidationError as exc:
        return _fail(err, EXIT_VALIDATION, exc)


if __name__ == "__main__":
    sys.exit(main())
