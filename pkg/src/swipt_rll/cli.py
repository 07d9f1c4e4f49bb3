"""Command-line front end: ``swipt-rll <subcommand> [options]``.

Every subcommand accepts ``--config FILE`` (TOML); command-line flags win
over file values. Tables go to stdout, or to ``--out`` with a ``.meta``
JSON sidecar holding the resolved configuration. Relative ``--out`` paths
are resolved against ``--out-dir``, which defaults to ``$SWIPT_RLL_OUT_DIR``
or the working directory.

Exit codes: 0 success, 1 infeasible or invalid input, 2 numeric or I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .analytics_constrained import UnsupportedAnalytics, rate_constrained, triple_analytic
from .analytics_unconstrained import of_uf_iid, of_uf_markov_usage, rate_iid
from .chains import ConvergenceError
from .constraint_codes import CodeType, EdgeProbs, RllSpec, capacity_analysis, validate_and_trace
from .link_models import LinkEnv, write_trace_csv
from .optimizer import (
    IID,
    PRESETS,
    SWEEP_HEADER,
    Family,
    OptProblem,
    SweepSpec,
    analytic_supported,
    optimize,
    preset,
    run_sweep,
)
from .simulator import SimConfig, simulate, simulate_trace

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

log = logging.getLogger("swipt_rll")

ENV_OUT_DIR = "SWIPT_RLL_OUT_DIR"
DIGITS = 12
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class InputError(ValueError):
    """Bad user input: config, flags or an infeasible request."""


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ CSV


@dataclass
class Table:
    header: tuple[str, ...]
    rows: list[tuple]


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return format(v, f".{DIGITS}g")
    return str(v)


def parse_cell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    if re.fullmatch(r"[+-]?\d+", s):
        return int(s)
    try:
        return float(s)
    except ValueError:
        return s


def write_table(table: Table, fh, comment: str | None = None, lineterminator: str = "\r\n") -> None:
    if comment:
        fh.write(comment + lineterminator)
    w = csv.writer(fh, lineterminator=lineterminator)
    w.writerow(table.header)
    for row in table.rows:
        w.writerow([format_cell(v) for v in row])


def emit_csv(table: Table, path, comment: str | None = None, meta: dict | None = None) -> Path:
    """Write ``table`` as RFC-4180 CSV, plus ``<path>.meta`` when ``meta`` is given."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        write_table(table, fh, comment)
    if meta is not None:
        Path(str(path) + ".meta").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_csv(path) -> Table:
    """Inverse of ``emit_csv``; ``#`` comment lines are skipped."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("".join(lines))))
    if not rows:
        raise InputError(f"{path}: no header row")
    return Table(tuple(rows[0]), [tuple(parse_cell(c) for c in r) for r in rows[1:]])


# --------------------------------------------------------------- config

# section -> field -> (flag dest, kind)
SCHEMA = {
    "": {"seed": ("seed", "int")},
    "code": {"type": ("type", "str"), "d": ("d", "int"), "k": ("k", "int"),
             "probs": ("probs", "floats"), "p_x": ("p_x", "float"), "p_y": ("p_y", "float"),
             "bits": ("bits", "str")},
    "link": {"p10": ("p10", "float"), "q0": ("q0", "float"), "q1": ("q1", "float"),
             "q": ("q", "float"), "b_max": ("b_max", "int")},
    "sim": {"steps": ("steps", "int"), "burn_in": ("burn_in", "int"), "replications": ("reps", "int"),
            "workers": ("workers", "int"), "b_start": ("b_start", "int"), "usage_start": ("usage_start", "int")},
    "optimize": {"rate": ("rate", "float"), "starts": ("starts", "int"), "ties": ("ties", "str")},
    "sweep": {"preset": ("preset", "str"), "axis": ("axis", "str"), "values": ("values", "floats"),
              "families": ("families", "strs"), "sim_steps": ("sim_steps", "int")},
    "output": {"out": ("out", "str"), "dir": ("out_dir", "str")},
}


def _locate(text: str, section: str, key: str) -> int | None:
    current = ""
    for n, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        m = re.fullmatch(r"\[\s*([^\]]+?)\s*\]", s)
        if m:
            current = m.group(1)
        elif current == section and re.match(rf"{re.escape(key)}\s*=", s):
            return n
    return None


def _coerce(kind: str, v):
    num = (int, float)
    if kind == "int" and isinstance(v, int) and not isinstance(v, bool):
        return v
    if kind == "float" and isinstance(v, num) and not isinstance(v, bool):
        return float(v)
    if kind == "str" and isinstance(v, str):
        return v
    if kind == "floats" and isinstance(v, list) and all(isinstance(x, num) and not isinstance(x, bool) for x in v):
        return [float(x) for x in v]
    if kind == "strs" and isinstance(v, list) and all(isinstance(x, str) for x in v):
        return list(v)
    want = {"int": "an integer", "float": "a number", "str": "a string",
            "floats": "a list of numbers", "strs": "a list of strings"}[kind]
    raise TypeError(f"expected {want}, got {v!r}")


def load_config(path) -> dict:
    """Read a TOML config into ``{flag dest: value}``; errors carry line context."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: {exc}") from exc
    out = {}
    for sec, body in doc.items():
        if not isinstance(body, dict):
            body, sec = {sec: body}, ""
        if sec not in SCHEMA:
            raise InputError(f"{path}: unknown section [{sec}]")
        for key, val in body.items():
            where = _locate(text, sec, key)
            field = f"[{sec}].{key}" if sec else key
            loc = f"{path}:{where}" if where else str(path)
            if key not in SCHEMA[sec]:
                raise InputError(f"{loc}: unknown field {field}")
            dest, kind = SCHEMA[sec][key]
            try:
                out[dest] = _coerce(kind, val)
            except TypeError as exc:
                raise InputError(f"{loc}: field {field}: {exc}") from exc
    return out


def resolve(args: argparse.Namespace) -> dict:
    """Config file values overlaid by explicitly given flags."""
    conf = load_config(args.config) if getattr(args, "config", None) else {}
    for k, v in vars(args).items():
        if k in ("config", "command", "handler", "verbose") or v is None:
            continue
        conf[k] = v
    conf["command"] = args.command
    conf.setdefault("seed", 0)
    return conf


RUNTIME_KEYS = ("workers", "out", "out_dir", "trace")


def recorded(conf: dict) -> dict:
    """The part of a config that determines results (no scheduling or paths)."""
    return {k: v for k, v in conf.items() if k not in RUNTIME_KEYS}


def config_hash(conf: dict) -> str:
    blob = json.dumps(recorded(conf), sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def header_comment(conf: dict) -> str:
    return f"# swipt_rll {__version__} config={config_hash(conf)} seed={conf['seed']}"


# ----------------------------------------------------------- builders


def parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def parse_ties(text: str) -> tuple[tuple[int, ...], ...]:
    """``"0|1|2|3-8|9"`` -> ((0,), (1,), (2,), (3, ..., 8), (9,))."""
    groups = []
    for part in text.split("|"):
        members = []
        for tok in part.split(","):
            tok = tok.strip()
            m = re.fullmatch(r"(\d+)-(\d+)", tok)
            if m:
                members.extend(range(int(m.group(1)), int(m.group(2)) + 1))
            elif tok.isdigit():
                members.append(int(tok))
            else:
                raise InputError(f"bad tie group {part!r} in {text!r}")
        groups.append(tuple(members))
    return tuple(groups)


FAMILY_RE = re.compile(r"(type[01])\((\d+),(\d+)\)(?:\[([\d,|\-]+)\])?")


def parse_family(text: str) -> Family:
    """``iid``, ``type0(0,3)`` or ``type0(0,10)[0|1|2|3-8|9]`` (tie groups)."""
    t = text.replace(" ", "")
    if t == "iid":
        return IID
    m = FAMILY_RE.fullmatch(t)
    if not m:
        raise InputError(f"bad family {text!r}; use iid or type0(d,k)")
    spec = RllSpec(CodeType(m.group(1)), int(m.group(2)), int(m.group(3)))
    ties = parse_ties(m.group(4)) if m.group(4) else None
    return Family(t, spec, ties)


def build_link(conf: dict) -> LinkEnv:
    b_max = conf.get("b_max", 2)
    p10 = conf.get("p10", 0.0)
    if "q" in conf:
        if "q0" in conf or "q1" in conf:
            raise InputError("give either q (i.i.d. demand) or q0/q1, not both")
        return LinkEnv.iid(conf["q"], b_max, p10)
    return LinkEnv(p10, conf.get("q0", 0.5), conf.get("q1", 0.5), b_max)


def build_spec(conf: dict, required: bool = True) -> RllSpec | None:
    typ = conf.get("type")
    if typ in (None, "iid"):
        if required:
            raise InputError("this command needs --type type0|type1 with --d and --k")
        return None
    if typ not in ("type0", "type1"):
        raise InputError(f"unknown code type {typ!r}; use iid, type0 or type1")
    if "d" not in conf or "k" not in conf:
        raise InputError("constrained codes need --d and --k")
    return RllSpec(CodeType(typ), conf["d"], conf["k"])


def build_probs(spec: RllSpec, conf: dict) -> EdgeProbs:
    """Explicit ``probs`` (one value is broadcast), else the maxentropic choice."""
    probs = conf.get("probs")
    if probs is None:
        return capacity_analysis(spec).maxentropic
    if len(probs) == 1 and spec.n_free > 1:
        probs = probs * spec.n_free
    if len(probs) != spec.n_free:
        raise InputError(f"{spec} needs {spec.n_free} edge probabilities (p_{spec.d}..p_{spec.k - 1}), got {len(probs)}")
    return EdgeProbs(probs)


def _p_y(conf: dict, link: LinkEnv) -> float:
    if "p_y" in conf:
        return conf["p_y"]
    if "p_x" in conf:
        return conf["p_x"] * (1.0 - link.p10)
    raise InputError("i.i.d. codes need --p-x or --p-y")


def _joined(values) -> str:
    return ";".join(format_cell(float(v)) for v in values)


# ----------------------------------------------------------- commands


def cmd_capacity(conf):
    spec = build_spec(conf)
    res = capacity_analysis(spec)
    return Table(("type", "d", "k", "lambda", "capacity_bits", "maxentropic", "degenerate"),
                 [(spec.code_type.value, spec.d, spec.k, res.lam, res.capacity_bits,
                   _joined(res.maxentropic.probs), res.degenerate)]), EXIT_OK


def cmd_rate(conf):
    link = build_link(conf)
    spec = build_spec(conf, required=False)
    if spec is None:
        p_y = _p_y(conf, link)
        return Table(("family", "p10", "p_y", "rate"), [("iid", link.p10, p_y, rate_iid(p_y, link.p10))]), EXIT_OK
    P = build_probs(spec, conf)
    return Table(("family", "p10", "probs", "rate"),
                 [(str(spec), link.p10, _joined(P.probs), rate_constrained(spec, P, link.p10))]), EXIT_OK


def _sim_config(conf, link, **source) -> SimConfig:
    return SimConfig(link, steps=conf.get("steps", 1_000_000), burn_in=conf.get("burn_in", 10_000),
                     replications=conf.get("reps", 10), seed=conf["seed"],
                     b_start=conf.get("b_start"), usage_start=conf.get("usage_start", 0), **source)


def cmd_analyze(conf):
    link = build_link(conf)
    spec = build_spec(conf, required=False)
    if spec is None:
        p_y = _p_y(conf, link)
        res = of_uf_iid(p_y, link.q, link.b_max) if link.iid_usage else \
            of_uf_markov_usage(p_y, link.q0, link.q1, link.b_max)
        header = ("p_y", "q0", "q1", "B_max", "rate", "p_of", "p_uf", "source")
        return Table(header, [(p_y, link.q0, link.q1, link.b_max, rate_iid(p_y, link.p10),
                               res.p_of, res.p_uf, "analytic")]), EXIT_OK
    P = build_probs(spec, conf)
    rate = rate_constrained(spec, P, link.p10)
    if analytic_supported(spec, link):
        tr = triple_analytic(spec, P, link.p10, link.q, link.b_max)
        p_of, p_uf, source = tr.p_of, tr.p_uf, "analytic"
    else:
        log.info("no closed form for %s under this link; simulating", spec)
        est = simulate(_sim_config(conf, link, spec=spec, probs=P), workers=conf.get("workers", 1))
        p_of, p_uf, source = est.p_of, est.p_uf, "empirical"
    header = ("type", "d", "k", *[f"p{j}" for j in range(spec.d, spec.k)],
              "p10", "q0", "q1", "B_max", "rate", "p_of", "p_uf", "source")
    row = (spec.code_type.value, spec.d, spec.k, *P.probs, link.p10, link.q0, link.q1, link.b_max,
           rate, p_of, p_uf, source)
    return Table(header, [row]), EXIT_OK


def cmd_optimize(conf):
    link = build_link(conf)
    if "rate" not in conf:
        raise InputError("optimize needs --rate")
    spec = build_spec(conf, required=False)
    ties = parse_ties(conf["ties"]) if conf.get("ties") else None
    prob = OptProblem(conf["rate"], link, spec if spec is not None else "iid", ties,
                      starts=conf.get("starts", 8), seed=conf["seed"],
                      sim_steps=conf.get("steps", 1_000_000), sim_burn_in=conf.get("burn_in", 10_000))
    res = optimize(prob)
    header = ("family", "target_rate", "feasible", "params", "rate", "p_of", "p_uf", "objective", "source", "message")
    if not res.feasible:
        print(f"infeasible: {res.message}", file=sys.stderr)
        return Table(header, [(res.family, prob.rate, False, "", None, None, None, None, "infeasible",
                               res.message)]), EXIT_INPUT
    t = res.triple
    return Table(header, [(res.family, prob.rate, True, _joined(res.params), t.rate, t.p_of, t.p_uf,
                           res.objective, res.source, "")]), EXIT_OK


def cmd_simulate(conf):
    link = build_link(conf)
    spec = build_spec(conf, required=False)
    if spec is None:
        if "p_x" not in conf:
            raise InputError("simulating an i.i.d. code needs --p-x")
        cfg = _sim_config(conf, link, p_x=conf["p_x"])
    else:
        cfg = _sim_config(conf, link, spec=spec, probs=build_probs(spec, conf))
    est = simulate(cfg, workers=conf.get("workers", 1))
    if conf.get("trace"):
        path = write_trace_csv(simulate_trace(cfg), _out_path(conf, conf["trace"]))
        log.info("trace of replication 0 written to %s (battery starts at %d)", path, cfg.initial_battery)
    header = ("p_of", "p_uf", "se_of", "se_uf", "n", "reps", "seed")
    return Table(header, [(est.p_of, est.p_uf, est.se_of, est.se_uf, est.n, est.reps, est.seed)]), EXIT_OK


def build_sweep(conf) -> SweepSpec:
    sim_steps = conf.get("sim_steps")
    starts = conf.get("starts", 8)
    if conf.get("preset"):
        if conf["preset"] not in PRESETS:
            raise InputError(f"unknown preset {conf['preset']!r}; choose from {', '.join(PRESETS)}")
        return preset(conf["preset"], seed=conf["seed"], sim_steps=sim_steps, starts=starts)
    missing = [k for k in ("axis", "values", "families") if k not in conf]
    if missing:
        raise InputError(f"custom sweeps need {', '.join(missing)} (or use --preset)")
    extra = {}
    if sim_steps is not None:
        extra = {"sim_steps": sim_steps, "sim_burn_in": min(10_000, sim_steps // 10)}
    return SweepSpec("custom", conf["axis"], tuple(conf["values"]),
                     tuple(parse_family(f) for f in conf["families"]), build_link(conf),
                     conf.get("rate", 0.1), seed=conf["seed"], starts=starts, **extra)


def cmd_sweep(conf):
    sweep = build_sweep(conf)
    rows = run_sweep(sweep, workers=conf.get("workers", 1))
    for r in rows:
        if r.error:
            log.warning("%s at %s=%s failed: %s", r.family, r.axis, r.value, r.error)
    return Table(SWEEP_HEADER, [r.cells() for r in rows]), EXIT_OK


def cmd_validate(conf):
    spec = build_spec(conf)
    bits = conf.get("bits")
    if not bits:
        raise InputError("validate needs --bits")
    res = validate_and_trace(bits, spec)
    if res.valid:
        return ["valid", "states " + ",".join(map(str, res.states))], EXIT_OK
    return [f"invalid: {res.reason}"], EXIT_INPUT


# --------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _probability(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{v} is not a probability")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="TOML config file; flags override its values")
    common.add_argument("--seed", type=int, help="master seed (default 0)")
    common.add_argument("--out", help="write the table to this CSV file (default: stdout)")
    common.add_argument("--out-dir", help=f"base for relative --out paths (default ${ENV_OUT_DIR} or .)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    code = _Parser(add_help=False)
    code.add_argument("--type", choices=("iid", "type0", "type1"))
    code.add_argument("--d", type=int)
    code.add_argument("--k", type=int)
    code.add_argument("--probs", type=parse_floats, help="edge probabilities p_d..p_{k-1} (default maxentropic)")
    code.add_argument("--p-x", type=_probability, dest="p_x", help="on-probability of an i.i.d. code")
    code.add_argument("--p-y", type=_probability, dest="p_y", help="received on-probability (rate, analyze)")

    link = _Parser(add_help=False)
    link.add_argument("--p10", type=_probability, help="probability a transmitted 1 is lost (default 0)")
    link.add_argument("--q0", type=_probability, help="stay-idle probability in U0 (default 0.5)")
    link.add_argument("--q1", type=_probability, help="keep-demanding probability in U1 (default 0.5)")
    link.add_argument("--q", type=_probability, help="i.i.d. demand probability (sets q0=1-q, q1=q)")
    link.add_argument("--b-max", type=int, dest="b_max", help="battery capacity (default 2)")

    sim = _Parser(add_help=False)
    sim.add_argument("--steps", type=int, help="counted steps per replication (default 10^6)")
    sim.add_argument("--burn-in", type=int, dest="burn_in", help="discarded steps (default 10^4)")
    sim.add_argument("--reps", type=int, help="replications (default 10)")
    sim.add_argument("--workers", type=int, help="parallel workers (results do not depend on it)")

    p = _Parser(prog="swipt-rll", description="Run-length-limited codes for joint information and energy transfer.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, fn, parents, help_):
        sp = sub.add_parser(name, parents=[common, *parents], help=help_, description=help_)
        sp.set_defaults(handler=fn)
        return sp

    add("capacity", cmd_capacity, [code], "Constraint capacity and maxentropic edge probabilities.")
    add("rate", cmd_rate, [code, link], "Achievable information rate of a code over the channel.")
    add("analyze", cmd_analyze, [code, link, sim], "Rate, overflow and underflow probabilities of a code.")
    sp = add("optimize", cmd_optimize, [code, link, sim], "Minimize max(overflow, underflow) at a target rate.")
    sp.add_argument("--rate", type=float, help="target information rate (bits per channel use)")
    sp.add_argument("--starts", type=int, help="multi-start count (default 8)")
    sp.add_argument("--ties", help='tie groups of states sharing one probability, e.g. "0|1|2|3-8|9"')
    sp = add("simulate", cmd_simulate, [code, link, sim], "Monte Carlo estimate of overflow and underflow.")
    sp.add_argument("--trace", help="also dump replication 0 slot by slot to this CSV")
    sp.add_argument("--b-start", type=int, dest="b_start", help="initial battery level (default b_max // 2)")
    sp.add_argument("--usage-start", type=int, choices=(0, 1), dest="usage_start", help="initial usage state")
    sp = add("sweep", cmd_sweep, [link], "Optimize code families along one parameter axis.")
    sp.add_argument("--preset", choices=PRESETS)
    sp.add_argument("--axis", choices=("q0", "R", "p10"))
    sp.add_argument("--values", type=parse_floats)
    sp.add_argument("--families", type=lambda s: [f for f in s.split(";") if f],
                    help='semicolon-separated, e.g. "iid;type0(0,3)"')
    sp.add_argument("--rate", type=float)
    sp.add_argument("--starts", type=int)
    sp.add_argument("--sim-steps", type=int, dest="sim_steps", help="simulation length per objective evaluation")
    sp.add_argument("--workers", type=int, help="worker processes (results do not depend on it)")
    sp = add("validate", cmd_validate, [code], "Check a bit string against a (d,k) constraint and trace its states.")
    sp.add_argument("--bits", help="ASCII 0/1 string")
    return p


def _out_path(conf: dict, out: str) -> Path:
    path = Path(out)
    if not path.is_absolute():
        base = conf.get("out_dir") or os.environ.get(ENV_OUT_DIR) or "."
        path = Path(base) / path
    return path


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        conf = resolve(args)
        result, code = args.handler(conf)
        comment = header_comment(conf)
        if isinstance(result, list):
            text = "\n".join([comment, *result]) + "\n"
            if conf.get("out"):
                _out_path(conf, conf["out"]).write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
            return code
        if conf.get("out"):
            meta = {"version": __version__, "config": recorded(conf), "config_hash": config_hash(conf),
                    "seed": conf["seed"], "columns": list(result.header)}
            path = emit_csv(result, _out_path(conf, conf["out"]), comment, meta)
            log.info("wrote %d rows to %s", len(result.rows), path)
        else:
            write_table(result, sys.stdout, comment, lineterminator="\n")
        return code
    except (InputError, UnsupportedAnalytics) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
