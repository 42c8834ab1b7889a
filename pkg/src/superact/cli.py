"""Command-line experiment runner.

Subcommands: ``demo``, ``sweep``, ``entropy``, ``ppt-check`` and ``q1``.
Options may also come from a flat ``key = value`` config file
(``--config``); command-line flags override file values, which override
defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .capacity import coherent_information_state, q1_search, von_neumann_entropy
from .channels import erasure_channel, identity_channel, is_ppt, ppt_distinguishability_bound
from .states import bell, bell_mixture, classically_correlated, flagged_bell, hiding_flags
from .superactivation import run_protocol, sweep

COMMANDS = ("demo", "sweep", "entropy", "ppt-check", "q1")
FORMATS = ("json", "csv")
STATES = ("psi0", "psi1", "classical", "mixture", "flagged", "protocol")
CHANNELS = ("erasure", "identity")

# config-file spellings accepted besides the field names themselves
KEY_ALIASES = {"d": "d_values", "p": "p_values", "out": "output_path", "max-iters": "max_iters"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "demo"
    d_values: list[int] = field(default_factory=lambda: [2])
    p_values: list[float] = field(default_factory=lambda: [0.5])
    seed: int = 42
    restarts: int = 8
    max_iters: int = 200
    output_path: str | None = None
    format: str = "json"
    state: str = "protocol"
    split: list[str] = field(default_factory=lambda: ["B"])
    channel: str = "erasure"
    timing: bool = False

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"command: expected one of {COMMANDS}, got {self.command!r}")
        if not self.d_values:
            raise ConfigError("d_values: must not be empty")
        if any(d < 2 for d in self.d_values):
            raise ConfigError(f"d_values: entries must be >= 2, got {self.d_values}")
        if not self.p_values:
            raise ConfigError("p_values: must not be empty")
        if any(not (0.0 <= p <= 1.0) for p in self.p_values):
            raise ConfigError(f"p_values: entries must lie in [0, 1], got {self.p_values}")
        if self.restarts < 1:
            raise ConfigError(f"restarts: must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters: must be >= 1, got {self.max_iters}")
        if self.format not in FORMATS:
            raise ConfigError(f"format: expected one of {FORMATS}, got {self.format!r}")
        if self.state not in STATES:
            raise ConfigError(f"state: expected one of {STATES}, got {self.state!r}")
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel: expected one of {CHANNELS}, got {self.channel!r}")
        if not self.split:
            raise ConfigError("split: must name at least one factor")
        return self


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


CONVERTERS: dict[str, Callable[[str], object]] = {
    "command": str.strip,
    "d_values": _int_list,
    "p_values": _float_list,
    "seed": int,
    "restarts": int,
    "max_iters": int,
    "output_path": str.strip,
    "format": str.strip,
    "state": str.strip,
    "split": _str_list,
    "channel": str.strip,
    "timing": _bool,
}


def _convert(key: str, raw: str):
    try:
        return CONVERTERS[key](raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r} ({exc})") from None


def read_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, lists are comma-separated."""
    values, unknown = {}, []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = KEY_ALIASES.get(key, key)
        if key not in CONVERTERS:
            unknown.append(key)
            continue
        values[key] = _convert(key, raw)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return values


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="superact", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = _ArgumentParser(add_help=False)
    # default=None marks "not given on the command line"
    common.add_argument("--config", default=None, help="flat key = value config file")
    common.add_argument("--d", dest="d_values", type=str, default=None, help="flag dimensions, e.g. 2,3")
    common.add_argument("--p", dest="p_values", type=str, default=None, help="erasure probabilities")
    common.add_argument("--seed", type=str, default=None)
    common.add_argument("--restarts", type=str, default=None)
    common.add_argument("--max-iters", dest="max_iters", type=str, default=None)
    common.add_argument("--out", dest="output_path", default=None)
    common.add_argument("--format", default=None, choices=FORMATS)
    common.add_argument("--timing", action="store_const", const="true", default=None,
                        help="include per-cell wall times in the output")

    sub.add_parser("demo", parents=[common], help="canonical d=2, p=1/2 run with supporting checks")
    sub.add_parser("sweep", parents=[common], help="run the protocol over a (d, p) grid")
    p_ent = sub.add_parser("entropy", parents=[common], help="entropy and coherent information of a named state")
    p_ent.add_argument("--state", default=None, choices=STATES)
    p_ppt = sub.add_parser("ppt-check", parents=[common], help="partial-transpose test of a named state")
    p_ppt.add_argument("--state", default=None, choices=STATES)
    p_ppt.add_argument("--split", default=None, help="comma-separated labels to transpose")
    p_q1 = sub.add_parser("q1", parents=[common], help="search single-letter coherent information")
    p_q1.add_argument("--channel", default=None, choices=CHANNELS)
    return parser


def parse_config(args: list[str], file: str | Path | None = None) -> RunConfig:
    """Build a validated :class:`RunConfig` from argv-style ``args``.

    Precedence is flags > file > defaults. ``file`` may also be given as
    ``--config`` inside ``args``; an explicit ``--config`` wins.
    """
    args = list(args)
    implicit = not args or args[0].startswith("-") and args[0] not in ("-h", "--help", "--version")
    if implicit:
        args = ["demo"] + args
    ns = vars(build_parser().parse_args(args))
    file = ns.pop("config", None) or file
    merged = {}
    if file is not None:
        merged.update(read_config_file(file))
    command = ns.pop("command")
    if not implicit or "command" not in merged:
        merged["command"] = command
    for key, raw in ns.items():
        if raw is not None:
            merged[key] = _convert(key, raw)
    return RunConfig(**merged).validate()


@dataclass
class ExperimentRecord:
    config: dict
    records: list[dict]
    version: str = __version__
    wall_times: list[float] | None = None

    def to_dict(self) -> dict:
        out = {"config": self.config, "records": self.records, "version": self.version}
        if self.wall_times is not None:
            out["wall_times"] = self.wall_times
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentRecord":
        data = json.loads(text)
        return cls(data["config"], data["records"], data["version"], data.get("wall_times"))

    def to_csv(self) -> str:
        if not self.records:
            return ""
        columns = list(self.records[0])
        if self.wall_times is not None:
            columns.append("wall_time_s")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for i, rec in enumerate(self.records):
            row = dict(rec)
            if self.wall_times is not None:
                row["wall_time_s"] = self.wall_times[i]
            writer.writerow([_fmt(row[c]) for c in columns])
        return buf.getvalue()

    def check_finite(self) -> None:
        for i, rec in enumerate(self.records):
            for key, value in rec.items():
                if isinstance(value, float) and not math.isfinite(value):
                    raise ValueError(f"record {i}: field {key} is not finite ({value})")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _config_echo(config: RunConfig) -> dict:
    echo = asdict(config)
    echo.pop("output_path")
    return echo


def _timed(fn, *args):
    t0 = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - t0


def _named_state(name: str, d: int, p: float):
    if name == "psi0":
        return bell(0).projector()
    if name == "psi1":
        return bell(1).projector()
    if name == "classical":
        return classically_correlated()
    if name == "mixture":
        return bell_mixture(0.75)
    if name == "flagged":
        return flagged_bell(d)
    return run_protocol(d, p).final_ab


def _binary_entropy(x: float) -> float:
    return float(-sum(t * np.log2(t) for t in (x, 1 - x) if t > 0))


def cmd_demo(config: RunConfig | None = None) -> tuple[ExperimentRecord, bool]:
    """Canonical ``d = 2, p = 1/2`` run plus the supporting checks.

    Returns the record and whether every check passed.
    """
    config = config or RunConfig()
    checks = []

    def check(name, value, expected, tol, passed=None):
        if passed is None:
            passed = abs(value - expected) <= tol
        checks.append({"check": name, "value": float(value), "expected": float(expected),
                       "tolerance": float(tol), "passed": bool(passed)})

    report, t_run = _timed(run_protocol, 2, 0.5)
    check("protocol_fidelity_psi0", report.fidelity_psi0, 0.75, 1e-10)
    target = 1 - _binary_entropy(0.25)
    check("protocol_coherent_info", report.i_c, target, 1e-9)
    check("protocol_coherent_info_positive", report.i_c, 0.0, 0.0, passed=report.i_c > 0)

    q1, t_q1 = _timed(q1_search, erasure_channel(0.5, 2), config.restarts, config.max_iters, config.seed)
    check("erasure_q1_lower_bound", q1.best_ic, 0.0, 1e-6, passed=q1.best_ic <= 1e-6)

    bounds = []
    for d in (2, 4, 8):
        tau0, tau1 = hiding_flags(d)
        b = ppt_distinguishability_bound(tau0, tau1, ["B'"])
        bounds.append(b)
        check(f"flag_ppt_bound_d{d}", b, 0.5 + 1 / d, 1e-9)
    check("flag_ppt_bound_decreasing", bounds[-1], 0.5, 0.0,
          passed=all(a > b for a, b in zip(bounds, bounds[1:])))

    classical = coherent_information_state(classically_correlated(), ["B"])
    check("classical_coherent_info", classical.i_c, 0.0, 1e-9)

    record = ExperimentRecord(_config_echo(config), checks,
                              wall_times=[t_run, t_q1] if config.timing else None)
    return record, all(c["passed"] for c in checks)


def cmd_sweep(config: RunConfig) -> ExperimentRecord:
    """Protocol grid, ``d`` outer and ``p`` inner; writes ``config.output_path`` if set."""
    records, times = [], []
    for d in config.d_values:
        for p in config.p_values:
            (report,), dt = _timed(sweep, [d], [p])
            records.append(report.as_dict())
            times.append(dt)
    record = ExperimentRecord(_config_echo(config), records,
                              wall_times=times if config.timing else None)
    record.check_finite()
    return record


def cmd_entropy(config: RunConfig) -> ExperimentRecord:
    d, p = config.d_values[0], config.p_values[0]
    rho = _named_state(config.state, d, p)
    ent = von_neumann_entropy(rho)
    ci = coherent_information_state(rho, ["B"])
    rec = {"state": config.state, "d": d, "p": p, "entropy_bits": ent.entropy_bits,
           "clipped_mass": ent.clipped_mass, "s_b": ci.s_b, "s_ab": ci.s_ab, "i_c": ci.i_c}
    return ExperimentRecord(_config_echo(config), [rec])


def cmd_ppt_check(config: RunConfig) -> ExperimentRecord:
    d, p = config.d_values[0], config.p_values[0]
    rho = _named_state(config.state, d, p)
    result = is_ppt(rho, config.split)
    rec = {"state": config.state, "d": d, "p": p, "split": "+".join(config.split),
           "is_ppt": result.is_ppt, "min_eigenvalue": result.min_eigenvalue}
    return ExperimentRecord(_config_echo(config), [rec])


def cmd_q1(config: RunConfig) -> ExperimentRecord:
    records, times = [], []
    for d in config.d_values:
        for p in config.p_values if config.channel == "erasure" else [0.0]:
            ch = erasure_channel(p, d) if config.channel == "erasure" else identity_channel(d)
            result, dt = _timed(q1_search, ch, config.restarts, config.max_iters, config.seed)
            rec = {"channel": config.channel, "d": d, "p": p, "best_ic": result.best_ic,
                   "iterations": len(result.trace)}
            diag = np.real(np.diag(result.best_input))
            for i, x in enumerate(diag):
                rec[f"best_input_diag_{i}"] = float(x)
            records.append(rec)
            times.append(dt)
    return ExperimentRecord(_config_echo(config), records,
                            wall_times=times if config.timing else None)


def emit(record: ExperimentRecord, config: RunConfig, stream=None) -> None:
    text = record.to_csv() if config.format == "csv" else record.to_json()
    if config.output_path:
        path = Path(config.output_path)
        try:
            path.write_text(text)
        except OSError as exc:
            raise ConfigError(f"output_path: cannot write {path} ({exc.strerror})") from None
    else:
        (stream or sys.stdout).write(text)


def _print_summary(record: ExperimentRecord, stream) -> None:
    width = max(len(c["check"]) for c in record.records)
    print(f"{'check':<{width}}  {'value':>12}  {'expected':>12}  result", file=stream)
    for c in record.records:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{c['check']:<{width}}  {c['value']:>12.6f}  {c['expected']:>12.6f}  {status}", file=stream)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
        if config.command == "demo":
            record, ok = cmd_demo(config)
            _print_summary(record, sys.stdout)
            if config.output_path:
                emit(record, config)
            if not ok:
                failed = [c["check"] for c in record.records if not c["passed"]]
                print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
                return 1
            return 0
        handler = {"sweep": cmd_sweep, "entropy": cmd_entropy,
                   "ppt-check": cmd_ppt_check, "q1": cmd_q1}[config.command]
        emit(handler(config), config)
        return 0
    except ConfigError as exc:
        print(f"superact: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"superact: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
