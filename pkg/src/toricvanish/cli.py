"""Batch front door: parse fan files, dispatch subcommands, emit tables.

Every subcommand reads one fan (a JSON file path, a path without the .json
suffix, a name under the TORICVANISH_FIXTURES directory, or a bundled
fixture name) and writes a deterministic report to stdout. The `--format
rows` mode emits machine-readable TSV: the first line is the column schema
(`# col<TAB>col...`), `##` lines carry metadata, and every other line is one
data row. Exit codes: 0 on success, 1 on usage or validation errors, 2 when
a scale limit is hit or an infinite dimension appears in the output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .bundled import FIXTURE_NAMES, load_fixture
from .circuits import enumerate_circuits
from .classgroup import class_group
from .cohomology import (
    DEFAULT_COUNT_CAP,
    INFINITE,
    cohomology_dims,
    local_cohomology_dims,
)
from .discriminantal import mori_generators, nef_generators
from .errors import (
    FanValidationError,
    PreconditionError,
    ScaleLimitError,
    StabilityError,
)
from .fan import ensure_valid, is_complete, load_fan
from .frobenius import in_F, residual_window, vanishing_by_core, zero_flat, in_arithmetic_core
from .mcm import (
    all_triangulations,
    enumerate_mcm,
    mcm_criterion_report,
    regularity_heights,
)
from .surfaces import surface_classify_window

FIXTURE_ROOT_VAR = "TORICVANISH_FIXTURES"

SUBCOMMANDS = (
    "validate", "cohomology", "local-cohomology", "circuits", "gale",
    "picard", "nef", "mori", "frobenius", "core", "residual",
    "classify-surface", "mcm", "mcm-enumerate", "triangulations",
)


class CliError(Exception):
    """A user-facing diagnostic; maps to exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation of the command line tool."""

    fan: str
    subcommand: str
    window: int | None
    char: int
    fmt: str
    cap: int
    divisor: str | None
    class_coords: str | None

    def __post_init__(self):
        if self.window is not None and self.window < 1:
            raise CliError("--window must be at least 1")
        if self.char != 0 and not _is_prime(self.char):
            raise CliError("--char must be zero or a prime")
        if self.cap < 1:
            raise CliError("--cap must be at least 1")
        if self.fmt not in ("table", "rows"):
            raise CliError("--format must be 'table' or 'rows'")


def _is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


# ---------------------------------------------------------------------------
# Fan resolution and value formatting.


def resolve_fan(spec):
    """Load a fan from a path, the fixture root, or the bundled set."""
    candidates = [spec, spec + ".json"]
    root = os.environ.get(FIXTURE_ROOT_VAR)
    if root:
        candidates.append(os.path.join(root, spec))
        candidates.append(os.path.join(root, spec + ".json"))
    for path in candidates:
        if not os.path.isfile(path):
            continue
        try:
            return load_fan(path)
        except json.JSONDecodeError as exc:
            raise CliError(
                f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
            )
        except KeyError as exc:
            raise CliError(f"{path}: missing field {exc.args[0]!r}")
        except (FanValidationError, PreconditionError, ValueError) as exc:
            raise CliError(f"{path}: {exc}")
        except OSError as exc:
            raise CliError(f"{path}: {exc.strerror or exc}")
    if spec in FIXTURE_NAMES:
        return load_fixture(spec)
    raise CliError(
        f"no fan file {spec!r} (also tried the {FIXTURE_ROOT_VAR} root and "
        f"bundled names: {', '.join(FIXTURE_NAMES)})"
    )


def fmt_value(v):
    return "inf" if v == INFINITE else str(v)


def fmt_coords(values):
    values = tuple(values)
    return ",".join(str(v) for v in values) if values else "-"


def class_coords(cls):
    return fmt_coords(tuple(cls.free) + tuple(cls.torsion))


def fmt_cells(cells):
    return "|".join(" ".join(str(i) for i in cell) for cell in cells)


def fmt_bool(flag):
    return "yes" if flag else "no"


def group_description(group):
    parts = []
    if group.free_rank:
        parts.append(f"Z^{group.free_rank}" if group.free_rank > 1 else "Z")
    parts.extend(f"Z/{k}" for k in group.invariants)
    return " + ".join(parts) if parts else "0"


def parse_int_list(text, flag):
    try:
        return tuple(int(part) for part in text.replace(" ", "").split(","))
    except ValueError:
        raise CliError(f"{flag} expects comma-separated integers, got {text!r}")


def resolve_divisor(config, fan, group):
    """The requested divisor as (coefficients, class), from either flag.

    `--divisor` takes the n ray coefficients; a value with as many entries
    as the class group has coordinates is read as a class instead (so rank
    one fans accept a bare integer). `--class` always takes coordinates.
    """
    if config.divisor is not None and config.class_coords is not None:
        raise CliError("give either --divisor or --class, not both")
    n = fan.n_rays
    width = group.free_rank + len(group.invariants)

    def from_class(values):
        free = values[: group.free_rank]
        torsion = values[group.free_rank:]
        cls = group.make_class(free, torsion)
        return tuple(group.lift(cls)), cls

    if config.divisor is not None:
        values = parse_int_list(config.divisor, "--divisor")
        if len(values) == n:
            return values, group.project(values)
        if len(values) == width:
            return from_class(values)
        raise CliError(
            f"--divisor expects {n} coefficients or {width} class coordinates"
        )
    if config.class_coords is not None:
        values = parse_int_list(config.class_coords, "--class")
        if len(values) != width:
            raise CliError(f"--class expects {width} coordinates")
        return from_class(values)
    raise CliError(f"{config.subcommand} needs --divisor or --class")


class Report:
    """Collects output lines; rows mode gets a schema and metadata lines."""

    def __init__(self, config):
        self.rows_mode = config.fmt == "rows"
        self.lines = []
        self.exit = 0

    def schema(self, *columns):
        if self.rows_mode:
            self.lines.append("# " + "\t".join(columns))

    def meta(self, key, value):
        line = f"## {key}: {value}" if self.rows_mode else f"{key}: {value}"
        self.lines.append(line)

    def row(self, *values):
        text = [fmt_value(v) if not isinstance(v, str) else v for v in values]
        if any(t == "inf" for t in text):
            self.exit = 2
        self.lines.append("\t".join(text))

    def text(self, line):
        if not self.rows_mode:
            self.lines.append(line)

    def emit(self, stream):
        for line in self.lines:
            print(line, file=stream)


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_validate(config, fan, group, report):
    ensure_valid(fan)
    report.schema("field", "value")
    pairs = [
        ("fan", fan.name or config.fan),
        ("rays", fan.n_rays),
        ("dimension", fan.dim),
        ("maximal cones", len(fan.max_cones)),
        ("complete", fmt_bool(is_complete(fan))),
        ("subvariety cones",
         len(fan.subvariety) if fan.subvariety is not None else "-"),
        ("class group", group_description(group)),
        ("status", "ok"),
    ]
    for key, value in pairs:
        if report.rows_mode:
            report.row(key, fmt_value(value))
        else:
            report.text(f"{key}: {fmt_value(value)}")


def _divisor_header(config, fan, report, coeffs, cls):
    """The shared header: both divisor forms, per the output contract."""
    report.meta("fan", fan.name or config.fan)
    report.meta("divisor", fmt_coords(coeffs))
    report.meta("class", class_coords(cls))
    if config.char:
        report.meta("characteristic", config.char)


def _dims_report(config, fan, report, coeffs, cls, dims, label):
    degrees = range(fan.dim + 1)
    report.schema("class", "label", *[f"h{q}" for q in degrees])
    _divisor_header(config, fan, report, coeffs, cls)
    values = [dims.get(q, 0) for q in degrees]
    if report.rows_mode:
        report.row(class_coords(cls), label, *values)
    else:
        for q, value in zip(degrees, values):
            report.text(f"h^{q} = {fmt_value(value)}")
    if any(v == INFINITE for v in values):
        report.exit = 2


def cmd_cohomology(config, fan, group, report):
    coeffs, cls = resolve_divisor(config, fan, group)
    dims = cohomology_dims(fan, coeffs, cap=config.cap, char=config.char)
    _dims_report(config, fan, report, coeffs, cls, dims, "cohomology")


def cmd_local_cohomology(config, fan, group, report):
    coeffs, cls = resolve_divisor(config, fan, group)
    dims = local_cohomology_dims(
        fan, coeffs, cap=config.cap, char=config.char
    )
    _dims_report(config, fan, report, coeffs, cls, dims, "local-cohomology")


def cmd_circuits(config, fan, group, report):
    report.schema("index", "indices", "relation", "plus", "minus")
    for k, circuit in enumerate(enumerate_circuits(fan.rays)):
        oc = circuit.oriented()
        fields = (
            fmt_coords(circuit.indices),
            fmt_coords(circuit.alpha),
            fmt_coords(oc.plus),
            fmt_coords(oc.minus),
        )
        if report.rows_mode:
            report.row(str(k), *fields)
        else:
            report.text(
                f"circuit {k}: indices {fields[0]}  relation {fields[1]}"
                f"  plus {fields[2]}  minus {fields[3]}"
            )


def cmd_gale(config, fan, group, report):
    report.schema("ray", "class")
    report.meta("class group", group_description(group))
    for i, cls in enumerate(group.gale_transform()):
        if report.rows_mode:
            report.row(str(i), class_coords(cls))
        else:
            report.text(f"D{i}: {class_coords(cls)}")


def cmd_picard(config, fan, group, report):
    generators, index = group.picard_integral()
    report.schema("field", "value")
    pairs = [
        ("class group", group_description(group)),
        ("picard index", index),
    ]
    pairs.extend(
        (f"picard generator {k}", class_coords(cls))
        for k, cls in enumerate(generators)
    )
    for key, value in pairs:
        if report.rows_mode:
            report.row(key, fmt_value(value))
        else:
            report.text(f"{key}: {fmt_value(value)}")


def _generator_listing(report, label, coords):
    report.schema("index", "class")
    for k, value in enumerate(coords):
        if report.rows_mode:
            report.row(str(k), value)
        else:
            report.text(f"{label} generator {k}: {value}")


def cmd_nef(config, fan, group, report):
    classes = nef_generators(fan, group)
    _generator_listing(report, "nef", [class_coords(cls) for cls in classes])


def cmd_mori(config, fan, group, report):
    rays = mori_generators(fan, group)
    _generator_listing(report, "mori", [fmt_coords(ray) for ray in rays])


def cmd_frobenius(config, fan, group, report):
    coeffs, cls = resolve_divisor(config, fan, group)
    report.schema("circuit", "orientation", "plus", "minus", "member")
    _divisor_header(config, fan, report, coeffs, cls)
    in_all = True
    for k, circuit in enumerate(enumerate_circuits(fan.rays)):
        oc = circuit.oriented()
        for sign, oriented in (("+", oc), ("-", oc.reverse())):
            member = in_F(group, oriented, cls)
            in_all = in_all and member
            fields = (
                str(k), sign, fmt_coords(oriented.plus),
                fmt_coords(oriented.minus), fmt_bool(member),
            )
            if report.rows_mode:
                report.row(*fields)
            else:
                report.text(
                    f"circuit {k} ({sign}): plus {fields[2]}  minus"
                    f" {fields[3]}  member {fields[4]}"
                )
    report.text(f"in every Frobenius set: {fmt_bool(in_all)}")


def cmd_core(config, fan, group, report):
    coeffs, cls = resolve_divisor(config, fan, group)
    verdict = vanishing_by_core(fan, cls)
    essential = in_arithmetic_core(group, zero_flat(group), cls)
    report.schema("test", "result")
    _divisor_header(config, fan, report, coeffs, cls)
    pairs = [
        ("nef core", fmt_bool(verdict["vanishes_by_nef_core"])),
        ("minus-face core", fmt_bool(verdict["vanishes_by_minus_face_core"])),
        ("pair cores", "|".join(
            f"{p},{q}" for p, q in verdict["pairs"]) or "-"),
        ("full arithmetic core", fmt_bool(essential)),
        ("vanishing unexplained", fmt_bool(verdict["unknown"])),
    ]
    for key, value in pairs:
        if report.rows_mode:
            report.row(key, value)
        else:
            report.text(f"{key}: {value}")


def cmd_residual(config, fan, group, report):
    window = config.window if config.window is not None else 15
    classes = residual_window(fan, "0", window)
    report.schema("class", "label")
    report.meta("window", window)
    report.text(f"residual classes: {len(classes)}")
    for cls in classes:
        if report.rows_mode:
            report.row(class_coords(cls), "residual")
        else:
            report.text(f"  {class_coords(cls)}")


def cmd_classify_surface(config, fan, group, report):
    window = config.window if config.window is not None else 15
    buckets = surface_classify_window(fan, window)
    labels = {}
    for label, members in buckets.items():
        for cls in members:
            labels[cls] = label
    if report.rows_mode:
        degrees = range(fan.dim + 1)
        report.schema("class", "label", *[f"h{q}" for q in degrees])
        report.meta("window", window)
        for cls in group.iter_window(window):
            coeffs = group.lift(cls)
            dims = cohomology_dims(
                fan, coeffs, cap=config.cap, char=config.char
            )
            values = [dims.get(q, 0) for q in degrees]
            report.row(class_coords(cls), labels[cls], *values)
        return
    report.meta("window", window)
    for label, members in buckets.items():
        report.text(f"{label}: {len(members)}")
    residual = buckets.get("residual_with_vanishing", [])
    for cls in residual:
        report.text(f"  residual {class_coords(cls)}")


def cmd_mcm(config, fan, group, report):
    coeffs, cls = resolve_divisor(config, fan, group)
    result = mcm_criterion_report(fan, cls)
    witness = fmt_cells(result.witness.cells) if result.witness else "-"
    report.schema(
        "class", "mcm", "all_triangulations_vanish", "witness",
        "simplicial_facets",
    )
    _divisor_header(config, fan, report, coeffs, cls)
    if report.rows_mode:
        report.row(
            class_coords(cls), fmt_bool(result.mcm),
            fmt_bool(result.all_triangulations_vanish), witness,
            fmt_bool(result.simplicial_facets),
        )
        return
    report.text(f"mcm: {fmt_bool(result.mcm)}")
    report.text(
        "all triangulations vanish:"
        f" {fmt_bool(result.all_triangulations_vanish)}"
    )
    report.text(f"witness: {witness}")
    report.text(f"simplicial facets: {fmt_bool(result.simplicial_facets)}")


def cmd_mcm_enumerate(config, fan, group, report):
    classes = enumerate_mcm(fan, window=config.window)
    report.schema("class", "label")
    report.meta("fan", fan.name or config.fan)
    report.text(f"mcm classes: {len(classes)}")
    for cls in classes:
        if report.rows_mode:
            report.row(class_coords(cls), "mcm")
        else:
            report.text(f"  {class_coords(cls)}")


def cmd_triangulations(config, fan, group, report):
    report.schema("index", "cells", "regular", "heights")
    for k, t in enumerate(all_triangulations(fan)):
        heights = regularity_heights(fan, t.cells)
        fields = (
            str(k), fmt_cells(t.cells), fmt_bool(heights is not None),
            " ".join(str(h) for h in heights) if heights else "-",
        )
        if report.rows_mode:
            report.row(*fields)
        else:
            report.text(
                f"triangulation {k}: cells {fields[1]}  regular {fields[2]}"
                f"  heights {fields[3]}"
            )


HANDLERS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "local-cohomology": cmd_local_cohomology,
    "circuits": cmd_circuits,
    "gale": cmd_gale,
    "picard": cmd_picard,
    "nef": cmd_nef,
    "mori": cmd_mori,
    "frobenius": cmd_frobenius,
    "core": cmd_core,
    "residual": cmd_residual,
    "classify-surface": cmd_classify_surface,
    "mcm": cmd_mcm,
    "mcm-enumerate": cmd_mcm_enumerate,
    "triangulations": cmd_triangulations,
}


# ---------------------------------------------------------------------------
# Argument parsing and dispatch.


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser():
    parser = _Parser(
        prog="toricvanish",
        description="Exact divisorial cohomology vanishing on toric varieties.",
    )
    sub = parser.add_subparsers(
        dest="subcommand", metavar="subcommand", parser_class=_Parser
    )
    sub.required = True

    needs_divisor = {
        "cohomology", "local-cohomology", "frobenius", "core", "mcm",
    }
    has_window = {"residual", "classify-surface", "mcm-enumerate"}
    has_char = {"cohomology", "local-cohomology", "classify-surface"}

    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("fan", help="fan file path or fixture name")
        p.add_argument(
            "--format", default="table", choices=("table", "rows"),
            help="output format (default: table)",
        )
        if name in needs_divisor:
            p.add_argument(
                "--divisor", metavar="c1,..,cn",
                help="ray coefficients (or class coordinates when the count"
                " matches the class group instead of the rays)",
            )
            p.add_argument(
                "--class", dest="class_coords", metavar="a1,..",
                help="class group coordinates, free then torsion",
            )
        if name in has_window:
            p.add_argument(
                "--window", type=int, metavar="R",
                help="window radius (default: 15, mcm-enumerate: fan derived)",
            )
        if name in has_char:
            p.add_argument(
                "--char", type=int, default=0, metavar="P",
                help="coefficient field characteristic, 0 or a prime",
            )
        if name in has_char:
            p.add_argument(
                "--cap", type=int, default=DEFAULT_COUNT_CAP, metavar="N",
                help="character listing cap for lattice point counts",
            )
    return parser


def config_from_args(args):
    return RunConfig(
        fan=args.fan,
        subcommand=args.subcommand,
        window=getattr(args, "window", None),
        char=getattr(args, "char", 0),
        fmt=args.format,
        cap=getattr(args, "cap", DEFAULT_COUNT_CAP),
        divisor=getattr(args, "divisor", None),
        class_coords=getattr(args, "class_coords", None),
    )


def run(config, stdout=None, stderr=None):
    """Execute one configured invocation; returns the exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    report = Report(config)
    try:
        fan = resolve_fan(config.fan)
        group = class_group(fan)
        HANDLERS[config.subcommand](config, fan, group, report)
    except CliError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except ScaleLimitError as exc:
        print(f"scale limit: {exc}", file=stderr)
        return 2
    except StabilityError as exc:
        print(f"unstable window: {exc}", file=stderr)
        return 1
    except (FanValidationError, PreconditionError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    report.emit(stdout)
    return report.exit


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
