"""``heis-depth``: command-line front end.

Exit codes: 0 success/PASS, 1 FAIL verdict, 2 usage or config error,
3 resource cap (memory, overflow, insufficient radius).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .construct import fattest_family, interpolate, isoperimetrix
from .genset import GenSetError, hull, load_genset
from .metric import (
    DEFAULT_MEMORY_CAP,
    InsufficientRadius,
    MemoryCapExceeded,
    enumerate_ball,
    retreat_profile,
)
from .verify import (
    CHECKS,
    CheckReport,
    Verdict,
    check_depth_growth,
    format_value,
    reports_to_csv,
    reports_to_json,
    run_checks,
    worst_verdict,
)

log = logging.getLogger("heisdepth")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    genset_path: Path
    radius: int
    escape_radius: int | None = None
    memory_cap: int = DEFAULT_MEMORY_CAP
    output_format: str = "json"
    output_path: Path | None = None

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise UsageError("--radius must be nonnegative")
        if self.memory_cap <= 0:
            raise UsageError("--memory-cap must be positive")
        if self.escape_radius is not None and self.escape_radius > self.radius:
            raise UsageError("--escape must not exceed --radius")


def _dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _dump_rows(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, cfg: CliConfig) -> None:
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        cfg.output_path.write_text(text, encoding="utf-8")


def _emit_reports(reports: list[CheckReport], cfg: CliConfig, single: bool) -> int:
    if cfg.output_format == "csv":
        _emit(reports_to_csv(reports), cfg)
    else:
        _emit(reports_to_json(reports[0] if single else reports), cfg)
    verdict = worst_verdict(reports)
    if verdict is Verdict.FAIL:
        return EXIT_FAIL
    if verdict is Verdict.INCONCLUSIVE:
        return EXIT_RESOURCE
    return EXIT_OK


# --- subcommands ------------------------------------------------------------


def cmd_ball(cfg: CliConfig, args) -> int:
    gens = load_genset(cfg.genset_path)
    table = enumerate_ball(gens, cfg.radius, parents=False, memory_cap=cfg.memory_cap)
    cumulative, rows = 0, []
    for n, count in enumerate(table.counts):
        cumulative += count
        rows.append([n, count, cumulative])
    if cfg.output_format == "csv":
        _emit(_dump_rows(["length", "sphere", "ball"], rows), cfg)
    else:
        _emit(
            _dump_json(
                {
                    "genset": gens.name,
                    "radius": cfg.radius,
                    "size": len(table),
                    "counts": list(table.counts),
                }
            ),
            cfg,
        )
    return EXIT_OK


def cmd_depth_profile(cfg: CliConfig, args) -> int:
    gens = load_genset(cfg.genset_path)
    report = check_depth_growth(gens, cfg.radius, memory_cap=cfg.memory_cap)
    return _emit_reports([report], cfg, single=True)


def cmd_retreat(cfg: CliConfig, args) -> int:
    gens = load_genset(cfg.genset_path)
    escape = cfg.escape_radius if cfg.escape_radius is not None else cfg.radius
    if escape < 1:
        raise UsageError("--escape must be at least 1")
    table = enumerate_ball(gens, cfg.radius, parents=False, memory_cap=cfg.memory_cap)
    prof = retreat_profile(table, escape)
    by_length: dict[int, list[int]] = {}
    for g, d in prof.items():
        by_length.setdefault(table.lengths[g], []).append(d)
    rows = [[ell, len(ds), max(ds), 0] for ell, ds in sorted(by_length.items())]
    if cfg.output_format == "csv":
        _emit(_dump_rows(["length", "elements", "max_retreat_depth", "unknown"], rows), cfg)
    else:
        _emit(
            _dump_json(
                {
                    "genset": gens.name,
                    "radius": cfg.radius,
                    "escape_radius": escape,
                    "profile": [
                        {"length": r[0], "elements": r[1], "max_retreat_depth": r[2], "unknown": r[3]}
                        for r in rows
                    ],
                    "note": "reaching the escape sphere stands in for an unbounded component",
                }
            ),
            cfg,
        )
    return EXIT_OK


def cmd_construct(cfg: CliConfig, args) -> int:
    gens = load_genset(cfg.genset_path)
    n_max = args.n
    if n_max < 0:
        raise UsageError("--n must be nonnegative")
    fam = fattest_family(gens, n_max)
    fattest = [
        {"n": n, "word": fam.word(n).format(gens), "length": 2 * n, "k": fam.exponent(n)}
        for n in range(n_max + 1)
    ]
    # the full chain w_0 -> w_n_max, one letter pair inserted per step
    chain = [(fam.word(0), 0)]
    for n in range(1, n_max + 1):
        chain.extend(interpolate(gens, n, fam))
    stages = [
        {"stage": t, "word": w.format(gens), "length": len(w), "k": k}
        for t, (w, k) in enumerate(chain)
    ]
    if cfg.output_format == "csv":
        rows = [["fattest", f["n"], f["word"], f["k"]] for f in fattest]
        rows += [["interpolation", s["stage"], s["word"], s["k"]] for s in stages]
        _emit(_dump_rows(["kind", "index", "word", "k"], rows), cfg)
    else:
        _emit(_dump_json({"genset": gens.name, "fattest": fattest, "interpolation": stages}), cfg)
    return EXIT_OK


def cmd_isoperimetrix(cfg: CliConfig, args) -> int:
    gens = load_genset(cfg.genset_path)
    sol = isoperimetrix(hull(gens))
    payload = {
        "genset": gens.name,
        "directions": [list(v) for v in sol.directions],
        "weights": [format_value(w) for w in sol.weights],
        "area_at_perimeter_2": format_value(sol.area),
        "M_A": format_value(sol.m_a),
        "support": list(sol.support),
        "kkt_certified": sol.kkt_certified,
    }
    if cfg.output_format == "csv":
        rows = [[list(v), format_value(w)] for v, w in zip(sol.directions, sol.weights)]
        text = _dump_rows(["direction", "weight"], rows)
        text += _dump_rows(["parameter", "value"], [["M_A", payload["M_A"]]])
        _emit(text, cfg)
    else:
        _emit(_dump_json(payload), cfg)
    return EXIT_OK


def cmd_verify(cfg: CliConfig, args) -> int:
    gens = load_genset(cfg.genset_path)
    names = list(CHECKS) if args.check == "all" else [args.check]
    reports = run_checks(gens, cfg.radius, cfg.escape_radius, names, cfg.memory_cap)
    return _emit_reports(reports, cfg, single=args.check != "all")


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heis-depth",
        description="Word metrics, dead ends and retreat depth in the discrete Heisenberg group.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genset", type=Path, required=True, help="generating-set JSON file")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
    common.add_argument("--memory-cap", type=int, default=DEFAULT_MEMORY_CAP, help="bytes")
    common.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", parents=[common], help="sphere and ball sizes")
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("depth-profile", parents=[common], help="max dead-end depth per length")
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_depth_profile)

    p = sub.add_parser("retreat", parents=[common], help="retreat depth per length")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--escape", type=int, default=None)
    p.set_defaults(func=cmd_retreat)

    p = sub.add_parser("construct", parents=[common], help="fattest words and interpolation")
    p.add_argument("--n", type=int, default=4)
    p.set_defaults(func=cmd_construct, radius=0)

    p = sub.add_parser("isoperimetrix", parents=[common], help="optimal zonotope weights and M_A")
    p.set_defaults(func=cmd_isoperimetrix, radius=0)

    p = sub.add_parser("verify", parents=[common], help="run verification checks")
    p.add_argument("check", choices=[*CHECKS, "all"])
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--escape", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.threads != 1:
        log.info("--threads %d ignored: enumeration runs in one thread", args.threads)
    try:
        cfg = CliConfig(
            genset_path=args.genset,
            radius=args.radius,
            escape_radius=getattr(args, "escape", None),
            memory_cap=args.memory_cap,
            output_format=args.format,
            output_path=args.out,
        )
        return args.func(cfg, args)
    except (UsageError, GenSetError, FileNotFoundError, ValueError) as exc:
        print(f"heis-depth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MemoryCapExceeded, OverflowError, InsufficientRadius) as exc:
        print(f"heis-depth: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
