"""Command-line front end.

Exit codes: 0 success (including zero solutions), 1 verification mismatch,
2 usage or configuration error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from . import golden, reference
from .designs import Design, FactorSpec, marginal, marginal_profile, strength
from .enumeration import build_constraints
from .formats import (
    FormatError,
    design_from_csv,
    design_grid,
    design_to_csv,
    dumps,
    indicator_from_json,
    indicator_to_json,
)
from .polyalg import DomainError, MultilinearPoly, coeffs_from_response, is_indicator, response_from_coeffs
from .quotient import TermOrder
from .reports import analysis_report, enumeration_bundle, summary_line

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("crossarray")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    p: int = 6
    q: int = 3
    s: int = 3
    relations: list[list[int]] = field(default_factory=lambda: [[1, 2], [1, 3], [2, 3]])
    runs: int = 24
    anchors: list[list[int]] = field(default_factory=lambda: [list(a) for a in reference.CATALOG_ANCHORS])
    order: list[str] = field(default_factory=lambda: list(reference.STAR_SPACE_NAMES))
    require_uniform: list[str] = field(default_factory=list)
    forbid_uniform: list[str] = field(default_factory=list)
    drop_uniform: list[str] = field(default_factory=list)
    input: str | None = None
    out: str | None = None
    golden: str | None = None
    workers: int = 1
    format: str = "json"

    @property
    def spec(self) -> FactorSpec:
        return FactorSpec(self.p, self.q, self.s, tuple(tuple(r) for r in self.relations))

    def provenance(self) -> dict:
        """Effective settings that determine results (worker count and paths excluded)."""
        keep = ("p", "q", "s", "relations", "runs", "anchors", "order",
                "require_uniform", "forbid_uniform", "drop_uniform")
        full = asdict(self)
        return {k: full[k] for k in keep}


def parse_subset(text: str) -> tuple[tuple[int, ...], bool]:
    """``"1,6,7:star"`` -> ((1, 6, 7), True)."""
    body, _, suffix = text.partition(":")
    if suffix not in ("", "star"):
        raise UsageError(f"bad subset suffix in {text!r}; expected ':star'")
    try:
        T = tuple(int(t) for t in body.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"bad subset {text!r}") from None
    if not T:
        raise UsageError(f"empty subset {text!r}")
    return T, suffix == "star"


def parse_point(text: str) -> list[int]:
    try:
        pt = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad point {text!r}") from None
    if any(c not in (-1, 1) for c in pt):
        raise UsageError(f"point {text!r} must use levels -1 and 1")
    return pt


def _check_paths(cfg: RunConfig) -> None:
    if cfg.input is not None and not Path(cfg.input).is_file():
        raise FileNotFoundError(f"input file not found: {cfg.input}")
    if cfg.out is not None and not Path(cfg.out).resolve().parent.is_dir():
        raise FileNotFoundError(f"output directory does not exist: {Path(cfg.out).parent}")


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_design(cfg: RunConfig) -> Design:
    return design_from_csv(Path(cfg.input).read_text(encoding="utf-8"), cfg.spec)


def _term_order(cfg: RunConfig) -> TermOrder:
    names = cfg.spec.names(star=True)
    if sorted(cfg.order) != sorted(names):
        raise UsageError(f"--order must list exactly the variables {','.join(names)}")
    return TermOrder(tuple(cfg.order))


def cmd_enumerate(cfg: RunConfig) -> int:
    spec = cfg.spec
    try:
        cs = build_constraints(spec, cfg.runs)
        for text in cfg.drop_uniform:
            cs = cs.without(*parse_subset(text))
        for text in cfg.require_uniform:
            cs = cs.with_uniform(*parse_subset(text))
        for text in cfg.forbid_uniform:
            cs = cs.with_nonuniform(*parse_subset(text))
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc
    for a in cfg.anchors:
        if len(a) != spec.base_count:
            raise UsageError(f"anchor {a} should have {spec.base_count} coordinates")
    bundle, designs = enumeration_bundle(cs, cfg.anchors, cfg.provenance(), cfg.workers)
    print(summary_line(bundle), file=sys.stderr)
    if cfg.format == "text":
        reps = [designs[i] for i in bundle["representatives"]]
        text = "".join(f"representative {k}\n{design_grid(d)}\n" for k, d in enumerate(reps))
    elif cfg.format == "csv":
        text = "".join(design_to_csv(designs[i]) + "\n" for i in bundle["representatives"])
    else:
        text = dumps(bundle)
    _emit(cfg, text)
    return EXIT_OK


def cmd_analyze(cfg: RunConfig) -> int:
    d = _load_design(cfg)
    report = analysis_report(d, _term_order(cfg))
    report["config"] = cfg.provenance()
    if cfg.format == "text":
        lines = [design_grid(d).rstrip("\n"), ""]
        lines.append(f"runs: {report['runs']}")
        p = coeffs_from_response(d.u)
        lines.append(f"indicator: {p.to_string(cfg.spec.names())}")
        if report.get("catalog_label"):
            lines.append(f"matches catalog column {report['catalog_label']}")
        if d.runs:
            lines.append(f"strength: u={report['strength']['u']} u*={report['strength']['u_star']}")
            bad = report["nonuniform_marginals"]["u_star_3"]
            lines.append("non-uniform 3-marginals of u*: " + (" ".join("".join(map(str, T)) for T in bad) or "none"))
            lines.append("quotient basis: " + ", ".join(report["quotient_basis"]))
            lines.append("standard form: " + report["standard_form"])
            est = report["estimable"]
            lines.append(f"estimable columns ({est['rank']}): {est['columns']}")
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, dumps(report))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, update: bool = False) -> int:
    directory = Path(cfg.golden) if cfg.golden else golden.DEFAULT_DIR
    if update:
        names = golden.write_artifacts(directory, cfg.workers)
        print(f"wrote {len(names)} golden files to {directory}")
        return EXIT_OK
    problems = golden.verify(directory, cfg.workers)
    for msg in problems:
        print(f"MISMATCH {msg}")
    if problems:
        return EXIT_MISMATCH
    print(f"all golden files in {directory} match")
    return EXIT_OK


def cmd_indicator(cfg: RunConfig) -> int:
    d = _load_design(cfg)
    p = coeffs_from_response(d.u)
    if cfg.format == "text":
        _emit(cfg, p.to_string(cfg.spec.names()) + "\n")
    else:
        _emit(cfg, indicator_to_json(p, cfg.spec.names()))
    return EXIT_OK


def cmd_design(cfg: RunConfig) -> int:
    p: MultilinearPoly = indicator_from_json(Path(cfg.input).read_text(encoding="utf-8"))
    if p.n != cfg.spec.base_count:
        raise UsageError(f"indicator has {p.n} variables, expected {cfg.spec.base_count}")
    if not is_indicator(p):
        raise DomainError("polynomial is not an indicator function (f*f != f)")
    d = Design(cfg.spec, tuple(int(v) for v in response_from_coeffs(p)))
    _emit(cfg, design_grid(d) if cfg.format == "text" else design_to_csv(d))
    return EXIT_OK


def cmd_strength(cfg: RunConfig, star: bool) -> int:
    d = _load_design(cfg)
    _emit(cfg, f"{strength(d, star=star)}\n")
    return EXIT_OK


def cmd_marginals(cfg: RunConfig, subsets: Sequence[str], size: int, star: bool) -> int:
    d = _load_design(cfg)
    if subsets:
        parsed = [parse_subset(t) for t in subsets]
    else:
        parsed = [(T, star) for T in marginal_profile(d, size, star)]
    tables = [marginal(d, T, s).to_dict() for T, s in parsed]
    _emit(cfg, dumps(tables))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--runs", type=int, default=24)
    common.add_argument("--anchor", action="append", metavar="POINT",
                        help="design point such as -1,-1,-1,-1,-1,1 (repeatable)")
    common.add_argument("--order", help="term-order priority, e.g. x1,x2,x3,x4,x5,x6,y1,y2,y3")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="crossarray", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="enumerate designs satisfying the constraints")
    p.add_argument("--require-uniform", action="append", default=[], metavar="SUBSET",
                   help='extra uniform marginal, "i,j,k" or "i,j,k:star"')
    p.add_argument("--forbid-uniform", action="append", default=[], metavar="SUBSET",
                   help="marginal that must not be uniform")
    p.add_argument("--drop-uniform", action="append", default=[], metavar="SUBSET",
                   help="remove one of the default strength-3 constraints")

    p = sub.add_parser("analyze", parents=[common], help="full report for a design CSV")
    p.add_argument("input")

    p = sub.add_parser("verify", parents=[common], help="recompute and compare golden artifacts")
    p.add_argument("--golden", help="golden directory (default: packaged copy)")
    p.add_argument("--update", action="store_true", help="rewrite the golden files instead")

    p = sub.add_parser("indicator", parents=[common], help="design CSV -> indicator coefficients")
    p.add_argument("input")

    p = sub.add_parser("design", parents=[common], help="indicator JSON -> design CSV")
    p.add_argument("input")

    p = sub.add_parser("strength", parents=[common], help="orthogonality strength of a design")
    p.add_argument("input")
    p.add_argument("--star", action="store_true", help="use the extended factor space")

    p = sub.add_parser("marginals", parents=[common], help="marginal tables of a design")
    p.add_argument("input")
    p.add_argument("--subset", action="append", default=[], metavar="SUBSET")
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--star", action="store_true")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.command, runs=args.runs, workers=args.workers, format=args.format, out=args.out)
    if args.anchor:
        cfg.anchors = [parse_point(a) for a in args.anchor]
    if args.order:
        cfg.order = [v.strip() for v in args.order.split(",")]
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    cfg.input = getattr(args, "input", None)
    cfg.golden = getattr(args, "golden", None)
    cfg.require_uniform = getattr(args, "require_uniform", [])
    cfg.forbid_uniform = getattr(args, "forbid_uniform", [])
    cfg.drop_uniform = getattr(args, "drop_uniform", [])
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _config_from_args(args)
        _check_paths(cfg)
        log.info("effective config: %s", cfg.provenance())
        if args.command == "enumerate":
            return cmd_enumerate(cfg)
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, update=args.update)
        if args.command == "indicator":
            return cmd_indicator(cfg)
        if args.command == "design":
            return cmd_design(cfg)
        if args.command == "strength":
            return cmd_strength(cfg, args.star)
        if args.command == "marginals":
            return cmd_marginals(cfg, args.subset, args.size, args.star)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, DomainError, json.JSONDecodeError) as exc:
        print(f"error: {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    parser.error(f"unknown command {args.command}")
    return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
