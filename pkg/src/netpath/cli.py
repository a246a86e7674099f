"""Command-line entry point: ``netpath {analyze,paths,flow,hatmatrix,netpath}``."""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    NetpathError,
    NoDirectEvidence,
    NoIndirectEvidence,
    NumericalFailure,
    PathExplosion,
)
from .flow import DEFAULT_FLOW_TOL, evidence_flow
from .heatmap import render_netpath_heatmap
from .inconsistency import enumerate_loops, loop_test, q_path, side_split
from .independence import DEFAULT_REF_TOL
from .io import _use_color, read_contrasts, render_json, render_paths, render_text
from .network import EvidenceNetwork, build_network
from .nma import hat_row, laplacian_pinv
from .paths import DEFAULT_PATH_CAP

log = logging.getLogger("netpath")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_EXPLOSION = 4
DEFAULT_LOOP_MAX = 5


@dataclass(frozen=True)
class AnalysisConfig:
    input: Path
    pair: tuple[str, str] | None
    all_pairs: bool = False
    flow_tol: float = DEFAULT_FLOW_TOL
    ref_tol: float = DEFAULT_REF_TOL
    path_cap: int = DEFAULT_PATH_CAP
    fmt: str = "text"
    heatmap: Path | None = None
    verbose: bool = False
    jobs: int = 1
    loop_max: int = DEFAULT_LOOP_MAX

    def __post_init__(self):
        if not (self.flow_tol > 0 and self.ref_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.path_cap < 1:
            raise ValueError("--path-cap must be at least 1")
        if self.pair is None and not self.all_pairs:
            raise ValueError("give --from and --to, or --all")
        if self.heatmap is not None and self.heatmap.suffix.lower() not in (".svg", ".csv"):
            raise ValueError("--heatmap must end in .svg or .csv")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", required=True, type=Path, help="contrast CSV or JSON file")
    common.add_argument("--from", dest="source", help="first treatment")
    common.add_argument("--to", dest="sink", help="second treatment")
    common.add_argument("--flow-tol", type=float, default=DEFAULT_FLOW_TOL)
    common.add_argument("--ref-tol", type=float, default=DEFAULT_REF_TOL)
    common.add_argument("--path-cap", type=int, default=DEFAULT_PATH_CAP)
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog="netpath", description="Path-based inconsistency in network meta-analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[common], help="Q statistic per comparison")
    analyze.add_argument("--all", dest="all_pairs", action="store_true", help="every pair of treatments")
    analyze.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    analyze.add_argument("--heatmap", type=Path, help="write the Netpath plot (.svg or .csv)")
    analyze.add_argument("--jobs", type=int, default=1)
    analyze.add_argument("--loop-max", type=int, default=DEFAULT_LOOP_MAX,
                         help="longest loop (in treatments) for the loop-specific comparator")

    sub.add_parser("paths", parents=[common], help="list all evidence paths")
    sub.add_parser("flow", parents=[common], help="directed evidence flow as CSV")
    sub.add_parser("hatmatrix", parents=[common], help="hat-matrix row as CSV")
    netpath = sub.add_parser("netpath", parents=[common], help="Netpath matrix / plot")
    netpath.add_argument("--heatmap", type=Path, help="output file (.svg or .csv); CSV to stdout if omitted")
    return parser


def _pair(args) -> tuple[str, str]:
    if not args.source or not args.sink:
        raise ValueError("--from and --to are required")
    return args.source, args.sink


def _comparators(network: EvidenceNetwork, i: str, j: str, loop_max: int) -> dict:
    out: dict = {"design_by_treatment": "unsupported"}
    try:
        z = side_split(network, i, j)
        out["side_split"] = {"omega": z.omega, "se": z.se, "z": z.z, "p_value": z.p_value}
    except (NoDirectEvidence, NoIndirectEvidence) as exc:
        out["side_split"] = {"error": str(exc)}
    loops = []
    if network.has_edge(i, j):
        for loop in enumerate_loops(network, i, j, max(3, loop_max)):
            z = loop_test(network, loop)
            loops.append({"loop": list(loop), "omega": z.omega, "se": z.se, "z": z.z, "p_value": z.p_value})
    out["loop_specific"] = loops
    return out


def _comparators_text(label: str, comp: dict) -> str:
    lines = [f"Comparators for {label}:"]
    ss = comp["side_split"]
    if "error" in ss:
        lines.append(f"  side-splitting: not available ({ss['error']})")
    else:
        lines.append(f"  side-splitting: omega = {ss['omega']:.4g}, z = {ss['z']:.4g}, p = {ss['p_value']:.4g}")
    if not comp["loop_specific"]:
        lines.append("  loop-specific: no loops through a direct comparison")
    for item in comp["loop_specific"]:
        lines.append(
            f"  loop {'-'.join(item['loop'])}: omega = {item['omega']:.4g}, "
            f"z = {item['z']:.4g}, p = {item['p_value']:.4g}"
        )
    lines.append("  design-by-treatment interaction: not supported")
    return "\n".join(lines) + "\n"


def run_analyze(cfg: AnalysisConfig, out) -> None:
    network = build_network(read_contrasts(cfg.input))
    system = laplacian_pinv(network)
    pairs = network.pairs() if cfg.all_pairs else [cfg.pair]
    if cfg.heatmap is not None and len(pairs) != 1:
        raise ValueError("--heatmap needs a single comparison")

    def one(pair):
        return q_path(network, *pair, cap=cfg.path_cap, tol=cfg.ref_tol, flow_tol=cfg.flow_tol, system=system)

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(one, pairs))
    else:
        results = [one(p) for p in pairs]

    comps = None
    if cfg.verbose or cfg.fmt == "json":
        comps = [_comparators(network, a, b, cfg.loop_max) for a, b in pairs]

    if cfg.fmt == "json":
        out.write(render_json(results, comps))
    else:
        out.write(render_text([r for r, _ in results], color=_use_color(out)))
        if cfg.verbose:
            for (report, _), comp in zip(results, comps):
                out.write("\n")
                out.write(render_paths(report, verbose=True))
                out.write(_comparators_text(report.label, comp))

    if cfg.heatmap is not None:
        report, matrix = results[0]
        if matrix is None:
            raise ValueError(f"{report.label} has fewer than 2 independent paths; no Netpath plot")
        fmt = cfg.heatmap.suffix.lower().lstrip(".")
        cfg.heatmap.write_bytes(render_netpath_heatmap(matrix, fmt, title=f"Netpath plot {report.label}"))
        log.info("wrote %s", cfg.heatmap)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "analyze":
            pair = None if args.all_pairs else _pair(args)
            cfg = AnalysisConfig(
                input=args.input, pair=pair, all_pairs=args.all_pairs, flow_tol=args.flow_tol,
                ref_tol=args.ref_tol, path_cap=args.path_cap, fmt=args.fmt, heatmap=args.heatmap,
                verbose=args.verbose, jobs=args.jobs, loop_max=args.loop_max,
            )
            run_analyze(cfg, out)
            return EXIT_OK

        if not (args.flow_tol > 0 and args.ref_tol > 0) or args.path_cap < 1:
            raise ValueError("tolerances must be positive and --path-cap at least 1")
        i, j = _pair(args)
        network = build_network(read_contrasts(args.input))
        system = laplacian_pinv(network)
        if args.command == "hatmatrix":
            row = hat_row(system, network, i, j)
            out.write("comparison," + ",".join(f"{a}:{b}" for a, b in row.edges) + "\n")
            out.write(f"{i}:{j}," + ",".join(repr(float(h)) for h in row.coefficients) + "\n")
        elif args.command == "flow":
            flow = evidence_flow(hat_row(system, network, i, j), args.flow_tol)
            out.write("from,to,flow\n")
            for arc in flow.arcs:
                out.write(f"{arc.tail},{arc.head},{arc.flow!r}\n")
        elif args.command == "paths":
            report, _ = q_path(network, i, j, cap=args.path_cap, tol=args.ref_tol, flow_tol=args.flow_tol, system=system)
            out.write(render_paths(report, verbose=args.verbose))
        elif args.command == "netpath":
            report, matrix = q_path(network, i, j, cap=args.path_cap, tol=args.ref_tol, flow_tol=args.flow_tol, system=system)
            if matrix is None:
                raise ValueError(f"{report.label} has fewer than 2 independent paths; no Netpath plot")
            if args.heatmap is None:
                out.write(render_netpath_heatmap(matrix, "csv").decode("utf-8"))
            else:
                fmt = args.heatmap.suffix.lower().lstrip(".")
                if fmt not in ("svg", "csv"):
                    raise ValueError("--heatmap must end in .svg or .csv")
                args.heatmap.write_bytes(render_netpath_heatmap(matrix, fmt, title=f"Netpath plot {report.label}"))
        return EXIT_OK
    except PathExplosion as exc:
        print(f"netpath: {exc}", file=sys.stderr)
        return EXIT_EXPLOSION
    except NumericalFailure as exc:
        print(f"netpath: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (NetpathError, ValueError, OSError) as exc:
        print(f"netpath: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
