"""Contrast ingestion (CSV/JSON) and report serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError
from .inconsistency import InconsistencyReport, NetpathMatrix, Status
from .network import DirectComparison, EvidenceNetwork, merge_comparisons

REQUIRED = ("treat1", "treat2", "effect", "variance")
SCHEMA_VERSION = 1


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    return data


def _number(value, line, column) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ParseError(f"malformed number {value!r}", line, column) from None
    if not math.isfinite(x):
        raise ParseError(f"non-finite number {value!r}", line, column)
    return x


def _record(rec: dict, line) -> DirectComparison:
    for col in REQUIRED:
        if rec.get(col) in (None, ""):
            raise ParseError("missing value", line, col)
    t1, t2 = str(rec["treat1"]).strip(), str(rec["treat2"]).strip()
    effect = _number(rec["effect"], line, "effect")
    variance = _number(rec["variance"], line, "variance")
    if variance <= 0:
        raise ParseError(f"variance must be positive, got {variance}", line, "variance")
    if not t1 or not t2:
        raise ParseError("empty treatment label", line, "treat1" if not t1 else "treat2")
    if t1 == t2:
        raise ParseError(f"self-comparison {t1}:{t2}", line, "treat2")
    return DirectComparison(t1, t2, effect, variance)


def parse_contrast_csv(data: bytes | str) -> list[DirectComparison]:
    """Parse ``treat1,treat2,effect,variance[,studlab]`` rows; duplicate pairs are pooled."""
    text = _decode(data)
    if not text.strip():
        raise ParseError("empty input")
    reader = csv.DictReader(io.StringIO(text))
    header = [h.strip() for h in (reader.fieldnames or [])]
    reader.fieldnames = header
    missing = [c for c in REQUIRED if c not in header]
    if missing:
        raise ParseError(f"header lacks column(s) {', '.join(missing)}", 1)
    rows = []
    for rec in reader:
        if all((v or "").strip() == "" for k, v in rec.items() if k is not None):
            continue
        if None in rec:
            raise ParseError("too many fields", reader.line_num)
        rows.append(_record(rec, reader.line_num))
    if not rows:
        raise ParseError("no data rows")
    return merge_comparisons(rows)


def parse_contrast_json(data: bytes | str) -> list[DirectComparison]:
    """Same fields as the CSV, as a list of objects or ``{"comparisons": [...]}``."""
    text = _decode(data)
    if not text.strip():
        raise ParseError("empty input")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if isinstance(doc, dict):
        doc = doc.get("comparisons")
    if not isinstance(doc, list):
        raise ParseError("expected a list of comparison objects")
    if not doc:
        raise ParseError("no comparisons")
    rows = []
    for k, rec in enumerate(doc):
        if not isinstance(rec, dict):
            raise ParseError("entry is not an object", k + 1)
        rows.append(_record(rec, k + 1))
    return merge_comparisons(rows)


def read_contrasts(path: str | os.PathLike) -> list[DirectComparison]:
    with open(path, "rb") as fh:
        data = fh.read()
    if str(path).lower().endswith(".json"):
        return parse_contrast_json(data)
    return parse_contrast_csv(data)


def network_to_csv(network: EvidenceNetwork) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REQUIRED)
    for e in network.edges:
        writer.writerow([e.t1, e.t2, repr(e.effect), repr(e.variance)])
    return buf.getvalue()


# -- reports ---------------------------------------------------------------

def format_p(p: float | None) -> str:
    if p is None:
        return "NA"
    if p >= 0.001:
        return f"{p:.3f}"
    return f"{p:.2e}"


def _use_color(stream) -> bool:
    if os.environ.get("NETPATH_NO_COLOR"):
        return False
    return bool(getattr(stream, "isatty", lambda: False)())


def render_text(reports: Sequence[InconsistencyReport], color: bool = False) -> str:
    if not reports:
        raise ValueError("at least one report is required")
    head = ("Comparison", "Q", "p_value", "No. of independent paths")
    rows = [(r.label, f"{r.q:.2f}", format_p(r.p_value), str(r.n_independent)) for r in reports]
    widths = [max(len(head[c]), *(len(row[c]) for row in rows)) for c in range(3)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(head[:3], widths)) + "  " + head[3]]
    for r, row in zip(reports, rows):
        line = "  ".join(v.ljust(w) for v, w in zip(row[:3], widths)) + "  " + row[3]
        if color and r.p_value is not None and r.p_value < 0.05:
            line = f"\x1b[31m{line}\x1b[0m"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _num(x: float) -> str:
    return f"{x:.7g}"


def _matrix_text(M: np.ndarray) -> str:
    return "\n".join(" ".join(f"{v:9.4g}" for v in row) for row in M)


def render_paths(report: InconsistencyReport, verbose: bool = False) -> str:
    """Path listing in the layout of the netmeta ``netpath(verbose = TRUE)`` output."""
    i, j = report.comparison
    out = []
    system = report.system
    if verbose and report.row is not None:
        out.append(f"Hat matrix row {report.label}:")
        for (t1, t2), h in zip(report.row.edges, report.row.coefficients):
            out.append(f"  {t1}:{t2}  {_num(h)}")
    if verbose and system is not None:
        out.append("Path-adjacency matrix A:")
        out.append(_matrix_text(system.A))
        out.append("Variance-covariance matrix Sigma:")
        out.append(_matrix_text(system.Sigma))
    n = system.n_paths if system is not None else 0
    out.append(f"The total number of paths detected between treatment  {i}  and treatment  {j}  is  {n} ")
    if system is not None:
        for number, path, effect, var in zip(system.numbers, system.paths, system.effects, system.variances):
            out.append(f"path # {number}  : {{{', '.join(path.nodes)}}}")
            out.append(f" size: {path.length}     total effect: {_num(effect)}   total variance: {_num(var)}")
    removed = report.removed_numbers
    if removed:
        out.append("The following paths are removed from calculation due to linear dependency: ")
        out.extend(f"  path #{k}" for k in removed)
    return "\n".join(out) + "\n"


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def report_to_dict(report: InconsistencyReport, netpath: NetpathMatrix | None = None, comparators=None) -> dict:
    system = report.system
    kept = set(report.reduced.numbers) if report.reduced is not None else set()
    paths = []
    if system is not None:
        for number, path, effect, var in zip(system.numbers, system.paths, system.effects, system.variances):
            paths.append({
                "number": number,
                "nodes": list(path.nodes),
                "size": path.length,
                "effect": float(effect),
                "variance": float(var),
                "independent": number in kept,
            })
    d = {
        "comparison": list(report.comparison),
        "status": report.status.value,
        "q": report.q,
        "dof": report.dof,
        "p_value": report.p_value,
        "n_paths": report.n_paths,
        "n_independent": report.n_independent,
        "nma_effect": _jsonable(report.nma_effect),
        "nma_variance": _jsonable(report.nma_variance),
        "paths": paths,
        "removed": [
            {"number": system.numbers[k], "step": step} for k, step in report.reduction.removed
        ] if report.reduction is not None else [],
        "netpath": None if netpath is None else {
            "labels": list(netpath.labels),
            "matrix": netpath.m.tolist(),
            "degenerate": netpath.degenerate,
        },
    }
    if comparators is not None:
        d["comparators"] = comparators
    return d


def render_json(items: Iterable[tuple[InconsistencyReport, NetpathMatrix | None]], comparators=None) -> str:
    reports = []
    for k, (report, netpath) in enumerate(items):
        extra = comparators[k] if comparators is not None else None
        reports.append(report_to_dict(report, netpath, extra))
    if not reports:
        raise ValueError("at least one report is required")
    return json.dumps({"schema": SCHEMA_VERSION, "reports": reports}, indent=2) + "\n"


def render_report(items, fmt: str = "text", color: bool = False) -> str:
    items = list(items)
    if fmt == "json":
        return render_json(items)
    return render_text([r for r, _ in items], color=color)

