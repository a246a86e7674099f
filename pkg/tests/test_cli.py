import io
import json
from pathlib import Path

import pytest

from netpath.cli import run

DATA = Path(__file__).resolve().parents[1] / "data"
TOY = str(DATA / "toy.csv")
FIVE_NODE = str(DATA / "five_node.csv")


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_analyze_single(monkeypatch):
    monkeypatch.setenv("NETPATH_NO_COLOR", "1")
    code, text = call("analyze", "--input", TOY, "--from", "T_1", "--to", "T_3")
    assert code == 0
    assert text.splitlines()[1].split() == ["T_1:T_3", "11.11", "0.004", "3"]


def test_analyze_all():
    code, text = call("analyze", "--input", TOY, "--all", "--jobs", "3")
    assert code == 0
    assert len(text.splitlines()) == 7


def test_analyze_json_has_comparators():
    code, text = call("analyze", "--input", TOY, "--from", "T_2", "--to", "T_3", "--format", "json")
    assert code == 0
    (r,) = json.loads(text)["reports"]
    comp = r["comparators"]
    assert comp["design_by_treatment"] == "unsupported"
    assert comp["side_split"]["p_value"] == pytest.approx(0.0065, abs=1e-4)
    assert [l["loop"] for l in comp["loop_specific"]] == [["T_2", "T_1", "T_3"], ["T_2", "T_1", "T_4", "T_3"]]


def test_analyze_verbose_and_heatmap(tmp_path):
    svg = tmp_path / "plot.svg"
    code, text = call("analyze", "-i", TOY, "--from", "T_1", "--to", "T_3", "--verbose", "--heatmap", str(svg))
    assert code == 0
    assert "The total number of paths detected" in text
    assert "design-by-treatment interaction: not supported" in text
    assert svg.read_text().startswith("<svg")


def test_paths_verbose():
    code, text = call("paths", "-i", FIVE_NODE, "--from", "T_1", "--to", "T_3", "--verbose")
    assert code == 0
    assert "Path-adjacency matrix A:" in text
    assert text.rstrip().endswith("path #4")


def test_flow_and_hatmatrix():
    code, text = call("flow", "-i", TOY, "--from", "T_1", "--to", "T_3")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "from,to,flow"
    assert len(lines) == 6
    code, text = call("hatmatrix", "-i", TOY, "--from", "T_1", "--to", "T_3")
    header, row = text.splitlines()
    assert header == "comparison,T_1:T_2,T_1:T_3,T_1:T_4,T_2:T_3,T_3:T_4"
    values = [float(x) for x in row.split(",")[1:]]
    assert values == pytest.approx([0.25, 0.5, 0.25, 0.25, -0.25])


def test_netpath_subcommand(tmp_path):
    code, text = call("netpath", "-i", TOY, "--from", "T_1", "--to", "T_3")
    assert code == 0 and text.splitlines()[0] == ",π1,π2,π3"
    out = tmp_path / "m.csv"
    code, _ = call("netpath", "-i", TOY, "--from", "T_1", "--to", "T_3", "--heatmap", str(out))
    assert code == 0 and out.read_text() == text


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("treat1,treat2,effect,variance\nA,B,oops,1\n")
    assert call("analyze", "-i", str(bad), "--from", "A", "--to", "B")[0] == 2
    assert call("analyze", "-i", TOY, "--from", "T_1", "--to", "T_9")[0] == 2
    assert call("analyze", "-i", TOY, "--from", "T_1", "--to", "T_3", "--ref-tol", "0")[0] == 2
    assert call("analyze", "-i", FIVE_NODE, "--from", "T_1", "--to", "T_3", "--path-cap", "2")[0] == 4
    assert call("flow", "-i", TOY, "--from", "T_1", "--to", "T_3", "--flow-tol", "-1")[0] == 2


def test_numerical_failure_exit_code(monkeypatch):
    import netpath.cli as cli
    from netpath.errors import NumericalFailure

    def boom(*a, **k):
        raise NumericalFailure("singular")

    monkeypatch.setattr(cli, "q_path", boom)
    assert call("analyze", "-i", TOY, "--from", "T_1", "--to", "T_3")[0] == 3
