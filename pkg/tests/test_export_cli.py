from __future__ import annotations

import json
import math
import re
import subprocess
import sys

import numpy as np
import pytest

from penrose_gauss import __version__
from penrose_gauss.cli import main, parse_omega
from penrose_gauss.discrepancy import DEFAULT_OMEGA, c_p, sweep
from penrose_gauss.export import POINT_HEADER, SWEEP_HEADER, WINDOW_COLORS, points_csv, points_svg, sweep_csv, to_json, unit_edges
from penrose_gauss.scheme import vertex_arrays


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_to_json_floats_roundtrip():
    vals = [math.pi, 1 / 3, 1e-300, -2.5e17, 0.1 + 0.2]
    text = to_json({"v": vals, "c": 1 + 2j, "n": float("nan"), "b": True, "i": np.int64(7)})
    back = json.loads(text)
    assert back["v"] == vals
    assert back["c"] == [1.0, 2.0]
    assert back["n"] is None and back["b"] is True and back["i"] == 7


def test_points_csv_header_and_rows():
    v = vertex_arrays(DEFAULT_OMEGA, 5)
    text = points_csv(v)
    lines = text.splitlines()
    assert lines[0] == ",".join(POINT_HEADER)
    assert len(lines) == len(v) + 1
    row = lines[1].split(",")
    assert [int(x) for x in row[:4]] == list(v.cyc[0])
    assert float(row[4]) == v.phys[0].real
    assert int(row[-1]) == v.label[0]


def test_sweep_csv_header():
    res = sweep(DEFAULT_OMEGA, 0, [10.0, 20.0])
    lines = sweep_csv(res.records).splitlines()
    assert lines[0] == ",".join(SWEEP_HEADER)
    assert len(lines) == 3


def test_unit_edges_are_unit():
    v = vertex_arrays(DEFAULT_OMEGA, 8)
    edges = unit_edges(v.phys)
    assert edges
    for i, j in edges:
        assert abs(abs(v.phys[i] - v.phys[j]) - 1) < 1e-6
    # every vertex of a rhombus tiling away from the patch edge has degree >= 3
    deg = np.bincount(np.array(edges).ravel(), minlength=len(v))
    interior = np.abs(v.phys) < 6
    assert deg[interior].min() >= 3


def test_svg_structure():
    v = vertex_arrays(DEFAULT_OMEGA, 10)
    svg = points_svg(v.phys, v.label)
    lines = svg.splitlines()
    assert lines[0].startswith("<?xml")
    assert lines[1] == f"<!-- generator: penrose_gauss {__version__} -->"
    assert svg.count("<circle") == len(v)
    fills = set(re.findall(r'<g fill="(#[0-9a-f]{6})"', svg))
    assert fills == set(WINDOW_COLORS.values())
    assert "<line" in svg
    assert "<line" not in points_svg(v.phys, v.label, edges=False)


def test_parse_omega():
    assert parse_omega("0.5,-1") == 0.5 - 1j
    import argparse

    with pytest.raises(argparse.ArgumentTypeError):
        parse_omega("0.5")


def test_cli_count(capsys):
    code, out, _ = run(["count", "--omega", "0.0137,0.00291", "--m", "0", "--R", "100"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["count"] == 38696
    assert abs(d["count"] / (math.pi * c_p() * 1e4) - 1) <= 0.01
    assert d["wall_time_s"] == 0


def test_cli_baseline_single(capsys):
    code, out, _ = run(["baseline", "--R", "2"], capsys)
    assert code == 0 and json.loads(out)["count"] == 13


def test_cli_generate_svg(tmp_path, capsys):
    svg = tmp_path / "out.svg"
    code, out, _ = run(["generate", "--R", "10", "--svg", str(svg)], capsys)
    assert code == 0 and out == ""
    text = svg.read_text()
    assert set(re.findall(r'<g fill="(#[0-9a-f]{6})"', text)) == set(WINDOW_COLORS.values())


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--R", "12", "--csv", "{out}"],
        ["generate", "--R", "12", "--svg", "{out}"],
        ["count", "--R", "70", "--m", "2", "--json", "{out}"],
        ["sweep", "--rmin", "10", "--rmax", "200", "--rcount", "12", "--csv", "{out}"],
        ["sweep", "--rmin", "10", "--rmax", "200", "--rcount", "12", "--csv", "-", "--json", "{out}"],
        ["baseline", "--rmin", "1", "--rmax", "300", "--rcount", "20", "--csv", "{out}"],
        ["spectral", "--kind", "polygon", "--m", "3", "--ycount", "17", "--csv", "{out}"],
        ["spectral", "--kind", "ball", "--R", "2", "--ycount", "17", "--csv", "{out}"],
        ["psf", "--json", "{out}"],
        ["lemma", "--which", "3", "--mmax", "3", "--nmax", "6", "--json", "{out}"],
        ["singular", "--R", "50", "--json", "{out}"],
    ],
)
def test_cli_rerun_byte_identical(argv, tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}"
        code, _, _ = run([a.replace("{out}", str(path)) for a in argv], capsys)
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0]) > 0


def test_cli_lemma_vacuous(capsys):
    code, out, _ = run(["lemma", "--which", "2", "--R", "100", "--mmin", "3", "--mmax", "3", "--nmin", "10", "--nmax", "10"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["vacuous"] is True and d["supRatio"] is None


def test_cli_singular_reports(capsys):
    code, out, _ = run(["singular", "--omega", "0,0", "--R", "5"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["singular"] is True and d["hits"]


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--R", "-1"],
        ["count", "--threads", "0"],
        ["sweep", "--rmin", "100", "--rmax", "10"],
        ["baseline", "--rcount", "1"],
        ["spectral", "--ycount", "0"],
        ["lemma", "--which", "2", "--nmin", "1"],
        ["psf", "--truncation", "-4"],
    ],
)
def test_cli_config_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    msg = json.loads(err.strip().splitlines()[-1])
    assert msg["exit"] == 2 and msg["error"] and msg["message"]


def test_cli_numeric_error(capsys):
    code, _, err = run(["psf", "--truncation", "8"], capsys)
    assert code == 3
    assert json.loads(err)["error"] == "DiagnosticError"


def test_cli_unparseable_omega():
    with pytest.raises(SystemExit) as e:
        main(["count", "--omega", "abc"])
    assert e.value.code == 2


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "penrose_gauss.cli", "baseline", "--R", "3"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["count"] == 29
