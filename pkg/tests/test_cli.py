import csv
import json
import math

import pytest

from quditloops import cli
from quditloops.cli import CSV_HEADER, SAMPLE_HEADER, main
from quditloops.lattice import PRIMAL, build, elementary_loops
from quditloops.runner import run_point, run_samples

HEADER_LINE = (
    "n_h,n_v,p,n_samples,seed,p_loop_edge_mean,p_loop_edge_std,p_loop_edge_stderr,"
    "p_ntw_mean,p_ntw_std,L_max_mean,L_max_std,N_max_mean,N_max_std,zero_error_skipped,"
    "model_eq3,model_eq3_powerlaw,model_eq3_sixloop,model_pntw"
)


def test_header_exact():
    assert ",".join(CSV_HEADER) == HEADER_LINE


def test_lattice_info(capsys):
    assert main(["lattice-info", "--nh", "4", "--nv", "5"]) == 0
    kv = dict(line.split("=") for line in capsys.readouterr().out.split())
    assert kv["qudits"] == "32"
    assert (kv["primal_loops3"], kv["primal_loops4"], kv["dual_loops3"], kv["dual_loops4"]) == ("8", "8", "6", "9")
    assert main(["lattice-info", "--nh", "1", "--nv", "5"]) == 2


def test_symmetric_scan_rows(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main(["scan", "symmetric", "--sizes", "4,6,8", "--p-grid", "0.1,0.2,0.3",
               "--samples", "20", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == HEADER_LINE and len(lines) == 10
    rows = list(csv.DictReader(out.open()))
    assert [(r["n_h"], r["n_v"]) for r in rows[:3]] == [("4", "5")] * 3
    # JSON summary mirrors the CSV values
    summary = json.loads(out.with_suffix(".json").read_text())
    assert summary["columns"] == list(CSV_HEADER)
    for r, j in zip(rows, summary["rows"]):
        for k in CSV_HEADER:
            v = j[k]
            assert (math.isnan(float(r[k])) and v is None) or float(r[k]) == pytest.approx(v, rel=0, abs=0)


def test_row_matches_library(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sample", "--nh", "5", "--nv", "6", "--p", "0.2", "--samples", "50",
                 "--seed", "3", "--out", str(out)]) == 0
    row = next(csv.DictReader(out.open()))
    rec = run_point((5, 6), 0.2, 50, 3)
    assert row["p_loop_edge_mean"] == "%.9g" % rec.p_loop_edge.mean
    assert row["N_max_std"] == "%.9g" % rec.N_max.std
    assert row["zero_error_skipped"] == str(rec.zero_error_skipped)


def test_per_sample_records(tmp_path):
    recs_path = tmp_path / "recs.csv"
    assert main(["sample", "--nh", "6", "--nv", "7", "--p", "0.3", "--samples", "30",
                 "--records", str(recs_path), "--out", str(tmp_path / "agg.csv")]) == 0
    rows = list(csv.DictReader(recs_path.open()))
    assert list(rows[0].keys()) == list(SAMPLE_HEADER)
    want = run_samples((6, 7), 0.3, 30, 0)
    assert [int(r["n_loop_qudits"]) for r in rows] == [w.n_loop_qudits for w in want]
    assert [int(r["sample_index"]) for r in rows] == list(range(30))


def test_worker_count_byte_identical(tmp_path):
    outs = []
    for w in (1, 3):
        out = tmp_path / f"w{w}.csv"
        assert main(["scan", "p", "--nh", "12", "--nv", "13", "--p-grid", "0.1:0.3:0.1",
                     "--samples", "120", "--seed", "8", "--workers", str(w), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].count(b"\n") == 4


def test_aspect_scan(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["scan", "aspect", "--perimeter", "12", "--p", "0.05", "--samples", "10",
                 "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [int(r["n_h"]) + int(r["n_v"]) for r in rows] == [12] * 9
    assert [int(r["n_h"]) for r in rows] == list(range(2, 11))


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# scan settings\nsizes = 4\np-grid = 0.1\nsamples = 5\nseed = 2\n")
    out = tmp_path / "c.csv"
    assert main(["scan", "symmetric", "--config", str(cfg), "--samples", "7", "--out", str(out)]) == 0
    row = next(csv.DictReader(out.open()))
    assert (row["n_samples"], row["seed"], row["n_h"]) == ("7", "2", "4")
    cfg.write_text("bogus = 1\n")
    assert main(["scan", "symmetric", "--config", str(cfg)]) == 2
    cfg.write_text("sizes 4\n")
    assert main(["scan", "symmetric", "--config", str(cfg)]) == 2
    assert "error" in capsys.readouterr().err


def test_invalid_config_exit_2(tmp_path):
    assert main(["scan", "p", "--nh", "5"]) == 2
    assert main(["sample", "--nh", "5", "--nv", "5", "--p", "1.5"]) == 2
    assert main(["sample", "--nh", "5", "--nv", "5", "--p", "0.1", "--samples", "0"]) == 2
    assert main(["scan", "aspect", "--perimeter", "10", "--sizes", "9", "--p", "0.1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["scan", "diagonal"])
    assert exc.value.code == 2


def test_io_error_exit_3(tmp_path):
    bad = tmp_path / "missing" / "out.csv"
    assert main(["sample", "--nh", "4", "--nv", "4", "--p", "0.1", "--samples", "5",
                 "--out", str(bad)]) == 3
    assert main(["lattice-info", "--config", str(tmp_path / "nope.cfg"), "--nh", "3", "--nv", "3"]) == 3


def test_json_format_stdout(capsys):
    assert main(["sample", "--nh", "4", "--nv", "5", "--p", "0.1", "--samples", "10",
                 "--format", "json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["rows"][0]["n_samples"] == 10


def test_emit_empty_and_one(tmp_path):
    sink = cli.RowSink(tmp_path / "e.csv", "csv", {})
    sink.close()
    assert (tmp_path / "e.csv").read_text() == HEADER_LINE + "\n"
    assert json.loads((tmp_path / "e.json").read_text())["rows"] == []
    sink = cli.RowSink(tmp_path / "o.csv", "csv", {})
    sink.add(cli.record_row(run_point((4, 5), 0.1, 5, 0)))
    sink.close()
    assert len((tmp_path / "o.csv").read_text().splitlines()) == 2


def test_float_format():
    assert cli.fmt(1 / 3) == "0.333333333"
    assert cli.fmt(7) == "7"
    assert cli.fmt(True) == "1"
    assert cli.fmt(float("nan")) == "nan"


def test_fit_command(tmp_path, capsys):
    path = tmp_path / "pts.csv"
    rows = ["p,p_loop_edge"] + [f"{p},{4.745 * p ** 3.057!r}" for p in (0.2, 0.22, 0.24, 0.26, 0.28, 0.3)]
    path.write_text("\n".join(rows) + "\n")
    assert main(["fit", str(path)]) == 0
    kv = dict(line.split("=") for line in capsys.readouterr().out.split())
    assert float(kv["slope"]) == pytest.approx(3.057, abs=1e-8)
    assert float(kv["coefficient"]) == pytest.approx(4.745, abs=1e-7)
    path.write_text("p,p_loop_edge\n0.1,0\n0.2,0.1\n")
    assert main(["fit", str(path)]) == 2


def test_twirl_verify(tmp_path, capsys):
    lat = build((3, 2))
    sq = [l.qudits for l in elementary_loops(lat, PRIMAL) if len(l.qudits) == 4][0]
    pat = tmp_path / "pat.txt"
    pat.write_text(",".join(map(str, sorted(sq))) + "\n")
    mat = tmp_path / "u.txt"
    s = 1 / math.sqrt(2)
    mat.write_text(f"{s},{s},0,0\n0,0,{s},{-s}\n")  # (I + iZ)/sqrt(2)
    assert main(["twirl-verify", "--nh", "3", "--nv", "2", "--pattern", str(pat),
                 "--matrix", str(mat), "--oracle"]) == 0
    kv = dict(line.split("=") for line in capsys.readouterr().out.split())
    trivial = "-".join(["0"] * (lat.n_checks("primal") + lat.n_checks("dual")))
    assert float(kv[f"coherent.{trivial}"]) == pytest.approx(0.25, abs=1e-9)
    assert float(kv[f"pta.{trivial}"]) == pytest.approx(0.125, abs=1e-9)
    assert float(kv[f"oracle.{trivial}"]) == pytest.approx(0.25, abs=1e-9)
    assert float(kv["tv_distance"]) > 0.1 and kv["forest"] == "false"
    assert main(["twirl-verify", "--nh", "3", "--nv", "2", "--pattern", str(pat),
                 "--unitary", "random", "--d", "3"]) == 0
    assert main(["twirl-verify", "--nh", "3", "--nv", "2", "--pattern", str(pat)]) == 2
    assert main(["twirl-verify", "--nh", "3", "--nv", "2", "--pattern", str(tmp_path / "x"),
                 "--unitary", "shift"]) == 3
