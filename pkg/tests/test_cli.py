import csv
import io
import json
import subprocess
import sys

import pytest

from harmonium.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED, main
from harmonium.report import FIELDS
from harmonium.sweep import SWEEP_FIELDS, parse_counts, parse_grid


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_point_json(capsys):
    code, out, _ = _run(capsys, "point", "boson", "-N", "2", "-r", "1")
    assert code == EXIT_OK
    rec = json.loads(out)
    assert tuple(rec) == FIELDS
    assert rec["n0"] == pytest.approx(0.98137601070257, rel=1e-12)
    assert rec["log_base"] == "e"


def test_point_bits_and_fraction(capsys):
    _, nats, _ = _run(capsys, "point", "boson", "-N", "3", "--ratio=1/2")
    _, bits, _ = _run(capsys, "point", "boson", "-N", "3", "--ratio=0.5", "--bits")
    nats, bits = json.loads(nats), json.loads(bits)
    assert bits["log_base"] == "2"
    assert bits["entropy"] * 0.6931471805599453 == pytest.approx(nats["entropy"], rel=1e-14)


def test_point_csv_is_bit_stable(capsys):
    args = ("point", "fermion-spinless", "-N", "3", "-r", "4", "--csv")
    _, a, _ = _run(capsys, *args)
    _, b, _ = _run(capsys, *args)
    assert a == b
    rows = list(csv.reader(io.StringIO(a)))
    assert rows[0] == list(FIELDS) and len(rows) == 2
    assert rows[1][FIELDS.index("n0")] == ""


def test_point_spinned_pairs_and_particles(capsys):
    _, a, _ = _run(capsys, "point", "fermion-spinned", "--pairs", "2", "-r", "3")
    _, b, _ = _run(capsys, "point", "fermion-spinned", "-N", "4", "-r", "3")
    assert a == b
    rec = json.loads(a)
    assert rec["n_pairs"] == 2 and rec["n_particles"] == 4


def test_point_exit_codes(capsys):
    assert _run(capsys, "point", "fermion-spinless", "-N", "3", "--ratio=-0.5")[0] == EXIT_DOMAIN
    assert _run(capsys, "point", "fermion-spinned", "-N", "3", "-r", "1")[0] == EXIT_USAGE
    assert _run(capsys, "point", "boson", "--pairs", "2", "-r", "1")[0] == EXIT_USAGE
    assert _run(capsys, "point", "boson", "-r", "1")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["point", "boson", "-N", "2", "-r", "abc"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == EXIT_USAGE


def test_point_writes_file(tmp_path, capsys):
    out = tmp_path / "sub" / "p.json"
    assert _run(capsys, "point", "boson", "-N", "2", "-r", "1", "--out", str(out))[0] == EXIT_OK
    assert json.loads(out.read_text())["n_particles"] == 2


def test_sweep_order_and_header(capsys):
    code, out, _ = _run(capsys, "sweep", "fermion-spinless", "-N", "2:3", "-r", "0", "1", "2")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == list(SWEEP_FIELDS)
    keys = [(int(r["n_particles"]), float(r["coupling_ratio"])) for r in rows]
    assert keys == [(n, x) for n in (2, 3) for x in (0.0, 1.0, 2.0)]


def test_sweep_jobs_keep_order(capsys):
    base = ("sweep", "boson", "-N", "1:4", "--grid", "0:5:4")
    _, serial, _ = _run(capsys, *base)
    _, parallel, _ = _run(capsys, *base, "--jobs", "3")
    assert serial == parallel


def test_sweep_skips_unbound_points(capsys):
    code, out, err = _run(capsys, "sweep", "fermion-spinless", "-N", "2", "4", "--ratio=-0.4", "--format", "json")
    assert code == EXIT_OK
    recs = [json.loads(line) for line in out.splitlines()]
    assert recs[0]["error"] == "" and recs[0]["purity"] is not None
    assert recs[1]["error"] and recs[1]["purity"] is None
    assert "1 point(s) skipped" in err


def test_sweep_spinned_by_particles(capsys):
    _, a, _ = _run(capsys, "sweep", "fermion-spinned", "-N", "2", "4", "-r", "1")
    _, b, _ = _run(capsys, "sweep", "fermion-spinned", "--pairs", "1:2", "-r", "1")
    assert a == b
    assert _run(capsys, "sweep", "fermion-spinned", "-N", "3", "-r", "1")[0] == EXIT_USAGE


def test_sweep_usage_errors(capsys):
    assert _run(capsys, "sweep", "boson", "-N", "2", "-r")[0] == EXIT_USAGE
    assert _run(capsys, "sweep", "boson", "-r", "1")[0] == EXIT_USAGE
    assert _run(capsys, "sweep", "boson", "-N", "2", "--grid", "1:2")[0] == EXIT_USAGE
    assert _run(capsys, "sweep", "boson", "-N", "x", "-r", "1")[0] == EXIT_USAGE


def test_parse_helpers():
    assert parse_counts(["1:3", "7"]) == (1, 2, 3, 7)
    assert parse_grid("0:1:3") == (0.0, 0.5, 1.0)
    g = parse_grid("0.1:10:3:log")
    assert g[1] == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(ValueError):
        parse_grid("0:1")
    with pytest.raises(ValueError):
        parse_grid("0:1:0")


def test_figure_csv(tmp_path, capsys):
    assert _run(capsys, "figure", "fig4", "--out", str(tmp_path))[0] == EXIT_OK
    text = (tmp_path / "fig4.csv").read_text()
    lines = text.splitlines()
    assert lines[0].startswith("# figure")
    assert any(line.startswith("# version") for line in lines)
    data = [line for line in lines if not line.startswith("#")]
    assert data[0] == "N,ratio,n0"
    assert len(data) == 1 + 12 * 5
    assert _run(capsys, "figure", "fig99")[0] == EXIT_USAGE


def test_verify_pass_and_forced_fail(capsys):
    code, out, _ = _run(capsys, "verify")
    assert code == EXIT_OK
    assert "FAIL" not in out
    code, out, _ = _run(capsys, "verify", "--tolerance-scale", "0")
    assert code == EXIT_VERIFY_FAILED
    assert "FAIL" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "harmonium", "point", "boson", "-N", "1", "-r", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["entropy"] == 0
    proc = subprocess.run([sys.executable, "-m", "harmonium", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "harmonium" in proc.stdout


def test_closed_pipe_is_quiet():
    proc = subprocess.run(f"{sys.executable} -m harmonium sweep boson -N 1:40 --grid 0:10:40 | head -n 1",
                          shell=True, capture_output=True, text=True)
    assert proc.stdout.startswith("variant,")
    assert "BrokenPipeError" not in proc.stderr
