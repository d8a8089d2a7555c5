import csv
import io
import json
import subprocess
import sys

import pytest

import qrebound
from qrebound.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main
from qrebound.montecarlo import run_experiment


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == qrebound.__version__


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["montecarlo", "--n", "0"],
        ["montecarlo", "--n", "ten"],
        ["montecarlo", "--seed", "-1"],
        ["montecarlo", "--seed", str(1 << 64)],
        ["montecarlo", "--format", "xml"],
        ["saturation", "--eps-list", "0.5,-1"],
        ["saturation", "--eps-list", ""],
        ["saturation", "--omega", "0"],
        ["verify", "--suite", "everything"],
        ["verify", "--draws", "0"],
    ],
)
def test_usage_errors_exit_64(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_USAGE
    capsys.readouterr()


def test_io_error_exit_2(tmp_path, capsys):
    code = main(
        ["montecarlo", "--n", "3", "--out", str(tmp_path / "missing" / "x.csv")]
    )
    assert code == EXIT_IO
    assert "i/o error" in capsys.readouterr().err


def _read_table(path):
    raw = path.read_bytes()
    assert raw.endswith(b"\r\n")
    lines = raw[:-2].split(b"\r\n")
    assert all(b"\n" not in line for line in lines)
    meta = {}
    body = []
    for line in lines:
        if line.startswith(b"# "):
            key, _, value = line[2:].decode().partition(": ")
            meta[key] = value
        else:
            body.append(line.decode())
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    return meta, rows[0], rows[1:]


def test_montecarlo_csv_file(tmp_path, capsys):
    out = tmp_path / "runs.csv"
    code = main(["montecarlo", "--n", "25", "--seed", "11", "--out", str(out)])
    assert code == EXIT_OK
    meta, header, rows = _read_table(out)
    assert meta["schema"] == "qrebound/1"
    assert meta["command"] == "montecarlo"
    assert meta["n"] == "25"
    assert meta["seed"] == "11"
    assert "timestamp" not in meta
    assert "redraws" in meta
    assert header == ["index", "u", "s_tilde", "s_cl", "bound", "bound_cl", "classical_violated"]
    assert len(rows) == 25
    assert [r[0] for r in rows] == [str(i) for i in range(25)]
    assert all(r[6] in ("true", "false") for r in rows)
    # summaries go to stdout when the table went to a file
    captured = capsys.readouterr()
    assert "records: 25" in captured.out
    assert "violations: 0" in captured.out
    assert captured.err == ""


def test_montecarlo_csv_values_roundtrip(tmp_path):
    out = tmp_path / "runs.csv"
    main(["montecarlo", "--n", "12", "--seed", "11", "--out", str(out)])
    _, _, rows = _read_table(out)
    result = run_experiment(12, 11)
    for row, record in zip(rows, result.records):
        # 17 significant digits reproduce a double exactly
        assert float(row[1]) == record.u
        assert float(row[2]) == record.s_tilde
        assert float(row[3]) == record.s_cl
        assert float(row[4]) == record.bound
        assert float(row[5]) == record.bound_cl
        assert (row[6] == "true") == record.classical_violated


def test_montecarlo_stdout_and_stderr_split(capsys):
    code = main(["montecarlo", "--n", "4", "--seed", "2"])
    assert code == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("# schema: qrebound/1\r\n")
    assert "records: 4" in captured.err
    assert "classical violations:" in captured.err


def test_montecarlo_byte_determinism(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    main(["montecarlo", "--n", "40", "--seed", "7", "--out", str(a)])
    main(["montecarlo", "--n", "40", "--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.json"
    d = tmp_path / "d.json"
    main(["montecarlo", "--n", "15", "--seed", "7", "--format", "json", "--out", str(c)])
    main(["montecarlo", "--n", "15", "--seed", "7", "--format", "json", "--out", str(d)])
    assert c.read_bytes() == d.read_bytes()


def test_montecarlo_json_document(tmp_path):
    out = tmp_path / "runs.json"
    code = main(
        ["montecarlo", "--n", "9", "--seed", "3", "--format", "json", "--out", str(out)]
    )
    assert code == EXIT_OK
    with open(out, encoding="utf-8") as stream:
        document = json.load(stream)
    assert set(document) == {"metadata", "rows"}
    assert document["metadata"]["schema"] == "qrebound/1"
    assert document["metadata"]["n"] == 9
    rows = document["rows"]
    assert len(rows) == 9
    result = run_experiment(9, 3)
    for row, record in zip(rows, result.records):
        assert row["index"] == record.index
        assert row["u"] == record.u
        assert row["satisfied"] is True
        assert isinstance(row["classical_violated"], bool)
        assert row["seed"] == record.seed
        assert row["params"]["p1"] == record.params.p1
        assert set(row["params"]) == {
            "p1", "q1", "abs_c_sq", "phi1", "omega", "abs_d_sq", "phi2",
        }


def test_saturation_defaults(capsys):
    code = main(["saturation"])
    assert code == EXIT_OK
    captured = capsys.readouterr()
    lines = captured.out.split("\r\n")
    header_at = next(i for i, line in enumerate(lines) if not line.startswith("# "))
    assert lines[header_at] == "eps,u,s_tilde,bound,gap"
    data = [line for line in lines[header_at + 1 :] if line]
    assert len(data) == 5
    assert "worst gap:" in captured.err
    for line in data:
        gap = float(line.split(",")[4])
        assert abs(gap) <= 1e-8


def test_saturation_custom_arguments(tmp_path, capsys):
    out = tmp_path / "sat.csv"
    code = main(
        ["saturation", "--eps-list", "0.5, 2", "--omega", "0.25", "--out", str(out)]
    )
    assert code == EXIT_OK
    meta, header, rows = _read_table(out)
    assert meta["omega"] == "0.25"
    assert header == ["eps", "u", "s_tilde", "bound", "gap"]
    assert [r[0] for r in rows] == ["0.5", "2"]
    assert "rows: 2" in capsys.readouterr().out


def test_verify_command(capsys):
    code = main(["verify", "--suite", "bounds", "--draws", "5"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6
    assert all(line.startswith("PASS bounds/") for line in lines[:-1])
    assert lines[-1] == "passed 5/5 checks"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qrebound", "verify", "--suite", "bounds", "--draws", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "passed 5/5 checks" in proc.stdout
