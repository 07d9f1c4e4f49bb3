import json
import math
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from swipt_rll import cli
from swipt_rll.cli import Table, emit_csv, main, read_csv


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_capacity_command(capsys):
    code, out, _ = run(["capacity", "--type", "type0", "--d", "0", "--k", "1"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# swipt_rll 0.1.0 config=") and lines[0].endswith("seed=0")
    assert lines[1] == "type,d,k,lambda,capacity_bits,maxentropic,degenerate"
    assert lines[2].split(",")[4].startswith("0.6942")


def test_validate_command(capsys):
    code, out, _ = run(["validate", "--type", "type0", "--d", "2", "--k", "7",
                        "--bits", "00100001001000000010"], capsys)
    assert code == 0 and out.splitlines()[1] == "valid"
    code, out, _ = run(["validate", "--type", "type0", "--d", "0", "--k", "1", "--bits", "00"], capsys)
    assert code == 1 and out.splitlines()[1].startswith("invalid")


def test_rate_and_analyze(capsys):
    code, out, _ = run(["rate", "--p-y", "0.25", "--p10", "0.5"], capsys)
    assert code == 0 and out.splitlines()[2].endswith(",0.311278124459")
    code, out, _ = run(["analyze", "--p-y", "0.5", "--q", "0.5", "--b-max", "4"], capsys)
    row = dict(zip(out.splitlines()[1].split(","), out.splitlines()[2].split(",")))
    assert float(row["p_of"]) == pytest.approx(0.05) and row["source"] == "analytic"
    code, out, _ = run(["analyze", "--type", "type0", "--d", "0", "--k", "2", "--probs", "0.6,0.5",
                        "--p10", "0.1", "--q", "0.4", "--b-max", "3"], capsys)
    assert code == 0
    assert out.splitlines()[1] == "type,d,k,p0,p1,p10,q0,q1,B_max,rate,p_of,p_uf,source"


def test_analyze_labels_simulated_results(capsys):
    code, out, _ = run(["analyze", "--type", "type1", "--d", "0", "--k", "2", "--p10", "0.2", "--q", "0.4",
                        "--steps", "20000", "--burn-in", "1000", "--reps", "2"], capsys)
    assert code == 0 and out.splitlines()[2].endswith(",empirical")


def test_optimize_feasible_and_infeasible(capsys):
    code, out, _ = run(["optimize", "--rate", "0.3", "--q", "0.5", "--b-max", "4"], capsys)
    assert code == 0 and ",true," in out
    code, out, err = run(["optimize", "--type", "type0", "--d", "0", "--k", "3", "--rate", "0.95"], capsys)
    assert code == 1 and "0.9468" in err and ",infeasible," in out


def test_simulate_and_trace(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    code, out, _ = run(["simulate", "--p-x", "0.5", "--q", "0.5", "--b-max", "4", "--steps", "20000",
                        "--burn-in", "1000", "--reps", "2", "--seed", "3", "--trace", str(trace)], capsys)
    assert code == 0
    assert out.splitlines()[1] == "p_of,p_uf,se_of,se_uf,n,reps,seed"
    assert out.splitlines()[2].endswith(",20000,2,3")
    assert trace.read_text().splitlines()[0] == "i,x,y,z,b,overflow,underflow"
    assert len(trace.read_text().splitlines()) == 20001


def test_usage_errors_exit_1(capsys):
    assert main(["bogus"]) == 1
    assert main(["capacity", "--nope"]) == 1
    assert main(["analyze", "--p-x", "2"]) == 1
    assert main(["capacity", "--type", "type0", "--d", "3", "--k", "1"]) == 1
    assert main(["rate"]) == 1
    assert main([]) == 1
    capsys.readouterr()


def test_io_failure_exit_2(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(["capacity", "--type", "type0", "--d", "0", "--k", "1",
                        "--out", str(blocker / "sub" / "out.csv")], capsys)
    assert code == 2 and "I/O" in err


def test_numeric_failure_exit_2(monkeypatch, capsys):
    from swipt_rll.chains import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("power iteration did not converge")

    monkeypatch.setattr(cli, "capacity_analysis", boom)
    code, _, err = run(["capacity", "--type", "type0", "--d", "0", "--k", "1"], capsys)
    assert code == 2 and "numeric" in err


def test_config_file_and_flag_override(tmp_path, capsys):
    conf = tmp_path / "c.toml"
    conf.write_text('seed = 4\n[code]\ntype = "type0"\nd = 0\nk = 1\n[link]\nq = 0.5\nb_max = 2\n')
    code, out, _ = run(["capacity", "--config", str(conf)], capsys)
    assert code == 0 and out.splitlines()[0].endswith("seed=4") and ",0.6942" in out
    code, out, _ = run(["capacity", "--config", str(conf), "--k", "2", "--seed", "9"], capsys)
    assert out.splitlines()[0].endswith("seed=9") and ",0.8791" in out


@pytest.mark.parametrize("text, needle", [
    ('[code]\ntype = "type0"\nd = \n', "line 3"),
    ('[code]\ntype = "type0"\nd = "zero"\n', ":3: field [code].d: expected an integer"),
    ('[link]\nq = 0.5\nwat = 1\n', ":3: unknown field [link].wat"),
    ('[nope]\nx = 1\n', "unknown section [nope]"),
])
def test_config_errors_name_line_and_field(tmp_path, capsys, text, needle):
    conf = tmp_path / "bad.toml"
    conf.write_text(text)
    code, _, err = run(["capacity", "--config", str(conf)], capsys)
    assert code == 1 and needle in err


def test_out_file_meta_and_env_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.ENV_OUT_DIR, str(tmp_path))
    code, out, _ = run(["capacity", "--type", "type0", "--d", "1", "--k", "3", "--out", "cap.csv"], capsys)
    assert code == 0 and out == ""
    path = tmp_path / "cap.csv"
    raw = path.read_bytes()
    assert raw.startswith(b"# swipt_rll 0.1.0 config=") and b"\r\n" in raw
    meta = json.loads((tmp_path / "cap.csv.meta").read_text())
    assert meta["config"]["k"] == 3 and meta["columns"][0] == "type"
    table = read_csv(path)
    assert table.rows[0][4] == pytest.approx(0.5515, abs=5e-4)


def test_empty_table_is_header_only(tmp_path):
    path = emit_csv(Table(("a", "b"), []), tmp_path / "e.csv")
    assert path.read_bytes() == b"a,b\r\n"
    assert read_csv(path) == Table(("a", "b"), [])


cells = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(-10**9, 10**9),
    st.floats(allow_nan=False, allow_infinity=False).map(lambda v: float(f"{v:.12g}")),
    st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc")), min_size=1)
      .filter(lambda s: cli.parse_cell(s) == s and not s.startswith("#")),
)


@given(st.lists(st.tuples(cells, cells, cells), max_size=8))
def test_csv_round_trip(rows):
    import tempfile
    from pathlib import Path

    table = Table(("x", "y", "z"), [tuple(r) for r in rows])
    with tempfile.TemporaryDirectory() as d:
        back = read_csv(emit_csv(table, Path(d) / "t.csv", comment="# c"))
    assert back == table


def test_nan_cells_round_trip(tmp_path):
    back = read_csv(emit_csv(Table(("v",), [(math.nan,)]), tmp_path / "n.csv"))
    assert math.isnan(back.rows[0][0])


def test_custom_sweep_is_byte_identical(tmp_path, capsys):
    argv = ["sweep", "--axis", "R", "--values", "0.1,0.3", "--families", "iid;type0(0,2);type0(0,4)[0|1-3]",
            "--q", "0.4", "--b-max", "2", "--seed", "3"]
    assert main(argv + ["--out", str(tmp_path / "a.csv")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b.csv"), "--workers", "2"]) == 0
    a, b = (tmp_path / "a.csv").read_bytes(), (tmp_path / "b.csv").read_bytes()
    assert a == b
    table = read_csv(tmp_path / "a.csv")
    assert table.header == ("family", "axis", "value", "rate", "p_of", "p_uf", "objective", "source")
    assert len(table.rows) == 6


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "swipt_rll", "capacity", "--type", "type0", "--d", "0", "--k", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "0.879" in out.stdout
