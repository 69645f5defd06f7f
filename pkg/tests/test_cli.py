import csv
import io
import subprocess
import sys

import pytest

from longhop import cli
from longhop.analytics import closed_form_multipass
from longhop.experiment import COLUMNS as EXPERIMENT_COLUMNS


def run(argv, capsys):
    code = cli.main(argv + ["-q"])
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_analytic_one_pass_uniform(capsys):
    code, out, _ = run(["analytic", "--mode", "one-pass", "--g", "uniform", "--n", "10",
                        "--positions", "random-uniform"], capsys)
    assert code == 0
    assert out.splitlines()[0] == ",".join(cli.ANALYTIC_COLUMNS)
    values = {r["method"]: float(r["value"]) for r in rows(out)}
    assert values["closed-form"] == pytest.approx(0.1937102445, abs=1e-10)
    assert values["quadrature"] == pytest.approx(0.1937102445, abs=1e-9)


def test_analytic_multi_pass_hybrid(capsys):
    code, out, _ = run(["analytic", "--mode", "multi-pass", "--g", "hybrid", "--n", "10"], capsys)
    assert code == 0
    values = {r["method"]: float(r["value"]) for r in rows(out)}
    # the formula evaluates to 0.6584902000 at n = 10
    assert values["closed-form"] == pytest.approx(closed_form_multipass("hybrid", 10), abs=1e-10)
    assert values["closed-form"] == pytest.approx(0.6584902000, abs=1e-10)
    assert values["quadrature"] == pytest.approx(values["closed-form"], abs=1e-9)


def test_analytic_constant_zero(capsys):
    code, out, _ = run(["analytic", "--mode", "one-pass", "--g", "constant:0", "--n", "5",
                        "--scenario", "uniform"], capsys)
    assert code == 0
    (row,) = rows(out)
    assert row["method"] == "exact" and float(row["value"]) == 0.0 and row["std_error"] == ""


def test_analytic_nonterminating_exit_3(capsys):
    code, _, err = run(["analytic", "--mode", "multi-pass", "--g", "constant:0", "--n", "3",
                        "--scenario", "uniform"], capsys)
    assert code == 3 and "error" in err


def test_simulate_fail_on_nonterminating(capsys):
    argv = ["simulate", "--mode", "multi-pass", "--g", "constant:1", "--n", "2", "--random",
            "--trials", "10", "--max-rounds", "5"]
    code, _, _ = run(argv + ["--fail-on-nonterminating"], capsys)
    assert code == 3
    code, out, _ = run(argv, capsys)
    (row,) = rows(out)
    assert code == 0 and row["truncated_count"] == "10" and row["mean_rounds"] == ""


@pytest.mark.parametrize("argv", [
    ["simulate", "--n", "3", "--g", "bogus"],
    ["analytic", "--n", "3", "--g", "constant:2"],
    ["experiment", "--g", "nope", "--trials", "1"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize("argv", [
    ["simulate", "--n", "0"],
    ["simulate", "--n", "3", "--seed", "-1"],
    ["simulate", "--n", "3", "--trials", "0"],
    ["experiment", "--N", ""],
    ["frobnicate"],
])
def test_argparse_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 2


def test_compare_no_analytic_counterpart(capsys):
    code, _, err = run(["compare", "--mode", "multi-pass", "--g", "linear", "--n", "4",
                        "--random", "--trials", "100"], capsys)
    assert code == 2 and "no analytic counterpart" in err


def test_simulate_headers_and_determinism(capsys):
    argv = ["simulate", "--mode", "multi-pass", "--g", "power", "--n", "6", "--random",
            "--trials", "40000", "--seed", "18446744073709551615"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    _, threaded, _ = run(argv + ["--workers", "3"], capsys)
    assert first == second == threaded
    assert first.splitlines()[0] == ",".join(cli.SIMULATE_COLUMNS)
    _, other, _ = run(argv[:-1] + ["17"], capsys)
    assert other != first


def test_simulate_power_example(capsys):
    _, out, _ = run(["simulate", "--mode", "one-pass", "--g", "power:9", "--n", "10", "--random",
                     "--trials", "1000000", "--seed", "7"], capsys)
    (row,) = rows(out)
    assert abs(float(row["mean_progress"]) - 0.35218) <= 3 * float(row["std_error"])


def test_simulate_constant_multi_pass_example(capsys):
    _, out, _ = run(["simulate", "--mode", "multi-pass", "--g", "constant:0.3", "--n", "7",
                     "--random", "--trials", "1000000"], capsys)
    (row,) = rows(out)
    assert abs(float(row["mean_progress"]) - 0.5) <= 3 * float(row["std_error"])


def test_simulate_fixed_scenario(capsys):
    _, out, _ = run(["simulate", "--g", "uniform", "--n", "4", "--scenario", "uniform",
                     "--trials", "1"], capsys)
    (row,) = rows(out)
    assert row["trials"] == "1" and row["std_error"] == "0"


def test_compare_one_pass_uniform(capsys):
    code, out, _ = run(["compare", "--mode", "one-pass", "--g", "uniform", "--n", "10",
                        "--random", "--trials", "1000000"], capsys)
    (row,) = rows(out)
    assert out.splitlines()[0] == ",".join(cli.COMPARE_COLUMNS)
    assert code == 0 and row["pass"] == "true" and abs(float(row["z"])) <= 4


def test_compare_hybrid(capsys):
    code, out, _ = run(["compare", "--mode", "multi-pass", "--g", "hybrid", "--n", "10",
                        "--random", "--trials", "1000000"], capsys)
    (row,) = rows(out)
    assert code == 0 and abs(float(row["z"])) <= 4
    assert float(row["analytic"]) == pytest.approx(0.65849, abs=1e-5)


def test_compare_wrong_expectation_fails(capsys):
    code, out, _ = run(["compare", "--mode", "one-pass", "--g", "uniform", "--n", "10",
                        "--random", "--trials", "100000", "--expect", "0.25"], capsys)
    (row,) = rows(out)
    assert code == 1 and row["pass"] == "false" and row["source"] == "expect"


def test_compare_fixed_scenario(capsys):
    code, out, _ = run(["compare", "--mode", "multi-pass", "--g", "power", "--n", "5",
                        "--scenario", "favourable", "--trials", "100000"], capsys)
    (row,) = rows(out)
    assert code == 0 and row["source"] == "exact"


def test_experiment_default_grid_shape(capsys, tmp_path):
    path = tmp_path / "grid.csv"
    code, out, _ = run(["experiment", "--trials", "1", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(EXPERIMENT_COLUMNS)
    table = rows(text)
    assert len(table) == 64
    first = table[0]
    assert (first["N"], first["d"], first["m"]) == ("20", "200", "-5")
    assert float(first["density_n"]) == pytest.approx(13.0, abs=1e-9)
    for r in table:
        assert float(r["r"]) == pytest.approx(130.0, rel=1e-9)
        assert r["trials"] == "1"
        count = int(r["hop_count"])
        if count == 0:
            assert r["mean_norm_dist"] == "" and r["std_dev"] == ""
        elif count == 1:
            assert r["mean_norm_dist"] != "" and r["std_dev"] == ""
        else:
            assert float(r["std_dev"]) >= 0


def test_experiment_deterministic(capsys):
    argv = ["experiment", "--N", "20,200", "--d", "400", "--m", "0,1", "--trials", "5",
            "--seed", "3"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv + ["--workers", "4"], capsys)
    assert a == b and len(rows(a)) == 4


def test_m_is_opaque_unless_bound(capsys):
    argv = ["experiment", "--N", "50", "--d", "500", "--m=-5,5", "--trials", "20"]
    _, out, _ = run(argv, capsys)
    lo, hi = rows(out)
    assert lo["density_n"] == hi["density_n"]
    _, out, _ = run(argv + ["--bind-m-to-tx-power"], capsys)
    lo, hi = rows(out)
    assert float(hi["r"]) > float(lo["r"])


def test_config_logged_to_stderr():
    proc = subprocess.run([sys.executable, "-m", "longhop.cli", "analytic", "--n", "3",
                           "--scenario", "uniform"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "resolved config" in proc.stderr and '"n": 3' in proc.stderr
    quiet = subprocess.run([sys.executable, "-m", "longhop.cli", "analytic", "--n", "3",
                            "--scenario", "uniform", "-q"], capture_output=True, text=True)
    assert quiet.stderr == "" and quiet.stdout == proc.stdout
