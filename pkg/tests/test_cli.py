"""CLI contract: columns, formats, exit codes, byte-level determinism."""

import csv
import json
import math

import pytest

from robinwall.cli import main


def run(*argv):
    return main(list(argv))


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


class TestReflect:
    def test_stdout_robin_row(self, capsys):
        assert run("reflect", "--kind", "robin", "--k", "1", "--alpha", "0") == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "k,alpha,kind,L,re_b,im_b,abs_b,arg_b"
        assert out[1] == "1,0,robin,,1,0,1,0"

    def test_hard_wall_phase(self, tmp_path):
        out = tmp_path / "r.csv"
        assert run("reflect", "--kind", "delta", "--k", "1", "--alpha", "-1",
                   "--L", "1", "--out", str(out)) == 0
        header, row = read_csv(out)
        assert abs(float(row[header.index("arg_b")]) - math.pi) < 1e-12

    def test_calibrated_phase_approaches_robin(self, tmp_path):
        out = tmp_path / "r.csv"
        assert run("reflect", "--kind", "delta", "--k", "1", "--alpha", "1",
                   "--L", "0.1", "--L", "0.01", "--L", "0.001", "--out", str(out)) == 0
        header, *rows = read_csv(out)
        args = [float(r[header.index("arg_b")]) for r in rows]
        gaps = [abs(a - math.pi / 2) for a in args]  # arg of (1+i)/(1-i) = pi/2
        assert gaps[0] > gaps[1] > gaps[2]

    def test_range_width_spec(self, tmp_path):
        out = tmp_path / "r.csv"
        assert run("reflect", "--kind", "valley", "--k", "1",
                   "--L", "0.1:0.5:3", "--out", str(out)) == 0
        header, *rows = read_csv(out)
        assert [float(r[header.index("L")]) for r in rows] == [0.1, 0.05, 0.025]

    def test_json_mirrors_columns(self, tmp_path):
        out = tmp_path / "r.json"
        assert run("reflect", "--kind", "robin", "--k", "2", "--alpha", "1",
                   "--format", "json", "--out", str(out)) == 0
        (row,) = json.loads(out.read_text())
        assert set(row) == {"k", "alpha", "kind", "L", "re_b", "im_b", "abs_b", "arg_b"}
        assert row["L"] is None

    def test_missing_widths_exits_2(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        assert run("reflect", "--kind", "delta", "--k", "1", "--out", str(out)) == 2
        assert "width" in capsys.readouterr().err
        assert not out.exists()  # no partial file on invalid parameters

    def test_bad_range_spec_exits_2(self):
        assert run("reflect", "--kind", "delta", "--k", "1", "--L", "0.1:x") == 2


class TestConverge:
    def test_defaults_pass(self, tmp_path):
        out = tmp_path / "c.csv"
        assert run("converge", "--out", str(out)) == 0
        header, *rows = read_csv(out)
        assert header == ["k", "alpha", "kind", "L", "error", "observed_order"]
        assert len(rows) == 14
        assert rows[0][header.index("observed_order")] == ""  # first row has no order

    def test_singleton_widths_exit_2(self):
        assert run("converge", "--L", "0.1") == 2

    def test_valley_threshold_exit_2(self, capsys):
        assert run("converge", "--kind", "valley", "--alpha", "-5", "--L", "1.0", "--L", "0.5") == 2
        assert "L <" in capsys.readouterr().err

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run("converge", "--bogus")
        assert exc.value.code == 2


class TestOracle:
    def test_small_suite_exit_0(self, tmp_path):
        out = tmp_path / "o.csv"
        assert run("oracle", "--tuples", "5", "--out", str(out)) == 0
        header, *rows = read_csv(out)
        assert header == ["k", "L", "kind", "re_b_analytic", "im_b_analytic",
                          "re_b_oracle", "im_b_oracle", "difference"]
        assert len(rows) == 10
        assert all(float(r[header.index("difference")]) < 1e-7 for r in rows)

    def test_robin_comparison_exit_1(self, tmp_path, capsys):
        out = tmp_path / "o.csv"
        assert run("oracle", "--tuples", "3", "--against", "robin", "--out", str(out)) == 1
        assert "FAIL" in capsys.readouterr().err
        assert out.exists()  # the table itself is still written


class TestEvolve:
    SMALL = ["--xmin", "-40", "--nodes", "1001", "--dt", "0.004", "--horizon", "1.0"]

    def test_robin_control(self, tmp_path):
        out = tmp_path / "e.csv"
        assert run("evolve", "--kind", "robin", *self.SMALL, "--out", str(out)) == 0
        header, row = read_csv(out)
        assert header == ["L", "distance", "re_overlap", "im_overlap"]
        assert row[0] == ""
        assert float(row[1]) == 0.0

    def test_observables_and_snapshots(self, tmp_path):
        out = tmp_path / "e.csv"
        obs = tmp_path / "obs.csv"
        snap = tmp_path / "snap.csv"
        assert run("evolve", "--kind", "delta", "--L", "0.4", *self.SMALL,
                   "--out", str(out), "--observables", str(obs), "--obs-every", "50",
                   "--snapshots", str(snap)) == 0
        header, *rows = read_csv(obs)
        assert header == ["run", "L", "step", "t", "norm", "x_mean"]
        assert {r[0] for r in rows} == {"robin", "delta"}
        assert all(abs(float(r[header.index("norm")]) - 1.0) < 1e-10 for r in rows)
        sheader, *srows = read_csv(snap)
        assert sheader == ["run", "L", "x", "re_psi", "im_psi"]
        assert len(srows) == 2 * 1001

    def test_support_violation_exit_2(self, capsys):
        assert run("evolve", "--kind", "robin", "--x0", "-3", *self.SMALL) == 2
        assert "margin" in capsys.readouterr().err


class TestDeterminism:
    def test_converge_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["converge", "--k", "2", "--alpha", "1"]
        assert run(*args, "--out", str(a)) == 0
        assert run(*args, "--out", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_oracle_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["oracle", "--tuples", "4", "--seed", "5", "--format", "json"]
        assert run(*args, "--out", str(a)) == 0
        assert run(*args, "--out", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()


class TestParser:
    def test_serve_subcommand_exists(self):
        from robinwall.cli import build_parser

        args = build_parser().parse_args(["serve", "--port", "9999"])
        assert args.command == "serve" and args.port == 9999

    def test_missing_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run()
        assert exc.value.code == 2
