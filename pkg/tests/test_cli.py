"""Command-line frontend: listing, measured runs, trace analysis."""

from __future__ import annotations

import csv
import io
import sys
import time

import pytest

from pmt import cli
from pmt.trace import parse_trace
from test_trace import write_constant_trace


def run_main(argv):
    return cli.main(argv)


def parse_run_args(extra):
    parser = cli._build_parser()
    return parser.parse_args(["run", *extra])


class TestList:
    def test_contains_synthetic_available(self, capsys):
        assert run_main(["list"]) == 0
        out = capsys.readouterr().out
        assert "synthetic available" in out

    def test_fixture_rapl_line(self, rapl_tree, monkeypatch, capsys):
        monkeypatch.setenv("PMT_SYSFS_ROOT", str(rapl_tree))
        assert run_main(["list"]) == 0
        assert "rapl available devices=1" in capsys.readouterr().out

    def test_empty_root_marks_unavailable(self, sysfs_root, monkeypatch, capsys):
        monkeypatch.setenv("PMT_SYSFS_ROOT", str(sysfs_root))
        run_main(["list"])
        assert "rapl unavailable" in capsys.readouterr().out


class TestRun:
    def test_constant_power_sleep(self, capsys):
        code = run_main(
            ["run", "--backend", "synthetic", "--synthetic-watts", "30",
             "--interval-ms", "20", "--", sys.executable, "-c", "import time; time.sleep(1)"]
        )
        assert code == 0
        line = capsys.readouterr().out.strip().splitlines()[-1]
        name, joules, _, watts, _, seconds, _ = line.split()
        assert name == "synthetic"
        assert float(seconds) == pytest.approx(1.0, abs=0.25)
        assert float(watts) == pytest.approx(30.0, rel=0.05)
        assert float(joules) == pytest.approx(30.0 * float(seconds), rel=0.05)

    def test_child_exit_status_propagated(self, capsys):
        code = run_main(
            ["run", "--backend", "synthetic", "--interval-ms", "10",
             "--", sys.executable, "-c", "raise SystemExit(3)"]
        )
        assert code == 3
        assert "synthetic" in capsys.readouterr().out  # report still printed

    def test_multiple_backends_give_multiple_lines(self, rapl_tree, monkeypatch, capsys):
        monkeypatch.setenv("PMT_SYSFS_ROOT", str(rapl_tree))
        code = run_main(
            ["run", "--backend", "synthetic", "--backend", "rapl",
             "--synthetic-watts", "5", "--", "true"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("synthetic ")
        assert lines[1].startswith("rapl ")

    def test_unknown_backend_exits_2(self, capsys):
        assert run_main(["run", "--backend", "nope", "--", "true"]) == 2

    def test_unavailable_backend_exits_2(self, sysfs_root, monkeypatch):
        monkeypatch.setenv("PMT_SYSFS_ROOT", str(sysfs_root))
        assert run_main(["run", "--backend", "rapl", "--", "true"]) == 2

    def test_spawn_failure_exits_127(self):
        code = run_main(
            ["run", "--backend", "synthetic", "--interval-ms", "10",
             "--", "/definitely/not/a/command"]
        )
        assert code == 127

    def test_dump_writes_per_backend_traces(self, tmp_path, capsys):
        dump = tmp_path / "trace"
        code = run_main(
            ["run", "--backend", "synthetic-a", "--backend", "synthetic-b",
             "--synthetic-watts", "40", "--interval-ms", "20", "--dump", str(dump),
             "--", sys.executable, "-c", "import time; time.sleep(0.4)"]
        )
        assert code == 0
        for suffix in ("synthetic-a", "synthetic-b"):
            trace = parse_trace(tmp_path / f"trace.{suffix}")
            assert trace.backend_name == suffix
            assert len(trace.records) >= 10

    def test_default_backend_env(self, monkeypatch, capsys):
        monkeypatch.setenv("PMT_DEFAULT_BACKEND", "synthetic-env")
        code = run_main(["run", "--interval-ms", "10", "--", "true"])
        assert code == 0
        assert capsys.readouterr().out.startswith("synthetic-env ")

    def test_overhead_below_budget(self):
        # wall time per wrapped run of `true` stays under 50 ms
        args = parse_run_args(["--backend", "synthetic", "--interval-ms", "10"])
        durations = []
        for _ in range(20):
            t0 = time.perf_counter()
            report = cli.cmd_run(args, ["true"], out=io.StringIO())
            durations.append(time.perf_counter() - t0)
            assert report.exit_status == 0
        durations.sort()
        median = durations[len(durations) // 2]
        assert median < 0.050, f"median wrapped-run wall time {median * 1e3:.1f} ms"


class TestAnalyze:
    def test_hand_summed_report(self, tmp_path, capsys):
        path = write_constant_trace(tmp_path / "t.txt")  # 10 x 30 W, 100 ms
        assert run_main(["analyze", str(path)]) == 0
        out = capsys.readouterr().out
        assert "joules=27" in out
        assert "watts_mean=30" in out
        assert "duration_s=0.9" in out

    def test_flops_efficiency_report(self, tmp_path, capsys):
        path = write_constant_trace(tmp_path / "t.txt")
        assert run_main(["analyze", str(path), "--flops", "9e9"]) == 0
        out = capsys.readouterr().out
        assert "gflops_per_watt=0.333333" in out

    def test_parse_error_names_line_and_exits_2(self, tmp_path, capsys):
        path = write_constant_trace(tmp_path / "t.txt")
        lines = path.read_text().splitlines()
        lines[4] = "bogus line"
        path.write_text("\n".join(lines) + "\n")
        assert run_main(["analyze", str(path)]) == 2
        assert "line 5" in capsys.readouterr().err

    def test_missing_file_exits_2(self, tmp_path):
        assert run_main(["analyze", str(tmp_path / "absent.txt")]) == 2

    def test_csv_output_sections(self, tmp_path, capsys):
        a = write_constant_trace(tmp_path / "a.txt", watts=30.0)
        b = write_constant_trace(tmp_path / "b.txt", watts=10.0)
        assert run_main(["analyze", str(a), str(b), "--csv"]) == 0
        summary_part, stacked_part = capsys.readouterr().out.split("\n\n")
        summary = list(csv.reader(io.StringIO(summary_part)))
        assert summary[0] == ["trace", "duration_s", "joules", "watts_mean",
                              "watts_max", "edp_js"]
        assert len(summary) == 3
        stacked = list(csv.reader(io.StringIO(stacked_part)))
        assert stacked[0] == ["timestamp_s", "a.txt", "b.txt"]
        assert len(stacked) == 11  # header + one row per reference record
        assert [float(x) for x in stacked[1][1:]] == [30.0, 10.0]

    def test_combined_edp(self, tmp_path, capsys):
        a = write_constant_trace(tmp_path / "a.txt", watts=30.0)  # 27 J over 0.9 s
        b = write_constant_trace(tmp_path / "b.txt", watts=10.0)  # 9 J over 0.9 s
        run_main(["analyze", str(a), str(b)])
        out = capsys.readouterr().out
        assert "combined: joules=36 duration_s=0.9 edp_js=32.4" in out
