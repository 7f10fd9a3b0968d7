"""Command-line frontend.

Subcommands:

* ``list``     -- show registered backends and their availability
* ``run``      -- measure a child command, optionally recording trace files
* ``analyze``  -- turn trace files into energy/EDP/efficiency reports
* ``bridge``   -- JSON-line stdio server for foreign-language bindings

Exit codes: the child's own code on the success path, 2 for backend or
toolkit errors, 127 when the child cannot be spawned.
"""

from __future__ import annotations

import argparse
import csv
import os
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

from . import registry, trace
from .core import Measurement, flops_efficiency
from .errors import PmtError

DEFAULT_BACKEND_ENV = "PMT_DEFAULT_BACKEND"

EXIT_BACKEND_ERROR = 2
EXIT_SPAWN_FAILURE = 127


@dataclass
class RunReport:
    measurements: list[Measurement]
    exit_status: int
    dump_paths: list[Path]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pmt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list backends and availability")

    run = sub.add_parser(
        "run", help="run a command under measurement: pmt run [options] -- cmd args..."
    )
    run.add_argument("--backend", action="append", default=[],
                     help="backend to sample (repeatable); default from "
                          f"${DEFAULT_BACKEND_ENV} or 'synthetic'")
    run.add_argument("--device", type=int, default=0, help="device index (default 0)")
    run.add_argument("--interval-ms", type=int, default=None, help="sampling interval")
    run.add_argument("--dump", metavar="PATH", default=None,
                     help="record a trace per backend to PATH.<backend>")
    run.add_argument("--synthetic-watts", type=float, default=None,
                     help="constant power for synthetic backends")
    run.add_argument("--synthetic-shape", choices=["constant", "ramp", "square"], default=None)
    run.add_argument("--synthetic-base-watts", type=float, default=None)
    run.add_argument("--synthetic-peak-watts", type=float, default=None)
    run.add_argument("--synthetic-period-s", type=float, default=None)
    run.add_argument("--synthetic-duration-s", type=float, default=None)

    analyze = sub.add_parser("analyze", help="report on recorded trace files")
    analyze.add_argument("traces", nargs="+", metavar="TRACE")
    analyze.add_argument("--flops", type=float, default=None,
                         help="operation count for GFLOP/s/W")
    analyze.add_argument("--csv", action="store_true",
                         help="emit CSV: summary rows, a blank line, then the "
                              "stacked per-timestamp table")

    sub.add_parser("bridge", help="serve the sensor API over stdin/stdout JSON lines")
    return parser


def cmd_list(out=None) -> int:
    out = out or sys.stdout
    for status in registry.list_backends():
        d = status.descriptor
        availability = "available" if status.available else "unavailable"
        print(
            f"{d.backend_name} {availability} devices={status.device_count} "
            f"min_interval_ms={d.min_interval_ms}",
            file=out,
        )
    return 0


def _synthetic_config(args) -> dict:
    config = {}
    if args.synthetic_watts is not None:
        config["power_watts"] = args.synthetic_watts
    for key, value in (
        ("shape", args.synthetic_shape),
        ("base_watts", args.synthetic_base_watts),
        ("peak_watts", args.synthetic_peak_watts),
        ("period_s", args.synthetic_period_s),
        ("duration_s", args.synthetic_duration_s),
    ):
        if value is not None:
            config[key] = value
    return config


def cmd_run(args, child_command: list[str], out=None) -> RunReport:
    """Bracket the child's whole lifetime with paired snapshots per backend."""
    out = out or sys.stdout
    backends = args.backend or [os.environ.get(DEFAULT_BACKEND_ENV, "synthetic")]
    synthetic_config = _synthetic_config(args)
    sensors = []
    dump_paths: list[Path] = []
    try:
        for name in backends:
            config: dict = dict(synthetic_config) if name.startswith("synthetic") else {}
            if args.interval_ms is not None:
                config["interval_ms"] = args.interval_ms
            if args.dump is not None:
                dump_path = Path(f"{args.dump}.{name}")
                config["dump_path"] = dump_path
                dump_paths.append(dump_path)
            sensors.append(registry.create(name, args.device, config))
        starts = [sensor.read() for sensor in sensors]
        try:
            process = subprocess.Popen(child_command)
        except OSError as exc:
            print(f"pmt: cannot spawn {child_command[0]!r}: {exc}", file=sys.stderr)
            return RunReport([], EXIT_SPAWN_FAILURE, dump_paths)
        exit_status = process.wait()
        # stop before the final read: the frozen snapshot then matches the
        # last trace record exactly, keeping run and analyze in agreement
        for sensor in sensors:
            sensor.stop()
        measurements = [
            sensor.measurement(start, sensor.read())
            for sensor, start in zip(sensors, starts)
        ]
    finally:
        for sensor in sensors:
            sensor.stop()
    for m in measurements:
        print(f"{m.backend_name} {m.joules:.6g} J {m.watts:.6g} W {m.seconds:.6g} s", file=out)
    if exit_status < 0:
        exit_status = 128 - exit_status  # killed by signal
    return RunReport(measurements, exit_status, dump_paths)


def _combined_summary(summaries: list[trace.TraceSummary]) -> tuple[float, float, float]:
    """(joules, duration, watts): energies add, concurrent spans overlap."""
    joules = sum(s.joules for s in summaries)
    duration = max(s.duration_s for s in summaries)
    watts = joules / duration if duration > 0 else 0.0
    return joules, duration, watts


def cmd_analyze(trace_paths: list[str], flop_count: float | None = None,
                as_csv: bool = False, out=None) -> int:
    out = out or sys.stdout
    parsed = [trace.parse_trace(path) for path in trace_paths]
    summaries = [trace.summarize(t, name=Path(p).name) for t, p in zip(parsed, trace_paths)]
    joules, duration, watts = _combined_summary(summaries)
    edp = joules * duration
    gflops_per_watt = None
    if flop_count is not None:
        m = Measurement(joules=joules, watts=watts, seconds=duration)
        gflops_per_watt = flops_efficiency(m, int(flop_count))

    if as_csv:
        writer = csv.writer(out, lineterminator="\n")
        header = ["trace", "duration_s", "joules", "watts_mean", "watts_max", "edp_js"]
        if gflops_per_watt is not None:
            header.append("gflops_per_watt")
        writer.writerow(header)
        for s in summaries:
            row = [s.name, f"{s.duration_s:.9g}", f"{s.joules:.9g}",
                   f"{s.watts_mean:.9g}", f"{s.watts_max:.9g}", f"{s.edp:.9g}"]
            if gflops_per_watt is not None:
                row.append(f"{gflops_per_watt:.9g}")
            writer.writerow(row)
        out.write("\n")
        writer.writerow(["timestamp_s", *[s.name for s in summaries]])
        for row in trace.align_by_nearest(parsed):
            writer.writerow([f"{v:.9g}" for v in row])
    else:
        for s in summaries:
            print(
                f"{s.name}: duration_s={s.duration_s:.6g} joules={s.joules:.6g} "
                f"watts_mean={s.watts_mean:.6g} watts_max={s.watts_max:.6g} "
                f"edp_js={s.edp:.6g}",
                file=out,
            )
        combined = (
            f"combined: joules={joules:.6g} duration_s={duration:.6g} edp_js={edp:.6g}"
        )
        if gflops_per_watt is not None:
            combined += f" gflops_per_watt={gflops_per_watt:.6g}"
        print(combined, file=out)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    child_command: list[str] = []
    if "--" in argv:
        split = argv.index("--")
        argv, child_command = argv[:split], argv[split + 1 :]
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        return cmd_list()
    if args.command == "bridge":
        from .bridge import serve

        return serve()
    if args.command == "analyze":
        try:
            return cmd_analyze(args.traces, flop_count=args.flops, as_csv=args.csv)
        except (PmtError, OSError) as exc:
            print(f"pmt: {exc}", file=sys.stderr)
            return EXIT_BACKEND_ERROR
    # run
    if not child_command:
        parser.error("run requires a child command after '--'")
    try:
        report = cmd_run(args, child_command)
    except (PmtError, OSError) as exc:
        print(f"pmt: {exc}", file=sys.stderr)
        return EXIT_BACKEND_ERROR
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
