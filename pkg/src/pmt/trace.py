"""Dump-mode trace files: writer, parser and summary arithmetic.

Format (plain text, one record per line):

    # pmt-dump backend=<name> device=<index> interval_ms=<i> channels=<c1,c2,...>
    <timestamp_s> <watts_total> <watts_c1> <watts_c2> ...

Fields are space separated, reals carry at least six significant digits,
timestamps are seconds since sensor creation.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from pathlib import Path

from . import kernels
from .errors import EmptyTraceError, SensorParseError

_HEADER = re.compile(
    r"^# pmt-dump backend=(?P<backend>\S+) device=(?P<device>\d+) "
    r"interval_ms=(?P<interval>\d+) channels=(?P<channels>\S*)$"
)


@dataclass(frozen=True)
class TraceRecord:
    """One dump line: instantaneous watts at one sampler tick."""

    timestamp: float
    watts_total: float
    watts_per_channel: tuple[float, ...]


@dataclass
class Trace:
    backend_name: str
    device_index: int
    interval_ms: int
    channel_names: tuple[str, ...]
    records: list[TraceRecord]


class TraceWriter:
    """Appends one record per sampler tick; header written at open."""

    def __init__(self, path, backend_name: str, device_index: int, interval_ms: int,
                 channel_names: tuple[str, ...]):
        self.path = Path(path)
        self._fh = open(self.path, "w", encoding="utf-8")
        self._fh.write(
            f"# pmt-dump backend={backend_name} device={device_index} "
            f"interval_ms={interval_ms} channels={','.join(channel_names)}\n"
        )
        self._fh.flush()

    def write(self, record: TraceRecord) -> None:
        channels = " ".join(f"{w:.9g}" for w in record.watts_per_channel)
        self._fh.write(f"{record.timestamp:.9g} {record.watts_total:.9g} {channels}\n")
        self._fh.flush()

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()


def parse_trace(path) -> Trace:
    """Read a dump file back; raises SensorParseError naming the bad line."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise SensorParseError(f"{path}: line 1: missing header")
    header = _HEADER.match(lines[0])
    if header is None:
        raise SensorParseError(f"{path}: line 1: bad header {lines[0]!r}")
    channel_names = tuple(c for c in header.group("channels").split(",") if c)
    trace = Trace(
        backend_name=header.group("backend"),
        device_index=int(header.group("device")),
        interval_ms=int(header.group("interval")),
        channel_names=channel_names,
        records=[],
    )
    n_fields = 2 + len(channel_names)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != n_fields:
            raise SensorParseError(
                f"{path}: line {lineno}: expected {n_fields} fields, got {len(fields)}"
            )
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise SensorParseError(f"{path}: line {lineno}: non-numeric field in {line!r}") from None
        if any(v < 0 for v in values[1:]):
            raise SensorParseError(f"{path}: line {lineno}: negative power in {line!r}")
        trace.records.append(
            TraceRecord(timestamp=values[0], watts_total=values[1],
                        watts_per_channel=tuple(values[2:]))
        )
    if not trace.records:
        raise EmptyTraceError(f"{path}: no records")
    return trace


@dataclass(frozen=True)
class TraceSummary:
    name: str
    duration_s: float
    joules: float
    watts_mean: float
    watts_max: float

    @property
    def edp(self) -> float:
        return self.joules * self.duration_s


def summarize(trace: Trace, name: str = "") -> TraceSummary:
    """Integrate a trace with measured timestamps: sum of w_i * (t_{i+1} - t_i)."""
    timestamps = [r.timestamp for r in trace.records]
    watts = [r.watts_total for r in trace.records]
    return TraceSummary(
        name=name or trace.backend_name,
        duration_s=timestamps[-1] - timestamps[0],
        joules=kernels.integrate_left_rectangle(timestamps, watts),
        watts_mean=sum(watts) / len(watts),
        watts_max=max(watts),
    )


def align_by_nearest(traces: list[Trace]) -> list[tuple[float, ...]]:
    """Rows (timestamp, watts per trace) on the first trace's timeline.

    Other traces contribute the record nearest each reference timestamp,
    which keeps concurrently recorded traces stackable for plotting.
    """
    reference = traces[0].records
    others = [[r.timestamp for r in t.records] for t in traces[1:]]
    rows = []
    for record in reference:
        row = [record.timestamp, record.watts_total]
        for trace, timestamps in zip(traces[1:], others):
            i = bisect.bisect_left(timestamps, record.timestamp)
            if i >= len(timestamps):
                i = len(timestamps) - 1
            elif i > 0 and record.timestamp - timestamps[i - 1] <= timestamps[i] - record.timestamp:
                i -= 1
            row.append(trace.records[i].watts_total)
        rows.append(tuple(row))
    return rows
