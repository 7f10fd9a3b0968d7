"""Per-sensor background loop: polls the raw backend, integrates to
cumulative joules, publishes consistent snapshots, optionally streams trace
records.

Power-kind sources are integrated with the left-rectangle rule (previous
power times measured dt), energy-kind sources accumulate wrap-corrected
counter deltas.  The shared snapshot is swapped as one immutable State under
a lock, so readers never see a timestamp from one tick with joules from
another.  Missed ticks are not back-filled; dt is measured, not assumed.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from pathlib import Path

from . import kernels
from .backends.base import RawBackend
from .core import QUANTA_PER_JOULE, CounterKind, State, quanta_to_joules
from .errors import (
    BackendReadFailedError,
    DumpAlreadyActiveError,
    DumpNotActiveError,
    IntervalTooSmallError,
    SensorStoppedError,
)
from .trace import TraceRecord, TraceWriter


@dataclass
class SamplerConfig:
    interval_ms: int
    dump_path: str | Path | None = None
    dump_enabled: bool = False

    def __post_init__(self):
        if self.interval_ms < 1:
            raise IntervalTooSmallError(f"interval must be >= 1 ms, got {self.interval_ms}")
        if self.dump_path is not None:
            self.dump_enabled = True


@dataclass
class EnergyAccumulator:
    """Integrator state for one channel.

    Power-kind channels integrate into ``accumulated_quanta`` (2**-20 J
    units, dyadic, so differences between published totals add exactly);
    energy-kind channels keep the exact cumulative microjoule integer and
    publish its correctly rounded quotient, so the reported joules equal the
    counter-delta sum to double precision.  ``watts_now`` is the derived
    instantaneous power written to trace records.
    """

    kind: CounterKind
    max_range: int = 0
    last_raw: int = 0
    last_power_watts: float = 0.0
    accumulated_quanta: int = 0
    accumulated_uj: int = 0
    last_tick: float = 0.0
    watts_now: float = 0.0

    @property
    def accumulated_joules(self) -> float:
        if self.kind is CounterKind.CUMULATIVE_ENERGY:
            return self.accumulated_uj / 1e6
        return quanta_to_joules(self.accumulated_quanta)


def prime(acc: EnergyAccumulator, raw_sample, now: float) -> EnergyAccumulator:
    """First tick: establish the zero point without accumulating."""
    if acc.kind is CounterKind.INSTANTANEOUS_POWER:
        acc.last_power_watts = float(raw_sample)
        acc.watts_now = float(raw_sample)
    else:
        acc.last_raw = int(raw_sample)
        acc.watts_now = 0.0
    acc.last_tick = now
    return acc


def tick(acc: EnergyAccumulator, raw_sample, kind: CounterKind, dt: float) -> EnergyAccumulator:
    """Advance one primed accumulator by one sample taken dt seconds later."""
    if kind is CounterKind.INSTANTANEOUS_POWER:
        acc.accumulated_quanta += round(acc.last_power_watts * dt * QUANTA_PER_JOULE)
        acc.last_power_watts = float(raw_sample)
        acc.watts_now = float(raw_sample)
    else:
        delta_uj = kernels.wrap_corrected_delta(acc.last_raw, int(raw_sample), acc.max_range)
        acc.accumulated_uj += delta_uj
        acc.last_raw = int(raw_sample)
        acc.watts_now = (delta_uj / 1e6) / dt
    acc.last_tick += dt
    return acc


class Sampler:
    """Owns one raw backend and runs its polling thread."""

    def __init__(self, backend: RawBackend, config: SamplerConfig):
        if config.interval_ms < backend.min_interval_ms:
            raise IntervalTooSmallError(
                f"{backend.label}: interval {config.interval_ms} ms below "
                f"backend minimum {backend.min_interval_ms} ms"
            )
        self.backend = backend
        self.config = config
        self.interval_s = config.interval_ms / 1000.0
        moduli = backend.wrap_moduli or (0,) * len(backend.channel_names)
        self._accumulators = [
            EnergyAccumulator(kind=backend.kind, max_range=m) for m in moduli
        ]
        agg = backend.aggregate_channel_indices
        self._aggregate = tuple(range(len(backend.channel_names))) if agg is None else tuple(agg)
        self._state_lock = threading.Lock()
        self._dump_lock = threading.Lock()
        self._stop_event = threading.Event()
        self._thread: threading.Thread | None = None
        self._snapshot: State | None = None
        self._failed: Exception | None = None
        self._writer: TraceWriter | None = None
        self._t0 = 0.0
        self._last_monotonic = 0.0

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        """Take the zero-point tick synchronously, then start the loop."""
        now = time.monotonic()
        try:
            raws = self.backend.sample()
        except Exception as exc:
            raise BackendReadFailedError(f"{self.backend.label}: first poll failed: {exc}") from exc
        self._t0 = now
        self._last_monotonic = now
        for acc, raw in zip(self._accumulators, raws):
            prime(acc, raw, 0.0)
        self._publish(0.0)
        if self.config.dump_enabled and self.config.dump_path is not None:
            self.start_dump(self.config.dump_path)
            self._write_record(0.0)
        self._thread = threading.Thread(
            target=self._run, name=f"pmt-sampler-{self.backend.label}", daemon=True
        )
        self._thread.start()

    def stop(self) -> None:
        """Terminate the loop within one interval; idempotent; snapshot stays."""
        self._stop_event.set()
        if self._thread is not None:
            self._thread.join(timeout=max(1.0, 5 * self.interval_s))
            self._thread = None
        with self._dump_lock:
            if self._writer is not None:
                self._writer.close()
                self._writer = None

    @property
    def stopped(self) -> bool:
        return self._stop_event.is_set()

    # -- snapshots ---------------------------------------------------------

    def read(self) -> State:
        with self._state_lock:
            if self._failed is not None:
                raise SensorStoppedError(
                    f"{self.backend.label}: sampler stopped after backend failure: {self._failed}"
                ) from self._failed
            assert self._snapshot is not None
            return self._snapshot

    def _publish(self, timestamp: float) -> None:
        per_channel = tuple(acc.accumulated_joules for acc in self._accumulators)
        if self.backend.kind is CounterKind.CUMULATIVE_ENERGY:
            total = sum(self._accumulators[i].accumulated_uj for i in self._aggregate) / 1e6
        else:
            total_quanta = sum(self._accumulators[i].accumulated_quanta for i in self._aggregate)
            total = quanta_to_joules(total_quanta)
        state = State(
            timestamp=timestamp,
            joules_total=total,
            joules_per_channel=per_channel,
            channel_names=self.backend.channel_names,
        )
        with self._state_lock:
            self._snapshot = state

    # -- dump tap ----------------------------------------------------------

    def start_dump(self, path) -> None:
        with self._dump_lock:
            if self._writer is not None:
                raise DumpAlreadyActiveError(f"dump already active on {self._writer.path}")
            self._writer = TraceWriter(
                path,
                backend_name=self.backend.label,
                device_index=self.backend.device_index,
                interval_ms=self.config.interval_ms,
                channel_names=self.backend.channel_names,
            )

    def stop_dump(self) -> None:
        with self._dump_lock:
            if self._writer is None:
                raise DumpNotActiveError("no dump active")
            self._writer.close()
            self._writer = None

    @property
    def dump_active(self) -> bool:
        with self._dump_lock:
            return self._writer is not None

    def _write_record(self, timestamp: float) -> None:
        with self._dump_lock:
            if self._writer is None:
                return
            watts = tuple(acc.watts_now for acc in self._accumulators)
            total = sum(watts[i] for i in self._aggregate)
            self._writer.write(TraceRecord(timestamp, total, watts))

    # -- loop --------------------------------------------------------------

    def _run(self) -> None:
        next_tick = self._t0 + self.interval_s
        while not self._stop_event.wait(timeout=max(0.0, next_tick - time.monotonic())):
            now = time.monotonic()
            dt = now - self._last_monotonic
            if dt > 0.0:
                try:
                    raws = self.backend.sample()
                except Exception as exc:  # freeze: no fresh snapshots after failure
                    with self._state_lock:
                        self._failed = exc
                    self._stop_event.set()
                    return
                self._last_monotonic = now
                for acc, raw in zip(self._accumulators, raws):
                    tick(acc, raw, self.backend.kind, dt)
                self._publish(now - self._t0)
                self._write_record(now - self._t0)
            # overruns shift the schedule forward; missed ticks are not
            # back-filled with catch-up bursts
            next_tick += self.interval_s
            if next_tick <= now:
                next_tick = now + self.interval_s
