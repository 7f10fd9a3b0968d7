"""Snapshot and measurement value types plus the arithmetic on them.

Integrated (power-kind) energy is carried internally as an integer count of
``2**-20`` joule quanta, roughly a microjoule.  Publishing ``quanta *
2**-20`` keeps every ``joules_total`` a dyadic rational, so differences and
sums of differences between snapshots are exact in double precision:
``joules(a, c) == joules(a, b) + joules(b, c)`` holds bit-for-bit.
Counter-backed (energy-kind) sensors instead publish the exact microjoule
total divided by 1e6, which keeps them equal to the hardware counter delta
to double precision.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DegenerateMeasurementError, NegativeIntervalError

# One internal energy quantum in joules (~0.95 uJ).
JOULE_QUANTUM = 2.0**-20
QUANTA_PER_JOULE = 2**20


class CounterKind(enum.Enum):
    """What a raw backend reports per poll."""

    CUMULATIVE_ENERGY = "cumulative_energy"
    INSTANTANEOUS_POWER = "instantaneous_power"


@dataclass(frozen=True)
class SensorDescriptor:
    """Identity and capabilities of one backend instance."""

    backend_name: str
    device_index: int
    counter_kind: CounterKind
    min_interval_ms: int
    channel_names: tuple[str, ...]


@dataclass(frozen=True)
class State:
    """One consistent snapshot: monotonic timestamp plus cumulative joules.

    Timestamps are zeroed at sensor creation.  ``joules_total`` aggregates
    the non-overlapping channels (for hierarchical sources such as RAPL
    sub-domains the parent already contains the children, so the children
    are listed per-channel but not re-added to the total).  States are plain
    values: they stay valid after the sensor stops.
    """

    timestamp: float
    joules_total: float
    joules_per_channel: tuple[float, ...]
    channel_names: tuple[str, ...]


@dataclass(frozen=True)
class Measurement:
    """Derived joules/watts/seconds triple for one measured region."""

    joules: float
    watts: float
    seconds: float
    backend_name: str = ""

    @classmethod
    def between(cls, start: State, end: State, backend_name: str = "") -> "Measurement":
        return cls(
            joules=joules(start, end),
            watts=watts(start, end),
            seconds=seconds(start, end),
            backend_name=backend_name,
        )


def _require_ordered(start: State, end: State) -> None:
    if end.timestamp < start.timestamp:
        raise NegativeIntervalError(
            f"end snapshot (t={end.timestamp}) precedes start (t={start.timestamp})"
        )


def joules(start: State, end: State) -> float:
    """Energy consumed between two snapshots of the same sensor."""
    _require_ordered(start, end)
    return end.joules_total - start.joules_total


def seconds(start: State, end: State) -> float:
    """Elapsed time between two snapshots of the same sensor."""
    _require_ordered(start, end)
    return end.timestamp - start.timestamp


def watts(start: State, end: State) -> float:
    """Average power between two snapshots; 0 over a zero-length interval."""
    dt = seconds(start, end)
    if dt == 0.0:
        return 0.0
    return joules(start, end) / dt


def energy_delay_product(m: Measurement) -> float:
    """Energy times execution time, in joule-seconds."""
    return m.joules * m.seconds


def flops_efficiency(m: Measurement, flop_count: int) -> float:
    """Floating-point throughput per watt, in GFLOP/s/W."""
    if flop_count < 0:
        raise ValueError(f"flop_count must be >= 0, got {flop_count}")
    if m.seconds <= 0.0 or m.watts <= 0.0:
        raise DegenerateMeasurementError(
            f"need positive time and power, got {m.seconds} s at {m.watts} W"
        )
    return (flop_count / m.seconds / 1e9) / m.watts


def quanta_to_joules(quanta: int) -> float:
    """Exact float value of an integer quanta count."""
    return quanta * JOULE_QUANTUM
