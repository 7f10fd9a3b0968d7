"""Sensor handle: a raw backend paired with its background sampler."""

from __future__ import annotations

from . import core
from .backends.base import RawBackend
from .core import Measurement, SensorDescriptor, State
from .sampler import Sampler, SamplerConfig


class Sensor:
    """Opaque handle returned by ``pmt.create``.

    ``read`` is safe from any thread; snapshots are immutable values and
    outlive the sensor.  ``stop`` is idempotent and leaves the last snapshot
    readable.
    """

    def __init__(self, backend: RawBackend, config: SamplerConfig):
        self._backend = backend
        self._sampler = Sampler(backend, config)
        self._sampler.start()

    @property
    def name(self) -> str:
        return self._backend.label

    @property
    def descriptor(self) -> SensorDescriptor:
        return self._backend.descriptor()

    @property
    def interval_ms(self) -> int:
        return self._sampler.config.interval_ms

    @property
    def stopped(self) -> bool:
        return self._sampler.stopped

    def read(self) -> State:
        return self._sampler.read()

    def joules(self, start: State, end: State) -> float:
        return core.joules(start, end)

    def watts(self, start: State, end: State) -> float:
        return core.watts(start, end)

    def seconds(self, start: State, end: State) -> float:
        return core.seconds(start, end)

    def measurement(self, start: State, end: State) -> Measurement:
        return Measurement.between(start, end, backend_name=self.name)

    def start_dump(self, path) -> None:
        self._sampler.start_dump(path)

    def stop_dump(self) -> None:
        self._sampler.stop_dump()

    @property
    def dump_active(self) -> bool:
        return self._sampler.dump_active

    def stop(self) -> None:
        self._sampler.stop()
        self._backend.close()

    def __enter__(self) -> "Sensor":
        return self

    def __exit__(self, *exc_info) -> None:
        self.stop()

    def __repr__(self) -> str:
        return f"Sensor({self.name!r}, device={self._backend.device_index})"
