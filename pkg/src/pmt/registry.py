"""Static backend registry and the sensor factory.

The table is populated at import time; there is no dynamic plugin loading.
A requested name resolves either to an exact registry entry or, when written
``<registered>-<suffix>`` (e.g. ``synthetic-a``), to that entry with the full
name kept as the instance label, so several independently configured sensors
of one backend family can coexist and stay distinguishable in reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .backends import gpu, hwmon, powercap, synthetic
from .backends.base import RawBackend
from .core import CounterKind, SensorDescriptor
from .errors import UnknownBackendError
from .sampler import SamplerConfig
from .sensor import Sensor

#: config keys consumed by the factory itself rather than a backend
_FACTORY_KEYS = ("interval_ms", "dump_path")


@dataclass(frozen=True)
class BackendEntry:
    name: str
    counter_kind: CounterKind
    min_interval_ms: int
    default_interval_ms: int
    factory: Callable[[int, dict, str], RawBackend]
    probe: Callable[[dict], tuple[bool, int]]


@dataclass(frozen=True)
class BackendStatus:
    """Registry-level view of one backend for listings."""

    descriptor: SensorDescriptor
    available: bool
    device_count: int


def _gpu_factory(reader_default: Callable[[], gpu.GpuReader], name: str):
    def factory(device_index: int, config: dict, label: str) -> RawBackend:
        reader = config.get("reader") or reader_default()
        return gpu.create_gpu_backend(reader, device_index, backend_name=name, label=label)

    return factory


def _gpu_probe(reader_default: Callable[[], gpu.GpuReader]):
    def probe(config: dict) -> tuple[bool, int]:
        reader = config.get("reader")
        if reader is not None:
            return gpu.probe(lambda: reader)
        return gpu.probe(reader_default)

    return probe


_REGISTRY: dict[str, BackendEntry] = {}


def _register(entry: BackendEntry) -> None:
    if entry.name in _REGISTRY:
        raise ValueError(f"backend {entry.name!r} already registered")
    _REGISTRY[entry.name] = entry


_register(
    BackendEntry(
        name="synthetic",
        counter_kind=CounterKind.INSTANTANEOUS_POWER,
        min_interval_ms=1,
        default_interval_ms=10,
        factory=lambda device, config, label: synthetic.SyntheticBackend(device, config, label),
        probe=lambda config: (True, 1),
    )
)
_register(
    BackendEntry(
        name="rapl",
        counter_kind=CounterKind.CUMULATIVE_ENERGY,
        min_interval_ms=100,
        default_interval_ms=100,
        factory=lambda device, config, label: powercap.PowercapBackend(device, config, label),
        probe=powercap.probe,
    )
)
_register(
    BackendEntry(
        name="hwmon",
        counter_kind=CounterKind.INSTANTANEOUS_POWER,
        min_interval_ms=100,
        default_interval_ms=100,
        factory=lambda device, config, label: hwmon.HwmonBackend(device, config, label),
        probe=hwmon.probe,
    )
)
_register(
    BackendEntry(
        name="nvml",
        counter_kind=CounterKind.INSTANTANEOUS_POWER,
        min_interval_ms=gpu.GPU_MIN_INTERVAL_MS,
        default_interval_ms=gpu.GPU_MIN_INTERVAL_MS,
        factory=_gpu_factory(gpu.NvmlReader, "nvml"),
        probe=_gpu_probe(gpu.NvmlReader),
    )
)
_register(
    BackendEntry(
        name="rocm",
        counter_kind=CounterKind.INSTANTANEOUS_POWER,
        min_interval_ms=gpu.GPU_MIN_INTERVAL_MS,
        default_interval_ms=gpu.GPU_MIN_INTERVAL_MS,
        factory=_gpu_factory(gpu.RocmSmiReader, "rocm"),
        probe=_gpu_probe(gpu.RocmSmiReader),
    )
)


def registered_names() -> list[str]:
    return list(_REGISTRY)


def resolve(backend_name: str) -> tuple[BackendEntry, str]:
    """Map a requested name to (registry entry, instance label)."""
    if backend_name in _REGISTRY:
        return _REGISTRY[backend_name], backend_name
    base, sep, suffix = backend_name.partition("-")
    if sep and suffix and base in _REGISTRY:
        return _REGISTRY[base], backend_name
    raise UnknownBackendError(
        f"unknown backend {backend_name!r}; registered: {', '.join(_REGISTRY)}"
    )


def create(backend_name: str, device_index: int = 0, config: dict | None = None, **kwargs) -> Sensor:
    """Create a sensor and start its background sampler.

    ``config`` (merged with keyword arguments) may carry ``interval_ms``,
    ``dump_path`` and backend-specific keys such as ``power_watts`` or
    ``root``.  The zero-point snapshot is taken before this returns.
    """
    entry, label = resolve(backend_name)
    config = {**(config or {}), **kwargs}
    backend_config = {k: v for k, v in config.items() if k not in _FACTORY_KEYS}
    backend = entry.factory(device_index, backend_config, label)
    sampler_config = SamplerConfig(
        interval_ms=int(config.get("interval_ms", max(entry.default_interval_ms,
                                                      backend.min_interval_ms))),
        dump_path=config.get("dump_path"),
    )
    try:
        return Sensor(backend, sampler_config)
    except Exception:
        backend.close()
        raise


def list_backends(config: dict | None = None) -> list[BackendStatus]:
    """Descriptors of every registered backend plus current availability."""
    config = config or {}
    statuses = []
    for entry in _REGISTRY.values():
        try:
            available, device_count = entry.probe(config)
        except Exception:
            available, device_count = False, 0
        statuses.append(
            BackendStatus(
                descriptor=SensorDescriptor(
                    backend_name=entry.name,
                    device_index=0,
                    counter_kind=entry.counter_kind,
                    min_interval_ms=entry.min_interval_ms,
                    channel_names=(),
                ),
                available=available,
                device_count=device_count,
            )
        )
    return statuses
