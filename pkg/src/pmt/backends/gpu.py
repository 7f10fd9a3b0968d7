"""Vendor GPU power backend behind a minimal reader contract.

The contract is four calls: ``initialize``, ``device_count``, ``power_mw``
and ``shutdown``.  Production use binds it to the NVIDIA management library
or the AMD SMI library via the lazy ctypes adapters below; tests inject a
scripted double through ``config={"reader": ...}``.  Missing driver
libraries make the backend report unavailable instead of breaking anything
else.
"""

from __future__ import annotations

import ctypes
import ctypes.util
from abc import ABC, abstractmethod

from ..core import CounterKind
from ..errors import BackendReadFailedError, DeviceUnavailableError
from .base import RawBackend, sanitize_label

GPU_MIN_INTERVAL_MS = 10


class GpuReader(ABC):
    """Low-level board power reader.

    ``initialize`` raises on failure; ``power_mw`` returns integer milliwatts
    and raises on query errors; ``power_mw`` is only called between a
    successful ``initialize`` and ``shutdown``.
    """

    @abstractmethod
    def initialize(self) -> None: ...

    @abstractmethod
    def device_count(self) -> int: ...

    @abstractmethod
    def power_mw(self, device_index: int) -> int: ...

    @abstractmethod
    def shutdown(self) -> None: ...


def sample_power(reader: GpuReader, device_index: int) -> float:
    """Current board power in watts."""
    try:
        return reader.power_mw(device_index) / 1000.0
    except Exception as exc:
        raise BackendReadFailedError(f"gpu power query failed: {exc}") from exc


class GpuBackend(RawBackend):
    kind = CounterKind.INSTANTANEOUS_POWER
    min_interval_ms = GPU_MIN_INTERVAL_MS
    default_interval_ms = GPU_MIN_INTERVAL_MS

    def __init__(self, reader: GpuReader, device_index: int, backend_name: str, label: str):
        self.backend_name = backend_name
        self.label = sanitize_label(label)
        self.device_index = device_index
        self._reader = reader
        self._initialized = False
        try:
            reader.initialize()
        except Exception as exc:
            raise DeviceUnavailableError(f"{backend_name} initialization failed: {exc}") from exc
        self._initialized = True
        count = reader.device_count()
        if not 0 <= device_index < count:
            self.close()
            raise DeviceUnavailableError(
                f"{backend_name} device {device_index} out of range, found {count} device(s)"
            )
        self.channel_names = (f"gpu{device_index}",)

    def sample(self) -> list[float]:
        return [sample_power(self._reader, self.device_index)]

    def close(self) -> None:
        # shutdown exactly once per backend lifetime, error paths included
        if self._initialized:
            self._initialized = False
            self._reader.shutdown()


class NvmlReader(GpuReader):
    """ctypes binding to the NVIDIA management library's power query."""

    def __init__(self, library: str | None = None):
        self._library = library
        self._lib = None

    def _load(self):
        name = self._library or ctypes.util.find_library("nvidia-ml") or "libnvidia-ml.so.1"
        return ctypes.CDLL(name)

    def initialize(self) -> None:
        self._lib = self._load()
        rc = self._lib.nvmlInit_v2()
        if rc != 0:
            self._lib = None
            raise DeviceUnavailableError(f"nvmlInit_v2 returned {rc}")

    def device_count(self) -> int:
        count = ctypes.c_uint()
        rc = self._lib.nvmlDeviceGetCount_v2(ctypes.byref(count))
        if rc != 0:
            raise BackendReadFailedError(f"nvmlDeviceGetCount_v2 returned {rc}")
        return count.value

    def power_mw(self, device_index: int) -> int:
        handle = ctypes.c_void_p()
        rc = self._lib.nvmlDeviceGetHandleByIndex_v2(device_index, ctypes.byref(handle))
        if rc != 0:
            raise BackendReadFailedError(f"nvmlDeviceGetHandleByIndex_v2 returned {rc}")
        power = ctypes.c_uint()
        rc = self._lib.nvmlDeviceGetPowerUsage(handle, ctypes.byref(power))
        if rc != 0:
            raise BackendReadFailedError(f"nvmlDeviceGetPowerUsage returned {rc}")
        return power.value

    def shutdown(self) -> None:
        if self._lib is not None:
            self._lib.nvmlShutdown()
            self._lib = None


class RocmSmiReader(GpuReader):
    """ctypes binding to the AMD SMI library's average socket power query."""

    def __init__(self, library: str | None = None):
        self._library = library
        self._lib = None

    def initialize(self) -> None:
        name = self._library or ctypes.util.find_library("rocm_smi64") or "librocm_smi64.so"
        self._lib = ctypes.CDLL(name)
        rc = self._lib.rsmi_init(0)
        if rc != 0:
            self._lib = None
            raise DeviceUnavailableError(f"rsmi_init returned {rc}")

    def device_count(self) -> int:
        count = ctypes.c_uint32()
        rc = self._lib.rsmi_num_monitor_devices(ctypes.byref(count))
        if rc != 0:
            raise BackendReadFailedError(f"rsmi_num_monitor_devices returned {rc}")
        return count.value

    def power_mw(self, device_index: int) -> int:
        microwatts = ctypes.c_uint64()
        rc = self._lib.rsmi_dev_power_ave_get(device_index, 0, ctypes.byref(microwatts))
        if rc != 0:
            raise BackendReadFailedError(f"rsmi_dev_power_ave_get returned {rc}")
        return microwatts.value // 1000

    def shutdown(self) -> None:
        if self._lib is not None:
            self._lib.rsmi_shut_down()
            self._lib = None


def create_gpu_backend(
    reader: GpuReader, device_index: int, backend_name: str = "gpu", label: str | None = None
) -> GpuBackend:
    return GpuBackend(reader, device_index, backend_name, label or backend_name)


def probe(reader_factory) -> tuple[bool, int]:
    """(available, device count); swallows missing-library failures."""
    reader = reader_factory()
    try:
        reader.initialize()
    except Exception:
        return False, 0
    try:
        return True, reader.device_count()
    except Exception:
        return True, 0
    finally:
        reader.shutdown()
