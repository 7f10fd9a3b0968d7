"""Power and energy measurement toolkit.

Uniform sensors over heterogeneous power sources (CPU energy counters,
GPU management interfaces, generic sysfs files, synthetic profiles), each
backed by a background sampling thread.  Paired snapshots give a region's
joules/watts/seconds; dump-mode streams a timestamped power trace to a file.

    import pmt

    sensor = pmt.create("synthetic", power_watts=30)
    start = sensor.read()
    ...  # region of interest
    end = sensor.read()
    print(pmt.joules(start, end), pmt.watts(start, end), pmt.seconds(start, end))
    sensor.stop()
"""

from .core import (
    CounterKind,
    Measurement,
    SensorDescriptor,
    State,
    energy_delay_product,
    flops_efficiency,
    joules,
    seconds,
    watts,
)
from .errors import (
    BackendReadFailedError,
    DegenerateMeasurementError,
    DeviceUnavailableError,
    DumpAlreadyActiveError,
    DumpNotActiveError,
    EmptyTraceError,
    IntervalTooSmallError,
    InvalidConfigError,
    MixedKindsError,
    NegativeIntervalError,
    NoDomainsFoundError,
    PmtError,
    SensorParseError,
    SensorStoppedError,
    UnknownBackendError,
)
from .registry import BackendStatus, create, list_backends, registered_names
from .sensor import Sensor

__version__ = "0.1.0"

__all__ = [
    "BackendReadFailedError",
    "BackendStatus",
    "CounterKind",
    "DegenerateMeasurementError",
    "DeviceUnavailableError",
    "DumpAlreadyActiveError",
    "DumpNotActiveError",
    "EmptyTraceError",
    "IntervalTooSmallError",
    "InvalidConfigError",
    "Measurement",
    "MixedKindsError",
    "NegativeIntervalError",
    "NoDomainsFoundError",
    "PmtError",
    "Sensor",
    "SensorDescriptor",
    "SensorParseError",
    "SensorStoppedError",
    "State",
    "UnknownBackendError",
    "create",
    "energy_delay_product",
    "flops_efficiency",
    "joules",
    "list_backends",
    "registered_names",
    "seconds",
    "watts",
    "__version__",
]
