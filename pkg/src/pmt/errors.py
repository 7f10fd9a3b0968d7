"""Exception hierarchy for the toolkit.

Everything raised on purpose derives from :class:`PmtError`; plain I/O
failures (unwritable dump paths, unreadable sysfs files) surface as the
builtin :class:`OSError` family.
"""


class PmtError(Exception):
    """Base class for all toolkit errors."""


class UnknownBackendError(PmtError):
    """Requested backend name is not in the registry."""


class DeviceUnavailableError(PmtError):
    """Backend is registered but its device or interface is not reachable."""


class NoDomainsFoundError(DeviceUnavailableError):
    """A sysfs scan found nothing to measure under the configured root."""


class InvalidConfigError(PmtError):
    """Sensor configuration rejected."""


class IntervalTooSmallError(InvalidConfigError):
    """Requested sampling interval is below the backend's minimum."""


class MixedKindsError(DeviceUnavailableError):
    """A single hwmon directory exposes both power and energy channels."""


class SensorStoppedError(PmtError):
    """Sensor can no longer produce fresh snapshots after a backend failure."""


class BackendReadFailedError(PmtError):
    """Raw backend query failed."""


class SensorParseError(PmtError, ValueError):
    """A sysfs counter file or a trace file did not parse."""


class NegativeIntervalError(PmtError, ValueError):
    """End snapshot precedes the start snapshot."""


class DegenerateMeasurementError(PmtError, ValueError):
    """Measurement has zero duration or zero power where a rate is needed."""


class DumpAlreadyActiveError(PmtError):
    """start_dump called while a dump is already running."""


class DumpNotActiveError(PmtError):
    """stop_dump called with no dump running."""


class EmptyTraceError(PmtError):
    """Trace file parsed but contains no records."""
