"""Generic sysfs sensor backend for hwmon-style power/energy files.

Covers devices that publish ``power<k>_input`` (instantaneous microwatts) or
``energy<k>_input`` (cumulative microjoules) under ``hwmon<n>`` directories.
One sensor maps to one hwmon directory; a directory mixing both file kinds is
rejected so the counter kind stays a sensor-level property.

Root resolution mirrors the powercap backend: ``config={"root": ...}``, then
``$PMT_SYSFS_ROOT/hwmon``, then ``/sys/class/hwmon``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path

from ..core import CounterKind
from ..errors import MixedKindsError, NoDomainsFoundError, SensorParseError
from .base import RawBackend, sanitize_label
from .powercap import FALLBACK_MAX_RANGE_UJ, SYSFS_ROOT_ENV, read_counter_file

DEFAULT_ROOT = Path("/sys/class/hwmon")

POWER_UW = "power_uW"
ENERGY_UJ = "energy_uJ"

_DIR = re.compile(r"^hwmon(\d+)$")
_INPUT = re.compile(r"^(power|energy)(\d+)_input$")


@dataclass(frozen=True)
class HwmonChannel:
    file_path: Path
    kind: str  # POWER_UW or ENERGY_UJ
    label: str


def hwmon_root(config: dict | None = None) -> Path:
    config = config or {}
    if "root" in config:
        return Path(config["root"])
    env = os.environ.get(SYSFS_ROOT_ENV)
    if env:
        return Path(env) / "hwmon"
    return DEFAULT_ROOT


def _channel_label(directory: Path, prefix: str, index: int) -> str:
    label_file = directory / f"{prefix}{index}_label"
    if label_file.is_file():
        return sanitize_label(label_file.read_text().strip())
    name_file = directory / "name"
    base = name_file.read_text().strip() if name_file.is_file() else directory.name
    return sanitize_label(f"{base}-{prefix}{index}")


def _scan_directory(directory: Path) -> list[HwmonChannel]:
    found: list[tuple[str, int, Path]] = []
    for entry in directory.iterdir():
        if m := _INPUT.match(entry.name):
            found.append((m.group(1), int(m.group(2)), entry))
    kinds = {prefix for prefix, _, _ in found}
    if kinds == {"power", "energy"}:
        raise MixedKindsError(
            f"{directory} exposes both power and energy inputs; one sensor per kind"
        )
    channels = []
    for prefix, index, path in sorted(found, key=lambda t: t[1]):
        kind = POWER_UW if prefix == "power" else ENERGY_UJ
        channels.append(
            HwmonChannel(file_path=path, kind=kind, label=_channel_label(directory, prefix, index))
        )
    return channels


def _scan_devices(root: Path) -> list[tuple[Path, list[HwmonChannel]]]:
    devices = []
    if root.is_dir():
        dirs = [e for e in root.iterdir() if e.is_dir() and _DIR.match(e.name)]
        for directory in sorted(dirs, key=lambda p: int(_DIR.match(p.name).group(1))):
            channels = _scan_directory(directory)
            if channels:
                devices.append((directory, channels))
    return devices


def discover_channels(root: Path) -> list[HwmonChannel]:
    """All power/energy channels under ``root``, hwmon index then channel index."""
    devices = _scan_devices(root)
    if not devices:
        raise NoDomainsFoundError(f"no hwmon power/energy channels under {root}")
    return [channel for _, channels in devices for channel in channels]


def read_channel(channel: HwmonChannel) -> int:
    """Raw integer value of the channel's input file (uW or uJ)."""
    return read_counter_file(channel.file_path)


class HwmonBackend(RawBackend):
    backend_name = "hwmon"
    min_interval_ms = 100
    default_interval_ms = 100

    def __init__(self, device_index: int = 0, config: dict | None = None, label: str = "hwmon"):
        devices = _scan_devices(hwmon_root(config))
        if not devices:
            raise NoDomainsFoundError(f"no hwmon power/energy channels under {hwmon_root(config)}")
        if not 0 <= device_index < len(devices):
            raise NoDomainsFoundError(
                f"hwmon device index {device_index} out of range, found {len(devices)}"
            )
        self.device_index = device_index
        self.label = sanitize_label(label)
        _, self._channels = devices[device_index]
        self.channel_names = tuple(c.label for c in self._channels)
        if self._channels[0].kind == POWER_UW:
            self.kind = CounterKind.INSTANTANEOUS_POWER
        else:
            self.kind = CounterKind.CUMULATIVE_ENERGY
            self.wrap_moduli = tuple(FALLBACK_MAX_RANGE_UJ for _ in self._channels)

    def sample(self) -> list:
        raws = [read_channel(c) for c in self._channels]
        if self.kind == CounterKind.INSTANTANEOUS_POWER:
            return [uw / 1e6 for uw in raws]  # microwatts to watts
        return raws  # cumulative microjoules


def probe(config: dict | None = None) -> tuple[bool, int]:
    """(available, device count) without building a sensor."""
    try:
        devices = _scan_devices(hwmon_root(config))
    except (OSError, MixedKindsError, SensorParseError):
        return False, 0
    return (True, len(devices)) if devices else (False, 0)
