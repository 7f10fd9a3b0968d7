"""CPU energy backend over the Linux powercap sysfs tree.

Reads cumulative microjoule counters from ``intel-rapl:<n>`` package domains.
Sub-domains (``intel-rapl:<n>:<m>``, e.g. core/uncore/dram) are exposed as
extra channels but never re-added to the total: the package counter already
contains them.

The tree root defaults to ``/sys/class/powercap``.  For testing against a
fixture tree, either pass ``config={"root": ...}`` or set ``PMT_SYSFS_ROOT``
to a directory that mimics ``/sys/class`` (i.e. contains ``powercap/``).
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..core import CounterKind
from ..errors import NoDomainsFoundError, SensorParseError
from .base import RawBackend, sanitize_label

DEFAULT_ROOT = Path("/sys/class/powercap")
SYSFS_ROOT_ENV = "PMT_SYSFS_ROOT"

# Counters without an advertised range get a modulus too large to ever wrap.
FALLBACK_MAX_RANGE_UJ = 2**62

_TOP_DIR = re.compile(r"^intel-rapl:(\d+)$")
_SUB_DIR = re.compile(r"^intel-rapl:(\d+):(\d+)$")


@dataclass
class PowercapDomain:
    """One RAPL domain directory: name, wrap modulus and last raw reading."""

    path: Path
    name: str
    max_energy_range_uj: int
    last_raw_uj: int = 0
    subdomains: list["PowercapDomain"] = field(default_factory=list)


def powercap_root(config: dict | None = None) -> Path:
    config = config or {}
    if "root" in config:
        return Path(config["root"])
    env = os.environ.get(SYSFS_ROOT_ENV)
    if env:
        return Path(env) / "powercap"
    return DEFAULT_ROOT


def read_counter_file(path: Path) -> int:
    """Parse one ASCII decimal counter file; raises on junk or negatives."""
    text = path.read_text()
    try:
        value = int(text.strip())
    except ValueError:
        raise SensorParseError(f"{path}: expected a decimal integer, got {text!r}") from None
    if value < 0:
        raise SensorParseError(f"{path}: counter value must be >= 0, got {value}")
    return value


def read_raw(domain: PowercapDomain) -> int:
    """Current raw microjoule counter of one domain."""
    return read_counter_file(domain.path / "energy_uj")


def _load_domain(path: Path) -> PowercapDomain:
    name_file = path / "name"
    name = name_file.read_text().strip() if name_file.is_file() else path.name
    max_file = path / "max_energy_range_uj"
    max_range = read_counter_file(max_file) if max_file.is_file() else FALLBACK_MAX_RANGE_UJ
    if max_range <= 0:
        raise SensorParseError(f"{max_file}: wrap modulus must be > 0, got {max_range}")
    domain = PowercapDomain(path=path, name=sanitize_label(name), max_energy_range_uj=max_range)
    domain.last_raw_uj = read_raw(domain)
    return domain


def enumerate_domains(root: Path) -> list[PowercapDomain]:
    """Package-level domains under ``root`` in index order, sub-domains attached.

    Raises NoDomainsFoundError when the tree holds no ``intel-rapl:<n>``
    directory with an ``energy_uj`` counter.
    """
    packages: dict[int, PowercapDomain] = {}
    subs: list[tuple[int, int, Path]] = []
    if root.is_dir():
        for entry in root.iterdir():
            if not entry.is_dir() or not (entry / "energy_uj").is_file():
                continue
            if m := _TOP_DIR.match(entry.name):
                packages[int(m.group(1))] = _load_domain(entry)
            elif m := _SUB_DIR.match(entry.name):
                subs.append((int(m.group(1)), int(m.group(2)), entry))
    if not packages:
        raise NoDomainsFoundError(f"no intel-rapl:<n> domains under {root}")
    for pkg_idx, sub_idx, path in sorted(subs, key=lambda t: t[:2]):
        if pkg_idx in packages:
            packages[pkg_idx].subdomains.append(_load_domain(path))
    return [packages[i] for i in sorted(packages)]


class PowercapBackend(RawBackend):
    """One sensor per package domain; its sub-domains become extra channels."""

    backend_name = "rapl"
    kind = CounterKind.CUMULATIVE_ENERGY
    min_interval_ms = 100
    default_interval_ms = 100

    def __init__(self, device_index: int = 0, config: dict | None = None, label: str = "rapl"):
        packages = enumerate_domains(powercap_root(config))
        if not 0 <= device_index < len(packages):
            raise NoDomainsFoundError(
                f"package index {device_index} out of range, found {len(packages)} package(s)"
            )
        self.device_index = device_index
        self.label = sanitize_label(label)
        package = packages[device_index]
        self._domains: list[PowercapDomain] = [package, *package.subdomains]
        self.channel_names = tuple(d.name for d in self._domains)
        self.wrap_moduli = tuple(d.max_energy_range_uj for d in self._domains)
        # only the package counter feeds the total: sub-domains overlap it
        self.aggregate_channel_indices = (0,)

    def sample(self) -> list[int]:
        return [read_raw(d) for d in self._domains]


def probe(config: dict | None = None) -> tuple[bool, int]:
    """(available, package count) without building a sensor."""
    try:
        return True, len(enumerate_domains(powercap_root(config)))
    except (NoDomainsFoundError, OSError, SensorParseError):
        return False, 0
