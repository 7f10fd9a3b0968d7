"""Fixture-tree builders, scripted doubles and oracles used across tests."""

from __future__ import annotations

import os
import time
from pathlib import Path

from pmt.backends.gpu import GpuReader


def add_rapl_domain(sysfs_root: Path, dirname: str, name: str,
                    energy_uj: int = 0, max_range: int = 262_143_328_850) -> Path:
    """Create one powercap domain directory under <root>/powercap/."""
    domain = sysfs_root / "powercap" / dirname
    domain.mkdir(parents=True)
    (domain / "name").write_text(f"{name}\n")
    (domain / "energy_uj").write_text(f"{energy_uj}\n")
    (domain / "max_energy_range_uj").write_text(f"{max_range}\n")
    return domain


def set_counter(domain: Path, energy_uj: int, filename: str = "energy_uj") -> None:
    """Atomically replace a counter file so concurrent readers never see a
    half-written value (plain truncate+write would race with the sampler)."""
    tmp = domain / f".{filename}.tmp"
    tmp.write_text(f"{energy_uj}\n")
    os.replace(tmp, domain / filename)


def add_hwmon_device(sysfs_root: Path, dirname: str, files: dict[str, str],
                     name: str | None = None) -> Path:
    device = sysfs_root / "hwmon" / dirname
    device.mkdir(parents=True)
    if name is not None:
        (device / "name").write_text(f"{name}\n")
    for filename, content in files.items():
        (device / filename).write_text(f"{content}\n")
    return device


class ScriptedGpuReader(GpuReader):
    """Test double for the GPU reader contract.

    ``power_fn`` maps seconds-since-initialize to milliwatts; it may raise to
    script a query failure.  Every call is appended to ``calls`` so tests can
    assert the initialize/shutdown discipline.
    """

    def __init__(self, devices: int = 1, power_fn=lambda t: 250_000,
                 fail_initialize: bool = False):
        self.devices = devices
        self.power_fn = power_fn
        self.fail_initialize = fail_initialize
        self.calls: list[str] = []
        self._t0 = 0.0

    def initialize(self) -> None:
        self.calls.append("initialize")
        if self.fail_initialize:
            raise RuntimeError("scripted initialization failure")
        self._t0 = time.monotonic()

    def device_count(self) -> int:
        self.calls.append("device_count")
        return self.devices

    def power_mw(self, device_index: int) -> int:
        self.calls.append("power_mw")
        return int(self.power_fn(time.monotonic() - self._t0))

    def shutdown(self) -> None:
        self.calls.append("shutdown")


def modular_counter(increments: list[int], modulus: int, start: int = 0) -> list[int]:
    """Oracle: raw readings of a counter of the given modulus advancing by
    ``increments``; the true total is simply sum(increments)."""
    raws = [start % modulus]
    for inc in increments:
        raws.append((raws[-1] + inc) % modulus)
    return raws


def wait_for(predicate, timeout: float = 5.0, step: float = 0.01) -> bool:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if predicate():
            return True
        time.sleep(step)
    return predicate()
