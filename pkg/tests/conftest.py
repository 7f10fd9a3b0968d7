"""Shared fixtures: fake sysfs trees and a factory that reaps sensors."""

from __future__ import annotations

import pytest

import pmt
from helpers import add_hwmon_device, add_rapl_domain


@pytest.fixture
def sysfs_root(tmp_path):
    """Empty directory standing in for /sys/class (powercap/ + hwmon/)."""
    root = tmp_path / "sysfs"
    root.mkdir()
    return root


@pytest.fixture
def rapl_tree(sysfs_root):
    """One package domain, the smallest realistic powercap tree."""
    add_rapl_domain(sysfs_root, "intel-rapl:0", name="package-0",
                    energy_uj=0, max_range=262_143_328_850)
    return sysfs_root


@pytest.fixture
def hwmon_power_tree(sysfs_root):
    """One hwmon device exposing a single constant 150 W power channel."""
    add_hwmon_device(sysfs_root, "hwmon0", name="board",
                     files={"power1_input": "150000000"})
    return sysfs_root


@pytest.fixture
def sensors():
    """Factory wrapper around pmt.create that stops everything at teardown."""
    created = []

    def factory(*args, **kwargs):
        sensor = pmt.create(*args, **kwargs)
        created.append(sensor)
        return sensor

    yield factory
    for sensor in created:
        sensor.stop()
