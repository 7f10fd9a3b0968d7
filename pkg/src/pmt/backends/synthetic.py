"""Deterministic in-process power source for tests, demos and benchmarks."""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..core import CounterKind
from ..errors import InvalidConfigError
from .base import RawBackend, sanitize_label

SHAPES = ("constant", "ramp", "square")


@dataclass(frozen=True)
class SyntheticProfile:
    """Power as a function of elapsed seconds."""

    shape: str = "constant"
    base_watts: float = 30.0
    peak_watts: float = 30.0
    period_s: float = 1.0
    duration_s: float = 1.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise InvalidConfigError(f"unknown shape {self.shape!r}, expected one of {SHAPES}")
        if self.base_watts < 0:
            raise InvalidConfigError(f"base_watts must be >= 0, got {self.base_watts}")
        if self.peak_watts < self.base_watts:
            raise InvalidConfigError(
                f"peak_watts ({self.peak_watts}) must be >= base_watts ({self.base_watts})"
            )
        if self.period_s <= 0 or self.duration_s <= 0:
            raise InvalidConfigError("period_s and duration_s must be > 0")

    def power_at(self, t: float) -> float:
        if self.shape == "constant":
            return self.base_watts
        if self.shape == "ramp":
            frac = min(t / self.duration_s, 1.0)
            return self.base_watts + (self.peak_watts - self.base_watts) * frac
        # square: peak during the first half of each period
        return self.peak_watts if (t % self.period_s) < self.period_s / 2 else self.base_watts

    def energy_between(self, t0: float, t1: float) -> float:
        """Closed-form integral of power_at over [t0, t1]; the test oracle."""
        return self._integral(t1) - self._integral(t0)

    def _integral(self, t: float) -> float:
        if self.shape == "constant":
            return self.base_watts * t
        if self.shape == "ramp":
            d, b, p = self.duration_s, self.base_watts, self.peak_watts
            if t <= d:
                return b * t + (p - b) * t * t / (2 * d)
            return b * d + (p - b) * d / 2 + p * (t - d)
        h = self.period_s / 2
        full, rem = divmod(t, self.period_s)
        e = full * h * (self.peak_watts + self.base_watts)
        if rem < h:
            return e + self.peak_watts * rem
        return e + self.peak_watts * h + self.base_watts * (rem - h)


def profile_from_config(config: dict) -> SyntheticProfile:
    if "power_watts" in config:
        w = float(config["power_watts"])
        return SyntheticProfile(shape="constant", base_watts=w, peak_watts=w)
    kwargs = {}
    for key in ("shape", "base_watts", "peak_watts", "period_s", "duration_s"):
        if key in config:
            kwargs[key] = config[key] if key == "shape" else float(config[key])
    if "base_watts" in kwargs and "peak_watts" not in kwargs:
        kwargs["peak_watts"] = kwargs["base_watts"]
    return SyntheticProfile(**kwargs)


class SyntheticBackend(RawBackend):
    backend_name = "synthetic"
    kind = CounterKind.INSTANTANEOUS_POWER
    default_interval_ms = 10

    def __init__(self, device_index: int = 0, config: dict | None = None, label: str = "synthetic"):
        config = dict(config or {})
        self.device_index = device_index
        self.label = sanitize_label(label)
        self.profile = profile_from_config(config)
        self.min_interval_ms = int(config.get("min_interval_ms", 1))
        if self.min_interval_ms < 1:
            raise InvalidConfigError("min_interval_ms must be >= 1 ms")
        self.channel_names = (self.label,)
        self._t0 = time.monotonic()

    def sample(self) -> list[float]:
        return [self.profile.power_at(time.monotonic() - self._t0)]
