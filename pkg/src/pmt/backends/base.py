"""Raw backend interface consumed by the sampler loop."""

from __future__ import annotations

import re
from abc import ABC, abstractmethod

from ..core import CounterKind, SensorDescriptor

_LABEL_UNSAFE = re.compile(r"[\s,]+")


def sanitize_label(label: str) -> str:
    """Channel/backend labels appear in dump headers: no spaces or commas."""
    return _LABEL_UNSAFE.sub("_", label.strip()) or "unnamed"


class RawBackend(ABC):
    """One pollable power source.

    A backend instance is owned by exactly one sampler loop; ``sample`` is
    never called concurrently.  Power-kind backends return watts per channel,
    energy-kind backends return cumulative integer microjoules per channel
    (raw, wrap-uncorrected).
    """

    #: registry name of the backend family ("synthetic", "rapl", ...)
    backend_name: str
    #: per-instance label, defaults to backend_name (e.g. "synthetic-a")
    label: str
    device_index: int
    kind: CounterKind
    min_interval_ms: int
    default_interval_ms: int
    channel_names: tuple[str, ...]
    #: indices of channels summed into joules_total; None means all of them
    aggregate_channel_indices: tuple[int, ...] | None = None
    #: per-channel counter modulus, energy kind only
    wrap_moduli: tuple[int, ...] = ()

    @abstractmethod
    def sample(self) -> list:
        """Poll every channel once."""

    def close(self) -> None:
        """Release any device handle; idempotent."""

    def descriptor(self) -> SensorDescriptor:
        return SensorDescriptor(
            backend_name=self.label,
            device_index=self.device_index,
            counter_kind=self.kind,
            min_interval_ms=self.min_interval_ms,
            channel_names=self.channel_names,
        )
