"""JSON-line stdio server exposing the sensor API to other languages.

One request object per line on stdin, one response per line on stdout.
Requests carry ``id`` (echoed back), ``op`` and op-specific fields; responses
are ``{"id": ..., "ok": true, ...}`` or ``{"id": ..., "ok": false, "error":
{"type": <exception class>, "message": ...}}``.  Snapshots travel as plain
values, so interval arithmetic happens server-side on the originals.

Ops: ping, list, create, read, stop, start_dump, stop_dump, delta, shutdown.
EOF on stdin stops all sensors and exits.
"""

from __future__ import annotations

import json
import sys

from . import core, registry
from .core import State
from .errors import PmtError


def _state_to_json(state: State) -> dict:
    return {
        "timestamp": state.timestamp,
        "joules_total": state.joules_total,
        "joules_per_channel": list(state.joules_per_channel),
        "channel_names": list(state.channel_names),
    }


def _state_from_json(payload: dict) -> State:
    return State(
        timestamp=float(payload["timestamp"]),
        joules_total=float(payload["joules_total"]),
        joules_per_channel=tuple(payload.get("joules_per_channel", ())),
        channel_names=tuple(payload.get("channel_names", ())),
    )


class BridgeServer:
    def __init__(self, stdin=None, stdout=None):
        self._stdin = stdin or sys.stdin
        self._stdout = stdout or sys.stdout
        self._sensors: dict[int, object] = {}
        self._next_id = 1

    def handle(self, request: dict) -> dict:
        op = request.get("op")
        handler = getattr(self, f"_op_{op}", None)
        if handler is None:
            raise PmtError(f"unknown op {op!r}")
        return handler(request)

    # -- ops ----------------------------------------------------------------

    def _op_ping(self, request: dict) -> dict:
        return {}

    def _op_list(self, request: dict) -> dict:
        backends = []
        for status in registry.list_backends():
            d = status.descriptor
            backends.append(
                {
                    "name": d.backend_name,
                    "available": status.available,
                    "device_count": status.device_count,
                    "min_interval_ms": d.min_interval_ms,
                    "counter_kind": d.counter_kind.value,
                }
            )
        return {"backends": backends}

    def _op_create(self, request: dict) -> dict:
        sensor = registry.create(
            request["backend"],
            int(request.get("device", 0)),
            dict(request.get("config") or {}),
        )
        handle = self._next_id
        self._next_id += 1
        self._sensors[handle] = sensor
        d = sensor.descriptor
        return {
            "sensor": handle,
            "descriptor": {
                "backend_name": d.backend_name,
                "device_index": d.device_index,
                "counter_kind": d.counter_kind.value,
                "min_interval_ms": d.min_interval_ms,
                "channel_names": list(d.channel_names),
            },
        }

    def _sensor(self, request: dict):
        handle = request.get("sensor")
        sensor = self._sensors.get(handle)
        if sensor is None:
            raise PmtError(f"no such sensor handle: {handle!r}")
        return sensor

    def _op_read(self, request: dict) -> dict:
        return {"state": _state_to_json(self._sensor(request).read())}

    def _op_stop(self, request: dict) -> dict:
        sensor = self._sensor(request)
        sensor.stop()
        del self._sensors[request["sensor"]]
        return {}

    def _op_start_dump(self, request: dict) -> dict:
        self._sensor(request).start_dump(request["path"])
        return {}

    def _op_stop_dump(self, request: dict) -> dict:
        self._sensor(request).stop_dump()
        return {}

    def _op_delta(self, request: dict) -> dict:
        start = _state_from_json(request["start"])
        end = _state_from_json(request["end"])
        return {
            "joules": core.joules(start, end),
            "watts": core.watts(start, end),
            "seconds": core.seconds(start, end),
        }

    def _op_shutdown(self, request: dict) -> dict:
        return {"_shutdown": True}

    # -- loop ----------------------------------------------------------------

    def _respond(self, payload: dict) -> None:
        self._stdout.write(json.dumps(payload) + "\n")
        self._stdout.flush()

    def serve(self) -> int:
        shutdown = False
        for line in self._stdin:
            line = line.strip()
            if not line:
                continue
            request_id = None
            try:
                request = json.loads(line)
                request_id = request.get("id")
                result = self.handle(request)
                shutdown = result.pop("_shutdown", False)
                self._respond({"id": request_id, "ok": True, **result})
            except Exception as exc:  # noqa: BLE001 - every error goes to the peer
                self._respond(
                    {
                        "id": request_id,
                        "ok": False,
                        "error": {"type": type(exc).__name__, "message": str(exc)},
                    }
                )
            if shutdown:
                break
        for sensor in self._sensors.values():
            sensor.stop()
        self._sensors.clear()
        return 0


def serve() -> int:
    return BridgeServer().serve()
