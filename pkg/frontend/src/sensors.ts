/** Sensor construction and snapshot arithmetic over the bridge. */

import { bridge } from "./bridge.js";
import type { BackendInfo, Measurement, SensorDescriptor, State } from "./types.js";

export class Sensor {
  constructor(
    private readonly handle: number,
    readonly descriptor: SensorDescriptor,
  ) {}

  async read(): Promise<State> {
    const response = await bridge().request("read", { sensor: this.handle });
    return response.state as unknown as State;
  }

  async stop(): Promise<void> {
    await bridge().request("stop", { sensor: this.handle });
  }

  async startDump(path: string): Promise<void> {
    await bridge().request("start_dump", { sensor: this.handle, path });
  }

  async stopDump(): Promise<void> {
    await bridge().request("stop_dump", { sensor: this.handle });
  }
}

export async function create(
  backendName: string,
  deviceIndex = 0,
  config: Record<string, unknown> = {},
): Promise<Sensor> {
  const response = await bridge().request("create", {
    backend: backendName,
    device: deviceIndex,
    config,
  });
  const d = response.descriptor as Record<string, unknown>;
  return new Sensor(response.sensor as number, {
    backendName: d.backend_name as string,
    deviceIndex: d.device_index as number,
    counterKind: d.counter_kind as string,
    minIntervalMs: d.min_interval_ms as number,
    channelNames: d.channel_names as string[],
  });
}

export async function read(sensor: Sensor): Promise<State> {
  return sensor.read();
}

async function delta(start: State, end: State): Promise<{ joules: number; watts: number; seconds: number }> {
  const response = await bridge().request("delta", { start, end });
  return response as unknown as { joules: number; watts: number; seconds: number };
}

/** Energy consumed between two snapshots of the same sensor. */
export async function joules(start: State, end: State): Promise<number> {
  return (await delta(start, end)).joules;
}

/** Average power between two snapshots; 0 over a zero-length interval. */
export async function watts(start: State, end: State): Promise<number> {
  return (await delta(start, end)).watts;
}

/** Elapsed time between two snapshots of the same sensor. */
export async function seconds(start: State, end: State): Promise<number> {
  return (await delta(start, end)).seconds;
}

export async function measurementBetween(
  start: State,
  end: State,
  backendName: string,
): Promise<Measurement> {
  const d = await delta(start, end);
  return { joules: d.joules, watts: d.watts, seconds: d.seconds, backendName };
}

export async function listBackends(): Promise<BackendInfo[]> {
  const response = await bridge().request("list");
  const backends = response.backends as Array<Record<string, unknown>>;
  return backends.map((b) => ({
    name: b.name as string,
    available: b.available as boolean,
    deviceCount: b.device_count as number,
    minIntervalMs: b.min_interval_ms as number,
    counterKind: b.counter_kind as string,
  }));
}
