/** Value types mirrored from the toolkit's wire format. */

/** One consistent snapshot: monotonic timestamp plus cumulative joules. */
export interface State {
  timestamp: number;
  joules_total: number;
  joules_per_channel: number[];
  channel_names: string[];
}

/** Derived joules/watts/seconds triple for one measured region. */
export interface Measurement {
  joules: number;
  watts: number;
  seconds: number;
  backendName: string;
}

export interface SensorDescriptor {
  backendName: string;
  deviceIndex: number;
  counterKind: string;
  minIntervalMs: number;
  channelNames: string[];
}

export interface BackendInfo {
  name: string;
  available: boolean;
  deviceCount: number;
  minIntervalMs: number;
  counterKind: string;
}

/**
 * Measurements collected by stacked `measure` wrappers, innermost first.
 *
 * A distinct Array subclass so wrappers can tell their own result apart from
 * an arbitrary user-returned array when folding stacked layers together.
 */
export class MeasurementList extends Array<Measurement> {}

/** A wrapped call's own return value together with the collected measurements. */
export class MeasuredResult<T> {
  constructor(
    readonly measurements: MeasurementList,
    readonly value: T,
  ) {}
}

/** Error forwarded from the toolkit process; `type` is its exception class. */
export class PmtError extends Error {
  constructor(
    readonly type: string,
    message: string,
  ) {
    super(message);
    this.name = type;
  }
}
