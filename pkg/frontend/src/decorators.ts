/**
 * Stackable measurement wrappers.
 *
 * `measure` brackets each call of the wrapped function with paired snapshots
 * and folds its Measurement into the result; stacking wrappers yields one
 * Measurement per layer, innermost first:
 *
 *     const myApplication = measure("rapl")(measure("nvml")(async () => {
 *       await work();
 *     }));
 *     const measures = await myApplication();
 *     for (const m of measures) console.log(m);
 *
 * A wrapped function that returns nothing yields the bare MeasurementList;
 * otherwise the caller gets a MeasuredResult carrying both the list and the
 * original return value.  Sensors are created per call and stopped after it,
 * so each call owns its resources and calls are safe to run concurrently.
 */

import { create, measurementBetween } from "./sensors.js";
import { MeasuredResult, MeasurementList, type Measurement } from "./types.js";

type AnyFunction<Args extends unknown[], Result> = (...args: Args) => Result | Promise<Result>;

function fold(inner: unknown, measurement: Measurement): MeasurementList | MeasuredResult<unknown> {
  if (inner instanceof MeasurementList) {
    inner.push(measurement);
    return inner;
  }
  if (inner instanceof MeasuredResult) {
    inner.measurements.push(measurement);
    return inner;
  }
  const list = new MeasurementList();
  list.push(measurement);
  if (inner === undefined) {
    return list;
  }
  return new MeasuredResult(list, inner);
}

/**
 * Wrap a function so every call is measured on the named backend.
 * The backend is resolved at call time, not at wrap time; the wrapped
 * function's exceptions propagate after the end snapshot is taken.
 */
export function measure(backendName: string, deviceIndex = 0, config: Record<string, unknown> = {}) {
  return function wrap<Args extends unknown[], Result>(
    fn: AnyFunction<Args, Result>,
  ): (...args: Args) => Promise<MeasurementList | MeasuredResult<unknown>> {
    return async function measured(...args: Args) {
      const sensor = await create(backendName, deviceIndex, config);
      try {
        const start = await sensor.read();
        let inner: unknown;
        let thrown: unknown;
        let didThrow = false;
        try {
          inner = await fn(...args);
        } catch (error) {
          didThrow = true;
          thrown = error;
        }
        const end = await sensor.read();
        if (didThrow) throw thrown;
        const measurement = await measurementBetween(start, end, backendName);
        return fold(inner, measurement);
      } finally {
        await sensor.stop();
      }
    };
  };
}

/**
 * Wrap a function so every call records a power trace to `filename`.
 * Recording starts before the wrapped function runs and an unwritable file
 * fails the call without invoking it; the return value passes through
 * unchanged.
 */
export function dump(backendName: string, filename: string, deviceIndex = 0,
                     config: Record<string, unknown> = {}) {
  return function wrap<Args extends unknown[], Result>(
    fn: AnyFunction<Args, Result>,
  ): (...args: Args) => Promise<Result> {
    return async function dumped(...args: Args) {
      const sensor = await create(backendName, deviceIndex, config);
      try {
        await sensor.startDump(filename);
        try {
          return await fn(...args);
        } finally {
          await sensor.stopDump();
        }
      } finally {
        await sensor.stop();
      }
    };
  };
}
