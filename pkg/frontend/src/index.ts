export { Bridge, bridge, closeBridge } from "./bridge.js";
export { measure, dump } from "./decorators.js";
export {
  Sensor,
  create,
  joules,
  listBackends,
  measurementBetween,
  read,
  seconds,
  watts,
} from "./sensors.js";
export {
  MeasuredResult,
  MeasurementList,
  PmtError,
  type BackendInfo,
  type Measurement,
  type SensorDescriptor,
  type State,
} from "./types.js";
