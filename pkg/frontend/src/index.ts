export { StatusCode, BindingError } from "./errors.js";
export {
  bindGridNew,
  bindGridSize,
  bindGridPoint,
  bindRelease,
  bindVersion,
  bindLastError,
  bindRegistryCount,
} from "./bindings.js";
