/**
 * Status codes returned by every binding call.
 *
 * A nonzero status always leaves a human-readable message retrievable
 * through `bindLastError()`.
 */
export enum StatusCode {
  /** Not an error. */
  Ok = 0,
  /** The underlying library rejected the request (bad grid name, ...). */
  DomainError = 1,
  /** The handle does not reference a live object (released or never issued). */
  InvalidHandle = 2,
  /** An argument is out of range for the referenced object. */
  InvalidArgument = 3,
}

export class BindingError extends Error {
  public readonly status: StatusCode;

  constructor(status: StatusCode, message: string) {
    super(message);
    this.name = "BindingError";
    this.status = status;
  }
}
