/**
 * Handle registry: opaque integer keys for objects owned by the binding
 * layer.  Keys are never reused, so a released handle stays invalid and
 * double release is detectable rather than undefined behaviour.
 */

export interface GridObject {
  readonly kind: "grid";
  readonly name: string;
  readonly npts: number;
}

type Owned = GridObject;

const objects = new Map<number, Owned>();
let nextHandle = 1;

export function register(obj: Owned): number {
  const handle = nextHandle++;
  objects.set(handle, obj);
  return handle;
}

export function resolve(handle: number): Owned | undefined {
  return objects.get(handle);
}

export function release(handle: number): boolean {
  return objects.delete(handle);
}

/** Probe for leak checks: number of live handles. */
export function registryCount(): number {
  return objects.size;
}
