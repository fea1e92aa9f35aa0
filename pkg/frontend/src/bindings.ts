/**
 * Flat binding surface over the spheregrid command-line interface.
 *
 * Each function delegates to exactly one primary operation and reports
 * through (status, value) pairs; the last failure message is kept for
 * `bindLastError()`.  No library state crosses the boundary except the
 * opaque handles issued here.
 */

import { spawnSync } from "node:child_process";

import { StatusCode } from "./errors.js";
import { register, release, resolve, registryCount } from "./registry.js";

const PYTHON = process.env.SPHEREGRID_PYTHON ?? "python3";

let lastError = "";

function fail(status: StatusCode, message: string): StatusCode {
  lastError = message;
  return status;
}

function runCli(args: string[]): { code: number; stdout: string; stderr: string } {
  const r = spawnSync(PYTHON, ["-m", "spheregrid", ...args], {
    encoding: "utf8",
  });
  if (r.error) {
    return { code: -1, stdout: "", stderr: String(r.error) };
  }
  return { code: r.status ?? -1, stdout: r.stdout, stderr: r.stderr };
}

export function bindLastError(): string {
  return lastError;
}

export function bindVersion(): string {
  return runCli(["info", "--version"]).stdout.trim();
}

export interface GridNewResult {
  status: StatusCode;
  handle: number;
}

export function bindGridNew(name: string): GridNewResult {
  const r = runCli(["grid", "describe", name, "--format", "structured"]);
  if (r.code !== 0) {
    const message = r.stderr.trim() || `grid construction failed for ${JSON.stringify(name)}`;
    return { status: fail(StatusCode.DomainError, message), handle: 0 };
  }
  const doc = JSON.parse(r.stdout) as { name: string; npts: number };
  const handle = register({ kind: "grid", name: doc.name, npts: doc.npts });
  return { status: StatusCode.Ok, handle };
}

export interface GridSizeResult {
  status: StatusCode;
  size: number;
}

export function bindGridSize(handle: number): GridSizeResult {
  const grid = resolve(handle);
  if (!grid) {
    return { status: fail(StatusCode.InvalidHandle, `invalid handle ${handle}`), size: 0 };
  }
  return { status: StatusCode.Ok, size: grid.npts };
}

export interface GridPointResult {
  status: StatusCode;
  lon: number;
  lat: number;
}

export function bindGridPoint(handle: number, g: number): GridPointResult {
  const grid = resolve(handle);
  if (!grid) {
    return {
      status: fail(StatusCode.InvalidHandle, `invalid handle ${handle}`),
      lon: 0,
      lat: 0,
    };
  }
  if (!Number.isInteger(g) || g < 0 || g >= grid.npts) {
    return {
      status: fail(
        StatusCode.InvalidArgument,
        `point index ${g} out of range [0, ${grid.npts}) for ${grid.name}`,
      ),
      lon: 0,
      lat: 0,
    };
  }
  const r = runCli(["grid", "point", grid.name, String(g)]);
  if (r.code !== 0) {
    return { status: fail(StatusCode.DomainError, r.stderr.trim()), lon: 0, lat: 0 };
  }
  const [lon, lat] = r.stdout.trim().split(/\s+/).map(Number);
  return { status: StatusCode.Ok, lon, lat };
}

export function bindRelease(handle: number): StatusCode {
  if (!release(handle)) {
    return fail(StatusCode.InvalidHandle, `invalid handle ${handle} (already released?)`);
  }
  return StatusCode.Ok;
}

/** Leak probe: number of handles still alive in the registry. */
export function bindRegistryCount(): number {
  return registryCount();
}
