/**
 * Smoke test: create a grid, query it, exercise the error paths, release,
 * and verify nothing leaked.  Exits 0 on success, 1 with a message on the
 * first failed check.
 */

import { spawnSync } from "node:child_process";

import {
  bindGridNew,
  bindGridPoint,
  bindGridSize,
  bindLastError,
  bindRegistryCount,
  bindRelease,
  bindVersion,
  StatusCode,
} from "./index.js";

let failures = 0;

function check(label: string, ok: boolean, detail = ""): void {
  console.log(`${ok ? "PASS" : "FAIL"} ${label}${detail ? ` (${detail})` : ""}`);
  if (!ok) failures += 1;
}

const { status, handle } = bindGridNew("O32");
check("create O32", status === StatusCode.Ok && handle > 0);

const size = bindGridSize(handle);
check("size = 5248", size.status === StatusCode.Ok && size.size === 5248, `got ${size.size}`);

// point query must match the primary CLI on the same index
const g = 123;
const pt = bindGridPoint(handle, g);
const direct = spawnSync("python3", ["-m", "spheregrid", "grid", "point", "O32", String(g)], {
  encoding: "utf8",
});
const [lon, lat] = direct.stdout.trim().split(/\s+/).map(Number);
check(
  "point query matches primary",
  pt.status === StatusCode.Ok && pt.lon === lon && pt.lat === lat,
  `binding (${pt.lon}, ${pt.lat}) vs primary (${lon}, ${lat})`,
);

const outOfRange = bindGridPoint(handle, 5248);
check("index = npts -> status 3", outOfRange.status === StatusCode.InvalidArgument);

const bad = bindGridNew("bogus");
check(
  "bad name -> status 1 with message",
  bad.status === StatusCode.DomainError && bindLastError().length > 0,
  bindLastError(),
);

check("version matches primary", bindVersion().match(/^\d+\.\d+\.\d+$/) !== null);

check("release", bindRelease(handle) === StatusCode.Ok);
check("double release -> status 2", bindRelease(handle) === StatusCode.InvalidHandle);
check("registry empty at exit", bindRegistryCount() === 0);

process.exit(failures === 0 ? 0 : 1);
