import json
import os
import re
import subprocess
import sys

import pytest

from spheregrid import runtime
from spheregrid.cli import main
from spheregrid.errors import DoubleInitialise


def run_cli(*args, env_debug=None):
    env = dict(os.environ)
    env.pop(runtime.DEBUG_ENV_VAR, None)
    if env_debug is not None:
        env[runtime.DEBUG_ENV_VAR] = env_debug
    return subprocess.run(
        [sys.executable, "-m", "spheregrid", *args],
        capture_output=True,
        text=True,
        env=env,
    )


class TestInfo:
    def test_version_is_semver(self):
        r = run_cli("info", "--version")
        assert r.returncode == 0
        assert re.fullmatch(r"\d+\.\d+\.\d+", r.stdout.strip())

    def test_git_is_commit_ish(self):
        r = run_cli("info", "--git")
        assert r.returncode == 0
        assert re.fullmatch(r"[0-9a-f]{7,40}", r.stdout.strip())

    def test_info_block(self):
        r = run_cli("info", "--info")
        assert r.returncode == 0
        out = r.stdout
        assert out.startswith(
            f"spheregrid version ({runtime.VERSION}), build ({runtime.BUILD_ID})"
        )
        for section in ("Build:", "Features:", "Dependencies:"):
            assert section in out
        for feat in ("BoundsChecking", "RankSimulator", "DeviceMirror", "Tessellation"):
            assert re.search(rf"{feat}\s*: ON", out)
        assert "numpy version (" in out
        assert "scipy version (" in out


class TestExitCodes:
    def test_unknown_flag_is_usage_error(self):
        assert run_cli("info", "--bogus").returncode == 2

    def test_missing_subcommand_is_usage_error(self):
        assert run_cli().returncode == 2

    def test_unknown_grid_is_domain_error(self):
        r = run_cli("grid", "describe", "Z9")
        assert r.returncode == 1
        assert "error:" in r.stderr
        assert "Z9" in r.stderr

    def test_success_is_zero(self):
        assert run_cli("grid", "describe", "F2").returncode == 0


class TestGrid:
    @pytest.mark.parametrize("name,npts", [("F1", 8), ("F8", 512), ("O8", 544), ("O32", 5248)])
    def test_describe_npts(self, name, npts):
        r = run_cli("grid", "describe", name, "--format", "structured")
        doc = json.loads(r.stdout)
        assert doc["npts"] == npts
        assert doc["name"] == name
        assert len(doc["rows"]) == 2 * int(name[1:])

    def test_describe_text(self):
        r = run_cli("grid", "describe", "F1")
        assert "npts : 8" in r.stdout
        assert "kind : full" in r.stdout

    def test_point_query(self):
        r = run_cli("grid", "point", "F1", "5")
        lon, lat = map(float, r.stdout.split())
        assert lon == 90.0
        assert lat == pytest.approx(-35.264389682754654, abs=1e-12)

    def test_point_out_of_range(self):
        r = run_cli("grid", "point", "F1", "8")
        assert r.returncode == 1


class TestDebugChannel:
    def test_enabled(self):
        r = run_cli("info", "--version", env_debug="1")
        assert f"debug: version {runtime.VERSION}" in r.stdout
        assert f"debug: build {runtime.BUILD_ID}" in r.stdout
        assert "debug: executable" in r.stdout

    def test_disabled_when_zero(self):
        r = run_cli("info", "--version", env_debug="0")
        assert "debug:" not in r.stdout

    def test_disabled_when_unset(self):
        r = run_cli("info", "--version")
        assert "debug:" not in r.stdout


class TestMeshAndPartition:
    def test_mesh_byte_deterministic(self, tmp_path):
        a, b = tmp_path / "a.msh", tmp_path / "b.msh"
        assert run_cli("mesh", "O2", "--pole", "--out", str(a)).returncode == 0
        assert run_cli("mesh", "O2", "--pole", "--out", str(b)).returncode == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes().startswith(b"$MeshFormat\n2.2 0 8\n$EndMeshFormat")

    def test_mesh_parts_writes_suffixed_files(self, tmp_path):
        out = tmp_path / "m.msh"
        r = run_cli("mesh", "F4", "--parts", "2", "--halo", "1", "--out", str(out))
        assert r.returncode == 0
        assert (tmp_path / "m.msh.p0").exists() and (tmp_path / "m.msh.p1").exists()

    def test_partition_counts(self, tmp_path):
        r = run_cli("partition", "F4", "--parts", "3")
        doc = json.loads(r.stdout)
        assert doc["nparts"] == 3
        assert sum(doc["counts"]) == 128


class TestRemap:
    def test_remap_report(self, tmp_path):
        out = tmp_path / "f.txt"
        r = run_cli(
            "remap",
            "--source", "O8",
            "--target", "F4",
            "--parts", "2",
            "--field", "constant:1",
            "--out", str(out),
            "--report",
        )
        assert r.returncode == 0
        report = dict(
            line.split(": ") for line in r.stdout.strip().splitlines() if ": " in line
        )
        assert float(report["max_error"]) < 1e-13
        assert int(report["messages_during_interpolation"]) == 0
        text = out.read_text()
        assert text.startswith("# field:")
        assert len([l for l in text.splitlines() if not l.startswith("#")]) == 128


class TestRuntime:
    def test_double_initialise(self):
        lib = runtime.initialise()
        try:
            with pytest.raises(DoubleInitialise):
                runtime.initialise()
        finally:
            runtime.finalise()

    def test_main_in_process(self, capsys):
        assert main(["grid", "describe", "F1"]) == 0
        assert "npts : 8" in capsys.readouterr().out
        assert main(["grid", "describe", "Q3"]) == 1
