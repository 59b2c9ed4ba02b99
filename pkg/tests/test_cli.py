"""Command-line interface: exit codes, reports, determinism, registry."""

import json
import os
import re
import subprocess
import sys

import numpy as np
import pytest

from sqk3 import verify
from sqk3.cli import main
from sqk3.config import RunConfig, load_config_file, parse_grid


def run_cli(*argv):
    return main(list(argv))


class TestVerifyCommand:
    def test_all_scope_passes(self, tmp_path):
        out = str(tmp_path / "rep.json")
        assert run_cli("verify", "all", "--seed", "42", "--out", out) == 0
        rep = json.loads(open(out).read())
        assert rep["passed"] is True
        assert [c["id"] for c in rep["checks"]] == verify.DOCUMENTED_CHECK_IDS

    def test_geometry_scope_passes(self, tmp_path):
        out = str(tmp_path / "rep.json")
        assert run_cli("verify", "geometry", "--out", out) == 0
        rep = json.loads(open(out).read())
        assert rep["schema"] == 1
        assert rep["passed"] is True
        ids = [c["id"] for c in rep["checks"]]
        assert "geometry/orthonormality" in ids

    def test_chart_invalid_combo_skips_with_reason(self, tmp_path):
        out = str(tmp_path / "rep.json")
        assert run_cli("verify", "geometry", "--r", "1", "--H", "5",
                       "--out", out) == 0
        rep = json.loads(open(out).read())
        by_id = {c["id"]: c for c in rep["checks"]}
        assert by_id["geometry/orthonormality"]["skipped"] == "chart-invalid"
        # frame-algebraic identities still run
        assert by_id["geometry/frame-algebra"]["skipped"] == ""
        assert by_id["geometry/frame-algebra"]["provenance"] == "algebra-only"

    def test_sqk_scope_at_special_point(self, tmp_path):
        out = str(tmp_path / "rep.json")
        assert run_cli("verify", "sqk", "--r", "0", "--H", "13",
                       "--out", out) == 0
        rep = json.loads(open(out).read())
        assert rep["passed"] is True

    def test_report_deterministic_except_timestamp(self, tmp_path):
        a = str(tmp_path / "a.json")
        b = str(tmp_path / "b.json")
        assert run_cli("verify", "energy", "--out", a) == 0
        assert run_cli("verify", "energy", "--out", b) == 0
        strip = re.compile(r'"timestamp": "[^"]*"')
        ta = strip.sub('"timestamp": "X"', open(a).read())
        tb = strip.sub('"timestamp": "X"', open(b).read())
        assert ta == tb

    def test_bad_tolerance_is_usage_error(self):
        assert run_cli("verify", "geometry", "--tol-fd", "-1") == 2

    def test_unknown_scope_is_usage_error(self):
        assert run_cli("verify", "everything") == 2


class TestRegistry:
    def test_documented_ids_match_registry(self):
        assert [cid for cid, _, _ in verify.CHECKS] == verify.DOCUMENTED_CHECK_IDS

    def test_ids_unique(self):
        ids = [cid for cid, _, _ in verify.CHECKS]
        assert len(set(ids)) == len(ids)

    def test_every_check_has_known_scope(self):
        for _, scope, _ in verify.CHECKS:
            assert scope in verify.SCOPES

    def test_scoped_run_covers_scope_once(self):
        cfg = RunConfig(n_points=5, h_grid=(1.0,))
        results = verify.run_scope("energy", cfg)
        ids = [r.check_id for r in results]
        want = [cid for cid, scope, _ in verify.CHECKS if scope == "energy"]
        assert ids == want


class TestTablesCommand:
    def test_table2_text(self, capsys):
        assert run_cli("tables", "table2", "--r", "0") == 0
        out = capsys.readouterr().out
        assert "H=13" in out
        assert "all valid H" in out

    def test_table3_text(self, capsys):
        assert run_cli("tables", "table3") == 0
        out = capsys.readouterr().out
        assert "DEC: empty" in out

    def test_table3_riemannian_rejected(self):
        assert run_cli("tables", "table3", "--r", "0") == 2

    def test_table3_coarse_grid(self, capsys):
        assert run_cli("tables", "table3", "--grid=-5:5:0.5") == 0
        out = capsys.readouterr().out
        assert "[0.5,1]" in out  # WEC boundary of type (i) within one step


class TestSimulateCommand:
    def test_magnetic_run(self, tmp_path, capsys):
        out = str(tmp_path / "t.csv")
        code = run_cli("simulate", "magnetic", "--r", "0", "--H", "2",
                       "--t-max", "1.0", "--out", out)
        assert code == 0
        text = capsys.readouterr().out
        assert "domain_exit=False" in text
        lines = open(out).read().strip().split("\n")
        assert lines[0].startswith("t,x1,x2,x3")
        assert len(lines) == 1002

    def test_dirac_flow_eigen_constants_reeb_orbit(self, tmp_path):
        out = str(tmp_path / "t.csv")
        code = run_cli("simulate", "dirac-flow", "--r", "0", "--H", "2",
                       "--C1", "1,0", "--C2", "1,0", "--t-max", "0.5",
                       "--initial", "1.2,0.4,2.2", "--out", out)
        assert code == 0
        data = np.array([[float(v) for v in line.split(",")]
                         for line in open(out).read().strip().split("\n")[1:]])
        assert np.max(np.abs(data[:, 1] - 1.2)) < 1e-12
        assert np.max(np.abs(data[:, 2] - 0.4)) < 1e-12
        assert data[-1, 3] != data[0, 3]

    def test_invalid_dt_rejected(self):
        assert run_cli("simulate", "magnetic", "--dt", "-0.001") == 2


class TestEdmCommand:
    def test_certificate_values(self, capsys):
        assert run_cli("edm", "--q", "2", "--r", "1") == 0
        cert = json.loads(capsys.readouterr().out)
        assert float(cert["H"]) == -0.6
        assert float(cert["Lambda"]) == -1.0
        assert cert["classification"] == "SL2-type"
        assert cert["mode"] == "chart"

    def test_denominator_rejected(self):
        assert run_cli("edm", "--q", "8", "--r", "0") == 2

    def test_chart_invalid_algebra_only(self, capsys):
        assert run_cli("edm", "--q", "12", "--r", "1") == 0
        cert = json.loads(capsys.readouterr().out)
        assert cert["mode"] == "algebra-only"
        assert cert["classification"] == "S3-type"
        assert abs(float(cert["H"]) - 6.2) < 1e-12


class TestConfigFile:
    def test_file_and_flag_precedence(self, tmp_path):
        path = str(tmp_path / "cfg")
        with open(path, "w") as fh:
            fh.write("# comment\nseed = 7\nn_points = 11\ntol_fd = 2e-5\n")
        cfg = load_config_file(path)
        assert cfg.seed == 7 and cfg.n_points == 11 and cfg.tol_fd == 2e-5

    def test_env_var_supplies_config(self, tmp_path):
        path = str(tmp_path / "cfg")
        with open(path, "w") as fh:
            fh.write("seed = 99\n")
        code = ("from sqk3.config import base_config; "
                "print(base_config().seed)")
        env = dict(os.environ, SQK_CONFIG=path)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        assert out.stdout.strip() == "99"

    def test_unknown_key_rejected(self, tmp_path):
        path = str(tmp_path / "cfg")
        with open(path, "w") as fh:
            fh.write("frobnicate = 1\n")
        with pytest.raises(Exception):
            load_config_file(path)

    def test_grid_parsing(self):
        g = parse_grid("-1:1:0.5")
        assert np.allclose(g, [-1.0, -0.5, 0.0, 0.5, 1.0])
        with pytest.raises(Exception):
            parse_grid("1:0:0.5")
