"""Command-line entry points: configs in, deterministic reports out."""

import io
import json
from importlib import resources

import pytest

from orthotoric import cli


def bundled(name):
    return str(resources.files("orthotoric").joinpath("configs", name))


def run_to_dict(path, **kw):
    buf = io.StringIO()
    code = cli.run(path, stream=buf, **kw)
    return code, json.loads(buf.getvalue())


BASE = {
    "schema": 1,
    "name": "unit",
    "m": 1,
    "ell": 1,
    "nonconstant_domains": [[-0.9, 0.9]],
    "F": {"mode": "explicit", "coefficients": [[-1.0, 0.0, 1.0]]},
    "samples": {"count": 3, "seed": 7},
}


def write_config(tmp_path, overrides=None, drop=()):
    data = {**BASE, **(overrides or {})}
    for key in drop:
        data.pop(key, None)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return str(path)


class TestBundledConfigs:
    def test_sphere_passes_with_anchor(self):
        code, doc = run_to_dict(bundled("sphere.json"))
        assert code == 0
        assert doc["schema"] == 1
        assert doc["passed"] is True
        names = [s["name"] for s in doc["suites"]]
        assert "scalar_curvature_anchor" in names
        anchor = next(s for s in doc["suites"] if s["name"] == "scalar_curvature_anchor")
        assert anchor["residual_max"] < 1e-8

    def test_rigid_family_config_reports_class_checks(self):
        code, doc = run_to_dict(bundled("bf_m2.json"))
        assert code == 0
        names = [s["name"] for s in doc["suites"]]
        assert "bf.bochner_norm" in names
        assert all(s["passed"] for s in doc["suites"])


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        path = write_config(tmp_path)
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        assert cli.run(path, out=str(out1)) == 0
        assert cli.run(path, out=str(out2)) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_override_changes_hash(self, tmp_path):
        path = write_config(tmp_path)
        _, doc1 = run_to_dict(path)
        _, doc2 = run_to_dict(path, seed=99)
        assert doc1["config_hash"] != doc2["config_hash"]
        _, doc3 = run_to_dict(path, seed=99)
        assert doc2 == doc3


class TestConfigErrors:
    def test_missing_file(self, tmp_path):
        assert cli.run(str(tmp_path / "nope.json"), stream=io.StringIO()) == 2

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert cli.run(str(path), stream=io.StringIO()) == 2

    def test_unknown_key(self, tmp_path, capsys):
        path = write_config(tmp_path, {"extra_key": 1})
        assert cli.run(path, stream=io.StringIO()) == 2
        assert "extra_key" in capsys.readouterr().err

    def test_wrong_schema(self, tmp_path):
        path = write_config(tmp_path, {"schema": 2})
        assert cli.run(path, stream=io.StringIO()) == 2

    def test_overlapping_intervals_named_in_message(self, tmp_path, capsys):
        path = write_config(tmp_path, {
            "m": 2, "ell": 2,
            "nonconstant_domains": [[0.2, 0.9], [0.8, 1.9]],
            "F": {"mode": "explicit",
                  "coefficients": [[1.0, 0.0], [1.0, 0.0]]},
        })
        assert cli.run(path, stream=io.StringIO()) == 2
        err = capsys.readouterr().err
        assert "(0.2, 0.9)" in err and "(0.8, 1.9)" in err

    def test_fd_backend_rejected(self, tmp_path, capsys):
        path = write_config(tmp_path, {"diff": {"backend": "fd"}})
        assert cli.run(path, stream=io.StringIO()) == 2
        assert "dual" in capsys.readouterr().err

    def test_count_must_be_positive(self, tmp_path):
        path = write_config(tmp_path, {"samples": {"count": 0, "seed": 1}})
        assert cli.run(path, stream=io.StringIO()) == 2


class TestBuildErrors:
    def test_profile_sign_violation_exits_3(self, tmp_path, capsys):
        path = write_config(tmp_path, {
            "F": {"mode": "explicit", "coefficients": [[1.0, 0.0, -1.0]]},
        })
        assert cli.run(path, stream=io.StringIO()) == 3
        assert "sign" in capsys.readouterr().err


class TestFailureExit:
    def test_wrong_anchor_fails_with_exit_1(self, tmp_path):
        path = write_config(tmp_path, {
            "scalar_anchor": {"value": 3.0, "tolerance": 1e-6},
        })
        code, doc = run_to_dict(path)
        assert code == 1
        assert doc["passed"] is False
        anchor = next(s for s in doc["suites"] if s["name"] == "scalar_curvature_anchor")
        assert not anchor["passed"]

    def test_other_suites_still_reported(self, tmp_path):
        path = write_config(tmp_path, {
            "scalar_anchor": {"value": 3.0, "tolerance": 1e-6},
        })
        _, doc = run_to_dict(path)
        others = [s for s in doc["suites"] if s["name"] != "scalar_curvature_anchor"]
        assert others and all(s["passed"] for s in others)


class TestClassModeConfig:
    def test_class_mode_accepts_flat_coefficients(self, tmp_path):
        path = write_config(tmp_path, {
            "m": 2, "ell": 2,
            "nonconstant_domains": [[0.2, 0.8], [1.2, 1.9]],
            "F": {"mode": "csc", "coefficients": [0.0, -12.0, 4.0]},
            "checks": ["kahler", "hamiltonian"],
        })
        code, doc = run_to_dict(path)
        assert code == 0
        names = [s["name"] for s in doc["suites"]]
        assert "extremal.constant_scalar_curvature" in names

    def test_class_mode_forbids_explicit_factors(self, tmp_path, capsys):
        path = write_config(tmp_path, {
            "m": 2, "ell": 1,
            "nonconstant_domains": [[0.2, 0.8]],
            "constant_roots": [{"value": 1.0, "multiplicity": 1,
                               "factor": {"k": 1.0, "scale": -1.0}}],
            "F": {"mode": "wbf", "coefficients": [-1.0, 0.0, 0.0]},
        })
        assert cli.run(path, stream=io.StringIO()) == 2


class TestIdentitiesCommand:
    def test_small_run_passes(self, tmp_path):
        out = tmp_path / "ids.json"
        code = cli.identities(max_m=3, trials=4, out=str(out))
        assert code == 0
        doc = json.loads(out.read_text())
        names = [s["name"] for s in doc["suites"]]
        assert names == ["identities_m1", "identities_m2", "identities_m3"]
        assert doc["passed"] is True

    def test_bad_bounds_rejected(self):
        assert cli.identities(max_m=0, stream=io.StringIO()) == 2
        assert cli.identities(max_m=3, trials=0, stream=io.StringIO()) == 2


class TestMain:
    def test_run_subcommand(self, tmp_path, capsys):
        code = cli.main(["run", bundled("sphere.json")])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["passed"] is True

    def test_identities_subcommand(self, tmp_path):
        out = tmp_path / "r.json"
        assert cli.main(["identities", "--max-m", "2", "--trials", "2",
                         "--out", str(out)]) == 0
        assert json.loads(out.read_text())["passed"] is True

    def test_seed_flag(self, tmp_path, capsys):
        code = cli.main(["run", bundled("sphere.json"), "--seed", "123"])
        assert code == 0
