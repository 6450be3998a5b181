import json

import pytest

from motionfields.cli import main, run_scenario
from motionfields.config import ScenarioConfig, dump_json
from motionfields.errors import ConfigError
from motionfields.scenarios import BUNDLED_NAMES, bundled_scenario


class TestConfig:
    @pytest.mark.parametrize("name", BUNDLED_NAMES)
    def test_round_trip(self, name):
        doc = bundled_scenario(name)
        cfg = ScenarioConfig.from_dict(doc)
        again = ScenarioConfig.from_dict(cfg.to_dict())
        assert cfg.to_dict() == again.to_dict()

    def test_invalid_instance(self):
        doc = bundled_scenario("m2-default")
        doc["instance"] = "M7"
        with pytest.raises(ConfigError) as err:
            ScenarioConfig.from_dict(doc)
        assert err.value.field == "instance"

    def test_schema_version_required(self):
        doc = bundled_scenario("m2-default")
        doc["schema"] = 99
        with pytest.raises(ConfigError) as err:
            ScenarioConfig.from_dict(doc)
        assert err.value.field == "schema"

    def test_bad_tolerance_name(self):
        doc = bundled_scenario("m2-default")
        doc["tolerances"] = {"not_a_threshold": 1.0}
        with pytest.raises(ConfigError):
            ScenarioConfig.from_dict(doc)

    def test_even_path_rejected(self):
        doc = bundled_scenario("m2-default")
        doc["grids"]["continuity"]["path"] = [[1.0], [1.5]]
        with pytest.raises(ConfigError):
            ScenarioConfig.from_dict(doc)

    def test_test_function_errors_are_field_scoped(self, m2):
        doc = bundled_scenario("m2-default")
        doc["test_function"]["terms"][0]["g"]["sigma"] = -1.0
        cfg = ScenarioConfig.from_dict(doc)
        with pytest.raises(ConfigError) as err:
            cfg.build_test_function(m2)
        assert "terms[0]" in err.value.field


class TestRun:
    def test_m2_run_emits_artifacts(self, tmp_path):
        cfg = ScenarioConfig.from_dict(bundled_scenario("m2-default"))
        report, certs = run_scenario(cfg, tmp_path)
        assert report.overall
        for fname in (
            "reports.json",
            "convergence.json",
            "norms.csv",
            "mu_decay.csv",
            "lambda_decay.csv",
            "h_ladder.csv",
            "continuity.csv",
        ):
            assert (tmp_path / fname).exists()
        # trivial-stabilizer instance: the weight-decay grid is empty and
        # its curve file carries only the header
        assert (tmp_path / "mu_decay.csv").read_text() == "mu,op_norm\n"
        # ladder rows: levels + 1 per weight
        ladder = (tmp_path / "h_ladder.csv").read_text().strip().splitlines()
        assert len(ladder) == 1 + (cfg.h_ladder_levels + 1) * len(cfg.h_ladder_mus)

    def test_determinism(self, tmp_path):
        cfg = ScenarioConfig.from_dict(bundled_scenario("m2-default"))
        run_scenario(cfg, tmp_path / "a")
        run_scenario(cfg, tmp_path / "b")
        for fname in ("reports.json", "convergence.json", "norms.csv"):
            assert (tmp_path / "a" / fname).read_bytes() == (
                tmp_path / "b" / fname
            ).read_bytes()

    def test_gamma1_certificates_present(self, tmp_path):
        cfg = ScenarioConfig.from_dict(bundled_scenario("m2xm2-gamma1"))
        report, certs = run_scenario(cfg, tmp_path)
        assert report.overall
        doc = json.loads((tmp_path / "convergence.json").read_text())
        wall = [c for c in doc if c["limit"]["stratum"] == "gamma1"]
        assert wall and any(c["verdict"] == "converges" for c in wall)
        assert any(c["verdict"] == "diverges" for c in doc)


class TestMain:
    def test_list_scenarios(self, capsys):
        assert main(["list-scenarios"]) == 0
        out = capsys.readouterr().out.split()
        assert set(out) == set(BUNDLED_NAMES)

    def test_invalid_scenario_path(self, capsys):
        assert main(["run", "--scenario", "no-such-scenario"]) == 2

    def test_invalid_config_exits_2(self, tmp_path, capsys):
        doc = bundled_scenario("m2-default")
        doc["instance"] = "M9"
        path = tmp_path / "bad.json"
        path.write_text(dump_json(doc))
        assert main(["run", "--scenario", str(path)]) == 2

    def test_run_bundled(self, tmp_path, capsys):
        code = main(
            [
                "run",
                "--scenario",
                "m2-default",
                "--output-dir",
                str(tmp_path / "out"),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "overall: PASS" in out

    def test_tolerance_override_roundtrip(self, tmp_path):
        code = main(
            [
                "run",
                "--scenario",
                "m2-default",
                "--output-dir",
                str(tmp_path / "out"),
                "--override-tolerance",
                "h_zero_delta=0.5",
            ]
        )
        assert code == 0

    def test_bad_override_exits_2(self, tmp_path):
        assert (
            main(
                [
                    "run",
                    "--scenario",
                    "m2-default",
                    "--override-tolerance",
                    "nope=1.0",
                ]
            )
            == 2
        )

    def test_env_var_output_dir(self, tmp_path, monkeypatch):
        from motionfields.cli import OUTPUT_DIR_ENV

        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "envout"))
        assert main(["run", "--scenario", "m2-default"]) == 0
        assert (tmp_path / "envout" / "reports.json").exists()


class TestGoldenRegression:
    """Bundled scenarios keep their verdict structure."""

    @pytest.mark.parametrize("name", BUNDLED_NAMES)
    def test_verdicts(self, name, tmp_path):
        cfg = ScenarioConfig.from_dict(bundled_scenario(name))
        report, certs = run_scenario(cfg, tmp_path)
        doc = json.loads((tmp_path / "reports.json").read_text())
        assert doc["overall"] is True
        assert [r["condition"] for r in doc["reports"]] == [1, 2, 3, 4, 5]
        assert all(r["passed"] for r in doc["reports"])
        golden = {
            "m2-default": {"gamma0-to-gamma0": "converges", "gamma2-discrete": "converges"},
            "m3-default": {
                "gamma0-to-gamma0": "converges",
                "gamma0-to-gamma2": "converges",
                "diverging-weight": "diverges",
            },
            "m2xm2-gamma1": {
                "wall-approach": "converges",
                "wall-to-wall": "converges",
                "wall-wrong-label": "diverges",
            },
        }[name]
        got = {c["name"]: c["verdict"] for c in certs}
        assert got == golden
