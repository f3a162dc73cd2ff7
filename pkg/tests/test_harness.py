import json
import math
import subprocess
import sys

import pytest

from fracstep import harness, meshfem as mf, reference as ref
from fracstep.harness import ConfigError, StudyConfig, emit, parse_csv, run_study


class TestRates:
    def test_stepwise_rates_exact_halving(self):
        rates = harness._stepwise_rates([4e-3, 2e-3, 1e-3], "temporal", [10.0, 20.0, 40.0])
        assert rates[0] is None
        assert rates[1] == pytest.approx(1.0, abs=1e-12)
        assert rates[2] == pytest.approx(1.0, abs=1e-12)

    def test_decay_decade_rates(self):
        rates = harness._stepwise_rates([1e-2, 1e-3], "decay", [1e-3, 1e-4])
        assert rates[1] == pytest.approx(1.0, abs=1e-12)

    def test_summary_mean_of_last_two(self):
        assert harness._summary([None, 1.0, 2.0, 3.0]) == pytest.approx(2.5)


class TestConfig:
    def test_valid(self):
        cfg = StudyConfig("a", (0.5,), ("be",), "temporal")
        assert cfg.reference == "discrete_modal"

    def test_spatial_forces_continuous(self):
        with pytest.raises(ConfigError):
            StudyConfig("e", (1.5,), ("sbd",), "spatial", reference="discrete_modal")

    def test_decay_rejects_continuous(self):
        with pytest.raises(ConfigError):
            StudyConfig("a", (0.5,), ("be",), "decay", reference="continuous_modal")

    def test_unknown_scheme(self):
        with pytest.raises(ConfigError):
            StudyConfig("a", (0.5,), ("dpg",), "temporal")

    def test_from_json(self, tmp_path):
        path = tmp_path / "study.json"
        path.write_text(
            json.dumps(
                {
                    "case": "a",
                    "alphas": [0.5],
                    "schemes": ["be"],
                    "kind": "temporal",
                    "N_list": [10, 20],
                }
            )
        )
        cfg = StudyConfig.from_json(str(path))
        assert cfg.N_list == (10, 20)

    def test_from_json_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "study.json"
        path.write_text(json.dumps({"case": "a", "alphas": [0.5], "schemes": ["be"], "kind": "temporal", "bogus": 1}))
        with pytest.raises(ConfigError, match="unknown config keys"):
            StudyConfig.from_json(str(path))


@pytest.fixture(scope="module")
def small_temporal_report():
    cfg = StudyConfig(
        "a", (0.5,), ("be", "sbd"), "temporal", M=8, N_list=(10, 20, 40, 80), t=0.1
    )
    return run_study(cfg)


class TestRunStudy:
    def test_temporal_rates(self, small_temporal_report):
        by_scheme = {blk.scheme: blk for blk in small_temporal_report.blocks}
        assert by_scheme["be"].summary_rate == pytest.approx(1.0, abs=0.1)
        assert by_scheme["sbd"].summary_rate == pytest.approx(2.0, abs=0.15)
        assert by_scheme["be"].theoretical_rate == 1.0
        assert by_scheme["sbd"].theoretical_rate == 2.0

    def test_normalization_flag(self, small_temporal_report):
        assert small_temporal_report.normalized is True
        assert small_temporal_report.metadata["normalized"] is True

    def test_raw_error_for_zero_data(self):
        cfg = StudyConfig("c", (0.5,), ("be",), "temporal", M=4, N_list=(8, 16), t=0.1)
        report = run_study(cfg)
        assert report.normalized is False

    def test_decay_study(self):
        # late decades: the exponent needs lam * t^alpha << 1 over the data's
        # dominant modes before the asymptotic decay shows
        cfg = StudyConfig(
            "a", (0.5,), ("be",), "decay", M=8, N=10, t_list=(1e-5, 1e-6, 1e-7)
        )
        report = run_study(cfg)
        blk = report.blocks[0]
        assert blk.summary_rate == pytest.approx(0.5, abs=0.05)
        assert blk.theoretical_rate == pytest.approx(0.5)

    def test_determinism(self, small_temporal_report):
        cfg = StudyConfig(
            "a", (0.5,), ("be", "sbd"), "temporal", M=8, N_list=(10, 20, 40, 80), t=0.1
        )
        again = run_study(cfg)
        a = emit(small_temporal_report, "csv")
        b = emit(again, "csv")
        assert a == b

    def test_threads_env_consistency(self, small_temporal_report, monkeypatch):
        monkeypatch.setenv("FRACSTEP_THREADS", "4")
        cfg = StudyConfig(
            "a", (0.5,), ("be", "sbd"), "temporal", M=8, N_list=(10, 20, 40, 80), t=0.1
        )
        parallel = run_study(cfg)
        assert emit(parallel, "csv") == emit(small_temporal_report, "csv")


class TestEmit:
    def test_csv_header_only_for_empty(self):
        report = harness.ConvergenceReport("temporal", "a", "discrete_modal", True, [])
        assert emit(report, "csv") == "label,error_l2,error_h1,rate\n"

    def test_csv_round_trip_bit_exact(self, small_temporal_report):
        text = emit(small_temporal_report, "csv")
        rows = parse_csv(text)
        k = 0
        for blk in small_temporal_report.blocks:
            for e2, e1, r in zip(blk.err_l2, blk.err_h1, blk.rates):
                lab, g2, g1, gr = rows[k]
                assert g2 == e2
                assert g1 == e1
                assert gr == r or (gr is None and r is None)
                k += 1

    def test_markdown_contains_theory_brackets(self, small_temporal_report):
        text = emit(small_temporal_report, "markdown")
        assert "(1.00)" in text
        assert "(2.00)" in text

    def test_emit_to_file(self, small_temporal_report, tmp_path):
        path = tmp_path / "report.csv"
        emit(small_temporal_report, "csv", str(path))
        assert path.read_text().startswith("label,error_l2,error_h1,rate")


class TestReferenceConsistency:
    def test_continuous_vs_discrete_gate(self):
        # one-off: both references agree to the spatial error scale
        case = ref.get_case("a", 0.5)
        sys16 = mf.assemble(mf.build_mesh(16))
        t = 0.1
        disc = ref.discrete_reference(sys16, case, t)
        sol = ref.exact_solution(case, ref.modal_coefficients(case, 255), t)
        l2, _ = mf.error_norms(sys16, disc, sol)
        h = 1.0 / 16.0
        # grace factor over c h^2 ||v||, with t^{-alpha} smoothing factor ~ 3
        assert l2 <= 5.0 * h ** 2 * case.v_l2_norm


class TestCli:
    def run_cli(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "fracstep.cli", *args],
            capture_output=True,
            text=True,
            timeout=600,
        )

    def test_mesh_info(self):
        out = self.run_cli("mesh-info", "--M", "4")
        assert out.returncode == 0
        assert "interior dofs = 9" in out.stdout

    def test_mesh_info_bad_m(self):
        out = self.run_cli("mesh-info", "--M", "3")
        assert out.returncode == 2

    def test_weights_csv(self, tmp_path):
        path = tmp_path / "w.csv"
        out = self.run_cli(
            "weights", "--rule", "be", "--alpha", "0.5", "--tau", "1.0",
            "--N", "3", "--out", str(path),
        )
        assert out.returncode == 0
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "j,weight"
        assert float(lines[1].split(",")[1]) == 1.0
        assert float(lines[2].split(",")[1]) == -0.5

    def test_mlf_table(self):
        out = self.run_cli("mlf", "--alpha", "1.0", "--beta", "1.0", "--x-min", "1.0", "--x-max", "1.0", "--points", "1")
        assert out.returncode == 0
        val = float(out.stdout.strip().split("\n")[1].split(",")[1])
        assert val == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_solve_json_metrics(self):
        out = self.run_cli(
            "solve", "--case", "a", "--alpha", "0.5", "--scheme", "be",
            "--M", "4", "--N", "16", "--t", "0.1",
        )
        assert out.returncode == 0
        metrics = json.loads(out.stdout)
        assert metrics["error_l2"] > 0.0
        assert metrics["normalized"] is True

    def test_study_flags_only(self, tmp_path):
        path = tmp_path / "r.csv"
        out = self.run_cli(
            "study", "--case", "a", "--alpha", "0.5", "--scheme", "be",
            "--kind", "temporal", "--M", "4", "--N-list", "8,16,32",
            "--out", str(path),
        )
        assert out.returncode == 0, out.stderr
        rows = parse_csv(path.read_text())
        assert len(rows) == 3

    def test_study_config_file_with_override(self, tmp_path):
        cfg_path = tmp_path / "study.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "case": "a",
                    "alphas": [0.5],
                    "schemes": ["be"],
                    "kind": "temporal",
                    "M": 4,
                    "N_list": [8, 16],
                }
            )
        )
        out_path = tmp_path / "r.md"
        out = self.run_cli(
            "study", "--config", str(cfg_path), "--format", "markdown",
            "--out", str(out_path),
        )
        assert out.returncode == 0, out.stderr
        assert "temporal study" in out_path.read_text()

    def test_study_schema_printing(self):
        out = self.run_cli("study", "--print-schema")
        assert out.returncode == 0
        schema = json.loads(out.stdout)
        assert "case" in schema["properties"]

    def test_config_error_exit_code(self):
        out = self.run_cli(
            "study", "--case", "e", "--alpha", "1.5", "--scheme", "sbd",
            "--kind", "spatial", "--reference", "discrete_modal",
        )
        assert out.returncode == 2

    def test_case_alpha_mismatch_exit_code(self):
        out = self.run_cli("solve", "--case", "a", "--alpha", "1.5", "--N", "4", "--M", "4")
        assert out.returncode == 2

    def test_numerical_failure_exit_code(self, monkeypatch):
        # exit code 3 is reserved for solver breakdowns
        from fracstep import cli
        from fracstep.numkit import CgError

        def boom(args):
            raise CgError("stalled", 1.0, 7)

        parser = cli.build_parser()
        args = parser.parse_args(["mesh-info", "--M", "4"])
        monkeypatch.setattr(args, "func", boom)
        monkeypatch.setattr(cli, "build_parser", lambda: parser)
        monkeypatch.setattr(parser, "parse_args", lambda argv=None: args)
        assert cli.main([]) == 3
