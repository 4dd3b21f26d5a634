"""
cli 유닛 테스트
"""

import io
import json
import pytest
import pandas as pd
import sys
import os

# 프로젝트 루트를 Python 경로에 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.cli import (
    EXIT_ERROR,
    EXIT_FAILED,
    EXIT_OK,
    OUT_DIR_ENV,
    RunConfig,
    build_parser,
    cmd_check,
    cmd_classify,
    cmd_lemma21,
    main,
    render_table,
    sample_functions,
)
from src.exceptions import ConfigError
from src.valuation_lab import BUILTIN_SPECS, ValuationSpec


class TestRunConfig:
    """실행 설정 검증 테스트"""

    def test_defaults(self):
        config = RunConfig()
        assert config.dim == 3
        assert config.tolerance("identity") == 1e-7
        assert RunConfig(tol=1e-3).tolerance("identity") == 1e-3
        assert config.direction_set().shape == (200, 3)

    @pytest.mark.parametrize("kwargs", [
        {"dim": 1}, {"dim": 5}, {"rel_tol": 0.0}, {"tol": -1.0}, {"directions": 4},
        {"h_schedule": (0.5, 0.25)}, {"h_schedule": (0.25, 0.5, 0.125)},
        {"output_format": "xml"}, {"workers": 0}, {"pair_count": 0}, {"sln_maps": 0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            RunConfig(**kwargs)

    def test_sampling_defaults(self):
        config = RunConfig()
        assert config.pair_count == 100
        assert config.sln_maps == 50
        args = build_parser().parse_args(["check", "--count", "7", "--sln-maps", "3"])
        parsed = RunConfig.from_args(args)
        assert (parsed.pair_count, parsed.sln_maps) == (7, 3)
        args = build_parser().parse_args(["check"])
        assert (args.count, args.sln_maps) == (100, 50)

    def test_minkowski_needs_three_dimensions(self):
        with pytest.raises(ConfigError):
            RunConfig(dim=2).require_dimension(BUILTIN_SPECS["difference-body"])
        RunConfig(dim=2).require_dimension(BUILTIN_SPECS["volume"])


class TestCommands:
    """명령 함수 테스트"""

    def test_lemma21_table(self):
        table, passed = cmd_lemma21([1.0, 2.0], RunConfig())
        assert passed
        assert list(table["lambda"]) == [1.0, 2.0]
        assert abs(table.loc[1, "m_e1"] - 4.0 / 24.0) < 1e-12
        assert table.loc[1, "h_MT_expected"] == pytest.approx(4.0 / 24.0)

    def test_check_reports(self):
        config = RunConfig(directions=40, pair_count=2)
        reports = cmd_check(BUILTIN_SPECS["volume"], [], ["identity", "homogeneity"], ["indicators"], config)
        assert [r.property for r in reports] == ["valuation_identity", "homogeneity"]
        assert all(r.passed for r in reports)

    def test_check_sln_map_count(self):
        config = RunConfig(directions=40, sln_maps=2, tol=1e-6)
        reports = cmd_check(BUILTIN_SPECS["volume"], [], ["sln"], ["indicators"], config)
        assert reports[0].property == "sln_covariance"
        assert reports[0].samples == 2 * len(sample_functions(3))
        assert reports[0].passed

    def test_classify_roundtrip(self):
        report = cmd_classify(ValuationSpec.real(2.0, -1.0, 1.0), RunConfig())
        assert report.passed
        assert report.residuals["roundtrip_c0"] < 1e-6

    def test_render_is_deterministic(self):
        table = pd.DataFrame({"a": [1.0 / 3.0, 2.0], "b": ["x", "y"]})
        assert render_table(table, "csv") == render_table(table.copy(), "csv")
        assert render_table(table, "csv").splitlines()[1] == "0.333333333333,x"
        records = json.loads(render_table(table, "json"))
        assert records[1] == {"a": 2.0, "b": "y"}


class TestMain:
    """종료 코드와 출력 테스트"""

    def test_lemma21_exit_ok(self, capsys):
        assert main(["lemma21", "--lambdas", "0.5,1"]) == EXIT_OK
        out = capsys.readouterr().out
        table = pd.read_csv(io.StringIO(out))
        assert list(table["lambda"]) == [0.5, 1.0]

    def test_json_output(self, capsys):
        assert main(["--format", "json", "vn-cone", "--lambdas", "1", "--qs", "2"]) == EXIT_OK
        records = json.loads(capsys.readouterr().out)
        assert len(records) == 1
        assert abs(records[0]["quadrature"] - 0.125) < 1e-9

    def test_out_dir_env(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv(OUT_DIR_ENV, str(tmp_path))
        assert main(["lemma21"]) == EXIT_OK
        assert (tmp_path / "lemma21.csv").exists()
        assert capsys.readouterr().out == ""

    def test_bad_dimension_exit_error(self, capsys):
        assert main(["--dim", "7", "lemma21"]) == EXIT_ERROR
        assert "오류" in capsys.readouterr().err

    def test_bad_spec_file_exit_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{\n "valuation": {"kind": "real",}\n}', encoding="utf-8")
        assert main(["classify", "--spec-file", str(path)]) == EXIT_ERROR
        assert "line 2" in capsys.readouterr().err

    def test_shear_index_out_of_range_exit_error(self, tmp_path, capsys):
        path = tmp_path / "shear.json"
        data = {
            "valuation": {"kind": "real", "c0": 0, "cn": 1, "q": 1},
            "functions": [{"kind": "cone", "body": {"builtin": "cube", "lo": -1, "hi": 1},
                           "sln": {"shear": [0, 5, 1.0]}}],
        }
        path.write_text(json.dumps(data), encoding="utf-8")
        assert main(["check", "--spec-file", str(path), "--properties", "identity"]) == EXIT_ERROR
        assert "functions[0].sln.shear[1]" in capsys.readouterr().err

    def test_minkowski_in_two_dimensions_exit_error(self):
        assert main(["--dim", "2", "classify", "--builtin", "level-set-body"]) == EXIT_ERROR

    def test_failed_check_exit_failed(self, capsys):
        """c₃ = 0 명세는 b 교란 후에도 유한 극한이라 발산 기대에 어긋남"""
        code = main([
            "--h-schedule", "0.5,0.25,0.125,0.0625", "limits", "--experiment", "c3d4",
            "--constants", "1,0,0,1", "--perturbation", "0.1", "--summary",
        ])
        assert code == EXIT_FAILED
        table = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert table.loc[0, "case"] == "finite"

    def test_zeta_command(self, capsys):
        assert main(["zeta", "--t-min", "0", "--t-max", "1", "--t-step", "0.5"]) == EXIT_OK
        table = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert list(table["t"]) == [0.0, 0.5, 1.0]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
