import json

import pytest
import yaml

from confalg.cli import ConfigError, main, parse_grid, parse_param
from confalg.poly import GaussianRational
from fractions import Fraction


class TestParamParsing:
    def test_rational(self):
        assert parse_param("1/2", "a") == GaussianRational(Fraction(1, 2), Fraction(0))

    def test_sym(self):
        assert parse_param("sym", "a") == "sym"

    def test_gaussian_with_bare_i_suffix(self):
        got = parse_param("1/2+3/4i", "a")
        assert got == GaussianRational(Fraction(1, 2), Fraction(3, 4))

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            parse_param("1//2", "a")

    def test_grid(self):
        pts = parse_grid("0,0;1,0", "grid")
        assert len(pts) == 2
        with pytest.raises(ConfigError):
            parse_grid("1", "grid")


class TestCommands:
    def test_verify_axioms_symbolic(self, capsys):
        assert main(["verify-axioms", "--algebra", "csv"]) == 0
        out = capsys.readouterr().out
        assert "zero" in out

    def test_verify_axioms_candidate_family_fails(self, capsys):
        assert main(["verify-axioms", "--algebra", "mfam"]) == 1
        assert "nonzero" in capsys.readouterr().out

    def test_verify_tsv(self, capsys):
        assert main(["verify-axioms", "--algebra", "tsv", "--window", "2"]) == 0

    def test_solve_construction(self, capsys):
        assert main(["solve-construction", "--seed", "5"]) == 0
        out = capsys.readouterr().out
        assert "(1/2)*a + 1" in out and "(1/2)*b" in out

    def test_check_module(self, capsys):
        code = main(
            [
                "check-module", "--algebra", "csv", "--a", "0", "--b", "0",
                "--kind", "graded", "--base", "vab", "--alpha", "sym",
                "--beta", "sym", "--d", "1/2",
            ]
        )
        assert code == 0

    def test_check_module_detects_violation(self, capsys):
        code = main(
            [
                "check-module", "--algebra", "csv", "--a", "1", "--b", "1",
                "--kind", "rank1", "--d", "2",
            ]
        )
        assert code == 1

    def test_classify_rank1(self, capsys):
        code = main(
            [
                "classify", "--kind", "rank1", "--algebra", "chv",
                "--grid", "1,0;0,1", "--degree", "4",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "d*c^i" in out

    def test_derivations_solve(self, capsys):
        code = main(
            [
                "derivations", "--task", "solve", "--algebra", "csv",
                "--a", "1", "--b", "0", "--degree", "4", "--window", "2",
                "--grading", "0",
            ]
        )
        assert code == 0
        assert "extra 1" in capsys.readouterr().out

    def test_derivations_dvec(self, capsys):
        code = main(
            [
                "derivations", "--task", "dvec-check", "--algebra", "chv",
                "--a", "1", "--b", "sym",
            ]
        )
        assert code == 0

    def test_paper_suite_subset(self, capsys):
        code = main(["paper-suite", "--only", "1,2,8"])
        assert code == 0
        out = capsys.readouterr().out
        assert "c1-axioms" in out and "c8-witness-found" in out


class TestConfigAndReports:
    def test_config_file_with_cli_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.yaml"
        cfg.write_text(yaml.safe_dump({"algebra": "mfam", "a": "sym"}))
        # file alone picks mfam (fails), CLI override wins (csv passes)
        assert main(["verify-axioms", "--config", str(cfg)]) == 1
        capsys.readouterr()
        assert main(["verify-axioms", "--config", str(cfg), "--algebra", "csv"]) == 0

    def test_bad_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("- just\n- a list\n")
        assert main(["verify-axioms", "--algebra", "csv", "--config", str(cfg)]) == 2

    def test_json_report_written(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        main(
            [
                "verify-axioms", "--algebra", "csv", "--report", str(path),
                "--format", "json",
            ]
        )
        data = json.loads(path.read_text())
        assert data["schema_version"] == 1
        assert data["summary"]["failed"] == 0

    def test_report_determinism_modulo_timing(self, tmp_path, capsys):
        paths = []
        for k in range(2):
            path = tmp_path / f"r{k}.json"
            main(
                [
                    "solve-construction", "--seed", "42", "--report", str(path),
                    "--format", "json",
                ]
            )
            paths.append(path)
        docs = []
        for path in paths:
            data = json.loads(path.read_text())
            for check in data["checks"]:
                check.pop("elapsed_ms", None)
            docs.append(json.dumps(data, sort_keys=True))
        assert docs[0] == docs[1]
