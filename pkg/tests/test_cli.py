"""Command-line front-end: exit codes, JSON output shape, determinism."""

import json
import math

import numpy as np
import pytest

from sumtranslates.cli import main, render_json

PROBLEM_1 = {"kernels": [{"type": "log"}], "field": {"type": "neg_abs"}}
PROBLEM_2 = {
    "kernels": [{"type": "log"}, {"type": "log"}],
    "field": {"type": "neg_square"},
}
GM_VIOLATOR = {
    "kernels": [
        {
            "type": "table",
            "neg_knots": [[-4.0, -4.0], [-2.0, -2.0], [-1.0, -1.0]],
            "pos_knots": [[1.0, -1.0], [2.0, -2.0], [4.0, -4.0]],
        }
    ],
    "field": {"type": "neg_square"},
}
FLAT_FIELD = {
    "kernels": [{"type": "log"}],
    "field": {"type": "log_table", "knots": [[-1.0, 0.0], [1.0, 0.0]]},
}
INTERP_12 = {
    "factors": [{"type": "log"}],
    "weight": {"type": "neg_abs"},
    "x": [-1.0, 1.0],
    "alpha": [1.0, 2.0],
    "mode": "points",
}
HF_11 = {
    "factors": [{"type": "log"}],
    "weight": {"type": "neg_square"},
    "alpha": [1.0, 1.0],
    "mode": "hermite_fejer",
}
RATIO = {"weight": {"type": "neg_abs"}, "exponents": [1.0], "y": [0.5]}


@pytest.fixture
def write_json(tmp_path):
    def _write(doc, name="file.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return _write


class TestValidate:
    def test_valid_problem_exits_zero(self, write_json, capsys):
        assert main(["validate", write_json(PROBLEM_1)]) == 0
        out = capsys.readouterr().out
        assert "verdict: hypotheses hold" in out
        assert "singular: yes" in out

    def test_slope_order_violation(self, write_json, capsys):
        assert main(["validate", write_json(GM_VIOLATOR)]) == 1
        out = capsys.readouterr().out
        assert "GM violated: slopes (1, -1)" in out
        assert "verdict: hypotheses unmet" in out

    def test_inadmissible_field(self, write_json, capsys):
        assert main(["validate", write_json(FLAT_FIELD)]) == 1
        assert "admissibility check failed" in capsys.readouterr().out

    def test_malformed_json_positions(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"kernels": [\n  {"type" "log"}]}')
        assert main(["validate", str(path)]) == 2
        err = capsys.readouterr().err
        assert "malformed JSON at line 2 column 11" in err

    def test_missing_file(self, capsys):
        assert main(["validate", "/nonexistent/problem.json"]) == 2
        assert "error" in capsys.readouterr().err


class TestSolve:
    def test_target(self, write_json, capsys):
        assert main(["solve", write_json(PROBLEM_1), "--target", "-1.0"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert list(doc) == ["y", "m", "d", "residual", "iterations", "converged"]
        assert doc["y"] == pytest.approx([0.5], abs=1e-7)
        assert doc["m"] == pytest.approx([-0.5, -1.5], abs=1e-7)
        assert doc["converged"] is True

    def test_equioscillate(self, write_json, capsys):
        assert main(["solve", write_json(PROBLEM_1), "--equioscillate"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["y"] == pytest.approx([0.0], abs=1e-7)
        assert doc["m"] == pytest.approx([-1.0, -1.0], abs=1e-6)

    def test_wrong_arity(self, write_json, capsys):
        assert main(["solve", write_json(PROBLEM_1), "--target", "-1.0", "-0.5"]) == 2
        assert "target length 2 != 1" in capsys.readouterr().err

    def test_target_and_equioscillate_conflict(self, write_json, capsys):
        code = main(
            ["solve", write_json(PROBLEM_1), "--target", "1.0", "--equioscillate"]
        )
        assert code == 2

    def test_neither_mode_given(self, write_json):
        assert main(["solve", write_json(PROBLEM_1)]) == 2

    def test_emit_profile(self, write_json, tmp_path, capsys):
        dest = tmp_path / "profile.csv"
        code = main(
            ["solve", write_json(PROBLEM_1), "--target", "-1.0", "--emit-profile", str(dest)]
        )
        assert code == 0
        capsys.readouterr()
        lines = dest.read_text().strip().splitlines()
        assert lines[0] == "t,F"
        assert len(lines) == 4097

    def test_file_options_respected(self, write_json, capsys):
        doc = dict(PROBLEM_1)
        doc["options"] = {"tol": 1e-10, "seed": 3}
        assert main(["solve", write_json(doc), "--target", "-1.0"]) == 0
        assert json.loads(capsys.readouterr().out)["residual"] <= 1e-10

    def test_byte_stable_across_runs(self, write_json, capsys):
        path = write_json(PROBLEM_2)
        assert main(["solve", path, "--equioscillate"]) == 0
        first = capsys.readouterr().out
        assert main(["solve", path, "--equioscillate"]) == 0
        second = capsys.readouterr().out
        assert first == second


class TestInterpolate:
    def test_points_mode(self, write_json, capsys):
        assert main(["interpolate", write_json(INTERP_12)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert list(doc) == ["C", "y", "achieved"]
        assert doc["C"] == pytest.approx(1.5 * math.e, abs=1e-5)
        assert doc["y"] == pytest.approx([-1.0 / 3.0], abs=1e-5)
        assert doc["achieved"] == pytest.approx([1.0, 2.0], rel=1e-8)

    def test_hermite_fejer_mode(self, write_json, capsys):
        assert main(["interpolate", write_json(HF_11)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert list(doc) == ["C", "y", "z", "achieved"]
        assert doc["C"] == pytest.approx(math.sqrt(2.0) * math.exp(0.5), abs=1e-5)
        assert doc["z"] == pytest.approx([-0.7071068, 0.7071068], abs=1e-5)

    def test_mode_flag_overrides_file(self, write_json, capsys):
        doc = dict(INTERP_12)
        doc["mode"] = "hermite_fejer"
        assert main(["interpolate", write_json(doc), "--mode", "points"]) == 0
        assert "z" not in json.loads(capsys.readouterr().out)

    def test_hypothesis_failure_exits_one(self, write_json, capsys):
        doc = {
            "factors": [
                {
                    "type": "table",
                    "neg_knots": [[-2.0, 0.7], [-1.0, 0.0]],
                    "pos_knots": [[1.0, 0.0], [2.0, 0.7]],
                }
            ],
            "weight": {"type": "neg_square"},
            "x": [-1.0, 1.0],
            "alpha": [1.0, 1.0],
        }
        assert main(["interpolate", write_json(doc)]) == 1
        assert "hypotheses of main theorem unmet" in capsys.readouterr().err


class TestRatioMap:
    def test_nodes_from_file(self, write_json, capsys):
        assert main(["ratio-map", write_json(RATIO)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert list(doc) == ["y", "ratios"]
        assert doc["ratios"] == pytest.approx([math.exp(-1.0)], rel=1e-8)

    def test_nodes_flag_overrides(self, write_json, capsys):
        assert main(["ratio-map", write_json(RATIO), "--nodes", "1.5"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["y"] == [1.5]

    def test_missing_nodes(self, write_json, capsys):
        doc = {"weight": {"type": "neg_abs"}, "exponents": [1.0]}
        assert main(["ratio-map", write_json(doc)]) == 2

    def test_exponents_must_be_positive(self, write_json, capsys):
        doc = {"weight": {"type": "neg_abs"}, "exponents": [-1.0], "y": [0.0]}
        assert main(["ratio-map", write_json(doc)]) == 2


class TestOracleCheck:
    def test_agreement(self, write_json, capsys):
        assert main(["oracle-check", write_json(PROBLEM_1), "--target", "-1.0"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["agree"] is True
        assert doc["max_diff"] <= 2e-3

    def test_tight_tolerance_fails(self, write_json, capsys):
        code = main(
            [
                "oracle-check",
                write_json(PROBLEM_1),
                "--target",
                "-0.7",
                "--step",
                "1e-2",
                "--agree-tol",
                "1e-9",
            ]
        )
        assert code == 1
        assert json.loads(capsys.readouterr().out)["agree"] is False


class TestRenderJson:
    def test_scalar_formatting(self):
        out = render_json(
            {
                "a": 1.0,
                "b": float("-inf"),
                "c": float("nan"),
                "d": np.float64(0.123456789123),
                "e": True,
                "f": [1, 2],
                "g": "text",
            }
        )
        assert out == '{"a":1,"b":"-inf","c":"nan","d":0.123456789,"e":true,"f":[1,2],"g":"text"}'

    def test_nine_significant_digits(self):
        assert render_json({"v": math.pi}) == '{"v":3.14159265}'
