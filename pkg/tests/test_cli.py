"""Command-line interface: exit codes, JSON output, file-based inputs."""

import json

import pytest

from pfisterinv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestQf:
    def test_invariants_hyperbolic_plane(self, capsys):
        code, out = run(capsys, "qf", "invariants", "--diag", "1,-1")
        data = json.loads(out)
        assert code == 0
        assert data["disc"] == 1
        assert data["signature"] == 0

    def test_pfister_negative(self, capsys):
        code, out = run(capsys, "qf", "pfister", "--r", "2", "--diag", "1,1,1,-7")
        assert code == 1
        assert "not similar" in out

    def test_pfister_positive(self, capsys):
        code, _ = run(capsys, "qf", "pfister", "--r", "2", "--diag", "3,3,3,3")
        assert code == 0

    def test_witt(self, capsys):
        code, out = run(capsys, "qf", "witt", "--diag", "1,-1,2,-2")
        assert code == 0
        assert json.loads(out)["witt_index"] == 2

    def test_isometric(self, capsys):
        code, out = run(capsys, "qf", "isometric", "1,-1", "2,-2")
        assert code == 0 and "isometric" in out
        code, out = run(capsys, "qf", "isometric", "1,1", "1,-1")
        assert code == 1 and "not isometric" in out

    def test_form_file_input(self, capsys, tmp_path):
        p = tmp_path / "form.json"
        p.write_text(json.dumps({"gram": [["1", "0"], ["0", "-1"]]}))
        code, out = run(capsys, "qf", "invariants", "--file", str(p))
        assert code == 0
        assert json.loads(out)["disc"] == 1

    def test_degenerate_rejected(self, capsys):
        code, _ = run(capsys, "qf", "invariants", "--diag", "1,0")
        assert code == 2

    def test_malformed_rejected(self, capsys):
        code, _ = run(capsys, "qf", "invariants", "--diag", "1,zebra")
        assert code == 2


class TestQuat:
    def test_split_and_not(self, capsys):
        code, out = run(capsys, "quat", "split", "1", "5")
        assert code == 0 and "split" in out
        code, out = run(capsys, "quat", "split", "-1", "-1")
        assert code == 1 and "ramified" in out

    def test_normform_matches_diagonal(self, capsys):
        code, out = run(capsys, "quat", "normform", "2", "3")
        assert code == 0
        assert json.loads(out)["diag"] == ["1", "-2", "-3", "6"]

    def test_splitmap(self, capsys):
        code, out = run(capsys, "quat", "splitmap", "1", "5")
        assert code == 0
        assert json.loads(out)["1"] == [["1", "0"], ["0", "1"]]
        code, _ = run(capsys, "quat", "splitmap", "-1", "-1")
        assert code == 1

    def test_zero_symbol_rejected(self, capsys):
        code, _ = run(capsys, "quat", "split", "0", "3")
        assert code == 2


class TestInv:
    def write(self, tmp_path, data):
        p = tmp_path / "algebra.json"
        p.write_text(json.dumps(data))
        return str(p)

    def test_adjoint_degree3(self, capsys, tmp_path):
        path = self.write(
            tmp_path, {"adjoint": {"gram": [["1", "0", "0"], ["0", "2", "0"], ["0", "0", "3"]]}}
        )
        code, out = run(capsys, "inv", "invariants", path)
        assert code == 0
        assert "e0 = 1" in out
        assert "e1 undefined" in out

    def test_adjoint_degree8_pfister(self, capsys, tmp_path):
        diag = ["1", "2", "3", "6", "5", "10", "15", "30"]
        gram = [
            [diag[i] if i == j else "0" for j in range(8)] for i in range(8)
        ]
        path = self.write(tmp_path, {"adjoint": {"gram": gram}})
        code, out = run(capsys, "inv", "invariants", path)
        assert code == 0
        assert "e1 = 1" in out
        assert "trivial: True" in out
        assert "pfister involution: True" in out

    def test_canonical_pair(self, capsys, tmp_path):
        path = self.write(
            tmp_path,
            {"factors": [{"a": "-1", "b": "-1"}, {"a": "2", "b": "3"}]},
        )
        code, out = run(capsys, "inv", "invariants", path)
        assert code == 0
        assert "e1 = 1" in out

    def test_symplectic_rejected(self, capsys, tmp_path):
        path = self.write(tmp_path, {"factors": [{"a": "2", "b": "3"}]})
        code, out = run(capsys, "inv", "invariants", path)
        assert code == 1
        assert "symplectic" in out

    def test_bad_file(self, capsys, tmp_path):
        path = self.write(tmp_path, {"factors": []})
        assert run(capsys, "inv", "invariants", path)[0] == 2


class TestShapiro4:
    def test_run_writes_json(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, out = run(
            capsys, "shapiro4", "run", "--count", "1", "--seed", "1",
            "--json", str(out_path),
        )
        assert code == 0
        assert "verdict=pass" in out
        payload = json.loads(out_path.read_text())
        assert len(payload["reports"]) == 1
        assert payload["reports"][0]["verdict"] == "pass"

    def test_run_repeatable_bytes(self, capsys, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "shapiro4", "run", "--count", "1", "--seed", "2", "--json", str(p1))
        run(capsys, "shapiro4", "run", "--count", "1", "--seed", "2", "--json", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_verify_scenario_file(self, capsys, tmp_path):
        from pfisterinv import shapiro4 as s4

        scenario = s4.sample_scenario(3)
        p = tmp_path / "scenario.json"
        p.write_text(json.dumps(scenario.to_json()))
        code, out = run(capsys, "shapiro4", "verify", str(p))
        assert code == 0
        assert "verdict=pass" in out

    def test_verify_u_rejects_bad_u(self, capsys, tmp_path):
        p = tmp_path / "u.json"
        p.write_text(
            json.dumps(
                {
                    "q1": {"a": "2", "b": "3"},
                    "q2": {"a": "2", "b": "3"},
                    # unit: symmetric but has nonzero reduced trace
                    "u": ["1"] + ["0"] * 15,
                }
            )
        )
        code, _ = run(capsys, "shapiro4", "verify-u", str(p))
        assert code == 2

    def test_missing_file(self, capsys):
        assert run(capsys, "shapiro4", "verify", "/nonexistent.json")[0] == 2
