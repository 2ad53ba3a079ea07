import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from frameforge.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, run
from frameforge.frames import Frame, frame_operator

import oracles


def invoke(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return path


def by_name(doc):
    return {r["name"]: r for r in doc["results"]}


class TestDecompose:
    def test_identity(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"matrix": np.eye(3).tolist()})
        code, out, _ = invoke(capsys, "decompose", "--config", cfg)
        doc = json.loads(out)
        assert code == EXIT_OK and doc["status"] == "pass"
        assert doc["payload"]["a"] == 4.0

    def test_zero_matrix(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"matrix": [[0, 0], [0, 0]]})
        code, out, _ = invoke(capsys, "decompose", "--config", cfg)
        doc = json.loads(out)
        assert code == EXIT_OK and doc["payload"]["degenerate"] is True

    def test_complex_entries(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"matrix": [[[0, 1], [0, 0]], [[0, 0], [2, 0]]]})
        code, out, _ = invoke(capsys, "decompose", "--config", cfg, "--epsilon", "0.25")
        doc = json.loads(out)
        assert code == EXIT_OK
        assert doc["payload"]["a"] == pytest.approx(2 * 2 / 0.75)

    def test_real_2x2_not_mistaken_for_complex(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"matrix": [[3, 0], [0, 1]]})
        code, out, _ = invoke(capsys, "decompose", "--config", cfg)
        assert code == EXIT_OK
        assert json.loads(out)["payload"]["a"] == pytest.approx(12.0)

    def test_random_is_byte_identical(self, capsys):
        _, first, _ = invoke(capsys, "decompose", "--seed", 11)
        _, second, _ = invoke(capsys, "decompose", "--seed", 11)
        assert first == second
        assert json.loads(first)["config"]["input"] == "random_8x8"

    def test_frame_manifest(self, capsys, tmp_path, rng):
        F = Frame(rng.standard_normal((4, 4)))
        cfg = write_json(tmp_path / "m.json", F.to_manifest())
        code, out, _ = invoke(capsys, "decompose", "--config", cfg)
        doc = json.loads(out)
        assert code == EXIT_OK
        assert by_name(doc)["decompose.sum_defect"]["passed"]
        Y = Frame.from_manifest(doc["payload"]["Y"])
        Z = Frame.from_manifest(doc["payload"]["Z"])
        assert np.max(np.abs(Y.vectors + Z.vectors - F.vectors)) <= 1e-10

    def test_bad_epsilon(self, capsys):
        code, _, err = invoke(capsys, "decompose", "--epsilon", "1.5")
        assert code == EXIT_INPUT and "epsilon" in err


class TestBuild:
    def test_p_convergent(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "s.json", {"family": "p_convergent", "params": {"p": 1.5, "n_max": 3}})
        out_path = tmp_path / "frame.json"
        code, out, _ = invoke(capsys, "build", "--config", cfg, "--out", out_path)
        assert code == EXIT_OK
        F = Frame.loads(out_path.read_text())
        assert F.count == 14 and F.dim == 3
        assert np.allclose(frame_operator(F), np.eye(3), atol=1e-12)
        assert by_name(json.loads(out))["build.p_convergent.parseval"]["passed"]

    def test_empty_hf_constant(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "s.json", {"family": "empty_hf", "params": {"n_max": 2, "j_max": 100}})
        code, out, _ = invoke(capsys, "build", "--config", cfg)
        payload = json.loads(out)["payload"]
        assert code == EXIT_OK
        assert payload["tight_constant"] == pytest.approx(oracles.TIGHT_CONSTANT[100], abs=1e-12)
        assert Frame.from_manifest(payload["manifest"]).count == 200

    def test_harmonic_vector_single(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "s.json", {"family": "harmonic_vector", "params": {"n_max": 1}})
        code, out, _ = invoke(capsys, "build", "--config", cfg)
        F = Frame.from_manifest(json.loads(out)["payload"]["manifest"])
        assert code == EXIT_OK
        assert F.vectors[0, 0].real == pytest.approx(oracles.HARMONIC_SCALE, rel=1e-15)

    def test_intersection_pair_files(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "s.json", {"family": "intersection_pair", "params": {"n_max": 2, "j_max": 10}})
        code, _, _ = invoke(capsys, "build", "--config", cfg, "--out", tmp_path / "pair.json")
        assert code == EXIT_OK
        E = Frame.loads((tmp_path / "pair.json").read_text())
        R = Frame.loads((tmp_path / "pair_R.json").read_text())
        assert E.dim == R.dim == 20

    def test_csv(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "s.json", {"family": "p_convergent", "params": {"p": 1.5, "n_max": 2}})
        code, out, _ = invoke(capsys, "build", "--config", cfg, "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == EXIT_OK
        assert {r["name"] for r in rows} >= {"build.p_convergent.parseval"}
        assert all(r["passed"] == "True" for r in rows)

    def test_unknown_family(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "s.json", {"family": "nope"})
        assert invoke(capsys, "build", "--config", cfg)[0] == EXIT_INPUT

    def test_oversized(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "s.json", {"family": "p_convergent", "params": {"p": 1.01, "n_max": 50}})
        assert invoke(capsys, "build", "--config", cfg)[0] == EXIT_INPUT


class TestDiagnose:
    def test_harmonic(self, capsys):
        code, out, _ = invoke(capsys, "diagnose")
        payload = json.loads(out)["payload"]
        assert code == EXIT_OK
        assert payload["classification"] == "log-divergent"
        assert payload["fit"]["alpha"] == pytest.approx(oracles.HARMONIC_SCALE, rel=0.15)

    def test_zero_stream(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"stream": "zero"})
        code, out, _ = invoke(capsys, "diagnose", "--config", cfg, "--budgets", "10,100,1000")
        assert code == EXIT_OK
        assert json.loads(out)["payload"]["classification"] == "bounded"

    def test_csv_and_sidecar(self, capsys, tmp_path):
        out_path = tmp_path / "series.csv"
        code, _, _ = invoke(capsys, "diagnose", "--format", "csv", "--budgets", "100,1000", "--out", out_path)
        lines = out_path.read_text().splitlines()
        assert code == EXIT_OK
        assert lines[0] == "budget,partial_sum"
        assert float(lines[1].split(",")[1]) == pytest.approx(oracles.HARMONIC_PARTIAL_SUMS[100], rel=1e-13)
        sidecar = json.loads(out_path.with_suffix(".json").read_text())
        assert sidecar["payload"]["budgets"] == [100, 1000]

    def test_sphere(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"sphere": [4, 16, 64]})
        code, out, _ = invoke(capsys, "diagnose", "--config", cfg)
        rows = json.loads(out)["payload"]["sphere"]
        assert code == EXIT_OK
        assert [r["worst_case"] for r in rows] == pytest.approx([2.0, 4.0, 8.0], rel=1e-14)

    def test_manifest_probe(self, capsys, tmp_path):
        F = Frame.standard_basis(3)
        cfg = write_json(tmp_path / "c.json", {**F.to_manifest(), "probe": [0.6, 0.8, 0.0]})
        code, out, _ = invoke(capsys, "diagnose", "--config", cfg, "--budgets", "1,2,3")
        assert code == EXIT_OK
        assert json.loads(out)["payload"]["partial_sums"] == pytest.approx([0.6, 1.4, 1.4])

    def test_unknown_stream(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"stream": "cosine"})
        assert invoke(capsys, "diagnose", "--config", cfg)[0] == EXIT_INPUT

    def test_bad_budgets(self, capsys):
        assert invoke(capsys, "diagnose", "--budgets", "10,5")[0] == EXIT_INPUT
        assert invoke(capsys, "diagnose", "--budgets", "ten")[0] == EXIT_INPUT


class TestVerify:
    def test_default_passes(self, capsys):
        code, out, err = invoke(capsys, "verify")
        doc = json.loads(out)
        assert code == EXIT_OK and doc["status"] == "pass"
        names = [r["name"] for r in doc["results"]]
        assert names == sorted(names)
        assert all({"measured", "bound", "relation"} <= set(r) for r in doc["results"])
        assert "finished in" in err and "finished" not in out

    def test_filter(self, capsys):
        code, out, _ = invoke(capsys, "verify", "--filter", "decompose")
        names = [r["name"] for r in json.loads(out)["results"]]
        assert code == EXIT_OK and names
        assert all(n.startswith("decompose.") for n in names)

    def test_filter_no_match(self, capsys):
        assert invoke(capsys, "verify", "--filter", "nothing-here")[0] == EXIT_INPUT

    def test_tight_tolerance_fails_checks(self, capsys, monkeypatch):
        monkeypatch.setenv("FRAMEFORGE_TOL", "1e-20")
        code, out, err = invoke(capsys, "verify", "--filter", "decompose")
        assert code == EXIT_CHECK
        assert json.loads(out)["status"] == "fail"
        assert "failed" in err

    def test_csv(self, capsys):
        code, out, _ = invoke(capsys, "verify", "--filter", "frames.naimark", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == EXIT_OK and rows
        assert set(rows[0]) == {"name", "measured", "relation", "bound", "passed"}


class TestProbe:
    def test_inconclusive(self, capsys):
        code, out, _ = invoke(capsys, "probe", "--budgets", "2,3")
        doc = json.loads(out)
        assert code == EXIT_OK
        assert doc["status"] == "inconclusive"
        assert doc["payload"]["union_conjecture"]["status"] == "inconclusive"
        assert doc["payload"]["separation_conjecture"]["status"] == "inconclusive"
        rows = doc["payload"]["separation_conjecture"]["rows"]
        assert [r["points"] for r in rows] == [8, 26]

    def test_deterministic(self, capsys):
        first = invoke(capsys, "probe", "--budgets", "2,3", "--seed", "4")[1]
        second = invoke(capsys, "probe", "--budgets", "2,3", "--seed", "4")[1]
        assert first == second

    def test_dimension_cap(self, capsys):
        assert invoke(capsys, "probe", "--budgets", "20")[0] == EXIT_INPUT


class TestInputErrors:
    def test_unknown_command(self, capsys):
        assert invoke(capsys, "frobnicate")[0] == EXIT_INPUT

    def test_missing_config(self, capsys, tmp_path):
        assert invoke(capsys, "verify", "--config", tmp_path / "absent.json")[0] == EXIT_INPUT

    def test_malformed_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert invoke(capsys, "decompose", "--config", bad)[0] == EXIT_INPUT

    def test_non_object_config(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", [1, 2])
        assert invoke(capsys, "decompose", "--config", cfg)[0] == EXIT_INPUT

    def test_bad_matrix(self, capsys, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"matrix": [[1, 2, 3], [4, 5, 6]]})
        assert invoke(capsys, "decompose", "--config", cfg)[0] == EXIT_INPUT

    def test_help_is_success(self, capsys):
        assert invoke(capsys, "--help")[0] == EXIT_OK


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "frameforge.cli", "verify", "--filter", "frames.naimark"],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"
