import json

import numpy as np
import pytest

from realops import cli
from realops.opspace import full_matrix_space, opspace_to_json, span_space


@pytest.fixture
def files(tmp_path):
    paths = {}

    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        paths[name] = str(p)
        return str(p)

    write("m2.json", opspace_to_json(full_matrix_space(2)))
    write("mat.json", {"rows": 2, "cols": 2, "entries": [[3, 0], [0, 4]]})
    write("proj_good.json", {"matrix": [[1, 0, 0, 0], [0, 1, 0, 0],
                                        [0, 0, 0, 0], [0, 0, 0, 0]]})
    write("proj_symm.json", {"matrix": [[1, 0, 0, 0], [0, .5, .5, 0],
                                        [0, .5, .5, 0], [0, 0, 0, 1]]})
    write("proj_corrupt.json", {"matrix": [[1, 0, 0, 0], [0, .5, .4, 0],
                                           [0, .5, .5, 0], [0, 0, 0, 1]]})
    write("l12.json", {"dim": 2, "functionals": [[1, 1], [1, -1]]})
    write("pair.json", {"mats": [
        {"rows": 2, "cols": 2, "entries": [[1, 0], [0, -1]]},
        {"rows": 2, "cols": 2, "entries": [[0, 1], [1, 0]]}]})
    write("triangular.json", opspace_to_json(span_space(
        [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]])))
    write("ideal.json", {"coeffs": [[0.0, 1.0, 0.0]]})
    write("not_ideal.json", {"coeffs": [[1.0, 0.0, 0.0]]})
    write("e12.json", opspace_to_json(span_space([[[0, 1], [0, 0]]])))
    write("diag_phi.json", {"matrix": [[1, 0, 0, 0], [0, 0, 0, 0],
                                       [0, 0, 0, 0], [0, 0, 0, 1]]})
    write("id_map.json", {"matrix": [[1, 0, 0, 0], [0, 1, 0, 0],
                                     [0, 0, 1, 0], [0, 0, 0, 1]]})
    write("eye2.json", {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 1]]})
    write("subspace.json", {"coeffs": [[1.0, 0.0, 0.0, 0.0]]})
    write("e12_elem.json", {"level": 1, "coeffs": [[[0.0, 1.0, 0.0, 0.0]]]})
    write("bad_mat.json", {"rows": 2, "cols": 2, "entries": [[1, 2]]})
    write("mixed_span.json", opspace_to_json(span_space(
        [[[1, 0], [0, 0]], [[0, 1], [1, 0]]])))
    return paths


def run_json(capsys, argv):
    code = cli.run(["--json"] + argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestBasicCommands:
    def test_norm_mat(self, files, capsys):
        code, rep = run_json(capsys, ["norm", "--mat", files["mat.json"]])
        assert code == 0
        assert rep["result"]["op_norm"] == 4.0
        assert rep["config"]["seed"] == 0xC0FFEE

    def test_norm_elem(self, files, capsys):
        code, rep = run_json(capsys, ["norm", "--space", files["m2.json"],
                                      "--elem", files["e12_elem.json"]])
        assert code == 0
        assert rep["result"]["level_norm"] == pytest.approx(1.0)

    def test_complexify(self, files, capsys):
        code, rep = run_json(capsys, ["complexify", "--space",
                                      files["m2.json"]])
        assert code == 0
        assert rep["result"]["dim"] == 8
        assert rep["result"]["space"]["complexified"] is True

    def test_quantize_min(self, files, capsys):
        code, rep = run_json(capsys, ["quantize-min", "--banach",
                                      files["l12.json"],
                                      "--elem", "[1.0, 0.0]"])
        assert code == 0
        assert rep["result"]["min_level_norm"] == pytest.approx(1.0)

    def test_w2_norm(self, files, capsys):
        code, rep = run_json(capsys, ["w2-norm", "--banach", files["l12.json"],
                                      "--x", "[3, 0]", "--y", "[0, 0]"])
        assert code == 0
        assert rep["result"]["w2_norm"] == pytest.approx(3.0)

    def test_max_l1(self, files, capsys):
        code, rep = run_json(capsys, ["max-l1", "--coeffs",
                                      files["pair.json"], "--mmax", "2",
                                      "--restarts", "8"])
        assert code == 0
        assert rep["result"]["lower"] >= 2 - 1e-6
        assert rep["result"]["upper"] == pytest.approx(2.0, abs=1e-12)

    def test_quotient_norm(self, files, capsys):
        code, rep = run_json(capsys, ["quotient-norm", "--space",
                                      files["m2.json"], "--subspace",
                                      files["subspace.json"], "--elem",
                                      files["e12_elem.json"]])
        assert code == 0
        assert rep["result"]["value"] == pytest.approx(1.0, abs=1e-7)
        assert rep["result"]["converged"] is True


class TestExitCodes:
    def test_certified_projection(self, files, capsys):
        code, rep = run_json(capsys, ["certify-mproj", "--space",
                                      files["m2.json"], "--proj",
                                      files["proj_good.json"],
                                      "--max-level", "2", "--samples", "100",
                                      "--restarts", "6"])
        assert code == 0
        assert rep["result"]["verdict"] == "certified"

    def test_refuted_projection(self, files, capsys):
        code, rep = run_json(capsys, ["certify-mproj", "--space",
                                      files["m2.json"], "--proj",
                                      files["proj_symm.json"],
                                      "--max-level", "2", "--samples", "100",
                                      "--restarts", "6"])
        assert code == 1
        assert rep["result"]["verdict"] == "refuted"
        assert rep["result"]["observed"] == pytest.approx(np.sqrt(0.5),
                                                          abs=1e-9)

    def test_corrupt_projection_is_an_input_error(self, files, capsys):
        code = cli.run(["--json", "certify-mproj", "--space",
                        files["m2.json"], "--proj",
                        files["proj_corrupt.json"]])
        out = capsys.readouterr().out
        assert code == 2
        assert "idempotent" in json.loads(out)["error"]

    def test_right_ideal_true_false(self, files, capsys):
        code, _ = run_json(capsys, ["right-ideal", "--algebra",
                                    files["triangular.json"], "--subspace",
                                    files["ideal.json"]])
        assert code == 0
        code, _ = run_json(capsys, ["right-ideal", "--algebra",
                                    files["triangular.json"], "--subspace",
                                    files["not_ideal.json"]])
        assert code == 1

    def test_multiplier_witness(self, files, capsys):
        code, rep = run_json(capsys, ["multiplier-witness", "--space",
                                      files["m2.json"], "--map",
                                      files["id_map.json"], "--a",
                                      files["eye2.json"]])
        assert code == 0
        assert rep["result"]["is_witness"] is True

    def test_tro_check(self, files, capsys):
        code, _ = run_json(capsys, ["tro-check", "--space",
                                    files["e12.json"]])
        assert code == 0
        code, rep = run_json(capsys, ["tro-check", "--space",
                                      files["mixed_span.json"]])
        assert code == 1
        assert np.allclose(rep["result"]["witness_product"],
                           [[0.0, 0.0], [0.0, 1.0]])

    def test_subtriple(self, files, capsys):
        code, rep = run_json(capsys, ["subtriple", "--space",
                                      files["mixed_span.json"]])
        assert code == 0
        assert rep["result"]["dim"] == 4

    def test_brs_and_choi_effros(self, files, capsys):
        code, _ = run_json(capsys, ["brs-check", "--algebra",
                                    files["m2.json"]])
        assert code == 0
        code, rep = run_json(capsys, ["choi-effros", "--algebra",
                                      files["m2.json"], "--idempotent",
                                      files["diag_phi.json"]])
        assert code == 0
        assert rep["result"]["mode"] == "selfadjoint"

    def test_unitize(self, files, capsys):
        code, rep = run_json(capsys, ["unitize", "--algebra",
                                      files["e12.json"]])
        assert code == 0
        assert rep["result"]["dim_after"] == 2

    def test_paulsen(self, files, capsys):
        code, rep = run_json(capsys, ["paulsen", "--space", files["m2.json"]])
        assert code == 0
        assert rep["result"]["dim"] == 10

    def test_unknown_reproduction_rejected(self, capsys):
        assert cli.run(["reproduce", "nonsense"]) == 2

    def test_malformed_input_is_error(self, files, capsys):
        code = cli.run(["--json", "norm", "--mat", files["bad_mat.json"]])
        capsys.readouterr()
        assert code == 2

    def test_missing_file_is_error(self, capsys):
        code = cli.run(["--json", "norm", "--mat", "/nonexistent.json"])
        capsys.readouterr()
        assert code == 2


class TestReproductions:
    def test_l12_nonunique(self, capsys):
        code, rep = run_json(capsys, ["reproduce", "l12-nonunique",
                                      "--restarts", "16"])
        assert code == 0
        r = rep["result"]
        assert r["min_norm"] == pytest.approx(np.sqrt(2.0), abs=1e-9)
        assert r["max_lower"] >= 2 - 1e-6
        assert r["max_upper"] == pytest.approx(2.0, abs=1e-12)
        assert r["gap"] >= 0.58
        assert "claim" in r

    def test_complex_dual(self, capsys):
        code, rep = run_json(capsys, ["reproduce", "complex-dual",
                                      "--restarts", "16"])
        assert code == 0
        r = rep["result"]
        assert r["complexified_norm"] == pytest.approx(np.sqrt(2.0), abs=1e-9)
        assert r["dual_lower_bound"] == pytest.approx(1.0, abs=1e-6)
        assert r["worst_restart"] <= 1 + 1e-6


class TestVerify:
    def test_verify_linalg_passes(self, capsys):
        code, rep = run_json(capsys, ["verify", "linalg"])
        assert code == 0
        assert rep["passed"] is True
        assert all(row["passed"] for row in rep["result"]["linalg"])

    def test_verify_reports_are_byte_identical(self, capsys):
        code1 = cli.run(["--json", "verify", "quantization"])
        out1 = capsys.readouterr().out
        code2 = cli.run(["--json", "verify", "quantization"])
        out2 = capsys.readouterr().out
        assert code1 == code2 == 0
        assert out1 == out2

    def test_verify_mideal_with_corrupt_projection(self, files, capsys):
        code = cli.run(["--json", "verify", "mideal", "--proj",
                        files["proj_corrupt.json"]])
        capsys.readouterr()
        assert code == 2

    def test_verify_mideal_with_good_projection(self, files, capsys):
        code, rep = run_json(capsys, ["verify", "mideal", "--proj",
                                      files["proj_good.json"]])
        assert code == 0
        names = [row["name"] for row in rep["result"]["mideal"]]
        assert any("user-supplied" in n for n in names)

    def test_text_mode_has_config_lines(self, files, capsys):
        code = cli.run(["norm", "--mat", files["mat.json"]])
        out = capsys.readouterr().out
        assert code == 0
        assert "config.seed = 12648430" in out
        assert "result.op_norm: 4.0" in out
