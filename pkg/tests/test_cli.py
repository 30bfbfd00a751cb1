import json

import numpy as np
import pytest
from click.testing import CliRunner

from innerseq.cli import EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, EXIT_REFUTED, main
from innerseq.coeffio import read_coeffs, write_coeffs
from innerseq.inner import blaschke_factor_coeffs
from innerseq.seq import CoeffSeq


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    return invoke


def write_json(path, data):
    path.write_text(json.dumps(data))
    return path


def rows(path):
    return [tuple(float(x) for x in line.split(",")) for line in path.read_text().splitlines()[1:]]


@pytest.fixture
def half(tmp_path):
    path = tmp_path / "half.csv"
    write_coeffs(path, blaschke_factor_coeffs(0.5, 80))
    return path


class TestMakeInner:
    def test_half(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {"zeros": [{"re": 0.5}]})
        res = run("make-inner", spec, "--order", 4, "--out", "c.csv")
        assert res.exit_code == EXIT_OK
        assert rows(tmp_path / "c.csv") == [(0, 0.5, 0), (1, -0.75, 0), (2, -0.375, 0),
                                            (3, -0.1875, 0), (4, -0.09375, 0)]
        assert "decay C=" in res.output

    def test_monomial(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {"monomial_order": 1})
        res = run("make-inner", spec, "-M", 2, "--out", "c.csv")
        assert rows(tmp_path / "c.csv") == [(0, 0, 0), (1, 1, 0), (2, 0, 0)]
        assert "tail exact: 0" in res.output

    def test_empty_spec(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {})
        run("make-inner", spec, "-M", 3, "--out", "c.csv")
        assert rows(tmp_path / "c.csv") == [(0, 1, 0), (1, 0, 0), (2, 0, 0), (3, 0, 0)]

    def test_atom_tail_unknown(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {"atoms": [{"theta": 0, "mass": 1}]})
        res = run("make-inner", spec, "-M", 16, "--out", "c.csv")
        assert res.exit_code == EXIT_OK and "tail unknown" in res.output

    def test_malformed_spec_names_field(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {"zeros": [{"re": 0.5, "mult": 0}]})
        res = run("make-inner", spec, "-M", 3, "--out", "c.csv")
        assert res.exit_code == EXIT_INPUT and "zeros[0].mult" in res.output

    def test_invalid_json(self, run, tmp_path):
        (tmp_path / "s.json").write_text("{")
        res = run("make-inner", tmp_path / "s.json", "-M", 3, "--out", "c.csv")
        assert res.exit_code == EXIT_INPUT and "invalid JSON" in res.output

    def test_warns_on_ill_conditioned_zero(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {"zeros": [{"re": 0.97}]})
        res = run("make-inner", spec, "-M", 10, "--out", "c.csv")
        assert "ill-conditioned" in res.output


class TestCheckInner:
    def test_blaschke_spec(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {"zeros": [{"re": 0.5}, {"re": -0.2, "im": 0.6}],
                                                "monomial_order": 1, "phase": 0.3})
        res = run("check-inner", "--spec", spec, "--json")
        assert res.exit_code == EXIT_OK
        rep = json.loads(res.output)
        assert rep["verdict"] == "consistent"
        assert rep["gram_defect"] < 1e-10
        assert rep["oracle"]["parseval"]["passed"]
        assert rep["oracle"]["modulus_defect"] < 1e-12
        assert rep["config"]["seed"] == 0x5EED

    def test_atom_spec(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {"atoms": [{"theta": 0, "mass": 1}]})
        res = run("check-inner", "--spec", spec, "--json")
        assert res.exit_code == EXIT_OK
        assert json.loads(res.output)["oracle"]["radial_ladder"]["passed"]

    def test_half_half_refuted(self, run, tmp_path):
        write_coeffs(tmp_path / "c.csv", CoeffSeq.poly([0.5, 0.5]))
        res = run("check-inner", "--coeffs", "c.csv", "--json")
        assert res.exit_code == EXIT_REFUTED
        assert json.loads(res.output)["witness"]["test"] == "norm_one"

    def test_human_output(self, run, tmp_path):
        write_coeffs(tmp_path / "c.csv", CoeffSeq.poly([0.5, 0.5]))
        res = run("check-inner", "--coeffs", "c.csv")
        assert "verdict: refuted" in res.output and "witness: norm_one" in res.output

    def test_gap_in_indices(self, run, tmp_path):
        (tmp_path / "c.csv").write_text("n,re,im\n0,1,0\n2,0,0\n")
        res = run("check-inner", "--coeffs", "c.csv")
        assert res.exit_code == EXIT_INPUT and "line 3" in res.output

    def test_missing_file(self, run):
        assert run("check-inner", "--coeffs", "nope.csv").exit_code == EXIT_INPUT

    @pytest.mark.parametrize("extra", [[], ["--spec", "s.json"]])
    def test_exactly_one_input(self, run, tmp_path, half, extra):
        write_json(tmp_path / "s.json", {})
        args = ["check-inner"] + (["--coeffs", half] + extra if extra else [])
        assert run(*args).exit_code == EXIT_INPUT

    def test_truncated_flag_loosens_tolerance(self, run, half):
        rep = json.loads(run("check-inner", "--coeffs", half, "--truncated", "--json").output)
        assert rep["tail_known"] is False and rep["tolerance"] == 1e-6

    def test_deterministic_bytes(self, run, tmp_path):
        spec = write_json(tmp_path / "s.json", {"zeros": [{"re": 0.3, "im": 0.4}]})
        a = run("check-inner", "--spec", spec, "--json", "--out", "a.json")
        b = run("check-inner", "--spec", spec, "--json", "--out", "b.json")
        assert a.output == b.output
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_csv_format(self, run, half):
        res = run("check-inner", "--coeffs", half, "--format", "csv")
        lines = dict(line.split(",", 1) for line in res.output.splitlines())
        assert lines["verdict"] == '"consistent"'
        assert "config.seed" in lines


class TestGenElement:
    def test_delta_copies_generator(self, run, tmp_path, half):
        write_coeffs(tmp_path / "d.csv", CoeffSeq.delta(0))
        assert run("gen-element", "--inner", half, "--c", "d.csv", "--out", "g.csv").exit_code == 0
        np.testing.assert_array_equal(read_coeffs(tmp_path / "g.csv").coeffs,
                                      read_coeffs(half).coeffs)

    def test_monomial_shifts(self, run, tmp_path):
        write_coeffs(tmp_path / "z.csv", CoeffSeq.poly([0, 1]))
        write_coeffs(tmp_path / "c.csv", CoeffSeq.poly([3, -1, 2]))
        run("gen-element", "--inner", "z.csv", "--c", "c.csv", "--out", "g.csv")
        np.testing.assert_array_equal(read_coeffs(tmp_path / "g.csv").coeffs, [0, 3, -1, 2])

    def test_parse_failure(self, run, tmp_path, half):
        (tmp_path / "c.csv").write_text("n,re,im\n0,1,0\n0,1,0\n")
        res = run("gen-element", "--inner", half, "--c", "c.csv", "--out", "g.csv")
        assert res.exit_code == EXIT_INPUT


class TestCheckMember:
    def test_pipeline_member(self, run, tmp_path, half, rng):
        v = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        write_coeffs(tmp_path / "c.csv", CoeffSeq.poly(v / np.linalg.norm(v)))
        run("gen-element", "--inner", half, "--c", "c.csv", "--out", "g.csv")
        res = run("check-member", "--inner", half, "--target", "g.csv", "--json")
        assert res.exit_code == EXIT_OK
        assert json.loads(res.output)["verdict"] == "member"

    def test_delta_nonmember(self, run, tmp_path, half):
        write_coeffs(tmp_path / "d.csv", CoeffSeq.delta(0))
        res = run("check-member", "--inner", half, "--target", "d.csv", "--json")
        assert res.exit_code == EXIT_REFUTED
        rep = json.loads(res.output)
        assert rep["verdict"] == "nonmember" and rep["window"] == 128
        assert rep["growth_rate"] == pytest.approx(2.0, abs=0.1)

    def test_refuted_generator(self, run, tmp_path):
        write_coeffs(tmp_path / "bad.csv", CoeffSeq.poly([0.5, 0.5]))
        write_coeffs(tmp_path / "d.csv", CoeffSeq.delta(0))
        res = run("check-member", "--inner", "bad.csv", "--target", "d.csv", "--json")
        assert res.exit_code == EXIT_INPUT
        rep = json.loads(res.output)
        assert rep["criterion"]["verdict"] == "refuted"

    def test_inconclusive(self, run, tmp_path):
        write_coeffs(tmp_path / "near.csv", blaschke_factor_coeffs(0.97, 2000))
        write_coeffs(tmp_path / "t.csv", CoeffSeq.delta(0).padded(128))
        res = run("check-member", "--inner", "near.csv", "--target", "t.csv", "--truncated")
        assert res.exit_code == EXIT_INCONCLUSIVE
        assert "verdict: inconclusive" in res.output

    def test_window_option(self, run, tmp_path, half):
        write_coeffs(tmp_path / "d.csv", CoeffSeq.delta(0))
        res = run("check-member", "--inner", half, "--target", "d.csv", "--window", 64, "--json")
        assert json.loads(res.output)["window"] == 64
