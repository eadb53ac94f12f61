"""Tests for the command-line surface: exit codes, payloads, determinism."""

import json
from importlib import resources

import numpy as np

from symwit import cli, serialize
from symwit import symspace as ss


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class TestAbsPpt:
    def test_holds(self, capsys):
        code, record = run(capsys, "abs-ppt", "--d", "2", "--eigs", "0.34,0.33,0.33")
        assert code == cli.EXIT_OK
        assert record["payload"]["holds"] is True

    def test_fails(self, capsys):
        code, record = run(capsys, "abs-ppt", "--d", "2", "--eigs", "0.6,0.2,0.2")
        assert code == cli.EXIT_FAIL
        assert record["payload"]["certificate"] is not None

    def test_conjectural_exit(self, capsys):
        eigs = ",".join(["0.1"] * 10)
        code, record = run(capsys, "abs-ppt", "--d", "4", "--eigs", eigs)
        assert code == cli.EXIT_CONJECTURAL
        assert record["payload"]["mode"] == "conjectural"

    def test_malformed_input(self, capsys):
        code, _ = run(capsys, "abs-ppt", "--d", "2", "--eigs", "0.2,0.6,0.2")
        assert code == cli.EXIT_USAGE
        code, _ = run(capsys, "abs-ppt", "--d", "2", "--eigs", "not,numbers,here")
        assert code == cli.EXIT_USAGE

    def test_state_file(self, capsys, tmp_path):
        rho = np.diag([0.34, 0.33, 0.33]).astype(complex)
        path = tmp_path / "state.json"
        path.write_text(serialize.dump_operator(ss.embed(rho), 2))
        code, record = run(capsys, "abs-ppt", "--d", "2", "--state-file", str(path))
        assert code == cli.EXIT_OK
        assert np.allclose(record["payload"]["spectrum"], [0.34, 0.33, 0.33])

    def test_payload_deterministic(self, capsys):
        _, first = run(capsys, "abs-ppt", "--d", "2", "--eigs", "0.4,0.3,0.3")
        _, second = run(capsys, "abs-ppt", "--d", "2", "--eigs", "0.4,0.3,0.3")
        assert first["payload"] == second["payload"]


class TestWitness:
    def test_from_vector_fixture(self, capsys):
        path = str(resources.files("symwit.data").joinpath("d3_complex_sym.json"))
        code, record = run(capsys, "witness", "from-vector", "--file", path)
        assert code == cli.EXIT_OK
        payload = record["payload"]
        assert payload["negative_count"] == 3
        assert np.allclose(sorted(payload["spectrum"])[:3], [-1, -1, -1], atol=1e-9)
        assert "d3_complex_sym.json" in payload["fixture_matches"]

    def test_from_vector_real_fixture(self, capsys):
        path = str(resources.files("symwit.data").joinpath("d3_real_full.json"))
        code, record = run(capsys, "witness", "from-vector", "--vector-file", path)
        assert code == cli.EXIT_OK
        assert np.allclose(sorted(record["payload"]["spectrum"])[:3],
                           [-0.5, -0.5, -0.5], atol=1e-9)

    def test_eigs_requires_real_symmetric(self, capsys, tmp_path):
        path = tmp_path / "vec.json"
        path.write_text(serialize.dump_vector(np.array([0, 1, 0, 0], dtype=complex), 2))
        code, _ = run(capsys, "witness", "eigs", "--vector-file", str(path))
        assert code == cli.EXIT_USAGE

    def test_construct_2q(self, capsys):
        code, record = run(capsys, "witness", "construct-2q", "--mu", "1,1,-1")
        assert code == cli.EXIT_OK
        assert np.allclose(sorted(record["payload"]["spectrum"]), [-1, 0, 1, 1],
                           atol=1e-9)

    def test_construct_2q_unachievable(self, capsys):
        code, _ = run(capsys, "witness", "construct-2q", "--mu", "1,0.1,-0.5")
        assert code == cli.EXIT_USAGE

    def test_max_neg_d2(self, capsys):
        code, record = run(capsys, "witness", "max-neg", "--d", "2")
        assert code == cli.EXIT_OK
        payload = record["payload"]
        assert payload["negative_count"] == 1
        assert abs(payload["overlap_constant"] - 0.5) < 1e-6
        assert payload["sampled_min"] >= -1e-6


class TestSpectrumCheck:
    def test_closed_form_boundary(self, capsys):
        code, record = run(capsys, "spectrum-check", "--d", "2", "--mu", "1,1,-1",
                           "--method", "closed-form")
        assert code == cli.EXIT_OK
        assert record["payload"]["status"] == "feasible"

    def test_sdp_infeasible(self, capsys):
        code, record = run(capsys, "spectrum-check", "--d", "2", "--mu", "1,0.1,-0.5")
        assert code == cli.EXIT_FAIL
        assert "excluding_spectrum" in record["payload"]

    def test_methods_agree(self, capsys):
        rng = np.random.default_rng(0)
        for _ in range(100):
            mu = np.sort(rng.standard_normal(3))[::-1]
            text = ",".join(f"{v:.6f}" for v in mu)
            code_a, _ = run(capsys, "spectrum-check", "--d", "2", "--mu", text,
                            "--method", "closed-form")
            code_b, _ = run(capsys, "spectrum-check", "--d", "2", "--mu", text,
                            "--method", "sdp")
            assert code_a == code_b

    def test_closed_form_only_d2(self, capsys):
        mu = ",".join(["1"] * 6)
        code, _ = run(capsys, "spectrum-check", "--d", "3", "--mu", mu,
                      "--method", "closed-form")
        assert code == cli.EXIT_USAGE

    def test_d3_sdp(self, capsys):
        code, record = run(capsys, "spectrum-check", "--d", "3", "--mu",
                           "1,1,1,1,1,1")
        assert code == cli.EXIT_OK


class TestExperiment:
    def test_orderings_counts(self, capsys, tmp_path):
        code, record = run(capsys, "experiment", "orderings", "--d-range", "2..3",
                           "--trials", "20000", "--seed", "5", "--out",
                           str(tmp_path / "ord"))
        assert code == cli.EXIT_OK
        lines = record["payload"]["csv"].strip().splitlines()
        assert lines[0] == "d,count,last_new,saturated"
        counts = {int(l.split(",")[0]): int(l.split(",")[1]) for l in lines[1:]}
        assert counts == {2: 1, 3: 4}
        assert (tmp_path / "ord" / "orderings.csv").exists()

    def test_orderings_rerun_identical_bytes(self, capsys, tmp_path):
        args = ["experiment", "orderings", "--d-range", "2..2", "--trials", "5000",
                "--seed", "3"]
        run(capsys, *args, "--out", str(tmp_path / "a"))
        run(capsys, *args, "--out", str(tmp_path / "b"))
        assert (tmp_path / "a" / "orderings.csv").read_bytes() == \
            (tmp_path / "b" / "orderings.csv").read_bytes()

    def test_fig1_and_resume(self, capsys, tmp_path):
        base = ["experiment", "fig1", "--d-range", "2..2", "--seed", "11"]
        run(capsys, *base, "--trials", "2000", "--out", str(tmp_path / "full"))
        run(capsys, *base, "--trials", "1000", "--out", str(tmp_path / "steps"))
        code, _ = run(capsys, *base, "--trials", "2000", "--out",
                      str(tmp_path / "steps"), "--resume")
        assert code == cli.EXIT_OK
        full = json.loads((tmp_path / "full" / "fig1_d2.checkpoint.json").read_text())
        steps = json.loads((tmp_path / "steps" / "fig1_d2.checkpoint.json").read_text())
        assert full["histogram"] == steps["histogram"]
        assert full["best_trial"] == steps["best_trial"]
        csv = (tmp_path / "full" / "fig1.csv").read_text()
        assert csv.splitlines()[0] == "d,real_sym_bound,general_bound,observed_max"
        assert csv.splitlines()[1] == "2,1,1,1"

    def test_bad_range(self, capsys, tmp_path):
        code, _ = run(capsys, "experiment", "orderings", "--d-range", "x..y",
                      "--trials", "10", "--out", str(tmp_path))
        assert code == cli.EXIT_USAGE


class TestUsage:
    def test_missing_inputs(self, capsys):
        code, _ = run(capsys, "abs-ppt", "--d", "2")
        assert code == cli.EXIT_USAGE

    def test_unknown_command(self, capsys):
        assert cli.main(["nonsense"]) == cli.EXIT_USAGE
