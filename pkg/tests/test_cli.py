import struct
import subprocess
import sys

import numpy as np
import pytest

from nucnorm import ConvergenceError, frobenius_norm, s_shaped_spectrum, svd_values
from nucnorm import cli
from nucnorm.matfile import (
    MatrixFileError,
    dumps_matrix,
    loads_matrix,
    read_matrix,
    read_values_csv,
    write_matrix,
    write_values_csv,
)

from conftest import random_orthogonal


def run(*argv):
    return cli.main([str(a) for a in argv])


def report(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines() if "=" in line)


class TestMatrixFile:
    def test_header_layout(self):
        data = dumps_matrix(np.arange(6.0).reshape(2, 3))
        assert data[:4] == b"RNNM"
        assert struct.unpack("<IQQ", data[4:24]) == (1, 2, 3)
        # column-major payload
        assert struct.unpack("<6d", data[24:]) == (0.0, 3.0, 1.0, 4.0, 2.0, 5.0)

    def test_round_trip_bytes(self, tmp_path, nprng):
        A = nprng.standard_normal((7, 4))
        p1, p2 = tmp_path / "a.rnnm", tmp_path / "b.rnnm"
        write_matrix(p1, A)
        B = read_matrix(p1)
        np.testing.assert_array_equal(A, B)
        write_matrix(p2, B)
        assert p1.read_bytes() == p2.read_bytes()

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: b"XXXX" + d[4:],
            lambda d: d[:4] + struct.pack("<I", 2) + d[8:],
            lambda d: d[:-8],
            lambda d: d[:10],
            lambda d: d[:24] + struct.pack("<d", np.nan) + d[32:],
        ],
    )
    def test_rejects_corrupt(self, mutate):
        with pytest.raises(MatrixFileError):
            loads_matrix(mutate(dumps_matrix(np.ones((2, 2)))))

    def test_csv_round_trip_exact(self, tmp_path, nprng):
        v = np.concatenate([nprng.standard_normal(50), [np.pi, 1e-300, 1.0 / 3.0]])
        write_values_csv(tmp_path / "v.csv", v)
        np.testing.assert_array_equal(read_values_csv(tmp_path / "v.csv"), v)


@pytest.fixture
def matrix_file(tmp_path):
    def make(A, name="m.rnnm"):
        path = tmp_path / name
        write_matrix(path, A)
        return path
    return make


class TestEstimate:
    def test_identity(self, matrix_file, capsys):
        assert run("estimate", matrix_file(np.eye(100)), "--b", 10) == 0
        rep = report(capsys.readouterr().out)
        assert abs(float(rep["nuclear_norm"]) - 100.0) < 1e-9
        assert rep["blocks_processed"] == "10" and rep["bound_fro"] == "NA"

    def test_single_panel_matches_oracle(self, matrix_file, tmp_path, nprng):
        path = matrix_file(nprng.standard_normal((20, 20)))
        run("estimate", path, "--b", 32, "--out", tmp_path / "e.csv")
        run("oracle", path, "--out", tmp_path / "o.csv")
        assert (tmp_path / "e.csv").read_bytes() == (tmp_path / "o.csv").read_bytes()

    def test_sshape_bound_against_oracle(self, tmp_path, capsys):
        path = tmp_path / "s.rnnm"
        run("gen", "sshape", path, "--n", 400, "--seed", 1)
        run("estimate", path, "--b", 32, "--q", 2, "--bound", "--out", tmp_path / "e.csv", "--p", "1,2")
        rep = report(capsys.readouterr().out)
        run("oracle", path, "--out", tmp_path / "o.csv")
        truth = read_values_csv(tmp_path / "o.csv")
        est = np.sort(read_values_csv(tmp_path / "e.csv"))[::-1]
        bound = float(rep["bound_fro"])
        assert np.linalg.norm(truth - est) <= bound + 1e-10 * (1 + bound)
        assert float(rep["schatten_1"]) == float(rep["nuclear_norm"])
        assert float(rep["t_randnn_sec"]) >= 0 and float(rep["t_read_sec"]) >= 0

    def test_threshold_flag(self, tmp_path, capsys):
        path = tmp_path / "r.rnnm"
        run("gen", "spectrum", path, "--spec", ",".join(["1"] * 8 + ["0"] * 24))
        run("estimate", path, "--b", 8, "--threshold", 1e-8, "--bound")
        rep = report(capsys.readouterr().out)
        assert rep["terminated_early"] == "true" and rep["bound_fro"] == "NA"
        assert abs(float(rep["nuclear_norm"]) - 8.0) < 1e-10


class TestOracle:
    def test_diag(self, matrix_file, capsys):
        run("oracle", matrix_file(np.diag([1.0, 3.0, 2.0])))
        assert capsys.readouterr().out.splitlines() == ["3", "2", "1"]

    def test_orthogonal(self, matrix_file, tmp_path, nprng):
        run("oracle", matrix_file(random_orthogonal(9, nprng)), "--out", tmp_path / "o.csv")
        np.testing.assert_allclose(read_values_csv(tmp_path / "o.csv"), np.ones(9), atol=1e-13)

    def test_frobenius_identity(self, matrix_file, tmp_path, nprng):
        A = nprng.standard_normal((30, 18))
        run("oracle", matrix_file(A), "--out", tmp_path / "o.csv")
        v = read_values_csv(tmp_path / "o.csv")
        assert abs(np.sum(v**2) - frobenius_norm(A) ** 2) <= 1e-12 * frobenius_norm(A) ** 2


class TestGen:
    def test_sshape_round_trip(self, tmp_path, capsys):
        run("gen", "sshape", tmp_path / "s.rnnm", "--n", 50, "--seed", 3)
        run("oracle", tmp_path / "s.rnnm")
        v = np.array([float(x) for x in capsys.readouterr().out.split()[-50:]])
        spec = s_shaped_spectrum(50)
        assert np.max(np.abs(v - spec)) < 1e-11 * spec[0]

    def test_spectrum_rank_one(self, tmp_path):
        run("gen", "spectrum", tmp_path / "r.rnnm", "--spec", "1,0,0")
        s = svd_values(read_matrix(tmp_path / "r.rnnm"))
        assert abs(s[0] - 1.0) < 1e-14 and np.all(s[1:] < 1e-15)

    def test_spectrum_from_file_with_rows(self, tmp_path):
        (tmp_path / "spec.csv").write_text("2\n1\n0.5\n")
        run("gen", "spectrum", tmp_path / "r.rnnm", "--spec", tmp_path / "spec.csv", "--m", 5)
        A = read_matrix(tmp_path / "r.rnnm")
        assert A.shape == (5, 3)
        np.testing.assert_allclose(svd_values(A), [2.0, 1.0, 0.5], rtol=1e-13)

    def test_bie(self, tmp_path):
        run("gen", "bie", tmp_path / "b.rnnm", "--n", 32)
        A = read_matrix(tmp_path / "b.rnnm")
        assert A.shape == (32, 32)

    @pytest.mark.parametrize("kind", ["sshape", "bie"])
    def test_same_seed_same_bytes(self, tmp_path, kind):
        run("gen", kind, tmp_path / "a.rnnm", "--n", 40, "--seed", 5)
        run("gen", kind, tmp_path / "b.rnnm", "--n", 40, "--seed", 5)
        assert (tmp_path / "a.rnnm").read_bytes() == (tmp_path / "b.rnnm").read_bytes()


class TestCompare:
    def load(self, path):
        rows = np.loadtxt(path, delimiter=",", skiprows=1)
        return rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]

    def test_exact_case(self, matrix_file, tmp_path, nprng, capsys):
        run("compare", matrix_file(nprng.standard_normal((40, 40))), "--b", 64, "--out", tmp_path / "c.csv")
        i, true, est, rel = self.load(tmp_path / "c.csv")
        np.testing.assert_array_equal(i, np.arange(1, 41))
        assert np.all(rel <= 1e-11)
        rep = report(capsys.readouterr().out)
        assert rep["holds"] == "true" and float(rep["lhs"]) == 0.0

    def test_identity(self, matrix_file, tmp_path):
        run("compare", matrix_file(np.eye(50)), "--b", 8, "--out", tmp_path / "c.csv")
        assert np.all(self.load(tmp_path / "c.csv")[3] <= 1e-12)

    def test_stdout_csv(self, matrix_file, capsys):
        run("compare", matrix_file(np.eye(5)), "--b", 2)
        out = capsys.readouterr()
        assert out.out.splitlines()[0] == "i,sigma_true,sigma_est,rel_err"
        assert "holds=true" in out.err

    def test_mean_rel_err_decreases_with_q(self, tmp_path):
        run("gen", "sshape", tmp_path / "s.rnnm", "--n", 400, "--seed", 0)
        means = []
        for q in (0, 1, 2):
            per_seed = []
            for seed in range(20):
                out = tmp_path / f"c{q}_{seed}.csv"
                run("compare", tmp_path / "s.rnnm", "--b", 32, "--q", q, "--seed", seed, "--out", out)
                per_seed.append(np.mean(self.load(out)[3]))
            means.append(np.mean(per_seed))
        assert means[0] > means[1] > means[2]


class TestBench:
    def test_rows_and_positive_times(self, tmp_path):
        run("bench", "--sizes", "80,120", "--b", 16, "--q", 1, "--reps", 2, "--out", tmp_path / "b.csv")
        lines = (tmp_path / "b.csv").read_text().splitlines()
        assert lines[0] == "n,t_randnn_sec,t_oracle_sec,speedup"
        rows = np.loadtxt(tmp_path / "b.csv", delimiter=",", skiprows=1)
        assert rows.shape == (2, 4)
        np.testing.assert_array_equal(rows[:, 0], [80, 120])
        assert np.all(rows[:, 1:3] > 0)


class TestExitCodes:
    def test_missing_file(self, tmp_path):
        assert run("estimate", tmp_path / "nope.rnnm") == cli.EXIT_IO

    def test_bad_magic(self, tmp_path):
        (tmp_path / "bad.rnnm").write_bytes(b"JUNK" + bytes(20))
        assert run("oracle", tmp_path / "bad.rnnm") == cli.EXIT_IO

    def test_invalid_values(self, matrix_file):
        assert run("estimate", matrix_file(np.eye(3)), "--b", 0) == cli.EXIT_USAGE
        assert run("estimate", matrix_file(np.eye(3)), "--p", "0.5") == cli.EXIT_USAGE

    def test_argparse_usage(self):
        with pytest.raises(SystemExit) as exc:
            run("estimate", "x", "--b", "abc")
        assert exc.value.code == cli.EXIT_USAGE

    def test_nonconvergence(self, matrix_file, monkeypatch):
        def boom(A):
            raise ConvergenceError("no")
        monkeypatch.setattr(cli, "svd_values", boom)
        assert run("oracle", matrix_file(np.eye(3))) == cli.EXIT_NONCONVERGENCE

    def test_module_entry_point_and_thread_cap(self, matrix_file):
        proc = subprocess.run(
            [sys.executable, "-m", "nucnorm", "oracle", str(matrix_file(np.diag([2.0, 1.0])))],
            capture_output=True, text=True, env={"NUCNORM_THREADS": "1", "PATH": ""},
        )
        assert proc.returncode == 0 and proc.stdout.split() == ["2", "1"]
