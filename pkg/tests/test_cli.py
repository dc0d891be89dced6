import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from fourier_neumann.basis import eval_jn
from fourier_neumann.cli import (
    cmd_coeffs,
    cmd_hankel,
    cmd_normtable,
    cmd_semigroup,
    cmd_verify,
    main,
    parse_list,
)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    rows = list(csv.reader(io.StringIO(out))) if out else []
    return code, rows, out, err


def test_parse_list():
    assert parse_list("1,2,5") == [1.0, 2.0, 5.0]
    assert parse_list("0:1:3") == [0.0, 0.5, 1.0]
    with pytest.raises(Exception):
        parse_list("1:2")


def test_semigroup_single_eigenfunction(capsys):
    code, rows, _, _ = run(
        ["semigroup", "--kind", "poisson", "--alpha", "0", "--function", "jn:2*1", "--r", "0.5", "--grid", "1,2,5"],
        capsys,
    )
    assert code == 0
    assert rows[0] == ["alpha", "kind", "r", "t", "x", "value"]
    x = np.array([float(r[4]) for r in rows[1:]])
    v = np.array([float(r[5]) for r in rows[1:]])
    # P_r j_n = r^(alpha + 2n + 1) j_n, so j_2 at alpha = 0 picks up r^5
    assert np.allclose(v, 0.5**5 * eval_jn(2, 0.0, x), rtol=1e-10)


def test_coeffs_example(capsys):
    code, rows, _, _ = run(["coeffs", "--alpha", "0", "--function", "jn:0*1,4*0.5", "--nmax", "6"], capsys)
    assert code == 0
    c = np.array([float(r[2]) for r in rows[1:]])
    assert np.allclose(c, [1, 0, 0, 0, 0.5, 0, 0], atol=1e-7)


def test_verify_orthonormality(capsys):
    code, rows, _, err = run(["verify", "--suite", "orthonormality", "--alpha", "0", "--nmax", "8"], capsys)
    assert code == 0
    assert "PASS orthonormality" in err
    header = rows[0]
    res = np.array([float(r[header.index("residual")]) for r in rows[1:]])
    assert res.size == 45 and np.all(res <= 1e-7)


def test_byte_identical_runs(capsys, tmp_path):
    argv = ["hankel", "--alpha", "0,0.5", "--function", "bump:0.5,3", "--grid", "0.5:4:6", "--workers", "3"]
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        assert main([*argv, "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r\n" not in outs[0]
    single = tmp_path / "single.csv"
    main([*argv[:-2], "--workers", "1", "--output", str(single)])
    assert single.read_bytes() == outs[0]


def test_sweep_keeps_input_order(capsys):
    code, rows, _, _ = run(["basis", "--alpha", "1,0,-0.5", "--nmax", "0", "--grid", "1"], capsys)
    assert code == 0
    assert [r[0] for r in rows[1:]] == ["1", "0", "-0.5"]


def test_seventeen_digits(capsys):
    _, rows, _, _ = run(["basis", "--alpha", "-0.5", "--nmax", "0", "--grid", "1"], capsys)
    assert float(rows[1][3]) == float(eval_jn(0, -0.5, 1.0))


def test_usage_errors(capsys):
    assert main(["semigroup", "--alpha", "0", "--function", "jn:1*1", "--r", "1.5", "--grid", "1"]) == 2
    assert main(["coeffs", "--alpha", "-1", "--function", "jn:1*1"]) == 2
    assert main(["coeffs", "--alpha", "0", "--function", "gauss:1"]) == 2
    assert main(["nosuchcommand"]) == 2
    assert main(["verify"]) == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_p_range_guard(capsys):
    assert cmd_normtable(["--alpha", "1", "--p", "3"]) == 2
    assert "outside" in capsys.readouterr().err
    assert cmd_normtable(["--alpha", "1", "--p", "3", "--force", "--nmax", "4"]) == 0


def test_nonconvergence_exit(capsys):
    code = cmd_hankel(["--alpha", "0", "--function", "jn:0*1", "--grid", "1.001", "--method", "quadrature"])
    assert code == 3
    assert "nonconvergence" in capsys.readouterr().err


def test_verification_failure_exit(capsys):
    # crossover scaling over moderate r misses the asymptotic slope
    code = cmd_verify(["--suite", "heat_crossover"])
    _, err = capsys.readouterr()
    assert code == 1
    assert "FAIL heat_crossover" in err
    assert "computed" in err and "expected" in err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("alpha = 0\nfunction = jn:2*1\nr = 0.5\ngrid = 1,2\nkind = heat\n")
    code, rows, _, _ = run(["semigroup", "--config", str(cfg), "--kind", "poisson"], capsys)
    assert code == 0
    assert [r[1] for r in rows[1:]] == ["poisson", "poisson"]  # flags win over the file
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["semigroup", "--config", str(bad)]) == 2


def test_wrappers_and_console_script(capsys):
    assert cmd_semigroup(["--alpha", "0", "--function", "jn:0*1", "--t", "1", "--grid", "1"]) == 0
    assert cmd_coeffs(["--alpha", "0", "--function", "indicator:0,1", "--nmax", "2"]) == 0
    capsys.readouterr()
    out = subprocess.run(
        [sys.executable, "-m", "fourier_neumann.cli", "basis", "--alpha", "0", "--nmax", "0", "--grid", "1"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.splitlines()[0] == "alpha,n,x,value"
