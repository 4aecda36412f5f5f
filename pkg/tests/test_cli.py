import json
import math
import os
import subprocess
import sys

import pytest

from spectral_growth.cli import EXIT_CERTIFICATE, EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def call_json(capsys, *argv):
    code, out = call(capsys, *argv)
    return code, json.loads(out) if out else None


def test_growth_free(capsys):
    code, rep = call_json(capsys, "growth", "--group", "free(2)", "--kernel", "wordlength", "--N", "10")
    assert code == EXIT_OK
    assert rep["beta"][:3] == [1, 5, 17]
    assert rep["beta"] == [2 * 3**n - 1 for n in range(11)]
    assert rep["classification"]["kind"] == "Exponential"
    assert rep["classification"]["estimate"] == pytest.approx(3)
    assert rep["omega_estimate"]["label"] == "finite-horizon estimate"


def test_relative_abs_m(capsys):
    code, rep = call_json(
        capsys, "relative", "--group", "zd(2)", "--inclusion", "axis(0)", "--kernel", "table(abs-m)", "--t", "1"
    )
    assert code == EXIT_OK
    (part,) = rep["partitions"]
    assert part["partial_sum"] == pytest.approx(2.16395, abs=1e-5)
    exact = 1 + 2 * math.exp(-1) / (1 - math.exp(-1))
    # JSON floats carry 12 significant digits
    assert part["partial_sum"] - 1e-10 <= exact <= part["upper"] + 1e-10
    assert rep["criterion"] == "relative amenability criterion satisfied"


def test_ball_zero(capsys):
    code, rep = call_json(capsys, "ball", "--group", "free(2)", "--n", "0")
    assert code == EXIT_OK
    assert rep["count"] == 1 and rep["elements"] == ["e"]


def test_ball_csv(capsys):
    code, out = call(capsys, "ball", "--group", "zd(1)", "--n", "3", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines() == ["n,sphere_size,count", "0,1,1", "1,2,3", "2,2,5", "3,2,7"]


def test_growth_csv(capsys):
    code, out = call(capsys, "growth", "--group", "free(2)", "--N", "3", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "n,beta,gamma,omega_root,omega_ratio"
    assert lines[1].startswith("0,1,1,,4")


@pytest.mark.parametrize(
    "argv",
    [
        ["growth", "--group", "free(x)"],
        ["growth", "--group", "klein"],
        ["growth", "--group", "zd(2)", "--kernel", "wordlenght"],
        ["growth"],
        ["bogus"],
        ["growth", "--group", "zd(2)", "--format", "xml"],
        ["relative", "--group", "zd(2)", "--inclusion", "axis(7)"],
        ["growth", "--group", "zd(2)", "--t", "a,b"],
    ],
)
def test_parse_errors(capsys, argv):
    assert run(argv) == EXIT_PARSE
    capsys.readouterr()


def test_resource_cap(capsys, monkeypatch):
    monkeypatch.setenv("SPECTRAL_GROWTH_MAX_ELEMENTS", "1000")
    from spectral_growth.groups import _ball_cached

    _ball_cached.cache_clear()
    try:
        assert run(["ball", "--group", "free(3)", "--n", "8"]) == EXIT_RESOURCE
    finally:
        _ball_cached.cache_clear()
    capsys.readouterr()


def test_incomplete_spectrum_flags(capsys):
    code, rep = call_json(capsys, "spectrum", "--group", "zd(1)", "--Lambda", "10", "--max-radius", "4")
    assert code == EXIT_CERTIFICATE
    assert rep["certificates"]["lower_bound_only"] is True
    assert rep["lower_bound_only"] is True


def test_depth_beyond_cutoff_is_certificate_error(capsys):
    code, _ = call(capsys, "growth", "--group", "zd(1)", "--Lambda", "3", "--N", "5")
    assert code == EXIT_CERTIFICATE


def test_relative_not_proper(capsys):
    code, rep = call_json(
        capsys, "relative", "--group", "free(2)", "--inclusion", "cyclic-free(a)",
        "--kernel", "pullback(expsum(b), wordlength)", "--Lambda", "3", "--max-radius", "5",
    )
    assert code == EXIT_CERTIFICATE
    assert rep["criterion"] is None
    assert rep["quasi_normality"]["verdict"] == "growing"
    assert any(p["lower_bound_only"] for p in rep["properness"])


def test_reconstruct_report(capsys):
    code, rep = call_json(capsys, "reconstruct", "--group", "zd(1)", "--N", "4", "--radius", "5")
    assert code == EXIT_OK
    assert rep["schedule"][0] == [1, 1.0]
    assert rep["schedule"][1][1] == pytest.approx(1 / 6)
    assert rep["audit"]["pass"] is True
    assert rep["gamma_sets"][0] == 3
    assert rep["schoenberg"]["verdict"] == "pass on grid"


def test_cnd_check(capsys):
    code, rep = call_json(capsys, "cnd-check", "--group", "zd(1)", "--kernel", "power(3)", "--radius", "6")
    assert code == EXIT_OK
    assert rep["schoenberg"]["verdict"] == "fail"


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("# growth job\ngroup = free(2)\nN = 4\nkernel = wordlength\n")
    code, rep = call_json(capsys, "growth", "--config", str(cfg))
    assert code == EXIT_OK and rep["beta"] == [1, 5, 17, 53, 161]
    # flags override the file
    code, rep = call_json(capsys, "growth", "--config", str(cfg), "--N", "2")
    assert rep["beta"] == [1, 5, 17]


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("group = free(2)\nfrobnicate = 1\n")
    assert run(["growth", "--config", str(cfg)]) == EXIT_PARSE
    capsys.readouterr()


def test_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["ball", "--group", "zd(2)", "--n", "2", "--output", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["count"] == 13


def test_module_entry_point_deterministic():
    argv = [sys.executable, "-m", "spectral_growth", "classify", "--group", "zd(2)", "--N", "8"]
    outs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        outs.append(subprocess.run(argv, capture_output=True, env=env, check=True).stdout)
    assert outs[0] == outs[1]
