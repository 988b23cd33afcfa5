import io as stdio
import math
import os
import subprocess
import sys

import pytest

from align_gain import cli
from align_gain import io as aio


def run(*argv):
    out = stdio.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_gain_fig1_point():
    code, out = run("gain", "--mode", "dc-orth", "--pg", "8", "--pm", "2", "--eta-n", "0.8")
    assert code == 0
    assert out.startswith("1.055508")
    assert float(out.split()[0]) == pytest.approx(0.10555086015722, rel=1e-11)


def test_gain_zero():
    code, out = run("gain", "--mode", "dc-orth", "--pg", "0", "--pm", "0", "--eta-n", "1")
    assert code == 0 and float(out) == 0.0


def test_gain_from_species():
    code, out = run("gain", "--mode", "dc-orth", "--species", "dipole10d.cfg",
                    "--E0-kv-mm", "28", "--T-kelvin", "70", "--eta-n", "0.8")
    assert code == 0
    fields = dict(tok.split("=") for tok in out.split()[1:])
    assert float(fields["p_g"]) == pytest.approx(0.966, abs=1e-3)
    assert float(fields["p_m"]) == 0.0
    p = float(fields["p_g"])
    assert float(out.split()[0]) == pytest.approx(0.8 / 3 - (1 / math.tanh(p) - 1 / p) / p, rel=1e-10)

    code, out = run("gain", "--mode", "dc-orth", "--species", "phtalimide.cfg",
                    "--E0-kv-mm", "28", "--T-kelvin", "70", "--eta-n", "0.8")
    fields = dict(tok.split("=") for tok in out.split()[1:])
    assert float(fields["p_g"]) == pytest.approx(0.966 * 0.55, abs=1e-3)


def test_gain_absolute():
    code, out = run("gain", "--mode", "dc-par", "--pg", "1", "--pm", "4", "--eta-n", "0.8",
                    "--sigma0", "1e-16", "--n-g", "1e18")
    assert code == 0
    assert float(out.split("absolute=")[1]) == pytest.approx(100 * 0.1258021108, rel=1e-8)


def test_gain_general_psi():
    code, out = run("gain", "--mode", "general", "--pg", "2", "--pm", "0.5", "--eta-n", "0.8",
                    "--psi-deg", "90")
    _, ref = run("gain", "--mode", "dc-orth", "--pg", "2", "--pm", "0.5", "--eta-n", "0.8")
    assert code == 0
    assert float(out) == pytest.approx(float(ref), abs=1e-9)


@pytest.mark.parametrize("argv", [
    ("gain", "--mode", "dc-orth", "--pg", "1", "--species", "phtalimide.cfg",
     "--E0-kv-mm", "28", "--T-kelvin", "70"),
    ("gain", "--mode", "dc-orth", "--species", "phtalimide.cfg"),
    ("gain", "--mode", "dc-orth", "--pg", "1", "--psi-deg", "10"),
    ("gain", "--mode", "nope"),
    ("gain",),
    ("threshold",),
    ("sweep", "--mode", "dc-orth", "--axis1", "p_g:0:1", "--out", "x.csv"),
])
def test_usage_errors_exit_64(argv):
    with pytest.raises(SystemExit) as info:
        code, _ = run(*argv)
        raise SystemExit(code)
    assert info.value.code == cli.EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ("gain", "--mode", "dc-orth", "--pg", "-1"),
    ("gain", "--mode", "dc-orth", "--pg", "1", "--qg", "1"),
    ("gain", "--mode", "dc-orth", "--species", "dipole10d.cfg", "--E0-kv-mm", "28",
     "--T-kelvin", "0"),
    ("oracle", "--mode", "dc-orth", "--pg", "1", "--tolerance", "1e-20"),
    ("threshold", "--mode", "dc-orth", "--var", "mu", "--range", "0", "1"),
])
def test_domain_errors_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == cli.EXIT_DOMAIN
    assert "error" in capsys.readouterr().err


def test_io_error_exit_74(tmp_path):
    code, _ = run("figure", "fig1", "--out", str(tmp_path / "missing" / "f.csv"))
    assert code == cli.EXIT_IO
    code, _ = run("gain", "--mode", "dc-orth", "--species", str(tmp_path / "none.cfg"),
                  "--E0-kv-mm", "1", "--T-kelvin", "1")
    assert code == cli.EXIT_IO


def test_oracle_arbitration():
    code, out = run("oracle", "--mode", "ac-orth", "--qg", "2", "--qm", "0.5", "--eta-n", "0.8")
    assert code == 0
    rows = {line.split()[0]: line.split()[1] for line in out.splitlines()}
    assert abs(float(rows["closed_form"]) - float(rows["oracle"])) <= 1e-8
    assert float(rows["abs_diff"]) <= 1e-8
    assert float(rows["unhalved_form"]) / float(rows["oracle"]) == pytest.approx(2.0, abs=0.01)


def test_oracle_general():
    code, out = run("oracle", "--mode", "general", "--pg", "1", "--qg", "2", "--qm", "-1",
                    "--eta-n", "0.8", "--psi-deg", "40")
    assert code == 0
    rows = {line.split()[0]: line.split()[1] for line in out.splitlines()}
    assert float(rows["abs_diff"]) <= 1e-9


def test_threshold_fig4():
    code, out = run("threshold", "--preset", "fig4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("crossings 2")
    crossings = [float(line.split()[0].split("=")[1]) for line in lines[1:]]
    assert crossings == [pytest.approx(0.40, abs=0.02), pytest.approx(6.55, abs=0.05)]


def test_threshold_custom():
    code, out = run("threshold", "--mode", "dc-orth", "--range", "0.1", "20",
                    "--fixed", "eta_n=0.8", "eta_mu=0.25")
    assert code == 0 and out.startswith("crossings 1")


def test_optimize_fig1():
    code, out = run("optimize", "--preset", "fig1")
    assert code == 0
    fields = dict(tok.split("=") for tok in out.split()[1:])
    assert float(fields["p_g"]) == pytest.approx(9.186, abs=1e-3)
    assert float(fields["max_gain"]) == pytest.approx(0.1065, abs=0.003)


def test_figure_fig1(tmp_path):
    path = tmp_path / "fig1.csv"
    svg = tmp_path / "fig1.svg"
    code, _ = run("figure", "fig1", "--out", str(path), "--svg", str(svg))
    assert code == 0
    _, header, data = aio.read_csv(path)
    assert header == ["p_g", "scaled_gain"]
    assert data.shape == (200, 2)
    row = data[abs(data[:, 0] - 8).argmin()]
    assert row[1] == pytest.approx(0.1056, abs=2e-4)
    assert path.with_suffix(".dat").exists()
    assert svg.read_text().startswith("<svg")


def test_figure_fig4_signs(tmp_path):
    path = tmp_path / "fig4.csv"
    run("figure", "fig4", "--out", str(path))
    _, _, data = aio.read_csv(path)
    signs = [data[abs(data[:, 0] - x).argmin(), 1] for x in (0.2, 1.0, 8.0)]
    assert signs[0] < 0 < signs[1] and signs[2] < 0


def test_figure_fig3_corner(tmp_path):
    path = tmp_path / "fig3.csv"
    run("figure", "fig3", "--out", str(path))
    _, header, data = aio.read_csv(path)
    assert header == ["eta_mu", "eta_n", "scaled_gain"]
    corner = data[(data[:, 0] == data[:, 0].min()) & (data[:, 1] == 1.0)]
    assert corner[0, 2] == pytest.approx(0.2240, abs=5e-4)
    assert not path.with_suffix(".dat").exists()


def test_sweep(tmp_path):
    path = tmp_path / "s.csv"
    code, _ = run("sweep", "--mode", "ac-par", "--axis1", "q_g:-5:5:11", "--axis2",
                  "eta_n:0.5:1:3", "--fixed", "eta_q=-1", "--out", str(path))
    assert code == 0
    _, header, data = aio.read_csv(path)
    assert header == ["q_g", "eta_n", "scaled_gain"] and data.shape == (33, 3)


def test_sweep_unknown_parameter(tmp_path):
    code, _ = run("sweep", "--mode", "dc-orth", "--axis1", "mu:0:1:3", "--out",
                  str(tmp_path / "s.csv"))
    assert code == cli.EXIT_DOMAIN


def test_polarizability():
    code, out = run("polarizability", "--species", "rod_transitions.cfg", "--omega0", "1e15")
    assert code == 0
    lines = out.splitlines()
    dalpha_g = float(lines[0].split("dalpha=")[1].split()[0])
    dalpha_m = float(lines[1].split("dalpha=")[1].split()[0])
    assert dalpha_g > 0 > dalpha_m


def test_polarizability_resonance(capsys):
    code, _ = run("polarizability", "--species", "rod_transitions.cfg", "--omega0", "6.0e15")
    assert code == cli.EXIT_DOMAIN
    assert "transition 0" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    env = dict(os.environ, LC_ALL="de_DE.UTF-8", ALIGN_GAIN_THREADS="2")
    proc = subprocess.run(
        [sys.executable, "-m", "align_gain", "gain", "--mode", "dc-par", "--pg", "1",
         "--pm", "4", "--eta-n", "0.8"],
        capture_output=True, text=True, env=env, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1.25802110838e-01"
