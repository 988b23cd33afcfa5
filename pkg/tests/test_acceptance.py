"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` to see the report alongside the
pytest summary.
"""

import io
import math

import mpmath
import numpy as np
import pytest

from align_gain import analysis, cli, constants
from align_gain import io as aio
from align_gain.gain import (
    AlignmentParams,
    ControlField,
    Geometry,
    MolecularSpecies,
    alignment_params,
    field_for_p,
    gain_ac_orthogonal,
    gain_ac_orthogonal_unhalved,
    gain_ac_parallel,
    gain_dc_orthogonal,
    gain_dc_parallel,
    gain_general,
)
from align_gain.oracle import OracleRequest, oracle_gain
from align_gain.specfun import dawson, gen_langevin, langevin

ORTH = math.pi / 2
P_GRID = [0.01, 0.1, 1, 2, 5, 10, 50]
ETA_GRID = [0, 0.5, 0.8, 1, 1.5]


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")
        assert ok, f"criterion {number} failed: {detail}"
    return emit


# level-m parameter paired with each level-g value, per mode
MODE_CASES = {
    "dc-orth": (gain_dc_orthogonal, ORTH, lambda p: dict(p_g=p, p_m=p / 4)),
    "dc-par": (gain_dc_parallel, 0.0, lambda p: dict(p_g=p, p_m=4 * p)),
    "ac-par": (gain_ac_parallel, 0.0, lambda p: dict(q_g=p, q_m=-p)),
    "ac-orth": (gain_ac_orthogonal, ORTH, lambda p: dict(q_g=p, q_m=-p / 4)),
}


@pytest.mark.parametrize("mode", sorted(MODE_CASES))
def test_01_closed_form_matches_oracle(mode, report):
    fn, psi, pairing = MODE_CASES[mode]
    worst = 0.0
    count = 0
    for p in P_GRID:
        for eta in ETA_GRID:
            levels = pairing(p)
            closed = fn(AlignmentParams(**levels), eta).scaled_gain
            ref = oracle_gain(OracleRequest(eta_n=eta, psi=psi, **levels), 1e-12).value
            worst = max(worst, abs(closed - ref))
            count += 1
    report(1, f"closed form vs oracle ({mode})", count == 35 and worst <= 1e-8,
           f"{count} points, max |diff| = {worst:.2e} (<= 1e-8)")


def test_02_decoupling_limit(report):
    eta = 0.8
    at = {p: gain_dc_orthogonal(AlignmentParams(p_g=p, p_m=0.0), eta).scaled_gain
          for p in (1e2, 1e3, 1e4)}
    in_band = 0.26647 <= at[1e4] <= 0.26667
    monotone = at[1e2] < at[1e3] < at[1e4] < eta / 3
    report(2, "decoupling limit eta_n/3", in_band and monotone,
           f"gain(1e4) = {at[1e4]:.6f} in [0.26647, 0.26667]; "
           f"approach {at[1e2]:.6f} < {at[1e3]:.6f} < {at[1e4]:.6f} < {eta / 3:.6f}")


def test_03_fig1_features(report):
    model = analysis.preset("fig1").model
    best = analysis.find_max_gain(model, "p_g", 0.1, 50)
    crossings = analysis.find_threshold(model, "p_g", 0.1, 20)
    ok = (abs(best.max_value - 0.1065) <= 0.003 and 8 <= best.argmax <= 13
          and len(crossings) == 1 and abs(crossings[0].crossing - 2.15) <= 0.05)
    report(3, "Fig. 1 maximum and transparency point", ok,
           f"max {best.max_value:.5f} at p_g = {best.argmax:.3f}; "
           f"crossings {[round(c.crossing, 4) for c in crossings]}")


def test_04_fig4_features(report):
    model = analysis.preset("fig4").model
    crossings = analysis.find_threshold(model, "p_g", 0.1, 20)
    tail = model(p_g=1e3)
    ok = (len(crossings) == 2 and abs(crossings[1].crossing - 6.55) <= 0.15
          and abs(tail - (-0.2)) <= 0.002)
    report(4, "Fig. 4 crossings and asymptote", ok,
           f"crossings {[round(c.crossing, 4) for c in crossings]}; gain(p_g=1e3) = {tail:.5f}")


def test_05_isotropic_consistency(report):
    worst_iso = 0.0
    for eta in (0.0, 0.8, 1.0, 2.0):
        for fn in (gain_dc_orthogonal, gain_dc_parallel, gain_ac_orthogonal, gain_ac_parallel):
            worst_iso = max(worst_iso, abs(fn(AlignmentParams(), eta).scaled_gain - (eta - 1) / 3))
    worst_eq = 0.0
    for x in (0.0, 0.3, 2.0, 17.0, 400.0):
        worst_eq = max(
            worst_eq,
            abs(gain_dc_orthogonal(AlignmentParams(p_g=x, p_m=x), 1.0).scaled_gain),
            abs(gain_dc_parallel(AlignmentParams(p_g=x, p_m=x), 1.0).scaled_gain),
            abs(gain_ac_orthogonal(AlignmentParams(q_g=-x, q_m=-x), 1.0).scaled_gain),
            abs(gain_ac_parallel(AlignmentParams(q_g=x, q_m=x), 1.0).scaled_gain),
        )
    report(5, "isotropic limit and equal-distribution cancellation",
           worst_iso <= 1e-12 and worst_eq <= 1e-14,
           f"max |gain - (eta-1)/3| = {worst_iso:.1e}; max |gain| at eta_n=1 = {worst_eq:.1e}")


def _mp_ratio(weight, moment, a, b):
    with mpmath.workdps(40):
        return float(mpmath.quad(lambda x: weight(x) * moment(x), [a, (a + b) / 2, b])
                     / mpmath.quad(weight, [a, (a + b) / 2, b]))


def test_06_special_functions(report):
    worst_l = 0.0
    for p in np.geomspace(1e-8, 50, 30):
        pm = mpmath.mpf(float(p))
        ref = _mp_ratio(lambda t: mpmath.sin(t) * mpmath.exp(pm * (mpmath.cos(t) - 1)),
                        mpmath.cos, 0, mpmath.pi)
        worst_l = max(worst_l, abs(langevin(p) - ref) / abs(ref))
    worst_l2 = 0.0
    for q in np.linspace(-50, 50, 41):
        qm = mpmath.mpf(float(q))
        shift = max(qm, 0)
        ref = _mp_ratio(lambda u: mpmath.exp(qm * u * u - shift), lambda u: u * u, 0, 1)
        worst_l2 = max(worst_l2, abs(gen_langevin(q) - ref))
    l2_zero = abs(gen_langevin(0.0) - 1 / 3)
    d1 = abs(dawson(1.0) - 0.5380795069)
    ok = worst_l <= 1e-10 and worst_l2 <= 1e-10 and l2_zero <= 1e-12 and d1 <= 1e-10
    report(6, "special functions vs quadrature", ok,
           f"L rel err {worst_l:.1e}; L2 abs err {worst_l2:.1e}; "
           f"|L2(0)-1/3| = {l2_zero:.1e}; |D(1)-0.5380795069| = {d1:.1e}")


def test_07_units(report):
    species = MolecularSpecies("10 D", mu_g=10.0, mu_m=0.0)
    p = alignment_params(species, ControlField("dc", 28 * constants.KV_PER_MM, 70.0)).p_g
    e_unit = field_for_p(1.0, 10.0, 70.0) / constants.KV_PER_MM
    ok = abs(p - 0.966) <= 0.001 and abs(e_unit - 29.0) <= 0.1 and abs(e_unit - 28) / 28 <= 0.05
    report(7, "dipole alignment units", ok,
           f"p(28 kV/mm) = {p:.5f}; p = 1 at {e_unit:.3f} kV/mm ({abs(e_unit - 28) / 28:.1%} from 28)")


def test_08_geometry_decomposition(report):
    rng = np.random.default_rng(20050105)
    worst = 0.0
    for _ in range(10):
        p_g, p_m = rng.uniform(0, 20, 2)
        q_g, q_m = rng.uniform(-20, 20, 2)
        eta = rng.uniform(0, 1.5)
        psi = rng.uniform(0, ORTH)
        params = AlignmentParams(p_g, p_m, q_g, q_m)
        par = gain_general(params, eta, Geometry.parallel()).scaled_gain
        orth = gain_general(params, eta, Geometry.orthogonal()).scaled_gain
        mixed = gain_general(params, eta, Geometry(psi)).scaled_gain
        worst = max(worst, abs(mixed - (math.cos(psi) ** 2 * par + math.sin(psi) ** 2 * orth)))
    report(8, "psi decomposition, mixed p and q", worst <= 1e-8,
           f"10 random tuples, max |diff| = {worst:.1e}")


def test_09_orthogonal_ac_factor(report):
    params = AlignmentParams(q_g=2.0, q_m=0.5)
    ref = oracle_gain(OracleRequest(q_g=2.0, q_m=0.5, eta_n=0.8, psi=ORTH), 1e-12).value
    halved = gain_ac_orthogonal(params, 0.8).scaled_gain
    ratio = gain_ac_orthogonal_unhalved(params, 0.8) / ref
    ok = abs(halved - ref) <= 1e-8 and 1.99 <= ratio <= 2.01
    report(9, "halved orthogonal ac form vs oracle", ok,
           f"oracle {ref:.10f}, halved {halved:.10f}, unhalved/oracle = {ratio:.6f}")


def test_10_determinism(tmp_path, report):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = [cli.main(["figure", "fig1", "--out", str(path)], out=io.StringIO())
             for path in (a, b)]
    identical = a.read_bytes() == b.read_bytes()
    _, _, data = aio.read_csv(a)
    rewritten = "\n".join(",".join(aio.format_number(v) for v in row) for row in data) + "\n"
    round_trip = a.read_text().endswith(rewritten)
    reparsed = [float(aio.format_number(v)) for v in data[:, 1]]
    bit_exact = np.array(reparsed).tobytes() == data[:, 1].tobytes()
    ok = codes == [0, 0] and identical and round_trip and bit_exact
    report(10, "byte-identical figure output and CSV round trip", ok,
           f"exit codes {codes}; identical={identical}; round_trip={round_trip}; bit_exact={bit_exact}")
