"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line with the measured quantities; the lines are
printed together at the end of the session (and immediately with -s).
"""

import math
import time

import numpy as np
import pytest

from ortho import constants, cusps, hermitian, orbits, qforms, report

import test_geom
import test_quat

SEED = 20240611
_LINES: dict[int, str] = {}


@pytest.fixture(scope="module", autouse=True)
def _summary(request):
    yield
    term = request.config.pluginmanager.get_plugin("terminalreporter")
    write = term.write_line if term else print
    write("")
    for k in sorted(_LINES):
        write(_LINES[k])


def record(k: int, ok: bool, detail: str) -> None:
    line = f"acceptance {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    _LINES[k] = line
    print(line)


def test_01_mertens():
    t0 = time.perf_counter()
    s = 2 * math.log(10**6)
    n = cusps.mertens_count(s)
    dev = abs(n * math.pi**2 / (3 * math.exp(s)) - 1)
    dt = time.perf_counter() - t0
    ok = dev < 0.005 and dt < 5
    record(1, ok, f"N={n} |ratio-1|={dev:.2e} (<5e-3) time={dt:.1f}s (<5s)")
    assert ok


def test_02_gauss_circle():
    t0 = time.perf_counter()
    t = 10**6
    n = qforms.gauss_count(qforms.BinaryQF(1, 0, 1), t)
    dev = abs(n / (math.pi * t) - 1)
    dt = time.perf_counter() - t0
    ok = dev < 0.01 and dt < 10
    record(2, ok, f"N={n} |ratio-1|={dev:.2e} (<1e-2) time={dt:.1f}s (<10s)")
    assert ok


def test_03_length_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst, used = 0.0, 0
    for q in (qforms.BinaryQF(1, 0, -2), qforms.BinaryQF(1, 0, -3), qforms.BinaryQF(1, -1, -1)):
        done = 0
        while done < 1000:
            g = qforms.random_sl2z(rng)
            (_, _), (c, d) = g
            if q(d, -c) == 0:
                continue
            value = qforms.perp_length(q, g)
            if value <= 0:
                continue
            worst = max(worst, abs(value - qforms.perp_length_geometric(q, g)))
            done += 1
        used += done
    dt = time.perf_counter() - t0
    ok = worst < 1e-9 and dt < 5
    record(3, ok, f"{used} samples, max diff={worst:.2e} (<1e-9) time={dt:.1f}s (<5s)")
    assert ok


def test_04_psi_asymptotic_and_oracle():
    t0 = time.perf_counter()
    q = qforms.BinaryQF(1, 0, -3)
    s = 10**6
    psi = qforms.count_primitive_reps(q, s)
    dev = abs(psi * math.pi**2 * math.sqrt(q.disc) / (12 * qforms.regulator(q) * s) - 1)
    dt = time.perf_counter() - t0
    # every integer s <= 1000 (Ψ only jumps at integers) for a family of forms
    mismatches = []
    for f in (q, qforms.BinaryQF(1, 0, -2), qforms.BinaryQF(1, -1, -1), qforms.BinaryQF(2, 1, -4)):
        vals = qforms.bruteforce_orbit_values(f, 1000)
        oracle = np.cumsum(np.bincount(list(vals.values()), minlength=1001))[1:]
        fast = qforms.count_primitive_reps_grid(f, list(range(1, 1001)))
        if not np.array_equal(oracle, fast):
            mismatches.append((f.a, f.b, f.c))
    ok = dev < 0.03 and dt < 60 and not mismatches
    record(4, ok, f"Psi(1e6)={psi} |ratio-1|={dev:.2e} (<3e-2) time={dt:.1f}s (<60s); "
                  f"oracle s<=1000 mismatches={mismatches}")
    assert ok


def test_05_all_reps_ratio():
    q = qforms.BinaryQF(1, 0, -3)
    s = 10**6
    ratio = qforms.count_all_reps(q, s) / qforms.count_primitive_reps(q, s)
    dev = abs(ratio - math.pi**2 / 6)
    ok = dev < 0.05
    record(5, ok, f"ratio={ratio:.5f} |ratio-zeta(2)|={dev:.2e} (<5e-2)")
    assert ok


def test_06_orbit_ball_psl2z():
    t0 = time.perf_counter()
    grid = list(np.linspace(8, 13, 11))
    rep = orbits.orbit_ball_report("Z", grid, threads=4)
    c = rep.fit["constant"]
    dt = time.perf_counter() - t0
    ok = 2.5 <= c <= 3.5 and dt < 600
    record(6, ok, f"fitted constant={c:.4f} in [2.5,3.5] (prediction "
                  f"{orbits.prediction_constant('Z'):.4f}) time={dt:.1f}s (<600s)")
    assert ok


def _specialization_cases():
    for n in range(2, 7):
        for vm in (0.7, math.pi / 3, 12.5):
            yield "margulis", {"n": n, "vol_M": vm}
            for k in range(1, n):
                yield "herrmann", {"n": n, "k": k, "vol_C": 1.3, "vol_M": vm}
                yield "horoball_geodesic", {"n": n, "k": k, "vol_H": 0.4, "vol_C": 2.1, "vol_M": vm}
                for k2 in range(1, n):
                    yield "bigeodesic", {"n": n, "k_minus": k, "k_plus": k2, "vol_minus": 1.7,
                                         "vol_plus": 0.3, "vol_M": vm}
            yield "bicusp", {"n": n, "vol_minus": 0.9, "vol_plus": 2.2, "vol_M": vm}
    for g in range(2, 12):
        yield "huber", {"g": g}


def test_07_constant_specializations():
    t0 = time.perf_counter()
    worst, count, huber_ok = 0.0, 0, True
    for name, params in _specialization_cases():
        direct = constants.special_constant(name, params)
        master = constants.specialization(name, params)
        worst = max(worst, abs(master - direct) / direct)
        count += 1
        if name == "huber":
            huber_ok &= abs(direct - 1 / (4 * (params["g"] - 1))) <= 1e-12 * direct
    dt = time.perf_counter() - t0
    ok = worst < 1e-12 and huber_ok and dt < 1
    record(7, ok, f"{count} cases, max rel diff={worst:.2e} (<1e-12) time={dt:.2f}s (<1s)")
    assert ok


def test_08_bianchi_gaussian():
    t0 = time.perf_counter()
    d = -4
    bad = [s for s in np.linspace(0, 4, 17)
           if cusps.bianchi_cusp_count(d, s) != cusps.bianchi_cusp_count_geometric(d, s)]
    grid = list(np.linspace(8, 14, 13))
    counts = cusps.bianchi_cusp_counts(d, grid)
    fitted, _ = report.fit_constant(list(zip(grid, counts)), 2)
    target = constants.special_constant("cosentino_refined", {"D_K": d})
    dev = abs(fitted / target - 1)
    dt = time.perf_counter() - t0
    ok = not bad and dev < 0.05 and dt < 300
    record(8, ok, f"oracle mismatches s<=4: {len(bad)}; fitted={fitted:.5f} target={target:.5f} "
                  f"|ratio-1|={dev:.3f} (<0.05) time={dt:.1f}s (<300s)")
    assert ok


def test_09_hermitian_unit_form():
    t0 = time.perf_counter()
    f = hermitian.HermForm(1, (0, 0), -1)
    grid = list(np.linspace(100, 1000, 10))
    try:
        rep = hermitian.herm_count_report(f, grid, slack=2.0)
    except hermitian.StabilizationError as exc:
        record(9, False, f"stabilization failed: {exc}")
        raise
    target = hermitian.psi_prediction(f)
    exponent = rep.fit["exponent"]
    dev = abs(rep.fit["constant"] / target - 1)
    dt = time.perf_counter() - t0
    ok = abs(exponent - 2) <= 0.1 and dev < 0.25 and dt < 600
    record(9, ok, f"stabilized; exponent={exponent:.4f} (2±0.1) constant={rep.fit['constant']:.5f} "
                  f"target={target:.5f} |ratio-1|={dev:.3f} (<0.25) time={dt:.1f}s (<600s)")
    assert ok


def _property_checks():
    def rng():
        return np.random.default_rng(SEED)

    checks = {
        "isometry": [lambda: test_geom.test_isometry_invariance(rng(), 2),
                     lambda: test_geom.test_isometry_invariance(rng(), 3)],
        "cocycle": [lambda: test_geom.test_busemann_cocycle_and_bound(rng(), 2),
                    lambda: test_geom.test_busemann_cocycle_and_bound(rng(), 3)],
        "conformal ratio": [lambda: test_geom.test_visual_conformal_ratio_and_sandwich(rng())],
        "Dieudonne": [test_quat.test_dieudonne_multiplicative_exact,
                      test_quat.test_dieudonne_cases_agree],
        "Hurwitz": [test_quat.test_hurwitz_units, test_quat.test_hurwitz_closure_random],
        "Hopf flow": [lambda: test_geom.test_flow_conjugacy_and_antipode(rng(), 2),
                      lambda: test_geom.test_flow_conjugacy_and_antipode(rng(), 3)],
        "models": [lambda: test_geom.test_model_coherence(rng(), d) for d in (2, 3, 5)],
    }
    return checks


def test_10_property_suites():
    failed = []
    for name, fns in _property_checks().items():
        try:
            for fn in fns:
                fn()
        except AssertionError:
            failed.append(name)
    feet = qforms.feet_distribution(qforms.BinaryQF(1, -1, -1), 10.5)
    ks = report.ks_uniform(feet)
    if not (feet.size >= 10**4 and ks < 0.02):
        failed.append("feet KS")
    ok = not failed
    record(10, ok, f"property suites failed: {failed or 'none'}; feet={feet.size} KS={ks:.4f} (<0.02)")
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
