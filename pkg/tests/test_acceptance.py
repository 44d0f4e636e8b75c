"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; the lines
are repeated in the pytest terminal summary.
"""
import json
import sys
import time
from pathlib import Path

import numpy as np

from mechnet import analysis, gaussian
from mechnet.cli import main
from mechnet.dynamics import SiteParams, SpectralConfig, decoupled, derive_quantities, steady_state_mech_covariance
from mechnet.resources import tmsv

sys.path.insert(0, str(Path(__file__).parent))
from conftest import williamson_oracle  # noqa: E402

RESULTS = {}

S_STAR_RANGE = (2.45, 2.55)
S_STAR_RUNTIME = 120.0
G_DEATH_RANGE = (4.9, 5.1)
T_DEATH_RANGE = (1.5e-2, 2.5e-2)
BOUNDARY_SAMPLES = 1000
BOUNDARY_TOL = 1e-9
BOUNDARY_RUNTIME = 30 * 60.0
EPS_TH_MIN = 0.05
NPT_GUARD = 1e-6
ORACLE_SAMPLES = 500
ORACLE_TOL = 1e-10
LN_TOL = 1e-10


def report(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}: {detail}"
    RESULTS[number] = line
    print(line)
    assert passed, line


def _run_json(tmp, name, *argv):
    path = Path(tmp) / name
    code = main([*argv, "--format", "json", "-o", str(path)])
    assert code == 0, f"{argv[0]} exited with {code}"
    return json.loads(path.read_text()), path


def test_criterion_1_optimal_squeezing(tmp_path):
    start = time.perf_counter()
    doc, _ = _run_json(tmp_path, "opt.json", "optimize-s")
    elapsed = time.perf_counter() - start
    s_star = doc["meta"]["summary"]["s_star"]
    nu = doc["meta"]["summary"]["nu_min"]
    ok = S_STAR_RANGE[0] <= s_star <= S_STAR_RANGE[1] and elapsed < S_STAR_RUNTIME
    report(1, "optimal squeezing point", ok,
           f"s* = {s_star:.5f} in {list(S_STAR_RANGE)}, nu(s*) = {nu:.5f}, {elapsed:.1f} s (< {S_STAR_RUNTIME:.0f} s)")


def test_criterion_2_purity_death_point(tmp_path):
    doc, _ = _run_json(tmp_path, "purity.json", "scan-purity")
    g_death = doc["meta"]["summary"]["g_death"]
    rows = doc["results"]
    below = [r["g"] for r in rows if r["nu_min"] < 0.5]
    ok = G_DEATH_RANGE[0] <= g_death <= G_DEATH_RANGE[1] and max(below) <= g_death
    report(2, "purity death point", ok,
           f"g_death = {g_death:.4f} in {list(G_DEATH_RANGE)} (largest entangled grid row g = {max(below):.2f})")


def test_criterion_3_thermal_death_point(tmp_path):
    doc, _ = _run_json(tmp_path, "temp.json", "sweep-temperature")
    t_death = doc["meta"]["summary"]["t_death_k"]
    entangled = [r["temperature_k"] for r in doc["results"] if r["ln_max"] > 0]
    ok = T_DEATH_RANGE[0] <= t_death <= T_DEATH_RANGE[1] and max(entangled) <= t_death
    report(3, "thermal death point", ok, f"T_death = {t_death:.5g} K in {list(T_DEATH_RANGE)} K")


def test_criterion_4_boundary_dominance(tmp_path):
    start = time.perf_counter()
    doc, _ = _run_json(tmp_path, "sample.json", "sample", "--n", str(BOUNDARY_SAMPLES), "--seed", "42",
                       "--check-boundary")
    elapsed = time.perf_counter() - start
    summary = doc["meta"]["summary"]
    ok = (summary["records"] == BOUNDARY_SAMPLES and summary["failed"] == 0
          and summary["boundary_violations"] == 0 and elapsed < BOUNDARY_RUNTIME)
    report(4, "boundary dominance", ok,
           f"{summary['boundary_violations']} of {summary['records']} records above the TMSV boundary "
           f"by more than {BOUNDARY_TOL:g} ({summary['failed']} failed, {elapsed:.0f} s)")


def test_criterion_5_input_threshold():
    eps_th = analysis.input_threshold()
    below = analysis.boundary_curve(np.linspace(0.0, eps_th * (1 - 1e-6), 50))
    zero_below = all(ln == 0.0 for _, ln in below)
    ok = eps_th > EPS_TH_MIN and zero_below
    report(5, "input threshold", ok, f"eps_th = {eps_th:.5f} > {EPS_TH_MIN}; output exactly 0 below: {zero_below}")


def test_criterion_6_tripartite_inseparability():
    grid = np.linspace(1.01, 6.0, 40)
    boundary = analysis.BoundaryReference()
    verdicts, pair_ok, split_ok = [], True, True
    for a in grid:
        point = analysis.three_mode_point(float(a))
        cls = point["classification"]
        verdicts.append(cls.verdict == "fully_inseparable" and all(nu < 0.5 - NPT_GUARD for nu in cls.min_pt_symplectic))
        pair, split = point["one_vs_one"][0], point["one_vs_two"][0]
        pair_ok &= not boundary.exceeds(pair.input_entanglement, pair.output_entanglement, BOUNDARY_TOL)
        split_ok &= split.output_entanglement < boundary(split.input_entanglement)
    inseparable = grid[np.array(verdicts)]
    contiguous = len(inseparable) > 1 and np.all(np.diff(np.flatnonzero(verdicts)) == 1)
    ok = contiguous and pair_ok and split_ok
    span = f"a in [{inseparable.min():.2f}, {inseparable.max():.2f}]" if len(inseparable) else "no a"
    report(6, "tripartite inseparability", ok,
           f"fully_inseparable for {span} ({len(inseparable)}/{len(grid)} grid points, contiguous: {contiguous}); "
           f"one-vs-one within boundary: {pair_ok}; one-vs-two below boundary: {split_ok}")


def test_criterion_7_oracles():
    rng = np.random.default_rng(7)
    worst = 0.0
    for k in range(ORACLE_SAMPLES):
        cov = gaussian.random_physical_covariance(2 + k % 2, rng)
        worst = max(worst, np.max(np.abs(gaussian.symplectic_spectrum(cov) - williamson_oracle(cov))))

    cfg = SpectralConfig()
    thermal_err = 0.0
    for temperature in (1e-6, 1e-3, 1e-2):
        site = SiteParams(temperature=temperature)
        d = decoupled(derive_quantities(site))
        cov = steady_state_mech_covariance(tmsv(2.0), sites=site, cfg=cfg, derived=[d, d])
        scale = d.n_bar + 0.5
        thermal_err = max(thermal_err, np.max(np.abs(cov - scale * np.eye(4))) / scale)

    ln_err = max(abs(gaussian.log_negativity(tmsv(s), 1) - np.log(s + np.sqrt(s * s - 1)))
                 for s in np.linspace(1.0, 10.0, 181))
    ok = worst <= ORACLE_TOL and thermal_err <= cfg.rel_tolerance and ln_err <= LN_TOL
    report(7, "oracle suites", ok,
           f"Williamson max dev {worst:.1e} (<= {ORACLE_TOL:g}); decoupled thermal rel dev {thermal_err:.1e} "
           f"(<= {cfg.rel_tolerance:g}); TMSV log-negativity max dev {ln_err:.1e} (<= {LN_TOL:g})")


def test_criterion_8_determinism(tmp_path):
    commands = [
        ["two-mode", "--s", "2.2", "--d", "0.3", "--g", "1.8", "--lam", "0.4"],
        ["three-mode", "--a-min", "1.5", "--a-max", "4", "--steps", "4"],
        ["boundary", "--steps", "20"],
        ["scan-purity", "--s-steps", "6", "--g-steps", "4"],
        ["sweep-temperature", "--steps", "4"],
        ["optimize-s"],
        ["sample", "--n", "25", "--seed", "9"],
        ["classify", "--a", "2.5"],
    ]
    mismatched = []
    for argv in commands:
        for fmt in ("csv", "json"):
            outputs = []
            for run in range(2):
                path = tmp_path / f"{argv[0]}-{run}.{fmt}"
                assert main([*argv, "--format", fmt, "-o", str(path)]) == 0
                outputs.append(path.read_bytes())
            if outputs[0] != outputs[1]:
                mismatched.append(f"{argv[0]}/{fmt}")
    report(8, "determinism", not mismatched,
           f"{2 * len(commands)} command/format pairs byte-identical across repeated runs"
           + (f"; mismatched: {mismatched}" if mismatched else ""))


if __name__ == "__main__":
    import tempfile

    failures = 0
    for name, fn in sorted(globals().items()):
        if not name.startswith("test_criterion_"):
            continue
        try:
            if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as tmp:
                    fn(Path(tmp))
            else:
                fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
