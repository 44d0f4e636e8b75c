from dataclasses import replace

import numpy as np
import pytest

from mechnet import analysis, gaussian
from mechnet.dynamics import SiteParams, steady_state_mech_covariance
from mechnet.errors import DomainError
from mechnet.resources import TwoModeParams, three_mode_symmetric, tmsv

A_GRID = np.linspace(1.05, 6.0, 12)


@pytest.fixture(scope="module")
def boundary():
    return analysis.BoundaryReference()


@pytest.fixture(scope="module")
def three_mode_points():
    return [analysis.three_mode_point(float(a)) for a in A_GRID]


def test_vacuum_distribution_point():
    rec = analysis.distribution_point(gaussian.vacuum(2))
    assert rec.input_entanglement == 0.0 and rec.output_entanglement == 0.0
    assert rec.physical


def test_record_invariant():
    rec = analysis.distribution_point(TwoModeParams(3.0, 0.4, 2.0, 0.5))
    assert rec.output_entanglement == max(0.0, -np.log(2 * rec.min_pt_symplectic))


def test_tmsv_optimum_is_local_maximum():
    best = analysis.distribution_point(TwoModeParams(2.501)).output_entanglement
    for s in (2.2, 2.4, 2.6, 2.8):
        assert analysis.distribution_point(TwoModeParams(s)).output_entanglement < best


def test_mixed_state_below_tmsv_at_equal_input(boundary):
    rec = analysis.distribution_point(TwoModeParams(3.0, 0.0, 2.0, 1.0))
    assert 0 < rec.output_entanglement < boundary(rec.input_entanglement)


def test_boundary_shape(boundary):
    vals = boundary.values
    assert vals[0] == 0.0
    peak = int(np.argmax(vals))
    assert 0 < peak < len(vals) - 1
    assert abs(boundary.grid[peak] - np.arccosh(2.501)) < 0.03
    tail = vals[peak:]
    assert np.all(np.diff(tail) <= 0)
    assert np.all(np.diff(tail[tail > 0]) < 0)
    first = np.argmax(vals > 0)
    assert np.all(np.diff(vals[first:peak + 1]) > 0)


def test_boundary_rejects_negative():
    with pytest.raises(DomainError):
        analysis.boundary_curve([-0.1])


def test_input_threshold(boundary):
    eps_th = analysis.input_threshold()
    assert eps_th > 0.05
    below = analysis.boundary_curve(np.linspace(0, 0.999 * eps_th, 20))
    assert all(ln == 0.0 for _, ln in below)
    assert analysis.boundary_curve([1.01 * eps_th])[0][1] > 0


def test_optimal_s():
    s_star, nu = analysis.optimal_s()
    assert 2.45 <= s_star <= 2.55
    assert nu < 0.5
    assert abs(analysis.nu_derivative(s_star)) < 1e-4


def test_optimal_s_endpoint_error():
    with pytest.raises(DomainError, match="no interior minimum"):
        analysis.optimal_s(bracket=(1.2, 2.0))


def test_optimal_s_degraded_cavity():
    site = SiteParams()
    slow = replace(site, optical_decay=10 * site.optical_decay)
    _, nu_default = analysis.optimal_s(site)
    s_star, nu = analysis.optimal_s(slow, bracket=(1.05, 6.0))
    assert nu > nu_default
    print(f"kappa x10: s* = {s_star:.4f}, nu = {nu:.4f}")


def test_unimodal_in_s(fast):
    nus = np.array([analysis.tmsv_output_nu(s, cfg=fast) for s in np.linspace(1, 6, 200)])
    signs = np.sign(np.diff(nus))
    assert np.count_nonzero(signs[1:] != signs[:-1]) == 1
    assert signs[0] < 0 < signs[-1]


def test_purity_scan_structure(fast):
    s_grid = np.linspace(1.0, 6.0, 51)
    g_grid = np.array([1.0, 2.0, 3.0, 5.01])
    surface = analysis.purity_region_scan(s_grid, g_grid, cfg=fast)
    for i, g in enumerate(g_grid):
        assert np.all(np.isnan(surface[i]) == (s_grid < (g + 1) / 2 - 1e-12))
    assert abs(s_grid[np.nanargmin(surface[0])] - 2.501) <= 0.1
    assert np.nanmin(surface[3]) >= 0.5 - 1e-6
    region = [np.count_nonzero(surface[i] < 0.5) for i in range(4)]
    assert region == sorted(region, reverse=True)


def test_best_s_grows_with_g(fast):
    s_opts = [analysis.best_s_for_purity(g, cfg=fast)[0] for g in (1.0, 2.0, 3.0, 4.0, 4.8)]
    assert np.all(np.diff(s_opts) >= 0)


def test_purity_death_point(fast):
    g_death = analysis.purity_death_point(cfg=fast)
    assert 4.9 <= g_death <= 5.1
    assert analysis.best_s_for_purity(0.99 * g_death, cfg=fast)[1] < 0.5


def test_temperature_sweep(fast):
    rows = analysis.temperature_sweep(np.geomspace(1e-6, 3e-2, 12), cfg=fast)
    lns = [ln for _, ln, _, _ in rows]
    assert lns[0] > 0
    assert np.all(np.diff(lns) <= 1e-12)
    assert lns[-1] == 0.0
    low = analysis.temperature_sweep([1e-6, 1e-4], cfg=fast)
    assert low[1][1] > 0.98 * low[0][1]


def test_temperature_sweep_rejects_nonpositive():
    with pytest.raises(DomainError):
        analysis.temperature_sweep([0.0])


def test_separable_at_20_1_millikelvin(fast):
    _, _, _, nu = analysis.temperature_sweep([2.01e-2], cfg=fast)[0]
    assert nu >= 0.5


def test_thermal_death_point(fast):
    t_death = analysis.thermal_death_point(cfg=fast)
    assert 1.5e-2 <= t_death <= 2.5e-2


def test_one_vs_one_rejects_same_mode():
    with pytest.raises(ValueError):
        analysis.one_vs_one(gaussian.vacuum(3), 1, 1)


def test_vacuum_three_mode_measures():
    vac = gaussian.vacuum(3)
    assert analysis.one_vs_one(vac, 0, 1).output_entanglement == 0.0
    assert analysis.one_vs_two(vac, 2).output_entanglement == 0.0
    assert analysis.classify_tripartite(vac).verdict == "fully_separable"


def test_symmetric_three_mode_pairs_agree(three_mode_points):
    for point in three_mode_points:
        pairs = [r.output_entanglement for r in point["one_vs_one"]]
        splits = [r.output_entanglement for r in point["one_vs_two"]]
        assert max(pairs) - min(pairs) < 1e-9
        assert max(splits) - min(splits) < 1e-9


def test_three_mode_fully_inseparable(three_mode_points):
    verdicts = [p["classification"].verdict for p in three_mode_points]
    assert all(v == "fully_inseparable" for v in verdicts)


def test_three_mode_curves_below_boundary(three_mode_points, boundary):
    for point in three_mode_points:
        pair, split = point["one_vs_one"][0], point["one_vs_two"][0]
        assert not boundary.exceeds(pair.input_entanglement, pair.output_entanglement)
        assert split.output_entanglement < boundary(split.input_entanglement)


def test_partially_separable_product():
    cov = np.zeros((6, 6))
    cov[:4, :4] = tmsv(2.0)
    cov[4:, 4:] = 1.5 * np.eye(2)
    result = analysis.classify_tripartite(cov)
    assert result.npt_flags == (True, True, False)
    assert result.verdict == "partially_separable"


def test_classification_relabeling_invariant():
    cov = np.zeros((6, 6))
    cov[:4, :4] = tmsv(2.0)
    cov[4:, 4:] = 1.5 * np.eye(2)
    base = analysis.classify_tripartite(cov)
    for perm in ([2, 0, 1], [1, 2, 0], [0, 2, 1]):
        idx = [2 * k + r for k in perm for r in (0, 1)]
        relabeled = analysis.classify_tripartite(cov[np.ix_(idx, idx)])
        assert relabeled.verdict == base.verdict
        assert sorted(relabeled.npt_flags) == sorted(base.npt_flags)


def test_classify_needs_three_modes():
    with pytest.raises(ValueError):
        analysis.classify_tripartite(gaussian.vacuum(2))


def test_mechanical_three_mode_output_matches_direct():
    direct = steady_state_mech_covariance(three_mode_symmetric(2.0))
    point = analysis.three_mode_point(2.0)
    assert np.array_equal(point["covariance"], direct)


def test_random_experiment_single_vacuum():
    records, summary = analysis.random_distribution_experiment(1, seed=0, s_max=1.0)
    assert len(records) == 1
    assert records[0].input_entanglement == 0.0 and records[0].output_entanglement == 0.0
    assert summary["records"] == 1 and summary["failed"] == 0


def test_random_experiment_deterministic():
    a, sa = analysis.random_distribution_experiment(30, seed=5)
    b, sb = analysis.random_distribution_experiment(30, seed=5)
    assert [r.as_dict() for r in a] == [r.as_dict() for r in b]
    assert repr(sa) == repr(sb)


def test_random_experiment_boundary_and_symmetry(boundary):
    records, summary = analysis.random_distribution_experiment(300, seed=1, symmetric_fraction=0.5,
                                                               boundary=boundary)
    assert summary["boundary_violations"] == 0
    assert summary["entangled_fraction_symmetric"] > summary["entangled_fraction_asymmetric"]


def test_random_experiment_flags_failures(monkeypatch):
    real = analysis.distribution_point
    calls = []

    def flaky(p, *args, **kwargs):
        calls.append(p)
        if len(calls) == 2:
            raise DomainError("synthetic failure")
        return real(p, *args, **kwargs)

    monkeypatch.setattr(analysis, "distribution_point", flaky)
    records, summary = analysis.random_distribution_experiment(3, seed=2)
    assert summary["failed"] == 1
    assert records[1].error == "synthetic failure"
    assert np.isnan(records[1].output_entanglement)


def test_random_experiment_rejects_empty():
    with pytest.raises(ValueError):
        analysis.random_distribution_experiment(0)
