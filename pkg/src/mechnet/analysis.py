"""Entanglement-distribution experiments on the mechanical network."""
from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import gaussian
from .dynamics import SiteParams, SpectralConfig, steady_state_mech_covariance
from .errors import DomainError, MechnetError, PhysicsError
from .resources import (
    StandardFormEntries,
    ThreeModeParams,
    TwoModeParams,
    sample_two_mode_params,
    three_mode_general,
    three_mode_symmetric,
    tmsv,
    two_mode_covariance,
)

log = logging.getLogger(__name__)

NPT_TOLERANCE = 1e-6
BOUNDARY_EPS_MAX = 3.5
BOUNDARY_POINTS = 400


@dataclass
class DistributionRecord:
    resource: dict
    input_entanglement: float
    output_entanglement: float
    min_pt_symplectic: float
    physical: bool
    split: tuple = (1,)
    error: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TripartiteClassification:
    npt_flags: tuple[bool, bool, bool]
    min_pt_symplectic: tuple[float, float, float]
    verdict: str

    FULLY_INSEPARABLE = "fully_inseparable"
    PARTIALLY_SEPARABLE = "partially_separable"
    FULLY_SEPARABLE = "fully_separable"


def resource_covariance(resource) -> tuple[np.ndarray, dict]:
    """Covariance matrix and a flat descriptor for any supported resource type."""
    if isinstance(resource, TwoModeParams):
        return two_mode_covariance(resource), {
            "s": resource.s, "d": resource.d, "g": resource.g, "lambda": resource.lam}
    if isinstance(resource, StandardFormEntries):
        return resource.covariance(), asdict(resource)
    if isinstance(resource, ThreeModeParams):
        return three_mode_general(resource), asdict(resource)
    cov = np.asarray(resource, dtype=float)
    gaussian.n_modes_of(cov)
    return cov, {}


def _sites_for(sites, n):
    if sites is None:
        sites = SiteParams()
    return [sites] * n if isinstance(sites, SiteParams) else list(sites)


def mechanical_state(resource, sites=None, cfg: SpectralConfig | None = None, phase=None) -> np.ndarray:
    cov, _ = resource_covariance(resource)
    n = gaussian.n_modes_of(cov)
    return steady_state_mech_covariance(cov, None, _sites_for(sites, n), cfg, phase=phase)


def distribution_point(resource, sites=None, cfg: SpectralConfig | None = None,
                       split: Sequence[int] = (1,), phase=None) -> DistributionRecord:
    """Input log-negativity, steady-state propagation, output log-negativity."""
    cov, descriptor = resource_covariance(resource)
    physical = gaussian.is_physical(cov)
    if not physical:
        raise PhysicsError("resource covariance is not physical")
    eps_in = gaussian.log_negativity(cov, split)
    mech = steady_state_mech_covariance(cov, None, _sites_for(sites, gaussian.n_modes_of(cov)), cfg,
                                        phase=phase)
    nu = gaussian.min_pt_symplectic(mech, split)
    return DistributionRecord(descriptor, eps_in, gaussian.log_negativity_from_nu(nu), nu,
                              gaussian.is_physical(mech), tuple(split))


def tmsv_output_nu(s: float, sites=None, cfg=None, phase=None) -> float:
    """nu~_- of the mechanical state driven by tmsv(s)."""
    mech = mechanical_state(tmsv(s), sites, cfg, phase)
    return gaussian.min_pt_symplectic(mech, 1)


def boundary_curve(epsilon_grid, sites=None, cfg=None, phase=None) -> list[tuple[float, float]]:
    """Output entanglement for TMSV inputs of entanglement epsilon (s = cosh epsilon)."""
    out = []
    for eps in epsilon_grid:
        if eps < 0:
            raise DomainError(f"input entanglement must be nonnegative, got {eps}")
        nu = tmsv_output_nu(float(np.cosh(eps)), sites, cfg, phase)
        out.append((float(eps), gaussian.log_negativity_from_nu(nu)))
    return out


def input_threshold(sites=None, cfg=None, phase=None, eps_max: float = 1.5) -> float:
    """Smallest TMSV input entanglement that yields nonzero output entanglement."""
    def excess(eps):
        return tmsv_output_nu(float(np.cosh(eps)), sites, cfg, phase) - 0.5
    if excess(eps_max) >= 0:
        raise DomainError(f"no output entanglement up to input entanglement {eps_max}")
    if excess(1e-9) < 0:
        return 0.0
    return float(brentq(excess, 1e-9, eps_max, xtol=1e-10))


def _bracketed_minimum(fun, lo, hi, xtol, n_grid=24):
    """Coarse grid to locate the basin, then bounded Brent refinement."""
    grid = np.linspace(lo, hi, n_grid)
    vals = np.array([fun(x) for x in grid])
    k = int(np.argmin(vals))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, n_grid - 1)]
    res = minimize_scalar(fun, bounds=(a, b), method="bounded", options={"xatol": xtol})
    if res.fun > vals[k]:
        return float(grid[k]), float(vals[k]), grid, vals
    return float(res.x), float(res.fun), grid, vals


def optimal_s(sites=None, cfg=None, bracket=(1.2, 6.0), phase=None, rel_tol: float = 1e-4):
    """Minimizer of nu~_-(s) for TMSV inputs.  Returns (s_star, nu_min)."""
    lo, hi = bracket
    fun = lambda s: tmsv_output_nu(s, sites, cfg, phase)  # noqa: E731
    s_star, nu, grid, vals = _bracketed_minimum(fun, lo, hi, xtol=rel_tol * lo / 10)
    span = hi - lo
    if s_star - lo < 1e-3 * span or hi - s_star < 1e-3 * span:
        raise DomainError(
            f"no interior minimum in [{lo}, {hi}]: nu(lo) = {vals[0]:.6g}, nu(hi) = {vals[-1]:.6g}"
        )
    return s_star, nu


def nu_derivative(s: float, sites=None, cfg=None, phase=None) -> float:
    """Central finite difference of nu~_-(s), step 1e-4 s."""
    h = 1e-4 * s
    lo = max(s - h, 1.0)
    return (tmsv_output_nu(s + h, sites, cfg, phase) - tmsv_output_nu(lo, sites, cfg, phase)) / (s + h - lo)


def symmetric_mixed_nu(s: float, g: float, sites=None, cfg=None, phase=None) -> float:
    mech = mechanical_state(TwoModeParams(s, 0.0, g, 1.0), sites, cfg, phase)
    return gaussian.min_pt_symplectic(mech, 1)


def purity_region_scan(s_grid, g_grid, sites=None, cfg=None, phase=None) -> np.ndarray:
    """nu~_-(g, s) for d = 0, lambda = 1; rows follow g_grid, NaN where g > 2 s - 1."""
    out = np.full((len(g_grid), len(s_grid)), np.nan)
    for i, g in enumerate(g_grid):
        for j, s in enumerate(s_grid):
            if g <= 2 * s - 1 + 1e-12 and g >= 1:
                out[i, j] = symmetric_mixed_nu(s, g, sites, cfg, phase)
    return out


def best_s_for_purity(g: float, sites=None, cfg=None, phase=None, s_span: float = 6.0):
    """(s_opt, nu_min) over the admissible s >= (g + 1)/2."""
    lo = (g + 1.0) / 2.0
    fun = lambda s: symmetric_mixed_nu(s, g, sites, cfg, phase)  # noqa: E731
    s_opt, nu, _, _ = _bracketed_minimum(fun, lo, lo + s_span, xtol=1e-5)
    return s_opt, nu


def purity_death_point(sites=None, cfg=None, phase=None, g_bracket=(1.0, 12.0), xtol=1e-4) -> float:
    """Largest g for which some s still gives nu~_- < 1/2."""
    def excess(g):
        return best_s_for_purity(g, sites, cfg, phase)[1] - 0.5
    lo, hi = g_bracket
    if excess(lo) >= 0:
        raise DomainError(f"no entanglement even at g = {lo}")
    if excess(hi) < 0:
        raise DomainError(f"entanglement survives up to g = {hi}; widen the bracket")
    return float(brentq(excess, lo, hi, xtol=xtol))


def _with_temperature(sites, temperature):
    sites = SiteParams() if sites is None else sites
    if isinstance(sites, SiteParams):
        return replace(sites, temperature=temperature)
    return [replace(s, temperature=temperature) for s in sites]


def temperature_sweep(t_grid, sites=None, cfg=None, phase=None, bracket=(1.2, 6.0)):
    """(T, max-over-s output entanglement, s_opt, nu_min) for each temperature."""
    out = []
    for t in t_grid:
        if t <= 0:
            raise DomainError(f"temperatures must be positive, got {t}")
        at_t = _with_temperature(sites, float(t))
        fun = lambda s: tmsv_output_nu(s, at_t, cfg, phase)  # noqa: E731
        s_opt, nu, _, _ = _bracketed_minimum(fun, bracket[0], bracket[1], xtol=1e-5)
        out.append((float(t), gaussian.log_negativity_from_nu(nu), s_opt, nu))
    return out


def thermal_death_point(sites=None, cfg=None, phase=None, t_bracket=(1e-4, 0.1), bracket=(1.2, 6.0)) -> float:
    """Temperature above which no TMSV squeezing yields entanglement."""
    def excess(log_t):
        return temperature_sweep([float(np.exp(log_t))], sites, cfg, phase, bracket)[0][3] - 0.5
    lo, hi = np.log(t_bracket[0]), np.log(t_bracket[1])
    if excess(lo) >= 0 or excess(hi) < 0:
        raise DomainError(f"thermal death point not bracketed by {t_bracket}")
    return float(np.exp(brentq(excess, lo, hi, xtol=1e-7)))


def _pair_record(sigma_mech, split_modes, keep, optical):
    sub = gaussian.reduce(sigma_mech, keep)
    local = [keep.index(m) for m in split_modes]
    nu = gaussian.min_pt_symplectic(sub, local)
    eps_in = float("nan")
    if optical is not None:
        eps_in = gaussian.log_negativity(gaussian.reduce(optical, keep), local)
    return DistributionRecord({"modes": tuple(keep)}, eps_in, gaussian.log_negativity_from_nu(nu), nu,
                              gaussian.is_physical(sub), tuple(split_modes))


def one_vs_one(sigma_mech, i: int, j: int, optical=None) -> DistributionRecord:
    """Entanglement between modes i and j after tracing out the rest."""
    if i == j:
        raise ValueError("one_vs_one needs two distinct modes")
    keep = sorted((i, j))
    return _pair_record(sigma_mech, [keep[1]], keep, optical)


def one_vs_two(sigma_mech, i: int, optical=None) -> DistributionRecord:
    n = gaussian.n_modes_of(sigma_mech)
    return _pair_record(sigma_mech, [i], list(range(n)), optical)


def classify_tripartite(sigma_mech, tol: float = NPT_TOLERANCE) -> TripartiteClassification:
    """Classify by the partial-transposition test on each one-vs-two split."""
    if gaussian.n_modes_of(sigma_mech) != 3:
        raise ValueError("classify_tripartite expects a three-mode covariance")
    nus = tuple(gaussian.min_pt_symplectic(sigma_mech, i) for i in range(3))
    flags = tuple(bool(nu < 0.5 - tol) for nu in nus)
    if all(flags):
        verdict = TripartiteClassification.FULLY_INSEPARABLE
    elif any(flags):
        verdict = TripartiteClassification.PARTIALLY_SEPARABLE
    else:
        verdict = TripartiteClassification.FULLY_SEPARABLE
    return TripartiteClassification(flags, nus, verdict)


def three_mode_point(resource, sites=None, cfg=None, phase=None) -> dict:
    """Pairwise and one-vs-two entanglement, in and out, for a three-mode resource."""
    if isinstance(resource, (int, float)):
        optical, descriptor = three_mode_symmetric(float(resource)), {"a": float(resource)}
    else:
        optical, descriptor = resource_covariance(resource)
    mech = steady_state_mech_covariance(optical, None, _sites_for(sites, 3), cfg, phase=phase)
    pairs = [one_vs_one(mech, i, j, optical) for i, j in itertools.combinations(range(3), 2)]
    splits = [one_vs_two(mech, i, optical) for i in range(3)]
    return {
        "resource": descriptor,
        "covariance": mech,
        "one_vs_one": pairs,
        "one_vs_two": splits,
        "classification": classify_tripartite(mech),
    }


class BoundaryReference:
    """TMSV boundary tabulated on an epsilon grid, with exact re-checks of apparent excesses."""

    def __init__(self, sites=None, cfg=None, phase=None, eps_max=BOUNDARY_EPS_MAX, n_points=BOUNDARY_POINTS):
        self.sites, self.cfg, self.phase = sites, cfg, phase
        self.grid = np.linspace(0.0, eps_max, n_points)
        self.values = np.array([ln for _, ln in boundary_curve(self.grid, sites, cfg, phase)])

    def __call__(self, eps: float) -> float:
        if eps > self.grid[-1]:
            return boundary_curve([eps], self.sites, self.cfg, self.phase)[0][1]
        return float(np.interp(eps, self.grid, self.values))

    def exceeds(self, eps: float, ln_out: float, tol: float = 1e-9) -> bool:
        if ln_out <= self(eps) + tol:
            return False
        exact = boundary_curve([eps], self.sites, self.cfg, self.phase)[0][1]
        return ln_out > exact + tol


def random_distribution_experiment(count: int, seed=0, s_max: float = 5.0, sites=None, cfg=None,
                                   symmetric_fraction: float = 0.0, phase=None,
                                   boundary: BoundaryReference | None = None):
    """Distribution records for seeded random mixed two-mode resources, plus a summary."""
    if count < 1:
        raise ValueError("count must be >= 1")
    params = sample_two_mode_params(s_max, count, seed, symmetric_fraction)
    records = []
    for p in params:
        try:
            records.append(distribution_point(p, sites, cfg, phase=phase))
        except (MechnetError, np.linalg.LinAlgError) as exc:
            log.warning("record %s failed: %s", p, exc)
            records.append(DistributionRecord(
                {"s": p.s, "d": p.d, "g": p.g, "lambda": p.lam}, float("nan"), float("nan"),
                float("nan"), False, (1,), str(exc)))
    return records, summarize(records, boundary)


def summarize(records, boundary: BoundaryReference | None = None) -> dict:
    ok = [r for r in records if r.error is None]

    def fraction(group):
        return sum(r.output_entanglement > 0 for r in group) / len(group) if group else float("nan")

    symmetric = [r for r in ok if r.resource.get("d") == 0.0]
    asymmetric = [r for r in ok if abs(r.resource.get("d", 0.0)) > 0.5 * (r.resource.get("s", 1.0) - 1.0)]
    summary = {
        "records": len(records),
        "failed": len(records) - len(ok),
        "entangled": sum(r.output_entanglement > 0 for r in ok),
        "entangled_fraction_symmetric": fraction(symmetric),
        "entangled_fraction_asymmetric": fraction(asymmetric),
    }
    if boundary is not None:
        summary["boundary_violations"] = sum(
            boundary.exceeds(r.input_entanglement, r.output_entanglement) for r in ok)
    return summary
