"""Linearized optomechanical dynamics and the stationary mechanical covariance.

Each site is a driven Fabry-Perot cavity with a movable end mirror.  The
fluctuations (q, p, x, y) obey d/dt O = K O + noise, with Brownian noise on p
and the resource quadratures entering the cavity at rate 2 kappa.  The output
is expressed in zero-point units q / sqrt(hbar / m w_m), p / sqrt(hbar m w_m)
so that the vacuum has covariance I/2.
"""
from __future__ import annotations

import logging
import warnings
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import hbar as HBAR
from scipy.constants import k as K_B
from scipy.linalg import solve_continuous_lyapunov, solve_sylvester

from . import gaussian
from .errors import InstabilityError, UnphysicalStateError
from .quadrature import integrate_real_line
from .resources import InputCorrelators, input_correlators

log = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SiteParams:
    """Physical constants of one optomechanical cavity (SI units, angular frequencies).

    ``detuning`` defaults to the mechanical frequency.
    """

    mass: float = 145e-12
    mech_frequency: float = TWO_PI * 947e3
    cavity_length: float = 25e-3
    pump_power: float = 20e-3
    wavelength: float = 1064e-9
    optical_decay: float = TWO_PI * 215e3
    quality_factor: float = 7000.0
    temperature: float = 1e-6
    detuning: float | None = None

    def __post_init__(self):
        if self.detuning is None:
            object.__setattr__(self, "detuning", self.mech_frequency)
        for name in ("mass", "mech_frequency", "cavity_length", "wavelength",
                     "optical_decay", "quality_factor", "detuning"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)}")
        if self.pump_power < 0:
            raise ValueError(f"pump_power must be nonnegative, got {self.pump_power}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be nonnegative, got {self.temperature}")
        if self.quality_factor < 100:
            warnings.warn(
                f"quality factor {self.quality_factor} < 100: Markovian Brownian noise is a poor approximation",
                stacklevel=3,
            )

    @property
    def gamma_m(self) -> float:
        return self.mech_frequency / self.quality_factor


@dataclass(frozen=True)
class DerivedQuantities:
    chi: float
    pump_amplitude: float
    cavity_amplitude: complex
    gamma_m: float
    n_bar: float
    cavity_frequency: float
    pump_frequency: float
    bare_detuning: float
    q_zpf: float
    p_zpf: float


def thermal_occupation(omega: float, temperature: float) -> float:
    x = HBAR * omega / (K_B * temperature) if temperature > 0 else np.inf
    return 0.0 if x > 700 else float(1.0 / np.expm1(x))


def derive_quantities(site: SiteParams) -> DerivedQuantities:
    """Coupling, pump amplitude, intracavity amplitude and thermal occupation.

    The detuning is the working point; the bare cavity-pump detuning and the
    pump frequency entering the amplitude follow from it self-consistently.
    """
    omega_c = TWO_PI * SPEED_OF_LIGHT / site.wavelength
    chi = omega_c / site.cavity_length
    kappa, delta_eff = site.optical_decay, site.detuning
    omega_0 = omega_c
    for _ in range(4):
        amp = np.sqrt(2.0 * kappa * site.pump_power / (HBAR * omega_0))
        c_ss = amp / (kappa + 1j * delta_eff)
        bare = delta_eff + HBAR * chi**2 * abs(c_ss) ** 2 / (site.mass * site.mech_frequency**2)
        omega_0 = omega_c - bare
    return DerivedQuantities(
        chi=chi,
        pump_amplitude=float(amp),
        cavity_amplitude=complex(c_ss),
        gamma_m=site.gamma_m,
        n_bar=thermal_occupation(site.mech_frequency, site.temperature),
        cavity_frequency=omega_c,
        pump_frequency=float(omega_0),
        bare_detuning=float(bare),
        q_zpf=float(np.sqrt(HBAR / (site.mass * site.mech_frequency))),
        p_zpf=float(np.sqrt(HBAR * site.mass * site.mech_frequency)),
    )


def drift_matrix(site: SiteParams, derived: DerivedQuantities | None = None) -> np.ndarray:
    """4x4 drift matrix in the (q, p, x, y) basis, q and p dimensionful."""
    d = derive_quantities(site) if derived is None else derived
    m, wm, kappa, delta = site.mass, site.mech_frequency, site.optical_decay, site.detuning
    re, im = d.cavity_amplitude.real, d.cavity_amplitude.imag
    s2 = np.sqrt(2.0)
    return np.array([
        [0.0, 1.0 / m, 0.0, 0.0],
        [-m * wm**2, -d.gamma_m, s2 * HBAR * d.chi * re, s2 * HBAR * d.chi * im],
        [-s2 * d.chi * im, 0.0, -kappa, delta],
        [s2 * d.chi * re, 0.0, -delta, -kappa],
    ])


def scaled_drift_matrix(site: SiteParams, derived: DerivedQuantities | None = None) -> np.ndarray:
    """Drift matrix with q, p expressed in zero-point units."""
    d = derive_quantities(site) if derived is None else derived
    t = np.array([1.0 / d.q_zpf, 1.0 / d.p_zpf, 1.0, 1.0])
    return drift_matrix(site, d) * t[:, None] / t[None, :]


def stability_check(k: np.ndarray) -> bool:
    """True iff every eigenvalue of ``k`` has a strictly negative real part."""
    ev = np.linalg.eigvals(np.asarray(k, dtype=float))
    margin = 1e-12 * max(np.max(np.abs(ev)), 1e-300)
    return bool(np.all(ev.real < -margin))


def brownian_spectrum(omega, site: SiteParams):
    """Spectral density hbar gamma m w [coth(hbar w / 2 k T) + 1] of the Brownian force.

    Continuous at w = 0, where it equals 2 gamma m k T.
    """
    omega = np.asarray(omega, dtype=float)
    pref = site.gamma_m * site.mass
    if site.temperature <= 0:
        return pref * HBAR * (np.abs(omega) + omega)
    kt = K_B * site.temperature
    x = HBAR * omega / (2.0 * kt)
    safe = np.where(x == 0, 1.0, x)
    x_coth_x = np.where(x == 0, 1.0, safe / np.tanh(safe))
    return pref * (2.0 * kt * x_coth_x + HBAR * omega)


def brownian_symmetrized(omega, site: SiteParams):
    """(S(w) + S(-w)) / 2 = hbar gamma m w coth(hbar w / 2 k T)."""
    return (brownian_spectrum(omega, site) + brownian_spectrum(-np.asarray(omega), site)) / 2.0


@dataclass(frozen=True)
class TransferCoefficients:
    """Frequency-domain response of (q, p) to the inputs c_in, c_in^dag and B.

    Arrays share the shape of the frequency argument; q and p are dimensionful.
    """

    q_c: np.ndarray
    q_cdag: np.ndarray
    q_b: np.ndarray
    p_c: np.ndarray
    p_cdag: np.ndarray
    p_b: np.ndarray
    denominator: np.ndarray


def transfer_coefficients(omega, site: SiteParams, derived: DerivedQuantities | None = None,
                          rtol: float = 1e-13) -> TransferCoefficients:
    d = derive_quantities(site) if derived is None else derived
    w = np.asarray(omega, dtype=float)
    m, wm, kappa, delta = site.mass, site.mech_frequency, site.optical_decay, site.detuning
    c, chi, gam = d.cavity_amplitude, d.chi, d.gamma_m
    cavity = delta**2 + (kappa - 1j * w) ** 2
    denom = 2.0 * abs(c) ** 2 * HBAR * delta * chi**2 + m * (1j * gam * w + w**2 - wm**2) * cavity
    scale = m * (wm**2 + w**2) * (delta**2 + kappa**2 + w**2)
    if np.any(np.abs(denom) <= rtol * scale):
        raise InstabilityError("resonance singularity: system marginally stable")
    drive = np.sqrt(2.0 * kappa) * HBAR * chi
    on_c = drive * np.conj(c) * (delta + 1j * kappa + w)
    on_cdag = drive * c * (-delta + 1j * kappa + w)
    q_c, q_cdag, q_b = 1j * on_c / denom, 1j * on_cdag / denom, -cavity / denom
    return TransferCoefficients(
        q_c=q_c, q_cdag=q_cdag, q_b=q_b,
        p_c=-1j * m * w * q_c, p_cdag=-1j * m * w * q_cdag, p_b=-1j * m * w * q_b,
        denominator=denom,
    )


@dataclass(frozen=True)
class SpectralConfig:
    """Numerical settings for the steady-state covariance.

    ``omega_window`` is the half-width of the finite integration core in units
    of the largest mechanical frequency; the tails beyond it are mapped onto a
    finite interval.  ``method`` is ``"quadrature"`` (frequency integrals) or
    ``"lyapunov"`` (the equivalent Lyapunov/Sylvester solve).
    """

    omega_window: float = 8.0
    rel_tolerance: float = 1e-8
    max_panels: int = 4000
    method: str = "quadrature"

    def __post_init__(self):
        if self.method not in ("quadrature", "lyapunov"):
            raise ValueError(f"unknown method {self.method!r}")
        if not self.omega_window > 0 or not self.rel_tolerance > 0 or self.max_panels < 1:
            raise ValueError("omega_window, rel_tolerance and max_panels must be positive")


def _noise_spectra(correlators: InputCorrelators, sites, derived, phase: float):
    """White-noise matrices in the (B_j, x_j, y_j) basis: stationary part and sideband part."""
    n = len(sites)
    d0 = np.zeros((3 * n, 3 * n))
    d2 = np.zeros((3 * n, 3 * n), dtype=complex)
    rotated = np.array([[1.0, -1j], [-1j, -1.0]]) / 2.0
    for i, (site, der) in enumerate(zip(sites, derived)):
        brown = brownian_symmetrized(site.mech_frequency, site)
        d0[3 * i, 3 * i] = brown / der.p_zpf**2
        for j in range(n):
            oi, oj = slice(3 * i + 1, 3 * i + 3), slice(3 * j + 1, 3 * j + 3)
            d0[oi, oj] = correlators.beam[i, j] * np.eye(2)
            d2[oi, oj] = correlators.pair[i, j] * np.exp(-1j * phase) * rotated
    return d0, d2


def _response(omega, site, der):
    """2 x 3 response of (Q, P) in zero-point units to (B / p_zpf, x_in, y_in)."""
    tc = transfer_coefficients(omega, site, der)
    r2 = np.sqrt(2.0)
    h = np.empty(np.shape(omega) + (2, 3), dtype=complex)
    for row, (on_c, on_cdag, on_b, unit) in enumerate((
        (tc.q_c, tc.q_cdag, tc.q_b, der.q_zpf),
        (tc.p_c, tc.p_cdag, tc.p_b, der.p_zpf),
    )):
        h[..., row, 0] = on_b * der.p_zpf / unit
        h[..., row, 1] = (on_c + on_cdag) / r2 / unit
        h[..., row, 2] = 1j * (on_c - on_cdag) / r2 / unit
    return h


def _full_response(omega, sites, derived):
    n = len(sites)
    h = np.zeros(np.shape(omega) + (2 * n, 3 * n), dtype=complex)
    for j, (site, der) in enumerate(zip(sites, derived)):
        h[..., 2 * j:2 * j + 2, 3 * j:3 * j + 3] = _response(omega, site, der)
    return h


def _breakpoints(sites, sideband):
    pts = [0.0]
    for s in sites:
        for centre in (s.mech_frequency, s.detuning):
            for width in (0.0, s.gamma_m, 10 * s.gamma_m, s.optical_decay):
                pts += [centre - width, centre + width]
    pts = np.array(pts)
    return np.concatenate([pts, -pts, 2 * sideband - pts, 2 * sideband + pts])


def _quadrature_covariance(d0, d2, sites, derived, sideband, cfg):
    scale = max(max(s.mech_frequency, s.detuning, s.optical_decay) for s in sites)
    half_width = max(cfg.omega_window * max(s.mech_frequency for s in sites), 4.0 * scale,
                     2.0 * abs(sideband) + 4.0 * scale)
    if half_width > cfg.omega_window * max(s.mech_frequency for s in sites):
        log.debug("integration core widened to %.3e rad/s to cover all resonances", half_width)

    def integrand(w):
        h = _full_response(w, sites, derived)
        h_shift = _full_response(2.0 * sideband - w, sites, derived)
        stationary = np.einsum("wik,kl,wjl->wij", h, d0, h.conj()).real
        rotating = np.einsum("wik,kl,wjl->wij", h, d2, h_shift).real
        return (stationary + 2.0 * rotating) / TWO_PI

    res = integrate_real_line(integrand, _breakpoints(sites, sideband), half_width,
                              cfg.rel_tolerance, cfg.max_panels)
    return res.value


def _lyapunov_covariance(d0, d2, sites, derived, sideband):
    n = len(sites)
    k = np.zeros((4 * n, 4 * n))
    g = np.zeros((4 * n, 3 * n))
    for j, (site, der) in enumerate(zip(sites, derived)):
        k[4 * j:4 * j + 4, 4 * j:4 * j + 4] = scaled_drift_matrix(site, der)
        rate = np.sqrt(2.0 * site.optical_decay)
        g[4 * j + 1, 3 * j] = 1.0
        g[4 * j + 2, 3 * j + 1] = rate
        g[4 * j + 3, 3 * j + 2] = rate
    stationary = solve_continuous_lyapunov(k, -(g @ d0 @ g.T))
    shifted = k + 1j * sideband * np.eye(4 * n)
    rotating = solve_sylvester(shifted, shifted.T, -(g @ d2 @ g.T))
    full = stationary + 2.0 * rotating.real
    idx = [4 * j + r for j in range(n) for r in (0, 1)]
    return full[np.ix_(idx, idx)]


def steady_state_mech_covariance(
    optical,
    correlators: InputCorrelators | None = None,
    sites: Sequence[SiteParams] | SiteParams | None = None,
    cfg: SpectralConfig | None = None,
    *,
    phase: float | None = None,
    derived: Sequence[DerivedQuantities] | None = None,
) -> np.ndarray:
    """Stationary covariance of the N mechanical modes driven by an N-mode resource.

    Parameters
    ----------
    optical : (2N, 2N) array
        Covariance of the optical resource (standard form).
    correlators : InputCorrelators, optional
        Derived from ``optical`` at the first site's mechanical frequency when omitted.
    sites : SiteParams or sequence of SiteParams
        One per mode; a single instance is repeated.
    cfg : SpectralConfig
    phase : float, optional
        Phase of the two-photon correlator relative to the pumps.  Defaults to
        ``DEFAULT_RESOURCE_PHASE``.
    derived : sequence of DerivedQuantities, optional
        Override the quantities derived from ``sites`` (e.g. to switch off the coupling).

    Returns
    -------
    (2N, 2N) array in zero-point units, evaluated at the reference instant
    where the two-photon correlator has the stated phase.
    """
    cfg = SpectralConfig() if cfg is None else cfg
    phase = DEFAULT_RESOURCE_PHASE if phase is None else phase
    optical = np.asarray(optical, dtype=float)
    n = gaussian.n_modes_of(optical)
    if sites is None:
        sites = SiteParams()
    if isinstance(sites, SiteParams):
        sites = [sites] * n
    sites = list(sites)
    if len(sites) != n:
        raise ValueError(f"{len(sites)} sites for a {n}-mode resource")
    if not gaussian.is_physical(optical):
        raise UnphysicalStateError("optical resource is not a physical covariance matrix")
    if correlators is None:
        correlators = input_correlators(optical, sites[0].mech_frequency)
    derived = [derive_quantities(s) for s in sites] if derived is None else list(derived)
    for j, (site, der) in enumerate(zip(sites, derived)):
        if not stability_check(drift_matrix(site, der)):
            raise InstabilityError(f"site {j} is dynamically unstable")

    d0, d2 = _noise_spectra(correlators, sites, derived, phase)
    sideband = correlators.sideband_frequency
    if cfg.method == "lyapunov":
        cov = _lyapunov_covariance(d0, d2, sites, derived, sideband)
    else:
        cov = _quadrature_covariance(d0, d2, sites, derived, sideband, cfg)
    return (cov + cov.T) / 2.0


def decoupled(derived: DerivedQuantities) -> DerivedQuantities:
    """Same site with the radiation-pressure coupling switched off."""
    return replace(derived, chi=0.0)


# Phase of the resource two-photon correlator <c_i c_j> relative to the pumps.
# Not fixed by the physical model; chosen so that the optimal TMSV squeezing
# at the default working point is s = 2.501.
DEFAULT_RESOURCE_PHASE = 2.14
