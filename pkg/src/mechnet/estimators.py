"""scikit-learn style front end: resource parameters in, entanglement features out."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import gaussian
from .dynamics import (
    DEFAULT_RESOURCE_PHASE,
    TWO_PI,
    SiteParams,
    SpectralConfig,
    derive_quantities,
    drift_matrix,
    stability_check,
    steady_state_mech_covariance,
)
from .errors import InstabilityError
from .resources import ThreeModeParams, TwoModeParams, three_mode_general, two_mode_covariance

_FEATURES = {
    "two_mode": ["eps_in", "ln_out", "nu_min"],
    "three_mode": ["eps_pair_in", "ln_pair_out", "eps_split_in", "ln_split_out", "fully_inseparable"],
}
_COLUMNS = {"two_mode": (4, "s, d, g, lambda"), "three_mode": (3, "a1, a2, a3")}


class EntanglementDistributor(TransformerMixin, BaseEstimator):
    """Map resource parameters to input and output entanglement at fixed site settings.

    ``kind="two_mode"`` expects rows (s, d, g, lambda) and returns
    (input log-negativity, output log-negativity, output nu~_-).
    ``kind="three_mode"`` expects rows (a1, a2, a3) and returns pairwise and
    one-vs-two log-negativities in and out plus a 0/1 full-inseparability flag.
    Frequencies are ordinary (Hz); ``detuning_hz=None`` means resonance with the mirror.
    """

    def __init__(self, kind="two_mode", mass=145e-12, mechanical_frequency_hz=947e3,
                 cavity_length=25e-3, pump_power=20e-3, wavelength=1064e-9,
                 optical_decay_hz=215e3, quality_factor=7000.0, temperature=1e-6,
                 detuning_hz=None, resource_phase=DEFAULT_RESOURCE_PHASE,
                 method="quadrature", rel_tolerance=1e-8, omega_window=8.0, max_panels=4000):
        self.kind = kind
        self.mass = mass
        self.mechanical_frequency_hz = mechanical_frequency_hz
        self.cavity_length = cavity_length
        self.pump_power = pump_power
        self.wavelength = wavelength
        self.optical_decay_hz = optical_decay_hz
        self.quality_factor = quality_factor
        self.temperature = temperature
        self.detuning_hz = detuning_hz
        self.resource_phase = resource_phase
        self.method = method
        self.rel_tolerance = rel_tolerance
        self.omega_window = omega_window
        self.max_panels = max_panels

    def fit(self, X=None, y=None):
        if self.kind not in _FEATURES:
            raise ValueError(f"kind must be one of {sorted(_FEATURES)}, got {self.kind!r}")
        if X is not None:
            self._validate(X, reset=True)
        self.site_ = SiteParams(
            mass=self.mass,
            mech_frequency=TWO_PI * self.mechanical_frequency_hz,
            cavity_length=self.cavity_length,
            pump_power=self.pump_power,
            wavelength=self.wavelength,
            optical_decay=TWO_PI * self.optical_decay_hz,
            quality_factor=self.quality_factor,
            temperature=self.temperature,
            detuning=None if self.detuning_hz is None else TWO_PI * self.detuning_hz,
        )
        self.spectral_ = SpectralConfig(self.omega_window, self.rel_tolerance, self.max_panels, self.method)
        self.derived_ = derive_quantities(self.site_)
        self.drift_ = drift_matrix(self.site_, self.derived_)
        if not stability_check(self.drift_):
            raise InstabilityError("site is dynamically unstable at these parameters")
        return self

    def _validate(self, X, reset=False):
        X = check_array(X, dtype=np.float64)
        width, names = _COLUMNS[self.kind]
        if X.shape[1] != width:
            raise ValueError(f"expected {width} columns ({names}), got {X.shape[1]}")
        if reset:
            self.n_features_in_ = width
        return X

    def _mech(self, optical):
        n = gaussian.n_modes_of(optical)
        return steady_state_mech_covariance(optical, None, [self.site_] * n, self.spectral_,
                                            phase=self.resource_phase, derived=[self.derived_] * n)

    def transform(self, X):
        check_is_fitted(self, "derived_")
        X = self._validate(X)
        rows = []
        for row in X:
            if self.kind == "two_mode":
                optical = two_mode_covariance(TwoModeParams(*row))
                nu = gaussian.min_pt_symplectic(self._mech(optical), 1)
                rows.append([gaussian.log_negativity(optical, 1), gaussian.log_negativity_from_nu(nu), nu])
            else:
                optical = three_mode_general(ThreeModeParams(*row))
                mech = self._mech(optical)
                pair_in = gaussian.reduce(optical, [0, 1])
                pair_out = gaussian.reduce(mech, [0, 1])
                split_nus = [gaussian.min_pt_symplectic(mech, i) for i in range(3)]
                rows.append([
                    gaussian.log_negativity(pair_in, 1),
                    gaussian.log_negativity_from_nu(gaussian.min_pt_symplectic(pair_out, 1)),
                    gaussian.log_negativity(optical, 0),
                    gaussian.log_negativity_from_nu(split_nus[0]),
                    float(all(nu < 0.5 - 1e-6 for nu in split_nus)),
                ])
        return np.asarray(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(_FEATURES[self.kind], dtype=object)
