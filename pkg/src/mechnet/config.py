"""Run configuration: a line-oriented ``key = value`` document in SI units.

Frequencies are given in Hz and converted to rad/s when building site
parameters.  Omitted keys take the default working point.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .dynamics import DEFAULT_RESOURCE_PHASE, TWO_PI, SiteParams, SpectralConfig
from .errors import ConfigError

# key -> (type, unit, constraint)
KEYS = {
    "mass_kg": (float, "kg", "positive"),
    "mechanical_frequency_hz": (float, "Hz", "positive"),
    "cavity_length_m": (float, "m", "positive"),
    "pump_power_w": (float, "W", "nonnegative"),
    "wavelength_m": (float, "m", "positive"),
    "optical_decay_hz": (float, "Hz", "positive"),
    "quality_factor": (float, "", "positive"),
    "temperature_k": (float, "K", "nonnegative"),
    "detuning_hz": (float, "Hz", "positive"),
    "resource_phase_rad": (float, "rad", "finite"),
    "omega_window": (float, "", "positive"),
    "rel_tolerance": (float, "", "positive"),
    "max_panels": (int, "", "positive"),
    "method": (str, "", ("quadrature", "lyapunov")),
    "seed": (int, "", "nonnegative"),
    "output": (str, "", None),
    "format": (str, "", ("csv", "json")),
    "precision": (int, "", "positive"),
}


@dataclass(frozen=True)
class RunConfig:
    mass_kg: float = 145e-12
    mechanical_frequency_hz: float = 947e3
    cavity_length_m: float = 25e-3
    pump_power_w: float = 20e-3
    wavelength_m: float = 1064e-9
    optical_decay_hz: float = 215e3
    quality_factor: float = 7000.0
    temperature_k: float = 1e-6
    detuning_hz: float | None = None
    resource_phase_rad: float = DEFAULT_RESOURCE_PHASE
    omega_window: float = 8.0
    rel_tolerance: float = 1e-8
    max_panels: int = 4000
    method: str = "quadrature"
    seed: int = 0
    output: str | None = None
    format: str = "csv"
    precision: int = 9

    def site(self) -> SiteParams:
        return SiteParams(
            mass=self.mass_kg,
            mech_frequency=TWO_PI * self.mechanical_frequency_hz,
            cavity_length=self.cavity_length_m,
            pump_power=self.pump_power_w,
            wavelength=self.wavelength_m,
            optical_decay=TWO_PI * self.optical_decay_hz,
            quality_factor=self.quality_factor,
            temperature=self.temperature_k,
            detuning=None if self.detuning_hz is None else TWO_PI * self.detuning_hz,
        )

    def spectral(self) -> SpectralConfig:
        return SpectralConfig(self.omega_window, self.rel_tolerance, self.max_panels, self.method)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _convert(key: str, raw: str, where: str):
    kind, _, rule = KEYS[key]
    label = {float: "a number", int: "an integer", str: "text"}[kind]
    try:
        value = kind(raw)
    except ValueError:
        raise ConfigError(f"{where}: {key} expects {label}, got {raw!r}") from None
    if kind is float and value != value:
        raise ConfigError(f"{where}: {key} must be a number, got {raw!r}")
    if rule == "positive" and not value > 0:
        raise ConfigError(f"{where}: {key} must be positive, got {raw}")
    if rule == "nonnegative" and not value >= 0:
        raise ConfigError(f"{where}: {key} must be nonnegative, got {raw}")
    if rule == "finite" and abs(value) == float("inf"):
        raise ConfigError(f"{where}: {key} must be finite, got {raw}")
    if isinstance(rule, tuple) and value not in rule:
        raise ConfigError(f"{where}: {key} must be one of {', '.join(rule)}, got {raw!r}")
    return value


def apply_settings(config: RunConfig, pairs, source: str = "line") -> RunConfig:
    """Apply (location, key, raw value) triples on top of ``config`` and validate."""
    updates = {}
    for loc, key, raw in pairs:
        where = f"{source} {loc}"
        if key not in KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in updates:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        updates[key] = _convert(key, raw, where)
    config = replace(config, **updates)
    try:
        config.site()
        config.spectral()
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None
    return config


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse a configuration document.  Errors name the offending key and line."""
    pairs = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {number}: expected 'key = value', got {line!r}")
        pairs.append((number, key, value))
    return apply_settings(base or RunConfig(), pairs)


def render_config(config: RunConfig) -> str:
    """Inverse of parse_config; keys left at None are omitted."""
    lines = []
    for key, (_, unit, _) in KEYS.items():
        value = getattr(config, key)
        if value is None:
            continue
        text = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{key} = {text}" + (f"  # {unit}" if unit else ""))
    return "\n".join(lines) + "\n"
