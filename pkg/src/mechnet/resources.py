"""Two- and three-mode Gaussian optical resources and their input-noise correlators."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gaussian
from .errors import DomainError, UnphysicalStateError


@dataclass(frozen=True)
class TwoModeParams:
    """Standard-form parameters of a two-mode Gaussian state.

    ``s`` and ``d`` set the local variances a = s + d and b = s - d, ``g`` the
    global purity (purity = 1/g) and ``lam`` the position between the most
    (lam = 1) and least (lam = -1) entangled states at fixed s, d, g.
    """

    s: float
    d: float = 0.0
    g: float = 1.0
    lam: float = 1.0

    def check(self, tol: float = 1e-12) -> None:
        s, d, g, lam = self.s, self.d, self.g, self.lam
        if not s >= 1 - tol:
            raise DomainError(f"s must be >= 1, got {s}")
        if abs(d) > s - 1 + tol:
            raise DomainError(f"|d| must be <= s - 1, got d={d}, s={s}")
        if not (2 * abs(d) + 1 - tol <= g <= 2 * s - 1 + tol):
            raise DomainError(f"g must lie in [2|d|+1, 2s-1] = [{2 * abs(d) + 1}, {2 * s - 1}], got {g}")
        if not -1 - tol <= lam <= 1 + tol:
            raise DomainError(f"lambda must lie in [-1, 1], got {lam}")

    @property
    def a(self) -> float:
        return self.s + self.d

    @property
    def b(self) -> float:
        return self.s - self.d


@dataclass(frozen=True)
class StandardFormEntries:
    """Entries of sigma = 1/2 [[a,0,c+,0],[0,a,0,c-],[c+,0,b,0],[0,c-,0,b]]."""

    a: float
    b: float
    c_plus: float
    c_minus: float

    def covariance(self) -> np.ndarray:
        a, b, cp, cm = self.a, self.b, self.c_plus, self.c_minus
        return 0.5 * np.array(
            [[a, 0, cp, 0], [0, a, 0, cm], [cp, 0, b, 0], [0, cm, 0, b]], dtype=float
        )


@dataclass(frozen=True)
class ThreeModeParams:
    a1: float
    a2: float
    a3: float

    def check(self, tol: float = 1e-12) -> None:
        a = (self.a1, self.a2, self.a3)
        for i, aj in enumerate(a):
            if aj < 1 - tol:
                raise DomainError(f"a{i + 1} must be >= 1, got {aj}")
        for i, j, k in itertools.permutations(range(3)):
            if not abs(a[i] - a[j]) + 1 - tol <= a[k] <= a[i] + a[j] - 1 + tol:
                raise DomainError(
                    f"triangular inequality |a{i + 1} - a{j + 1}| + 1 <= a{k + 1} <= "
                    f"a{i + 1} + a{j + 1} - 1 violated for a = {a}"
                )


def tmsv(s: float) -> np.ndarray:
    """Two-mode squeezed vacuum with single-mode variance s/2."""
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    r = np.sqrt(s * s - 1.0)
    return StandardFormEntries(s, s, r, -r).covariance()


def tmsv_entanglement(s: float) -> float:
    """Log-negativity of tmsv(s): arccosh(s) = ln(s + sqrt(s^2 - 1))."""
    return float(np.arccosh(s))


def tmsv_from_entanglement(epsilon: float) -> TwoModeParams:
    if epsilon < 0:
        raise DomainError(f"entanglement must be nonnegative, got {epsilon}")
    return TwoModeParams(s=float(np.cosh(epsilon)))


def _sqrt_nonneg(x: float, scale: float, what: str) -> float:
    if x < 0:
        if x < -1e-10 * max(scale, 1.0):
            raise UnphysicalStateError(f"parameterization outside physical branch ({what} = {x})")
        return 0.0
    return float(np.sqrt(x))


def two_mode_standard_form(params: TwoModeParams) -> StandardFormEntries:
    """Map (s, d, g, lambda) to standard-form entries.

    With f_x = 4 x^2 + w (lam - 1)/2 and h = 4 d^2 + 2 g,

        c+- = [sqrt((f_d - h)^2 - 4 g^2) +- sqrt((f_s - h)^2 - 4 g^2)] / (4 sqrt(s^2 - d^2))

    where w = (g - 1)^2 - 4 d^2 is the width of the physical seralian window.
    This yields det = g^2 (vacuum-one units) and a seralian running linearly
    from 4 d^2 + 2 g (lam = 1) to 1 + g^2 (lam = -1).
    """
    params.check()
    s, d, g, lam = params.s, params.d, params.g, params.lam
    a, b = s + d, s - d
    width = (g - 1.0) ** 2 - 4.0 * d * d
    h = 4.0 * d * d + 2.0 * g
    f_d = 4.0 * d * d + width * (lam - 1.0) / 2.0
    f_s = 4.0 * s * s + width * (lam - 1.0) / 2.0
    scale = (f_s - h) ** 2
    root_d = _sqrt_nonneg((f_d - h) ** 2 - 4.0 * g * g, scale, "(f_d - h)^2 - 4 g^2")
    root_s = _sqrt_nonneg((f_s - h) ** 2 - 4.0 * g * g, scale, "(f_s - h)^2 - 4 g^2")
    denom = 4.0 * np.sqrt(a * b)
    entries = StandardFormEntries(a, b, (root_d + root_s) / denom, (root_d - root_s) / denom)
    if not gaussian.is_physical(entries.covariance()):
        raise UnphysicalStateError("parameterization outside physical branch")
    return entries


def two_mode_covariance(params: TwoModeParams) -> np.ndarray:
    return two_mode_standard_form(params).covariance()


def _as_rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_two_mode_params(
    s_max: float, count: int, seed=None, symmetric_fraction: float = 0.0
) -> list[TwoModeParams]:
    """Draw s, d, g, lambda uniformly, each range conditioned on the earlier draws.

    With probability ``symmetric_fraction`` a draw is forced to d = 0.
    ``seed`` may be an int or a ``numpy.random.Generator`` (advanced in place).
    """
    if s_max < 1:
        raise DomainError(f"s_max must be at least 1, got {s_max}")
    rng = _as_rng(seed)
    out = []
    while len(out) < count:
        s = rng.uniform(1.0, s_max)
        symmetric = rng.uniform() < symmetric_fraction
        d = 0.0 if symmetric else rng.uniform(-(s - 1.0), s - 1.0)
        g = rng.uniform(2.0 * abs(d) + 1.0, 2.0 * s - 1.0)
        lam = rng.uniform(-1.0, 1.0)
        p = TwoModeParams(float(s), float(d), float(g), float(lam))
        try:
            two_mode_standard_form(p)
        except UnphysicalStateError:
            continue
        out.append(p)
    return out


def sample_two_mode_random(
    s_max: float, seed=None, count: int = 1, symmetric_fraction: float = 0.0
) -> list[StandardFormEntries]:
    return [
        two_mode_standard_form(p)
        for p in sample_two_mode_params(s_max, count, seed, symmetric_fraction)
    ]


def sample_raw_entries(s_max: float, seed=None, count: int = 1) -> list[StandardFormEntries]:
    """Rejection sampling over raw (a, b, c+, c-) with a physicality filter."""
    rng = _as_rng(seed)
    out = []
    while len(out) < count:
        a, b = rng.uniform(1.0, 2.0 * s_max - 1.0, size=2)
        bound = np.sqrt(a * b)
        cp, cm = rng.uniform(-bound, bound, size=2)
        e = StandardFormEntries(float(a), float(b), float(cp), float(cm))
        if gaussian.is_physical(e.covariance()):
            out.append(e)
    return out


def symmetric_couplings(a: float) -> tuple[float, float]:
    """Position and momentum couplings (x+, x-) of the pure symmetric three-mode state."""
    if a < 1:
        raise DomainError(f"a must be >= 1, got {a}")
    root = np.sqrt(max((a * a - 1.0) * (9.0 * a * a - 1.0), 0.0))
    return (a * a - 1.0 + root) / (4.0 * a), (a * a - 1.0 - root) / (4.0 * a)


def _three_mode_matrix(diag, c_plus, c_minus) -> np.ndarray:
    m = np.zeros((6, 6))
    for i in range(3):
        m[2 * i, 2 * i] = m[2 * i + 1, 2 * i + 1] = diag[i]
    for (i, j), cp in c_plus.items():
        m[2 * i, 2 * j] = m[2 * j, 2 * i] = cp
        m[2 * i + 1, 2 * j + 1] = m[2 * j + 1, 2 * i + 1] = c_minus[i, j]
    return 0.5 * m


def three_mode_symmetric(a: float) -> np.ndarray:
    xp, xm = symmetric_couplings(a)
    pairs = [(0, 1), (0, 2), (1, 2)]
    return _three_mode_matrix((a, a, a), {p: xp for p in pairs}, {p: xm for p in pairs})


def three_mode_general(params: ThreeModeParams) -> np.ndarray:
    """Pure three-mode state with local variances a_j / 2 (a_j obeying the triangle rule)."""
    params.check()
    a = (params.a1, params.a2, params.a3)
    c_plus, c_minus = {}, {}
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        k = 3 - i - j
        ai, aj, ak = a[i], a[j], a[k]
        diff = (ai - aj) ** 2
        summ = (ai + aj) ** 2
        first = np.sqrt(max((diff - (ak - 1) ** 2) * (diff - (ak + 1) ** 2), 0.0))
        second = np.sqrt(max((summ - (ak - 1) ** 2) * (summ - (ak + 1) ** 2), 0.0))
        denom = 4.0 * np.sqrt(ai * aj)
        c_plus[i, j] = (first + second) / denom
        c_minus[i, j] = (first - second) / denom
    return _three_mode_matrix(a, c_plus, c_minus)


def residual_contangle_symmetric(a: float) -> float:
    """Minimum residual Gaussian contangle of the pure symmetric three-mode state.

    One-vs-two contangle arcsinh^2 sqrt(a^2 - 1) minus twice the one-vs-one
    contangle ln^2(nu)/4, where nu^2 = (3 a^2 - 1 - sqrt(9 a^4 - 10 a^2 + 1))/2
    is the squared partially transposed eigenvalue of a two-mode reduction in
    vacuum-one units.
    """
    if a < 1:
        raise DomainError(f"a must be >= 1, got {a}")
    root = np.sqrt(max(9 * a**4 - 10 * a * a + 1, 0.0))
    nu_sq = (3 * a * a - 1 - root) / 2
    one_vs_two = np.arcsinh(np.sqrt(a * a - 1)) ** 2
    pair = 0.25 * np.log(nu_sq) ** 2 if nu_sq < 1 else 0.0
    return float(max(0.0, one_vs_two - 2 * pair))


def residual_contangle_uncorrected(a: float) -> float:
    """arcsinh^2 sqrt(a^2 - 1) - ln^2(2 a^2 + 4 a x)/2 with x the momentum coupling entry.

    Kept only for comparison: it is negative at a = 1 and disagrees with the
    convex-roof value, so residual_contangle_symmetric is the one to use.
    """
    if a < 1:
        raise DomainError(f"a must be >= 1, got {a}")
    x = symmetric_couplings(a)[1] / 2
    return float(np.arcsinh(np.sqrt(a * a - 1)) ** 2 - 0.5 * np.log(2 * a * a + 4 * a * x) ** 2)


@dataclass(frozen=True)
class InputCorrelators:
    """White-noise correlators of an N-mode resource in standard form.

    ``occupations[j]`` is <c_j^dag c_j>.  ``pair[i, j]`` is the two-photon
    correlator <c_i c_j>, which rides on the +sideband and rotates as
    exp(-2 i w t) at the sideband frequency w.  ``beam[i, j]`` is <c_i^dag c_j>
    (stationary).  Diagonals of ``beam`` hold the symmetrized variances n + 1/2.
    """

    occupations: np.ndarray
    pair: np.ndarray
    beam: np.ndarray
    sideband_frequency: float

    @property
    def n_modes(self) -> int:
        return len(self.occupations)

    @property
    def local_coefficients(self) -> tuple[float, ...]:
        return tuple(float(v) for n in self.occupations for v in (n, n + 1.0))

    @property
    def cross_minus(self) -> float:
        return float(self.pair[0, 1])

    @property
    def cross_plus(self) -> float:
        return float(self.beam[0, 1])


def is_standard_form(cov, tol: float = 1e-12) -> bool:
    cov = np.asarray(cov, dtype=float)
    n = gaussian.n_modes_of(cov)
    scale = max(np.max(np.abs(cov)), 1.0) * tol
    for i in range(n):
        if abs(cov[2 * i, 2 * i] - cov[2 * i + 1, 2 * i + 1]) > scale:
            return False
        for j in range(n):
            if abs(cov[2 * i, 2 * j + 1]) > scale:
                return False
    return True


def input_correlators(optical, omega_m: float) -> InputCorrelators:
    cov = np.asarray(optical, dtype=float)
    if not is_standard_form(cov):
        raise ValueError("optical covariance is not in standard form")
    q, p = cov[0::2, 0::2], cov[1::2, 1::2]
    beam = (q + p) / 2
    return InputCorrelators(
        occupations=np.diag(q) - 0.5,
        pair=(q - p) / 2,
        beam=beam,
        sideband_frequency=float(omega_m),
    )
