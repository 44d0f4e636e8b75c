"""Symplectic linear algebra and entanglement measures for Gaussian states.

Covariance matrices use the ordering (q1, p1, q2, p2, ...) and the convention
that the vacuum has covariance I/2.  Mode indices are zero-based.
"""
from __future__ import annotations

from collections.abc import Iterable

import numpy as np
from scipy.linalg import expm

from .errors import UnphysicalStateError

VACUUM_VARIANCE = 0.5
PHYSICAL_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    if n_modes < 1:
        raise ValueError("n_modes must be a positive integer")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def vacuum(n_modes: int) -> np.ndarray:
    return VACUUM_VARIANCE * np.eye(2 * n_modes)


def thermal(n_bar) -> np.ndarray:
    """Product of thermal states with the given mean occupations."""
    n_bar = np.atleast_1d(np.asarray(n_bar, dtype=float))
    return np.diag(np.repeat(n_bar + 0.5, 2))


def n_modes_of(cov: np.ndarray) -> int:
    cov = np.asarray(cov)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise ValueError(f"expected a 2N x 2N matrix, got shape {cov.shape}")
    return cov.shape[0] // 2


def is_symmetric(cov: np.ndarray, rtol: float = 1e-12) -> bool:
    cov = np.asarray(cov, dtype=float)
    scale = max(np.max(np.abs(cov)), 1.0)
    return bool(np.max(np.abs(cov - cov.T)) <= rtol * scale)


def _check_candidate(cov) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    n_modes_of(cov)
    if not is_symmetric(cov):
        raise UnphysicalStateError("matrix not a valid covariance candidate: not symmetric")
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise UnphysicalStateError(
            "matrix not a valid covariance candidate: not positive definite"
        ) from None
    return cov


def symplectic_spectrum(cov) -> np.ndarray:
    """Symplectic eigenvalues of ``cov`` in descending order.

    The eigenvalues of ``i Omega cov`` come in pairs ``+-nu``; the moduli are
    sorted and each conjugate pair is averaged into one value.
    """
    cov = _check_candidate(cov)
    n = cov.shape[0] // 2
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ cov)))[::-1]
    return 0.5 * (moduli[0::2] + moduli[1::2])


def min_symplectic_eigenvalue(cov) -> float:
    return float(symplectic_spectrum(cov)[-1])


def is_physical(cov, tol: float = PHYSICAL_TOL) -> bool:
    """Uncertainty principle check: every symplectic eigenvalue >= 1/2 - tol."""
    try:
        return min_symplectic_eigenvalue(cov) >= VACUUM_VARIANCE - tol
    except (UnphysicalStateError, ValueError):
        return False


def _mode_set(modes, n: int) -> list[int]:
    if isinstance(modes, (int, np.integer)):
        modes = [modes]
    modes = sorted(set(int(m) for m in modes))
    if not modes or len(modes) >= n:
        raise ValueError(f"partition {modes} must be a nonempty proper subset of range({n})")
    if modes[0] < 0 or modes[-1] >= n:
        raise ValueError(f"mode index out of range for {n} modes: {modes}")
    return modes


def partial_transpose(cov, modes: int | Iterable[int]) -> np.ndarray:
    """Flip the momenta of ``modes``: returns P cov P with P diagonal of +-1."""
    cov = np.asarray(cov, dtype=float)
    n = n_modes_of(cov)
    signs = np.ones(2 * n)
    for m in _mode_set(modes, n):
        signs[2 * m + 1] = -1.0
    return cov * np.outer(signs, signs)


def min_pt_symplectic(cov, modes: int | Iterable[int]) -> float:
    """Smallest symplectic eigenvalue of the partially transposed matrix."""
    cov = _check_candidate(cov)
    pt = partial_transpose(cov, modes)
    n = cov.shape[0] // 2
    # pt is not positive-definite-checked: it is congruent to cov, hence PD
    return float(np.min(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ pt))))


def log_negativity_from_nu(nu: float) -> float:
    return max(0.0, -float(np.log(2.0 * nu)))


def log_negativity(cov, modes: int | Iterable[int] = 0, tol: float = PHYSICAL_TOL) -> float:
    """Logarithmic negativity across the bipartition ``modes | rest``."""
    if not is_physical(cov, tol):
        raise UnphysicalStateError("log_negativity requires a physical covariance matrix")
    return log_negativity_from_nu(min_pt_symplectic(cov, modes))


def purity(cov) -> float:
    cov = np.asarray(cov, dtype=float)
    n = n_modes_of(cov)
    return float(1.0 / (2.0**n * np.sqrt(np.linalg.det(cov))))


def reduce(cov, keep: int | Iterable[int]) -> np.ndarray:
    """Covariance of the reduced state on ``keep`` (partial trace)."""
    cov = np.asarray(cov, dtype=float)
    n = n_modes_of(cov)
    if isinstance(keep, (int, np.integer)):
        keep = [keep]
    keep = list(keep)
    if not keep:
        raise ValueError("keep must name at least one mode")
    if min(keep) < 0 or max(keep) >= n:
        raise ValueError(f"mode index out of range for {n} modes: {keep}")
    idx = [2 * m + k for m in keep for k in (0, 1)]
    return cov[np.ix_(idx, idx)].copy()


def random_symplectic(n_modes: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """exp(Omega H) for a random symmetric H: the flow of a quadratic Hamiltonian."""
    h = rng.normal(scale=scale, size=(2 * n_modes, 2 * n_modes))
    return expm(symplectic_form(n_modes) @ (h + h.T) / 2)


def random_physical_covariance(
    n_modes: int, rng: np.random.Generator, max_thermal: float = 3.0, scale: float = 0.5
) -> np.ndarray:
    """S diag(nu) S^T with random symplectic S and nu in [1/2, 1/2 + max_thermal]."""
    nu = 0.5 + rng.uniform(0.0, max_thermal, size=n_modes)
    s = random_symplectic(n_modes, rng, scale)
    cov = s @ np.diag(np.repeat(nu, 2)) @ s.T
    return (cov + cov.T) / 2
