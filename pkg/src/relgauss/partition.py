"""Change of coordinates from per-particle phase space to centre of mass
plus relative coordinates, for N particles on a line.

Given masses m_1..m_N (total M, fractions mt_i = m_i / M) and a reference
particle, the new coordinates are, in order::

    x_cm = sum_n mt_n x_n          p_cm = sum_n p_n
    x_{i|ref} = x_i - x_ref        p_{i|ref} = p_i - mt_i * sum_k p_k

for every i != ref in increasing order. This choice keeps every pair
canonical, so the matrix is symplectic. All indices are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gaussian import SingleModeParams, check_cov, direct_sum, num_modes, single_mode_cov


@dataclass(frozen=True)
class ParticleSystem:
    masses: tuple[float, ...]
    reference: int = 0

    def __post_init__(self):
        masses = tuple(float(m) for m in self.masses)
        if len(masses) < 2:
            raise ValueError("need at least two particles")
        if not all(m > 0 and math.isfinite(m) for m in masses):
            raise ValueError(f"masses must be finite and strictly positive, got {masses}")
        if not 0 <= self.reference < len(masses):
            raise ValueError(f"reference index {self.reference} out of range for {len(masses)} particles")
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_fractions(cls, fractions: Sequence[float], reference: int = 0) -> ParticleSystem:
        """Build a system from mass fractions; the total mass is irrelevant here."""
        return cls(tuple(fractions), reference)

    @property
    def n_particles(self) -> int:
        return len(self.masses)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.masses)

    @property
    def mass_fractions(self) -> np.ndarray:
        return np.array(self.masses) / self.total_mass

    @property
    def relative_particles(self) -> list[int]:
        return [i for i in range(self.n_particles) if i != self.reference]


@dataclass(frozen=True)
class PartitionTransform:
    """Symplectic matrix acting on external phase-space coordinates."""

    matrix: np.ndarray

    @property
    def n_particles(self) -> int:
        return self.matrix.shape[0] // 2

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def cmr_matrix(system: ParticleSystem) -> PartitionTransform:
    """Centre-of-mass / relative coordinate change for ``system``.

    Rows come in (position, momentum) pairs: the centre of mass first, then
    one pair per non-reference particle.
    """
    return cmr_matrix_from_fractions(system.mass_fractions, system.reference)


def cmr_matrix_from_fractions(fractions, reference: int = 0) -> PartitionTransform:
    """Same as :func:`cmr_matrix` but from mass fractions directly.

    Zero fractions are allowed, which gives the limit of a massless particle.
    """
    mt = np.asarray(fractions, dtype=float)
    n = mt.size
    if n < 2 or np.any(mt < 0) or abs(math.fsum(mt) - 1.0) > 1e-12:
        raise ValueError(f"need at least two non-negative mass fractions summing to 1, got {mt}")
    if not 0 <= reference < n:
        raise ValueError(f"reference index {reference} out of range for {n} particles")
    T = np.zeros((2 * n, 2 * n))
    T[0, 0::2] = mt
    T[1, 1::2] = 1.0
    others = [i for i in range(n) if i != reference]
    for row, i in enumerate(others, start=1):
        T[2 * row, 2 * i] = 1.0
        T[2 * row, 2 * reference] = -1.0
        T[2 * row + 1, 1::2] = -mt[i]
        T[2 * row + 1, 2 * i + 1] += 1.0
    return PartitionTransform(T)


def _as_matrix(T) -> np.ndarray:
    return np.asarray(getattr(T, "matrix", T), dtype=float)


def transform_cov(V, T) -> np.ndarray:
    """Congruence ``T V T^T``."""
    V = check_cov(V)
    M = _as_matrix(T)
    if M.shape != V.shape:
        raise ValueError(f"transform shape {M.shape} does not match covariance shape {V.shape}")
    out = M @ V @ M.T
    return 0.5 * (out + out.T)


def transform_mean(mean, T) -> np.ndarray:
    mean = np.asarray(mean, dtype=float)
    M = _as_matrix(T)
    if mean.shape != (M.shape[1],):
        raise ValueError(f"mean has shape {mean.shape}, transform expects length {M.shape[1]}")
    return M @ mean


def delete_modes(V, modes: Iterable[int]) -> np.ndarray:
    """Covariance matrix of the modes not listed in ``modes``.

    Dropping rows and columns is the Gaussian partial trace.
    """
    V = check_cov(V)
    n = num_modes(V)
    drop = set(int(k) for k in modes)
    if not drop:
        raise ValueError("no modes to delete")
    if not drop <= set(range(n)):
        raise ValueError(f"mode indices {sorted(drop)} out of range for {n} modes")
    if len(drop) == n:
        raise ValueError("cannot delete every mode")
    keep = [k for k in range(n) if k not in drop]
    idx = np.array([[2 * k, 2 * k + 1] for k in keep]).ravel()
    return V[np.ix_(idx, idx)]


def external_cov(per_particle: Sequence[SingleModeParams]) -> np.ndarray:
    """Product-state covariance: direct sum of single-mode covariances."""
    return direct_sum(*(single_mode_cov(p) for p in per_particle))


def cmr_cov(system: ParticleSystem, per_particle: Sequence[SingleModeParams]) -> np.ndarray:
    """Covariance of a product state expressed in centre-of-mass/relative coordinates."""
    if len(per_particle) != system.n_particles:
        raise ValueError(
            f"got {len(per_particle)} single-mode states for {system.n_particles} particles"
        )
    return transform_cov(external_cov(per_particle), cmr_matrix(system))


def relational_cov(system: ParticleSystem, per_particle: Sequence[SingleModeParams]) -> np.ndarray:
    """Reduced covariance of the relative coordinates (centre of mass traced out)."""
    return delete_modes(cmr_cov(system, per_particle), [0])
