"""Gaussian states in phase space.

Conventions: hbar = 1, the vacuum covariance matrix is the identity, and
phase-space vectors are ordered (q_1, p_1, ..., q_n, p_n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-9
PAIRING_TOL = 1e-9


class NumericFailure(ArithmeticError):
    """Raised when a linear-algebra routine cannot produce a trustworthy result."""


@dataclass(frozen=True)
class SingleModeParams:
    """Purity ``mu``, squeezing ``r`` and phase rotation ``theta`` of one mode.

    ``theta`` may take any real value; [0, pi/4] is the canonical range.
    """

    mu: float = 1.0
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"purity must lie in (0, 1], got {self.mu}")


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = check_cov(self.cov)
        if mean.shape != (cov.shape[0],):
            raise ValueError(
                f"mean has length {mean.size}, expected {cov.shape[0]} for {num_modes(cov)} modes"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return num_modes(self.cov)

    @classmethod
    def vacuum(cls, n: int) -> GaussianState:
        return cls(np.zeros(2 * n), np.eye(2 * n))


def num_modes(V: np.ndarray) -> int:
    return V.shape[0] // 2


def check_cov(V) -> np.ndarray:
    """Return ``V`` as a float array after checking shape and symmetry."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2 or V.shape[0] == 0:
        raise ValueError(f"covariance matrix must be 2n x 2n with n >= 1, got shape {V.shape}")
    scale = max(1.0, float(np.max(np.abs(V))))
    if np.max(np.abs(V - V.T)) > SYMMETRY_TOL * scale:
        raise ValueError("covariance matrix is not symmetric")
    return V


def symplectic_form(n: int) -> np.ndarray:
    """Block-diagonal symplectic form for ``n`` modes in interleaved ordering."""
    if int(n) != n or n < 1:
        raise ValueError(f"mode count must be a positive integer, got {n}")
    return np.kron(np.eye(int(n)), OMEGA)


def rotation(theta: float) -> np.ndarray:
    """Phase rotation ``[[cos, sin], [-sin, cos]]`` as used in :func:`single_mode_cov`."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def single_mode_cov(p: SingleModeParams) -> np.ndarray:
    r"""Covariance matrix :math:`\frac{1}{\mu} R(\theta) S(2r) R(\theta)^T`.

    ``S(2r) = diag(e^{-2r}, e^{2r})`` squeezes the position quadrature for
    ``r > 0``. The entries are evaluated in closed form rather than by
    multiplying the three matrices, which keeps the determinant at
    ``1/mu**2`` to rounding.
    """
    if not 0.0 < p.mu <= 1.0:
        raise ValueError(f"purity must lie in (0, 1], got {p.mu}")
    ch, sh = np.cosh(2 * p.r), np.sinh(2 * p.r)
    c2, s2 = np.cos(2 * p.theta), np.sin(2 * p.theta)
    off = s2 * sh
    return np.array([[ch - c2 * sh, off], [off, ch + c2 * sh]]) / p.mu


def direct_sum(*blocks) -> np.ndarray:
    """Block-diagonal concatenation of covariance matrices."""
    blocks = [check_cov(b) for b in blocks]
    dim = sum(b.shape[0] for b in blocks)
    out = np.zeros((dim, dim))
    k = 0
    for b in blocks:
        d = b.shape[0]
        out[k : k + d, k : k + d] = b
        k += d
    return out


def symplectic_eigenvalues(V) -> np.ndarray:
    """Symplectic spectrum of ``V``, one value per mode, in descending order.

    The eigenvalues of the real matrix ``Omega V`` are ``+/- i nu_k``; their
    moduli are sorted and paired. A pair that disagrees by more than
    ``PAIRING_TOL`` (relative) signals a matrix without a proper symplectic
    spectrum and raises :class:`NumericFailure`.
    """
    V = check_cov(V)
    n = num_modes(V)
    try:
        ev = np.linalg.eigvals(symplectic_form(n) @ V)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"eigen-solver failed: {exc}") from exc
    if not np.all(np.isfinite(ev)):
        raise NumericFailure("eigen-solver returned non-finite values")
    mods = np.sort(np.abs(ev))[::-1]
    first, second = mods[0::2], mods[1::2]
    if np.any(np.abs(first - second) > PAIRING_TOL * np.maximum(1.0, first)):
        raise NumericFailure("eigenvalues of Omega V do not pair up into a symplectic spectrum")
    return 0.5 * (first + second)


def is_physical(V, tol: float = PHYSICAL_TOL) -> bool:
    """True iff every symplectic eigenvalue is at least ``1 - tol``."""
    V = check_cov(V)
    # positive definiteness first: an indefinite V can still have moduli >= 1
    if np.linalg.eigvalsh(V)[0] <= 0:
        return False
    return bool(symplectic_eigenvalues(V)[-1] >= 1.0 - tol)


def wigner_eval(state: GaussianState, x):
    """Gaussian Wigner function of ``state`` at phase-space point(s) ``x``.

    ``x`` has shape ``(2n,)`` or ``(..., 2n)``; a float is returned for a
    single point and an array of shape ``x.shape[:-1]`` otherwise.
    """
    x = np.asarray(x, dtype=float)
    dim = state.mean.shape[0]
    if x.ndim == 0 or x.shape[-1] != dim:
        raise ValueError(f"points must have trailing dimension {dim}, got shape {x.shape}")
    V = state.cov
    sign, logdet = np.linalg.slogdet(V)
    if sign <= 0 or not np.isfinite(logdet):
        raise NumericFailure("covariance matrix is singular or not positive definite")
    try:
        Vinv = np.linalg.inv(V)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"covariance matrix is singular: {exc}") from exc
    d = x - state.mean
    quad = np.einsum("...i,ij,...j->...", d, Vinv, d)
    w = np.exp(-0.5 * quad - 0.5 * logdet) / (2 * np.pi) ** state.n_modes
    return float(w) if x.ndim == 1 else w
