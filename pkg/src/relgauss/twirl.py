"""Finite-dimensional group averages on a (centre of mass) x (relative) system.

The continuous translation and boost groups are replaced by the cyclic
group Z_d acting on a d-point momentum grid for the centre of mass:
translations multiply by momentum-dependent phases, boosts shift the
momentum label. Both act trivially on the relative factor. Mass plays no
role here; the continuum prefactor 2*pi/M becomes 1/d.

Composite indices are row-major: ``index = p_cm * d_r + p_r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_DIM = 256


@dataclass(frozen=True)
class FiniteBipartiteState:
    d_cm: int
    d_r: int
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        dim = self.d_cm * self.d_r
        if self.d_cm < 1 or self.d_r < 1:
            raise ValueError("dimensions must be positive")
        if rho.shape != (dim, dim):
            raise ValueError(f"rho has shape {rho.shape}, expected ({dim}, {dim})")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("rho is not Hermitian")
        if abs(np.trace(rho) - 1) > 1e-12:
            raise ValueError(f"rho has trace {np.trace(rho).real}, expected 1")
        if np.linalg.eigvalsh(rho)[0] < -1e-10:
            raise ValueError("rho is not positive semidefinite")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def product(cls, rho_cm, rho_r) -> FiniteBipartiteState:
        rho_cm, rho_r = np.asarray(rho_cm), np.asarray(rho_r)
        return cls(rho_cm.shape[0], rho_r.shape[0], np.kron(rho_cm, rho_r))

    @classmethod
    def random(cls, d_cm: int, d_r: int, rng: np.random.Generator, max_dim: int = MAX_DIM):
        """Mixed state drawn from the Hilbert-Schmidt (Ginibre) ensemble."""
        dim = d_cm * d_r
        if dim > max_dim:
            raise ValueError(f"d_cm * d_r = {dim} exceeds the cap of {max_dim}")
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = g @ g.conj().T
        rho = 0.5 * (rho + rho.conj().T)
        return cls(d_cm, d_r, rho / np.trace(rho).real)


@dataclass(frozen=True)
class FiniteGroupAction:
    """Unitary representation of a finite group, one matrix per element."""

    unitaries: tuple[np.ndarray, ...]

    def __post_init__(self):
        us = tuple(np.asarray(u, dtype=complex) for u in self.unitaries)
        if not us:
            raise ValueError("group action needs at least one element")
        dim = us[0].shape[0]
        for u in us:
            if u.shape != (dim, dim):
                raise ValueError("all unitaries must share one square shape")
            if np.max(np.abs(u @ u.conj().T - np.eye(dim))) > 1e-12:
                raise ValueError("matrix is not unitary")
        object.__setattr__(self, "unitaries", us)

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]

    def __len__(self):
        return len(self.unitaries)


def translation_action(d_cm: int, d_r: int) -> FiniteGroupAction:
    """Z_d acting by phases exp(-2 pi i g p / d) on the centre-of-mass momentum."""
    p = np.arange(d_cm)
    eye_r = np.eye(d_r)
    return FiniteGroupAction(
        tuple(np.kron(np.diag(np.exp(-2j * np.pi * g * p / d_cm)), eye_r) for g in range(d_cm))
    )


def boost_action(d_cm: int, d_r: int) -> FiniteGroupAction:
    """Z_d acting by cyclic shifts |p> -> |p + h mod d> of the centre-of-mass momentum."""
    shift = np.roll(np.eye(d_cm), 1, axis=0)
    eye_r = np.eye(d_r)
    return FiniteGroupAction(
        tuple(np.kron(np.linalg.matrix_power(shift, h), eye_r) for h in range(d_cm))
    )


def _group_sum(rho: np.ndarray, action: FiniteGroupAction) -> np.ndarray:
    out = np.zeros_like(rho)
    for u in action.unitaries:
        out += u @ rho @ u.conj().T
    return out


def compact_twirl(rho, action: FiniteGroupAction) -> np.ndarray:
    """Uniform average of ``U(g) rho U(g)^dagger`` over the group."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (action.dim, action.dim):
        raise ValueError(f"rho has shape {rho.shape}, group acts on dimension {action.dim}")
    return _group_sum(rho, action) / len(action)


def translation_twirl(state: FiniteBipartiteState) -> FiniteBipartiteState:
    """Dephase the centre-of-mass momentum: only p_cm == p_cm' blocks survive."""
    rho = compact_twirl(state.rho, translation_action(state.d_cm, state.d_r))
    return FiniteBipartiteState(state.d_cm, state.d_r, rho)


def boost_twirl(state: FiniteBipartiteState) -> FiniteBipartiteState:
    rho = compact_twirl(state.rho, boost_action(state.d_cm, state.d_r))
    return FiniteBipartiteState(state.d_cm, state.d_r, rho)


def relational_state(state: FiniteBipartiteState) -> np.ndarray:
    """Partial trace over the centre-of-mass factor."""
    t = state.rho.reshape(state.d_cm, state.d_r, state.d_cm, state.d_r)
    return np.einsum("iaib->ab", t)


def twirl_identity_deviation(state: FiniteBipartiteState) -> float:
    """Largest elementwise gap between the composed twirl and ``I/d_cm (x) tr_cm rho``."""
    lhs = boost_twirl(translation_twirl(state)).rho
    rhs = np.kron(np.eye(state.d_cm) / state.d_cm, relational_state(state))
    return float(np.max(np.abs(lhs - rhs)))


def divergence_scan(
    state: FiniteBipartiteState, dims: Sequence[int], max_dim: int = MAX_DIM
) -> list[tuple[int, float]]:
    """Trace of the composed twirl without the 1/|G|^2 normalisation.

    The relative factor of ``state`` is kept; for each ``d`` in ``dims`` the
    centre of mass is re-prepared in the uniform superposition over the
    ``d`` momentum points. The trace equals ``d**2`` and so grows without
    bound with the size of the group.
    """
    rho_r = relational_state(state)
    rows = []
    for d in dims:
        d = int(d)
        if d < 1 or d * state.d_r > max_dim:
            raise ValueError(f"d_cm = {d} invalid for d_r = {state.d_r} under the cap {max_dim}")
        plus = np.full(d, 1 / np.sqrt(d))
        rho = np.kron(np.outer(plus, plus), rho_r)
        inner = _group_sum(rho, translation_action(d, state.d_r))
        total = _group_sum(inner, boost_action(d, state.d_r))
        rows.append((d, float(np.trace(total).real)))
    return rows
