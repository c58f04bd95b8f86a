"""Parameter sweeps over masses, squeezing, rotation and purity.

Rows are produced in nested-loop order over the grid axes, in the order of
the output columns, so repeated runs give identical files.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .entanglement import Bipartition, cm_relative_cut, log_negativity, purity
from .gaussian import SingleModeParams
from .partition import ParticleSystem, cmr_cov, delete_modes
from .twirl import MAX_DIM, FiniteBipartiteState, divergence_scan, twirl_identity_deviation

SWEEP2_COLUMNS = ("mass_ratio", "r1", "r2", "theta1", "theta2", "mu1", "mu2", "logneg_cmr", "purity_rel")
SWEEP3_COLUMNS = ("m1_ratio", "m2_ratio", "r", "theta", "logneg_cmr", "logneg_rel")
DIVERGENCE_COLUMNS = ("d_cm", "trace")


def inclusive_range(lo: float, hi: float, step: float) -> list[float]:
    """Grid ``lo, lo+step, ..., hi`` with values rounded to 12 decimals."""
    if step <= 0 or hi < lo:
        raise ValueError(f"bad range {lo}:{hi}:{step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


DEFAULT_MASS_RATIOS = tuple(inclusive_range(0.01, 0.99, 0.01))
DEFAULT_R = tuple(inclusive_range(0.0, 2.0, 0.05))
DEFAULT_THETA = (0.0, math.pi / 32, math.pi / 8, math.pi / 4)
DEFAULT_ALPHA = (0.0, 0.5, 1.0)


@dataclass
class SweepConfig:
    """Grid for a two- or three-particle sweep.

    ``purity2=None`` gives both particles the purity from ``purity``.
    ``mass_ratios2=None`` (three particles) splits the remaining mass equally
    between particles 2 and 3.
    """

    n_particles: int = 2
    mass_ratios: Sequence[float] = DEFAULT_MASS_RATIOS
    mass_ratios2: Sequence[float] | None = None
    r: Sequence[float] = DEFAULT_R
    theta: Sequence[float] = DEFAULT_THETA
    purity: Sequence[float] = (1.0,)
    purity2: Sequence[float] | None = None
    alpha: Sequence[float] = DEFAULT_ALPHA

    def validate(self) -> None:
        if self.n_particles not in (2, 3):
            raise ValueError("n_particles must be 2 or 3")
        grids = {"mass ratio": self.mass_ratios, "r": self.r, "theta": self.theta,
                 "purity": self.purity, "alpha": self.alpha}
        if self.mass_ratios2 is not None:
            grids["second mass ratio"] = self.mass_ratios2
        if self.purity2 is not None:
            grids["second purity"] = self.purity2
        for name, grid in grids.items():
            if len(grid) == 0:
                raise ValueError(f"{name} grid is empty")
            if not all(math.isfinite(v) for v in grid):
                raise ValueError(f"{name} grid contains non-finite values")
        for m in list(self.mass_ratios) + list(self.mass_ratios2 or ()):
            if not 0 < m < 1:
                raise ValueError(f"mass ratio {m} outside (0, 1)")
        for mu in list(self.purity) + list(self.purity2 or ()):
            if not 0 < mu <= 1:
                raise ValueError(f"purity {mu} outside (0, 1]")
        if self.n_particles == 3 and self.mass_ratios2 is not None:
            if not any(a + b < 1 for a in self.mass_ratios for b in self.mass_ratios2):
                raise ValueError("no pair of mass ratios sums below 1")


def fmt(x) -> str:
    """Integers as-is, floats as the shortest decimal that round-trips."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def rows_to_csv(columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def sweep2_point(mass_ratio, r1, r2, theta, mu1, mu2) -> tuple[float, float]:
    """Centre-of-mass/relative log-negativity and relational purity for two particles."""
    system = ParticleSystem((mass_ratio, 1.0 - mass_ratio))
    V = cmr_cov(system, [SingleModeParams(mu1, r1, theta), SingleModeParams(mu2, r2, theta)])
    return log_negativity(V, cm_relative_cut(2)), purity(delete_modes(V, [0]))


def sweep3_point(m1_ratio, m2_ratio, r, theta) -> tuple[float, float]:
    """Log-negativities for three identical pure particles.

    Returns the centre of mass against both relative modes, then relative
    mode 2|1 against 3|1 inside the reduced relational state.
    """
    system = ParticleSystem((m1_ratio, m2_ratio, 1.0 - m1_ratio - m2_ratio))
    p = SingleModeParams(1.0, r, theta)
    V = cmr_cov(system, [p, p, p])
    rel = delete_modes(V, [0])
    return (
        log_negativity(V, cm_relative_cut(3)),
        log_negativity(rel, Bipartition(frozenset({0}), frozenset({1}))),
    )


def run_sweep2(cfg: SweepConfig) -> Iterator[tuple[float, ...]]:
    if cfg.n_particles != 2:
        raise ValueError("run_sweep2 needs n_particles = 2")
    cfg.validate()
    for m in cfg.mass_ratios:
        for r in cfg.r:
            for alpha in cfg.alpha:
                for theta in cfg.theta:
                    for mu1 in cfg.purity:
                        for mu2 in cfg.purity2 if cfg.purity2 is not None else (mu1,):
                            r2 = alpha * r
                            en, pur = sweep2_point(m, r, r2, theta, mu1, mu2)
                            yield (m, r, r2, theta, theta, mu1, mu2, en, pur)


def run_sweep3(cfg: SweepConfig) -> Iterator[tuple[float, ...]]:
    """Grid points whose first two mass ratios do not sum below 1 are skipped."""
    if cfg.n_particles != 3:
        raise ValueError("run_sweep3 needs n_particles = 3")
    cfg.validate()
    for m1 in cfg.mass_ratios:
        second = cfg.mass_ratios2 if cfg.mass_ratios2 is not None else ((1.0 - m1) / 2,)
        for m2 in second:
            if m1 + m2 >= 1:
                continue
            for r in cfg.r:
                for theta in cfg.theta:
                    yield (m1, m2, r, theta, *sweep3_point(m1, m2, r, theta))


def run_twirl_demo(d_cm: int, d_r: int, seed: int, dims: Sequence[int] | None = None,
                   max_dim: int = MAX_DIM) -> tuple[str, str]:
    """Return the summary text and the divergence-scan CSV.

    ``dims`` defaults to every centre-of-mass dimension from 2 to ``d_cm``.
    """
    if d_cm < 2 or d_r < 1:
        raise ValueError("need d_cm >= 2 and d_r >= 1")
    if d_cm * d_r > max_dim:
        raise ValueError(f"d_cm * d_r = {d_cm * d_r} exceeds the cap of {max_dim}")
    rng = np.random.default_rng(seed)
    state = FiniteBipartiteState.random(d_cm, d_r, rng, max_dim)
    dev = twirl_identity_deviation(state)
    dims = list(dims) if dims is not None else list(range(2, d_cm + 1))
    table = divergence_scan(state, dims, max_dim)
    text = (
        f"twirl demo: d_cm={d_cm} d_r={d_r} seed={seed}\n"
        f"max |boost(translation(rho)) - I/d_cm (x) tr_cm rho| = {dev:.3e}\n"
        + "".join(f"unnormalised trace at d_cm={d}: {fmt(t)}\n" for d, t in table)
    )
    return text, rows_to_csv(DIVERGENCE_COLUMNS, table)
