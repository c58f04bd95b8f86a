"""Logarithmic negativity, purity, and an audit of closed-form purity
expressions for the two-particle relational state.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .gaussian import (
    PHYSICAL_TOL,
    NumericFailure,
    SingleModeParams,
    check_cov,
    is_physical,
    num_modes,
    symplectic_eigenvalues,
)
from .partition import ParticleSystem, cmr_cov, relational_cov

SEPARABILITY_EPS = 1e-12
AUDIT_REL_TOL = 1e-6


@dataclass(frozen=True)
class Bipartition:
    """Split of the modes into two non-empty complementary sets.

    The partial transpose acts on ``modes_b``.
    """

    modes_a: frozenset[int]
    modes_b: frozenset[int]

    def __post_init__(self):
        a, b = frozenset(self.modes_a), frozenset(self.modes_b)
        if not a or not b:
            raise ValueError("both sides of a bipartition must be non-empty")
        if a & b:
            raise ValueError(f"modes {sorted(a & b)} appear on both sides")
        object.__setattr__(self, "modes_a", a)
        object.__setattr__(self, "modes_b", b)

    @classmethod
    def split(cls, n: int, modes_b: Iterable[int]) -> Bipartition:
        """Transpose ``modes_b``; everything else among ``n`` modes goes to side A."""
        b = frozenset(modes_b)
        return cls(frozenset(range(n)) - b, b)

    def check(self, n: int) -> None:
        if self.modes_a | self.modes_b != frozenset(range(n)):
            raise ValueError(f"bipartition {self} does not cover modes 0..{n - 1}")


def partial_transpose(V, bipartition: Bipartition) -> np.ndarray:
    """Flip the sign of the momentum quadratures of ``bipartition.modes_b``."""
    V = check_cov(V)
    n = num_modes(V)
    bipartition.check(n)
    signs = np.ones(2 * n)
    for k in bipartition.modes_b:
        signs[2 * k + 1] = -1.0
    return signs[:, None] * V * signs[None, :]


def log_negativity(V, bipartition: Bipartition, tol: float = PHYSICAL_TOL) -> float:
    """Logarithmic negativity (natural log) across ``bipartition``.

    Symplectic eigenvalues of the partial transpose within
    ``SEPARABILITY_EPS`` of 1 contribute nothing.
    """
    V = check_cov(V)
    if not is_physical(V, tol):
        raise ValueError("covariance matrix is not physical")
    nu = symplectic_eigenvalues(partial_transpose(V, bipartition))
    small = nu[nu < 1.0 - SEPARABILITY_EPS]
    return float(-np.sum(np.log(small))) if small.size else 0.0


def purity(V) -> float:
    """``1 / sqrt(det V)``; equals ``tr rho^2`` with vacuum = identity."""
    V = check_cov(V)
    sign, logdet = np.linalg.slogdet(V)
    if sign <= 0 or not np.isfinite(logdet):
        raise NumericFailure("covariance matrix has non-positive determinant")
    return float(np.exp(-0.5 * logdet))


def cm_relative_cut(n_particles: int) -> Bipartition:
    """Centre of mass (mode 0) against all relative modes; the centre of mass is transposed."""
    return Bipartition(frozenset(range(1, n_particles)), frozenset({0}))


# ---------------------------------------------------------------------------
# Closed-form purity expressions for two particles. Each is evaluated exactly
# as written, including known errors; none is corrected here.
# ---------------------------------------------------------------------------


def _fg(p: SingleModeParams):
    ch, sh = np.cosh(2 * p.r), np.sinh(2 * p.r)
    c2 = np.cos(2 * p.theta)
    return ch - c2 * sh, ch + c2 * sh, np.sin(2 * p.theta) * sh


def closed_form_general_purity(m1, m2, p1: SingleModeParams, p2: SingleModeParams) -> float:
    """Closed-form expression for the relational purity, arbitrary mixed inputs."""
    a, b = m1 / (m1 + m2), m2 / (m1 + m2)
    u1, u2 = p1.mu, p2.mu
    f1m, f1p, g1 = _fg(p1)
    f2m, f2p, g2 = _fg(p2)
    bracket = (
        u2**2 * b**2 * f1m * f1p
        + u1 * u2 * (a**2 * f1m * f2p + b**2 * f1p * f2m)
        + u1**2 * a**2 * f2m * f2p
        - u2**2 * b**2 * g1**2
        + 2 * u1 * u2 * a * b * g1 * g2
        - u1**2 * a**2 * g2**2
    )
    return u1 * u2 * bracket**-0.5


def closed_form_pure_inverse_sq(m1, m2, p1: SingleModeParams, p2: SingleModeParams) -> float:
    """Closed-form expansion of the inverse squared relational purity, pure inputs."""
    a, b = m1 / (m1 + m2), m2 / (m1 + m2)
    s1, c1 = np.sinh(2 * p1.r), np.cosh(2 * p1.r)
    s2, c2 = np.sinh(2 * p2.r), np.cosh(2 * p2.r)
    t1, t2 = p1.theta, p2.theta
    return (
        (b - a) * (s1 * c2 * np.cos(2 * t1) - s2 * c1 * np.cos(2 * t2))
        + (2 * a * b + 1) * c1 * c2
        - s1 * s2 * (2 * a * b * np.cos(2 * (t1 + t2)) + np.cos(2 * t1) * np.cos(2 * t2))
        + a**2
        + b**2
    )


def closed_form_equal_mass_inverse_sq(p1: SingleModeParams, p2: SingleModeParams) -> float:
    """Closed-form inverse squared relational purity for equal masses, pure inputs."""
    r1, r2 = p1.r, p2.r
    return 0.25 * (
        -2 * np.sinh(2 * r1) * np.sinh(2 * r2) * np.cos(2 * (p1.theta - p2.theta))
        + np.cosh(2 * (r1 - r2))
        + np.cosh(2 * (r1 + r2))
        + 2
    )


def closed_form_identical_inverse_sq(m1, m2, r, theta) -> float:
    """Closed-form inverse squared relational purity for identical pure inputs."""
    tot2 = (m1 + m2) ** 2
    s = (m1**2 + m2**2) / tot2
    return 2 * s + np.sin(2 * theta) ** 2 * (s * np.sinh(2 * r) ** 2 - 2 * m1 * m2 / tot2)


def closed_form_infinite_mass_inverse_sq(r, theta) -> float:
    """Closed-form limit of the identical-input expression as one mass diverges."""
    return 2 + np.sinh(2 * r) ** 2 * np.cos(2 * theta) ** 2


def pipeline_relational_purity(m1, m2, p1: SingleModeParams, p2: SingleModeParams) -> float:
    return purity(relational_cov(ParticleSystem((m1, m2)), [p1, p2]))


# ---------------------------------------------------------------------------
# Audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditRecord:
    formula: str
    samples: int
    grid: str
    max_rel_dev: float
    status: str
    note: str = ""


@dataclass
class AuditReport:
    seed: int
    records: list[AuditRecord] = field(default_factory=list)

    def __getitem__(self, name: str) -> AuditRecord:
        for rec in self.records:
            if rec.formula == name:
                return rec
        raise KeyError(name)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["formula", "samples", "max_rel_dev", "status"])
        for rec in self.records:
            w.writerow([rec.formula, rec.samples, repr(float(rec.max_rel_dev)), rec.status])
        return buf.getvalue()

    def to_text(self) -> str:
        head = f"{'formula':<16} {'samples':>7} {'max_rel_dev':>24}  {'status':<8} grid"
        lines = [f"purity formula audit (seed={self.seed})", head, "-" * len(head)]
        for rec in self.records:
            lines.append(
                f"{rec.formula:<16} {rec.samples:>7} {rec.max_rel_dev:>24.17g}  {rec.status:<8} {rec.grid}"
            )
            if rec.note:
                lines.append(f"{'':<16} note: {rec.note}")
        return "\n".join(lines) + "\n"


def _draw(rng: np.random.Generator, pure: bool) -> SingleModeParams:
    mu = 1.0 if pure else rng.uniform(0.1, 1.0)
    return SingleModeParams(mu, rng.uniform(-2.0, 2.0), rng.uniform(0.0, np.pi / 4))


def _record(name, grid, ratios, note="") -> AuditRecord:
    dev = float(np.max(ratios))
    status = "match" if dev <= AUDIT_REL_TOL else "mismatch"
    return AuditRecord(name, len(ratios), grid, dev, status, note)


def _rel(x, ref) -> float:
    return abs(x - ref) / abs(ref)


def _product_rule(rng, samples) -> AuditRecord:
    devs = []
    for _ in range(samples):
        m1 = rng.uniform(0.01, 0.99)
        p1, p2 = _draw(rng, False), _draw(rng, False)
        V = cmr_cov(ParticleSystem((m1, 1 - m1)), [p1, p2])
        devs.append(_rel(purity(V), p1.mu * p2.mu))
    return _record("product_rule", "mu in [0.1,1], r in [-2,2], theta in [0,pi/4], m1/M in [0.01,0.99]", devs)


def _general(rng, samples) -> AuditRecord:
    devs = []
    for _ in range(samples):
        m1 = rng.uniform(0.01, 0.99)
        p1, p2 = _draw(rng, False), _draw(rng, False)
        devs.append(_rel(closed_form_general_purity(m1, 1 - m1, p1, p2), pipeline_relational_purity(m1, 1 - m1, p1, p2)))
    return _record("general", "mu in [0.1,1], r in [-2,2], theta in [0,pi/4], m1/M in [0.01,0.99]", devs)


def _pure_case(rng, samples) -> AuditRecord:
    devs = []
    for _ in range(samples):
        m1 = rng.uniform(0.01, 0.99)
        p1, p2 = _draw(rng, True), _draw(rng, True)
        ref = pipeline_relational_purity(m1, 1 - m1, p1, p2) ** -2
        devs.append(_rel(closed_form_pure_inverse_sq(m1, 1 - m1, p1, p2), ref))
    return _record("pure_case", "mu=1, r in [-2,2], theta in [0,pi/4], m1/M in [0.01,0.99]", devs)


def _equal_mass(rng, samples) -> AuditRecord:
    devs = []
    for _ in range(samples):
        p1, p2 = _draw(rng, True), _draw(rng, True)
        ref = pipeline_relational_purity(1.0, 1.0, p1, p2) ** -2
        devs.append(_rel(closed_form_equal_mass_inverse_sq(p1, p2), ref))
    return _record("equal_mass", "mu=1, m1=m2, r in [-2,2], theta in [0,pi/4]", devs)


def _identical(rng, samples) -> AuditRecord:
    devs = []
    for _ in range(samples):
        m1 = rng.uniform(0.01, 0.99)
        p = _draw(rng, True)
        ref = pipeline_relational_purity(m1, 1 - m1, p, p) ** -2
        devs.append(_rel(closed_form_identical_inverse_sq(m1, 1 - m1, p.r, p.theta), ref))
    return _record("identical", "mu=1, r1=r2 in [-2,2], theta1=theta2 in [0,pi/4], m1/M in [0.01,0.99]", devs)


def _infinite_mass(rng, samples) -> AuditRecord:
    eps = (1e-4, 1e-6)
    devs = []
    for _ in range(samples):
        p = _draw(rng, True)
        vals = [pipeline_relational_purity(e, 1 - e, p, p) ** -2 for e in eps]
        # linear extrapolation in the light-particle fraction to zero
        limit = (eps[0] * vals[1] - eps[1] * vals[0]) / (eps[0] - eps[1])
        devs.append(_rel(closed_form_infinite_mass_inverse_sq(p.r, p.theta), limit))
    return _record(
        "infinite_mass",
        "mu=1, r1=r2 in [-2,2], theta1=theta2 in [0,pi/4], m2/M in {1-1e-4, 1-1e-6}",
        devs,
        note="pipeline extrapolated linearly in m1/M to 0 from the two sampled mass ratios",
    )


AUDITS: dict[str, Callable[[np.random.Generator, int], AuditRecord]] = {
    "product_rule": _product_rule,
    "general": _general,
    "pure_case": _pure_case,
    "equal_mass": _equal_mass,
    "identical": _identical,
    "infinite_mass": _infinite_mass,
}


def audit_purity_formulas(seed: int = 1, samples: int = 1000) -> AuditReport:
    """Compare each closed-form purity expression against the matrix pipeline.

    Every expression gets its own generator spawned from ``seed`` so a record
    does not depend on which other records were computed. A record is a
    ``mismatch`` when the largest relative deviation exceeds ``1e-6``;
    mismatches are reported, not raised.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    children = np.random.SeedSequence(seed).spawn(len(AUDITS))
    report = AuditReport(seed)
    for child, audit in zip(children, AUDITS.values()):
        report.records.append(audit(np.random.default_rng(child), samples))
    return report
