"""Closed-form equilibria, linearization, and per-mode stability analysis.

The two-species reaction vector (human density x3 held fixed) is

    f1 = x1 (1 - x1 - c x2 / (x1 + alpha x2) - h1 x3)
    f2 = x2 (-d + m x1 / (x1 + alpha x2) - h2 x3)

Spatial no-flux eigenmodes decouple the linearization into 2x2 blocks

    L_n = -diag(d1, d2) * lambda_n + J,   lambda_n = n^2,

with J the reaction Jacobian at the equilibrium.  The margin-based
classification below reproduces the coarse sufficient/necessary rule in
terms of lambda_1 (d1 + d2); ``turing_scan`` computes the exact per-mode
eigenvalues.  The two can disagree: the margin rule declares some
parameter sets unstable whose mode eigenvalues all have negative real
part (see ``StabilityReport.modes_max_real`` vs ``verdict``); reports
carry both so the disagreement is visible rather than hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConditionViolated, RatioSingular
from .params import ModelParams, check_e1_condition, check_e2_condition

__all__ = [
    "Equilibrium",
    "ModeData",
    "StabilityReport",
    "equilibrium_e1",
    "equilibrium_e2",
    "reaction_jacobian",
    "mode_matrix",
    "classify_e1",
    "classify_e2",
    "turing_scan",
    "spectral_radius",
    "closed_form_det_trace_e1",
]

RATIO_GUARD = 1e-12

DEFAULT_N_MAX = 32


@dataclass(frozen=True)
class Equilibrium:
    """Constant coexistence state (u = fish, v = boyciana)."""

    u: float
    v: float
    kind: str  # "e1" (human-free) or "e2" (uniform human density 1)


@dataclass(frozen=True)
class ModeData:
    """Eigen-data of one 2x2 spatial-mode block."""

    n: int
    lambda_n: float
    trace: float
    det: float
    re1: float
    im1: float
    re2: float
    im2: float

    @property
    def max_real(self) -> float:
        return max(self.re1, self.re2)


@dataclass
class StabilityReport:
    equilibrium: Equilibrium
    region: str          # I/II/III for e1; S3-stable/S4-stable/undetermined for e2
    margin: float        # lambda1 (d1 + d2) - (c/alpha) ((m-d)/m) (d/m)
    verdict: str         # "stable" | "unstable"
    modes: list[ModeData] = field(default_factory=list)
    n_provably_stable: int = 0   # modes beyond this index are diffusion-dominated
    lambda1: float = 1.0
    x3_const: float = 0.0

    @property
    def modes_max_real(self) -> float:
        return max(m.max_real for m in self.modes)

    @property
    def eigen_verdict(self) -> str:
        """Verdict implied by the scanned mode eigenvalues alone."""
        return "unstable" if self.modes_max_real > 0.0 else "stable"

    def unstable_modes(self) -> list[int]:
        return [m.n for m in self.modes if m.max_real > 0.0]

    def to_csv(self) -> str:
        lines = ["n,lambda_n,trace,det,re1,im1,re2,im2,max_re"]
        for m in self.modes:
            lines.append(
                f"{m.n},{m.lambda_n!r},{m.trace!r},{m.det!r},"
                f"{m.re1!r},{m.im1!r},{m.re2!r},{m.im2!r},{m.max_real!r}"
            )
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        eq = self.equilibrium
        lines = [
            f"equilibrium {eq.kind}: (u, v) = ({eq.u:.6f}, {eq.v:.6f}), x3 = {self.x3_const:g}",
            f"classification: region {self.region}, margin = {self.margin:+.6f}",
            f"verdict (classification rule): {self.verdict}",
            f"verdict (mode eigenvalues, n <= {self.modes[-1].n}): {self.eigen_verdict} "
            f"(max Re = {self.modes_max_real:+.6f})",
            f"modes beyond n = {self.n_provably_stable} are diffusion-dominated (stable)",
        ]
        if self.verdict != self.eigen_verdict:
            lines.append(
                "note: classification rule and mode eigenvalues DISAGREE for this "
                "parameter set; simulated dynamics follow the eigenvalues"
            )
        bad = self.unstable_modes()
        if bad:
            lines.append(f"unstable mode band: n in {bad}")
        return "\n".join(lines) + "\n"


def equilibrium_e1(p: ModelParams) -> Equilibrium:
    """Human-free coexistence equilibrium.

    u = 1 - (c/alpha)(1 - d/m),  v = (1/alpha)(m/d - 1) u.
    Requires ``check_e1_condition``.
    """
    if not check_e1_condition(p):
        raise ConditionViolated(
            "human-free positivity condition 1 - alpha/c < d/m < 1 fails"
        )
    u = 1.0 - (p.c / p.alpha) * (1.0 - p.d / p.m)
    v = (1.0 / p.alpha) * (p.m / p.d - 1.0) * u
    return Equilibrium(u=u, v=v, kind="e1")


def equilibrium_e2(p: ModelParams) -> Equilibrium:
    """Coexistence equilibrium under uniform human density one.

    u = 1 - h1 - (c/alpha)(1 - (d + h2)/m),
    v = (1/alpha)(m/(d + h2) - 1) u.
    Requires ``check_e2_condition``; equals ``equilibrium_e1`` when
    h1 = h2 = 0.
    """
    if not check_e2_condition(p):
        raise ConditionViolated(
            "positivity condition 1 - (alpha/c)(1 - h1) < (d + h2)/m < 1 fails"
        )
    u = 1.0 - p.h1 - (p.c / p.alpha) * (1.0 - (p.d + p.h2) / p.m)
    v = (1.0 / p.alpha) * (p.m / (p.d + p.h2) - 1.0) * u
    return Equilibrium(u=u, v=v, kind="e2")


def reaction_jacobian(u: float, v: float, x3: float, p: ModelParams) -> np.ndarray:
    """2x2 Jacobian of the reaction terms at (u, v) with x3 fixed.

    [[1 - c a (v/s)^2 - 2u - h1 x3,   -c (u/s)^2      ]
     [m a (v/s)^2,                     m (u/s)^2 - d - h2 x3]]
    with s = u + alpha v.
    """
    s = u + p.alpha * v
    if s <= RATIO_GUARD:
        raise RatioSingular(f"u + alpha v = {s} is inside the ratio guard")
    rv = v / s
    ru = u / s
    return np.array(
        [
            [1.0 - p.c * p.alpha * rv * rv - 2.0 * u - p.h1 * x3, -p.c * ru * ru],
            [p.m * p.alpha * rv * rv, p.m * ru * ru - p.d - p.h2 * x3],
        ]
    )


def mode_matrix(n: int, eq: Equilibrium, x3_const: float, p: ModelParams) -> np.ndarray:
    """Linearization block of spatial mode n: -diag(d1, d2) n^2 + J."""
    lam = float(n * n)
    J = reaction_jacobian(eq.u, eq.v, x3_const, p)
    J[0, 0] -= p.d1 * lam
    J[1, 1] -= p.d2 * lam
    return J


def _eig2(M: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues of a 2x2 matrix via the quadratic formula."""
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        s = math.sqrt(disc)
        return complex((tr + s) / 2.0), complex((tr - s) / 2.0)
    s = math.sqrt(-disc)
    return complex(tr / 2.0, s / 2.0), complex(tr / 2.0, -s / 2.0)


def spectral_radius(M: np.ndarray) -> float:
    l1, l2 = _eig2(M)
    return max(abs(l1), abs(l2))


def _mode_data(n: int, eq: Equilibrium, x3_const: float, p: ModelParams) -> ModeData:
    M = mode_matrix(n, eq, x3_const, p)
    l1, l2 = _eig2(M)
    return ModeData(
        n=n,
        lambda_n=float(n * n),
        trace=float(M[0, 0] + M[1, 1]),
        det=float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]),
        re1=l1.real,
        im1=l1.imag,
        re2=l2.real,
        im2=l2.imag,
    )


def _scan_modes(eq, x3_const, p, n_max) -> list[ModeData]:
    return [_mode_data(n, eq, x3_const, p) for n in range(n_max + 1)]


def _n_provably_stable(eq: Equilibrium, x3_const: float, p: ModelParams) -> int:
    """Mode index beyond which diffusion certainly dominates the reaction."""
    rho = spectral_radius(reaction_jacobian(eq.u, eq.v, x3_const, p))
    return max(1, math.ceil(math.sqrt(rho / min(p.d1, p.d2))))


def stability_margin(p: ModelParams, lambda1: float) -> float:
    """lambda1 (d1 + d2) - (c/alpha) ((m - d)/m) (d/m)."""
    return lambda1 * (p.d1 + p.d2) - (p.c / p.alpha) * ((p.m - p.d) / p.m) * (p.d / p.m)


def classify_e1(p: ModelParams, lambda1: float = 1.0, n_max: int = DEFAULT_N_MAX) -> StabilityReport:
    """Margin-rule classification of the human-free equilibrium.

    Region I: c <= alpha (stable for any diffusion).  Otherwise region II
    when the margin is nonnegative (stable), region III when it is
    negative (classified unstable by the rule).  The report also carries
    the exact per-mode eigenvalues, which may disagree with the rule in
    region III; the summary flags such disagreements.
    """
    eq = equilibrium_e1(p)
    margin = stability_margin(p, lambda1)
    if p.c <= p.alpha:
        region, verdict = "I", "stable"
    elif margin >= 0.0:
        region, verdict = "II", "stable"
    else:
        region, verdict = "III", "unstable"
    return StabilityReport(
        equilibrium=eq,
        region=region,
        margin=margin,
        verdict=verdict,
        modes=_scan_modes(eq, 0.0, p, n_max),
        n_provably_stable=_n_provably_stable(eq, 0.0, p),
        lambda1=lambda1,
        x3_const=0.0,
    )


def classify_e2(p: ModelParams, lambda1: float = 1.0, n_max: int = DEFAULT_N_MAX) -> StabilityReport:
    """Classification of the equilibrium under uniform human density one.

    The margin rule is only sufficient here: c <= alpha (clause S3) or a
    positive margin (clause S4) give a stable verdict; otherwise the
    verdict is taken from the explicit mode scan.
    """
    eq = equilibrium_e2(p)
    margin = stability_margin(p, lambda1)
    modes = _scan_modes(eq, 1.0, p, n_max)
    if p.c <= p.alpha:
        region, verdict = "S3-stable", "stable"
    elif margin > 0.0:
        region, verdict = "S4-stable", "stable"
    else:
        region = "undetermined"
        verdict = "unstable" if max(m.max_real for m in modes) > 0.0 else "stable"
    return StabilityReport(
        equilibrium=eq,
        region=region,
        margin=margin,
        verdict=verdict,
        modes=modes,
        n_provably_stable=_n_provably_stable(eq, 1.0, p),
        lambda1=lambda1,
        x3_const=1.0,
    )


def turing_scan(
    eq: Equilibrium, x3_const: float, p: ModelParams, n_max: int
) -> list[tuple[int, float]]:
    """Max eigenvalue real part per spatial mode n = 0..n_max.

    A diffusion-driven instability shows up as a band of n >= 1 with a
    positive real part while n = 0 is stable.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    return [(n, _mode_data(n, eq, x3_const, p).max_real) for n in range(n_max + 1)]


def closed_form_det_trace_e1(lambda_n: float, p: ModelParams) -> tuple[float, float]:
    """Determinant/trace of the human-free mode block, written directly in
    the model constants.

    Used as an independent cross-check of the assembled matrices.  The
    determinant expression agrees with ``mode_matrix`` exactly; the trace
    expression is missing the contribution -d (m - d) / m of the second
    diagonal entry, a known defect of this closed form that the
    cross-check test documents rather than repairs.
    """
    c, al, m, d, d1, d2 = p.c, p.alpha, p.m, p.d, p.d1, p.d2
    det = (
        m * m * d * al - c * d**3 - m * d * d * al - m * m * d * c + 2 * m * d * d * c
    ) / (m * m * al) + (
        lambda_n * d * d * c * d2
        + lambda_n * m * m * al * d2
        - lambda_n * m * m * c * d2
        + lambda_n * lambda_n * m * m * al * d1 * d2
        + lambda_n * m * m * al * d1 * d
        - lambda_n * m * d * d * al * d1
    ) / (m * m * al)
    trace = -(m * m * al * lambda_n * (d1 + d2) + m * m * al + d * d * c - m * m * c) / (
        m * m * al
    )
    return det, trace
