"""Gradient-energy diagnostics and the exponential decay bound.

The energy integral of a two-species state is

    E(t) = (1/2) integral (|grad x1|^2 + |grad x2|^2) dz,

a Lyapunov-type measure of spatial non-uniformity.  With

    delta = min(d1, d2) mu1 - (rho + max(h1, h2)) > 0,
    q     = r (h1 + h2) integral x3^2 (1 - x3) dz / delta,

(rho the spectral radius of the reaction Jacobian at the reference
equilibrium, mu1 the smallest positive no-flux eigenvalue) bounded
solutions satisfy

    E(t) <= (E(0) - q) exp(-delta t) + q.

For constant human density (x3 = 0 or 1) the integrand of q vanishes and
the bound is a pure exponential.  The verification below allows 5%
relative slack for spatial discretization error plus a small absolute
floor: once a run has converged to machine precision, E sits at a
round-off level (~1e-26) while the exponential bound keeps shrinking
below it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import StateP, Trajectory
from .errors import HypothesisFailed
from .grid import Field, gradient, integrate
from .params import ModelParams

__all__ = [
    "EnergySeries",
    "energy_of_state",
    "spatial_average_deviation",
    "decay_constants",
    "verify_energy_bound",
    "energy_series",
    "energy_series_to_csv",
]

BOUND_REL_SLACK = 0.05
BOUND_ABS_FLOOR = 1e-12


@dataclass(eq=False)
class EnergySeries:
    """Energy diagnostics along a trajectory.

    ``delta``/``q`` are None when the decay hypothesis delta > 0 fails,
    in which case ``bound`` is also None.
    """

    times: np.ndarray
    energy: np.ndarray
    spatial_avg_dev: np.ndarray
    delta: float | None = None
    q: float | None = None

    @property
    def bound(self) -> np.ndarray | None:
        if self.delta is None:
            return None
        t0 = self.times[0]
        return (self.energy[0] - self.q) * np.exp(-self.delta * (self.times - t0)) + self.q


def energy_of_state(s: StateP) -> float:
    """(1/2) integral of the squared gradients of both species."""
    g1 = gradient(s.x1).values
    g2 = gradient(s.x2).values
    return 0.5 * integrate(Field(s.grid, g1 * g1 + g2 * g2))


def spatial_average_deviation(s: StateP) -> float:
    """integral of the pointwise Euclidean distance to the spatial average."""
    m1 = integrate(s.x1) / np.pi
    m2 = integrate(s.x2) / np.pi
    dev = np.sqrt((s.x1.values - m1) ** 2 + (s.x2.values - m2) ** 2)
    return integrate(Field(s.grid, dev))


def decay_constants(p: ModelParams, rho: float, mu1: float, x3: Field) -> tuple[float, float]:
    """Decay rate delta and asymptotic offset q of the energy bound.

    Raises ``HypothesisFailed`` when delta <= 0; the bound is simply not
    applicable there and is never fabricated.
    """
    delta = min(p.d1, p.d2) * mu1 - (rho + max(p.h1, p.h2))
    if delta <= 0.0:
        raise HypothesisFailed(
            f"delta = min(d1,d2) mu1 - (rho + max(h1,h2)) = {delta:g} <= 0; "
            "the exponential energy bound does not apply"
        )
    v = x3.values
    q = p.r * (p.h1 + p.h2) * integrate(Field(x3.grid, v * v * (1.0 - v))) / delta
    return delta, q


def verify_energy_bound(
    traj: Trajectory, delta: float, q: float
) -> tuple[bool, np.ndarray]:
    """Check E(t) <= (E(0) - q) exp(-delta t) + q at every snapshot.

    Returns (holds, margin_series) where margin_i is the allowed bound
    (with 5% relative slack and the absolute round-off floor) minus the
    measured energy; the bound holds iff every margin is nonnegative.
    """
    if delta <= 0.0:
        raise HypothesisFailed(f"delta must be > 0, got {delta}")
    times = traj.times
    E = np.array([energy_of_state(s) for s in traj.snapshots])
    bound = (E[0] - q) * np.exp(-delta * (times - times[0])) + q
    margin = (1.0 + BOUND_REL_SLACK) * bound + BOUND_ABS_FLOOR - E
    return bool(np.all(margin >= 0.0)), margin


def energy_series(
    traj: Trajectory, delta: float | None = None, q: float | None = None
) -> EnergySeries:
    """Evaluate E(t) and the average-deviation series along a trajectory."""
    times = traj.times
    E = np.array([energy_of_state(s) for s in traj.snapshots])
    dev = np.array([spatial_average_deviation(s) for s in traj.snapshots])
    return EnergySeries(times=times, energy=E, spatial_avg_dev=dev, delta=delta, q=q)


def energy_series_to_csv(series: EnergySeries) -> str:
    """CSV with columns (t, E, bound, avg_dev); bound blank when unavailable."""
    bound = series.bound
    lines = ["t,E,bound,avg_dev"]
    for i, t in enumerate(series.times):
        b = "" if bound is None else repr(float(bound[i]))
        lines.append(
            f"{float(t)!r},{float(series.energy[i])!r},{b},"
            f"{float(series.spatial_avg_dev[i])!r}"
        )
    return "\n".join(lines) + "\n"
