"""Method-of-lines time integration of the two-species subsystem.

The fish/boyciana densities evolve by

    dx1/dt = d1 x1'' + x1 (1 - x1 - c x2 / (x1 + alpha x2) - h1 x3)
    dx2/dt = d2 x2'' + x2 (-d + m x1 / (x1 + alpha x2) - h2 x3)

on the no-flux grid, with the human density x3 supplied as a fixed field
(0, 1, or a precomputed profile).  Time stepping is classical four-stage
Runge-Kutta under the explicit stability bound

    dt <= 0.9 h^2 / (2 max(d1, d2))   and   dt <= 0.1,

the second cap covering the O(1) reaction scale.  The hot loop is a
numba kernel; ``step_rhs`` wraps the same kernel so there is a single
source of truth for the right-hand side.

At the origin the ratio terms are guarded: when x1 + alpha x2 falls
below 1e-12 both fractions are taken as 0, which is their continuous
extension along the diagonal (the fractions stay bounded while the
prefactors vanish).

Identical inputs produce bit-identical trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import Blowup, InvalidDt
from .grid import Field, Grid1D
from .params import ModelParams

__all__ = [
    "StateP",
    "Trajectory",
    "reaction_terms",
    "step_rhs",
    "integrate",
    "stable_dt",
    "trajectory_to_csv",
    "trajectory_to_gnuplot",
]

RATIO_GUARD = 1e-12
BLOWUP_THRESHOLD = 1e6
NEGATIVITY_FLOOR = -1e-12
CFL_SAFETY = 0.9
REACTION_DT_CAP = 0.1


@dataclass(eq=False)
class StateP:
    """Two-species state at one instant."""

    x1: Field
    x2: Field
    t: float

    def __post_init__(self):
        if self.x1.grid is not self.x2.grid and self.x1.grid.n_interior != self.x2.grid.n_interior:
            raise ValueError("x1 and x2 must share one grid")

    @property
    def grid(self) -> Grid1D:
        return self.x1.grid

    def copy(self) -> "StateP":
        return StateP(self.x1.copy(), self.x2.copy(), self.t)


@dataclass(eq=False)
class Trajectory:
    """Recorded snapshots of one integration."""

    snapshots: list[StateP]
    params: ModelParams
    x3_profile: Field
    record_dt: float

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    @property
    def grid(self) -> Grid1D:
        return self.snapshots[0].grid

    def final(self) -> StateP:
        return self.snapshots[-1]

    def tail(self, fraction: float) -> list[StateP]:
        """The last ceil(fraction * count) snapshots."""
        k = max(1, int(np.ceil(fraction * len(self.snapshots))))
        return self.snapshots[-k:]


@njit(cache=True, nogil=True)
def _rhs_kernel(out1, out2, x1, x2, x3, d1, d2, c, alpha, m, d, h1, h2, inv_h2):
    n = x1.shape[0]
    for i in range(n):
        if i == 0:
            lap1 = (2.0 / 3.0) * (x1[1] - x1[0]) * inv_h2
            lap2 = (2.0 / 3.0) * (x2[1] - x2[0]) * inv_h2
        elif i == n - 1:
            lap1 = (2.0 / 3.0) * (x1[n - 2] - x1[n - 1]) * inv_h2
            lap2 = (2.0 / 3.0) * (x2[n - 2] - x2[n - 1]) * inv_h2
        else:
            lap1 = (x1[i - 1] - 2.0 * x1[i] + x1[i + 1]) * inv_h2
            lap2 = (x2[i - 1] - 2.0 * x2[i] + x2[i + 1]) * inv_h2
        denom = x1[i] + alpha * x2[i]
        if denom < RATIO_GUARD:
            prey_loss = 0.0
            pred_gain = 0.0
        else:
            prey_loss = c * x2[i] / denom
            pred_gain = m * x1[i] / denom
        out1[i] = d1 * lap1 + x1[i] * (1.0 - x1[i] - prey_loss - h1 * x3[i])
        out2[i] = d2 * lap2 + x2[i] * (-d + pred_gain - h2 * x3[i])


@njit(cache=True, nogil=True)
def _rk4_kernel(x1, x2, x3, d1, d2, c, alpha, m, d, h1, h2, inv_h2, dt, n_steps):
    n = x1.shape[0]
    k1a = np.empty(n); k1b = np.empty(n)
    k2a = np.empty(n); k2b = np.empty(n)
    k3a = np.empty(n); k3b = np.empty(n)
    k4a = np.empty(n); k4b = np.empty(n)
    ta = np.empty(n); tb = np.empty(n)
    for _ in range(n_steps):
        _rhs_kernel(k1a, k1b, x1, x2, x3, d1, d2, c, alpha, m, d, h1, h2, inv_h2)
        for i in range(n):
            ta[i] = x1[i] + 0.5 * dt * k1a[i]
            tb[i] = x2[i] + 0.5 * dt * k1b[i]
        _rhs_kernel(k2a, k2b, ta, tb, x3, d1, d2, c, alpha, m, d, h1, h2, inv_h2)
        for i in range(n):
            ta[i] = x1[i] + 0.5 * dt * k2a[i]
            tb[i] = x2[i] + 0.5 * dt * k2b[i]
        _rhs_kernel(k3a, k3b, ta, tb, x3, d1, d2, c, alpha, m, d, h1, h2, inv_h2)
        for i in range(n):
            ta[i] = x1[i] + dt * k3a[i]
            tb[i] = x2[i] + dt * k3b[i]
        _rhs_kernel(k4a, k4b, ta, tb, x3, d1, d2, c, alpha, m, d, h1, h2, inv_h2)
        for i in range(n):
            x1[i] += dt / 6.0 * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i])
            x2[i] += dt / 6.0 * (k1b[i] + 2.0 * k2b[i] + 2.0 * k3b[i] + k4b[i])


def reaction_terms(x1: float, x2: float, x3: float, p: ModelParams) -> tuple[float, float]:
    """Pointwise reaction values (f1, f2) with the origin guard."""
    denom = x1 + p.alpha * x2
    if denom < RATIO_GUARD:
        prey_loss = 0.0
        pred_gain = 0.0
    else:
        prey_loss = p.c * x2 / denom
        pred_gain = p.m * x1 / denom
    f1 = x1 * (1.0 - x1 - prey_loss - p.h1 * x3)
    f2 = x2 * (-p.d + pred_gain - p.h2 * x3)
    return f1, f2


def step_rhs(s: StateP, x3: Field, p: ModelParams) -> tuple[Field, Field]:
    """Nodewise right-hand side d1 lap(x1) + f1 and d2 lap(x2) + f2."""
    grid = s.grid
    out1 = np.empty(grid.n_interior)
    out2 = np.empty(grid.n_interior)
    _rhs_kernel(
        out1, out2, s.x1.values, s.x2.values, x3.values,
        p.d1, p.d2, p.c, p.alpha, p.m, p.d, p.h1, p.h2, 1.0 / grid.h**2,
    )
    return Field(grid, out1), Field(grid, out2)


def stable_dt(grid: Grid1D, p: ModelParams, safety: float = CFL_SAFETY) -> float:
    """Largest admissible step: min(safety h^2 / (2 max(d1,d2)), 0.1)."""
    return min(safety * grid.h**2 / (2.0 * max(p.d1, p.d2)), REACTION_DT_CAP)


def _check_state(x1: np.ndarray, x2: np.ndarray, t: float):
    for name, v in (("x1", x1), ("x2", x2)):
        if not np.all(np.isfinite(v)):
            raise Blowup(f"{name} became non-finite at t = {t:g}", time=t)
        if np.max(np.abs(v)) > BLOWUP_THRESHOLD:
            raise Blowup(f"{name} exceeded {BLOWUP_THRESHOLD:g} at t = {t:g}", time=t)
        if np.min(v) < NEGATIVITY_FLOOR:
            raise Blowup(
                f"{name} dropped below {NEGATIVITY_FLOOR:g} at t = {t:g} "
                f"(min {np.min(v):.3e})",
                time=t,
            )


def integrate(
    ic: StateP,
    x3: Field,
    p: ModelParams,
    t_end: float,
    dt: float,
    record_dt: float,
) -> Trajectory:
    """Integrate from ``ic`` to ``t_end``, recording every ``record_dt``.

    The actual step within each recording interval is
    record_dt / ceil(record_dt / dt), the largest value <= dt that lands
    snapshots exactly on multiples of record_dt.  State validity
    (finite, below the blow-up threshold, nonnegative up to round-off)
    is checked at every snapshot; a violation raises ``Blowup`` with the
    detection time.
    """
    if not t_end > 0.0:
        raise InvalidDt(f"t_end must be > 0, got {t_end}")
    if not 0.0 < record_dt <= t_end:
        raise InvalidDt(f"record_dt must be in (0, t_end], got {record_dt}")
    dt_max = stable_dt(ic.grid, p)
    if not 0.0 < dt <= dt_max * (1.0 + 1e-12):
        raise InvalidDt(
            f"dt = {dt:g} violates the stability bound {dt_max:g} "
            f"(0.9 h^2 / (2 max(d1,d2)) capped at {REACTION_DT_CAP})"
        )
    grid = ic.grid
    x1 = ic.x1.values.astype(float).copy()
    x2 = ic.x2.values.astype(float).copy()
    _check_state(x1, x2, ic.t)
    inv_h2 = 1.0 / grid.h**2

    n_rec = int(np.floor(t_end / record_dt + 1e-9))
    leftovers = t_end - n_rec * record_dt
    if leftovers < 1e-9 * record_dt:
        leftovers = 0.0

    snapshots = [StateP(Field(grid, x1.copy()), Field(grid, x2.copy()), ic.t)]
    n_sub = int(np.ceil(record_dt / dt - 1e-12))
    dt_eff = record_dt / n_sub
    t = ic.t
    for k in range(n_rec):
        _rk4_kernel(
            x1, x2, x3.values, p.d1, p.d2, p.c, p.alpha, p.m, p.d, p.h1, p.h2,
            inv_h2, dt_eff, n_sub,
        )
        t = ic.t + (k + 1) * record_dt
        _check_state(x1, x2, t)
        snapshots.append(StateP(Field(grid, x1.copy()), Field(grid, x2.copy()), t))
    if leftovers > 0.0:
        n_sub_last = int(np.ceil(leftovers / dt - 1e-12))
        _rk4_kernel(
            x1, x2, x3.values, p.d1, p.d2, p.c, p.alpha, p.m, p.d, p.h1, p.h2,
            inv_h2, leftovers / n_sub_last, n_sub_last,
        )
        t = ic.t + t_end
        _check_state(x1, x2, t)
        snapshots.append(StateP(Field(grid, x1.copy()), Field(grid, x2.copy()), t))
    return Trajectory(snapshots=snapshots, params=p, x3_profile=x3, record_dt=record_dt)


def trajectory_to_csv(traj: Trajectory) -> str:
    """Long-format CSV with columns (t, z, x1, x2)."""
    lines = ["t,z,x1,x2"]
    nodes = traj.grid.nodes
    for s in traj.snapshots:
        for j in range(len(nodes)):
            lines.append(
                f"{float(s.t)!r},{float(nodes[j])!r},"
                f"{float(s.x1.values[j])!r},{float(s.x2.values[j])!r}"
            )
    return "\n".join(lines) + "\n"


def trajectory_to_gnuplot(traj: Trajectory) -> str:
    """Whitespace-delimited snapshot blocks (z x1 x2), blank-line separated."""
    nodes = traj.grid.nodes
    blocks = []
    for s in traj.snapshots:
        rows = [f"# t = {float(s.t)!r}"]
        for j in range(len(nodes)):
            rows.append(
                f"{float(nodes[j])!r} {float(s.x1.values[j])!r} {float(s.x2.values[j])!r}"
            )
        blocks.append("\n".join(rows))
    return "\n\n".join(blocks) + "\n"
