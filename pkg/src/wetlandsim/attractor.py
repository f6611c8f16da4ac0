"""Absorbing rectangle for the two-species dynamics and containment checks.

The comparison-principle bounds give

    limsup x1 <= 1
    limsup x2 <= (1/alpha) (m - d) / d
    liminf x1 >= 1 - h1 - c/alpha
    liminf x2 >= (1/alpha) ((m - d - h2) / (d + h2)) (1 - h1 - c/alpha)

Negative lower bounds mean the persistence condition fails; they are
floored at zero and flagged rather than silently presented as positive.
When m < d the upper boyciana bound is negative: the population tends to
extinction, reported with ``extinction=True`` and x2_hi = 0.

limsup/liminf are approximated by extrema over the trailing fraction of
recorded snapshots (asymptotic statements have no finite-time form).
"""

from __future__ import annotations

from dataclasses import dataclass

from .dynamics import Trajectory
from .params import ModelParams, check_persistence_condition

__all__ = ["AbsorbingRegion", "absorbing_region", "check_absorption"]

ABSORPTION_INFLATION = 1e-2


@dataclass(frozen=True)
class AbsorbingRegion:
    x1_lo: float
    x1_hi: float
    x2_lo: float
    x2_hi: float
    persistence: bool   # True when both lower bounds are genuinely positive
    extinction: bool    # True when m < d (boyciana upper bound collapses)

    def describe(self) -> str:
        box = (
            f"[{self.x1_lo:.6f}, {self.x1_hi:.6f}] x "
            f"[{self.x2_lo:.6f}, {self.x2_hi:.6f}]"
        )
        notes = []
        if self.extinction:
            notes.append("m < d: boyciana tends to extinction")
        if not self.persistence:
            notes.append("persistence condition fails; lower bounds floored at 0")
        return box + (f"  ({'; '.join(notes)})" if notes else "")


def absorbing_region(p: ModelParams) -> AbsorbingRegion:
    """Evaluate the absorbing rectangle for the given parameters."""
    if p.m <= p.d:
        return AbsorbingRegion(
            x1_lo=max(0.0, 1.0 - p.h1 - p.c / p.alpha),
            x1_hi=1.0,
            x2_lo=0.0,
            x2_hi=0.0,
            persistence=False,
            extinction=True,
        )
    x1_lo_raw = 1.0 - p.h1 - p.c / p.alpha
    x2_hi = (1.0 / p.alpha) * (p.m - p.d) / p.d
    x2_lo_raw = (1.0 / p.alpha) * ((p.m - p.d - p.h2) / (p.d + p.h2)) * x1_lo_raw
    return AbsorbingRegion(
        x1_lo=max(0.0, x1_lo_raw),
        x1_hi=1.0,
        x2_lo=max(0.0, x2_lo_raw),
        x2_hi=x2_hi,
        persistence=check_persistence_condition(p),
        extinction=False,
    )


def check_absorption(traj: Trajectory, region: AbsorbingRegion, tail_fraction: float = 0.1) -> bool:
    """True iff all nodal values in the trailing snapshots lie in the
    region inflated by 1e-2 on every side."""
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError(f"tail_fraction must be in (0, 1], got {tail_fraction}")
    eps = ABSORPTION_INFLATION
    for s in traj.tail(tail_fraction):
        v1, v2 = s.x1.values, s.x2.values
        if v1.min() < region.x1_lo - eps or v1.max() > region.x1_hi + eps:
            return False
        if v2.min() < region.x2_lo - eps or v2.max() > region.x2_hi + eps:
            return False
    return True
