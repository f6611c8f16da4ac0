"""Absorbing rectangle values and trajectory containment."""

import numpy as np
import pytest

from wetlandsim.attractor import absorbing_region, check_absorption
from wetlandsim.dynamics import StateP, Trajectory
from wetlandsim.equilibria import equilibrium_e2
from wetlandsim.grid import build_grid, constant_field
from wetlandsim.params import ModelParams, check_e2_condition, check_persistence_condition


def mk(**kw):
    base = dict(d1=1.0, d2=1.0, c=1.0, alpha=0.5, m=1.0, d=0.9, h1=0.0, h2=0.0, r=1.0)
    base.update(kw)
    return ModelParams(**base)


def const_trajectory(p, u, v, n_snaps=11):
    g = build_grid(12)
    snaps = [
        StateP(constant_field(g, u), constant_field(g, v), float(t)) for t in range(n_snaps)
    ]
    return Trajectory(snapshots=snaps, params=p, x3_profile=constant_field(g, 1.0), record_dt=1.0)


class TestRegionValues:
    def test_worked_example(self):
        p = mk(c=0.4, alpha=1.0, h1=0.1, h2=0.1, d=0.3, m=1.0)
        r = absorbing_region(p)
        assert r.x1_lo == pytest.approx(0.5, abs=1e-6)
        assert r.x1_hi == 1.0
        assert r.x2_lo == pytest.approx(0.75, abs=1e-6)
        assert r.x2_hi == pytest.approx(7.0 / 3.0, abs=1e-6)
        assert r.persistence is True
        assert r.extinction is False

    def test_balanced_pressure_zero_lower_bound(self):
        r = absorbing_region(mk(c=0.5, alpha=0.5, d=0.3, h1=0.0, h2=0.0))
        assert r.x1_lo == 0.0

    def test_strong_predation_floors_lower_bounds(self):
        # c/alpha = 2 makes the raw fish lower bound negative
        r = absorbing_region(mk())
        assert r.x1_lo == 0.0 and r.x2_lo == 0.0
        assert r.persistence is False
        assert "floored" in r.describe()

    def test_extinction_when_conversion_below_death(self):
        r = absorbing_region(mk(m=0.5, d=0.9))
        assert r.extinction is True
        assert r.x2_hi == 0.0

    def test_equilibrium_inside_region_when_persistent(self):
        rng = np.random.default_rng(5)
        checked = 0
        while checked < 50:
            c = rng.uniform(0.1, 1.0)
            alpha = rng.uniform(c + 0.05, 2.0)  # needs c < alpha for persistence room
            m = rng.uniform(0.3, 2.0)
            d = rng.uniform(0.05, m - 0.05)
            h1 = rng.uniform(0.0, max(1e-6, (1.0 - c / alpha) * 0.9))
            h2 = rng.uniform(0.0, (m - d) * 0.9)
            p = mk(c=c, alpha=alpha, m=m, d=d, h1=h1, h2=h2)
            if not (check_persistence_condition(p) and check_e2_condition(p)):
                continue
            checked += 1
            e = equilibrium_e2(p)
            r = absorbing_region(p)
            assert r.x1_lo - 1e-12 <= e.u <= r.x1_hi + 1e-12
            assert r.x2_lo - 1e-12 <= e.v <= r.x2_hi + 1e-12


class TestContainment:
    def test_constant_equilibrium_trajectory_contained(self):
        p = mk(c=0.4, alpha=1.0, h1=0.1, h2=0.1, d=0.3, m=1.0)
        e = equilibrium_e2(p)
        traj = const_trajectory(p, e.u, e.v)
        assert check_absorption(traj, absorbing_region(p)) is True

    def test_runaway_trajectory_rejected(self):
        p = mk()
        traj = const_trajectory(p, 5e5, 3e5)
        assert check_absorption(traj, absorbing_region(p)) is False

    def test_tail_fraction_validated(self):
        p = mk()
        traj = const_trajectory(p, 0.5, 0.1)
        with pytest.raises(ValueError):
            check_absorption(traj, absorbing_region(p), tail_fraction=0.0)

    def test_tail_ignores_early_transient(self):
        # early snapshots far outside; the last 10% inside
        p = mk(c=0.4, alpha=1.0, h1=0.1, h2=0.1, d=0.3, m=1.0)
        g = build_grid(12)
        snaps = [StateP(constant_field(g, 3.0), constant_field(g, 3.0), float(t)) for t in range(19)]
        snaps += [StateP(constant_field(g, 0.9), constant_field(g, 1.0), 19.0)]
        traj = Trajectory(snapshots=snaps, params=p, x3_profile=constant_field(g, 1.0), record_dt=1.0)
        assert check_absorption(traj, absorbing_region(p), tail_fraction=0.05) is True
        assert check_absorption(traj, absorbing_region(p), tail_fraction=1.0) is False
