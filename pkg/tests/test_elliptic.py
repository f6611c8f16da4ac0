"""Steady human-distribution solver: closed form, Newton branches, bounds."""

import math

import numpy as np
import pytest

from wetlandsim.elliptic import (
    check_integral_bound,
    profile_to_csv,
    sech2_profile,
    solve_fisher_steady,
)
from wetlandsim.errors import ConditionViolated, NoConvergence
from wetlandsim.grid import build_grid, constant_field, integrate, neumann_laplacian

PI = np.pi
FITTED_R = 6.044  # growth rate of the bundled estimation example


def sech2_scalar(r, z):
    # independent scalar evaluation used as the oracle for the profile op
    return 1.0 - 0.75 / math.cosh(math.sqrt(r) * z / 2.0) ** 2


def steady_residual_norm(sol):
    """Residual recomputed through the stencil operator, independently of
    the Newton loop's matrix assembly."""
    lap = neumann_laplacian(sol.profile).values
    v = sol.profile.values
    return float(np.max(np.abs(lap + sol.r * v * (1.0 - v))))


class TestClosedFormProfile:
    def test_value_at_origin_limit(self):
        # sech(0) = 1 so the profile starts at 1 - 3/4
        g = build_grid(999)
        prof = sech2_profile(1.0, g)
        assert prof.values[0] == pytest.approx(0.25, abs=1e-5)

    def test_large_r_saturates_interior(self):
        g = build_grid(200)
        prof = sech2_profile(1e4, g)
        mid = np.argmin(np.abs(g.nodes - PI / 2))
        assert prof.values[mid] > 0.999

    def test_fitted_r_midpoint_matches_scalar_oracle(self):
        g = build_grid(200)
        prof = sech2_profile(FITTED_R, g)
        mid = np.argmin(np.abs(g.nodes - PI / 2))
        expected = sech2_scalar(FITTED_R, g.nodes[mid])
        assert prof.values[mid] == pytest.approx(expected, rel=1e-14)
        assert 0.25 < prof.values[mid] < 1.0

    def test_rejects_nonpositive_r(self):
        with pytest.raises(ValueError):
            sech2_profile(0.0, build_grid(10))


class TestNewtonSolver:
    def test_zero_is_exact_root(self):
        g = build_grid(100)
        sol = solve_fisher_steady(2.0, g, constant_field(g, 0.0))
        assert sol.residual_norm == 0.0
        assert sol.newton_iters == 0
        assert np.all(sol.profile.values == 0.0)
        assert sol.in_unit_box and sol.is_constant

    def test_one_is_exact_root(self):
        g = build_grid(100)
        sol = solve_fisher_steady(2.0, g, constant_field(g, 1.0))
        assert sol.residual_norm == 0.0
        assert np.all(sol.profile.values == 1.0)

    def test_seeded_branch_at_fitted_r(self):
        # On an interval with pure no-flux ends the only roots inside
        # [0, 1] are the constants, so the nonconstant root the seed finds
        # dips below zero near the left end; it is returned as computed
        # and flagged, never clipped.
        g = build_grid(200)
        sol = solve_fisher_steady(FITTED_R, g, sech2_profile(FITTED_R, g))
        assert sol.residual_norm <= 1e-8
        assert steady_residual_norm(sol) <= 1e-8
        assert not sol.is_constant
        assert sol.profile_range > 1e-3
        assert not sol.in_unit_box
        assert sol.profile.values.min() < 0.0
        assert "OUTSIDE" in sol.describe()

    def test_near_onset_seed_collapses_to_zero(self):
        # close to the first eigenvalue the branch shrinks to the zero
        # constant, matching the vanishing-profile limit
        g = build_grid(200)
        sol = solve_fisher_steady(1.2, g, sech2_profile(1.2, g))
        assert sol.is_constant
        assert np.max(np.abs(sol.profile.values)) <= 1e-6

    def test_mirrored_seed_gives_mirrored_solution(self):
        g = build_grid(200)
        seed = sech2_profile(FITTED_R, g)
        sol = solve_fisher_steady(FITTED_R, g, seed)
        mirrored_seed = seed.copy()
        mirrored_seed.values[:] = seed.values[::-1]
        sol_m = solve_fisher_steady(FITTED_R, g, mirrored_seed)
        assert sol_m.profile.values[::-1] == pytest.approx(sol.profile.values, abs=1e-8)

    def test_branch_mass_decreases_toward_onset(self):
        # integral of the nonconstant branch shrinks as r comes down
        g = build_grid(200)
        masses = []
        for r in (2.0, 3.0, 4.5, FITTED_R, 10.0):
            sol = solve_fisher_steady(r, g, sech2_profile(r, g))
            assert not sol.is_constant
            masses.append(integrate(sol.profile))
        assert all(a < b for a, b in zip(masses, masses[1:]))

    def test_iteration_budget_enforced(self):
        g = build_grid(100)
        with pytest.raises(NoConvergence):
            solve_fisher_steady(FITTED_R, g, sech2_profile(FITTED_R, g), max_iters=2)


class TestIntegralBound:
    def test_trivial_zero_solution(self):
        g = build_grid(100)
        sol = solve_fisher_steady(2.0, g, constant_field(g, 0.0))
        assert check_integral_bound(sol, lambda1=1.0) is True

    def test_saturated_solution_boundary_equality(self):
        # integral pi against (2 - 1) pi: equality, accepted within tolerance
        g = build_grid(100)
        sol = solve_fisher_steady(2.0, g, constant_field(g, 1.0))
        assert check_integral_bound(sol, lambda1=1.0) is True

    def test_nonconstant_branch_satisfies_bound(self):
        g = build_grid(200)
        sol = solve_fisher_steady(FITTED_R, g, sech2_profile(FITTED_R, g))
        assert check_integral_bound(sol, lambda1=1.0) is True

    def test_hypothesis_gate(self):
        g = build_grid(100)
        sol = solve_fisher_steady(0.5, g, constant_field(g, 0.0))
        with pytest.raises(ConditionViolated):
            check_integral_bound(sol, lambda1=1.0)


def test_profile_csv_layout():
    g = build_grid(5)
    sol = solve_fisher_steady(2.0, g, constant_field(g, 1.0))
    lines = profile_to_csv(sol).strip().splitlines()
    assert lines[0] == "z,x3"
    assert len(lines) == 6
    z0, v0 = lines[1].split(",")
    assert float(z0) == pytest.approx(g.nodes[0])
    assert float(v0) == 1.0
