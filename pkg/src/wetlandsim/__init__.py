"""Numerical toolkit for a fish/boyciana/human wetland ecosystem model.

Two reaction-diffusion equations with a ratio-dependent predator-prey
response are coupled to a steady logistic (elliptic) human-distribution
profile on the interval (0, pi) with no-flux boundaries.  The package
provides the discretization, equilibrium and per-mode stability
analysis, absorbing-region and gradient-energy diagnostics, scenario
simulations, and derivative-free parameter estimation against
density observations.
"""

from .attractor import AbsorbingRegion, absorbing_region, check_absorption
from .dynamics import StateP, Trajectory, integrate, reaction_terms, stable_dt, step_rhs
from .elliptic import EllipticSolution, check_integral_bound, sech2_profile, solve_fisher_steady
from .energy import EnergySeries, decay_constants, energy_of_state, verify_energy_bound
from .equilibria import (
    Equilibrium,
    StabilityReport,
    classify_e1,
    classify_e2,
    equilibrium_e1,
    equilibrium_e2,
    mode_matrix,
    reaction_jacobian,
    turing_scan,
)
from .errors import (
    Blowup,
    ConditionViolated,
    HypothesisFailed,
    InvalidDt,
    InvalidParams,
    MalformedData,
    NoConvergence,
    RatioSingular,
    SingularJacobian,
    WetlandError,
)
from .fitting import FitResult, ObservationSet, SimConfig, fit, ghost_pad, load_observations
from .grid import Field, Grid1D, build_grid, eigenpair, neumann_laplacian
from .params import (
    ModelParams,
    check_e1_condition,
    check_e2_condition,
    check_persistence_condition,
    load_params,
)
from .scenarios import Scenario, builtin_scenarios, run_scenario

__version__ = "0.1.0"
