"""Shared fixtures: benchmark parameter sets and cached scenario runs."""

import pytest

from wetlandsim import scenarios
from wetlandsim.params import ModelParams


@pytest.fixture(scope="session")
def params_human_free() -> ModelParams:
    """Human-free benchmark set: c=1, alpha=0.5, d=0.9, m=1, d1=d2=1."""
    return ModelParams(d1=1.0, d2=1.0, c=1.0, alpha=0.5, m=1.0, d=0.9, h1=0.0, h2=0.0, r=1.0)


@pytest.fixture(scope="session")
def params_overdev(params_human_free) -> ModelParams:
    """Uniform-human benchmark set: h1=0.1, h2=0.01 on top of the human-free set."""
    return params_human_free.replace(h1=0.1, h2=0.01)


@pytest.fixture(scope="session")
def scenario_outputs(tmp_path_factory):
    """Run all bundled scenarios once (figures off) and cache the results.

    Returns (results_by_name, output_root).  The two d1=d2=1 scenarios
    dominate the cost (~1.8M RK4 steps each on the n=200 grid).
    """
    out = tmp_path_factory.mktemp("scenario-runs")
    results = {}
    for name, s in scenarios.builtin_scenarios().items():
        results[name] = scenarios.run_scenario(s, out, figures=False)
    return results, out
