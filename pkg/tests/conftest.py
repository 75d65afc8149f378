"""Shared fixtures: loaded example systems and memoized facet solves.

The saddle fixture's piecewise-affine run costs a few seconds; several test
modules want its exact report, so solves are cached per (fixture, facet,
kind, epsilon) for the whole session.
"""

from __future__ import annotations

import pytest

from intersample import (
    OverestimatorKind,
    SolveReport,
    SolverConfig,
    facet_problems,
    solve,
)
from intersample.fixtures import load_fixture

_solve_cache: dict = {}

FIXTURE_NAMES = (
    "double_integrator",
    "near_boundary",
    "fast_oscillator",
    "boundary_saddle",
)


def solve_fixture_facet(
    name: str,
    facet: int,
    kind: OverestimatorKind = OverestimatorKind.PIECEWISE_QUADRATIC,
    epsilon: float = 1e-6,
) -> SolveReport:
    key = (name, facet, kind, epsilon)
    hit = _solve_cache.get(key)
    if hit is None:
        spec, queries = load_fixture(name)
        problem = facet_problems(spec, queries[0])[facet]
        cfg = SolverConfig(epsilon=epsilon, k=10, l=10, overestimator=kind)
        hit = solve(problem, cfg)
        _solve_cache[key] = hit
    return hit


@pytest.fixture(scope="session")
def fixture_systems():
    """name -> (SystemSpec, [QueryPoint]) for all four shipped examples."""
    return {name: load_fixture(name) for name in FIXTURE_NAMES}
