"""
Shared fixtures: the published 2x2 Ca+ cell, its modes, and the two shipped
sequences.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from microtrap_gates.gates import GateContext, load_fixture_sequence
from microtrap_gates.physics import TrapArray, solve_modes


@pytest.fixture(scope="session")
def cell_array():
    return TrapArray.from_lab_units()


@pytest.fixture(scope="session")
def cell_modes(cell_array):
    return solve_modes(cell_array)


@pytest.fixture(scope="session")
def cell_ctx(cell_modes):
    return GateContext.for_pair(cell_modes, 0, 1)


@pytest.fixture(scope="session")
def example1():
    return load_fixture_sequence("example1")


@pytest.fixture(scope="session")
def example2():
    return load_fixture_sequence("example2")
