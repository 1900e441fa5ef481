# -*- coding: utf-8 -*-
"""
tests/conftest.py
Date: 19/10/2026
"""
import numpy as np
import pytest

from dependencies import make_rng
from fusionchannel.schema import ProcessMatrix
from quantumcore.controller import make_bell_phi_plus, maximally_mixed, random_density_matrix
from quantumcore.schema import TwoQubitState


@pytest.fixture
def rng() -> np.random.Generator:
    """
    Seeded generator shared by the statistical tests.
    """
    return make_rng(2023)


@pytest.fixture
def phi_plus() -> TwoQubitState:
    """
    |phi+><phi+|.
    """
    return make_bell_phi_plus().density()


@pytest.fixture
def mixed() -> TwoQubitState:
    """
    I/4.
    """
    return maximally_mixed()


@pytest.fixture
def measured_chi() -> ProcessMatrix:
    """
    Diagonals inverted from the basis fidelities 0.958, 0.768 and 0.759.
    """
    return ProcessMatrix(chi_00=0.7425, chi_zz=0.2155, chi_xy=0.0165, chi_xx=0.0255)


@pytest.fixture
def random_states(rng) -> list[TwoQubitState]:
    """
    Twenty random full-rank states.
    """
    return [random_density_matrix(rng) for _ in range(20)]


def werner(weight: float) -> TwoQubitState:
    """
    weight |phi+><phi+| + (1 - weight) I/4.
    """
    rho = weight * make_bell_phi_plus().density().rho + (1 - weight) * np.eye(4) / 4
    return TwoQubitState(rho=rho)
