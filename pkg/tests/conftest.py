"""Shared fixtures: small complexes, operator sets, flow contexts and a seeded RNG."""

import numpy as np
import pytest

from dec_core import assemble_operators
from dynamics import ViscositySpec, build_flow
from mesh_complex import build_mesh


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope='module')
def torus():
    return build_mesh('torus:equilateral:8')


@pytest.fixture(scope='module')
def perturbed_torus():
    return build_mesh('torus:perturbed:8:0.15', seed=3)


@pytest.fixture(scope='module')
def square():
    return build_mesh('square:structured:6')


@pytest.fixture(scope='module')
def prism():
    return build_mesh('prism:equilateral:4:3')


@pytest.fixture(scope='module')
def torus_ops(torus):
    return assemble_operators(torus)


@pytest.fixture(scope='module')
def prism_ops(prism):
    return assemble_operators(prism)


@pytest.fixture(scope='module')
def square_ops(square):
    return assemble_operators(square)


@pytest.fixture(scope='module')
def torus_flow(torus, torus_ops):
    return build_flow(torus, ops=torus_ops)


@pytest.fixture(scope='module')
def perturbed_flow(perturbed_torus):
    return build_flow(perturbed_torus)


@pytest.fixture(scope='module')
def square_flow(square, square_ops):
    return build_flow(square, ops=square_ops)


@pytest.fixture(scope='module')
def prism_flow(prism, prism_ops):
    return build_flow(prism, ops=prism_ops)


@pytest.fixture(scope='module')
def viscous_torus_flow(torus, torus_ops):
    return build_flow(torus, viscosity=ViscositySpec.isotropic(0.05), ops=torus_ops)
