import numpy as np
import pytest

from spinyield.spin import FieldVector, HyperfineTensor, SpinSystem
from spinyield.units import LAMBDA

K = 1e4
B0 = 46e-6


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig1_system():
    return SpinSystem((HyperfineTensor.from_lambda(3, 3, 5),))


@pytest.fixture
def vertical_system():
    return SpinSystem((HyperfineTensor.from_lambda(0, 0, 5),))


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_axial(rng, scale=6.0):
    a = rng.uniform(0.5, scale)
    return HyperfineTensor(a * LAMBDA, a * LAMBDA, rng.uniform(0.5, scale) * LAMBDA)


def field_at(theta, b0=B0, phi=0.0):
    return FieldVector(b0, theta, phi)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
