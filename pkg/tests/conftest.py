import numpy as np
import pytest

from nlspec import Grid, KernelSpec, PotentialSpec


@pytest.fixture(scope="session")
def grid_medium():
    return Grid(1, 40.0, 2048)


@pytest.fixture(scope="session")
def grid_coarse():
    return Grid(1, 20.0, 512)


@pytest.fixture(scope="session")
def cauchy_kernel():
    return KernelSpec("cauchy_product")


@pytest.fixture(scope="session")
def gaussian_kernel():
    return KernelSpec("gaussian")


@pytest.fixture(scope="session")
def neg_gaussian_kernel():
    return KernelSpec("neg_gaussian")


@pytest.fixture(scope="session")
def plateau_potential():
    return PotentialSpec("plateau_well", (5.0, 1.0, 2.0))


@pytest.fixture(scope="session")
def wide_plateau_potential():
    # flat cube of side 4 around the origin
    return PotentialSpec("plateau_well", (5.0, 2.0, 3.0))


@pytest.fixture(scope="session")
def gaussian_well():
    return PotentialSpec("gaussian_well", (2.0,))


@pytest.fixture(scope="session")
def sqrt_well():
    return PotentialSpec("sqrt_well", (2.0,))


def zero_kernel(dim=1, box=40.0):
    shape = (9,) * dim
    return KernelSpec("tabulated", dim=dim, data=np.zeros(shape), data_box=box)


def zero_potential(dim=1, box=40.0):
    shape = (9,) * dim
    return PotentialSpec("tabulated", dim=dim, data=np.zeros(shape), data_box=box)


@pytest.fixture(scope="session")
def positive_bump_potential():
    # smooth positive hotspot, tabulated densely; decays to 0 at infinity
    ax = np.linspace(-20.0, 20.0, 4001)
    return PotentialSpec("tabulated", dim=1, data=3.0 * np.exp(-ax ** 2), data_box=40.0)
