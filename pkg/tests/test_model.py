import math

import numpy as np
import pytest

from nlspec import (
    DimMismatch,
    Field,
    Grid,
    KernelSpec,
    PotentialSpec,
    SymmetryViolation,
    find_global_min,
    l1_norm,
    locate_minimum,
    sample_kernel,
    sample_potential,
)

from conftest import zero_kernel


def test_grid_midpoints_symmetric():
    g = Grid(1, 8.0, 16)
    ax = g.axis()
    assert g.spacing == 0.5
    assert np.allclose(ax, -np.flip(ax))
    assert 0.0 not in ax


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(0, 1.0, 8)
    with pytest.raises(ValueError):
        Grid(1, -1.0, 8)
    with pytest.raises(ValueError):
        Grid(1, 1.0, 1)


def test_field_shape_checked():
    g = Grid(2, 4.0, 8)
    with pytest.raises(ValueError):
        Field(np.zeros(8), g)
    Field(np.zeros((8, 8)), g)


def test_sample_gaussian_values():
    g = Grid(1, 10.0, 64)
    f = sample_kernel(KernelSpec("gaussian"), g)
    assert np.allclose(f.values, np.exp(-g.axis() ** 2))


def test_sample_cauchy_values():
    # the example kernel: -1/(1+z^2)
    g = Grid(1, 10.0, 64)
    f = sample_kernel(KernelSpec("cauchy_product"), g)
    assert np.allclose(f.values, -1.0 / (1.0 + g.axis() ** 2))


def test_sample_kernel_dim_mismatch():
    with pytest.raises(DimMismatch):
        sample_kernel(KernelSpec("gaussian", dim=2), Grid(1, 10.0, 32))


def test_tabulated_asymmetric_kernel_rejected():
    x = np.linspace(-5, 5, 41)
    data = np.exp(-x ** 2) + 0.2 * (x > 0)
    spec = KernelSpec("tabulated", dim=1, data=data, data_box=10.0)
    with pytest.raises(SymmetryViolation):
        sample_kernel(spec, Grid(1, 8.0, 64))


def test_tabulated_zero_extension():
    spec = zero_kernel(box=4.0)
    vals = spec.evaluate(np.array([0.0, 1.0, 3.0, -7.0]))
    assert np.all(vals == 0.0)


def test_user_taylor_kernel_is_polynomial_near_zero():
    # a(z) = -1 + 0.5 z^2 inside |z| <= radius/2, cut off smoothly
    spec = KernelSpec("user_taylor", (4.0, -1.0, 0.5))
    z = np.array([0.0, 0.5, 1.0])
    assert np.allclose(spec.evaluate(z), -1.0 + 0.5 * z ** 2)
    assert spec.evaluate(np.array([10.0]))[0] == 0.0


def test_superflat_continuous_extension_at_origin():
    spec = PotentialSpec("superflat_well", (5.0,))
    assert spec.evaluate(np.asarray(0.0)) == -5.0
    assert spec.decay_offset == -4.0
    # tends to -4 at infinity
    assert abs(spec.evaluate(np.asarray(1e6)) - (-4.0)) < 1e-10


def test_plateau_piecewise_values():
    spec = PotentialSpec("plateau_well", (5.0, 1.0, 2.0))
    x = np.array([0.0, 0.99, 1.5, 2.0, 3.0])
    expected = np.array([-5.0, -5.0, -2.5, 0.0, 0.0])
    assert np.allclose(spec.evaluate(x), expected)


def test_gaussian_well_values():
    spec = PotentialSpec("gaussian_well", (2.0,))
    g = Grid(1, 10.0, 64)
    f = sample_potential(spec, g)
    assert np.allclose(f.values, -2.0 * np.exp(-g.axis() ** 2))


def test_sqrt_well_matches_power_form():
    spec = PotentialSpec("sqrt_well", (2.0,))
    x = np.array([0.0, 0.25, 1.0, 2.0])
    assert np.allclose(spec.evaluate(x), [-2.0, -2.0 + 2 * 0.5, 0.0, 0.0])


def test_find_global_min_gaussian_well():
    g = Grid(1, 20.0, 512)
    f = sample_potential(PotentialSpec("gaussian_well", (2.0,)), g)
    point, value = find_global_min(f, g)
    assert abs(point[0]) <= g.spacing
    # nearest sample sits half a cell off the true minimum
    assert abs(value - (-2.0)) < 2.0 * (g.spacing / 2) ** 2 + 1e-12


def test_find_global_min_plateau_tie_break():
    g = Grid(1, 20.0, 512)
    f = sample_potential(PotentialSpec("plateau_well", (5.0, 1.0, 2.0)), g)
    point, value = find_global_min(f, g)
    assert value == -5.0
    # lexicographically smallest index on the flat set: leftmost sample in [-1, 1]
    assert -1.0 <= point[0] < -1.0 + g.spacing


def test_find_global_min_constant_field():
    g = Grid(1, 10.0, 32)
    f = Field(np.zeros(32), g)
    point, value = find_global_min(f, g)
    assert value == 0.0
    assert point[0] == g.axis()[0]


def test_find_global_min_matches_sample_min_exhaustively():
    rng = np.random.default_rng(7)
    g = Grid(1, 10.0, 64)
    for _ in range(20):
        f = Field(rng.normal(size=64), g)
        _, value = find_global_min(f, g)
        assert value == f.values.min()


def test_find_global_min_hint_descends():
    g = Grid(1, 20.0, 256)
    f = sample_potential(PotentialSpec("gaussian_well", (2.0,)), g)
    point, value = find_global_min(f, g, hint=(3.0,))
    assert abs(point[0]) <= g.spacing
    assert value == f.values.min()


def test_locate_minimum_exact_for_families():
    g = Grid(1, 20.0, 512)
    x0, v = locate_minimum(PotentialSpec("gaussian_well", (2.0,)), g)
    assert x0[0] == 0.0 and v == -2.0
    x0, v = locate_minimum(PotentialSpec("plateau_well", (5.0, 1.0, 2.0)), g)
    assert x0[0] == 0.0 and v == -5.0


def test_l1_norm_zero():
    g = Grid(1, 10.0, 32)
    assert l1_norm(Field(np.zeros(32), g), g) == 0.0


def test_l1_norm_gaussian_closed_form():
    g = Grid(1, 40.0, 4096)
    f = sample_kernel(KernelSpec("gaussian"), g)
    assert abs(l1_norm(f, g) - math.sqrt(math.pi)) < 1e-6


def test_l1_norm_cauchy_closed_form():
    g = Grid(1, 400.0, 2 ** 16)
    f = sample_kernel(KernelSpec("cauchy_product"), g)
    assert abs(l1_norm(f, g) - math.pi) < 1e-2


@pytest.mark.parametrize("family,params", [
    ("gaussian", ()),
    ("neg_gaussian", ()),
    ("cauchy_product", ()),
    ("exponential", ()),
])
def test_l1_monotone_and_stabilizing(family, params):
    spec = KernelSpec(family, params)
    norms = []
    for k in range(3):
        g = Grid(1, 50.0 * 2 ** k, 1024 * 2 ** k)
        norms.append(l1_norm(sample_kernel(spec, g), g))
    assert norms[0] <= norms[1] + 1e-12 and norms[1] <= norms[2] + 1e-12
    assert abs(norms[2] - norms[1]) < abs(norms[1] - norms[0]) + 1e-9


def test_builtin_kernels_exactly_symmetric_on_grid():
    g = Grid(1, 30.0, 256)
    for family in ("gaussian", "neg_gaussian", "cauchy_product", "exponential"):
        f = sample_kernel(KernelSpec(family), g)
        assert np.array_equal(f.values, np.flip(f.values))


def test_potential_flatness_metadata():
    assert PotentialSpec("gaussian_well", (2.0,)).flatness() == (2.0, 2.0)
    assert PotentialSpec("power_well", (4.0, 1.5)).flatness() == (1.5, 4.0)
    assert PotentialSpec("sqrt_well", (2.0,)).flatness() == (0.5, 2.0)
    alpha, _ = PotentialSpec("plateau_well", (5.0, 1.0, 2.0)).flatness()
    assert math.isinf(alpha)
    assert PotentialSpec("tabulated", dim=1, data=np.zeros(9),
                         data_box=4.0).flatness() == (None, None)
