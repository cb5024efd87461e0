import numpy as np
import pytest

from app.datasources.model_sets import density_for_degree, make_mesh
from app.services.diameter import (
    extrapolate_limit,
    is_non_increasing,
    log_rth_diameter_scalar,
    product_formula_check,
    rth_diameter_scalar,
    rth_diameter_vector,
)
from app.services.indexing import dims
from app.services.polyspace import constant, gaussian


def test_interval_degree_two_diameter():
    d = dims(1, 2, 1)
    assert rth_diameter_scalar(make_mesh("interval", 9), constant(), d) == pytest.approx(2 ** (1 / 3), rel=1e-12)


def test_circle_degree_two_diameter():
    d = dims(1, 2, 1)
    assert rth_diameter_scalar(make_mesh("circle", 9), constant(), d) == pytest.approx(np.sqrt(3.0), rel=1e-12)


def test_degree_zero_diameter_is_one():
    assert log_rth_diameter_scalar(make_mesh("interval", 5), constant(), dims(1, 0, 1)) == 0.0


def test_vector_diameter_reduces_to_scalar(mixed_weight):
    mesh = make_mesh("interval", 21)
    d1, d2 = dims(1, 4, 1), dims(1, 4, 2)
    scalar = rth_diameter_scalar(mesh, constant(), d1)
    assert rth_diameter_vector(mesh, constant(), d1) == pytest.approx(scalar, rel=1e-12)
    assert rth_diameter_vector(mesh, constant(1.0, s=2), d2) == pytest.approx(scalar, rel=1e-12)
    g = rth_diameter_scalar(mesh, gaussian(0.5), d1)
    assert rth_diameter_vector(mesh, mixed_weight, d2) == pytest.approx(np.sqrt(scalar * g), rel=1e-10)


def test_constant_weight_scales_the_diameter():
    mesh = make_mesh("interval", 21)
    d = dims(1, 3, 1)
    base = rth_diameter_scalar(mesh, constant(), d)
    c = 2.0
    # |det| picks up c^{r m_r} over ell_r = r m_r / 2 for n = 1
    assert rth_diameter_scalar(mesh, constant(c), d) == pytest.approx(base * c ** (d.r * d.m_r / d.ell_r), rel=1e-10)


@pytest.mark.parametrize("r", range(1, 9))
def test_product_formula_is_exact_for_frame_configurations(r, mixed_weight):
    report = product_formula_check(make_mesh("interval", density_for_degree(r)), mixed_weight, dims(1, r, 2))
    assert report.gap == 0.0
    assert report.passed


@pytest.mark.parametrize("r", [2, 5, 8, 12])
def test_product_formula_with_continuous_directions(r, mixed_weight):
    d = dims(1, r, 2)
    report = product_formula_check(
        make_mesh("interval", density_for_degree(r)), mixed_weight, d, continuous_directions=True, restarts=2, seed=r
    )
    assert report.gap >= -1e-12
    assert report.passed


def test_extrapolation_recovers_a_synthetic_limit():
    rs = np.arange(2, 31)
    values = np.exp(np.log(0.5) + 1.3 * np.log(rs) / rs - 0.4 / rs + 0.2 / rs**2)
    fit = extrapolate_limit(rs, values)
    assert fit.limit == pytest.approx(0.5, rel=1e-10)
    assert fit.residual < 1e-12


def test_extrapolation_needs_enough_degrees():
    with pytest.raises(ValueError):
        extrapolate_limit([4, 5, 6], [1.0, 0.9, 0.8])


def test_is_non_increasing():
    assert is_non_increasing([3.0, 2.0, 2.0, 1.0])
    assert not is_non_increasing([1.0, 1.1])


@pytest.mark.slow
@pytest.mark.parametrize("descriptor,capacity", [("interval", 0.5), ("circle", 1.0)])
def test_diameters_approach_capacity(descriptor, capacity):
    rs = list(range(2, 31))
    values = [rth_diameter_scalar(make_mesh(descriptor, density_for_degree(r)), constant(), dims(1, r, 1)) for r in rs]
    if descriptor == "interval":
        assert is_non_increasing(values, tol=1e-12)
    assert extrapolate_limit(rs, values).limit == pytest.approx(capacity, rel=0.02)
