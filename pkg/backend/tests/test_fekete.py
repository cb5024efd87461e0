import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.datasources.model_sets import make_mesh
from app.errors import BudgetExceededError, DimensionError, MeshTooSmallError
from app.services.currents import PointMassCurrent
from app.services.fekete import (
    assemble_vandermonde,
    brute_force_fekete,
    continuous_direction_ascent,
    log_abs_det,
    log_factorial,
    scalar_fekete,
    vector_fekete,
    write_configuration,
)
from app.services.indexing import dims
from app.services.polyspace import FieldWeight, WeightComponent, constant, gaussian


def test_log_abs_det_examples():
    assert log_abs_det(np.eye(5)).value == 0.0
    assert log_abs_det(np.diag([2.0, 2.0])).value == pytest.approx(np.log(4.0))
    singular = log_abs_det(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert singular.singular and singular.value == -np.inf
    with pytest.raises(DimensionError):
        log_abs_det(np.ones((2, 3)))


def test_log_abs_det_invariances(rng):
    M = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    base = log_abs_det(M).value
    perm = rng.permutation(6)
    assert log_abs_det(M[perm][:, rng.permutation(6)]).value == pytest.approx(base, abs=1e-12)
    phased = M.copy()
    phased[2] *= np.exp(0.7j)
    assert log_abs_det(phased).value == pytest.approx(base, abs=1e-12)


def test_assemble_vandermonde_examples(unit_weight, d121):
    currents = [PointMassCurrent([x], [1.0]) for x in (-1.0, 0.0, 1.0)]
    V = assemble_vandermonde(currents, unit_weight, d121)
    assert log_abs_det(V).value == pytest.approx(np.log(2.0))
    assert_allclose(V[:, 0], 1.0)
    repeated = [currents[0], currents[0], currents[2]]
    assert log_abs_det(assemble_vandermonde(repeated, unit_weight, d121)).singular
    with pytest.raises(DimensionError):
        assemble_vandermonde(currents[:2], unit_weight, d121)


def test_constant_column_reads_directions():
    d = dims(1, 1, 2)
    v = np.array([0.6, 0.8j])
    currents = [PointMassCurrent([0.1 * i], v) for i in range(4)]
    V = assemble_vandermonde(currents, constant(1.0, s=2), d)
    assert_allclose(V[:, 0], np.conj(v[0]))
    assert_allclose(V[:, 1], np.conj(v[1]))


def test_scalar_fekete_interval_example(unit_weight, d121):
    res = scalar_fekete(make_mesh("interval", 5), unit_weight, d121)
    assert_allclose(np.sort(res.points[:, 0].real), [-1.0, 0.0, 1.0], atol=1e-15)
    assert res.log_abs_det == pytest.approx(np.log(2.0), abs=1e-12)


def test_scalar_fekete_roots_of_unity():
    m = 5
    res = scalar_fekete(make_mesh("circle", m), constant(), dims(1, m - 1, 1))
    assert len(res.indices) == m
    assert res.log_abs_det == pytest.approx(0.5 * m * np.log(m), abs=1e-10)


def test_scalar_fekete_degree_zero(unit_weight):
    res = scalar_fekete(make_mesh("interval", 4), unit_weight, dims(1, 0, 1))
    assert len(res.indices) == 1
    assert res.log_abs_det == pytest.approx(0.0, abs=1e-14)


def test_scalar_fekete_mesh_too_small(unit_weight):
    with pytest.raises(MeshTooSmallError):
        scalar_fekete(make_mesh("interval", 3), unit_weight, dims(1, 3, 1))


def test_exchange_never_decreases_determinant(rng):
    mesh = make_mesh("interval", 25)
    w = gaussian(0.8)
    d = dims(1, 6, 1)
    start = scalar_fekete(mesh, w, d, max_sweeps=0)
    refined = scalar_fekete(mesh, w, d)
    assert refined.log_abs_det >= start.log_abs_det - 1e-12


def test_vector_fekete_block_example():
    mesh = np.array([[-1.0], [1.0]])
    config = vector_fekete(mesh, constant(1.0, s=2), dims(1, 1, 2))
    assert config.log_abs_det == pytest.approx(np.log(4.0))
    assert_allclose(config.directions, [[1, 0], [0, 1], [1, 0], [0, 1]])
    assert set(config.component_points(0)[:, 0].real) == {-1.0, 1.0}


def test_vector_fekete_reduces_to_scalar(unit_weight, d121):
    mesh = make_mesh("interval", 9)
    config = vector_fekete(mesh, unit_weight, d121)
    assert config.log_abs_det == pytest.approx(scalar_fekete(mesh, unit_weight, d121).log_abs_det)


def test_frame_determinant_factorises(mixed_weight):
    mesh = make_mesh("interval", 13)
    d = dims(1, 3, 2)
    config = vector_fekete(mesh, mixed_weight, d)
    V = assemble_vandermonde(config.currents, mixed_weight, d)
    assert log_abs_det(V).value == pytest.approx(config.log_abs_det, abs=1e-9)
    assert config.log_abs_det == pytest.approx(sum(config.component_log_dets))


def test_disjoint_components_do_not_share_points(mixed_weight):
    config = vector_fekete(make_mesh("interval", 13), mixed_weight, dims(1, 3, 2), disjoint_components=True)
    first, second = config.component_points(0), config.component_points(1)
    assert not set(np.round(first[:, 0].real, 14)) & set(np.round(second[:, 0].real, 14))


def test_joint_exchange_only_improves(mixed_weight):
    mesh = make_mesh("interval", 13)
    d = dims(1, 3, 2)
    plain = vector_fekete(mesh, mixed_weight, d, disjoint_components=True)
    joint = vector_fekete(mesh, mixed_weight, d, disjoint_components=True, joint_exchange=True)
    assert joint.log_abs_det >= plain.log_abs_det - 1e-12


def test_brute_force_examples(unit_weight, d121):
    mesh = make_mesh("interval", 5)
    oracle = brute_force_fekete(mesh, unit_weight, d121)
    assert oracle.log_abs_det == pytest.approx(scalar_fekete(mesh, unit_weight, d121).log_abs_det, abs=1e-12)
    two = brute_force_fekete(make_mesh("interval", 3), constant(1.0, s=2), dims(1, 1, 2))
    assert two.log_abs_det == pytest.approx(np.log(4.0))
    assert set(two.points[:, 0].real) == {-1.0, 1.0}
    with pytest.raises(BudgetExceededError):
        brute_force_fekete(make_mesh("interval", 40), unit_weight, dims(1, 5, 1), budget=1000)


@pytest.mark.parametrize(
    "descriptor,density,r,weight",
    [
        ("interval", 7, 1, constant()),
        ("interval", 7, 2, gaussian(1.5)),
        ("interval", 8, 3, constant()),
        ("circle", 8, 3, constant()),
        ("interval", 6, 1, FieldWeight([WeightComponent("constant", 1.0), WeightComponent("gaussian", 2.0)])),
        ("interval", 7, 2, FieldWeight([WeightComponent("gaussian", 0.5), WeightComponent("gaussian", 2.0)])),
    ],
)
def test_greedy_reaches_oracle_diameter_scale(descriptor, density, r, weight):
    mesh = make_mesh(descriptor, density)
    d = dims(1, r, weight.s)
    greedy = vector_fekete(mesh, weight, d)
    oracle = brute_force_fekete(mesh, weight, d)
    assert greedy.log_abs_det <= oracle.log_abs_det + 1e-9
    assert greedy.rth_diameter >= 0.98 * oracle.rth_diameter


def test_continuous_directions_stay_above_frame(mixed_weight):
    mesh = make_mesh("interval", 9)
    d = dims(1, 2, 2)
    frame = vector_fekete(mesh, mixed_weight, d)
    explored = continuous_direction_ascent(frame, mixed_weight, d, restarts=3, seed=5)
    assert explored.log_abs_det >= frame.log_abs_det - 1e-12
    gap = explored.log_rth_diameter - frame.log_rth_diameter
    assert 0.0 <= gap + 1e-12
    assert gap <= log_factorial(d.N) / (2 * d.weighted_degree) + 1e-9
    V = assemble_vandermonde(explored.currents, mixed_weight, d)
    assert log_abs_det(V).value == pytest.approx(explored.log_abs_det, abs=1e-8)


def test_write_configuration(tmp_path, unit_weight, d121):
    config = vector_fekete(make_mesh("interval", 9), unit_weight, d121)
    csv_path, sidecar = write_configuration(config, tmp_path, "fekete_r2", header={"seed": 0})
    summary = json.loads(sidecar.read_text())
    assert summary["dims"]["N"] == 3
    assert summary["rth_diameter"] == pytest.approx(2 ** (1 / 3))
    assert csv_path.read_text().startswith("# seed: 0")
