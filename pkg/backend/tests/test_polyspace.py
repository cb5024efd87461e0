import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.datasources.csv_mesh import CsvMeshSource, write_mesh_csv
from app.datasources.model_sets import make_mesh
from app.errors import DimensionError, InvalidWeightError
from app.services.indexing import dims
from app.services.polyspace import (
    PolynomialOmegaField,
    change_of_basis,
    constant,
    eval_scalar_basis,
    eval_weighted_basis_matrix,
    eval_weighted_vector_basis,
    family_log_scale,
    gaussian,
    hadamard,
    pairing_matrix,
    perturbed,
    scalar_basis_matrix,
    tabulated,
    weight_from_spec,
)


def test_scalar_basis_examples():
    assert_allclose(eval_scalar_basis([0.0], dims(1, 2, 1)), [1, 0, 0])
    assert_allclose(eval_scalar_basis([2.0], dims(1, 2, 1)), [1, 2, 4])
    assert_allclose(eval_scalar_basis([1.0, 1.0], dims(2, 1, 1)), [1, 1, 1])


def test_weighted_vector_basis_examples():
    out = eval_weighted_vector_basis([1.0], constant(1.0, s=2), dims(1, 1, 2))
    assert_allclose(out, [[1, 0], [0, 1], [1, 0], [0, 1]])
    out = eval_weighted_vector_basis([2.0], gaussian(1.0), dims(1, 1, 1))
    assert_allclose(out[:, 0], [np.exp(-4.0), 2 * np.exp(-4.0)])
    out = eval_weighted_vector_basis([0.0], gaussian(0.3, s=2), dims(1, 3, 2))
    assert np.count_nonzero(out) == 2


def test_one_nonzero_entry_per_basis_vector(rng, mixed_weight):
    pts = rng.uniform(-1, 1, size=(5, 1))
    out = eval_weighted_basis_matrix(pts, mixed_weight, dims(1, 3, 2))
    assert np.all(np.count_nonzero(out, axis=2) == 1)


def test_unit_weight_reduces_to_scalar_basis(rng):
    d = dims(2, 3, 1)
    pts = rng.uniform(-1, 1, size=(7, 2))
    assert_allclose(eval_weighted_basis_matrix(pts, constant(), d)[:, :, 0], scalar_basis_matrix(pts, d))


def test_chebyshev_family_is_triangular_change_of_monomials(rng):
    d = dims(2, 4, 1)
    pts = rng.uniform(-1, 1, size=(9, 2))
    U = change_of_basis(d, "chebyshev")
    assert_allclose(scalar_basis_matrix(pts, d, "chebyshev"), scalar_basis_matrix(pts, d) @ U, atol=1e-12)
    assert np.allclose(U, np.triu(U))
    assert family_log_scale(d, "chebyshev") == pytest.approx(np.sum(np.log(np.abs(np.diag(U)))))


def test_pairing_matrix_conjugates_directions():
    d = dims(1, 1, 2)
    dirs = np.array([[1j, 0.0]])
    E = pairing_matrix([[0.5]], dirs, constant(1.0, s=2), d)
    assert_allclose(E, [[-1j, 0.0, -0.5j, 0.0]])


def test_hadamard_properties(rng):
    assert_allclose(hadamard([1, 2], [3, 4]), [3, 8])
    assert_allclose(hadamard([1j, 0], [1j, 5]), [-1, 0])
    a, b, c = (rng.standard_normal(4) + 1j * rng.standard_normal(4) for _ in range(3))
    assert_allclose(hadamard(a, np.ones(4)), a)
    assert_allclose(hadamard(a, b), hadamard(b, a))
    assert_allclose(hadamard(hadamard(a, b), c), hadamard(a, hadamard(b, c)))
    with pytest.raises(DimensionError):
        hadamard([1, 2], [1, 2, 3])


def test_weights_positive_on_catalogue_meshes():
    weights = [constant(2.0, s=2), gaussian(3.0, s=2), weight_from_spec([{"kind": "constant"}, {"kind": "gaussian", "c": 0.5}])]
    for descriptor in ("interval", "circle", "square", "disk"):
        mesh = make_mesh(descriptor, 5)
        for w in weights:
            assert np.all(w.evaluate(mesh.points) > 0)


def test_invalid_weights_are_reported():
    with pytest.raises(InvalidWeightError):
        constant(0.0)
    mesh = make_mesh("interval", 3)
    w = tabulated(mesh, [1.0, -1.0, 2.0])
    with pytest.raises(InvalidWeightError):
        w.evaluate(mesh.points)
    with pytest.raises(InvalidWeightError):
        eval_weighted_vector_basis([0.0], w, dims(1, 1, 1))


def test_tabulated_weight_is_exact_on_mesh():
    mesh = make_mesh("interval", 5)
    values = np.arange(1.0, 6.0)
    assert_allclose(tabulated(mesh, values).evaluate(mesh.points)[:, 0], values)


def test_perturbed_weight_and_omega_field():
    omega = PolynomialOmegaField.constant([2.0])
    w = perturbed(gaussian(1.0), omega, 0.5)
    x = np.array([[0.3]])
    assert w.evaluate(x)[0, 0] == pytest.approx(np.exp(-0.09) * np.exp(-1.0))
    field = PolynomialOmegaField(np.array([[0.0], [1.0], [2.0]]))
    assert field(np.array([[0.5]]))[0, 0] == pytest.approx(0.5 + 2 * 0.25)


def test_mesh_examples():
    assert_allclose(make_mesh("interval", 3).points[:, 0], [-1, 0, 1], atol=0)
    assert_allclose(make_mesh("circle", 4).points[:, 0], [1, 1j, -1, -1j], atol=1e-15)
    assert make_mesh("square", 3).size == 9
    assert make_mesh("cube", 3).size == 27
    assert make_mesh("interval", 8).size * 2 == make_mesh("interval", 16).size


def test_meshes_are_deterministic_and_inside_their_sets():
    for descriptor in ("interval", "circle", "square", "disk"):
        a, b = make_mesh(descriptor, 7), make_mesh(descriptor, 7)
        assert_allclose(a.points, b.points)
        assert len({tuple(np.round(p, 12)) for p in a.points}) == a.size
    assert np.all(np.abs(make_mesh("disk", 6).points) <= 1 + 1e-12)
    with pytest.raises(DimensionError):
        make_mesh("annulus", 5)
    with pytest.raises(DimensionError):
        make_mesh("interval", 1)


def test_mesh_csv_export_and_import(tmp_path):
    mesh = make_mesh("circle", 6)
    path = write_mesh_csv(mesh, tmp_path / "circle.csv")
    loaded = CsvMeshSource(path).load()
    assert_allclose(loaded.points, mesh.points, atol=0)
