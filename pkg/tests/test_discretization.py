import numpy as np
import pytest

from pxkirchhoff import (
    GridFunction,
    ShapeError,
    build_interval_mesh,
    build_rect_mesh,
    element_gradients,
    gradient_of,
    integrate,
)


def test_uniform_interval():
    mesh = build_interval_mesh(4, 0.0, 1.0)
    assert mesh.n_vertices == 5 and mesh.n_elements == 4
    assert np.allclose(mesh.element_measures, 0.25)
    assert mesh.boundary_mask[0] and mesh.boundary_mask[-1]
    assert not mesh.boundary_mask[1:-1].any()

    mesh2 = build_interval_mesh(2, 0.0, 2.0)
    assert np.allclose(mesh2.element_measures, [1.0, 1.0])


def test_degenerate_interval_rejected():
    with pytest.raises(ShapeError):
        build_interval_mesh(1, 0.0, 1.0)
    with pytest.raises(ShapeError):
        build_interval_mesh(4, 1.0, 1.0)


def test_rect_mesh_counts():
    mesh = build_rect_mesh(2, 2, ((0.0, 0.0), (1.0, 1.0)))
    assert mesh.n_vertices == 9 and mesh.n_elements == 8
    assert mesh.measure == pytest.approx(1.0, rel=1e-12)

    mesh32 = build_rect_mesh(3, 2, ((0.0, 0.0), (3.0, 1.0)))
    assert mesh32.measure == pytest.approx(3.0, rel=1e-12)


def test_rect_boundary_flags():
    mesh = build_rect_mesh(3, 3, ((0.0, 0.0), (1.0, 1.0)))
    on_edge = (
        (mesh.vertices[:, 0] == 0.0) | (mesh.vertices[:, 0] == 1.0)
        | (mesh.vertices[:, 1] == 0.0) | (mesh.vertices[:, 1] == 1.0)
    )
    assert np.array_equal(mesh.boundary_mask, on_edge)


def test_degenerate_rect_rejected():
    with pytest.raises(ShapeError):
        build_rect_mesh(2, 2, ((0.0, 0.0), (0.0, 1.0)))
    with pytest.raises(ShapeError):
        build_rect_mesh(1, 2, ((0.0, 0.0), (1.0, 1.0)))


def test_gradient_affine_1d():
    mesh = build_interval_mesh(10, 0.0, 1.0)
    grads = element_gradients(mesh, mesh.vertices[:, 0])
    assert np.allclose(grads, 1.0)
    assert np.allclose(element_gradients(mesh, np.zeros(11)), 0.0)


def test_gradient_tent():
    mesh = build_interval_mesh(10, 0.0, 1.0)
    x = mesh.vertices[:, 0]
    tent = GridFunction(mesh, 2.0 * np.minimum(x, 1.0 - x))
    grads = gradient_of(tent)[:, 0]
    assert np.allclose(grads[:5], 2.0) and np.allclose(grads[5:], -2.0)


@pytest.mark.parametrize("dim", [1, 2])
def test_affine_reproduction(dim):
    rng = np.random.default_rng(5)
    if dim == 1:
        mesh = build_interval_mesh(13, -0.3, 1.7)
        coef = rng.standard_normal(2)
        values = coef[0] + coef[1] * mesh.vertices[:, 0]
        expected = coef[1:2]
    else:
        mesh = build_rect_mesh(4, 5, ((-1.0, 0.0), (2.0, 2.0)))
        coef = rng.standard_normal(3)
        values = coef[0] + mesh.vertices @ coef[1:]
        expected = coef[1:]
    grads = element_gradients(mesh, values)
    assert np.allclose(grads, expected[None, :], atol=1e-13)


def test_integrate_basics():
    mesh = build_interval_mesh(8, 0.0, 1.0)
    assert integrate(np.ones(8), mesh) == pytest.approx(1.0, rel=1e-12)
    assert integrate(np.full(8, 3.5), mesh) == pytest.approx(3.5, rel=1e-12)
    alternating = np.resize([1.0, -1.0], 8)
    assert integrate(alternating, mesh) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ShapeError):
        integrate(np.ones(7), mesh)


@pytest.mark.parametrize(
    "mesh",
    [
        build_interval_mesh(37, 0.2, 1.9),
        build_rect_mesh(5, 7, ((0.0, -1.0), (2.5, 1.0))),
    ],
)
def test_quadrature_total_measure(mesh):
    expected = 1.7 if mesh.dimension == 1 else 5.0
    assert integrate(np.ones(mesh.n_elements), mesh) == pytest.approx(
        expected, rel=1e-12
    )


def test_refinement_convergence_rate():
    # integral of |d/dx sin(pi x)|^2 over (0,1) is pi^2/2
    errors = []
    for n in (20, 40, 80):
        mesh = build_interval_mesh(n, 0.0, 1.0)
        u = GridFunction(mesh, np.sin(np.pi * mesh.vertices[:, 0]))
        grads = gradient_of(u)[:, 0]
        errors.append(abs(integrate(grads**2, mesh) - np.pi**2 / 2.0))
    assert errors[0] / errors[1] > 3.0
    assert errors[1] / errors[2] > 3.0
    assert errors[2] < 2e-3


def test_gridfunction_zeroes_boundary():
    mesh = build_rect_mesh(3, 3, ((0.0, 0.0), (1.0, 1.0)))
    u = GridFunction(mesh, np.ones(mesh.n_vertices))
    assert np.all(u.nodal_values[mesh.boundary_mask] == 0.0)
    assert np.all(u.nodal_values[~mesh.boundary_mask] == 1.0)
    with pytest.raises(ShapeError):
        GridFunction(mesh, np.ones(3))
