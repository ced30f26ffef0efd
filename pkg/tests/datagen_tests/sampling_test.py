import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from LagrangianGP.datagen.sampling import (Box, SampleSet, SampleGenerator, halton, uniform_mesh, probe_mesh,
                                           fill_distance, uniform_fill_distance, MAX_HALTON_DIM)
from LagrangianGP.datastructures import PhasePoint

UNIT_SQUARE = Box([0.0, 0.0], [1.0, 1.0])


# ==== boxes and sample sets =====

def test_box():
    box = Box.cube(3)
    assert box.dim == 3
    assert_array_equal(box.centre, 0.0)
    assert_array_equal(box.widths, 2.0)
    assert box.contains([1.0, -1.0, 0.0])
    assert not box.contains([1.1, 0.0, 0.0])
    assert_array_equal(box.contains(np.array([[0.0, 0.0, 0.0], [2.0, 0.0, 0.0]])), [True, False])
    assert box == Box([-1, -1, -1], [1, 1, 1])
    with pytest.raises(ValueError):
        Box([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        Box([0.0], [1.0, 2.0])
    with pytest.raises(TypeError):
        box.volume = 8.0


def test_sample_set_validation():
    s = SampleSet([[0.1, 0.2], [0.3, 0.4]], UNIT_SQUARE)
    assert len(s) == 2
    assert s.generator is SampleGenerator.EXPLICIT
    assert isinstance(s.phase_points()[0], PhasePoint)
    assert_array_equal(s[1], [0.3, 0.4])
    with pytest.raises(ValueError):
        SampleSet([[0.1, 1.2]], UNIT_SQUARE)
    with pytest.raises(ValueError):
        SampleSet([[0.1, 0.2, 0.3]], UNIT_SQUARE)
    with pytest.raises(ValueError):
        s.points[0, 0] = 0.5


# ==== Halton sequences =====

def test_halton_first_points():
    s = halton(3, 2)
    assert s.generator is SampleGenerator.HALTON
    assert_allclose(s.points, [[0.5, 1 / 3], [0.25, 2 / 3], [0.75, 1 / 9]], rtol=1e-15)


def test_halton_mapped_into_cube():
    s = halton(1, 2, Box.cube(2))
    assert_allclose(s.points[0], [0.0, -1 / 3], atol=1e-15)


def test_halton_prefixes_are_nested():
    short = halton(20, 4, Box.cube(4))
    long = halton(50, 4, Box.cube(4))
    assert_array_equal(long.points[:20], short.points)
    assert len(halton(0, 4)) == 0


def test_halton_limits():
    assert halton(2, MAX_HALTON_DIM).points.shape == (2, MAX_HALTON_DIM)
    with pytest.raises(ValueError):
        halton(2, MAX_HALTON_DIM + 1)
    with pytest.raises(ValueError):
        halton(-1, 2)
    with pytest.raises(ValueError):
        halton(2, 3, UNIT_SQUARE)


# ==== meshes and fill distances =====

def test_uniform_mesh():
    mesh = uniform_mesh([10, 11], Box.cube(2))
    assert len(mesh) == 110
    assert mesh.generator is SampleGenerator.UNIFORM_MESH
    assert_array_equal(mesh.points[0], [-1.0, -1.0])
    assert_array_equal(mesh.points[-1], [1.0, 1.0])
    assert_array_equal(uniform_mesh(1, UNIT_SQUARE).points, [[0.5, 0.5]])
    with pytest.raises(ValueError):
        uniform_mesh(0, UNIT_SQUARE)


def test_fill_distance_of_uniform_meshes():
    probe = probe_mesh(UNIT_SQUARE, 100)
    for n in (2, 3, 5, 11):
        h = fill_distance(uniform_mesh(n, UNIT_SQUARE), probe)
        formula = uniform_fill_distance(n, UNIT_SQUARE)
        assert_allclose(formula, np.sqrt(2) / (2 * (n - 1)), rtol=1e-15)
        assert formula - 0.01 * np.sqrt(2) <= h <= formula + 1e-12


def test_fill_distance_1d():
    line = Box([0.0], [1.0])
    assert_allclose(fill_distance(uniform_mesh(11, line)), 0.05, atol=1e-12)


def test_fill_distance_of_single_centre_point():
    assert_allclose(fill_distance(uniform_mesh(1, UNIT_SQUARE)), np.sqrt(2) / 2, rtol=1e-12)
    assert_allclose(uniform_fill_distance(1, UNIT_SQUARE), np.sqrt(2) / 2, rtol=1e-15)


def test_fill_distance_of_halton_sets():
    probe = probe_mesh(UNIT_SQUARE, 100)
    previous = np.inf
    for n in (3, 5, 9):
        h = fill_distance(halton(n * n, 2), probe)
        assert h <= previous
        assert h <= 3 * uniform_fill_distance(n, UNIT_SQUARE)
        previous = h


def test_fill_distance_empty_set():
    with pytest.raises(ValueError):
        fill_distance(halton(0, 2))


def test_probe_mesh():
    assert probe_mesh(UNIT_SQUARE, 10).shape == (121, 2)
    a = probe_mesh(Box.cube(4), 10, n_augment=50)
    b = probe_mesh(Box.cube(4), 10, n_augment=50)
    assert_array_equal(a, b)
    assert np.all(Box.cube(4).contains(a))
