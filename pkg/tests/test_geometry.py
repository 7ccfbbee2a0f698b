"""Geometry layer: angles, frames, steering vectors, element pattern."""

import numpy as np
import pytest
from scipy.integrate import quad

from rislink import ArraySpec, RisSpec
from rislink.errors import CoincidentPoints
from rislink.geometry import (AngleSet, azimuth_rotation_frame,
                              direction_unit, element_gain, element_gain_from_cos,
                              frame_from_plane, geometry_relation, steering_matrix,
                              steering_vector)

WAVELENGTH = 299792458.0 / 28e9


class TestGeometryRelation:
    def test_reference_tx_to_ris(self):
        rel = geometry_relation((0, 25, 2), (40, 50, 2))
        assert rel.distance == pytest.approx(47.17, abs=0.01)
        assert np.degrees(rel.azimuth) == pytest.approx(32.01, abs=0.01)
        assert rel.elevation == 0.0

    def test_vertical(self):
        rel = geometry_relation((0, 0, 0), (0, 0, 5))
        assert np.degrees(rel.elevation) == pytest.approx(90.0)
        assert rel.distance == pytest.approx(5.0)

    def test_reference_ris_to_rx(self):
        rel = geometry_relation((40, 50, 2), (45, 45, 1))
        assert rel.distance == pytest.approx(np.sqrt(51), rel=1e-12)
        assert np.degrees(rel.elevation) == pytest.approx(-8.05, abs=0.01)

    def test_coincident_points_rejected(self):
        with pytest.raises(CoincidentPoints):
            geometry_relation((1, 2, 3), (1, 2, 3))

    def test_distance_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            p, q = rng.uniform(-50, 50, 3), rng.uniform(-50, 50, 3)
            assert geometry_relation(p, q).distance == pytest.approx(
                geometry_relation(q, p).distance, rel=1e-12)

    def test_scaling_leaves_angles(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            p, q = rng.uniform(0.1, 50, 3), rng.uniform(0.1, 50, 3)
            s = rng.uniform(0.1, 10)
            a, b = geometry_relation(p, q), geometry_relation(p * s, q * s)
            assert b.azimuth == pytest.approx(a.azimuth, abs=1e-9)
            assert b.elevation == pytest.approx(a.elevation, abs=1e-9)
            assert b.distance == pytest.approx(a.distance * s, rel=1e-9)


class TestFrames:
    @pytest.mark.parametrize("plane,facing,normal", [
        ("xz", 1, [0, 1, 0]), ("xz", -1, [0, -1, 0]),
        ("yz", 1, [1, 0, 0]), ("yz", -1, [-1, 0, 0]),
    ])
    def test_wall_frames(self, plane, facing, normal):
        frame = frame_from_plane(plane, facing)
        assert np.allclose(frame @ frame.T, np.eye(3))
        assert np.allclose(frame[0], normal)
        # in-plane vertical axis stays the global vertical for wall mounts
        assert np.allclose(frame[2], [0, 0, 1])

    def test_azimuth_rotation(self):
        frame = azimuth_rotation_frame(np.pi / 2)
        assert np.allclose(frame @ frame.T, np.eye(3))
        assert np.allclose(frame[0], [0, 1, 0], atol=1e-12)

    def test_broadside_angles_in_own_frame(self):
        # a point straight along the broadside has zero local azimuth/elevation
        frame = frame_from_plane("xz", -1)
        rel = geometry_relation((40, 50, 2), (40, 30, 2), frame)
        assert rel.azimuth == pytest.approx(0.0, abs=1e-12)
        assert rel.elevation == pytest.approx(0.0, abs=1e-12)


class TestSteering:
    def test_broadside_gives_all_ones(self):
        spec = ArraySpec("upa", 16, (0, 0, 0))
        vec = steering_vector(spec, AngleSet(0.0, 0.0, 10.0), WAVELENGTH)
        assert np.allclose(vec, np.ones(16))

    def test_two_element_endfire(self):
        # half-wavelength ULA along local y, azimuth 90 deg -> opposite phases
        spec = ArraySpec("ula", 2, (0, 0, 0), spacing_wl=0.5)
        vec = steering_vector(spec, AngleSet(np.pi / 2, 0.0, 10.0), WAVELENGTH)
        assert np.allclose(vec, [1.0, -1.0], atol=1e-12)

    def test_upa_unit_modulus_and_norm(self):
        spec = ArraySpec("upa", 4, (0, 0, 0))
        vec = steering_vector(spec, AngleSet(0.7, -0.3, 5.0), WAVELENGTH)
        assert np.allclose(np.abs(vec), 1.0)
        assert np.linalg.norm(vec) == pytest.approx(2.0, rel=1e-12)

    def test_random_directions_unit_modulus(self):
        rng = np.random.default_rng(11)
        spec = RisSpec(36, (0, 0, 0))
        elements = spec.element_positions(WAVELENGTH)
        u = direction_unit(rng.uniform(-np.pi, np.pi, 40), rng.uniform(-np.pi / 2, np.pi / 2, 40))
        mat = steering_matrix(elements, u, WAVELENGTH)
        assert mat.shape == (36, 40)
        assert np.allclose(np.abs(mat), 1.0)
        assert np.allclose(np.linalg.norm(mat, axis=0) ** 2, 36.0)

    def test_ula_layout_has_single_axis(self):
        assert ArraySpec("ula", 5, (0, 0, 0)).grid_shape == (1, 5)
        assert RisSpec(128, (0, 0, 0)).grid_shape == (8, 16)

    def test_ris_grid_centered(self):
        elements = RisSpec(16, (0, 0, 0)).element_positions(WAVELENGTH)
        assert np.allclose(elements.mean(axis=0), 0.0, atol=1e-15)
        assert np.allclose(elements[:, 0], 0.0)


class TestElementGain:
    def test_zero_along_the_plane(self):
        assert element_gain(np.pi / 2, 0.285) == 0.0

    def test_reference_broadside_value(self):
        assert element_gain(0.0, 0.285) == pytest.approx(3.14, abs=1e-12)

    @pytest.mark.parametrize("q", [0.0, 0.285, 1.0, 2.0])
    def test_hemisphere_integral_is_4pi(self, q):
        # solid-angle integral over the front hemisphere, psi measured off broadside
        val, _ = quad(lambda psi: element_gain(psi, q) * np.sin(psi), 0.0, np.pi / 2)
        assert 2 * np.pi * val == pytest.approx(4 * np.pi, abs=1e-3)

    def test_even_and_monotone(self):
        theta = np.linspace(0, np.pi / 2 - 1e-9, 200)
        for q in (0.285, 1.0, 3.0):
            gains = element_gain(theta, q)
            assert np.all(np.diff(gains) <= 1e-12)
            assert np.allclose(element_gain(-theta, q), gains)

    def test_behind_aperture_from_cosine(self):
        assert np.all(element_gain_from_cos(np.array([-0.5, -1e-9, 0.0]), 0.285) == 0.0)
        assert element_gain_from_cos(np.array([1.0]), 0.285)[0] == pytest.approx(3.14)
