from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from modsymm.bie.kernel import (
    Convention,
    KernelParts,
    build_g3,
    build_kernel_parts,
    doubled_smooth_kernel,
    full_kernel,
    g1_log_kernel,
    mean_value,
    smooth_kernel,
    wrap_angle,
)
from modsymm.bie.trig import TrigPoly, nodes
from modsymm.core.exceptions import DomainError

UNIT_CAPACITY_RADIUS = float(np.exp(-0.5))


class TestConvention:

    def test_scales(self):
        assert Convention.DOUBLED.scale == 2.0
        assert Convention.CLASSIC.scale == 1.0
        assert Convention.CLASSIC.relative == 0.5
        assert str(Convention.CLASSIC) == "classic"

    def test_wrap_angle(self):
        assert wrap_angle(2.0 * np.pi + 0.1) == pytest.approx(0.1)
        assert wrap_angle(-0.1) == pytest.approx(-0.1)


# --- 1. Smooth kernel ---


class TestSmoothKernel:

    def test_circle_kernel_is_constant(self, circle, rng):
        t, s = rng.uniform(0.0, 2.0 * np.pi, (2, 20))
        values = doubled_smooth_kernel(circle, t, s)
        expected = -np.log(UNIT_CAPACITY_RADIUS) / np.pi
        assert np.max(np.abs(values - expected)) < 1e-13
        assert doubled_smooth_kernel(circle, 1.0, 1.0) == pytest.approx(expected)

    def test_symmetry(self, ellipse, rng):
        t, s = rng.uniform(0.0, 2.0 * np.pi, (2, 20))
        assert np.allclose(
            doubled_smooth_kernel(ellipse, t, s), doubled_smooth_kernel(ellipse, s, t)
        )

    def test_periodicity(self, expblob, rng):
        t, s = rng.uniform(0.0, 2.0 * np.pi, (2, 10))
        assert np.allclose(
            doubled_smooth_kernel(expblob, t + 2.0 * np.pi, s),
            doubled_smooth_kernel(expblob, t, s),
        )

    def test_continuous_across_diagonal(self, ellipse):
        t = 0.8
        diagonal = -np.log(ellipse.speed(t)) / np.pi
        assert doubled_smooth_kernel(ellipse, t, t) == pytest.approx(diagonal, abs=1e-14)
        for h in (1e-7, 1e-5, 1e-3):
            assert doubled_smooth_kernel(ellipse, t + h, t) == pytest.approx(
                diagonal, abs=10 * h
            )

    def test_broadcasting(self, ellipse):
        values = doubled_smooth_kernel(ellipse, nodes(4)[:, None], nodes(4)[None, :])
        assert values.shape == (8, 8)
        assert np.all(np.isfinite(values))

    def test_classic_is_half(self, ellipse, rng):
        t, s = rng.uniform(0.0, 2.0 * np.pi, (2, 10))
        doubled = build_kernel_parts(ellipse, Convention.DOUBLED, 4)
        classic = build_kernel_parts(ellipse, Convention.CLASSIC, 4)
        assert np.allclose(
            smooth_kernel(classic, t, s), 0.5 * smooth_kernel(doubled, t, s), rtol=0, atol=1e-15
        )


class TestLogKernel:

    def test_value(self):
        assert g1_log_kernel(np.pi, 0.0) == pytest.approx(np.log(4.0))

    def test_singular_on_diagonal(self):
        with pytest.raises(DomainError):
            g1_log_kernel(1.0, 1.0)
        with pytest.raises(DomainError):
            g1_log_kernel(np.array([0.5, 2.0]), np.array([0.1, 2.0]))


# --- 2. g3 and kernel parts ---


class TestG3:

    def test_circle_value(self, circle_parts):
        expected = -1.0 / (2.0 * np.pi) + 1.0 / (np.pi * UNIT_CAPACITY_RADIUS)
        g3 = circle_parts.g3
        assert g3.a[0] == pytest.approx(expected, abs=1e-13)
        assert np.max(np.abs(g3.coefficients[1:])) < 1e-13

    def test_classic_is_half(self, ellipse):
        doubled = build_g3(ellipse, Convention.DOUBLED, 8)
        classic = build_g3(ellipse, Convention.CLASSIC, 8)
        assert np.max(np.abs(classic.coefficients - 0.5 * doubled.coefficients)) < 1e-14

    def test_consistent_between_degrees_at_shared_nodes(self, ellipse):
        parts = build_kernel_parts(ellipse, Convention.DOUBLED, 16)
        t = nodes(16)
        assert np.max(np.abs(parts.g3(t) - parts.g3_at(32)(t))) < 1e-10

    def test_g3_at_is_memoized(self, ellipse_parts):
        assert ellipse_parts.g3_at(12) is ellipse_parts.g3
        assert ellipse_parts.g3_at(6) is ellipse_parts.g3_at(6)

    def test_g3_at_builds_once_across_threads(self, ellipse_parts, mocker):
        build = mocker.patch("modsymm.bie.kernel.build_g3", wraps=build_g3)
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda _: ellipse_parts.g3_at(10), range(16)))
        assert build.call_count == 1
        assert all(g3 is results[0] for g3 in results)

    def test_non_positive_length(self, circle):
        with pytest.raises(DomainError):
            KernelParts(
                curve=circle,
                convention=Convention.DOUBLED,
                boundary_length=0.0,
                degree=2,
                speed_samples=np.ones(4),
                g3=TrigPoly.zeros(2),
            )


class TestFullKernel:

    def test_matches_logarithm_of_distance(self, ellipse_parts, ellipse, rng):
        t, s = rng.uniform(0.0, 2.0 * np.pi, (2, 12))
        distance = np.linalg.norm(ellipse.position(t) - ellipse.position(s), axis=-1)
        expected = -np.log(distance) / np.pi + ellipse_parts.g3(t)
        assert np.max(np.abs(full_kernel(ellipse_parts, t, s) - expected)) < 1e-12

    def test_classic_is_half(self, ellipse, rng):
        t, s = rng.uniform(0.0, 2.0 * np.pi, (2, 12))
        doubled = build_kernel_parts(ellipse, Convention.DOUBLED, 8)
        classic = build_kernel_parts(ellipse, Convention.CLASSIC, 8)
        assert np.max(
            np.abs(full_kernel(classic, t, s) - 0.5 * full_kernel(doubled, t, s))
        ) < 1e-13

    def test_scalar_arguments(self, ellipse_parts):
        assert isinstance(full_kernel(ellipse_parts, 0.3, 1.2), float)


class TestMeanValue:

    def test_constant_density_on_circle(self, circle_parts):
        assert mean_value(circle_parts, TrigPoly.constant(1.0, 4)) == pytest.approx(
            1.0 / UNIT_CAPACITY_RADIUS
        )

    def test_zero_mean_density(self, ellipse_parts):
        assert mean_value(ellipse_parts, TrigPoly.sin(3, 8)) == 0.0
