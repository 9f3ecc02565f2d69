import math

import numpy as np
import pytest

from varloc.core import Point2, Scenario
from varloc.geometry import Circle, Ellipse, HalfHyperbola, LocalFrame, Singleton
from varloc.majorizer import (
    build_majorizer,
    candidate_blocks,
    describe_candidate,
    discretize,
    export_candidates_csv,
    norm_bound,
    truncation_bound,
)


def make_scenario(anchors, measurements, outlier_count=0):
    return Scenario(
        anchors=tuple(Point2(*a) for a in anchors),
        measurements=tuple(measurements),
        outlier_count=outlier_count,
    )


def random_scenario(rng, m=None, outliers=True):
    m = m or int(rng.integers(3, 6))
    anchors = rng.random((m, 2))
    truth = rng.random(2)
    dists = np.sqrt(((truth[None, :] - anchors) ** 2).sum(axis=1))
    noise = rng.normal(0, 0.05, m)
    count = int(rng.integers(0, m)) if outliers else 0
    if count:
        idx = rng.permutation(m)[:count]
        noise[idx] = rng.normal(0, 1.0, count)
    y = np.abs(dists + noise)
    return make_scenario(anchors, y, count), Point2(*truth)


class TestNormBound:
    def test_hand_example(self):
        sc = make_scenario([(0, 0), (1, 0)], [1.0, 1.0], 0)
        assert norm_bound(sc, Point2(0, 0)) == 3.0

    def test_noiseless_at_truth(self):
        anchors = [(0, 0), (1, 0), (0.3, 0.9)]
        truth = Point2(0.4, 0.2)
        y = [truth.distance_to(Point2(*a)) for a in anchors]
        sc = make_scenario(anchors, y, 0)
        expected = max(Point2(*a).norm() + v for a, v in zip(anchors, y))
        assert norm_bound(sc, truth) == pytest.approx(expected, rel=1e-15)

    def test_at_least_max_measurement(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            sc, _ = random_scenario(rng)
            b = norm_bound(sc, sc.mean_anchor())
            assert b >= max(sc.measurements)


class TestTruncationBound:
    def _frame(self, center, angle, c, k_h):
        return LocalFrame(
            center=center, angle=angle, c=c, k_e=k_h + 10.0, k_h=k_h, idx_hi=0, idx_lo=1
        )

    def test_hand_example_boundary(self):
        # low anchor at (0,0)+R(1,0)=(1,0): norm 1; B=1, c=1, k_h=2
        frame = self._frame(Point2(0, 0), 0.0, 1.0, 2.0)
        u = truncation_bound(frame, 1.0)
        assert u == pytest.approx(math.log(3 + math.sqrt(8)), rel=1e-12)
        assert u == pytest.approx(math.acosh(3.0), rel=1e-12)

    def test_hand_example_bisector(self):
        # center (-1,0), angle 0 puts the low anchor at the origin
        frame = self._frame(Point2(-1, 0), 0.0, 1.0, 0.0)
        u = truncation_bound(frame, 0.0)
        assert u == pytest.approx(math.log(math.sqrt(2) + 1), rel=1e-12)

    def test_u_hat_at_least_one(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            c = float(rng.uniform(1e-6, 5))
            k_h = float(rng.uniform(0, 2 * c))
            frame = self._frame(Point2(*rng.uniform(-3, 3, 2)), float(rng.uniform(-3, 3)), c, k_h)
            u = truncation_bound(frame, float(rng.uniform(0, 10)))
            assert u >= 0.0 and math.isfinite(u)

    def test_zero_c_rejected(self):
        frame = self._frame(Point2(0, 0), 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            truncation_bound(frame, 1.0)


class TestBuildMajorizer:
    def test_two_anchor_both_case_counts(self):
        # c=1, k_e=3, k_h=1 -> k_h <= 2c <= k_e: both curves
        sc = make_scenario([(0, 0), (2, 0)], [2.0, 1.0], 0)
        maj = build_majorizer(sc)
        kinds = [type(c) for c in maj.components]
        assert kinds.count(Singleton) == 2
        assert kinds.count(Circle) == 2
        assert kinds.count(Ellipse) == 1
        assert kinds.count(HalfHyperbola) == 1

    def test_zero_measurements_drop_circles(self):
        sc = make_scenario([(0, 0), (2, 0)], [0.0, 0.0], 0)
        maj = build_majorizer(sc)
        kinds = [type(c) for c in maj.components]
        assert kinds.count(Singleton) == 2
        assert kinds.count(Circle) == 0
        # 2c=2 > k_e=0: hyperbola-only with k_h=0 (perpendicular bisector)
        assert kinds.count(Ellipse) == 0
        assert kinds.count(HalfHyperbola) == 1
        hyp = [c for c in maj.components if isinstance(c, HalfHyperbola)][0]
        assert hyp.frame.k_e == 0.0 and hyp.frame.k_h == 0.0

    def test_three_anchor_all_both(self):
        # equilateral-ish anchors with equal large measurements: every pair Both
        sc = make_scenario([(0, 0), (1, 0), (0.5, 0.9)], [1.0, 1.0, 1.0], 0)
        maj = build_majorizer(sc)
        kinds = [type(c) for c in maj.components]
        assert kinds.count(Singleton) == 3
        assert kinds.count(Circle) == 3
        assert kinds.count(Ellipse) == 3
        assert kinds.count(HalfHyperbola) == 3

    def test_coincident_pair_skipped(self):
        sc = make_scenario([(0, 0), (0, 0), (1, 0)], [1.0, 1.0, 1.0], 0)
        maj = build_majorizer(sc)
        assert maj.skipped_pairs == ((0, 1, "coincident anchors"),)
        pair_curves = [
            c for c in maj.components if isinstance(c, (Ellipse, HalfHyperbola))
        ]
        pairs = {
            tuple(sorted((c.frame.idx_hi, c.frame.idx_lo))) for c in pair_curves
        }
        assert pairs == {(0, 2), (1, 2)}

    def test_all_pairs_degenerate(self):
        sc = make_scenario([(1, 1), (1, 1), (1, 1)], [0.5, 0.5, 0.5], 0)
        maj = build_majorizer(sc)
        kinds = [type(c) for c in maj.components]
        assert kinds.count(Singleton) == 3
        assert kinds.count(Circle) == 3
        assert kinds.count(Ellipse) == 0
        assert kinds.count(HalfHyperbola) == 0
        assert len(maj.skipped_pairs) == 3

    def test_hyperbola_u_finite_nonnegative(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            sc, _ = random_scenario(rng)
            maj = build_majorizer(sc)
            for comp in maj.components:
                if isinstance(comp, HalfHyperbola):
                    assert math.isfinite(comp.u) and comp.u >= 0

    def test_u_scale_validated(self):
        sc = make_scenario([(0, 0), (2, 0)], [2.0, 1.0], 0)
        with pytest.raises(ValueError):
            build_majorizer(sc, u_scale=0.5)


class TestDiscretize:
    def test_count_formula_all_both(self):
        sc = make_scenario([(0, 0), (1, 0), (0.5, 0.9)], [1.0, 1.0, 1.0], 0)
        maj = build_majorizer(sc)
        for grid in (2, 5, 20):
            pts = discretize(maj, grid)
            m = 3
            assert len(pts) == m + m * grid + 2 * grid * (m * (m - 1) // 2)

    def test_grid_validation(self):
        sc = make_scenario([(0, 0), (2, 0)], [2.0, 1.0], 0)
        maj = build_majorizer(sc)
        with pytest.raises(ValueError):
            discretize(maj, 1)

    def test_endpoint_duplication_on_circle(self):
        sc = make_scenario([(0, 0), (2, 0)], [1.0, 1.0], 0)
        maj = build_majorizer(sc)
        points, blocks = candidate_blocks(maj, 2)
        circle_block = [b for b in blocks if isinstance(b[0], Circle)][0]
        comp, start, count = circle_block
        assert count == 2
        np.testing.assert_allclose(points[start], [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(points[start + 1], [1.0, 0.0], atol=1e-12)

    def test_component_order(self):
        sc = make_scenario([(0, 0), (1, 0), (0.5, 0.9)], [1.0, 1.0, 1.0], 0)
        maj = build_majorizer(sc)
        _, blocks = candidate_blocks(maj, 4)
        kinds = [b[0].kind for b in blocks]
        assert kinds == (
            ["singleton"] * 3 + ["circle"] * 3 + ["ellipse", "half_hyperbola"] * 3
        )
        pair_order = [
            tuple(sorted((b[0].frame.idx_hi, b[0].frame.idx_lo)))
            for b in blocks
            if isinstance(b[0], Ellipse)
        ]
        assert pair_order == [(0, 1), (0, 2), (1, 2)]

    def test_all_points_finite_and_hyperbola_norms_bounded(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            sc, _ = random_scenario(rng)
            maj = build_majorizer(sc)
            points, blocks = candidate_blocks(maj, 50)
            assert np.all(np.isfinite(points))
            for comp, start, count in blocks:
                if not isinstance(comp, HalfHyperbola):
                    continue
                frame = comp.frame
                reach = maj.norm_bound_km + frame.c + frame.anchor_lo().norm()
                block = points[start : start + count]
                local = block - [frame.center.x, frame.center.y]
                norms = np.sqrt((local**2).sum(axis=1))
                assert np.all(norms <= reach + 1e-6)

    def test_determinism_bit_identical(self):
        rng = np.random.default_rng(44)
        sc, _ = random_scenario(rng)
        a, _ = candidate_blocks(build_majorizer(sc), 37)
        b, _ = candidate_blocks(build_majorizer(sc), 37)
        assert a.tobytes() == b.tobytes()


class TestProvenanceAndExport:
    def test_describe_candidate(self):
        sc = make_scenario([(0, 0), (1, 0), (0.5, 0.9)], [1.0, 1.0, 1.0], 0)
        maj = build_majorizer(sc)
        _, blocks = candidate_blocks(maj, 4)
        assert describe_candidate(blocks, 0) == "singleton[0]"
        assert describe_candidate(blocks, 2) == "singleton[2]"
        assert describe_candidate(blocks, 3) == "circle[0]@0"
        assert describe_candidate(blocks, 3 + 12) == "ellipse[0,1]@0"
        assert describe_candidate(blocks, 3 + 12 + 4) == "half_hyperbola[0,1]@0"
        with pytest.raises(IndexError):
            describe_candidate(blocks, 10**9)

    def test_export_csv(self, tmp_path):
        sc = make_scenario([(0, 0), (2, 0)], [2.0, 1.0], 0)
        maj = build_majorizer(sc)
        path = tmp_path / "candidates.csv"
        export_candidates_csv(maj, 3, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "component_kind,pair_i,pair_j,grid_index,x_km,y_km"
        points, _ = candidate_blocks(maj, 3)
        assert len(lines) == 1 + len(points)
        assert lines[1].startswith("singleton,0,-1,0,")
        kinds = {line.split(",")[0] for line in lines[1:]}
        assert kinds == {"singleton", "circle", "ellipse", "half_hyperbola"}
