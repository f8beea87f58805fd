"""
Unit tests for hypercube labelings and the Enflo ratio search.
"""

import sys
import unittest
from pathlib import Path

# Add project root to path for testing
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.errors import CapExceeded, DegenerateLabeling, InvalidMatrix  # noqa: E402
from src.core.generators import gaussian_cloud, lp_point_space, sphere_sample, tripod, unit_square  # noqa: E402
from src.core.metric_core import validate_metric  # noqa: E402
from src.estimators.enflo import HypercubeLabeling, enflo_ratio, enflo_search  # noqa: E402


class TestHypercubeLabeling(unittest.TestCase):
    """Test cases for HypercubeLabeling."""

    def test_sign_convention(self):
        """Bit i of the vertex is set iff eps_i = +1."""
        self.assertEqual(HypercubeLabeling.sign_vector(0, 2), (-1, -1))
        self.assertEqual(HypercubeLabeling.sign_vector(1, 2), (1, -1))
        self.assertEqual(HypercubeLabeling.vertex((-1, 1)), 2)

    def test_from_signs(self):
        labeling = HypercubeLabeling.from_signs({(-1, -1): 0, (1, -1): 1, (-1, 1): 3, (1, 1): 2})
        self.assertEqual(labeling.assign, (0, 1, 3, 2))
        self.assertEqual(labeling.to_dict()["assign"]["++"], 2)

    def test_wrong_size(self):
        with self.assertRaises(InvalidMatrix):
            HypercubeLabeling(N=2, assign=(0, 1, 2))


class TestEnfloRatio(unittest.TestCase):
    """Test cases for enflo_ratio."""

    def test_two_points(self):
        space = validate_metric([[0, 3], [3, 0]])
        report = enflo_ratio(space, HypercubeLabeling(N=1, assign=(0, 1)))
        self.assertEqual(report.numerator, 18.0)
        self.assertEqual(report.denominator, 18.0)
        self.assertEqual(report.ratio, 1.0)

    def test_unit_square_matching_signs(self):
        """4 ordered diagonals against 8 ordered edges."""
        labeling = HypercubeLabeling(N=2, assign=(0, 1, 3, 2))
        report = enflo_ratio(unit_square(), labeling)
        self.assertAlmostEqual(report.numerator, 8.0, places=12)
        self.assertAlmostEqual(report.denominator, 8.0, places=12)
        self.assertAlmostEqual(report.ratio, 1.0, delta=1e-12)

    def test_constant_labeling(self):
        with self.assertRaises(DegenerateLabeling):
            enflo_ratio(unit_square(), HypercubeLabeling(N=2, assign=(1, 1, 1, 1)))

    def test_point_out_of_range(self):
        with self.assertRaises(InvalidMatrix):
            enflo_ratio(unit_square(), HypercubeLabeling(N=1, assign=(0, 7)))


class TestEnfloSearch(unittest.TestCase):
    """Test cases for enflo_search."""

    def test_two_point_exhaustive(self):
        _, report = enflo_search(lp_point_space([[0.0], [2.0]]), N=1)
        self.assertEqual(report.ratio, 1.0)
        self.assertEqual(report.check, "enflo_search_exhaustive")

    def test_unit_square_maximum_is_one(self):
        labeling, report = enflo_search(unit_square(), N=2)
        self.assertAlmostEqual(report.ratio, 1.0, delta=1e-12)
        self.assertEqual(len(labeling.assign), 4)

    def test_euclidean_sets_stay_below_one(self):
        for seed in range(3):
            space = gaussian_cloud(4, 3, seed=seed)
            for N in (1, 2, 3):
                if 4 ** (1 << N) > 10_000_000:
                    continue
                _, report = enflo_search(space, N=N)
                self.assertLessEqual(report.ratio, 1.0 + 1e-9)

    def test_tripod_witness(self):
        labeling, report = enflo_search(tripod(), N=2)
        self.assertAlmostEqual(enflo_ratio(tripod(), labeling).ratio, report.ratio, places=15)
        self.assertIn("assign", report.witness)

    def test_local_never_exceeds_exhaustive(self):
        for space in (tripod(), unit_square(), sphere_sample(4, seed=3), gaussian_cloud(5, 2, seed=8)):
            _, exhaustive = enflo_search(space, N=2)
            for seed in range(3):
                _, local = enflo_search(space, N=2, mode="local", seed=seed, budget=300)
                self.assertLessEqual(local.ratio, exhaustive.ratio + 1e-12)
                self.assertEqual(local.seed, seed)

    def test_local_is_seeded(self):
        a = enflo_search(tripod(), N=2, mode="local", seed=4, budget=200)[1]
        b = enflo_search(tripod(), N=2, mode="local", seed=4, budget=200)[1]
        self.assertEqual(a.to_json(), b.to_json())

    def test_cap(self):
        with self.assertRaises(CapExceeded):
            enflo_search(gaussian_cloud(6, 2, seed=0), N=3, cap=1000)

    def test_single_point(self):
        with self.assertRaises(DegenerateLabeling):
            enflo_search(validate_metric([[0.0]]), N=1)


if __name__ == '__main__':
    unittest.main()
