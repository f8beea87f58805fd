"""
Unit tests for the verification suites.
"""

import sys
import unittest
from pathlib import Path

# Add project root to path for testing
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.errors import DegenerateChain, InvalidArgument, InvalidP, UnsupportedModel  # noqa: E402
from src.core.generators import gaussian_cloud, lp_point_space, sphere_sample, tripod, unit_square  # noqa: E402
from src.core.markov_chain import chain_from_weights, random_weight_chain  # noqa: E402
from src.core.metric_core import validate_metric  # noqa: E402
from src.utils.seeding import make_rng  # noqa: E402
from src.verify import suites  # noqa: E402

FLIP = [[0, 1], [1, 0]]


def two_points():
    return lp_point_space([[0.0], [1.0]])


class TestHalvingAndBounds(unittest.TestCase):
    """Test cases for lemma_half, main_bound and dyadic_bound."""

    def setUp(self):
        """Set up test fixtures."""
        self.sphere = sphere_sample(15, seed=0)
        self.chain = random_weight_chain(15, seed=1)

    def test_lemma_half_on_sphere(self):
        report = suites.verify_lemma_half(self.sphere, self.chain, L=8)
        self.assertTrue(report.passed)
        self.assertEqual(len(report.cases), 8)
        self.assertTrue(all(not c.tags for c in report.cases))

    def test_lemma_half_flip_chain(self):
        """E alternates 1, 0, 1, 0 so E(2l) = 0."""
        report = suites.verify_lemma_half(two_points(), chain_from_weights(FLIP), L=4)
        self.assertTrue(report.passed)
        self.assertEqual(report.cases[0].margin, 2.0)

    def test_lemma_half_tags_unknown_curvature(self):
        report = suites.verify_lemma_half(tripod(), random_weight_chain(4, seed=0), L=4)
        self.assertTrue(all(suites.UNVERIFIED in c.tags for c in report.cases))
        self.assertTrue(report.passed)
        self.assertIsNone(report.worst_margin)

    def test_motionless_chain(self):
        with self.assertRaises(DegenerateChain):
            suites.verify_lemma_half(two_points(), chain_from_weights([[1, 0], [0, 1]]), L=2)

    def test_main_bound_flat_adds_hilbert_cases(self):
        space = gaussian_cloud(8, 3, seed=2)
        report = suites.verify_main_bound(space, random_weight_chain(8, seed=3), L=16)
        self.assertTrue(report.passed)
        self.assertEqual({c.check for c in report.cases}, {"main_bound", "hilbert_bound"})
        hilbert = [c for c in report.cases if c.check == "hilbert_bound"]
        self.assertTrue(all(c.ratio <= 1.0 + 1e-9 for c in hilbert))

    def test_main_bound_on_sphere(self):
        report = suites.verify_main_bound(self.sphere, self.chain, L=32)
        self.assertTrue(report.passed)
        self.assertEqual({c.check for c in report.cases}, {"main_bound"})

    def test_dyadic_bound(self):
        report = suites.verify_dyadic_bound(self.sphere, self.chain, L=32)
        self.assertTrue(report.passed)
        self.assertEqual([c.l for c in report.cases], [1, 2, 4, 8, 16, 32])


class TestRemarkAndResolvent(unittest.TestCase):
    """Test cases for the remark inequality and the resolvent series."""

    def test_remark_flip_margin(self):
        """Left side 0.75, right side 0.25 at alpha = 0.5, l = 1."""
        report = suites.verify_remark_inequality(two_points(), chain_from_weights(FLIP), 0.5, 1)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.denominator, 0.75, places=15)
        self.assertAlmostEqual(report.numerator, 0.25, places=15)
        self.assertAlmostEqual(report.margin, 0.5, places=15)

    def test_remark_bad_arguments(self):
        chain = chain_from_weights(FLIP)
        with self.assertRaises(InvalidArgument):
            suites.verify_remark_inequality(two_points(), chain, 1.0, 1)
        with self.assertRaises(InvalidArgument):
            suites.verify_remark_inequality(two_points(), chain, 0.5, 0)

    def test_remark_suite_on_sphere(self):
        space = sphere_sample(8, seed=3)
        report = suites.remark_suite(space, random_weight_chain(8, seed=4), [0.25, 0.5, 0.9], L=4)
        self.assertTrue(report.passed)
        self.assertEqual(len(report.cases), 12)

    def test_resolvent_series_flip(self):
        report = suites.verify_resolvent_series(two_points(), chain_from_weights(FLIP), 0.5, L=40)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.numerator, 1 / 6, places=15)
        self.assertAlmostEqual(report.denominator, 1 / 6, delta=1e-10)
        self.assertAlmostEqual(report.witness["resolvent_ratio"], 1 / 3, places=12)

    def test_resolvent_series_random_cases(self):
        rng = make_rng(7)
        for k in range(50):
            n = int(rng.integers(2, 9))
            space = sphere_sample(n, seed=k)
            chain = random_weight_chain(n, seed=100 + k)
            alpha = float(rng.uniform(0.05, 0.95))
            report = suites.verify_resolvent_series(space, chain, alpha)
            self.assertTrue(report.passed, f"case {k}: {report.witness}")


class TestSpaceSuites(unittest.TestCase):
    """Test cases for the Enflo, Ptolemy, midpoint and Sturm suites."""

    def test_enflo_bound_two_points(self):
        report = suites.verify_enflo_bound(two_points(), S=1.0, N=2)
        self.assertTrue(report.passed)
        self.assertEqual(report.cases[0].ratio, 1.0)
        self.assertEqual(report.cases[0].tags, [])

    def test_enflo_hypothesis(self):
        self.assertTrue(suites.enflo_hypothesis(unit_square(), 1.0))
        self.assertFalse(suites.enflo_hypothesis(unit_square(), 0.5))
        self.assertTrue(suites.enflo_hypothesis(gaussian_cloud(3, 2, seed=0, p=4.0), 3 ** 0.5))
        self.assertFalse(suites.enflo_hypothesis(tripod(), 10.0))

    def test_enflo_bound_tripod_is_report_only(self):
        report = suites.verify_enflo_bound(tripod(), S=1.0, N=1)
        self.assertIn(suites.UNVERIFIED, report.cases[0].tags)
        self.assertTrue(report.passed)

    def test_ptolemy_implication(self):
        for space in (gaussian_cloud(6, 3, seed=1), unit_square(), tripod()):
            report = suites.verify_ptolemy_implication(space)
            self.assertTrue(report.passed, space.source)
            self.assertEqual([c.check for c in report.cases],
                             ["ptolemy_implies_four_point", "triangle_step", "ptolemy"])
        tagged = suites.verify_ptolemy_implication(tripod()).cases[2]
        self.assertIn(suites.UNVERIFIED, tagged.tags)

    def test_four_point_from_midpoint(self):
        report = suites.verify_four_point_from_midpoint(gaussian_cloud(6, 2, seed=3))
        self.assertTrue(report.passed)
        self.assertEqual(report.cases[0].tags, [])
        sphere = suites.verify_four_point_from_midpoint(sphere_sample(6, seed=0))
        self.assertIn(suites.UNVERIFIED, sphere.cases[0].tags)
        with self.assertRaises(UnsupportedModel):
            suites.verify_four_point_from_midpoint(tripod())

    def test_sturm_expectations(self):
        self.assertTrue(suites.verify_sturm(tripod(), trials=100, expect="obstruction").passed)
        self.assertFalse(suites.verify_sturm(tripod(), trials=100, expect="none").passed)
        unknown = suites.verify_sturm(tripod(), trials=100)
        self.assertIn(suites.UNVERIFIED, unknown.cases[0].tags)
        sphere = suites.verify_sturm(sphere_sample(10, seed=2), trials=200, seed=2)
        self.assertTrue(sphere.passed)
        self.assertEqual(sphere.cases[0].tags, [])
        with self.assertRaises(InvalidArgument):
            suites.verify_sturm(tripod(), trials=10, expect="maybe")


class TestChainFreeSuites(unittest.TestCase):
    """Test cases for subadditivity, induction, cotype and Banach suites."""

    def test_subadditivity_holds_anywhere(self):
        for space in (tripod(), validate_metric([[0, 1, 5], [1, 0, 4.5], [5, 4.5, 0]])):
            report = suites.verify_energy_subadditivity(space, random_weight_chain(space.n, seed=2), L=12)
            self.assertTrue(report.passed)
            self.assertEqual(len(report.cases), 11)

    def test_induction_step(self):
        report = suites.verify_induction_step(samples=500)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(float(suites.induction_factor(1.0)), 1.0, places=12)
        with self.assertRaises(InvalidArgument):
            suites.verify_induction_step(samples=1)

    def test_uniform_chain_is_doubly_stochastic(self):
        chain = suites.uniform_chain(5, make_rng(3))
        for value in chain.pi:
            self.assertAlmostEqual(value, 0.2, places=14)

    def test_cotype_bound(self):
        for p in (1.5, 2.0):
            report = suites.verify_cotype_bound(p, trials=10, seed=1)
            self.assertTrue(report.passed, f"p={p}: {report.worst_margin}")
            self.assertEqual(len(report.cases), 10)
        with self.assertRaises(InvalidP):
            suites.verify_cotype_bound(3.0)

    def test_banach_moduli(self):
        report = suites.verify_banach_moduli(pairs=2000, dim=6)
        self.assertTrue(report.passed)
        self.assertEqual(len(report.cases), 6)
        self.assertEqual(report.cases[-1].check, "parallelogram_equality")


if __name__ == '__main__':
    unittest.main()
