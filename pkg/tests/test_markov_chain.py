"""
Unit tests for reversible chains, resolvents and displacement energies.
"""

import sys
import unittest
from pathlib import Path

import numpy as np

# Add project root to path for testing
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.errors import Asymmetric, InvalidArgument, SizeMismatch, ZeroRow  # noqa: E402
from src.core.generators import gaussian_cloud, lp_point_space, product_space, sphere_sample, sub_space  # noqa: E402
from src.core.markov_chain import (  # noqa: E402
    ReversibleChain,
    chain_from_weights,
    chain_power,
    energy,
    energy_at,
    energy_profile,
    is_stationary,
    random_weight_chain,
    resolvent,
    resolvent_series,
    series_horizon,
    validate_chain,
)
from src.core.metric_core import validate_metric  # noqa: E402

FLIP = [[0, 1], [1, 0]]
LAZY = [[1, 1], [1, 1]]


def two_points():
    return lp_point_space([[0.0], [1.0]])


class TestChainConstruction(unittest.TestCase):
    """Test cases for chain_from_weights and validate_chain."""

    def test_flip_and_lazy(self):
        flip = chain_from_weights(FLIP)
        np.testing.assert_array_equal(flip.pi, [0.5, 0.5])
        np.testing.assert_array_equal(flip.A, FLIP)
        lazy = chain_from_weights(LAZY)
        np.testing.assert_array_equal(lazy.A, [[0.5, 0.5], [0.5, 0.5]])

    def test_star_walk(self):
        W = [[0, 1, 1, 1], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]]
        chain = chain_from_weights(W)
        self.assertAlmostEqual(chain.pi[0], 0.5, places=15)
        np.testing.assert_allclose(chain.pi[1:], [1 / 6] * 3, atol=1e-15)

    def test_bad_weights(self):
        with self.assertRaises(Asymmetric):
            chain_from_weights([[0, 1], [2, 0]])
        with self.assertRaises(ZeroRow):
            chain_from_weights([[0, 0], [0, 1]])

    def test_validate_flip(self):
        report = validate_chain(chain_from_weights(FLIP))
        self.assertTrue(report.passed)
        self.assertEqual(report.margin, 0.0)

    def test_validate_reversibility_failure(self):
        """0.5 * 0.1 != 0.5 * 0.5."""
        report = validate_chain(ReversibleChain(pi=[0.5, 0.5], A=[[0.9, 0.1], [0.5, 0.5]]))
        self.assertFalse(report.passed)
        self.assertEqual(report.witness["constraint"], "reversibility")
        self.assertEqual((report.witness["i"], report.witness["j"]), (0, 1))

    def test_validate_mass_failure(self):
        report = validate_chain(ReversibleChain(pi=[0.6, 0.5], A=FLIP))
        self.assertFalse(report.passed)
        self.assertEqual(report.witness["constraint"], "mass")

    def test_random_chain_is_valid_and_seeded(self):
        a = random_weight_chain(6, seed=11)
        b = random_weight_chain(6, seed=11)
        np.testing.assert_array_equal(a.A, b.A)
        self.assertTrue(validate_chain(a).passed)
        self.assertTrue(is_stationary(a))


class TestPowersAndResolvent(unittest.TestCase):
    """Test cases for chain powers and the resolvent."""

    def setUp(self):
        """Set up test fixtures."""
        self.flip = chain_from_weights(FLIP)
        self.lazy = chain_from_weights(LAZY)

    def test_powers(self):
        np.testing.assert_array_equal(chain_power(self.flip, 2), np.eye(2))
        np.testing.assert_allclose(chain_power(self.lazy, 5), self.lazy.A, atol=1e-15)
        np.testing.assert_array_equal(chain_power(random_weight_chain(4, seed=1), 0), np.eye(4))

    def test_resolvent_closed_forms(self):
        np.testing.assert_allclose(resolvent(self.flip, 0.5), [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-15)
        np.testing.assert_allclose(resolvent(self.lazy, 0.5), [[0.75, 0.25], [0.25, 0.75]], atol=1e-15)

    def test_resolvent_small_alpha(self):
        chain = random_weight_chain(5, seed=3)
        np.testing.assert_allclose(resolvent(chain, 1e-8), np.eye(5), atol=1e-7)

    def test_resolvent_rejects_alpha(self):
        with self.assertRaises(InvalidArgument):
            resolvent(self.flip, 1.0)

    def test_series_matches_resolvent(self):
        chain = random_weight_chain(6, seed=5)
        L = series_horizon(0.75)
        self.assertLess(0.75 ** (L + 1), 1e-12)
        np.testing.assert_allclose(resolvent_series(chain, 0.75, L), resolvent(chain, 0.75), atol=1e-11)


class TestEnergy(unittest.TestCase):
    """Test cases for E(l) and energy profiles."""

    def test_flip_energies(self):
        space, flip = two_points(), chain_from_weights(FLIP)
        self.assertEqual(energy(space, flip, 1), 1.0)
        self.assertEqual(energy(space, flip, 2), 0.0)
        self.assertEqual(energy_profile(space, flip, 4).as_list(), [1.0, 0.0, 1.0, 0.0])

    def test_lazy_energies(self):
        space, lazy = two_points(), chain_from_weights(LAZY)
        np.testing.assert_allclose(energy_profile(space, lazy, 3).values, [0.5, 0.5, 0.5], atol=1e-15)

    def test_single_point(self):
        space = validate_metric([[0.0]])
        chain = chain_from_weights([[1.0]])
        self.assertEqual(energy_profile(space, chain, 3).as_list(), [0.0, 0.0, 0.0])

    def test_profile_indexing(self):
        space = sphere_sample(8, seed=1)
        chain = random_weight_chain(8, seed=2)
        profile = energy_profile(space, chain, 6)
        self.assertAlmostEqual(profile[4], energy(space, chain, 4), places=12)
        self.assertEqual(energy_at(space, chain, [2, 6], profile=profile), {2: profile[2], 6: profile[6]})
        with self.assertRaises(IndexError):
            profile[7]

    def test_size_mismatch(self):
        with self.assertRaises(SizeMismatch):
            energy(two_points(), random_weight_chain(3, seed=0), 1)

    def test_product_additivity(self):
        """Energy on paired points of X x Y is E_X + E_Y."""
        X = gaussian_cloud(5, 2, seed=1)
        Y = sphere_sample(5, seed=2)
        P = product_space(X, Y)
        diagonal = sub_space(P, [i * Y.n + i for i in range(5)])
        chain = random_weight_chain(5, seed=3)
        for l in (1, 2, 5):
            self.assertAlmostEqual(energy(diagonal, chain, l), energy(X, chain, l) + energy(Y, chain, l),
                                   delta=1e-9)


if __name__ == '__main__':
    unittest.main()
