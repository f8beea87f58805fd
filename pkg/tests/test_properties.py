"""
Property-based tests: invariances and bounds that hold for every seed.
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np
from hypothesis import assume, given, settings, strategies as st

# Add project root to path for testing
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.errors import AntipodalPoints  # noqa: E402
from src.core.generators import gaussian_cloud, sphere_sample, sub_space  # noqa: E402
from src.core.markov_chain import (  # noqa: E402
    ReversibleChain,
    chain_power,
    energy,
    energy_profile,
    is_stationary,
    random_weight_chain,
    validate_chain,
)
from src.core.metric_core import midpoint, validate_metric  # noqa: E402
from src.curvature.quadruples import four_point_minimal_S  # noqa: E402
from src.curvature.sturm import WeightedConfiguration, sturm_defect  # noqa: E402
from src.estimators.enflo import HypercubeLabeling, enflo_ratio, enflo_search  # noqa: E402
from src.estimators.markov_type import markov_ratio_power, markov_ratio_resolvent  # noqa: E402
from src.utils.seeding import make_rng  # noqa: E402

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
sizes = st.integers(min_value=2, max_value=7)
SETTINGS = settings(max_examples=25, deadline=None)


def random_configuration(n: int, seed: int) -> WeightedConfiguration:
    rng = make_rng(seed)
    k = int(rng.integers(1, n + 1))
    indices = rng.choice(n, size=k, replace=False)
    weights = rng.dirichlet(np.ones(k))
    return WeightedConfiguration(indices=tuple(indices), weights=tuple(weights / weights.sum()),
                                 y=int(rng.integers(n)))


class TestSturmProperties(unittest.TestCase):
    """Barycentric defect invariances."""

    @SETTINGS
    @given(seed=seeds, n=sizes, dim=st.integers(min_value=1, max_value=4))
    def test_euclidean_never_obstructs(self, seed, n, dim):
        space = gaussian_cloud(n, dim, seed)
        config = random_configuration(n, seed + 1)
        self.assertLessEqual(sturm_defect(space, config), 1e-9 * space.diameter ** 2)

    @SETTINGS
    @given(seed=seeds, n=sizes)
    def test_permutation_invariance(self, seed, n):
        space = sphere_sample(n, seed)
        config = random_configuration(n, seed)
        order = make_rng(seed + 2).permutation(len(config.indices))
        shuffled = WeightedConfiguration(indices=tuple(config.indices[i] for i in order),
                                         weights=tuple(config.weights[i] for i in order), y=config.y)
        self.assertAlmostEqual(sturm_defect(space, config), sturm_defect(space, shuffled), delta=1e-12)

    @SETTINGS
    @given(seed=seeds, n=sizes, scale=st.floats(min_value=0.1, max_value=10.0))
    def test_quadratic_scaling(self, seed, n, scale):
        space = sphere_sample(n, seed)
        scaled = validate_metric(scale * space.dist)
        config = random_configuration(n, seed)
        expected = scale ** 2 * sturm_defect(space, config)
        self.assertAlmostEqual(sturm_defect(scaled, config), expected, delta=1e-9 * scale ** 2)


class TestGeneratorAndChainProperties(unittest.TestCase):
    """Generator output is a metric; random chains satisfy every constraint."""

    @SETTINGS
    @given(seed=seeds, n=sizes, dim=st.integers(min_value=1, max_value=4),
           p=st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]))
    def test_generators_validate(self, seed, n, dim, p):
        for space in (sphere_sample(n, seed), gaussian_cloud(n, dim, seed, p=p)):
            again = validate_metric(space.dist)
            self.assertEqual(again.n, n)

    @SETTINGS
    @given(seed=seeds, n=sizes)
    def test_random_chain_constraints(self, seed, n):
        chain = random_weight_chain(n, seed)
        self.assertTrue(validate_chain(chain).passed)
        self.assertTrue(is_stationary(chain))

    @SETTINGS
    @given(seed=seeds, n=sizes, l=st.integers(min_value=0, max_value=6), m=st.integers(min_value=0, max_value=6))
    def test_power_semigroup(self, seed, n, l, m):
        chain = random_weight_chain(n, seed)
        np.testing.assert_allclose(chain_power(chain, l + m), chain_power(chain, l) @ chain_power(chain, m),
                                   atol=1e-12)


class TestEnergyProperties(unittest.TestCase):
    """Energy profile bounds."""

    @SETTINGS
    @given(seed=seeds, n=sizes)
    def test_root_energy_subadditive(self, seed, n):
        space = sphere_sample(n, seed)
        root = np.sqrt(energy_profile(space, random_weight_chain(n, seed), 12).values)
        for l in range(1, 7):
            for m in range(1, 7):
                self.assertLessEqual(root[l + m - 1], root[l - 1] + root[m - 1] + 1e-9)

    @SETTINGS
    @given(seed=seeds, n=sizes, dim=st.integers(min_value=1, max_value=4))
    def test_hilbert_linear_growth(self, seed, n, dim):
        space = gaussian_cloud(n, dim, seed)
        E = energy_profile(space, random_weight_chain(n, seed), 10).values
        for l in range(1, 11):
            self.assertLessEqual(E[l - 1], l * E[0] * (1 + 1e-9) + 1e-12)


class TestEnfloProperties(unittest.TestCase):
    """Local search never beats exhaustive enumeration."""

    @settings(max_examples=10, deadline=None)
    @given(seed=seeds, n=st.integers(min_value=2, max_value=4))
    def test_local_below_exhaustive(self, seed, n):
        space = sphere_sample(n, seed)
        _, exhaustive = enflo_search(space, N=2)
        _, local = enflo_search(space, N=2, mode="local", seed=seed, budget=100)
        self.assertLessEqual(local.ratio, exhaustive.ratio + 1e-12)
        self.assertTrue(math.isfinite(local.ratio))


class TestRestrictionAndRelabeling(unittest.TestCase):
    """Quantities that only depend on the metric, not on indices or subsets."""

    @SETTINGS
    @given(seed=seeds, n=st.integers(min_value=3, max_value=7))
    def test_four_point_S_grows_with_the_space(self, seed, n):
        space = sphere_sample(n, seed)
        rng = make_rng(seed + 1)
        k = int(rng.integers(2, n + 1))
        sub = sub_space(space, sorted(rng.choice(n, size=k, replace=False)))
        S_sub, _ = four_point_minimal_S(sub)
        S_full, _ = four_point_minimal_S(space)
        self.assertLessEqual(S_sub, S_full)

    @SETTINGS
    @given(seed=seeds, n=sizes, l=st.integers(min_value=1, max_value=8))
    def test_energy_invariant_under_relabeling(self, seed, n, l):
        space = sphere_sample(n, seed)
        chain = random_weight_chain(n, seed)
        perm = make_rng(seed + 3).permutation(n)
        relabeled = ReversibleChain(pi=chain.pi[perm], A=chain.A[np.ix_(perm, perm)])
        expected = energy(space, chain, l)
        self.assertAlmostEqual(energy(sub_space(space, perm), relabeled, l), expected,
                               delta=1e-12 * max(expected, 1.0))


class TestScaleInvariance(unittest.TestCase):
    """Type ratios are unchanged by d -> c d."""

    @SETTINGS
    @given(seed=seeds, n=sizes, scale=st.floats(min_value=0.1, max_value=10.0),
           alpha=st.floats(min_value=0.05, max_value=0.95), l=st.integers(min_value=1, max_value=6))
    def test_markov_ratios(self, seed, n, scale, alpha, l):
        space = sphere_sample(n, seed)
        scaled = validate_metric(scale * space.dist)
        chain = random_weight_chain(n, seed)
        a = markov_ratio_resolvent(space, chain, alpha).ratio
        self.assertAlmostEqual(markov_ratio_resolvent(scaled, chain, alpha).ratio, a, delta=1e-9 * max(a, 1.0))
        b = markov_ratio_power(space, chain, l).ratio
        self.assertAlmostEqual(markov_ratio_power(scaled, chain, l).ratio, b, delta=1e-9 * max(b, 1.0))

    @SETTINGS
    @given(seed=seeds, n=sizes, scale=st.floats(min_value=0.1, max_value=10.0))
    def test_enflo_ratio(self, seed, n, scale):
        space = sphere_sample(n, seed)
        scaled = validate_metric(scale * space.dist)
        # vertices 0 and 1 share a cube edge, so the edge sum is positive
        rest = make_rng(seed + 5).integers(0, n, size=2)
        labeling = HypercubeLabeling(N=2, assign=(0, 1, int(rest[0]), int(rest[1])))
        a = enflo_ratio(space, labeling).ratio
        self.assertAlmostEqual(enflo_ratio(scaled, labeling).ratio, a, delta=1e-9 * max(a, 1.0))


class TestSphereMidpoint(unittest.TestCase):
    """The computed midpoint halves the geodesic between random pairs."""

    @SETTINGS
    @given(seed=seeds, n=sizes, radius=st.floats(min_value=0.5, max_value=5.0))
    def test_equidistant(self, seed, n, radius):
        space = sphere_sample(n, seed, radius=radius)
        y, z = (int(v) for v in make_rng(seed + 7).choice(n, size=2, replace=False))
        try:
            m = midpoint(space.model, y, z)
        except AntipodalPoints:
            assume(False)
        half = space.dist[y, z] / 2.0
        for end in (y, z):
            self.assertAlmostEqual(space.model.distance(space.model.coords[end], m), half,
                                   delta=1e-9 * half + 1e-15)


if __name__ == '__main__':
    unittest.main()
