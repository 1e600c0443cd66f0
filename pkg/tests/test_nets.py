import math

import numpy as np
import pytest

from app import schemas
from app.core.errors import InvalidInputError, ResourceError
from app.services import nets
from app.services.entropy import lp_norms

PAIRS = [
    schemas.ExponentPair(p=1, q=math.inf),
    schemas.ExponentPair(p=1, q=2),
    schemas.ExponentPair(p=2, q=math.inf),
    schemas.ExponentPair(p=0.5, q=1),
    schemas.ExponentPair(p=0.5, q=0.8),
]


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, math.inf])
def test_sample_ball_stays_inside(p):
    points = nets.sample_ball(3, p, 500, seed=3)
    assert points.shape == (500 + 6 + 8, 3)
    assert np.all(lp_norms(points, p) <= 1 + 1e-12)


def test_sample_ball_is_seeded():
    assert np.array_equal(nets.sample_ball(2, 1.0, 50, seed=9), nets.sample_ball(2, 1.0, 50, seed=9))


class TestLatticeNet:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_interval(self, l1_l2, n):
        net = nets.lattice_net(1, l1_l2, 2.0 ** (1 - n))
        assert net.count <= 2 ** (n - 1)
        assert nets.coverage_audit(net, samples=1000).passed

    def test_large_eps_gives_origin(self, l1_linf):
        net = nets.lattice_net(3, l1_linf, 1.0)
        assert net.count == 1
        assert np.all(net.centers == 0)
        assert net.claimed_index == 1

    def test_cross_polytope_example(self, l1_linf):
        net = nets.lattice_net(2, l1_linf, 0.5)
        assert net.count <= 9
        assert net.count <= 2 ** (net.claimed_index - 1)
        assert nets.coverage_audit(net, samples=2000).passed

    @pytest.mark.parametrize("pq", PAIRS, ids=lambda pq: pq.label())
    @pytest.mark.parametrize("m, eps", [(2, 0.3), (3, 0.45), (2, 0.7)])
    def test_coverage_audit_passes(self, pq, m, eps, small_budget):
        net = nets.lattice_net(m, pq, eps, small_budget)
        audit = nets.coverage_audit(net, samples=1500, seed=m)
        assert audit.passed, audit

    def test_claimed_index(self, l1_linf):
        net = nets.lattice_net(2, l1_linf, 0.2)
        assert 2 ** (net.claimed_index - 2) < net.count <= 2 ** (net.claimed_index - 1)

    def test_dimension_limit(self, l1_linf):
        with pytest.raises(ResourceError, match="dimension"):
            nets.lattice_net(5, l1_linf, 0.5, schemas.Budget(max_dimension=4))

    def test_center_budget(self, l1_linf):
        with pytest.raises(ResourceError, match="budget"):
            nets.lattice_net(3, l1_linf, 0.01, schemas.Budget(max_centers=100))

    def test_tiny_eps(self, l1_linf):
        with pytest.raises(ResourceError):
            nets.lattice_net(1, l1_linf, 2.0**-21)

    def test_rejects_non_positive_eps(self, l1_linf):
        with pytest.raises(InvalidInputError):
            nets.lattice_net(1, l1_linf, 0.0)


class TestGreedyPacking:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_interval(self, l1_linf, n):
        packing = nets.greedy_packing(1, l1_linf, 2.0**-n, trials=50)
        assert packing.count >= 2 ** (n - 1) + 1
        assert nets.packing_audit(packing).passed

    @pytest.mark.parametrize("pq", PAIRS[:3], ids=lambda pq: pq.label())
    def test_eps_above_one_gives_single_point(self, pq):
        packing = nets.greedy_packing(2, pq, 1.2, trials=200)
        assert packing.count == 1
        assert packing.claimed_index is None

    def test_cross_polytope_example(self, l1_linf):
        packing = nets.greedy_packing(2, l1_linf, 0.5, trials=100)
        assert packing.count >= 5
        assert nets.packing_audit(packing).passed

    @pytest.mark.parametrize("pq", PAIRS, ids=lambda pq: pq.label())
    def test_audit_passes(self, pq):
        packing = nets.greedy_packing(3, pq, 0.3, trials=300, seed=2)
        audit = nets.packing_audit(packing)
        assert audit.passed, audit

    def test_stop_at(self, l1_linf):
        assert nets.greedy_packing(1, l1_linf, 2.0**-6, stop_at=5).count == 5

    def test_deterministic(self, l1_l2):
        a = nets.greedy_packing(2, l1_l2, 0.2, trials=200, seed=11)
        b = nets.greedy_packing(2, l1_l2, 0.2, trials=200, seed=11)
        assert np.array_equal(a.points, b.points)

    def test_strict_separation_rejects_ties(self, l1_linf):
        # 0 sits exactly 2eps from both extremes
        assert nets.greedy_packing(1, l1_linf, 0.5, trials=200).count == 3
        assert nets.greedy_packing(1, l1_linf, 0.5, trials=200, strict=True).count == 2

    def test_strict_grid_is_checked_pairwise(self, l1_linf):
        packing = nets.greedy_packing(2, l1_linf, 0.25, trials=0, strict=True)
        assert packing.count >= 2
        assert nets.packing_audit(packing).measured > 0.5

    def test_run_covers_its_candidates(self, l1_linf):
        offered = np.array([[0.3, 0.3], [-0.45, 0.2], [0.05, -0.9]])
        packing = nets.greedy_packing(2, l1_linf, 0.2, trials=0, candidates=offered)
        for row in offered:
            assert lp_norms(packing.points - row, math.inf).min() < 0.4

    def test_candidates_outside_ball(self, l1_linf):
        with pytest.raises(InvalidInputError, match="unit ball"):
            nets.greedy_packing(2, l1_linf, 0.3, trials=0, candidates=np.array([[0.8, 0.8]]))


class TestPackingCoveringSandwich:
    @pytest.mark.parametrize("pq", PAIRS[:2], ids=lambda pq: pq.label())
    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("eps", [0.5, 0.35, 0.25])
    def test_sandwich(self, pq, m, eps):
        net = nets.lattice_net(m, pq, eps)
        separated = nets.greedy_packing(m, pq, eps, trials=300, seed=m, strict=True)
        samples = nets.sample_ball(m, pq.p, 1000, seed=m)
        maximal = nets.greedy_packing(m, pq, eps / 2, trials=0, candidates=np.vstack([samples, separated.points]))
        cover = nets.packing_as_net(maximal)
        assert cover.radius == eps
        # the maximal run covers every sampled point within eps
        assert nets.coverage_audit(cover, samples=1000, seed=m).passed
        assert separated.count <= net.count
        assert separated.count <= maximal.count

    def test_closed_separation_can_exceed_the_net(self, l1_linf):
        assert nets.greedy_packing(1, l1_linf, 0.5, trials=0).count > nets.lattice_net(1, l1_linf, 0.5).count


class TestEntropyBracket:
    def test_scalar_example(self, l1_l2):
        bracket = nets.entropy_bracket(1, 4, l1_l2)
        assert bracket.contains(0.125)
        assert bracket.width_ratio <= 2**0.25

    @pytest.mark.parametrize("m, pq", [(1, schemas.ExponentPair(p=1, q=2)), (2, schemas.ExponentPair(p=0.5, q=math.inf))])
    def test_first_entropy_number_is_one(self, m, pq):
        assert nets.entropy_bracket(m, 1, pq).contains(1.0)

    def test_three_point_packing(self, l1_linf):
        assert nets.entropy_bracket(2, 2, l1_linf).lo >= 0.5

    def test_non_increasing_in_n(self, l1_linf):
        brackets = [nets.entropy_bracket(2, n, l1_linf) for n in range(1, 7)]
        his = [b.hi for b in brackets]
        assert his == sorted(his, reverse=True)
        los = [b.lo for b in brackets]
        assert los == sorted(los, reverse=True)
        assert all(b.lo <= b.hi for b in brackets)

    def test_deterministic(self, l1_linf):
        a = nets.entropy_bracket(2, 3, l1_linf, seed=7)
        b = nets.entropy_bracket(2, 3, l1_linf, seed=7)
        assert (a.lo, a.hi, a.packing_size, a.net_size) == (b.lo, b.hi, b.packing_size, b.net_size)

    def test_witnesses(self, l1_linf):
        bracket = nets.entropy_bracket(2, 3, l1_linf, keep_witnesses=True)
        assert bracket.net is not None and bracket.net.radius == bracket.hi
        assert bracket.packing is not None and bracket.packing.count >= 5
        assert nets.coverage_audit(bracket.net, samples=1000).passed
        assert nets.packing_audit(bracket.packing).passed

    def test_index_limit(self, l1_linf):
        with pytest.raises(ResourceError, match="index"):
            nets.entropy_bracket(1, 5, l1_linf, schemas.Budget(max_index=4))

    def test_truncation_carries_partial(self, l1_linf):
        with pytest.raises(ResourceError) as info:
            nets.entropy_bracket(3, 6, l1_linf, schemas.Budget(max_centers=20))
        partial = info.value.partial
        assert isinstance(partial, schemas.EntropyBracket)
        assert partial.truncated
        assert partial.lo <= partial.hi


class TestProductNet:
    def test_two_blocks(self):
        a = nets.interval_net(2, q=2)
        b = nets.scaled_net(nets.interval_net(2, q=2), 0.5)
        product = nets.product_net([a, b], q=2)
        assert product.count == 4
        assert product.claimed_index == 3
        assert product.radius == pytest.approx(math.hypot(0.5, 0.25), rel=1e-12)
        assert nets.coverage_audit(product, samples=1000).passed

    def test_all_index_one(self):
        product = nets.product_net([nets.interval_net(1), nets.interval_net(1), nets.interval_net(1)])
        assert product.count == 1
        assert product.claimed_index == 1

    def test_sup_combination(self):
        product = nets.product_net([nets.interval_net(3), nets.interval_net(2)], q=math.inf)
        assert product.radius == 0.5
        assert product.count == 8

    def test_index_bookkeeping(self):
        with pytest.raises(InvalidInputError, match="bookkeeping"):
            nets.product_net([nets.interval_net(2), nets.interval_net(2)], n=4)

    def test_metric_mismatch(self):
        with pytest.raises(InvalidInputError):
            nets.product_net([nets.interval_net(2, q=2), nets.interval_net(2, q=math.inf)])

    def test_mixed_blocks_cover_product(self):
        pq = schemas.ExponentPair(p=1, q=2)
        blocks = [nets.lattice_net(2, pq, 0.6), nets.interval_net(3, q=2), nets.lattice_net(1, pq, 0.4)]
        product = nets.product_net(blocks)
        assert product.count == math.prod(b.count for b in blocks)
        assert product.radius == pytest.approx(math.sqrt(sum(b.radius**2 for b in blocks)), rel=1e-12)
        assert nets.coverage_audit(product, samples=1500, seed=5).passed


def test_interval_net():
    net = nets.interval_net(4)
    assert net.count == 8
    assert net.radius == 0.125
    assert net.claimed_index == 4
    assert nets.coverage_audit(net, samples=500).passed


def test_scaled_net():
    net = nets.scaled_net(nets.interval_net(2), 3.0)
    assert net.radius == 1.5
    assert net.covered[0].scale == 3.0
    assert nets.coverage_audit(net, samples=500).passed


class TestBlockDecomposition:
    def test_single_block(self, l1_l2):
        net = nets.block_decomposition_net(1, l1_l2)
        assert net.claimed_index == 5
        assert net.radius <= 1.0

    @pytest.mark.parametrize("q", [2.0, math.inf])
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_radius_and_index(self, q, m):
        pq = schemas.ExponentPair(p=1, q=q)
        net = nets.block_decomposition_net(m, pq)
        assert net.claimed_index <= 5 * m
        assert net.count <= 2 ** (2.5 * m) * 2 ** (2 * m)
        audit = nets.coverage_audit(net, samples=3000, seed=m)
        assert audit.passed
        assert audit.measured <= 3 ** schemas.reciprocal(q) * 1.01

    def test_budget(self, l1_linf):
        with pytest.raises(ResourceError):
            nets.block_decomposition_net(4, l1_linf, budget=schemas.Budget(max_centers=10))

    def test_rejects_weak_generator(self, l1_linf):
        def too_coarse(i, s):
            return nets.scaled_net(nets.interval_net(1, q=math.inf), 5.0)

        with pytest.raises(InvalidInputError):
            nets.block_decomposition_net(2, l1_linf, block_nets=too_coarse)


class TestLowerBoundPointset:
    def test_fallback_family(self, l1_linf):
        packing = nets.lower_bound_pointset(8, 1, l1_linf, 1.0)
        assert packing.metadata["fallback"] is True
        assert packing.metadata["v"] == 2
        assert packing.count == 28
        assert packing.metadata["measured_constant"] == pytest.approx(1.0)
        assert nets.packing_audit(packing).passed

    def test_two_shells(self, l1_l2):
        packing = nets.lower_bound_pointset(8, 2, l1_l2, 1.0)
        assert nets.packing_audit(packing).passed
        assert packing.metadata["measured_constant"] > 0

    def test_single_point_family(self, l1_linf):
        packing = nets.lower_bound_pointset(1, 1, l1_linf, 1.0)
        assert packing.count == 1
        assert packing.claimed_index is None

    def test_small_r_is_rescaled_into_ball(self, l1_linf):
        packing = nets.lower_bound_pointset(8, 2, l1_linf, 0.2)
        assert np.all(lp_norms(packing.points, 1.0) <= 1 + 1e-12)
        assert packing.metadata["rescale"] <= 1.0

    def test_too_many_points(self, l1_linf):
        with pytest.raises(ResourceError, match="limit"):
            nets.lower_bound_pointset(8, 3, l1_linf, 1.0)


def test_support_truncation_net(l1_linf):
    net = nets.support_truncation_net(3, 1, l1_linf, 0.5)
    assert net.radius == pytest.approx(1.0)
    assert net.count == 6
    assert nets.coverage_audit(net, samples=1000).passed
