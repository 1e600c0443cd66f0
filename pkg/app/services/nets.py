"""Explicit coverings and packings of l_p balls in the l_q metric.

Every net returned here is checked by ``coverage_audit`` in the tests and in
the verification suites; every packing by ``packing_audit``. Searches over
eps run on the grid 2^(j/8).
"""
from __future__ import annotations

import itertools
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import ValidationError
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from .. import schemas
from ..config import get_settings
from ..core.errors import InvalidInputError, ResourceError, invalid_from_validation
from .bounds import support_truncation_radius
from .combinat import binom_exact, iter_gamma, separated_family
from .entropy import lp_norms, pietsch_lower_from_packing, target_r

logger = logging.getLogger(__name__)

GRID_STEPS_PER_OCTAVE = 8
MIN_EPS = 2.0**-20
AUDIT_REL_TOL = 1e-9
# lattice spacing is exact only up to rounding of h * z
SEPARATION_REL_TOL = 1e-12
MAX_SIGN_VECTORS = 4096
PACKING_LATTICE_CAP = 200_000
BRUTE_FORCE_CELLS = 5_000_000


def _budget(budget: Optional[schemas.Budget]) -> schemas.Budget:
    return budget if budget is not None else schemas.Budget.from_settings()


def _grid_eps(j: int) -> float:
    return 2.0 ** (j / GRID_STEPS_PER_OCTAVE)


def _check_dimension(m: int, budget: schemas.Budget) -> None:
    if not isinstance(m, int) or m < 1:
        raise InvalidInputError(f"m must be a positive integer, got {m!r}")
    if m > budget.max_dimension:
        raise ResourceError(f"dimension m={m} exceeds the limit {budget.max_dimension}")


def _check_eps(eps: float) -> None:
    if not (eps > 0) or not math.isfinite(eps):
        raise InvalidInputError(f"eps must be a positive real, got {eps!r}")
    if eps < MIN_EPS:
        raise ResourceError(f"eps={eps!r} is below the smallest supported radius 2^-20")


def _pairwise_min(points: np.ndarray, q: float) -> float:
    """Exhaustive minimum pairwise l_q distance (inf for fewer than two points)."""
    count = points.shape[0]
    if count < 2:
        return math.inf
    if q >= 1:
        metric = "chebyshev" if math.isinf(q) else "minkowski"
        kwargs = {} if math.isinf(q) else {"p": q}
        return float(pdist(points, metric, **kwargs).min())
    best = math.inf
    for i in range(count - 1):
        best = min(best, float(lp_norms(points[i + 1 :] - points[i], q).min()))
    return best


def _nearest_distances(centers: np.ndarray, points: np.ndarray, q: float) -> np.ndarray:
    if q >= 1:
        tree = cKDTree(centers)
        distances, _ = tree.query(points, k=1, p=q)
        return np.asarray(distances, dtype=float)
    # quasi-metric: no tree, chunked brute force
    chunk = max(1, BRUTE_FORCE_CELLS // max(1, centers.shape[0] * centers.shape[1]))
    out = np.empty(points.shape[0])
    for start in range(0, points.shape[0], chunk):
        block = points[start : start + chunk]
        diffs = block[:, None, :] - centers[None, :, :]
        out[start : start + chunk] = lp_norms(diffs, q).min(axis=1)
    return out


def _lattice_points(
    m: int,
    p: float,
    step: float,
    offset: float,
    shrink: float,
    inclusive: bool,
    max_count: int,
) -> np.ndarray:
    """Points step*(z + offset), z in Z^m, with ||clip(|c| - shrink, 0)||_p < 1 (or <= 1).

    Built one coordinate at a time, pruning prefixes that already leave the ball.
    """
    reach = math.ceil((1.0 + shrink) / step) + 1
    axis = step * (np.arange(-reach, reach + 1, dtype=float) + offset)
    contrib = np.maximum(np.abs(axis) - shrink, 0.0)
    if not math.isinf(p):
        contrib = contrib**p
    axis_ok = contrib <= 1.0 if inclusive else contrib < 1.0
    axis, contrib = axis[axis_ok], contrib[axis_ok]

    coords = np.zeros((1, 0))
    partial = np.zeros(1)
    for _ in range(m):
        if coords.shape[0] * axis.size > 8 * max_count:
            raise ResourceError(f"lattice enumeration exceeds the budget of {max_count} points")
        if math.isinf(p):
            grown = np.maximum(partial[:, None], contrib[None, :])
        else:
            grown = partial[:, None] + contrib[None, :]
        keep = grown <= 1.0 if inclusive else grown < 1.0
        rows, cols = np.nonzero(keep)
        if rows.size > max_count:
            raise ResourceError(f"lattice enumeration exceeds the budget of {max_count} points")
        coords = np.hstack([coords[rows], axis[cols][:, None]])
        partial = grown[rows, cols]
    return coords


def _origin_net(m: int, pq: schemas.ExponentPair, radius: float) -> schemas.Net:
    return schemas.Net(
        centers=np.zeros((1, m)),
        radius=radius,
        metric_q=pq.q,
        claimed_index=1,
        covered=(schemas.BlockBall(dim=m, p=pq.p),),
    )


def lattice_net(
    m: int,
    pq: schemas.ExponentPair,
    eps: float,
    budget: Optional[schemas.Budget] = None,
) -> schemas.Net:
    """Grid net of B_{l_p^m} with l_q radius eps.

    Cells of side h (h = 2 eps, or 2 eps m^(-1/q) for finite q) have l_q
    circumradius eps; a cell's center is kept iff the cell meets the open
    unit ball. Both the integer and the half-integer lattice are tried and
    the smaller net is returned.
    """
    budget = _budget(budget)
    _check_dimension(m, budget)
    _check_eps(eps)
    if eps >= 1:
        # ||x||_q <= ||x||_p <= 1 for p < q
        return _origin_net(m, pq, eps)
    step = 2.0 * eps if math.isinf(pq.q) else 2.0 * eps * float(m) ** (-1.0 / pq.q)

    best: Optional[np.ndarray] = None
    failure: Optional[ResourceError] = None
    for offset in (0.0, 0.5):
        try:
            centers = _lattice_points(m, pq.p, step, offset, step / 2.0, False, budget.max_centers)
        except ResourceError as exc:
            failure = exc
            continue
        if best is None or centers.shape[0] < best.shape[0]:
            best = centers
    if best is None:
        assert failure is not None
        raise failure
    logger.debug("lattice net m=%d %s eps=%.6g: %d centers", m, pq.label(), eps, best.shape[0])
    return schemas.Net(
        centers=best,
        radius=eps,
        metric_q=pq.q,
        claimed_index=schemas.Net.index_for_count(best.shape[0]),
        covered=(schemas.BlockBall(dim=m, p=pq.p),),
    )


def interval_net(s: int, q: float = math.inf, p: float = 1.0) -> schemas.Net:
    """2^(s-1) equal intervals of [-1, 1]: index s, radius 2^(1-s)."""
    if not isinstance(s, int) or s < 1:
        raise InvalidInputError(f"index s must be a positive integer, got {s!r}")
    if s - 1 > math.log2(get_settings().MAX_CENTERS):
        raise ResourceError(f"interval net of index {s} exceeds the center budget")
    count = 1 << (s - 1)
    radius = 2.0 ** (1 - s)
    centers = -1.0 + radius * (2.0 * np.arange(count, dtype=float) + 1.0)
    return schemas.Net(
        centers=centers[:, None],
        radius=radius,
        metric_q=q,
        claimed_index=s,
        covered=(schemas.BlockBall(dim=1, p=p),),
    )


def scaled_net(net: schemas.Net, t: float) -> schemas.Net:
    if not t > 0:
        raise InvalidInputError("scale factor must be positive")
    return net.model_copy(
        update={
            "centers": net.centers * t,
            "radius": net.radius * t,
            "covered": tuple(b.model_copy(update={"scale": b.scale * t}) for b in net.covered),
        }
    )


def product_net(
    nets: Sequence[schemas.Net],
    q: Optional[float] = None,
    n: Optional[int] = None,
    budget: Optional[schemas.Budget] = None,
) -> schemas.Net:
    """Cartesian product of block nets measured in the l_q sum of the blocks."""
    if not nets:
        raise InvalidInputError("product_net needs at least one block net")
    q = nets[0].metric_q if q is None else q
    for i, block in enumerate(nets, start=1):
        if block.metric_q != q:
            raise InvalidInputError(f"block {i} is measured in l_{block.metric_q}, expected l_{q}")
        if len(block.covered) > 1 and math.isfinite(block.outer_p):
            raise InvalidInputError(f"block {i} is itself an l_p sum of blocks; nested sums are not supported")
    claimed = 1 + sum(block.claimed_index - 1 for block in nets)
    if n is not None and n != claimed:
        raise InvalidInputError(f"index bookkeeping: n - 1 = {n - 1} but sum(n_i - 1) = {claimed - 1}")
    budget = _budget(budget)
    count = math.prod(block.count for block in nets)
    if count > budget.max_centers:
        raise ResourceError(f"product net has {count} centers, over the budget of {budget.max_centers}")

    grids = np.meshgrid(*[np.arange(block.count) for block in nets], indexing="ij")
    parts = [block.centers[g.ravel()] for block, g in zip(nets, grids)]
    radii = [block.radius for block in nets]
    if math.isinf(q):
        radius = max(radii)
    else:
        radius = math.fsum(r**q for r in radii) ** (1.0 / q)
    return schemas.Net(
        centers=np.hstack(parts),
        radius=radius,
        metric_q=q,
        claimed_index=claimed,
        covered=tuple(b for block in nets for b in block.covered),
    )


def _scalar_block_net(pq: schemas.ExponentPair) -> Callable[[int, int], schemas.Net]:
    def generator(i: int, s: int) -> schemas.Net:
        return interval_net(s, q=pq.q, p=pq.p)

    return generator


def block_decomposition_net(
    m: int,
    pq: schemas.ExponentPair,
    block_nets: Optional[Callable[[int, int], schemas.Net]] = None,
    budget: Optional[schemas.Budget] = None,
) -> schemas.Net:
    """Union over Gamma(m) of product nets with block budgets m * eps_i.

    ``block_nets(i, s)`` must return a net of index s and radius <= (m/s)^alpha
    for block i (1-based). Blocks are combined in the l_p sum, so the covered
    set carries ``outer_p = p``.
    """
    settings = get_settings()
    if not isinstance(m, int) or m < 1:
        raise InvalidInputError(f"m must be a positive integer, got {m!r}")
    if m > settings.MAX_BLOCK_M:
        raise ResourceError(f"block decomposition is limited to m <= {settings.MAX_BLOCK_M}, got m={m}")
    budget = _budget(budget)
    generator = block_nets or _scalar_block_net(pq)
    cache: dict[tuple[int, int], schemas.Net] = {}

    def block(i: int, s: int) -> schemas.Net:
        if (i, s) not in cache:
            net = generator(i, s)
            if net.claimed_index > s:
                raise InvalidInputError(f"block {i}: generator returned index {net.claimed_index} > {s}")
            if net.radius > (m / s) ** pq.alpha * (1 + SEPARATION_REL_TOL):
                raise InvalidInputError(f"block {i}: radius {net.radius} exceeds (m/s)^alpha for s={s}")
            cache[(i, s)] = net
        return cache[(i, s)]

    pieces: list[np.ndarray] = []
    total = 0
    radius = 0.0
    covered: Optional[tuple[schemas.BlockBall, ...]] = None
    for sequence in iter_gamma(m):
        nets = []
        for i, w in enumerate(sequence.weights, start=1):
            nets.append(scaled_net(block(i, w), (w / m) ** (1.0 / pq.p)))
        product = product_net(nets, q=pq.q, budget=budget)
        total += product.count
        if total > budget.max_centers:
            raise ResourceError(f"block decomposition exceeds the budget of {budget.max_centers} centers")
        pieces.append(product.centers)
        radius = max(radius, product.radius)
        if covered is None:
            covered = tuple(b.model_copy(update={"scale": 1.0}) for nb in nets for b in nb.covered)

    centers = np.unique(np.vstack(pieces), axis=0)
    claimed = 5 if m == 1 else math.ceil(5 * m / 2) + 2 * m + 1
    logger.debug(
        "block decomposition m=%d %s: %d centers (index %d), radius %.6g",
        m,
        pq.label(),
        centers.shape[0],
        schemas.Net.index_for_count(centers.shape[0]),
        radius,
    )
    assert covered is not None
    return schemas.Net(
        centers=centers,
        radius=radius,
        metric_q=pq.q,
        claimed_index=claimed,
        covered=covered,
        outer_p=pq.p,
    )


def _sign_vectors(m: int, rng: np.random.Generator) -> np.ndarray:
    if m <= 12:
        return np.array(list(itertools.product((-1.0, 1.0), repeat=m)))
    return rng.choice((-1.0, 1.0), size=(MAX_SIGN_VECTORS, m))


def extreme_points(m: int, p: float, seed: int = 0) -> np.ndarray:
    """+-e_i followed by the sign vectors scaled onto the l_p sphere."""
    rng = np.random.default_rng(seed)
    axes = np.vstack([np.eye(m), -np.eye(m)])
    signs = _sign_vectors(m, rng) * float(m) ** (-schemas.reciprocal(p))
    return np.vstack([axes, signs])


def sample_ball(m: int, p: float, count: int, seed: int = 0) -> np.ndarray:
    """Seeded points of B_{l_p^m}: cube draws pushed to the sphere and shrunk by t^(1/m),
    followed by the extreme points."""
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-1.0, 1.0, size=(count, m))
    norms = lp_norms(raw, p)
    norms = np.where(norms > 0, norms, 1.0)
    radii = rng.uniform(0.0, 1.0, size=count) ** (1.0 / m)
    random_points = raw / norms[:, None] * radii[:, None]
    return np.vstack([random_points, extreme_points(m, p, seed)])


def _sphere_directions(block: schemas.BlockBall, count: int, rng: np.random.Generator) -> np.ndarray:
    raw = rng.uniform(-1.0, 1.0, size=(count, block.dim))
    norms = lp_norms(raw, block.p)
    return raw / np.where(norms > 0, norms, 1.0)[:, None]


def sample_covered(
    covered: Sequence[schemas.BlockBall],
    outer_p: float,
    count: int,
    seed: int = 0,
) -> np.ndarray:
    """Points of {x : (sum_i (||x_i||_{p_i} / scale_i)^outer_p)^(1/outer_p) <= 1}."""
    if len(covered) == 1:
        block = covered[0]
        return sample_ball(block.dim, block.p, count, seed) * block.scale
    rng = np.random.default_rng(seed)
    weights = np.abs(sample_ball(len(covered), outer_p, count, seed))
    parts = []
    for i, block in enumerate(covered):
        directions = _sphere_directions(block, weights.shape[0], rng)
        if block.dim > 1:
            # put the block extremes on some rows
            extremes = extreme_points(block.dim, block.p, seed + i)
            rows = min(extremes.shape[0], directions.shape[0])
            directions[:rows] = extremes[rng.permutation(extremes.shape[0])[:rows]]
        parts.append(directions * weights[:, i : i + 1] * block.scale)
    return np.hstack(parts)


def coverage_audit(
    net: schemas.Net,
    samples: Optional[int] = None,
    seed: int = 0,
) -> schemas.AuditResult:
    """Largest distance from a sampled point of the covered set to its nearest center."""
    count = get_settings().AUDIT_SAMPLES if samples is None else samples
    points = sample_covered(net.covered, net.outer_p, count, seed)
    measured = float(_nearest_distances(net.centers, points, net.metric_q).max())
    passed = measured <= net.radius * (1 + AUDIT_REL_TOL)
    if not passed:
        logger.warning("coverage audit failed: measured %.12g > claimed %.12g", measured, net.radius)
    return schemas.AuditResult(samples=points.shape[0], claimed=net.radius, measured=measured, passed=passed)


def packing_audit(packing: schemas.Packing) -> schemas.AuditResult:
    """Exhaustive pairwise check plus ball membership of every point."""
    measured = _pairwise_min(packing.points, packing.metric_q)
    separated = measured >= 2 * packing.separation * (1 - SEPARATION_REL_TOL)
    inside = _inside_covered(packing.points, packing.covered, packing.outer_p)
    return schemas.AuditResult(
        samples=packing.count,
        claimed=2 * packing.separation,
        measured=measured,
        passed=bool(separated and inside),
    )


def _inside_covered(points: np.ndarray, covered: Sequence[schemas.BlockBall], outer_p: float) -> bool:
    start = 0
    block_norms = []
    for block in covered:
        part = points[:, start : start + block.dim]
        start += block.dim
        scale = block.scale if block.scale > 0 else 1.0
        block_norms.append(lp_norms(part, block.p) / scale)
    total = lp_norms(np.column_stack(block_norms), outer_p)
    return bool(np.all(total <= 1.0 + AUDIT_REL_TOL))


def greedy_packing(
    m: int,
    pq: schemas.ExponentPair,
    eps: float,
    trials: Optional[int] = None,
    seed: int = 0,
    budget: Optional[schemas.Budget] = None,
    stop_at: Optional[int] = None,
    strict: bool = False,
    candidates: Optional[np.ndarray] = None,
) -> schemas.Packing:
    """Greedy 2eps-separated subset of B_{l_p^m} in the l_q metric.

    Candidates in order: the extreme points, the origin, the step-2eps grid
    inside the ball, then ``trials`` seeded random ball points, then the rows
    of ``candidates``. A candidate is admitted iff it is at distance >= 2eps
    (> 2eps when ``strict``) from every admitted point. Grid points are
    mutually 2eps apart in every l_q, so outside strict mode they are only
    checked against the non-grid points. ``stop_at`` ends the run once that
    many points are admitted.

    Every candidate left out lies within 2eps of an admitted point, so a run
    without ``stop_at`` is a 2eps-net of its candidates (see ``packing_as_net``).
    """
    budget = _budget(budget)
    _check_dimension(m, budget)
    _check_eps(eps)
    trials = budget.packing_trials if trials is None else trials
    gap = 2.0 * eps
    rng_seed = seed

    extra = np.vstack([extreme_points(m, pq.p, rng_seed), np.zeros((1, m))])
    try:
        grid = _lattice_points(m, pq.p, gap, 0.0, 0.0, True, min(PACKING_LATTICE_CAP, budget.max_centers))
    except ResourceError:
        logger.debug("packing grid for m=%d eps=%.6g skipped: over the candidate cap", m, eps)
        grid = np.zeros((0, m))
    random_points = sample_ball(m, pq.p, trials, rng_seed)[:trials] if trials else np.zeros((0, m))
    if candidates is not None:
        offered = np.asarray(candidates, dtype=float)
        if offered.ndim != 2 or offered.shape[1] != m:
            raise InvalidInputError(f"candidates must be an array of shape (k, {m})")
        if offered.size and not np.all(lp_norms(offered, pq.p) <= 1.0 + AUDIT_REL_TOL):
            raise InvalidInputError(f"candidates must lie in the unit ball of l_{pq.p:g}^{m}")
        random_points = np.vstack([random_points, offered])

    admitted_extra: list[np.ndarray] = []
    admitted_grid: list[np.ndarray] = []

    def far_from(point: np.ndarray, rows: list[np.ndarray] | np.ndarray) -> bool:
        if len(rows) == 0:
            return True
        distance = lp_norms(np.asarray(rows) - point, pq.q).min()
        return bool(distance > gap if strict else distance >= gap)

    def full() -> bool:
        return stop_at is not None and len(admitted_extra) + len(admitted_grid) >= stop_at

    for point in extra:
        if full():
            break
        if far_from(point, admitted_extra):
            admitted_extra.append(point)
    for point in grid:
        if full():
            break
        if far_from(point, admitted_extra) and (not strict or far_from(point, admitted_grid)):
            admitted_grid.append(point)
    grid_rows = np.asarray(admitted_grid, dtype=float).reshape(-1, m)
    for point in random_points:
        if full():
            break
        if far_from(point, admitted_extra) and far_from(point, grid_rows):
            admitted_extra.append(point)

    points = np.asarray(admitted_extra + admitted_grid, dtype=float).reshape(-1, m)
    logger.debug("greedy packing m=%d %s eps=%.6g: %d points", m, pq.label(), eps, points.shape[0])
    return schemas.Packing(
        points=points,
        separation=eps,
        metric_q=pq.q,
        claimed_index=schemas.Packing.index_for_count(points.shape[0]),
        covered=(schemas.BlockBall(dim=m, p=pq.p),),
    )


def packing_as_net(packing: schemas.Packing) -> schemas.Net:
    """Read a maximal eps-packing as a 2eps-net of the candidates it was grown from."""
    try:
        return schemas.Net(
            centers=packing.points,
            radius=2.0 * packing.separation,
            metric_q=packing.metric_q,
            claimed_index=schemas.Net.index_for_count(packing.count),
            covered=packing.covered,
            outer_p=packing.outer_p,
        )
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc


def entropy_bracket(
    m: int,
    n: int,
    pq: schemas.ExponentPair,
    budget: Optional[schemas.Budget] = None,
    seed: int = 0,
    keep_witnesses: bool = False,
) -> schemas.EntropyBracket:
    """Certified [lo, hi] for e_n(id: l_p^m -> l_q^m).

    hi is the smallest grid eps whose lattice net has <= 2^(n-1) centers;
    f_lo the largest grid eps whose greedy packing reaches 2^(n-1)+1 points,
    turned into a bound on e_n by the packing-covering relation.
    """
    budget = _budget(budget)
    _check_dimension(m, budget)
    if not isinstance(n, int) or n < 1:
        raise InvalidInputError(f"n must be a positive integer, got {n!r}")
    if n > budget.max_index:
        raise ResourceError(f"index n={n} exceeds the limit {budget.max_index}")
    centers_allowed = 1 << (n - 1)
    points_needed = centers_allowed + 1
    r = target_r(pq.q)
    lowest_j = -20 * GRID_STEPS_PER_OCTAVE

    truncated = False
    j_hi = 0
    net = lattice_net(m, pq, _grid_eps(0), budget)
    j = -1
    while j >= lowest_j:
        try:
            candidate = lattice_net(m, pq, _grid_eps(j), budget)
        except ResourceError as exc:
            logger.warning("bracket m=%d n=%d: upper search stopped at eps=%.6g (%s)", m, n, _grid_eps(j), exc.detail)
            truncated = True
            break
        if candidate.count > centers_allowed:
            break
        net, j_hi = candidate, j
        j -= 1
    hi = _grid_eps(j_hi)

    # the r-triangle inequality bounds every distance in the ball by 2^(1/r)
    j = math.ceil(GRID_STEPS_PER_OCTAVE * (1.0 / r - 1.0))
    packing: Optional[schemas.Packing] = None
    while j >= lowest_j:
        candidate_packing = greedy_packing(m, pq, _grid_eps(j), seed=seed, budget=budget, stop_at=points_needed)
        if candidate_packing.count >= points_needed:
            packing = candidate_packing
            break
        j -= 1
    f_lo = packing.separation if packing is not None else 0.0
    lo = pietsch_lower_from_packing(f_lo, r)

    bracket = schemas.EntropyBracket(
        m=m,
        n=n,
        pq=pq,
        lo=lo,
        hi=hi,
        f_lo=f_lo,
        r=r,
        grid_ratio=_grid_eps(1),
        net_size=net.count,
        packing_size=packing.count if packing is not None else 0,
        truncated=truncated,
        net=net if keep_witnesses else None,
        packing=packing if keep_witnesses else None,
    )
    logger.debug("bracket m=%d n=%d %s: [%.6g, %.6g]", m, n, pq.label(), lo, hi)
    if truncated:
        raise ResourceError(f"bracket for m={m}, n={n} truncated by the center budget", partial=bracket)
    return bracket


def _pointset_v(n: int) -> tuple[int, bool]:
    v = math.floor(n / (64 * math.e**3))
    if v >= 1:
        return v, False
    return max(1, n // 4), True


def lower_bound_pointset(
    n: int,
    u: int,
    pq: schemas.ExponentPair,
    r: float | schemas.RNormParam = 1.0,
    seed: int = 0,
) -> schemas.Packing:
    """Points sum_{j<=u} 2^(-jr) v^(-1/p) chi_{E(j)} over a bounded-intersection family.

    The family of v-subsets of {1..n} comes from ``separated_family``; all
    L^u choices of (E(1), ..., E(u)) are taken. Points are rescaled into
    B_{l_p^n} when needed and the measured separation constant is reported
    in ``metadata``.
    """
    try:
        r_value = r.r if isinstance(r, schemas.RNormParam) else schemas.RNormParam(r=r).r
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc
    if not isinstance(n, int) or n < 1 or not isinstance(u, int) or u < 1:
        raise InvalidInputError("n and u must be positive integers")
    v, fallback = _pointset_v(n)
    family = separated_family(n, v, seed=seed)
    total = family.size**u
    limit = get_settings().MAX_POINTSET
    if total > limit:
        raise ResourceError(f"I(u) would have {family.size}^{u} = {total} points, over the limit {limit}")

    indicators = np.zeros((family.size, n))
    for row, member in enumerate(family.members):
        indicators[row, [i - 1 for i in member]] = 1.0
    shells = np.array([2.0 ** (-j * r_value) for j in range(1, u + 1)]) * float(v) ** (-1.0 / pq.p)
    choices = np.array(list(itertools.product(range(family.size), repeat=u)), dtype=int).reshape(total, u)
    points = np.einsum("j,cjn->cn", shells, indicators[choices])
    points = np.unique(points, axis=0)

    peak = float(lp_norms(points, pq.p).max())
    rescale = 1.0 / peak if peak > 1.0 else 1.0
    points = points * rescale

    nominal = 2.0 ** (-r_value * u) * float(v) ** (-pq.alpha)
    measured = _pairwise_min(points, pq.q)
    separation = measured / 2 if math.isfinite(measured) else nominal / 2
    metadata = {
        "v": v,
        "fallback": fallback,
        "family_size": family.size,
        "u": u,
        "r": r_value,
        "rescale": rescale,
        "measured_constant": measured / nominal if math.isfinite(measured) else None,
        "cardinality_exponent": math.log2(points.shape[0]) / n,
    }
    logger.debug("I(u) n=%d u=%d v=%d: %d points, min distance %.6g", n, u, v, points.shape[0], measured)
    return schemas.Packing(
        points=points,
        separation=separation,
        metric_q=pq.q,
        claimed_index=schemas.Packing.index_for_count(points.shape[0]),
        covered=(schemas.BlockBall(dim=n, p=pq.p),),
        metadata=metadata,
    )


def support_truncation_net(
    m: int,
    k: int,
    pq: schemas.ExponentPair,
    eps: float,
    r: Optional[float] = None,
    budget: Optional[schemas.Budget] = None,
) -> schemas.Net:
    """Union over k-subsets F of lattice nets of the coordinate ball on F.

    A point of the ball is within eps of a center on its k largest
    coordinates; the rest has l_q norm <= (k+1)^(-alpha).
    """
    budget = _budget(budget)
    _check_dimension(m, budget)
    if not isinstance(k, int) or not 1 <= k <= m:
        raise InvalidInputError(f"k must satisfy 1 <= k <= m, got k={k}, m={m}")
    subsets = binom_exact(m, k)
    base = lattice_net(k, pq, eps, budget)
    if subsets * base.count > budget.max_centers:
        raise ResourceError(f"support truncation net needs {subsets * base.count} centers")
    pieces = []
    for support in itertools.combinations(range(m), k):
        centers = np.zeros((base.count, m))
        centers[:, list(support)] = base.centers
        pieces.append(centers)
    centers = np.unique(np.vstack(pieces), axis=0)
    radius = support_truncation_radius(eps, 1.0, k, pq, target_r(pq.q) if r is None else r)
    return schemas.Net(
        centers=centers,
        radius=radius,
        metric_q=pq.q,
        claimed_index=schemas.Net.index_for_count(centers.shape[0]),
        covered=(schemas.BlockBall(dim=m, p=pq.p),),
    )
