"""Exact combinatorial constructions: the dominating family Gamma(m) and
bounded-intersection families of v-subsets."""
from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .. import schemas
from ..config import get_settings
from ..core.errors import DomainError, InvalidInputError, ResourceError
from ..schemas import allowed_weights

logger = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-12
EXHAUSTIVE_SUBSETS = 1_000_000


def binom_exact(m: int, k: int) -> int:
    if m < 0 or k < 0:
        raise InvalidInputError("binomial arguments must be non-negative")
    return math.comb(m, k)


def dyadic_levels(m: int) -> list[Fraction]:
    """E(m) = {2^k/m : 2^k < m} together with 1, ascending and duplicate-free."""
    if m < 1:
        raise InvalidInputError("m must be a positive integer")
    return [Fraction(w, m) for w in allowed_weights(m)]


def _tail_ok(m: int, weights: Sequence[int]) -> bool:
    # #{i : eps_i >= t} <= 2/t for every t in E(m), i.e. count * w <= 2m
    for w in allowed_weights(m):
        count = sum(1 for x in weights if x >= w)
        if count * w > 2 * m:
            return False
    return True


def _is_member(m: int, weights: Sequence[int]) -> bool:
    return sum(weights) <= 3 * m and _tail_ok(m, weights)


def gamma_membership(eps: schemas.EpsilonSequence) -> bool:
    return _is_member(eps.m, eps.weights)


def _level_profiles(m: int) -> Iterator[tuple[int, ...]]:
    """Count vectors c (one entry per level, descending) of members of Gamma(m)."""
    levels = list(reversed(allowed_weights(m)))

    def extend(idx: int, prefix: list[int], used: int, total: int) -> Iterator[tuple[int, ...]]:
        if idx == len(levels) - 1:
            rest = m - used
            w = levels[idx]
            # every entry is >= the smallest level, so its tail count is m
            if total + rest * w <= 3 * m and (used + rest) * w <= 2 * m:
                yield tuple(prefix + [rest])
            return
        w = levels[idx]
        for c in range(0, m - used + 1):
            tail = used + c
            if tail * w > 2 * m or total + c * w > 3 * m:
                break
            yield from extend(idx + 1, prefix + [c], tail, total + c * w)

    yield from extend(0, [], 0, 0)


def gamma_count(m: int) -> int:
    """Exact cardinality of Gamma(m) from its level-count profiles."""
    if m < 1:
        raise InvalidInputError("m must be a positive integer")
    return sum(ways for _, ways in gamma_representatives(m))


def gamma_representatives(m: int) -> Iterator[tuple[schemas.EpsilonSequence, int]]:
    """One non-increasing member per level profile, with the number of its rearrangements.

    Membership only depends on the multiset of values, so auditing these
    representatives audits all of Gamma(m).
    """
    if m < 1:
        raise InvalidInputError("m must be a positive integer")
    levels = list(reversed(allowed_weights(m)))
    for counts in _level_profiles(m):
        weights = tuple(w for w, c in zip(levels, counts) for _ in range(c))
        ways = math.factorial(m)
        for c in counts:
            ways //= math.factorial(c)
        yield schemas.EpsilonSequence.model_construct(m=m, weights=weights), ways


def _distinct_permutations(values: list[int]) -> Iterator[tuple[int, ...]]:
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    keys = sorted(counts, reverse=True)
    n = len(values)
    current: list[int] = []

    def place() -> Iterator[tuple[int, ...]]:
        if len(current) == n:
            yield tuple(current)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                current.append(key)
                yield from place()
                current.pop()
                counts[key] += 1

    yield from place()


def iter_gamma(m: int) -> Iterator[schemas.EpsilonSequence]:
    levels = list(reversed(allowed_weights(m)))
    for counts in _level_profiles(m):
        multiset = [w for w, c in zip(levels, counts) for _ in range(c)]
        for weights in _distinct_permutations(multiset):
            # members satisfy the level constraint by construction
            yield schemas.EpsilonSequence.model_construct(m=m, weights=weights)


def gamma_enumerate(m: int, limit: int | None = None) -> list[schemas.EpsilonSequence]:
    if m < 1:
        raise InvalidInputError("m must be a positive integer")
    limit = limit or get_settings().MAX_GAMMA_M
    if m > limit:
        raise ResourceError(f"Gamma(m) enumeration is limited to m <= {limit}, got m={m}")
    family = list(iter_gamma(m))
    logger.debug("enumerated Gamma(%d): %d sequences", m, len(family))
    return family


def gamma_dominate(alpha: Sequence[float]) -> schemas.EpsilonSequence:
    """Member of Gamma(m) dominating a probability vector pointwise.

    Each eps_i is the smallest element of E(m) that is >= alpha_i.
    """
    m = len(alpha)
    if m == 0:
        raise InvalidInputError("alpha must be non-empty")
    values = [float(a) for a in alpha]
    for i, a in enumerate(values, start=1):
        if not (0.0 <= a <= 1.0):
            raise InvalidInputError(f"alpha_{i} = {a} is outside [0, 1]")
    if abs(math.fsum(values) - 1.0) > SIMPLEX_TOL:
        raise InvalidInputError(f"alpha must sum to 1, got {math.fsum(values)!r}")
    levels = allowed_weights(m)
    weights = []
    for a in values:
        # exact comparison of the float against w/m
        scaled = Fraction(a) * m
        weights.append(next(w for w in levels if w >= scaled))
    return schemas.EpsilonSequence(m=m, weights=tuple(weights))


def _mask(member: Sequence[int]) -> int:
    return sum(1 << (i - 1) for i in member)


def counting_lower_bound(ground_size: int, v: int) -> Fraction:
    """C(g,v) / sum_{j > v/2} C(v,j) C(g-v,v-j): size guaranteed by any maximal family."""
    if not 1 <= v <= ground_size:
        raise DomainError(f"hypothesis 1 <= v <= ground_size violated: v={v}, ground_size={ground_size}")
    blocked = sum(
        binom_exact(v, j) * binom_exact(ground_size - v, v - j)
        for j in range(v // 2 + 1, v + 1)
    )
    return Fraction(binom_exact(ground_size, v), blocked)


def _candidate_stream(
    ground_size: int,
    v: int,
    rng: np.random.Generator,
    max_candidates: int | None,
) -> Iterator[tuple[int, ...]]:
    total = binom_exact(ground_size, v)
    if total <= EXHAUSTIVE_SUBSETS:
        subsets = list(itertools.combinations(range(1, ground_size + 1), v))
        for idx in rng.permutation(len(subsets)):
            yield subsets[int(idx)]
        return
    # too many v-subsets to shuffle: draw them, skipping repeats
    seen: set[tuple[int, ...]] = set()
    limit = max_candidates if max_candidates is not None else EXHAUSTIVE_SUBSETS
    drawn = 0
    while drawn < limit and len(seen) < total:
        choice = tuple(sorted(int(i) + 1 for i in rng.choice(ground_size, size=v, replace=False)))
        drawn += 1
        if choice in seen:
            continue
        seen.add(choice)
        yield choice


def separated_family(
    ground_size: int,
    v: int,
    seed: int = 0,
    max_members: int | None = None,
    max_candidates: int | None = None,
) -> schemas.SetFamily:
    """Greedy family of v-subsets with pairwise intersections <= v/2.

    Candidates arrive in a seeded random order; one is admitted iff it meets
    every admitted member in at most [v/2] points.
    """
    if ground_size < 1 or v < 1:
        raise InvalidInputError("ground_size and v must be positive integers")
    if v > ground_size:
        raise DomainError(f"hypothesis v <= ground_size violated: v={v}, ground_size={ground_size}")
    rng = np.random.default_rng(seed)
    limit = v // 2
    admitted: list[tuple[int, ...]] = []
    masks: list[int] = []
    examined = 0
    for candidate in _candidate_stream(ground_size, v, rng, max_candidates):
        if max_candidates is not None and examined >= max_candidates:
            break
        examined += 1
        mask = _mask(candidate)
        if all((mask & other).bit_count() <= limit for other in masks):
            admitted.append(candidate)
            masks.append(mask)
            if max_members is not None and len(admitted) >= max_members:
                break
    logger.debug("separated family g=%d v=%d: %d members from %d candidates", ground_size, v, len(admitted), examined)
    return schemas.SetFamily.model_construct(ground_size=ground_size, v=v, members=tuple(admitted))


def max_pairwise_intersection(family: schemas.SetFamily) -> int:
    masks = [_mask(member) for member in family.members]
    best = 0
    for a in range(len(masks)):
        for b in range(a + 1, len(masks)):
            best = max(best, (masks[a] & masks[b]).bit_count())
    return best
