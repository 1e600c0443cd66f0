"""Verification suites behind ``verify``.

Each suite returns a VerificationReport whose criteria are checked with
exact arithmetic where the objects are exact (binomials, Gamma(m), set
families) and against certified brackets elsewhere. Regression values
ending in ``_envelope`` are max ratios clipped below at 1.
"""
from __future__ import annotations

import logging
import math
import time
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .. import schemas
from ..core.errors import InvalidInputError
from ..models import Suite
from . import bounds, combinat, nets
from .entropy import target_r

logger = logging.getLogger(__name__)

ENVELOPE = 64.0
SCALAR_BRACKET_WIDTH = 2.0**0.25
BLOCK_RADIUS_SLACK = 1.01
REGRESSION_REL_TOL = 1e-9
PRODUCT_RADIUS_REL_TOL = 1e-12

DEFAULT_PAIRS = (schemas.ExponentPair(p=1, q=math.inf), schemas.ExponentPair(p=1, q=2))

# grid flags each suite reads; anything else is rejected by run_suite
READS_M = frozenset({Suite.SCHUETT, Suite.GAMMA, Suite.PIETSCH, Suite.BLOCK, Suite.LEMMA25})
READS_N = frozenset({Suite.SCHUETT, Suite.THM32, Suite.PIETSCH, Suite.LEMMA25, Suite.ROBUSTNESS})
READS_MAX_M = frozenset({Suite.THM32, Suite.BINOM, Suite.CODES, Suite.ROBUSTNESS})


def _criterion(name: str, passed: bool, value: Optional[float] = None, detail: str = "") -> schemas.CriterionResult:
    if not passed:
        logger.warning("criterion %s failed: %s", name, detail or value)
    return schemas.CriterionResult(name=name, passed=bool(passed), value=value, detail=detail)


def _ratio(a: float, b: float) -> float:
    if b == 0:
        return 0.0 if a == 0 else math.inf
    return a / b


class _Stopwatch:
    def __init__(self, enabled: bool) -> None:
        self.enabled = enabled
        self.elapsed: Optional[float] = None
        self._start = 0.0

    def __enter__(self) -> "_Stopwatch":
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc: object) -> None:
        self.elapsed = time.perf_counter() - self._start if self.enabled else None


def _bracket_rows(
    grid: Sequence[tuple[schemas.ExponentPair, int, int]],
    bound: Callable[[schemas.ExponentPair, int, int], tuple[float, str]],
    budget: Optional[schemas.Budget],
    seed: int,
    timings: bool,
) -> tuple[list[schemas.VerificationRow], dict[tuple[str, int, int], schemas.EntropyBracket]]:
    rows = []
    brackets = {}
    for pq, m, n in grid:
        value, regime = bound(pq, m, n)
        with _Stopwatch(timings) as watch:
            bracket = nets.entropy_bracket(m, n, pq, budget=budget, seed=seed)
        brackets[(pq.label(), m, n)] = bracket
        rows.append(
            schemas.VerificationRow(
                m=m,
                n=n,
                pq=pq.label(),
                bound=value,
                lo=bracket.lo,
                hi=bracket.hi,
                hi_over_bound=_ratio(bracket.hi, value),
                bound_over_lo=_ratio(value, bracket.lo),
                regime=regime,
                elapsed_s=watch.elapsed,
            )
        )
    rows.sort(key=lambda row: (row.m, row.n, row.pq))
    return rows, brackets


def _sandwich_criteria(rows: Sequence[schemas.VerificationRow]) -> tuple[list[schemas.CriterionResult], dict[str, float]]:
    upper_gap = max((_ratio(r.bound, r.hi) for r in rows), default=1.0)
    lower_gap = max((_ratio(r.lo, r.bound) for r in rows), default=1.0)
    width = max((_ratio(r.hi, r.lo) for r in rows), default=1.0)
    bad_upper = [f"({r.m},{r.n},{r.pq})" for r in rows if r.bound > ENVELOPE * r.hi]
    bad_lower = [f"({r.m},{r.n},{r.pq})" for r in rows if r.lo > ENVELOPE * r.bound]
    criteria = [
        _criterion("bound/64 <= hi", not bad_upper, upper_gap, " ".join(bad_upper)),
        _criterion("lo <= 64*bound", not bad_lower, lower_gap, " ".join(bad_lower)),
    ]
    values = {
        "upper_gap_envelope": max(1.0, upper_gap),
        "lower_gap_envelope": max(1.0, lower_gap),
        "bracket_width_envelope": max(1.0, width),
    }
    return criteria, values


def _monotone_criterion(rows: Sequence[schemas.VerificationRow]) -> schemas.CriterionResult:
    bad = []
    by_series: dict[tuple[str, int], list[schemas.VerificationRow]] = {}
    for row in rows:
        by_series.setdefault((row.pq, row.m), []).append(row)
    for (label, m), series in by_series.items():
        series.sort(key=lambda r: r.n)
        for a, b in zip(series, series[1:]):
            if b.n == a.n + 1 and b.hi > a.hi * (1 + REGRESSION_REL_TOL):
                bad.append(f"({m},{b.n},{label})")
    return _criterion("hi non-increasing in n", not bad, detail=" ".join(bad))


def schuett_suite(
    m_values: Sequence[int] = range(1, 5),
    n_values: Sequence[int] = range(1, 13),
    pairs: Sequence[schemas.ExponentPair] = DEFAULT_PAIRS,
    seed: int = 0,
    budget: Optional[schemas.Budget] = None,
    timings: bool = False,
) -> schemas.VerificationReport:
    grid = [(pq, m, n) for pq in pairs for m in m_values for n in n_values]

    def bound(pq: schemas.ExponentPair, m: int, n: int) -> tuple[float, str]:
        return bounds.schuett_A(m, n, pq), bounds.schuett_regime(m, n).value

    rows, brackets = _bracket_rows(grid, bound, budget, seed, timings)
    criteria, values = _sandwich_criteria(rows)
    criteria.append(_monotone_criterion(rows))

    scalar_bad = []
    for (label, m, n), bracket in brackets.items():
        if m != 1:
            continue
        exact = 2.0 ** (1 - n)
        if not bracket.contains(exact) or bracket.width_ratio > SCALAR_BRACKET_WIDTH * (1 + REGRESSION_REL_TOL):
            scalar_bad.append(f"(1,{n},{label})")
    criteria.append(_criterion("m=1 bracket contains 2^(1-n)", not scalar_bad, detail=" ".join(scalar_bad)))
    return schemas.VerificationReport(
        suite=Suite.SCHUETT,
        seed=seed,
        params={"m": list(m_values), "n": list(n_values), "pairs": [pq.label() for pq in pairs]},
        rows=rows,
        criteria=criteria,
        regression=values,
    )


def thm32_suite(
    n_values: Sequence[int] = range(2, 9),
    max_m: int = 16,
    pq: schemas.ExponentPair = DEFAULT_PAIRS[0],
    seed: int = 0,
    budget: Optional[schemas.Budget] = None,
    timings: bool = False,
) -> schemas.VerificationReport:
    """Scalar identity blocks: the m-fold diagonal operator is id: l_p^m -> l_q^m."""
    profile = schemas.EntropyProfile.scalar_identity(max(n_values))
    grid = [(pq, m, n) for n in n_values for m in range(n, min(2**n, max_m) + 1)]

    def bound(pair: schemas.ExponentPair, m: int, n: int) -> tuple[float, str]:
        return bounds.thm32_A(n, m, profile, pair), bounds.thm32_branch(n, m, profile, pair).value

    rows, _ = _bracket_rows(grid, bound, budget, seed, timings)
    criteria, values = _sandwich_criteria(rows)

    audit_bad = []
    constants = []
    for n in n_values:
        packing = nets.lower_bound_pointset(n, 1, pq, target_r(pq.q), seed=seed)
        if not nets.packing_audit(packing).passed:
            audit_bad.append(str(n))
        constant = packing.metadata.get("measured_constant")
        if constant is not None:
            constants.append(constant)
    criteria.append(_criterion("I(u) families separated", not audit_bad, detail=" ".join(audit_bad)))
    if constants:
        values["pointset_constant_min"] = min(constants)
    return schemas.VerificationReport(
        suite=Suite.THM32,
        seed=seed,
        params={"n": list(n_values), "max_m": max_m, "pair": pq.label()},
        rows=rows,
        criteria=criteria,
        regression=values,
    )


def gamma_suite(
    m_values: Sequence[int] = range(1, 13),
    dominate_m_max: int = 64,
    samples: int = 1000,
    seed: int = 0,
) -> schemas.VerificationReport:
    criteria = []
    worst_ratio = 0.0
    count_bad = []
    member_bad = []
    for m in m_values:
        count = combinat.gamma_count(m)
        # count <= 2^(5m/2) without rounding
        if count * count > 2 ** (5 * m):
            count_bad.append(str(m))
        worst_ratio = max(worst_ratio, count / 2.0 ** (2.5 * m))
        for representative, _ in combinat.gamma_representatives(m):
            if not combinat.gamma_membership(representative):
                member_bad.append(f"{m}:{representative.weights}")
    criteria.append(_criterion("#Gamma(m) <= 2^(5m/2)", not count_bad, worst_ratio, " ".join(count_bad)))
    criteria.append(_criterion("Gamma(m) members satisfy sum and tail conditions", not member_bad, detail=" ".join(member_bad)))

    rng = np.random.default_rng(seed)
    dominate_bad = []
    dominate_values = sorted(set(m_values) | set(range(1, dominate_m_max + 1)))
    for m in dominate_values:
        for alpha in rng.dirichlet(np.ones(m), size=samples):
            sequence = combinat.gamma_dominate(alpha.tolist())
            dominated = all(Fraction(w, m) >= Fraction(float(a)) for w, a in zip(sequence.weights, alpha))
            if not (dominated and combinat.gamma_membership(sequence)):
                dominate_bad.append(str(m))
                break
    criteria.append(_criterion("gamma_dominate dominates and lands in Gamma(m)", not dominate_bad, detail=" ".join(dominate_bad)))
    return schemas.VerificationReport(
        suite=Suite.GAMMA,
        seed=seed,
        params={"m": list(m_values), "dominate_m_max": dominate_m_max, "samples": samples},
        criteria=criteria,
        regression={"gamma_count_ratio_max": worst_ratio},
    )


def binom_suite(max_m: int = 40) -> schemas.VerificationReport:
    bad = []
    for m in range(1, max_m + 1):
        for k in range(1, m + 1):
            exact = combinat.binom_exact(m, k)
            # (m/k)^k <= C(m,k) in integers; the upper side involves e
            lower_ok = m**k <= exact * k**k
            upper_ok = exact <= (math.e * m / k) ** k * (1 + REGRESSION_REL_TOL)
            if not (lower_ok and upper_ok):
                bad.append(f"({m},{k})")
    exponents = []
    for n in range(2, max_m + 1):
        for m in range(n, min(2**n, max_m) + 1):
            exponents.append(bounds.lemma31_exponent(m, n)[1])
    criteria = [
        _criterion("(m/k)^k <= C(m,k) <= (em/k)^k", not bad, detail=" ".join(bad)),
        _criterion("log C(m,k)/n positive on the window", all(e > 0 for e in exponents)),
    ]
    regression = {}
    if exponents:
        regression = {"lemma31_exponent_min": min(exponents), "lemma31_exponent_max": max(exponents)}
    return schemas.VerificationReport(
        suite=Suite.BINOM,
        params={"max_m": max_m},
        criteria=criteria,
        regression=regression,
    )


def pietsch_suite(
    m_values: Sequence[int] = (1, 2),
    n_values: Sequence[int] = range(1, 7),
    pq: schemas.ExponentPair = DEFAULT_PAIRS[0],
    seed: int = 0,
    budget: Optional[schemas.Budget] = None,
    timings: bool = False,
) -> schemas.VerificationReport:
    grid = [(pq, m, n) for m in m_values for n in n_values]

    def bound(pair: schemas.ExponentPair, m: int, n: int) -> tuple[float, str]:
        return bounds.schuett_A(m, n, pair), bounds.schuett_regime(m, n).value

    rows, brackets = _bracket_rows(grid, bound, budget, seed, timings)
    bad = []
    worst = 0.0
    for (label, m, n), bracket in brackets.items():
        limit = 2.0 ** (1.0 / bracket.r - 1.0) * bracket.hi
        worst = max(worst, _ratio(bracket.f_lo, limit))
        if bracket.f_lo > limit * (1 + PRODUCT_RADIUS_REL_TOL):
            bad.append(f"({m},{n})")
    return schemas.VerificationReport(
        suite=Suite.PIETSCH,
        seed=seed,
        params={"m": list(m_values), "n": list(n_values), "pair": pq.label()},
        rows=rows,
        criteria=[_criterion("f_lo <= 2^(1/r-1) hi", not bad, worst, " ".join(bad))],
        regression={"packing_over_covering_max": worst},
    )


def block_suite(
    m_values: Sequence[int] = range(2, 7),
    q_values: Sequence[float] = (2.0, math.inf),
    p: float = 1.0,
    samples: Optional[int] = None,
    seed: int = 0,
    budget: Optional[schemas.Budget] = None,
) -> schemas.VerificationReport:
    index_bad = []
    radius_bad = []
    worst = 0.0
    for q in q_values:
        pq = schemas.ExponentPair(p=p, q=q)
        target = 3.0 ** schemas.reciprocal(q)
        for m in m_values:
            net = nets.block_decomposition_net(m, pq, budget=budget)
            audit = nets.coverage_audit(net, samples=samples, seed=seed)
            worst = max(worst, audit.measured / target)
            if net.claimed_index > 5 * m:
                index_bad.append(f"({m},{pq.label()})")
            if not audit.passed or audit.measured > target * BLOCK_RADIUS_SLACK:
                radius_bad.append(f"({m},{pq.label()})")
    return schemas.VerificationReport(
        suite=Suite.BLOCK,
        seed=seed,
        params={"m": list(m_values), "q": [schemas.format_extended(q) for q in q_values], "p": p},
        criteria=[
            _criterion("claimed index <= 5m", not index_bad, detail=" ".join(index_bad)),
            _criterion("audited radius <= 3^(1/q)", not radius_bad, worst, " ".join(radius_bad)),
        ],
        regression={"block_radius_ratio_max": worst},
    )


_PRODUCT_PAIRS = (
    schemas.ExponentPair(p=0.5, q=1),
    schemas.ExponentPair(p=1, q=2),
    schemas.ExponentPair(p=0.5, q=2),
    schemas.ExponentPair(p=1, q=math.inf),
    schemas.ExponentPair(p=2, q=math.inf),
)


def product_suite(cases: int = 200, seed: int = 0, samples: int = 2000) -> schemas.VerificationReport:
    rng = np.random.default_rng(seed)
    count_bad, radius_bad, audit_bad = [], [], []
    for case in range(cases):
        blocks = int(rng.integers(1, 5))
        q = _PRODUCT_PAIRS[int(rng.integers(len(_PRODUCT_PAIRS)))].q
        candidates = [pq for pq in _PRODUCT_PAIRS if pq.q == q]
        block_nets = []
        for _ in range(blocks):
            pq = candidates[int(rng.integers(len(candidates)))]
            dim = int(rng.integers(1, 3))
            eps = 2.0 ** (-int(rng.integers(0, 9)) / nets.GRID_STEPS_PER_OCTAVE)
            block_nets.append(nets.lattice_net(dim, pq, eps))
        product = nets.product_net(block_nets, q=q)
        if product.count != math.prod(b.count for b in block_nets):
            count_bad.append(str(case))
        radii = [b.radius for b in block_nets]
        expected = max(radii) if math.isinf(q) else math.fsum(r**q for r in radii) ** (1.0 / q)
        if not math.isclose(product.radius, expected, rel_tol=PRODUCT_RADIUS_REL_TOL):
            radius_bad.append(str(case))
        if not nets.coverage_audit(product, samples=samples, seed=seed + case).passed:
            audit_bad.append(str(case))
    return schemas.VerificationReport(
        suite=Suite.PRODUCT,
        seed=seed,
        params={"cases": cases, "samples": samples},
        criteria=[
            _criterion("center count is the product", not count_bad, detail=" ".join(count_bad)),
            _criterion("radius is the l_q sum of radii", not radius_bad, detail=" ".join(radius_bad)),
            _criterion("product net covers the product ball", not audit_bad, detail=" ".join(audit_bad)),
        ],
    )


def codes_suite(max_ground: int = 12, seed: int = 0) -> schemas.VerificationReport:
    intersect_bad, size_bad, fourth_bad = [], [], []
    worst = math.inf
    for g in range(1, max_ground + 1):
        for v in range(1, g + 1):
            family = combinat.separated_family(g, v, seed=seed)
            total = combinat.binom_exact(g, v)
            oracle = combinat.counting_lower_bound(g, v)
            if combinat.max_pairwise_intersection(family) > v // 2:
                intersect_bad.append(f"({g},{v})")
            if family.size < oracle:
                size_bad.append(f"({g},{v})")
            worst = min(worst, float(Fraction(family.size) / oracle))
            if oracle**4 >= total and family.size**4 < total:
                fourth_bad.append(f"({g},{v})")
    return schemas.VerificationReport(
        suite=Suite.CODES,
        seed=seed,
        params={"max_ground": max_ground},
        criteria=[
            _criterion("pairwise intersections <= v/2", not intersect_bad, detail=" ".join(intersect_bad)),
            _criterion("size >= counting bound", not size_bad, worst, " ".join(size_bad)),
            _criterion("|L|^4 >= C(g,v) when the counting bound allows it", not fourth_bad, detail=" ".join(fourth_bad)),
        ],
        regression={"family_over_counting_min": worst},
    )


def lemma25_suite(
    m_values: Sequence[int] = (1, 2, 3),
    n_values: Sequence[int] = range(2, 7),
    pq: schemas.ExponentPair = DEFAULT_PAIRS[0],
    seed: int = 0,
    budget: Optional[schemas.Budget] = None,
) -> schemas.VerificationReport:
    bad = []
    for n in n_values:
        b = nets.entropy_bracket(1, n, pq, budget=budget, seed=seed).f_lo
        for m in m_values:
            k, separation = bounds.lemma25_lower(b, n, m, pq)
            needed = 2 ** (k - 1) + 1
            packing = nets.greedy_packing(m, pq, separation, seed=seed, budget=budget, stop_at=needed)
            if packing.count < needed or not nets.packing_audit(packing).passed:
                bad.append(f"({m},{n})")
    return schemas.VerificationReport(
        suite=Suite.LEMMA25,
        seed=seed,
        params={"m": list(m_values), "n": list(n_values), "pair": pq.label()},
        criteria=[_criterion("packing reaches 2^(k-1)+1 at the predicted separation", not bad, detail=" ".join(bad))],
    )


def robustness_suite(
    a: int = 2,
    n_values: Sequence[int] = range(2, 9),
    max_m: int = 64,
    pq: schemas.ExponentPair = DEFAULT_PAIRS[0],
) -> schemas.VerificationReport:
    profile = schemas.EntropyProfile.scalar_identity(max(n_values))
    pairs = [(n, m) for n in n_values for m in range(n, min(2**n, max_m) + 1)]
    ratio = bounds.thm32_robustness(a, pairs, profile, pq)
    return schemas.VerificationReport(
        suite=Suite.ROBUSTNESS,
        params={"a": a, "n": list(n_values), "max_m": max_m, "pair": pq.label()},
        criteria=[_criterion("A(n,m) comparable within factor a", math.isfinite(ratio), ratio)],
        regression={"robustness_envelope": ratio},
    )


def regression_criteria(current: dict[str, float], previous: dict[str, float]) -> list[schemas.CriterionResult]:
    """An envelope ratio may not grow past its last recorded value."""
    results = []
    for name, value in sorted(current.items()):
        if not name.endswith("_envelope") or name not in previous:
            continue
        limit = previous[name] * (1 + REGRESSION_REL_TOL)
        results.append(
            _criterion(f"regression {name}", value <= limit, value, f"recorded {previous[name]!r}")
        )
    return results


def run_suite(
    suite: Suite,
    *,
    m_values: Optional[Sequence[int]] = None,
    n_values: Optional[Sequence[int]] = None,
    pq: Optional[schemas.ExponentPair] = None,
    max_m: Optional[int] = None,
    seed: int = 0,
    budget: Optional[schemas.Budget] = None,
    timings: bool = False,
) -> schemas.VerificationReport:
    """Dispatch with acceptance defaults for everything not given.

    A grid flag the suite does not read raises InvalidInputError.
    """
    for flag, value, readers in (
        ("--m", m_values, READS_M),
        ("--n", n_values, READS_N),
        ("--max-m", max_m, READS_MAX_M),
    ):
        if value is not None and suite not in readers:
            raise InvalidInputError(f"suite {suite.value} does not take {flag}")
    grid: dict = {}
    if m_values is not None:
        grid["m_values"] = list(m_values)
    if n_values is not None:
        grid["n_values"] = list(n_values)
    if suite == Suite.SCHUETT:
        pairs = (pq,) if pq is not None else DEFAULT_PAIRS
        return schuett_suite(pairs=pairs, seed=seed, budget=budget, timings=timings, **grid)
    if suite == Suite.THM32:
        extra = {"max_m": max_m} if max_m is not None else {}
        if "n_values" in grid:
            extra["n_values"] = grid["n_values"]
        return thm32_suite(pq=pq or DEFAULT_PAIRS[0], seed=seed, budget=budget, timings=timings, **extra)
    if suite == Suite.GAMMA:
        return gamma_suite(m_values=grid.get("m_values", range(1, 13)), seed=seed)
    if suite == Suite.BINOM:
        return binom_suite(max_m=max_m or 40)
    if suite == Suite.PIETSCH:
        return pietsch_suite(pq=pq or DEFAULT_PAIRS[0], seed=seed, budget=budget, timings=timings, **grid)
    if suite == Suite.BLOCK:
        q_values = (pq.q,) if pq is not None else (2.0, math.inf)
        p = pq.p if pq is not None else 1.0
        return block_suite(m_values=grid.get("m_values", range(2, 7)), q_values=q_values, p=p, seed=seed, budget=budget)
    if suite == Suite.PRODUCT:
        return product_suite(seed=seed)
    if suite == Suite.CODES:
        return codes_suite(max_ground=max_m or 12, seed=seed)
    if suite == Suite.LEMMA25:
        return lemma25_suite(pq=pq or DEFAULT_PAIRS[0], seed=seed, budget=budget, **grid)
    if suite == Suite.ROBUSTNESS:
        extra = {"n_values": grid["n_values"]} if "n_values" in grid else {}
        return robustness_suite(pq=pq or DEFAULT_PAIRS[0], max_m=max_m or 64, **extra)
    raise InvalidInputError(f"unknown suite {suite!r}")
