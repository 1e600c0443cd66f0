"""Closed-form evaluators for the entropy-number bound functions.

Logarithms are base 2 throughout. Every evaluator is positively homogeneous
in the operator data it receives (profiles, norms, b).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from pydantic import ValidationError

from .. import schemas
from ..core.errors import DomainError, InvalidInputError, invalid_from_validation
from ..models import LogForm, SchuettRegime, Thm32Branch
from .combinat import binom_exact
from .entropy import entropy_sum_bound


def _positive(name: str, value: int) -> None:
    if not isinstance(value, int) or value < 1:
        raise InvalidInputError(f"{name} must be a positive integer, got {value!r}")


def _pow2_le(n: int, m: int) -> bool:
    """Exact test of n <= log2(m), i.e. 2^n <= m."""
    return n < m.bit_length()


def _exceeds_pow2(m: int, n: int) -> bool:
    """Exact test of m > 2^n."""
    return m.bit_length() > n and m != 1 << n


def _check_log_window(n: int, m: int) -> None:
    if n < 2:
        raise DomainError(f"hypothesis 2 <= n violated: n={n}")
    if n > m:
        raise DomainError(f"hypothesis n <= m violated: n={n}, m={m}")
    if _exceeds_pow2(m, n):
        raise DomainError(f"hypothesis m <= 2^n violated: m={m}, 2^n={2 ** n}")


def schuett_regimes(m: int, n: int) -> list[SchuettRegime]:
    """Every regime whose range contains (m, n), in display order."""
    _positive("m", m)
    _positive("n", n)
    regimes = []
    if _pow2_le(n, m):
        regimes.append(SchuettRegime.SMALL_N)
    if not _exceeds_pow2(m, n) and n <= m:
        regimes.append(SchuettRegime.MIDDLE)
    if n >= m:
        regimes.append(SchuettRegime.LARGE_N)
    return regimes


def schuett_regime(m: int, n: int) -> SchuettRegime:
    return schuett_regimes(m, n)[0]


def schuett_value(regime: SchuettRegime, m: int, n: int, pq: schemas.ExponentPair) -> float:
    if regime == SchuettRegime.SMALL_N:
        return 1.0
    if regime == SchuettRegime.MIDDLE:
        return (math.log2(m / n + 1) / n) ** pq.alpha
    return 2.0 ** (-n / m) * float(m) ** (-pq.alpha)


def schuett_A(m: int, n: int, pq: schemas.ExponentPair) -> float:
    """Three-regime A(m, n); at a shared boundary the first-listed regime wins."""
    return schuett_value(schuett_regime(m, n), m, n, pq)


def schuett_A_all(m: int, n: int, pq: schemas.ExponentPair) -> dict[SchuettRegime, float]:
    return {regime: schuett_value(regime, m, n, pq) for regime in schuett_regimes(m, n)}


def _profile_branch(n: int, profile: schemas.EntropyProfile, alpha: float, k_min: int = 1) -> float:
    best = 0.0
    for k in range(k_min, n + 1):
        best = max(best, (k / n) ** alpha * profile.at(k))
    return best


def _norm_branch(n: int, m: int, norm: float, alpha: float, log_form: LogForm) -> float:
    if log_form == LogForm.SHIFTED:
        log_term = math.log2(m / n) + 1
    else:
        log_term = math.log2(m / n + 1)
    return norm * (log_term / n) ** alpha


def thm32_branches(
    n: int,
    m: int,
    profile: schemas.EntropyProfile,
    pq: schemas.ExponentPair,
    log_form: LogForm = LogForm.SHIFTED,
) -> dict[Thm32Branch, float]:
    _positive("n", n)
    _positive("m", m)
    _check_log_window(n, m)
    return {
        Thm32Branch.NORM: _norm_branch(n, m, profile.norm, pq.alpha, log_form),
        Thm32Branch.PROFILE: _profile_branch(n, profile, pq.alpha),
    }


def thm32_A(
    n: int,
    m: int,
    profile: schemas.EntropyProfile,
    pq: schemas.ExponentPair,
    log_form: LogForm = LogForm.SHIFTED,
) -> float:
    return max(thm32_branches(n, m, profile, pq, log_form).values())


def thm32_branch(
    n: int,
    m: int,
    profile: schemas.EntropyProfile,
    pq: schemas.ExponentPair,
    log_form: LogForm = LogForm.SHIFTED,
) -> Thm32Branch:
    branches = thm32_branches(n, m, profile, pq, log_form)
    if branches[Thm32Branch.NORM] >= branches[Thm32Branch.PROFILE]:
        return Thm32Branch.NORM
    return Thm32Branch.PROFILE


def thm32_robustness(
    a: int,
    pairs: Iterable[tuple[int, int]],
    profile: schemas.EntropyProfile,
    pq: schemas.ExponentPair,
) -> float:
    """Largest A(n,m)/A(n~,m~) over admissible pairs within factor a of each other."""
    admissible = []
    for n, m in pairs:
        try:
            _check_log_window(n, m)
        except DomainError:
            continue
        admissible.append((n, m, thm32_A(n, m, profile, pq)))
    worst = 1.0
    for n, m, value in admissible:
        for n2, m2, value2 in admissible:
            if not (n * a >= n2 and n2 * a >= n and m * a >= m2 and m2 * a >= m):
                continue
            if value == 0 and value2 == 0:
                continue
            ratio = math.inf if value2 == 0 else value / value2
            worst = max(worst, ratio)
    return worst


def _checked_norms(norms: schemas.HeterogeneousNorms | Sequence[float]) -> schemas.HeterogeneousNorms:
    if isinstance(norms, schemas.HeterogeneousNorms):
        return norms
    try:
        return schemas.HeterogeneousNorms(norms=tuple(norms))
    except ValidationError as exc:
        raise invalid_from_validation(exc) from exc


def thm33_A(
    n: int,
    m: int,
    norms: schemas.HeterogeneousNorms | Sequence[float],
    pq: schemas.ExponentPair,
) -> float:
    _positive("n", n)
    _positive("m", m)
    if m < 2 * n:
        raise DomainError(f"hypothesis m >= 2n violated: m={m}, 2n={2 * n}")
    checked = _checked_norms(norms)
    values = checked.norms
    if len(values) < m:
        raise InvalidInputError(f"need ||T_1||..||T_{m}||, got {len(values)} norms")
    if values[0] > 2 * values[n - 1]:
        raise InvalidInputError(f"hypothesis ||T_1|| <= 2||T_{n}|| violated")
    best = 0.0
    for s in range(n, m + 1):
        if _exceeds_pow2(s, n):
            break
        best = max(best, values[s - 1] * (math.log2(2 * s / n) / n) ** pq.alpha)
    return best


def thm33_B(n: int, profiles: Sequence[schemas.EntropyProfile], pq: schemas.ExponentPair) -> float:
    _positive("n", n)
    if not profiles:
        raise InvalidInputError("at least one entropy profile is required")
    return max(_profile_branch(n, profile, pq.alpha) for profile in profiles)


def thm33_upper(
    n: int,
    m: int,
    norms: schemas.HeterogeneousNorms | Sequence[float],
    profiles: Sequence[schemas.EntropyProfile],
    pq: schemas.ExponentPair,
) -> float:
    return max(thm33_A(n, m, norms, pq), thm33_B(n, profiles, pq))


def thm33_D(
    a: float,
    n: int,
    m: int,
    profile: schemas.EntropyProfile,
    pq: schemas.ExponentPair,
) -> float:
    _positive("n", n)
    _positive("m", m)
    if not a > 0:
        raise InvalidInputError("a must be positive")
    if m > n:
        raise DomainError(f"hypothesis m <= n violated: m={m}, n={n}")
    if a > n:
        raise DomainError(f"index set {{k <= n : k >= a}} is empty: a={a}, n={n}")
    return _profile_branch(n, profile, pq.alpha, k_min=max(1, math.ceil(a)))


def lemma31_k(m: int, n: int) -> int:
    """Smallest positive k with k >= n / (2 log(2m/n))."""
    _positive("m", m)
    _positive("n", n)
    _check_log_window(n, m)
    threshold = n / (2 * math.log2(2 * m / n))
    return max(1, math.ceil(threshold - 1e-12))


def lemma31_exponent(m: int, n: int) -> tuple[int, float]:
    """(k, log2 C(m,k) / n); stays between two absolute constants on the window."""
    k = lemma31_k(m, n)
    return k, math.log2(binom_exact(m, k)) / n


def binomial_bounds(m: int, k: int) -> tuple[float, int, float]:
    """((m/k)^k, C(m,k), (em/k)^k)."""
    _positive("m", m)
    _positive("k", k)
    if k > m:
        raise DomainError(f"hypothesis k <= m violated: k={k}, m={m}")
    lower = float(Fraction(m, k) ** k)
    try:
        upper = (math.e * m / k) ** k
    except OverflowError:
        upper = math.inf
    return lower, binom_exact(m, k), upper


def lemma25_lower(b: float, n: int, m: int, pq: schemas.ExponentPair) -> tuple[int, float]:
    """Index k = [(n-1)m/6] (at least 1) and the inner entropy bound 2^(-1/q) b m^(-alpha)."""
    _positive("n", n)
    _positive("m", m)
    if n < 2:
        raise DomainError(f"hypothesis 2 <= n violated: n={n}")
    if b < 0:
        raise InvalidInputError("b must be non-negative")
    k = max(1, ((n - 1) * m) // 6)
    bound = 2.0 ** (-schemas.reciprocal(pq.q)) * b * float(m) ** (-pq.alpha)
    return k, bound


def support_truncation_radius(
    eta: float,
    norm: float,
    k: int,
    pq: schemas.ExponentPair,
    r: float,
) -> float:
    """Radius of the union-over-supports net: (eta^r + (||T0|| / (k+1)^alpha)^r)^(1/r)."""
    _positive("k", k)
    return entropy_sum_bound(eta, norm / (k + 1) ** pq.alpha, r)
