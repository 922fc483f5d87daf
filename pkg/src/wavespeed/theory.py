"""Explicit sign-of-speed criteria and their combination into a verdict.

Each criterion is a sufficient condition for the front speed c of the
bistable competition wave to have a definite sign.  The negative-polarity
criteria certify c < 0; the exchange symmetry

    c(d, r, k1, k2) = -sqrt(d r) c(1/d, 1/r, k2, k1)

turns every negative criterion into a positive one, so :func:`classify`
evaluates the negative family both directly and on the reflected
parameters.  All inequalities are evaluated exactly as stated, preserving
strict vs non-strict comparisons, with no tolerance padding: the criteria
are sharp-edged sufficient conditions and padding would manufacture false
positives.

Criterion inventory (labels used in reports):

* N1, N2     -- the two general blocking conditions on (k1, k2, d/r)
* neg3, pos1 -- explicit half-line bounds in k1 bracketing the threshold k*
* S1, S2     -- the symmetric-case (r = 1, k1 = k2) specializations
* degenerate -- the small-d/r condition active for k1 > k2^2
* (i)..(viii)-- previously established symmetric-case regions
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .model import CompetitionParams


class PolarityConflictError(RuntimeError):
    """Both a negative and a positive criterion fired: an implementation bug."""


class SearchCapExceeded(RuntimeError):
    """A threshold search exhausted its allowed range."""


class CriterionId(Enum):
    N1 = "N1"
    N2 = "N2"
    NEG3 = "NEG3"
    POS1 = "POS1"
    S1 = "S1"
    S2 = "S2"
    DEG_NEG = "DEG_NEG"
    DEG_POS = "DEG_POS"
    PRIOR_I = "PRIOR_I"
    PRIOR_II = "PRIOR_II"
    PRIOR_III = "PRIOR_III"
    PRIOR_VII = "PRIOR_VII"
    PRIOR_VIII = "PRIOR_VIII"


# Polarity tag: -1 predicts c < 0, +1 predicts c > 0.
POLARITY: dict[CriterionId, int] = {
    CriterionId.N1: -1,
    CriterionId.N2: -1,
    CriterionId.NEG3: -1,
    CriterionId.POS1: +1,
    CriterionId.S1: -1,
    CriterionId.S2: -1,
    CriterionId.DEG_NEG: -1,
    CriterionId.DEG_POS: +1,
    CriterionId.PRIOR_I: -1,
    CriterionId.PRIOR_II: -1,
    CriterionId.PRIOR_III: -1,
    CriterionId.PRIOR_VII: -1,
    CriterionId.PRIOR_VIII: -1,
}

# Report labels.
LABELS: dict[CriterionId, str] = {
    CriterionId.N1: "N1",
    CriterionId.N2: "N2",
    CriterionId.NEG3: "neg3",
    CriterionId.POS1: "pos1",
    CriterionId.S1: "S1",
    CriterionId.S2: "S2",
    CriterionId.DEG_NEG: "degenerate",
    CriterionId.DEG_POS: "degenerate (reflected)",
    CriterionId.PRIOR_I: "(i)",
    CriterionId.PRIOR_II: "(ii)",
    CriterionId.PRIOR_III: "(iii)",
    CriterionId.PRIOR_VII: "(vii)",
    CriterionId.PRIOR_VIII: "(viii)",
}

# Negative criteria re-evaluated on reflected parameters by classify().
_REFLECTABLE = (
    CriterionId.N1,
    CriterionId.N2,
    CriterionId.NEG3,
    CriterionId.S1,
    CriterionId.S2,
    CriterionId.PRIOR_I,
    CriterionId.PRIOR_II,
    CriterionId.PRIOR_III,
    CriterionId.PRIOR_VII,
    CriterionId.PRIOR_VIII,
)


class Sign(Enum):
    NEGATIVE = "Negative"
    POSITIVE = "Positive"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SignVerdict:
    """Outcome of criterion evaluation.

    ``fired`` lists every criterion of the winning polarity that held;
    ``fired_reflected`` is the subset that was evaluated on the reflected
    parameters (and therefore predicts the opposite of its native polarity).
    """

    sign: Sign
    fired: tuple[CriterionId, ...]
    fired_reflected: tuple[CriterionId, ...] = ()

    @property
    def reflected(self) -> bool:
        return bool(self.fired_reflected)


@dataclass(frozen=True)
class ThresholdBounds:
    """Bracket 1 < k_lower < k* <= k_upper for the sign-change threshold in k1."""

    k_lower: float
    k_upper: float


def m_of_k(k: float) -> float:
    """The root m(k) = (sqrt(24 k + 1) - 3) / 2 of (m + 1)(m + 2) = 6 k.

    Strictly increasing, with m(1) = 1, m(2) = 2, and m(k) > k exactly on
    1 < k < 2.  It is the smallest admissible profile exponent for which the
    slaved-component residual can change sign, so every criterion below is
    phrased through it.
    """
    if k < 1.0:
        raise ValueError(f"m(k) requires k >= 1, got {k!r}")
    return (math.sqrt(24.0 * k + 1.0) - 3.0) / 2.0


def _n1_ratio_bound(k1: float, k2: float) -> float:
    """Lower bound on d/r in criterion N1 (assumes k1 >= m(k2))."""
    if k1 < 2.0:
        return 6.0 * k1 * k1 * (k2 - 1.0) / ((k1 - 1.0) ** 2 * (k1 + 4.0))
    if k2 <= 2.0:
        return 4.0 * (k2 - 1.0) / (k1 - 1.0)
    m = m_of_k(k2)
    return 2.0 * k2 * m / (2.0 * k1 - m)


def criterion_n1(params: CompetitionParams) -> bool:
    """c < 0 when k1 >= m(k2) and d/r exceeds the branch-dependent bound."""
    if params.k1 < m_of_k(params.k2):
        return False
    return params.ratio > _n1_ratio_bound(params.k1, params.k2)


def criterion_n2(params: CompetitionParams) -> bool:
    """c < 0 on a d/r strip when 1 < k1 < m(k2).

    For k2 > 2 the strip exists only when 2 k1 > m(k2); that requirement is
    what keeps the lower end of the strip positive and the criterion
    consistent with the positive-speed criterion pos1.
    """
    k1, k2 = params.k1, params.k2
    m = m_of_k(k2)
    if not (1.0 < k1 < m):
        return False
    if k2 <= 2.0:
        lower = m * m / (k1 - 1.0)
    else:
        if 2.0 * k1 <= m:
            return False
        lower = 2.0 * k2 * m / (2.0 * k1 - m)
    upper = m * (k2 - 1.0) / (m - k1)
    return lower < params.ratio < upper


def criterion_neg3(params: CompetitionParams) -> bool:
    """c < 0 for k1 above an explicit threshold in (k2, r/d)."""
    return params.k1 > neg3_threshold(params.d, params.r, params.k2)


def neg3_threshold(d: float, r: float, k2: float) -> float:
    """The k1 half-line endpoint of criterion neg3."""
    if k2 <= 2.0:
        return max(2.0, 1.0 + 4.0 * (r / d) * (k2 - 1.0))
    return m_of_k(k2) * max(1.0, 0.5 + (r / d) * k2)


def criterion_pos1(params: CompetitionParams) -> bool:
    """c > 0 for k1 - 1 below an explicit threshold in (k2, r/d)."""
    excess = params.k1 - 1.0
    return 0.0 < excess < pos1_margin(params.d, params.r, params.k2)


def pos1_margin(d: float, r: float, k2: float) -> float:
    """The k1 - 1 half-line endpoint of criterion pos1."""
    if k2 <= 2.0:
        return (k2 - 1.0) * (k2 + 4.0) / 6.0 * min(1.0, (r / d) * (k2 - 1.0) / (k2 * k2))
    return (k2 - 1.0) * min((k2 + 4.0) / 6.0, r / (4.0 * d))


def criterion_s1_s2(d: float, k: float) -> tuple[bool, bool]:
    """Symmetric-case criteria (r = 1, k1 = k2 = k), evaluated standalone.

    S1: k >= 2 and d > 2 k m(k) / (2 k - m(k)).
    S2: 1 < k < 2 and m(k)^2/(k-1) < d < m(k)(k-1)/(m(k)-k).
    """
    if d <= 0.0 or k <= 1.0:
        raise ValueError("criterion_s1_s2 requires d > 0 and k > 1")
    m = m_of_k(k)
    s1 = k >= 2.0 and d > 2.0 * k * m / (2.0 * k - m)
    s2 = 1.0 < k < 2.0 and m * m / (k - 1.0) < d < m * (k - 1.0) / (m - k)
    return s1, s2


def degenerate_ratio_bound(k1: float, k2: float) -> float:
    """Upper bound on d/r in the degenerate criterion; 0 unless k1 > k2^2."""
    if k1 <= k2 * k2:
        return 0.0
    kappa = (k1 * k2) ** (1.0 / 3.0)
    head = 1.0 - (k2 * k2 / k1) ** (1.0 / 3.0)
    return (
        head
        * (math.sqrt(kappa * kappa + kappa + 1.0) + 1.0) ** 2
        / (kappa * (kappa - 1.0) * (kappa + 1.0) ** 2)
    )


def criterion_degenerate(params: CompetitionParams) -> bool:
    """c < 0 when k1 > k2^2 and d/r is below the blocking bound for small diffusion."""
    if params.k1 <= params.k2 * params.k2:
        return False
    return params.ratio < degenerate_ratio_bound(params.k1, params.k2)


def reflect(params: CompetitionParams) -> CompetitionParams:
    """Exchange the two species' roles: (d, r, k1, k2) -> (1/d, 1/r, k2, k1).

    Involutive.  A negative-speed criterion holding at the reflected
    parameters certifies c > 0 at the original ones.
    """
    return CompetitionParams(1.0 / params.d, 1.0 / params.r, params.k2, params.k1)


# Exact double-precision images of the single-point region (i).
_PRIOR_I_D = 11.0 / 2.0
_PRIOR_I_K = 11.0 / 6.0


def prior_regions(d: float, k: float) -> dict[CriterionId, bool]:
    """Previously established negative-speed regions in the symmetric (d, k) plane.

    Membership follows the published formulas exactly:

    (i)    the single point (11/2, 11/6), compared at double precision;
    (ii)   d = 4 and 5/4 <= k <= 4/3;
    (iii)  5/3 < k < 2 and 4 < d < 4/(k-1), excluding d = 2k/(k-1);
    (vii)  a floor-function condition, see below;
    (viii) 5/3 < k < 2 and 4 < d < 2/(2-k).

    The limiting regions (iv), (v), (vi) carry no quantitative data and are
    not evaluated.
    """
    if d <= 0.0 or k <= 1.0:
        raise ValueError("prior_regions requires d > 0 and k > 1")
    out = {
        CriterionId.PRIOR_I: (d == _PRIOR_I_D and k == _PRIOR_I_K)
        or (Fraction(d) == Fraction(11, 2) and Fraction(k) == Fraction(11, 6)),
        CriterionId.PRIOR_II: d == 4.0 and 1.25 <= k <= 4.0 / 3.0,
        CriterionId.PRIOR_III: (
            5.0 / 3.0 < k < 2.0
            and 4.0 < d < 4.0 / (k - 1.0)
            and d * (k - 1.0) != 2.0 * k
        ),
        CriterionId.PRIOR_VIII: 5.0 / 3.0 < k < 2.0 and 4.0 < d < 2.0 / (2.0 - k),
    }
    q = 3.0 * k - 1.0
    term1 = k - d * (k - 1.0) / q
    term2 = 4.0 * d * (k - 1.0) / (q * q) + math.floor(
        2.0 * d * (k + 1.0) / (q * q) - k
    ) * math.floor(k * (5.0 - 3.0 * k) / 2.0)
    out[CriterionId.PRIOR_VII] = max(term1, term2) < 1.0
    return out


def _negative_verdicts(params: CompetitionParams) -> dict[CriterionId, bool]:
    """All negative-polarity criteria evaluated directly at params."""
    out = {
        CriterionId.N1: criterion_n1(params),
        CriterionId.N2: criterion_n2(params),
        CriterionId.NEG3: criterion_neg3(params),
        CriterionId.DEG_NEG: criterion_degenerate(params),
    }
    if params.symmetric:
        s1, s2 = criterion_s1_s2(params.d, params.k1)
        out[CriterionId.S1] = s1
        out[CriterionId.S2] = s2
        out.update(prior_regions(params.d, params.k1))
    return out


def classify(params: CompetitionParams) -> SignVerdict:
    """Combine every criterion into a single sign verdict.

    Negative criteria are evaluated at ``params`` and again at
    ``reflect(params)`` (where they certify c > 0); pos1 and the reflected
    degenerate criterion are the explicitly positive members.  A conclusive
    verdict of each polarity simultaneously is impossible for correct
    criteria, so that case raises :class:`PolarityConflictError`.
    """
    negative = _negative_verdicts(params)
    neg_fired = tuple(cid for cid, hit in negative.items() if hit)

    reflected = _negative_verdicts(reflect(params))
    pos_direct = []
    if criterion_pos1(params):
        pos_direct.append(CriterionId.POS1)
    if reflected.pop(CriterionId.DEG_NEG):
        pos_direct.append(CriterionId.DEG_POS)
    pos_reflected = tuple(cid for cid, hit in reflected.items() if hit)
    pos_fired = tuple(pos_direct) + pos_reflected

    if neg_fired and pos_fired:
        raise PolarityConflictError(
            f"criteria of both polarities fired at {params}: "
            f"negative={neg_fired}, positive={pos_fired}"
        )
    if neg_fired:
        return SignVerdict(Sign.NEGATIVE, neg_fired)
    if pos_fired:
        return SignVerdict(Sign.POSITIVE, pos_fired, pos_reflected)
    return SignVerdict(Sign.INCONCLUSIVE, ())


def kstar_bounds(d: float, r: float, k2: float) -> ThresholdBounds:
    """Bracket the sign-change threshold k*(d, r, k2) in k1.

    The neg3 region is the half-line k1 > T and the pos1 region the interval
    1 < k1 < 1 + B, with T and B independent of k1, so the infimum and
    supremum are available in closed form: k_upper = T, k_lower = 1 + B.
    classify() is Negative for any k1 > k_upper and Positive for any
    1 < k1 < k_lower.
    """
    if d <= 0.0 or r <= 0.0 or k2 <= 1.0:
        raise ValueError("kstar_bounds requires d, r > 0 and k2 > 1")
    return ThresholdBounds(
        k_lower=1.0 + pos1_margin(d, r, k2),
        k_upper=neg3_threshold(d, r, k2),
    )


def _covers_all_ratios(k1: float, k2: float) -> bool:
    """True when the negative criteria cover every d/r > 0 at (k1, k2).

    The N1 region is the up-set d/r > L(k1, k2) and the degenerate region
    the down-set d/r < H(k1, k2); together they cover the whole half-line
    exactly when L < H (both bounds are strict).
    """
    if k1 <= k2 * k2 or k1 < m_of_k(k2):
        return False
    return _n1_ratio_bound(k1, k2) < degenerate_ratio_bound(k1, k2)


def _sampled_coverage_check(k1: float, k2: float, n: int = 25) -> bool:
    """Safety net: spot-check classify() over a log-uniform ratio ladder."""
    for i in range(n):
        ratio = 10.0 ** (-6.0 + 12.0 * i / (n - 1))
        verdict = classify(CompetitionParams(ratio, 1.0, k1, k2))
        if verdict.sign is not Sign.NEGATIVE:
            return False
    return True


def determinacy_thresholds(
    k2: float, search_cap: float = 1e4, rtol: float = 1e-6
) -> tuple[float, float]:
    """Competition levels beyond which the speed sign is fixed for every d, r.

    Returns (k1_star, k1_dstar) with 1 < k1_star < k1_dstar such that the
    criteria certify c > 0 for all d, r > 0 whenever 1 < k1 <= k1_star, and
    c < 0 for all d, r > 0 whenever k1 >= k1_dstar.  Both are located by
    bisection on the envelope inequality of :func:`_covers_all_ratios` to
    relative tolerance ``rtol``, then spot-checked against classify() on a
    log-uniform d/r ladder over [1e-6, 1e6].

    These are upper estimates of the true determinacy levels: the criteria
    are sufficient, not necessary.

    Raises :class:`SearchCapExceeded` if coverage is never achieved for
    k1 <= search_cap.
    """
    if k2 <= 1.0:
        raise ValueError("determinacy_thresholds requires k2 > 1")

    # Negative side: smallest k1 with full-ratio coverage at (k1, k2).
    lo = max(k2 * k2, m_of_k(k2))  # coverage fails here (degenerate bound is 0)
    hi = max(2.0 * lo, 2.0)
    while not _covers_all_ratios(hi, k2):
        hi *= 2.0
        if hi > search_cap:
            raise SearchCapExceeded(
                f"no k1 <= {search_cap:g} certifies c < 0 for all d/r at k2={k2:g}"
            )
    while (hi - lo) > rtol * hi:
        mid = 0.5 * (lo + hi)
        if _covers_all_ratios(mid, k2):
            hi = mid
        else:
            lo = mid
    k1_dstar = hi

    # Positive side: largest k1 < sqrt(k2) whose reflection has full coverage.
    hi_p = math.sqrt(k2)  # coverage fails at the boundary k2 = k1^2
    lo_p = None
    step = (hi_p - 1.0) / 2.0
    probe = 1.0 + step
    for _ in range(60):
        if _covers_all_ratios(k2, probe):
            lo_p = probe
            break
        step /= 2.0
        probe = 1.0 + step
    if lo_p is None:
        raise SearchCapExceeded(
            f"no k1 > 1 certifies c > 0 for all d/r at k2={k2:g}"
        )
    while (hi_p - lo_p) > rtol * hi_p:
        mid = 0.5 * (lo_p + hi_p)
        if _covers_all_ratios(k2, mid):
            lo_p = mid
        else:
            hi_p = mid
    k1_star = lo_p

    if not _sampled_coverage_check(k1_dstar * (1.0 + 10.0 * rtol), k2):
        raise PolarityConflictError(
            "coverage bisection and sampled classification disagree at "
            f"k1={k1_dstar!r}, k2={k2!r}"
        )
    return k1_star, k1_dstar
