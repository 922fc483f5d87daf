"""Certified blocking profiles for the cooperative competition system.

Two families of time-independent profiles (phi, psi) connecting (0, 0) to
(1, 1) are constructed and certified numerically:

* the smooth family (phi, psi)(x) = (sigma_p(a x)^p, sigma_p(a x)), built on
  the standing profile sigma_p of the balanced bistable equation
  sigma'' + h_p(sigma) = 0, and
* a piecewise family for small diffusion ratio, with psi slaved to
  k2 phi + delta on x < 0 and constant 1 on x >= 0.

Certification evaluates the residuals

    I(x) = phi''(x) + f(phi(x), psi(x))
    J(x) = (d/r) psi''(x) + g(phi(x), psi(x))

which must be nonpositive everywhere (piecewise profiles must additionally
lose no slope across the matching point x = 0).  Second derivatives are
obtained in closed form from the defining first integrals, never by
differencing the tabulated data; a finite-difference cross-check guards the
tables against construction bugs.  The certificate therefore reflects the
analytic inequalities, with the stated tolerance absorbing only rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import CompetitionParams, ParameterError, reaction_f, reaction_g
from .theory import m_of_k


class QuadratureError(RuntimeError):
    """Profile quadrature failed to meet the requested tolerance."""


class GridResolutionError(RuntimeError):
    """Tabulated profile too coarse for trustworthy derivative checks."""


def alpha_p(p: float) -> float:
    """Balance coefficient 6 / ((p + 1)(p + 2)), in (0, 1) for p > 1.

    This is the unique coefficient for which the cubic-type nonlinearity
    h_p integrates to zero over [0, 1], which in turn is what guarantees a
    standing monotone profile.
    """
    if p <= 1.0:
        raise ValueError(f"alpha_p requires p > 1, got {p!r}")
    return 6.0 / ((p + 1.0) * (p + 2.0))


def h_p(s, p: float):
    """Balanced bistable nonlinearity.

    h_p(s) = s (1 - s) (s^(p-1) - alpha_p) for s >= 0 and -alpha_p * s for
    s < 0; continuously differentiable at 0, with zeroes at 0,
    alpha_p^(1/(p-1)) and 1.  Accepts scalars or arrays.
    """
    a = alpha_p(p)
    s_arr = np.asarray(s, dtype=float)
    s_pos = np.maximum(s_arr, 0.0)
    pos = s_arr * (1.0 - s_arr) * (np.power(s_pos, p - 1.0) - a)
    out = np.where(s_arr >= 0.0, pos, -a * s_arr)
    if np.ndim(s) == 0:
        return float(out)
    return out


def first_integral(s, p: float):
    """G(s) = (sigma')^2 along the standing profile, for s in [0, 1].

    G(s) = alpha_p s^2 - (2/3) alpha_p s^3 - 2 s^(p+1)/(p+1) + 2 s^(p+2)/(p+2),
    i.e. -2 * integral of h_p from 0 to s.  Vanishes at s = 0 and s = 1.
    """
    a = alpha_p(p)
    s_arr = np.asarray(s, dtype=float)
    out = (
        a * s_arr**2
        - (2.0 / 3.0) * a * s_arr**3
        - 2.0 * np.power(s_arr, p + 1.0) / (p + 1.0)
        + 2.0 * np.power(s_arr, p + 2.0) / (p + 2.0)
    )
    if np.ndim(s) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class SigmoidProfile:
    """Tabulated standing profile sigma_p with sigma(0) = 1/2.

    ``xs`` is strictly increasing, with sigma below 1e-6 at the left end and
    above 1 - 1e-6 at the right end; ``dsigma`` holds sigma' at the nodes.
    ``normalization`` is the position where sigma crosses 1/2 (0 by
    construction).  ``quad_error`` is the measured quadrature error bound.
    """

    p: float
    xs: np.ndarray
    sigma: np.ndarray
    dsigma: np.ndarray
    normalization: float
    quad_error: float
    splice: float

    def save_table(self, path) -> None:
        """Write the profile as two-column (x, sigma) text, 12 significant digits."""
        with open(path, "w") as fh:
            for x, s in zip(self.xs, self.sigma):
                fh.write(f"{x:.12g} {s:.12g}\n")


def _cumulative_positions(s: np.ndarray, p: float, order: int) -> np.ndarray:
    """Positions x(s) - x(s[0]) by per-interval Gauss-Legendre on dx/ds = G^(-1/2)."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (s[1:] + s[:-1])
    half = 0.5 * (s[1:] - s[:-1])
    se = mid[None, :] + half[None, :] * nodes[:, None]
    vals = 1.0 / np.sqrt(np.maximum(first_integral(se, p), 0.0))
    seg = half * (weights @ vals)
    return np.concatenate([[0.0], np.cumsum(seg)])


def sigma_profile(
    p: float,
    tol: float = 1e-9,
    span: float = 40.0,
    splice: float = 1e-4,
    points_per_decade: int = 2000,
    tail_dx: float = 0.01,
) -> SigmoidProfile:
    """Tabulate the monotone standing profile of sigma'' + h_p(sigma) = 0.

    The core region splice <= sigma <= 1 - splice is parameterized by sigma
    (log-graded toward both ends) and positions come from quadrature of
    dx = dsigma / sqrt(G(sigma)); the grading keeps the x-spacing roughly
    uniform.  Beyond the splice levels the integrand is nearly singular, so
    the profile is continued by the linearized exponential tails, matched in
    value and slope; their rates approach sqrt(alpha_p) on the left and the
    linearization rate at 1 on the right.  Tails extend to at least
    +/- span and until sigma is within 1e-8 of its limit, except that the
    right tail stops where 1 - sigma would saturate at double precision.

    Raises QuadratureError when the internal quadrature cannot certify the
    requested tolerance ``tol`` on positions.
    """
    if p <= 1.0:
        raise ValueError(f"sigma_profile requires p > 1, got {p!r}")
    if tol <= 0.0 or span <= 0.0 or not (0.0 < splice <= 1e-3):
        raise ValueError("invalid tol/span/splice")

    decades = math.log10(0.5 / splice)
    n_side = max(8, math.ceil(points_per_decade * decades))
    s_lo = np.geomspace(splice, 0.5, n_side + 1)
    s_hi = 1.0 - np.geomspace(0.5, splice, n_side + 1)
    s = np.concatenate([s_lo, s_hi[1:]])

    x = _cumulative_positions(s, p, order=12)
    x_hi = _cumulative_positions(s, p, order=24)
    quad_error = float(np.max(np.abs(x - x_hi)))
    if quad_error > tol:
        raise QuadratureError(
            f"position quadrature error {quad_error:.3e} exceeds tol {tol:.3e}"
        )
    x = x_hi - x_hi[n_side]  # pin sigma(0) = 1/2

    ds = np.sqrt(np.maximum(first_integral(s, p), 0.0))

    # Left tail: sigma = s0 exp(lam (x - x0)), matched in value and slope.
    lam_l = ds[0] / s[0]
    x_left_end = min(-span, x[0] + math.log(1e-8 / s[0]) / lam_l)
    n_l = max(2, math.ceil((x[0] - x_left_end) / tail_dx))
    xs_l = x[0] - tail_dx * np.arange(n_l, 0, -1)
    sig_l = s[0] * np.exp(lam_l * (xs_l - x[0]))

    # Right tail: 1 - sigma = e0 exp(-lam (x - x1)).  Stop before 1 - sigma
    # shrinks under ~1e-13/lam, where consecutive tabulated values would
    # collide at double precision and break strict monotonicity.
    eps_r = 1.0 - s[-1]
    lam_r = ds[-1] / eps_r
    x_right_end = max(span, x[-1] + math.log(eps_r / 1e-8) / lam_r)
    x_saturate = x[-1] + math.log(eps_r * lam_r / 1e-13) / lam_r
    x_right_end = min(x_right_end, x_saturate)
    n_r = max(2, math.ceil((x_right_end - x[-1]) / tail_dx))
    xs_r = x[-1] + tail_dx * np.arange(1, n_r + 1)
    eps = eps_r * np.exp(-lam_r * (xs_r - x[-1]))
    sig_r = 1.0 - eps

    xs = np.concatenate([xs_l, x, xs_r])
    sigma = np.concatenate([sig_l, s, sig_r])
    dsigma = np.concatenate([lam_l * sig_l, ds, lam_r * eps])
    return SigmoidProfile(
        p=float(p),
        xs=xs,
        sigma=sigma,
        dsigma=dsigma,
        normalization=0.0,
        quad_error=quad_error,
        splice=float(splice),
    )


@dataclass(frozen=True)
class SupersolCandidate:
    """Exponent p > 1 and spatial scaling a > 0 for the smooth family."""

    p: float
    a: float

    def __post_init__(self):
        if self.p <= 1.0 or self.a <= 0.0:
            raise ParameterError("candidate requires p > 1 and a > 0")


def admissibility_conditions(
    cand: SupersolCandidate, params: CompetitionParams
) -> tuple[bool, bool, bool, bool]:
    """The four admissibility conditions (a)-(d) for the smooth family.

    With a2 = a^2:

    (a) a2 <  (p+1)(p+2)(k1-1) / (6 p^2)
    (b) p <= k1, or p > k1 and a2 >= (p+1)(p+2)(p-k1) / (p (p-1)(p+4))
    (c) p < 2 k1 and a2 <= (2 k1 - p) / (2 p)
    (d) (r/d)(k2-1)(p+1)(p+2) / ((p-1)(p+4)) <= a2 <= (r/d)(p+1)(p+2)/6

    Comparisons are exact, strict where stated.
    """
    p, a2 = cand.p, cand.a * cand.a
    k1, k2, d, r = params.k1, params.k2, params.d, params.r
    pp = (p + 1.0) * (p + 2.0)
    cond_a = a2 < pp * (k1 - 1.0) / (6.0 * p * p)
    cond_b = p <= k1 or a2 >= pp * (p - k1) / (p * (p - 1.0) * (p + 4.0))
    cond_c = p < 2.0 * k1 and a2 <= (2.0 * k1 - p) / (2.0 * p)
    cond_d = (
        (r / d) * (k2 - 1.0) * pp / ((p - 1.0) * (p + 4.0))
        <= a2
        <= (r / d) * pp / 6.0
    )
    return cond_a, cond_b, cond_c, cond_d


def abc_coefficients(
    cand: SupersolCandidate, params: CompetitionParams
) -> tuple[float, float, float, float]:
    """Coefficients (A, B, C, D) of the factored residual I = s^p (A + B s + C s^(p-1) + D s^p).

    They always satisfy A + B + C + D = 0, so the residual vanishes at
    s = 1; conditions (a)-(c) are equivalent to A < 0,
    p A + (p-1) B + C <= 0 and p A + (p-2) B <= 0 (see
    :func:`proof_condition_flags`).
    """
    p, a2 = cand.p, cand.a * cand.a
    k1 = params.k1
    pp = (p + 1.0) * (p + 2.0)
    A = 6.0 * p * p * a2 / pp - (k1 - 1.0)
    B = -2.0 * p * (2.0 * p + 1.0) * a2 / pp + k1
    C = -p * (3.0 * p - 1.0) * a2 / (p + 1.0)
    D = 3.0 * p * p * a2 / (p + 2.0) - 1.0
    return A, B, C, D


def proof_condition_flags(
    cand: SupersolCandidate, params: CompetitionParams
) -> tuple[bool, bool, bool]:
    """The coefficient-form conditions (A) A < 0, (B) pA+(p-1)B+C <= 0, (C) pA+(p-2)B <= 0."""
    p = cand.p
    A, B, C, _ = abc_coefficients(cand, params)
    return (
        A < 0.0,
        p * A + (p - 1.0) * B + C <= 0.0,
        p * A + (p - 2.0) * B <= 0.0,
    )


@dataclass(frozen=True)
class SupersolutionTable:
    """Tabulated smooth blocking profile (phi, psi) = (sigma^p, sigma)(a x)."""

    xs: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    sigma: np.ndarray
    p: float
    a: float

    def save_tables(self, prefix) -> None:
        """Write (x, phi) and (x, psi) two-column tables next to ``prefix``."""
        for name, values in (("phi", self.phi), ("psi", self.psi)):
            with open(f"{prefix}_{name}.txt", "w") as fh:
                for x, v in zip(self.xs, values):
                    fh.write(f"{x:.12g} {v:.12g}\n")


def build_supersolution(
    cand: SupersolCandidate, profile: SigmoidProfile
) -> SupersolutionTable:
    """Rescale a standing profile into the candidate pair (sigma(ax)^p, sigma(ax)).

    The grid is the profile's grid divided by a, so sigma(a x_j) is exact at
    every node.  Both components increase strictly from (0, 0) to (1, 1),
    and phi <= psi pointwise since sigma is in (0, 1) and p > 1.
    """
    if profile.p != cand.p:
        raise ParameterError(
            f"profile exponent {profile.p!r} does not match candidate p={cand.p!r}"
        )
    return SupersolutionTable(
        xs=profile.xs / cand.a,
        phi=profile.sigma**cand.p,
        psi=profile.sigma.copy(),
        sigma=profile.sigma,
        p=cand.p,
        a=cand.a,
    )


@dataclass(frozen=True)
class ResidualReport:
    """Pointwise residual maxima, matching-point slope jumps, and the verdict.

    ``certified`` is True when max_I <= tol, max_J <= tol, and every
    applicable jump is >= -tol.  Jump fields are None for smooth profiles.
    """

    max_I: float
    x_at_max_I: float
    max_J: float
    x_at_max_J: float
    certified: bool
    tol: float
    jump_phi: float | None = None
    jump_psi: float | None = None


def _fd_second_derivative(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Centered second derivative on a non-uniform grid (interior points)."""
    h1 = xs[1:-1] - xs[:-2]
    h2 = xs[2:] - xs[1:-1]
    return 2.0 * (h1 * ys[2:] - (h1 + h2) * ys[1:-1] + h2 * ys[:-2]) / (
        h1 * h2 * (h1 + h2)
    )


def residuals_IJ(
    table: SupersolutionTable,
    params: CompetitionParams,
    tol: float = 1e-8,
    deriv_check_tol: float = 1e-4,
) -> ResidualReport:
    """Certify the smooth candidate by evaluating I and J on the grid.

    Both residuals reduce to explicit functions of s = sigma(a x):

        phi'' = a^2 p [(p-1) s^(p-2) G(s) - s^(p-1) h_p(s)]
        psi'' = -a^2 h_p(s)

    so I = phi'' + f(s^p, s) and J = (d/r) psi'' + g(s^p, s) contain no
    differencing error.  A centered-difference reconstruction of phi'' is
    compared against the closed form; disagreement beyond
    ``deriv_check_tol`` raises :class:`GridResolutionError`.
    """
    s = table.sigma
    p, a = table.p, table.a
    a2 = a * a
    G = np.maximum(first_integral(s, p), 0.0)
    hp = h_p(s, p)

    phi_dd = a2 * p * ((p - 1.0) * np.power(s, p - 2.0) * G - np.power(s, p - 1.0) * hp)
    I = phi_dd + reaction_f(table.phi, table.psi, params)
    J = -params.ratio * a2 * hp + reaction_g(table.phi, table.psi, params)

    fd = _fd_second_derivative(table.xs, table.phi)
    fd_err = float(np.max(np.abs(fd - phi_dd[1:-1])))
    if fd_err > deriv_check_tol:
        raise GridResolutionError(
            f"finite-difference check of phi'' failed: {fd_err:.3e} > {deriv_check_tol:.3e}"
        )

    i_max = int(np.argmax(I))
    j_max = int(np.argmax(J))
    max_I = float(I[i_max])
    max_J = float(J[j_max])
    return ResidualReport(
        max_I=max_I,
        x_at_max_I=float(table.xs[i_max]),
        max_J=max_J,
        x_at_max_J=float(table.xs[j_max]),
        certified=(max_I <= tol and max_J <= tol),
        tol=tol,
    )


def choose_p_a(params: CompetitionParams) -> SupersolCandidate | None:
    """Select (p, a) by the standard recipe, or None when no candidate exists.

    For k1 >= m(k2): p = k1 if k1 < 2, p = 2 if m(k2) <= 2 <= k1, and
    p = m(k2) otherwise.  For k1 < m(k2): p = m(k2), where condition (d)
    pins a^2 = k2 r / d.  Whenever p lands on m(k2) the (d) interval
    degenerates to that single point, so p is nudged up by one part in 1e9
    to keep the interval open under floating-point evaluation; a^2 is then
    the midpoint of the admissible interval from (a)-(d).  The returned
    candidate always passes :func:`admissibility_conditions`.
    """
    k1, k2 = params.k1, params.k2
    m = m_of_k(k2)
    if k1 >= m:
        if k1 < 2.0:
            p = k1
        elif m <= 2.0:
            p = 2.0
        else:
            p = m
    else:
        p = m
    if p <= m * (1.0 + 1e-12):
        p = m * (1.0 + 1e-9)

    pp = (p + 1.0) * (p + 2.0)
    ratio = params.ratio
    lo = (k2 - 1.0) * pp / (ratio * (p - 1.0) * (p + 4.0))
    hi = pp / (6.0 * ratio)
    hi = min(hi, pp * (k1 - 1.0) / (6.0 * p * p))
    if p >= 2.0 * k1:
        return None
    hi = min(hi, (2.0 * k1 - p) / (2.0 * p))
    if p > k1:
        lo = max(lo, pp * (p - k1) / (p * (p - 1.0) * (p + 4.0)))
    if lo > hi:
        return None
    cand = SupersolCandidate(p=p, a=math.sqrt(0.5 * (lo + hi)))
    if not all(admissibility_conditions(cand, params)):
        return None
    return cand


def matching_mismatch(k1, k2):
    """Slope-matching defect of the zero-diffusion standing profile at its corner.

    M(k1, k2) = [(k1-1) k2^-2 - (2/3)(k1 k2 - 1) k2^-3]
              - [-k2^-2 + (2/3) k2^-3 + 1/3]

    measures (left slope)^2 - (right slope)^2 at the matching level 1/k2.
    M is strictly increasing in k1 with its unique root at k1 = k2^2, the
    level at which a zero-diffusion standing wave exists.  Exact when called
    with Fractions.
    """
    if isinstance(k1, Fraction) or isinstance(k2, Fraction):
        k1, k2 = Fraction(k1), Fraction(k2)
        third = Fraction(1, 3)
        two_thirds = Fraction(2, 3)
    else:
        third = 1.0 / 3.0
        two_thirds = 2.0 / 3.0
    left = (k1 - 1) / k2**2 - two_thirds * (k1 * k2 - 1) / k2**3
    right = -1 / k2**2 + two_thirds / k2**3 + third
    return left - right


@dataclass(frozen=True)
class DegenerateSupersol:
    """Piecewise blocking profile for small diffusion ratio.

    On x < 0 the profile is phi = beta_ mu (1 - mu) with mu a logistic of
    rate gamma_ shifted by xi > 0, and psi = k2 phi + delta; on x >= 0 it is
    phi = 1 - 6 lam (1 - lam) with lam a unit-rate logistic shifted by
    eta < 0, and psi = 1.  Both pieces meet at phi(0) = (1 - delta)/k2 and
    increase strictly on their half-lines.
    """

    k1: float
    k2: float
    delta: float
    gamma_: float
    beta_: float
    xi: float
    eta: float
    m0: float
    m_star: float

    @property
    def phi0(self) -> float:
        """Common value of both pieces at the matching point."""
        return (1.0 - self.delta) / self.k2

    def phi(self, x):
        """Evaluate phi at scalar or array x."""
        x_arr = np.asarray(x, dtype=float)
        mu = 1.0 / (1.0 + np.exp(-self.gamma_ * (x_arr - self.xi)))
        lam = 1.0 / (1.0 + np.exp(-(x_arr - self.eta)))
        left = self.beta_ * mu * (1.0 - mu)
        right = 1.0 - 6.0 * lam * (1.0 - lam)
        out = np.where(x_arr < 0.0, left, right)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def psi(self, x):
        """Evaluate psi at scalar or array x."""
        x_arr = np.asarray(x, dtype=float)
        out = np.where(x_arr < 0.0, self.k2 * self.phi(x_arr) + self.delta, 1.0)
        if np.ndim(x) == 0:
            return float(out)
        return out


def delta_candidates(params: CompetitionParams) -> tuple[float, float, float]:
    """The three offset levels (delta1, delta2, delta3) bounding admissibility.

    delta1 = 1 - 1/k1 keeps the left-piece rate real, delta2 =
    1 - 3 k2/(k1 k2 + 2) keeps the matching level below the left piece's
    maximum, and delta3 = 1 - (k2^2/k1)^(1/3) is the largest offset with a
    nonnegative slope jump (defined only for k1 > k2^2).
    """
    k1, k2 = params.k1, params.k2
    delta1 = 1.0 - 1.0 / k1
    delta2 = 1.0 - 3.0 * k2 / (k1 * k2 + 2.0)
    delta3 = 1.0 - (k2 * k2 / k1) ** (1.0 / 3.0) if k1 > k2 * k2 else float("nan")
    return delta1, delta2, delta3


def degenerate_build(
    params: CompetitionParams, delta: float | None = None
) -> DegenerateSupersol:
    """Construct the piecewise profile; delta defaults to the maximal jump-safe offset.

    Requires k1 > k2^2 and k1 > 3 - 2/k2, and 0 < delta < delta2 so that the
    matching level m0 = (1-delta)(k1 k2 - 1)/(6 k2 (k1 (1-delta) - 1)) lies
    in (1/6, 1/4].  The left shift solves mu(0)(1 - mu(0)) = m0 on the
    branch mu(0) < 1/2, equivalently xi > 0, so phi rises through the
    matching point; the right shift eta < 0 follows from the continuity
    condition phi(0) = (1 - delta)/k2.
    """
    k1, k2 = params.k1, params.k2
    if k1 <= k2 * k2:
        raise ParameterError(
            f"degenerate construction requires k1 > k2^2, got k1={k1!r}, k2={k2!r}"
        )
    if k1 <= 3.0 - 2.0 / k2:
        raise ParameterError("degenerate construction requires k1 > 3 - 2/k2")
    _, delta2, delta3 = delta_candidates(params)
    if delta is None:
        delta = delta3
    if not (0.0 < delta < delta2):
        raise ParameterError(
            f"delta must lie in (0, {delta2!r}) for these parameters, got {delta!r}"
        )

    gamma2 = k1 * (1.0 - delta) - 1.0
    gamma = math.sqrt(gamma2)
    beta = 6.0 * gamma2 / (k1 * k2 - 1.0)
    m0 = (1.0 - delta) / (k2 * beta)
    if not (1.0 / 6.0 < m0 <= 0.25):
        raise ParameterError(f"matching level m0={m0!r} outside (1/6, 1/4]")
    m_star = m0 - math.sqrt(m0 * (m0 - 1.0 / 6.0))

    mu0 = 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * m0))
    xi = math.log(1.0 / mu0 - 1.0) / gamma

    phi0 = (1.0 - delta) / k2
    lam0 = 0.5 * (1.0 + math.sqrt((1.0 + 2.0 * phi0) / 3.0))
    eta = math.log(1.0 / lam0 - 1.0)
    return DegenerateSupersol(
        k1=k1,
        k2=k2,
        delta=delta,
        gamma_=gamma,
        beta_=beta,
        xi=xi,
        eta=eta,
        m0=m0,
        m_star=m_star,
    )


def h_star(params: CompetitionParams, delta: float) -> float:
    """Largest admissible d/r for the slaved-component residual at offset delta.

    Two closed forms are computed and must agree to 1e-12 (relative):

        H* = delta (m0 - m*) / (gamma^2 m* (1 - 6 m*))
           = 6 delta / (k1 (1 - delta) - 1) * (sqrt(m0) + sqrt(m0 - 1/6))^2

    H* is strictly increasing in delta; at delta = delta3 it reduces to the
    ratio bound of the degenerate sign criterion.
    """
    ds = degenerate_build(params, delta)
    gamma2 = ds.gamma_ * ds.gamma_
    m0, mst = ds.m0, ds.m_star
    form1 = delta * (m0 - mst) / (gamma2 * mst * (1.0 - 6.0 * mst))
    form2 = (
        6.0 * delta / gamma2 * (math.sqrt(m0) + math.sqrt(m0 - 1.0 / 6.0)) ** 2
    )
    if abs(form1 - form2) > 1e-12 * max(1.0, abs(form1)):
        raise ArithmeticError(
            f"H* closed forms disagree: {form1!r} vs {form2!r}"
        )
    return form2


def _degenerate_jumps(ds: DegenerateSupersol) -> tuple[float, float]:
    """Slope jumps (phi'(0-) - phi'(0+), psi'(0-) - psi'(0+)) from the first integrals."""
    phi0 = ds.phi0
    left_sq = (ds.gamma_**2) * phi0**2 - (2.0 / 3.0) * (ds.k1 * ds.k2 - 1.0) * phi0**3
    right_sq = -(phi0**2) + (2.0 / 3.0) * phi0**3 + 1.0 / 3.0
    left = math.sqrt(max(left_sq, 0.0))
    right = math.sqrt(max(right_sq, 0.0))
    # psi is constant on x >= 0, so its jump is just the left slope times k2.
    return left - right, ds.k2 * left


def degenerate_residuals(
    ds: DegenerateSupersol,
    params: CompetitionParams,
    tol: float = 1e-8,
    n: int = 4001,
) -> ResidualReport:
    """Certify the piecewise profile: residuals on both half-lines plus slope jumps.

    On x < 0 the profile solves I = 0 exactly and J <= 0 reduces to
    d/r <= H*(delta); on x > 0, I = 0 exactly and J vanishes identically.
    All second derivatives come from the logistic closed forms; the
    reactions are evaluated through the model, so residuals are measured
    against the actual nonlinearities rather than their simplified forms.
    """
    if ds.k1 != params.k1 or ds.k2 != params.k2:
        raise ParameterError("profile was built for different competition coefficients")
    ratio = params.ratio

    span_l = abs(ds.xi) + 40.0 / ds.gamma_ + 10.0
    xl = np.linspace(-span_l, 0.0, n)
    mu = 1.0 / (1.0 + np.exp(-ds.gamma_ * (xl - ds.xi)))
    w = mu * (1.0 - mu)
    phi_l = ds.beta_ * w
    phi_dd_l = ds.beta_ * ds.gamma_**2 * w * (1.0 - 6.0 * w)
    psi_l = ds.k2 * phi_l + ds.delta
    I_l = phi_dd_l + reaction_f(phi_l, psi_l, params)
    J_l = ratio * ds.k2 * phi_dd_l + reaction_g(phi_l, psi_l, params)

    span_r = abs(ds.eta) + 40.0 + 10.0
    xr = np.linspace(0.0, span_r, n)
    lam = 1.0 / (1.0 + np.exp(-(xr - ds.eta)))
    wr = lam * (1.0 - lam)
    phi_r = 1.0 - 6.0 * wr
    phi_dd_r = -6.0 * wr * (1.0 - 6.0 * wr)
    I_r = phi_dd_r + reaction_f(phi_r, 1.0, params)
    J_r = ratio * 0.0 + reaction_g(phi_r, 1.0, params)

    xs = np.concatenate([xl, xr])
    I = np.concatenate([I_l, I_r])
    J = np.concatenate([J_l, J_r])
    i_max = int(np.argmax(I))
    j_max = int(np.argmax(J))
    max_I = float(I[i_max])
    max_J = float(J[j_max])
    jump_phi, jump_psi = _degenerate_jumps(ds)
    certified = (
        max_I <= tol and max_J <= tol and jump_phi >= -tol and jump_psi >= -tol
    )
    return ResidualReport(
        max_I=max_I,
        x_at_max_I=float(xs[i_max]),
        max_J=max_J,
        x_at_max_J=float(xs[j_max]),
        certified=certified,
        tol=tol,
        jump_phi=jump_phi,
        jump_psi=jump_psi,
    )
