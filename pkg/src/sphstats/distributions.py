"""Density evaluation for the spherical dispersion family.

Covers the von Mises-Fisher density and its colatitude reduction, the exact
sampling laws of the known-pole sufficient statistic x = sum cos(theta_i)
(including the axial variant), Bingham and matrix-Fisher densities with
numerically precomputed normalizers, and the conditional von Mises law of an
estimated planar direction given the resultant length.

Every density here is tagged with the base measure it integrates to one
against (``fn.base_measure``): "surface-lebesgue" for unnormalized surface
area on the sphere, "interval-lebesgue" for densities of scalar statistics,
and "normalized-haar" on the rotation group. The distinction matters: the
cos-theta marginal normalizer B(kappa) = kappa/(2 sinh kappa) equals
2*pi*c_2(kappa), so conflating the two scales silently miscounts mass.
"""

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from scipy.special import ive

from .geometry import RotationElement, unit_vector
from .special import cos_marginal_normalizer, vmf_log_normalizer

__all__ = [
    "VmfParams",
    "SampleSummary",
    "FiducialSpec",
    "base_measure",
    "vmf_log_density",
    "fisher_colatitude_density",
    "suff_stat_polynomial",
    "suff_stat_density",
    "axial_suff_stat_density",
    "bingham_normalizer",
    "bingham_log_density",
    "matrix_fisher_normalizer",
    "matrix_fisher_log_density",
    "fiducial_conditional_density",
]

MAX_EXACT_LAW_N = 30  # the alternating sum beyond this is out of contract


def base_measure(tag: str):
    """Attach the base-measure tag a density integrates to one against."""

    def decorate(fn):
        fn.base_measure = tag
        return fn

    return decorate


@dataclass(frozen=True)
class VmfParams:
    """von Mises-Fisher parameters: mean direction mu (normalized on entry)
    and concentration kappa >= 0."""

    mu: np.ndarray
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "mu", unit_vector(self.mu))
        if not self.kappa >= 0.0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")

    @property
    def p(self) -> int:
        return self.mu.size - 1


@dataclass(frozen=True)
class SampleSummary:
    """First-moment summary of a directional sample.

    mean_vector is the Euclidean average x-bar, factored as
    mean_resultant_length * mean_direction; mean_direction is None for the
    degenerate case R-bar = 0. suff_stat_x = sum mu.y_i is populated only
    when a reference direction was supplied.
    """

    n: int
    mean_vector: np.ndarray
    mean_direction: Optional[np.ndarray]
    mean_resultant_length: float
    suff_stat_x: Optional[float] = None


@dataclass(frozen=True)
class FiducialSpec:
    """Inputs of the conditional direction law: sample size n, observed
    resultant length rbar, known modulus rho, and true direction theta0."""

    n: int
    rbar: float
    rho: float
    theta0: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.rbar < 0.0 or self.rho < 0.0:
            raise ValueError("rbar and rho must be nonnegative")

    @property
    def concentration(self) -> float:
        return self.n * self.rbar * self.rho


def _log_cos_marginal_normalizer(kappa: float) -> float:
    if kappa == 0.0:
        return math.log(0.5)
    if kappa > 700.0:
        return math.log(kappa) - kappa - math.log(2.0) - math.log1p(-math.exp(-2.0 * kappa))
    return math.log(cos_marginal_normalizer(kappa))


@base_measure("surface-lebesgue")
def vmf_log_density(params: VmfParams, x) -> float:
    """log of c_p(kappa) * exp(kappa * mu.x) at a unit vector x."""
    x = np.asarray(x, dtype=float)
    if x.shape != params.mu.shape:
        raise ValueError(f"dimension mismatch: point {x.shape} vs mean {params.mu.shape}")
    return vmf_log_normalizer(params.p, params.kappa) + params.kappa * float(params.mu @ x)


@base_measure("interval-lebesgue")
def fisher_colatitude_density(kappa: float, theta: float) -> float:
    """Density of the colatitude under a pole-aligned Fisher law on S_2:
    (kappa / (2 sinh kappa)) * exp(kappa cos theta) * sin theta.

    Integrates to one over [0, pi]; the longitude is independent and uniform.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"colatitude must be in [0, pi], got {theta}")
    log_b = _log_cos_marginal_normalizer(kappa)
    return math.exp(log_b + kappa * math.cos(theta)) * math.sin(theta)


def suff_stat_polynomial(x: float, n: int) -> float:
    """Piecewise-polynomial factor P(x, N) of the sufficient-statistic law.

    P(x, N) = (1/(N-1)!) * sum_r (-1)^r C(N, r) (N - 2r - x)^{N-1}, the sum
    running over integers r strictly below (N - x)/2. Even in x. The
    alternating sum cancels catastrophically in double precision for N beyond
    about 15, so it is evaluated in extended precision; N > 30 is refused
    (the estimating equations never need the exact law at that size).
    """
    if n < 1 or n != int(n):
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    if n > MAX_EXACT_LAW_N:
        raise ValueError(f"exact law unsupported beyond N = {MAX_EXACT_LAW_N} (got {n})")
    if abs(x) > n:
        raise ValueError(f"|x| must be at most n, got x={x}, n={n}")
    with mpmath.workdps(25 + 2 * n):
        xm = mpmath.mpf(x)
        r_max = int(mpmath.ceil((n - xm) / 2)) - 1
        total = mpmath.mpf(0)
        for r in range(r_max + 1):
            term = mpmath.binomial(n, r) * (n - 2 * r - xm) ** (n - 1)
            total += term if r % 2 == 0 else -term
        value = float(total / mpmath.factorial(n - 1))
    return max(value, 0.0)


@base_measure("interval-lebesgue")
def suff_stat_density(x: float, n: int, kappa: float) -> float:
    """Known-pole sampling density g_N(x) = B(kappa)^N exp(kappa x) P(x, N)
    of x = sum cos(theta_i), on [-N, N]."""
    p_val = suff_stat_polynomial(x, n)
    if p_val == 0.0:
        return 0.0
    return math.exp(n * _log_cos_marginal_normalizer(kappa) + kappa * x) * p_val


@base_measure("interval-lebesgue")
def axial_suff_stat_density(x: float, n: int, kappa: float) -> float:
    """Known-axis sampling density 2 B(kappa)^N cosh(kappa x) P(x, N).

    Even in x and equal to g_N(x) + g_N(-x) pointwise; integrates to one over
    the half-line [0, N].
    """
    p_val = suff_stat_polynomial(x, n)
    if p_val == 0.0:
        return 0.0
    ax = abs(x) * kappa
    log_even = n * _log_cos_marginal_normalizer(kappa) + ax + math.log1p(math.exp(-2.0 * ax))
    return math.exp(log_even) * p_val


def _check_bingham(a_matrix) -> np.ndarray:
    a = np.asarray(a_matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("Bingham parameter must be a square matrix")
    if np.max(np.abs(a - a.T)) > 1e-12:
        raise ValueError("Bingham parameter matrix must be symmetric within 1e-12")
    return a


def bingham_normalizer(a_matrix) -> float:
    """Surface integral of exp(-x.A.x) over S_2 by adaptive quadrature."""
    from scipy.integrate import dblquad

    a = _check_bingham(a_matrix)
    if a.shape != (3, 3):
        raise ValueError("only q = 3 (the ordinary sphere) is supported")

    def integrand(phi, theta):
        s = math.sin(theta)
        x = np.array([s * math.cos(phi), s * math.sin(phi), math.cos(theta)])
        return math.exp(-float(x @ a @ x)) * s

    value, _ = dblquad(integrand, 0.0, math.pi, 0.0, 2.0 * math.pi, epsabs=1e-10, epsrel=1e-9)
    return value


@base_measure("surface-lebesgue")
def bingham_log_density(a_matrix, x, normalizer: float) -> float:
    """log density exp(-x.A.x)/normalizer; A and A + c*I give the same law."""
    a = _check_bingham(a_matrix)
    x = np.asarray(x, dtype=float)
    if x.size != a.shape[0]:
        raise ValueError("dimension mismatch between point and parameter matrix")
    return -float(x @ a @ x) - math.log(normalizer)


def matrix_fisher_normalizer(f_matrix, n_samples: int = 10**6, stream=None):
    """Normalizer E[exp(trace(F^T X))] under normalized Haar measure on SO(3),
    by seeded Monte Carlo.

    Returns:
        (estimate, standard_error): the Monte Carlo mean and its standard
        error; no closed form is attempted.
    """
    from .sampling import SeededStream, _haar_quats, _quats_to_matrices

    f = np.asarray(f_matrix, dtype=float)
    if f.shape != (3, 3):
        raise ValueError("matrix Fisher parameter must be 3x3")
    if stream is None:
        stream = SeededStream(seed=20530, stream_id=0)
    rng = stream.generator()
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        block = min(200_000, n_samples - done)
        mats = _quats_to_matrices(_haar_quats(rng, block))
        vals = np.exp(np.einsum("ij,nij->n", f, mats))
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += block
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    return mean, math.sqrt(var / n_samples)


@base_measure("normalized-haar")
def matrix_fisher_log_density(f_matrix, rot: RotationElement, normalizer: float) -> float:
    """log density trace(F^T X) - log(normalizer) w.r.t. normalized Haar."""
    f = np.asarray(f_matrix, dtype=float)
    if f.shape != (3, 3):
        raise ValueError("matrix Fisher parameter must be 3x3")
    return float(np.trace(f.T @ rot.matrix)) - math.log(normalizer)


@base_measure("interval-lebesgue")
def fiducial_conditional_density(spec: FiducialSpec, theta_hat: float) -> float:
    """Conditional von Mises law of the estimated direction given the
    resultant: exp(c cos(theta_hat - theta0)) / (2 pi I_0(c)), c = n*rbar*rho.

    rho = 0 collapses to the uniform circle density 1/(2 pi).
    """
    c = spec.concentration
    if c == 0.0:
        return 1.0 / (2.0 * math.pi)
    delta = theta_hat - spec.theta0
    return math.exp(c * (math.cos(delta) - 1.0)) / (2.0 * math.pi * float(ive(0, c)))
