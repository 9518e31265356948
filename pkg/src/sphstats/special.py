"""Modified-Bessel machinery behind every normalizer and estimator.

All functions are pure and safe for concurrent use. Evaluation strategy:
power series for small argument (kappa < nu + 10), closed hyperbolic forms
for half-integer orders at larger argument, and scipy's Amos implementation
otherwise. Estimation code should prefer the log-domain variants, which stay
finite far beyond the overflow point of ``bessel_i``.
"""

import math

from scipy.special import ive, iv

from .errors import ConvergenceError

__all__ = [
    "bessel_i",
    "log_bessel_i",
    "mean_resultant_fn",
    "inverse_mean_resultant",
    "vmf_log_normalizer",
    "cos_marginal_normalizer",
]

# Power series below this margin over the order; hyperbolic/Amos above.
_SERIES_MARGIN = 10.0


def _check_order_kappa(nu: float, kappa: float) -> None:
    if not nu >= -0.5:
        raise ValueError(f"Bessel order must be >= -1/2, got {nu}")
    if not kappa >= 0.0:
        raise ValueError(f"concentration must be nonnegative, got {kappa}")


def _is_half_integer(nu: float) -> bool:
    return (2.0 * nu) == round(2.0 * nu) and nu != round(nu)


def _log_series(nu: float, kappa: float):
    """log I_nu(kappa) via the ascending series, split as
    nu*log(kappa/2) - lgamma(nu+1) + log(correction-sum).

    The correction sum starts at 1 and has positive terms, so it neither
    underflows nor cancels. Valid for any kappa, efficient for small ones.
    """
    if kappa == 0.0:
        return 0.0 if nu == 0.0 else -math.inf
    q = 0.25 * kappa * kappa
    term = 1.0
    total = 1.0
    for m in range(1, 1000):
        term *= q / (m * (nu + m))
        total += term
        if term < 1e-18 * total:
            break
    else:
        raise ConvergenceError(f"Bessel series did not converge at nu={nu}, kappa={kappa}")
    return nu * math.log(0.5 * kappa) - math.lgamma(nu + 1.0) + math.log(total)


def _spherical_parts(n: int, kappa: float):
    """Polynomial factors of the closed form for I_{n+1/2}.

    I_{n+1/2}(x) = (e^x * a - (-1)^n * e^{-x} * b) / sqrt(2*pi*x)
    with a, b the degree-n polynomials in 1/x below.
    """
    a = 0.0
    b = 0.0
    coeff = 1.0
    for k in range(n + 1):
        if k > 0:
            coeff *= (n + k) * (n - k + 1) / (2.0 * k * kappa)
        a += coeff if k % 2 == 0 else -coeff
        b += coeff
    return a, b


def bessel_i(nu: float, kappa: float) -> float:
    """Modified Bessel function of the first kind, I_nu(kappa).

    Half-integer orders route through the closed hyperbolic forms
    (I_{1/2}(x) = sqrt(2/(pi*x)) * sinh x and its relatives) once the
    argument clears the series regime.

    Raises:
        OverflowError: kappa is beyond the representable exponential range;
            use ``log_bessel_i`` instead.
    """
    _check_order_kappa(nu, kappa)
    if kappa == 0.0:
        if nu == 0.0:
            return 1.0
        return 0.0 if nu > 0 else math.inf
    if kappa > 713.0:
        # e^kappa no longer representable in double precision
        raise OverflowError("bessel_i overflows for kappa > 713; use log_bessel_i")
    if kappa < nu + _SERIES_MARGIN:
        return math.exp(_log_series(nu, kappa))
    if _is_half_integer(nu):
        n = int(round(nu - 0.5))
        a, b = _spherical_parts(n, kappa)
        sign = -1.0 if n % 2 == 0 else 1.0
        return (math.exp(kappa) * a + sign * math.exp(-kappa) * b) / math.sqrt(
            2.0 * math.pi * kappa
        )
    value = float(iv(nu, kappa))
    if math.isinf(value):
        raise OverflowError("bessel_i overflowed; use log_bessel_i")
    return value


def log_bessel_i(nu: float, kappa: float) -> float:
    """log I_nu(kappa), finite for all kappa up to at least 1e5."""
    _check_order_kappa(nu, kappa)
    if kappa == 0.0:
        return 0.0 if nu == 0.0 else -math.inf
    if kappa < nu + _SERIES_MARGIN:
        return _log_series(nu, kappa)
    if _is_half_integer(nu):
        n = int(round(nu - 0.5))
        a, b = _spherical_parts(n, kappa)
        sign = -1.0 if n % 2 == 0 else 1.0
        inner = a + sign * math.exp(-2.0 * kappa) * b
        if inner > 0.0:
            # a is O(1) here, so the log is safe; the e^{-2k} piece is a dusting
            return kappa + math.log(inner) - 0.5 * math.log(2.0 * math.pi * kappa)
        # hyperbolic polynomial cancelled (very high order near the series
        # boundary); the scaled-Bessel route below covers it
    scaled = float(ive(nu, kappa))
    if scaled <= 0.0:
        return _log_series(nu, kappa)
    return math.log(scaled) + kappa


def mean_resultant_fn(p: int, kappa: float) -> float:
    """Mean resultant length A_p(kappa) = I_{(p+1)/2}(kappa) / I_{(p-1)/2}(kappa).

    Strictly increasing from A_p(0) = 0 toward 1 as kappa grows. For p = 2
    this is exactly coth(kappa) - 1/kappa, hard-coded with a Taylor guard
    because the generic Bessel ratio loses precision near zero.
    """
    if p < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {p}")
    if not kappa >= 0.0:
        raise ValueError(f"concentration must be nonnegative, got {kappa}")
    if kappa == 0.0:
        return 0.0
    if p == 2:
        if kappa < 1e-4:
            return kappa / 3.0 - kappa**3 / 45.0
        return 1.0 / math.tanh(kappa) - 1.0 / kappa
    if kappa < 1e-4:
        return kappa / (p + 1.0) * (1.0 - kappa * kappa / ((p + 1.0) * (p + 3.0)))
    return math.exp(log_bessel_i((p + 1) / 2.0, kappa) - log_bessel_i((p - 1) / 2.0, kappa))


def _mean_resultant_deriv(p: int, kappa: float, a: float) -> float:
    # d/dk A_p(k) = 1 - A^2 - p*A/k
    return 1.0 - a * a - p * a / kappa


def inverse_mean_resultant(
    p: int,
    rbar: float,
    tol: float = 1e-10,
    max_iter: int = 200,
    full_output: bool = False,
):
    """Solve A_p(kappa) = rbar for kappa.

    Bracketed Newton iteration with bisection fallback; the bracket starts at
    [0.1, 10] times the standard approximation rbar*p/(1 - rbar^2) and is
    widened if it fails to straddle the root. Converges when the residual
    |A_p(kappa) - rbar| drops below ``tol``.

    Args:
        p: sphere dimension (S_p lives in R^{p+1}).
        rbar: target mean resultant length, in [0, 1).
        tol: residual tolerance.
        max_iter: iteration cap before ConvergenceError.
        full_output: also return (iterations, residual).

    Raises:
        ValueError: rbar outside [0, 1); rbar >= 1 means every observation
            coincides and kappa is infinite.
    """
    if p < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {p}")
    if not 0.0 <= rbar:
        raise ValueError(f"mean resultant length must be >= 0, got {rbar}")
    if rbar >= 1.0:
        raise ValueError("mean resultant length >= 1: degenerate sample, kappa infinite")
    if rbar == 0.0:
        return (0.0, 0, 0.0) if full_output else 0.0

    guess = rbar * p / (1.0 - rbar * rbar)
    lo, hi = 0.1 * guess, 10.0 * guess
    while mean_resultant_fn(p, hi) < rbar:
        lo, hi = hi, hi * 10.0
        if hi > 1e18:
            raise ConvergenceError(f"could not bracket A_{p} inverse at rbar={rbar}")
    while mean_resultant_fn(p, lo) > rbar:
        lo *= 0.1
        if lo < 1e-300:
            lo = 0.0
            break

    kappa = min(max(guess, lo), hi)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        a = mean_resultant_fn(p, kappa)
        residual = a - rbar
        if abs(residual) <= tol:
            # polish: a residual of tol bounds kappa only through the local
            # slope, so push Newton until the step itself is negligible
            for _ in range(3):
                step = residual / _mean_resultant_deriv(p, kappa, a)
                if abs(step) <= 1e-12 * kappa:
                    break
                kappa -= step
                a = mean_resultant_fn(p, kappa)
                residual = a - rbar
            if full_output:
                return kappa, iteration, abs(residual)
            return kappa
        if residual > 0.0:
            hi = kappa
        else:
            lo = kappa
        step = residual / _mean_resultant_deriv(p, kappa, a)
        candidate = kappa - step
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        kappa = candidate
    raise ConvergenceError(
        f"inverse_mean_resultant did not reach tol={tol} in {max_iter} iterations "
        f"(p={p}, rbar={rbar}, residual={residual})"
    )


def vmf_log_normalizer(p: int, kappa: float) -> float:
    """log c_p(kappa) for the von Mises-Fisher density c_p(k) * exp(k mu.x).

    c_p(k) = k^{(p-1)/2} / ((2 pi)^{(p+1)/2} I_{(p-1)/2}(k)); at kappa = 0 this
    is minus the log surface area of S_p.
    """
    if p < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {p}")
    if not kappa >= 0.0:
        raise ValueError(f"concentration must be nonnegative, got {kappa}")
    nu = (p - 1) / 2.0
    half_q = (p + 1) / 2.0
    if kappa < nu + _SERIES_MARGIN:
        # series form keeps the kappa -> 0 limit exact: the nu*log(kappa)
        # pieces cancel analytically before anything is evaluated
        if kappa == 0.0:
            correction = 0.0
        else:
            correction = _log_series(nu, kappa) - nu * math.log(0.5 * kappa) + math.lgamma(nu + 1.0)
        return nu * math.log(2.0) + math.lgamma(nu + 1.0) - half_q * math.log(2.0 * math.pi) - correction
    return nu * math.log(kappa) - half_q * math.log(2.0 * math.pi) - log_bessel_i(nu, kappa)


def cos_marginal_normalizer(kappa: float) -> float:
    """B(kappa) = kappa / (2 sinh kappa), the normalizer of the cos-theta
    marginal on [-1, 1].

    Distinct from the surface normalizer c_2: B(kappa) = 2*pi*c_2(kappa). The
    kappa = 0 value is the continuous extension 1/2.
    """
    if not kappa >= 0.0:
        raise ValueError(f"concentration must be nonnegative, got {kappa}")
    if kappa == 0.0:
        return 0.5
    if kappa > 700.0:
        # k*e^-k/(1-e^-2k); underflows to the true limit 0 for huge kappa
        return kappa * math.exp(-kappa) / (-math.expm1(-2.0 * kappa))
    return kappa / (2.0 * math.sinh(kappa))
