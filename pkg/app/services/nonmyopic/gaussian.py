"""
Adjusted Gaussian
Exponential-quadratic tilts of a normal density and the static CARA problem under them
"""
import logging
import math
from typing import Tuple

from scipy.integrate import quad

from app.core.exceptions import ParameterError
from app.models.schemas.nonmyopic import AdjustedGaussianResult, QuadraticExponential

logger = logging.getLogger(__name__)


def adjusted_gaussian(A: float, B: float, C: float, mu: float, sigma2: float) -> AdjustedGaussianResult:
    """
    exp(-A - B z - C z^2) * phi(z; mu, sigma2) = K * phi(z; m, Sigma2)

    Args:
        A, B, C: Tilt coefficients (C >= 0)
        mu: Mean of the untilted normal
        sigma2: Variance of the untilted normal

    Returns:
        AdjustedGaussianResult with m, Sigma2, K and log K
    """
    if C < 0:
        raise ParameterError(f"C must be >= 0 for the tilt to be integrable, got {C}")
    if sigma2 <= 0:
        raise ParameterError(f"sigma2 must be positive, got {sigma2}")

    spread = 2.0 * C * sigma2 + 1.0
    Sigma2 = sigma2 / spread
    m = Sigma2 * (mu / sigma2 - B)
    log_K = -0.5 * math.log(spread) - (A + 0.5 * mu ** 2 / sigma2) + m ** 2 / (2.0 * Sigma2)
    K = math.exp(log_K) if log_K < 700.0 else math.inf
    return AdjustedGaussianResult(m=m, Sigma2=Sigma2, K=K, log_K=log_K)


def adjusted_gaussian_for(value: QuadraticExponential, mu: float, sigma2: float) -> AdjustedGaussianResult:
    return adjusted_gaussian(value.A, value.B, value.C, mu, sigma2)


def tilted_density_mass(A: float, B: float, C: float, mu: float, sigma2: float) -> float:
    """
    Quadrature of K^-1 exp(-A - B z - C z^2) phi(z; mu, sigma2) over the real line.
    One when the adjusted-Gaussian normalizer is right.
    """
    result = adjusted_gaussian(A, B, C, mu, sigma2)
    sd = math.sqrt(sigma2)
    lo = min(mu, result.m) - 12.0 * sd
    hi = max(mu, result.m) + 12.0 * sd

    def integrand(z: float) -> float:
        log_density = -0.5 * math.log(2.0 * math.pi * sigma2) - 0.5 * (z - mu) ** 2 / sigma2
        return math.exp(-A - B * z - C * z * z + log_density - result.log_K)

    mass, _ = quad(integrand, lo, hi, points=[result.m], limit=200, epsabs=0.0, epsrel=1e-12)
    return mass


def gral_max(
    A: float,
    B: float,
    C: float,
    mu: float,
    sigma2: float,
    e: float,
    f: float,
    a: float,
) -> Tuple[float, float]:
    """
    max_x E[-exp(-a x (f + e z) - A - B z - C z^2)], z ~ N(mu, sigma2).

    Under the adjusted Gaussian N(m, s2) the payoff f + e z has mean f + e m and
    variance e^2 s2, so the static CARA demand applies.

    Returns:
        (xstar, value)
    """
    if a <= 0:
        raise ParameterError(f"a must be positive, got {a}")
    if e == 0:
        raise ParameterError("e = 0 leaves the payoff riskless")

    adjusted = adjusted_gaussian(A, B, C, mu, sigma2)
    mean = f + e * adjusted.m
    var = e ** 2 * adjusted.Sigma2
    xstar = mean / (a * var)
    value = -math.exp(adjusted.log_K - 0.5 * mean ** 2 / var)
    return xstar, value
