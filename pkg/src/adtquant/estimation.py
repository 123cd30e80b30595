"""PAC leaf parameters from i.i.d. samples: Gaussian estimate with a
confidence half-width of z_{1-delta/2} * s / sqrt(n), s Bessel-corrected.

The normal quantile is self-implemented: Acklam's rational approximation
refined by one Halley step against the erfc-based normal CDF, giving
absolute error well below 1e-10 across (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import AdtError
from .pac import PacValue

# Coefficients of Acklam's rational approximation to the inverse normal CDF.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)

_P_LOW = 0.02425


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def normal_quantile(p: float) -> float:
    """Inverse standard-normal CDF on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise AdtError(f"quantile argument must be in (0,1), got {p}")

    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
              / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))

    # One Halley refinement against the high-accuracy erfc-based CDF.
    e = normal_cdf(x) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    x = x - u / (1.0 + 0.5 * x * u)
    return x


@dataclass(frozen=True)
class EstimateRequest:
    samples: list[float]
    delta: float
    source: str | None = None

    def __post_init__(self):
        if len(self.samples) < 2:
            raise AdtError(f"need at least 2 samples, got {len(self.samples)}")
        if any(not math.isfinite(x) for x in self.samples):
            raise AdtError("samples must be finite")
        if not 0.0 < self.delta < 1.0:
            raise AdtError(f"delta must be in (0,1), got {self.delta}")


def estimate_gaussian(req: EstimateRequest) -> PacValue:
    """Sample mean with half-width z_{1-delta/2} * s / sqrt(n).

    Zero variance is legal and yields eps = 0.  Clamping for
    probability-typed targets is the caller's job.
    """
    n = len(req.samples)
    mean = math.fsum(req.samples) / n
    var = math.fsum((x - mean) ** 2 for x in req.samples) / (n - 1)
    s = math.sqrt(var)
    z = normal_quantile(1.0 - req.delta / 2.0)
    return PacValue(mean, z * s / math.sqrt(n), req.delta)
