"""Closed-form evaluation of record-setting probabilities.

The probability that the n-th of a stream of iid observations sets a
coordinatewise record is ``E[1 - S(X)]^(n-1)`` where ``S(x) = P(X >= x)`` is
the upper-orthant survival function. Three families admit closed forms:

* independent coordinates:  p_n = H_n^(d-1) / n  with H_n^(k) the Roman
  harmonic number  sum_{j=1..n} (-1)^(j-1) C(n,j) j^(-k);
* marginalized Dirichlet (``MarginalDirichlet(d, a)``):
  S(x) = (1 - ||x||_1)^(d+a-1)  and  p_n = E(1 - Z^(d+a-1))^(n-1)
  with Z ~ Beta(a, d);
* Exponential scale mixture (``ExponentialScaleMixture(d, a)``):
  S(x) = (1 + ||x||_1)^(-a)  and  p_n = E(1 - Z^a)^(n-1),  Z ~ Beta(a, d).

Because d is an integer, every Beta moment here collapses to the finite
product  E Z^s = prod_{i<d} (a+i)/(a+s+i), which makes the alternating sums
evaluable in exact rational arithmetic for any rational a. Floating-point
alternating sums cancel catastrophically once n grows past a few dozen, so
each evaluator offers three routes: exact rational, guarded float sum, and
Gauss-Laguerre quadrature of the smooth log-domain integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betainc, gammaln

from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    PrecisionLossError,
    UnsupportedSpecError,
)
from .model import (
    Comonotone,
    Dirichlet,
    DistributionSpec,
    ExponentialScaleMixture,
    IidExponential,
    MarginalDirichlet,
    Mixture,
)

__all__ = [
    "AlternatingSumExact",
    "AlternatingSumFloat",
    "EvalMethod",
    "GaussQuadrature",
    "beta_power_moment",
    "pn_independent",
    "pn_independent_exact",
    "pn_marginal_dirichlet",
    "pn_marginal_dirichlet_exact",
    "pn_scale_mixture",
    "pn_scale_mixture_exact",
    "record_prob_limit",
    "roman_harmonic",
    "roman_harmonic_direct",
    "survival",
    "survival_transform_cdf",
    "survival_transform_density",
]

# ---------------------------------------------------------------------------
# Evaluation-method tags
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlternatingSumExact:
    """Exact rational alternating sum (a is taken at its exact binary value)."""


@dataclass(frozen=True)
class AlternatingSumFloat:
    """Float alternating sum; raises PrecisionLossError on heavy cancellation."""


@dataclass(frozen=True)
class GaussQuadrature:
    """Gauss-Laguerre quadrature of the log-domain integrand.

    ``nodes`` is the starting rule size; the rule is doubled (up to 4096
    nodes) until two successive evaluations agree to ~1e-11.
    """

    nodes: int = 128

    def __post_init__(self):
        if not isinstance(self.nodes, int) or self.nodes < 8:
            raise InvalidParameterError(f"quadrature nodes must be an integer >= 8, got {self.nodes!r}")


EvalMethod = Union[AlternatingSumExact, AlternatingSumFloat, GaussQuadrature]

#: Float alternating sums abort when max |partial sum| / |result| exceeds this.
CANCELLATION_LIMIT = 1e9

# ---------------------------------------------------------------------------
# Roman harmonic numbers and the independent-coordinates probability
# ---------------------------------------------------------------------------

# Cached columns: _ROMAN_EXACT[k][m-1] == H_m^(k). Level 0 is identically 1.
_ROMAN_EXACT: dict[int, list[Fraction]] = {}
_ROMAN_FLOAT: dict[int, list[float]] = {}


def _check_nk(n, k) -> tuple[int, int]:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameterError(f"n must be an integer >= 1, got {n!r}")
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise InvalidParameterError(f"k must be an integer >= 0, got {k!r}")
    return int(n), int(k)


def roman_harmonic(n: int, k: int) -> Fraction:
    """Roman harmonic number H_n^(k) as an exact rational.

    Defined by the alternating sum sum_{j=1..n} (-1)^(j-1) C(n,j) j^(-k);
    evaluated via the cancellation-free recurrence

        H_n^(0) = 1,      H_n^(k) = sum_{j=1..n} H_j^(k-1) / j,

    which agrees with the direct sum (see :func:`roman_harmonic_direct`) but
    stays exact and fast for large n. H_n^(1) is the ordinary harmonic number.
    """
    n, k = _check_nk(n, k)
    if k == 0:
        return Fraction(1)
    col = _roman_column_exact(k, n)
    return col[n - 1]


def _roman_column_exact(k: int, n: int) -> list[Fraction]:
    col = _ROMAN_EXACT.setdefault(k, [])
    if len(col) >= n:
        return col
    if k == 1:
        prev = None
    else:
        prev = _roman_column_exact(k - 1, n)
    acc = col[-1] if col else Fraction(0)
    for m in range(len(col) + 1, n + 1):
        term = Fraction(1, m) if prev is None else prev[m - 1] / m
        acc += term
        col.append(acc)
    return col


def _roman_column_float(k: int, n: int) -> list[float]:
    # Same recurrence in float: all terms positive, so no cancellation.
    col = _ROMAN_FLOAT.setdefault(k, [])
    if len(col) >= n:
        return col
    prev = None if k == 1 else _roman_column_float(k - 1, n)
    acc = col[-1] if col else 0.0
    for m in range(len(col) + 1, n + 1):
        acc += (1.0 / m) if prev is None else prev[m - 1] / m
        col.append(acc)
    return col


def roman_harmonic_direct(n: int, k: int) -> Fraction:
    """H_n^(k) by the defining alternating sum, term by term, in rationals.

    Exponentially slower than :func:`roman_harmonic` for large n; kept as an
    independent cross-check of the recurrence.
    """
    n, k = _check_nk(n, k)
    return sum(
        (Fraction((-1) ** (j - 1) * math.comb(n, j), j**k) for j in range(1, n + 1)),
        Fraction(0),
    )


def pn_independent_exact(n: int, d: int) -> Fraction:
    """Record probability for independent coordinates, exact: H_n^(d-1) / n."""
    n, _ = _check_nk(n, 0)
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise InvalidParameterError(f"d must be an integer >= 1, got {d!r}")
    return roman_harmonic(n, int(d) - 1) / n


def pn_independent(n: int, d: int) -> float:
    """Record probability for independent coordinates (any continuous marginals).

    Equals 1/n for d = 1 and H_n^(d-1)/n in general; computed by the
    positive-term float recurrence, accurate to ~1e-14 relative.
    """
    n, _ = _check_nk(n, 0)
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise InvalidParameterError(f"d must be an integer >= 1, got {d!r}")
    d = int(d)
    if d == 1:
        return 1.0 / n
    return _roman_column_float(d - 1, n)[n - 1] / n


# ---------------------------------------------------------------------------
# Beta moments
# ---------------------------------------------------------------------------


def beta_power_moment(a: float, d: float, s: float) -> float:
    """E[Z^s] for Z ~ Beta(a, d), via log-gamma: exp(lnG(a+s) + lnG(a+d)
    - lnG(a) - lnG(a+d+s)). Monotone nonincreasing in s; equals 1 at s = 0."""
    a = float(a)
    d = float(d)
    s = float(s)
    if not (np.isfinite(a) and a > 0.0):
        raise InvalidParameterError(f"a must be finite and > 0, got {a!r}")
    if not (np.isfinite(d) and d > 0.0):
        raise InvalidParameterError(f"d must be finite and > 0, got {d!r}")
    if not (np.isfinite(s) and s >= 0.0):
        raise InvalidParameterError(f"s must be finite and >= 0, got {s!r}")
    return float(np.exp(gammaln(a + s) + gammaln(a + d) - gammaln(a) - gammaln(a + d + s)))


def _beta_moment_fraction(a: Fraction, d: int, s: Fraction) -> Fraction:
    # E Z^s for Z ~ Beta(a, d) with integer d: prod_{i<d} (a+i)/(a+s+i).
    out = Fraction(1)
    for i in range(d):
        out *= (a + i) / (a + s + i)
    return out


# ---------------------------------------------------------------------------
# Record probabilities for the two parametric families
# ---------------------------------------------------------------------------


def _check_nda(n, d, a) -> tuple[int, int, float]:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameterError(f"n must be an integer >= 1, got {n!r}")
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidParameterError(f"d must be an integer >= 2, got {d!r}")
    af = float(a)
    if not np.isfinite(af) or af <= 0.0:
        raise InvalidParameterError(f"a must be finite and > 0, got {a!r}")
    return int(n), int(d), af


def _pn_exact(n: int, d: int, a, dir_family: bool) -> Fraction:
    a = Fraction(a)
    s = a + (d - 1) if dir_family else a
    total = Fraction(0)
    sign = 1
    for j in range(n):
        total += sign * math.comb(n - 1, j) * _beta_moment_fraction(a, d, j * s)
        sign = -sign
    return total


def _pn_float_alt(n: int, d: int, a: float, s: float) -> float:
    total = 0.0
    peak = 0.0
    sign = 1.0
    for j in range(n):
        moment = 1.0 if j == 0 else math.prod((a + i) / (a + j * s + i) for i in range(d))
        total += sign * math.comb(n - 1, j) * moment
        peak = max(peak, abs(total))
        sign = -sign
    if peak > CANCELLATION_LIMIT * max(abs(total), np.finfo(float).tiny):
        raise PrecisionLossError(
            f"alternating sum cancelled beyond {CANCELLATION_LIMIT:.0e} "
            f"(n={n}, d={d}, a={a}); use AlternatingSumExact or GaussQuadrature"
        )
    return total


_LAGUERRE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_laguerre(m: int) -> tuple[np.ndarray, np.ndarray]:
    # Golub-Welsch on the Laguerre Jacobi matrix; stable at any size
    # (scipy.special.roots_laguerre overflows above ~500 nodes).
    cached = _LAGUERRE_CACHE.get(m)
    if cached is None:
        diag = 2.0 * np.arange(m) + 1.0
        off = np.arange(1.0, m)
        nodes, vecs = eigh_tridiagonal(diag, off)
        cached = _LAGUERRE_CACHE[m] = (nodes, vecs[0] ** 2)
    return cached


def _pn_quadrature(n: int, d: int, a: float, s: float, nodes: int) -> float:
    # In the log domain (x = e^{-y}) the integrand is analytic:
    #   p = (1/B(a,d)) int_0^inf e^{-a y} (1-e^{-y})^{d-1} (1-e^{-s y})^{n-1} dy,
    # and substituting t = a*y turns the weight into plain e^{-t}.
    log_norm = math.log(a) + gammaln(a) + gammaln(d) - gammaln(a + d)
    prev = None
    m = nodes
    while True:
        t, w = _gauss_laguerre(m)
        y = t / a
        f = (-np.expm1(-y)) ** (d - 1) * (-np.expm1(-s * y)) ** (n - 1)
        cur = float(np.sum(w * f) * math.exp(-log_norm))
        if prev is not None and abs(cur - prev) <= 1e-11 * max(1.0, abs(cur)):
            return cur
        if m >= 4096:
            return cur
        prev = cur
        m *= 2


def _pn_family(n, d, a, dir_family: bool, method: EvalMethod | None) -> float:
    n, d, af = _check_nda(n, d, a)
    if n == 1:
        return 1.0
    s = af + (d - 1) if dir_family else af
    if method is None:
        method = AlternatingSumFloat() if n <= 30 else GaussQuadrature()
    if isinstance(method, AlternatingSumExact):
        return float(_pn_exact(n, d, a, dir_family))
    if isinstance(method, AlternatingSumFloat):
        return _pn_float_alt(n, d, af, s)
    if isinstance(method, GaussQuadrature):
        return _pn_quadrature(n, d, af, s, method.nodes)
    raise InvalidParameterError(f"unknown evaluation method: {method!r}")


def pn_marginal_dirichlet(n: int, d: int, a, method: EvalMethod | None = None) -> float:
    """Record probability under ``MarginalDirichlet(d, a)``.

    Evaluates E(1 - Z^(d+a-1))^(n-1) with Z ~ Beta(a, d). Strictly
    decreasing in a, with limits 1 (a -> 0) and the independent-coordinates
    value (a -> infinity); always >= :func:`pn_independent`.

    ``method=None`` uses the guarded float sum for n <= 30 and quadrature
    beyond, where binomial growth makes the float sum cancel.
    """
    return _pn_family(n, d, a, True, method)


def pn_marginal_dirichlet_exact(n: int, d: int, a) -> Fraction:
    """Exact rational value of :func:`pn_marginal_dirichlet`.

    A float ``a`` is interpreted at its exact binary value; pass a
    :class:`~fractions.Fraction` to control the parameter exactly.
    """
    n, d, _ = _check_nda(n, d, a)
    return _pn_exact(n, d, a, True) if n > 1 else Fraction(1)


def pn_scale_mixture(n: int, d: int, a, method: EvalMethod | None = None) -> float:
    """Record probability under ``ExponentialScaleMixture(d, a)``.

    Evaluates E(1 - Z^a)^(n-1) with Z ~ Beta(a, d). Strictly increasing in
    a, with limits 1/n (a -> 0) and the independent-coordinates value
    (a -> infinity); always between 1/n and :func:`pn_independent`.
    """
    return _pn_family(n, d, a, False, method)


def pn_scale_mixture_exact(n: int, d: int, a) -> Fraction:
    """Exact rational value of :func:`pn_scale_mixture`."""
    n, d, _ = _check_nda(n, d, a)
    return _pn_exact(n, d, a, False) if n > 1 else Fraction(1)


# ---------------------------------------------------------------------------
# Survival functions and the survival transform
# ---------------------------------------------------------------------------


def survival(spec: DistributionSpec, x) -> float | np.ndarray:
    """Upper-orthant survival P(X >= x) under ``spec``.

    Closed forms exist for IidExponential (exp(-||x+||_1)), MarginalDirichlet
    ((1 - ||x||_1)^(d+a-1), clamped to 0 outside the simplex), the
    Exponential scale mixture ((1 + ||x||_1)^(-a)) and Comonotone
    (exp(-max_j x_j+)). Coordinates below 0 are clamped to 0 first, since all
    supports lie in the positive orthant. Accepts a single point (1-D) or a
    batch (..., d); boundary values are resolved by continuity.
    """
    xv = np.asarray(x, dtype=np.float64)
    scalar = xv.ndim == 1
    if xv.shape[-1] != spec.dim:
        raise DimensionMismatchError(
            f"observation has dimension {xv.shape[-1]}, spec has {spec.dim}"
        )
    pos = np.maximum(xv, 0.0)
    if isinstance(spec, IidExponential):
        out = np.exp(-pos.sum(axis=-1))
    elif isinstance(spec, MarginalDirichlet):
        slack = np.maximum(1.0 - pos.sum(axis=-1), 0.0)
        out = slack ** (spec.d + spec.a - 1.0)
    elif isinstance(spec, ExponentialScaleMixture):
        out = (1.0 + pos.sum(axis=-1)) ** -spec.a
    elif isinstance(spec, Comonotone):
        out = np.exp(-pos.max(axis=-1))
    else:
        raise UnsupportedSpecError(f"no closed-form survival for {type(spec).__name__}")
    return float(out) if scalar else out


def survival_transform_density(family: str, a: float, d: int, w):
    """Density on (0, 1) of the survival value S(X) at a random observation.

    For ``family="dir"`` this is the law of W = Z^(d+a-1), Z ~ Beta(a, d):
        g(w) = (w^(-1/(d+a-1)) - 1)^(d-1) / ((d+a-1) B(a, d));
    for ``family="pa"`` the law of W = Z^a:
        g(w) = (1 - w^(1/a))^(d-1) / (a B(a, d)).

    ``w`` may be a scalar or array with every entry strictly inside (0, 1).
    """
    a, d = _check_family_params(family, a, d)
    wv = np.asarray(w, dtype=np.float64)
    if wv.size == 0 or np.any(wv <= 0.0) or np.any(wv >= 1.0):
        raise InvalidParameterError("w must lie strictly inside (0, 1)")
    log_beta = gammaln(a) + gammaln(d) - gammaln(a + d)
    if family == "dir":
        expo = d + a - 1.0
        out = (wv ** (-1.0 / expo) - 1.0) ** (d - 1) / (expo * math.exp(log_beta))
    else:
        out = (1.0 - wv ** (1.0 / a)) ** (d - 1) / (a * math.exp(log_beta))
    return float(out) if np.isscalar(w) or np.ndim(w) == 0 else out


def survival_transform_cdf(family: str, a: float, d: int, w):
    """CDF companion of :func:`survival_transform_density`.

    Also accepts ``family="iid"`` (a ignored), where the survival value is
    exp(-G) with G ~ Gamma(d), handy as a KS-test reference.
    """
    wv = np.clip(np.asarray(w, dtype=np.float64), 0.0, 1.0)
    if family == "iid":
        if not isinstance(d, (int, np.integer)) or d < 1:
            raise InvalidParameterError(f"d must be an integer >= 1, got {d!r}")
        from scipy.special import gammaincc

        with np.errstate(divide="ignore"):
            out = np.where(wv <= 0.0, 0.0, np.where(wv >= 1.0, 1.0, gammaincc(d, -np.log(wv))))
    else:
        a, d = _check_family_params(family, a, d)
        root = 1.0 / (d + a - 1.0) if family == "dir" else 1.0 / a
        out = betainc(a, d, wv**root)
    return float(out) if np.isscalar(w) or np.ndim(w) == 0 else out


def _check_family_params(family: str, a, d) -> tuple[float, int]:
    if family not in ("dir", "pa"):
        raise InvalidParameterError(f'family must be "dir" or "pa", got {family!r}')
    a = float(a)
    if not np.isfinite(a) or a <= 0.0:
        raise InvalidParameterError(f"a must be finite and > 0, got {a!r}")
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidParameterError(f"d must be an integer >= 2, got {d!r}")
    return a, int(d)


def record_prob_limit(spec: DistributionSpec) -> float:
    """Limit of the record probability as the stream length grows.

    Equals the probability mass of the region where the survival function
    vanishes: 1 for a full Dirichlet (its support is an antichain), 0 for
    the families with everywhere-positive survival, and the corresponding
    mixture weight for mixtures.
    """
    if isinstance(spec, Dirichlet):
        return 1.0
    if isinstance(spec, (IidExponential, MarginalDirichlet, ExponentialScaleMixture, Comonotone)):
        return 0.0
    if isinstance(spec, Mixture):
        return (1.0 - spec.q) * record_prob_limit(spec.first) + spec.q * record_prob_limit(spec.second)
    raise UnsupportedSpecError(f"unknown spec type: {spec!r}")
