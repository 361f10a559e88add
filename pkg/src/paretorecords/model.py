"""Domain types: distribution families, observations, experiment parameters.

A distribution spec is an immutable tagged value describing one of the
sampling families handled by the package:

* ``IidExponential(d)`` -- d independent standard Exponential coordinates.
* ``MarginalDirichlet(d, a)`` -- the first d coordinates of a
  Dirichlet(1, ..., 1, a) vector in dimension d+1; negatively dependent,
  supported on the open unit simplex.
* ``ExponentialScaleMixture(d, a)`` -- (E_1/G, ..., E_d/G) with E_j iid
  Exponential(1) and G ~ Gamma(a) independent; positively associated.
* ``Dirichlet(b)`` -- a full Dirichlet vector (coordinates sum to one, so
  the observations form an antichain under coordinatewise <=).
* ``Comonotone(d)`` -- (Y, ..., Y) with a single Exponential(1) draw.
* ``Mixture(q, first, second)`` -- draws from ``second`` with probability q,
  else from ``first``.

All spec types validate their parameters on construction; ``validate``
re-checks an existing instance (useful after deserialization).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError

__all__ = [
    "Comonotone",
    "Dirichlet",
    "DistributionSpec",
    "ExperimentConfig",
    "ExponentialScaleMixture",
    "IidExponential",
    "MarginalDirichlet",
    "Mixture",
    "Observation",
    "as_observation",
    "dominates",
    "validate",
]

#: An observation is a 1-D float array of finite coordinates.
Observation = np.ndarray

#: Mixtures may nest at most this deep; one level suffices in practice.
MAX_MIXTURE_DEPTH = 4


def _require_dim(d, minimum: int, field: str = "d") -> int:
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise InvalidParameterError(f"{field} must be an integer, got {d!r}")
    if d < minimum:
        raise InvalidParameterError(f"{field} must be >= {minimum}, got {d}")
    return int(d)


def _require_positive(x, field: str) -> float:
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise InvalidParameterError(f"{field} must be a number, got {x!r}") from None
    if not np.isfinite(v) or v <= 0.0:
        raise InvalidParameterError(f"{field} must be finite and > 0, got {x!r}")
    return v


@dataclass(frozen=True)
class IidExponential:
    """d independent Exponential(1) coordinates."""

    d: int

    def __post_init__(self):
        object.__setattr__(self, "d", _require_dim(self.d, 1))

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class MarginalDirichlet:
    """First d coordinates of Dirichlet(1, ..., 1, a) in dimension d+1.

    Supported on the open unit simplex; needs d >= 2 (d = 1 would just be a
    Beta marginal with no dependence structure to study) and a > 0.
    """

    d: int
    a: float

    def __post_init__(self):
        object.__setattr__(self, "d", _require_dim(self.d, 2))
        object.__setattr__(self, "a", _require_positive(self.a, "a"))

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class ExponentialScaleMixture:
    """(E_1/G, ..., E_d/G): iid Exponential(1) coordinates divided by an
    independent Gamma(a) scale. Requires d >= 2 and a > 0."""

    d: int
    a: float

    def __post_init__(self):
        object.__setattr__(self, "d", _require_dim(self.d, 2))
        object.__setattr__(self, "a", _require_positive(self.a, "a"))

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class Dirichlet:
    """Full Dirichlet(b) vector; coordinates are positive and sum to one."""

    b: tuple[float, ...]

    def __post_init__(self):
        try:
            b = tuple(float(v) for v in self.b)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"b must be a sequence of numbers, got {self.b!r}") from None
        if len(b) < 2:
            raise InvalidParameterError(f"b must have length >= 2, got {len(b)}")
        for j, v in enumerate(b):
            if not np.isfinite(v) or v <= 0.0:
                raise InvalidParameterError(f"b[{j}] must be finite and > 0, got {v!r}")
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class Comonotone:
    """All d coordinates equal to a single Exponential(1) draw."""

    d: int

    def __post_init__(self):
        object.__setattr__(self, "d", _require_dim(self.d, 1))

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class Mixture:
    """With probability q draw from ``second``, else from ``first``.

    Components must have equal dimension; nesting depth is capped at
    ``MAX_MIXTURE_DEPTH``.
    """

    q: float
    first: "DistributionSpec"
    second: "DistributionSpec"

    def __post_init__(self):
        try:
            q = float(self.q)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"q must be a number, got {self.q!r}") from None
        if not np.isfinite(q) or not 0.0 <= q <= 1.0:
            raise InvalidParameterError(f"q must lie in [0, 1], got {self.q!r}")
        object.__setattr__(self, "q", q)
        for name, comp in (("first", self.first), ("second", self.second)):
            if not isinstance(comp, _SPEC_TYPES):
                raise InvalidParameterError(f"{name} must be a DistributionSpec, got {comp!r}")
        if self.first.dim != self.second.dim:
            raise InvalidParameterError(
                f"mixture components must share a dimension, got {self.first.dim} and {self.second.dim}"
            )
        if _mixture_depth(self) > MAX_MIXTURE_DEPTH:
            raise InvalidParameterError(f"mixture nesting deeper than {MAX_MIXTURE_DEPTH}")

    @property
    def dim(self) -> int:
        return self.first.dim


DistributionSpec = Union[
    IidExponential,
    MarginalDirichlet,
    ExponentialScaleMixture,
    Dirichlet,
    Comonotone,
    Mixture,
]

_SPEC_TYPES = (
    IidExponential,
    MarginalDirichlet,
    ExponentialScaleMixture,
    Dirichlet,
    Comonotone,
    Mixture,
)


def _mixture_depth(spec) -> int:
    if isinstance(spec, Mixture):
        return 1 + max(_mixture_depth(spec.first), _mixture_depth(spec.second))
    return 0


def validate(spec: DistributionSpec) -> None:
    """Re-run the constructor checks on ``spec``; raise InvalidParameterError
    if any invariant fails.

    Construction already enforces the invariants, so this mainly guards
    instances rebuilt by deserialization or introspection.
    """
    if not isinstance(spec, _SPEC_TYPES):
        raise InvalidParameterError(f"not a DistributionSpec: {spec!r}")
    spec.__post_init__()
    if isinstance(spec, Mixture):
        validate(spec.first)
        validate(spec.second)


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one Monte Carlo experiment.

    ``workers`` is a scheduling hint only; results never depend on it.
    """

    spec: DistributionSpec
    n: int
    reps: int
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        validate(self.spec)
        object.__setattr__(self, "n", _require_dim(self.n, 1, "n"))
        object.__setattr__(self, "reps", _require_dim(self.reps, 1, "reps"))
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= int(self.seed) < 2**64:
            raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "workers", _require_dim(self.workers, 1, "workers"))


def as_observation(coords) -> Observation:
    """Coerce ``coords`` to a 1-D float64 array of finite values."""
    x = np.asarray(coords, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise InvalidParameterError(f"observation must be a nonempty 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidParameterError("observation coordinates must all be finite")
    return x


def dominates(x, y) -> bool:
    """True iff ``x <= y`` coordinatewise (``y`` weakly dominates ``x``).

    Weak dominance is used throughout: an observation equal to an earlier
    one is dominated by it. For the continuous families ties occur with
    probability zero, so weak and strict dominance agree almost surely;
    fixing the weak convention keeps behavior deterministic on synthetic
    inputs with ties.
    """
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.shape != yv.shape:
        raise DimensionMismatchError(f"dimension mismatch: {xv.shape} vs {yv.shape}")
    return bool(np.all(xv <= yv))
