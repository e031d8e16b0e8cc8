"""Stochastic behavior primitives.

Triangular delay distributions, Bernoulli decision draws, and the
likelihood-based correction rules that bend both toward or away from a
customer type's tendencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum


class Likelihood(IntEnum):
    LOW = 0
    MODERATE = 1
    HIGH = 2


_LIKELIHOOD_NAMES = {"low": Likelihood.LOW, "moderate": Likelihood.MODERATE, "high": Likelihood.HIGH}


def parse_likelihood(value) -> Likelihood:
    if isinstance(value, Likelihood):
        return value
    if isinstance(value, str) and value.lower() in _LIKELIHOOD_NAMES:
        return _LIKELIHOOD_NAMES[value.lower()]
    if isinstance(value, int) and 0 <= value <= 2:
        return Likelihood(value)
    raise ValueError(f"not a likelihood: {value!r} (expected low/moderate/high)")


# Correction senses for triangular delays: whether a longer delay is the
# favorable direction for a HIGH likelihood (e.g. patience) or the reverse.
LONGER_IS_FAVORABLE = "longer_is_favorable"
SHORTER_IS_FAVORABLE = "shorter_is_favorable"


@dataclass(frozen=True)
class TriangularParams:
    """Minimum / mode / maximum of a triangular duration, in minutes."""

    minimum: float
    mode: float
    maximum: float

    def __post_init__(self):
        if not (0 <= self.minimum <= self.mode <= self.maximum):
            raise ValueError(
                f"triangular params must satisfy 0 <= min <= mode <= max, got "
                f"({self.minimum}, {self.mode}, {self.maximum})"
            )

    @property
    def mean(self) -> float:
        return (self.minimum + self.mode + self.maximum) / 3.0

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.minimum, self.mode, self.maximum)


def correct_threshold(original: float, likelihood: Likelihood) -> float:
    """Shift a decision probability toward 0 or 1 according to likelihood.

    The shift is half the distance to the nearer bound, so the result always
    stays inside [0, 1]: LOW subtracts it, MODERATE leaves the probability
    unchanged, HIGH adds it.
    """
    if not 0.0 <= original <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {original}")
    if original < 0.5:
        limit = original / 2.0
    else:
        limit = (1.0 - original) / 2.0
    if likelihood == Likelihood.LOW:
        return original - limit
    if likelihood == Likelihood.HIGH:
        return original + limit
    return original


def correct_triangular(
    params: TriangularParams,
    likelihood: Likelihood,
    sense: str = LONGER_IS_FAVORABLE,
) -> TriangularParams:
    """Shift the mode of a triangular delay halfway toward min or max.

    MODERATE leaves the distribution unchanged. With LONGER_IS_FAVORABLE,
    HIGH moves the mode halfway to the maximum and LOW halfway to the
    minimum; SHORTER_IS_FAVORABLE swaps the two. Min and max never change.
    """
    if sense not in (LONGER_IS_FAVORABLE, SHORTER_IS_FAVORABLE):
        raise ValueError(f"unknown sense: {sense!r}")
    if likelihood == Likelihood.MODERATE:
        return params
    toward_max = (likelihood == Likelihood.HIGH) == (sense == LONGER_IS_FAVORABLE)
    if toward_max:
        mode = params.mode + (params.maximum - params.mode) / 2.0
    else:
        mode = params.mode - (params.mode - params.minimum) / 2.0
    return TriangularParams(params.minimum, mode, params.maximum)


def sample_triangular(params: TriangularParams, rng) -> float:
    """Inverse-CDF triangular sample; exactly one rng.random() draw."""
    a, c, b = params.minimum, params.mode, params.maximum
    span = b - a
    if span <= 0.0:
        return a
    u = rng.random()
    cut = (c - a) / span
    if u <= cut:
        return a + math.sqrt(u * span * (c - a))
    return b - math.sqrt((1.0 - u) * span * (b - c))


def bernoulli(p: float, rng) -> bool:
    """True with probability p; exactly one rng.random() draw."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    return rng.random() < p


class TriangularSampler:
    """Precomputed inverse-CDF constants for a triangular distribution.

    The hot simulation loop draws thousands of these per day; keeping the
    scale factors ready avoids recomputing them on every sample.
    """

    __slots__ = ("minimum", "mode", "maximum", "_cut", "_left", "_right", "_span")

    def __init__(self, params: TriangularParams):
        a, c, b = params.minimum, params.mode, params.maximum
        self.minimum = a
        self.mode = c
        self.maximum = b
        self._span = b - a
        if self._span > 0.0:
            self._cut = (c - a) / self._span
            self._left = self._span * (c - a)
            self._right = self._span * (b - c)
        else:
            self._cut = 1.0
            self._left = 0.0
            self._right = 0.0

    def draw(self, u: float) -> float:
        """Map one uniform draw u in [0, 1) to a triangular sample."""
        if self._span <= 0.0:
            return self.minimum
        if u <= self._cut:
            return self.minimum + math.sqrt(u * self._left)
        return self.maximum - math.sqrt((1.0 - u) * self._right)


@dataclass(frozen=True)
class CustomerTypeProfile:
    """A named shopping disposition: likelihoods for the four key decisions."""

    name: str
    buy: Likelihood
    wait: Likelihood
    ask_help: Likelihood
    ask_refund: Likelihood


# The five canonical dispositions. Order matters: agents carry an index into
# this tuple, and scenario customer splits are expressed in this order.
CUSTOMER_TYPES: tuple[CustomerTypeProfile, ...] = (
    CustomerTypeProfile("shopping_enthusiast", Likelihood.HIGH, Likelihood.MODERATE, Likelihood.MODERATE, Likelihood.LOW),
    CustomerTypeProfile("solution_demander", Likelihood.HIGH, Likelihood.LOW, Likelihood.LOW, Likelihood.LOW),
    CustomerTypeProfile("service_seeker", Likelihood.MODERATE, Likelihood.HIGH, Likelihood.HIGH, Likelihood.LOW),
    CustomerTypeProfile("disinterested_shopper", Likelihood.LOW, Likelihood.LOW, Likelihood.LOW, Likelihood.HIGH),
    CustomerTypeProfile("internet_shopper", Likelihood.LOW, Likelihood.HIGH, Likelihood.HIGH, Likelihood.LOW),
)

TYPE_NAMES: tuple[str, ...] = tuple(t.name for t in CUSTOMER_TYPES)
TYPE_INDEX: dict[str, int] = {t.name: i for i, t in enumerate(CUSTOMER_TYPES)}
