"""Probability mass functions on the non-negative integers.

Two numeric modes share one representation:

* exact mode — every weight is a ``fractions.Fraction``; all operations
  (mean, size-biasing, convolution) stay exact.  Used for rational
  offspring laws where ties such as neutrality must be decided exactly.
* float mode — binary floating point with ``math.fsum`` for totals, plus
  a recorded ``truncation_error`` for families with infinite support
  (Poisson) that are truncated to a finite window.

A pmf never mixes Fractions and floats; ``make_pmf`` normalizes inputs
into one mode or the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import (
    DuplicateKey,
    InvalidRate,
    NegativeWeight,
    NotNormalized,
    ZeroMean,
)

Number = Union[Fraction, float]

NORMALIZATION_TOL = 1e-12
PRUNE_BELOW = 1e-300
DEFAULT_POISSON_EPS = 1e-12


@dataclass(frozen=True)
class DiscretePmf:
    """Finite-support pmf on non-negative integers.

    ``weights`` maps support point -> probability (all strictly positive);
    ``truncation_error`` is the probability mass discarded when an
    infinite-support family was truncated (0 for finite support).
    """

    weights: dict[int, Number]
    truncation_error: float = 0.0
    label: str = ""

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights.values())

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.weights))

    @property
    def max_value(self) -> int:
        return max(self.weights)

    def total_mass(self) -> Number:
        if self.exact:
            return sum(self.weights.values(), Fraction(0))
        return math.fsum(self.weights.values())

    def as_float(self) -> "DiscretePmf":
        """Same pmf with float weights (used before sampling)."""
        w = {k: float(v) for k, v in self.weights.items()}
        return type(self)(weights=w, truncation_error=self.truncation_error,
                          label=self.label)


@dataclass(frozen=True)
class OffspringPmf(DiscretePmf):
    pass


@dataclass(frozen=True)
class SizeBiasedPmf(DiscretePmf):
    pass


@dataclass(frozen=True)
class SumPmf(DiscretePmf):
    """Distribution of the sum of ``order`` independent draws."""

    order: int = 0


def _coerce_entries(entries) -> list[tuple[int, Number]]:
    if isinstance(entries, Mapping):
        items = list(entries.items())
    else:
        items = list(entries)
    out = []
    for k, w in items:
        k = int(k)
        if k < 0:
            raise ValueError(f"support point {k} is negative")
        out.append((k, w))
    return out


def make_pmf(entries: Union[Mapping[int, Number], Iterable[tuple[int, Number]]],
             label: str = "") -> OffspringPmf:
    """Validate and normalize a pmf from (support point, weight) entries.

    Weights must be non-negative and sum to 1 within 1e-12; the sum is
    then divided out exactly so downstream totals are clean.  Zero-weight
    entries are dropped.  Entries that are all ints/Fractions produce an
    exact pmf; any float switches the whole pmf to float mode.
    """
    items = _coerce_entries(entries)
    seen: set[int] = set()
    for k, _ in items:
        if k in seen:
            raise DuplicateKey(f"support point {k} given twice")
        seen.add(k)
    for k, w in items:
        if w < 0:
            raise NegativeWeight(f"weight of {k} is negative: {w}")

    exact = all(isinstance(w, (int, Fraction)) and not isinstance(w, bool)
                for _, w in items)
    if exact:
        weights = {k: Fraction(w) for k, w in items if w != 0}
        total = sum(weights.values(), Fraction(0))
    else:
        weights = {k: float(w) for k, w in items if w != 0}
        total = math.fsum(weights.values())
    if abs(total - 1) > NORMALIZATION_TOL:
        raise NotNormalized(f"weights sum to {total}, not 1")
    if total != 1:
        weights = {k: w / total for k, w in weights.items()}
    if not weights:
        raise NotNormalized("pmf has no positive weights")
    return OffspringPmf(weights=weights, label=label)


@dataclass(frozen=True)
class GWConditionReport:
    """Hypothesis check for offspring laws used by the density formulas.

    The individual flags describe ``p0 == 0``, ``p1 < 1`` and mean > 1;
    finite/truncated support makes the k*log(k) moment automatic.
    """

    p0: float
    p1: float
    mean: float
    p0_is_zero: bool
    p1_below_one: bool
    supercritical: bool
    klogk_finite: bool
    errors: tuple[str, ...] = field(default_factory=tuple)
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_gw_conditions(p: OffspringPmf) -> GWConditionReport:
    """Report (never raise) on the offspring-law hypotheses.

    ``p1 == 1`` is an error (the tree is an infinite path); ``p0 > 0``
    and mean <= 1 are warnings only, since truncated Poisson inputs are
    routinely evaluated outside the hypotheses.
    """
    p0 = float(p.weights.get(0, 0))
    p1 = float(p.weights.get(1, 0))
    mu = float(mean(p))
    errors = []
    warnings = []
    if p1 >= 1:
        errors.append("p1 == 1: offspring law is a point mass at 1")
    if p0 > 0:
        warnings.append(f"p0 = {p0:g} > 0: extinction is possible")
    if mu <= 1 and p1 < 1:
        warnings.append(f"mean {mu:g} <= 1: process is (sub)critical")
    return GWConditionReport(
        p0=p0, p1=p1, mean=mu,
        p0_is_zero=p0 == 0, p1_below_one=p1 < 1, supercritical=mu > 1,
        klogk_finite=True,
        errors=tuple(errors), warnings=tuple(warnings))


def mean(p: DiscretePmf) -> Number:
    """First moment; exact in exact mode, compensated sum in float mode."""
    if p.exact:
        return sum((Fraction(k) * w for k, w in p.weights.items()), Fraction(0))
    return math.fsum(k * w for k, w in p.weights.items())


def size_biased(p: OffspringPmf) -> SizeBiasedPmf:
    """Size-biased law: weight at k proportional to k * p_k (0 dropped)."""
    mu = mean(p)
    if mu == 0:
        raise ZeroMean("size-biasing needs a positive mean")
    weights = {k: (k * w) / mu for k, w in p.weights.items() if k > 0}
    return SizeBiasedPmf(weights=weights, truncation_error=p.truncation_error,
                         label=f"size_biased({p.label})" if p.label else "")


def _dense(w: Mapping[int, Number]) -> tuple[int, "np.ndarray"]:
    lo = min(w)
    arr = np.zeros(max(w) - lo + 1)
    for k, v in w.items():
        arr[k - lo] = float(v)
    return lo, arr


def convolve_weights(a: Mapping[int, Number], b: Mapping[int, Number],
                     exact: bool) -> tuple[dict[int, Number], float]:
    """Direct convolution of two weight maps.

    Exact mode multiplies Fractions term by term; float mode runs a
    dense numpy convolution over the integer ranges.  Returns the
    convolved map and the float mass pruned below ``PRUNE_BELOW``
    (always 0 in exact mode).
    """
    if exact:
        acc: dict[int, Number] = {}
        zero = Fraction(0)
        for ka, wa in a.items():
            for kb, wb in b.items():
                k = ka + kb
                acc[k] = acc.get(k, zero) + wa * wb
        return acc, 0.0
    lo_a, arr_a = _dense(a)
    lo_b, arr_b = _dense(b)
    arr = np.convolve(arr_a, arr_b)
    lo = lo_a + lo_b
    keep = arr >= PRUNE_BELOW
    pruned = float(arr[~keep].sum())
    out = {int(lo + i): float(v)
           for i, v in enumerate(arr) if v >= PRUNE_BELOW}
    return out, pruned


def convolve_power(p: DiscretePmf, k: int) -> SumPmf:
    """Exact distribution of the sum of ``k`` independent draws from ``p``.

    ``k == 0`` is the empty sum: a point mass at 0.  Truncation error
    accumulates additively over the factors, plus any pruned float mass.
    """
    if k < 0:
        raise ValueError("order must be non-negative")
    exact = p.exact
    dist: dict[int, Number] = {0: Fraction(1) if exact else 1.0}
    pruned_total = 0.0
    for _ in range(k):
        dist, pruned = convolve_weights(dist, p.weights, exact)
        pruned_total += pruned
    te = 0.0 if exact else k * p.truncation_error + pruned_total
    return SumPmf(weights=dist, order=k, truncation_error=te,
                  label=f"sum_{k}({p.label})" if p.label else "")


def poisson_truncated(lam: float, eps: float = DEFAULT_POISSON_EPS) -> OffspringPmf:
    """Poisson(lam) truncated to [0, K] with tail mass below ``eps``.

    Weights are the raw (unnormalized) Poisson probabilities; the
    discarded tail is recorded in ``truncation_error``.
    """
    if lam <= 0:
        raise InvalidRate(f"rate must be positive, got {lam}")
    if not 0 < eps <= 1e-6:
        raise ValueError(f"eps must be in (0, 1e-6], got {eps}")
    if lam > 700:
        raise InvalidRate("rate too large for direct evaluation (exp underflow)")
    terms = [math.exp(-lam)]
    cum = terms[0]
    k = 0
    cap = int(lam + 20 * math.sqrt(lam) + 60)
    while cum < 1 - eps and k < cap:
        k += 1
        terms.append(terms[-1] * lam / k)
        cum += terms[-1]
    weights = {i: t for i, t in enumerate(terms) if t >= PRUNE_BELOW}
    te = max(0.0, 1.0 - math.fsum(weights.values()))
    return OffspringPmf(weights=weights, truncation_error=te,
                        label=f"poisson({lam:g})")
