"""Limiting vertex-type and edge-type densities of Galton-Watson trees.

For an offspring law ``p`` with size-biased companion ``pt``, the density
of type-``x`` vertices is

    f[x] = sum_k p_k * P( sign(Xt + S_k - k(k+1)) == x )

where ``Xt ~ pt`` and ``S_k`` is a sum of k independent draws from ``p``.
Directed parent->child edge densities factor the same way with the parent
statistic ``Xt + S_{kt-1} + k - kt(kt+1)`` and the child statistic
``kt + S_k - k(k+1)``; row sums reproduce the size-biased parent marginal
and column sums reproduce the vertex densities.

Everything is evaluated by exact convolution.  Rational pmfs stay in
``fractions.Fraction`` end to end, so ties (neutral types, significance
at equality) are decided exactly.  Float pmfs (truncated Poisson) are
evaluated in double precision; the monotonicity checker deliberately
materializes each tail probability as a double, because the interesting
transition at large rates happens below the resolution of 1 ulp at 1.0
and is reproducible only at fixed precision.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import HypothesisNotMet
from .pmf import (
    DiscretePmf,
    OffspringPmf,
    convolve_power,
    convolve_weights,
    poisson_truncated,
    size_biased,
)
from .trees import VertexType

Number = Union[Fraction, float]

TYPE_ORDER = (VertexType.NEGATIVE, VertexType.NEUTRAL, VertexType.POSITIVE)

FLOAT_TIE_TOL = 1e-10


# ---------------------------------------------------------------------------
# Sorted-distribution splits
# ---------------------------------------------------------------------------

class _Sorted:
    """Sorted support with cumulative masses, for threshold splits."""

    def __init__(self, weights: dict, exact: bool):
        self.exact = exact
        self.values = sorted(weights)
        if exact:
            self.weights = [weights[v] for v in self.values]
            cum = []
            run = Fraction(0)
            for w in self.weights:
                run += w
                cum.append(run)
            self.cum = cum
            self.total = run if cum else Fraction(0)
        else:
            arr = np.array([float(weights[v]) for v in self.values])
            self.weights = arr
            self.cum = np.cumsum(arr)
            self.total = float(self.cum[-1]) if len(arr) else 0.0

    def mass_le(self, t: int) -> Number:
        idx = bisect_right(self.values, t)
        if idx == 0:
            return Fraction(0) if self.exact else 0.0
        return self.cum[idx - 1]

    def mass_eq(self, t: int) -> Number:
        idx = bisect_left(self.values, t)
        if idx < len(self.values) and self.values[idx] == t:
            return self.weights[idx]
        return Fraction(0) if self.exact else 0.0

    def split(self, t: int) -> tuple[Number, Number, Number]:
        """(mass < t, mass == t, mass > t)."""
        le = self.mass_le(t)
        eq = self.mass_eq(t)
        lt = le - eq
        gt = self.total - le
        return lt, eq, gt


@dataclass(frozen=True)
class SignSplit:
    """Probabilities that a statistic is negative / zero / positive."""

    neg: Number
    zero: Number
    pos: Number
    truncation_error: float = 0.0

    def of(self, t: VertexType) -> Number:
        return {VertexType.NEGATIVE: self.neg,
                VertexType.NEUTRAL: self.zero,
                VertexType.POSITIVE: self.pos}[t]

    def as_tuple(self) -> tuple[Number, Number, Number]:
        return (self.neg, self.zero, self.pos)


def _mixed_to_float(p: DiscretePmf, q: DiscretePmf) -> tuple[DiscretePmf, DiscretePmf, bool]:
    exact = p.exact and q.exact
    if not exact and (p.exact or q.exact):
        p, q = p.as_float(), q.as_float()
    return p, q, exact


def sign_statistic_pmf(p: OffspringPmf, k: int,
                       parent_pmf: Optional[DiscretePmf] = None) -> SignSplit:
    """Sign distribution of ``parent_draw + S_k - k(k+1)``.

    ``parent_pmf`` defaults to the size-biased law of ``p``; shifted
    variants are supplied by the edge-density formulas.
    """
    parent = parent_pmf if parent_pmf is not None else size_biased(p)
    p, parent, exact = _mixed_to_float(p, parent)
    sk = convolve_power(p, k)
    dist, pruned = convolve_weights(parent.weights, sk.weights, exact)
    lt, eq, gt = _Sorted(dist, exact).split(k * (k + 1))
    te = parent.truncation_error + sk.truncation_error + pruned
    return SignSplit(neg=lt, zero=eq, pos=gt, truncation_error=te)


# ---------------------------------------------------------------------------
# Convolution ladder shared by the density evaluators
# ---------------------------------------------------------------------------

def _sum_ladder(p: DiscretePmf, upto: int, exact: bool) -> tuple[list[dict], float]:
    """Weight maps of S_0..S_upto, plus total pruned float mass."""
    one = Fraction(1) if exact else 1.0
    ladder = [{0: one}]
    pruned = 0.0
    cur = ladder[0]
    for _ in range(upto):
        cur, dropped = convolve_weights(cur, p.weights, exact)
        pruned += dropped
        ladder.append(cur)
    return ladder, pruned


def vertex_densities(p: OffspringPmf) -> dict[VertexType, Number]:
    """Limiting densities f[x] of negative / neutral / positive vertices."""
    return _density_core(p)[0]


def _density_core(p: OffspringPmf):
    exact = p.exact
    parent = size_biased(p)
    supp = p.support
    ladder, _ = _sum_ladder(p, max(supp), exact)
    zero = Fraction(0) if exact else 0.0
    f = {t: zero for t in TYPE_ORDER}
    te = float(p.truncation_error)
    for k in supp:
        dist, pruned = convolve_weights(parent.weights, ladder[k], exact)
        lt, eq, gt = _Sorted(dist, exact).split(k * (k + 1))
        w = p.weights[k]
        f[VertexType.NEGATIVE] += w * lt
        f[VertexType.NEUTRAL] += w * eq
        f[VertexType.POSITIVE] += w * gt
        if not exact:
            te += float(w) * (parent.truncation_error
                              + k * p.truncation_error + pruned)
    return f, te


def parent_marginal(p: OffspringPmf) -> dict[VertexType, Number]:
    """Size-biased parent-type densities ft[x]."""
    exact = p.exact
    parent = size_biased(p)
    supp_t = parent.support
    ladder, _ = _sum_ladder(p, max(supp_t), exact)
    zero = Fraction(0) if exact else 0.0
    f = {t: zero for t in TYPE_ORDER}
    for kt in supp_t:
        dist, _ = convolve_weights(parent.weights, ladder[kt], exact)
        lt, eq, gt = _Sorted(dist, exact).split(kt * (kt + 1))
        w = parent.weights[kt]
        f[VertexType.NEGATIVE] += w * lt
        f[VertexType.NEUTRAL] += w * eq
        f[VertexType.POSITIVE] += w * gt
    return f


def edge_densities(p: OffspringPmf) -> dict[tuple[VertexType, VertexType], Number]:
    """Directed parent->child edge-type densities f[(xt, x)].

    Summing over the parent type recovers ``vertex_densities``; summing
    over the child type recovers ``parent_marginal``.
    """
    exact = p.exact
    parent = size_biased(p)
    supp = p.support
    supp_t = parent.support
    ladder, _ = _sum_ladder(p, max(supp_t), exact)

    child_sorted = {k: _Sorted(ladder[k], exact) for k in supp}
    zero = Fraction(0) if exact else 0.0
    out = {(a, b): zero for a in TYPE_ORDER for b in TYPE_ORDER}
    for kt in supp_t:
        base, _ = convolve_weights(parent.weights, ladder[kt - 1], exact)
        parent_sorted = _Sorted(base, exact)
        wt = parent.weights[kt]
        for k in supp:
            a = parent_sorted.split(kt * (kt + 1) - k)
            b = child_sorted[k].split(k * (k + 1) - kt)
            w = wt * p.weights[k]
            for i, xt in enumerate(TYPE_ORDER):
                if a[i] == 0:
                    continue
                wa = w * a[i]
                for j, x in enumerate(TYPE_ORDER):
                    if b[j] == 0:
                        continue
                    out[(xt, x)] += wa * b[j]
    return out


class Significance(str, Enum):
    STRICTLY_SIGNIFICANT = "strictly_significant"
    SIGNIFICANT = "significant"
    INSIGNIFICANT = "insignificant"


def classify_significance(p: OffspringPmf, tol: float = FLOAT_TIE_TOL) -> Significance:
    """Three-way verdict from the sign of f+ - f-.

    Exact pmfs are decided exactly; float pmfs use a tie band of
    ``tol`` plus the accumulated truncation error.
    """
    f, te = _density_core(p)
    diff = f[VertexType.POSITIVE] - f[VertexType.NEGATIVE]
    if p.exact:
        if diff > 0:
            return Significance.STRICTLY_SIGNIFICANT
        if diff < 0:
            return Significance.INSIGNIFICANT
        return Significance.SIGNIFICANT
    band = tol + te
    if diff > band:
        return Significance.STRICTLY_SIGNIFICANT
    if diff < -band:
        return Significance.INSIGNIFICANT
    return Significance.SIGNIFICANT


def correlation_gap(p: OffspringPmf) -> Number:
    """f[(+,+)] minus ft[+] * f[+]; negative means positive parent and
    positive child repel along edges."""
    plus = VertexType.POSITIVE
    return (edge_densities(p)[(plus, plus)]
            - parent_marginal(p)[plus] * vertex_densities(p)[plus])


@dataclass(frozen=True)
class DensityReport:
    """Exact vertex, edge and parent-type densities plus classification."""

    label: str
    vertex: dict[VertexType, Number]
    edge: dict[tuple[VertexType, VertexType], Number]
    parent: dict[VertexType, Number]
    truncation_error: float
    significance: Significance
    correlation_gap: Number


def density_report(p: OffspringPmf) -> DensityReport:
    """Evaluate all densities of one offspring law in a single pass."""
    f, te = _density_core(p)
    fe = edge_densities(p)
    fp = parent_marginal(p)
    plus = VertexType.POSITIVE
    gap = fe[(plus, plus)] - fp[plus] * f[plus]
    diff = f[plus] - f[VertexType.NEGATIVE]
    if p.exact:
        sig = (Significance.STRICTLY_SIGNIFICANT if diff > 0
               else Significance.INSIGNIFICANT if diff < 0
               else Significance.SIGNIFICANT)
    else:
        band = FLOAT_TIE_TOL + te
        sig = (Significance.STRICTLY_SIGNIFICANT if diff > band
               else Significance.INSIGNIFICANT if diff < -band
               else Significance.SIGNIFICANT)
    return DensityReport(label=p.label, vertex=f, edge=fe, parent=fp,
                         truncation_error=te, significance=sig,
                         correlation_gap=gap)


# ---------------------------------------------------------------------------
# Monotonicity of k -> P(kt + S_k - k(k+1) > 0)
# ---------------------------------------------------------------------------

class MonoVerdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MonoWitness:
    """A strict increase between consecutive support points."""

    k_tilde: int
    k_from: int
    k_to: int
    value_from: float
    value_to: float


@dataclass(frozen=True)
class MonoResult:
    verdict: MonoVerdict
    witness: Optional[MonoWitness]
    k_checked: tuple[int, int]
    cert_eps: float
    certified: bool
    values: dict[int, tuple[tuple[int, float], ...]]


class _FloatTail:
    """Double-precision evaluator of P(S_k > t) over a dense ladder.

    Each probability is materialized as one double: the smaller side of
    the split is summed directly and the larger side is taken as its
    complement from 1.  Mass truncated off the upper tail of the base
    pmf therefore lands on the positive side, where it belongs.
    """

    def __init__(self, p: DiscretePmf):
        m = p.max_value
        base = np.zeros(m + 1)
        for k, w in p.weights.items():
            base[k] = float(w)
        self.base = base
        self.convs = [np.array([1.0])]
        self.lows = [np.cumsum(self.convs[0])]
        self.ups = [np.cumsum(self.convs[0][::-1])[::-1]]

    def extend_to(self, k: int) -> None:
        while len(self.convs) <= k:
            nxt = np.convolve(self.convs[-1], self.base)
            self.convs.append(nxt)
            self.lows.append(np.cumsum(nxt))
            self.ups.append(np.cumsum(nxt[::-1])[::-1])

    def tail(self, k: int, t: int) -> float:
        """P(S_k > t) as a double."""
        self.extend_to(k)
        size = len(self.convs[k])
        if t < 0:
            return 1.0
        if t >= size - 1:
            return 0.0
        up = float(self.ups[k][t + 1])
        if up <= 0.5:
            return up
        return 1.0 - float(self.lows[k][t])


class _ExactTail:
    """Exact-rational evaluator of P(S_k > t)."""

    def __init__(self, p: DiscretePmf):
        self.p = p
        self.convs = [{0: Fraction(1)}]

    def extend_to(self, k: int) -> None:
        while len(self.convs) <= k:
            nxt, _ = convolve_weights(self.convs[-1], self.p.weights, True)
            self.convs.append(nxt)

    def tail(self, k: int, t: int) -> Fraction:
        self.extend_to(k)
        return sum((w for v, w in self.convs[k].items() if v > t), Fraction(0))


def tail_evaluator(p: DiscretePmf):
    """P(S_k > t) evaluator matched to the pmf's numeric mode."""
    return _ExactTail(p) if p.exact else _FloatTail(p)


def mono_condition(p: OffspringPmf, k_max: Optional[int] = None,
                   cert_eps: float = 1e-9,
                   k_tilde_set: Optional[Iterable[int]] = None) -> MonoResult:
    """Check that k -> P(kt + S_k - k(k+1) > 0) is non-increasing.

    The check runs over every kt in the support of the size-biased law
    (or the given ``k_tilde_set``) and consecutive support points k of
    ``p`` up to ``k_max`` (default: the largest support point, which for
    a truncated pmf is the truncation bound, so nothing is left
    unchecked).  A strict increase yields FAILS with the first witness
    in (k, kt) order.  If ``k_max`` cuts the support short, the tail
    values are certified: HOLDS only if every one of them is below both
    ``cert_eps`` and the last checked value for its kt.
    """
    supp = list(p.support)
    if k_tilde_set is None:
        kts = list(size_biased(p).support)
    else:
        kts = sorted(set(int(k) for k in k_tilde_set))
    hi = supp[-1] if k_max is None else min(int(k_max), supp[-1])
    checked = [k for k in supp if k <= hi]
    tail_ks = [k for k in supp if k > hi]

    ev = tail_evaluator(p)
    rows: dict[int, list[tuple[int, float]]] = {kt: [] for kt in kts}
    prev: dict[int, Number] = {}
    prev_k: Optional[int] = None
    witness = None

    for k in checked:
        for kt in kts:
            val = ev.tail(k, k * (k + 1) - kt)
            rows[kt].append((k, float(val)))
            if witness is None and prev_k is not None and val > prev[kt]:
                witness = MonoWitness(k_tilde=kt, k_from=prev_k, k_to=k,
                                      value_from=float(prev[kt]),
                                      value_to=float(val))
            prev[kt] = val
        prev_k = k
        if witness is not None:
            break

    values = {kt: tuple(v) for kt, v in rows.items()}
    span = (checked[0], checked[-1]) if checked else (0, 0)
    if witness is not None:
        return MonoResult(verdict=MonoVerdict.FAILS, witness=witness,
                          k_checked=span, cert_eps=cert_eps, certified=True,
                          values=values)

    certified = bool(checked)
    for k in tail_ks:
        if not certified:
            break
        for kt in kts:
            val = ev.tail(k, k * (k + 1) - kt)
            if val > cert_eps or val > prev[kt]:
                certified = False
    if not certified:
        return MonoResult(verdict=MonoVerdict.INCONCLUSIVE, witness=None,
                          k_checked=span, cert_eps=cert_eps, certified=False,
                          values=values)
    return MonoResult(verdict=MonoVerdict.HOLDS, witness=None,
                      k_checked=span, cert_eps=cert_eps, certified=True,
                      values=values)


# ---------------------------------------------------------------------------
# Conditioned-tail inequalities implied by the monotonicity condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lemma31Report:
    part_a_ok: bool
    part_b_ok: bool
    k_range: tuple[int, int]
    violations: tuple[str, ...]


def lemma31_check(p: OffspringPmf, k_range: Optional[tuple[int, int]] = None,
                  y_pmf: Optional[DiscretePmf] = None) -> Lemma31Report:
    """Pointwise check of two consequences of the monotonicity condition.

    (a) k -> P(kt + S_X - X(X+1) > 0 | X > k) is non-increasing for each
        kt in the size-biased support;
    (b) P(Y > k) >= P(Y > k | Xt + S_Y - Y(Y+1) > 0) for a non-negative
        Y independent of the rest (default: Y distributed as Xt).

    Requires ``mono_condition(p)`` to hold; any reported violation would
    indicate an implementation bug rather than sharpness of the bounds.
    """
    if mono_condition(p).verdict is not MonoVerdict.HOLDS:
        raise HypothesisNotMet("monotonicity condition fails for this pmf")
    exact = p.exact
    parent = size_biased(p)
    supp = p.support
    lo, hi = k_range if k_range is not None else (0, max(supp))
    tol = 0 if exact else 1e-12
    ev = tail_evaluator(p)
    violations: list[str] = []

    # Part (a): conditional tails given X > k, for each kt.
    for kt in parent.support:
        rho = {s: ev.tail(s, s * (s + 1) - kt) for s in supp}
        prev_val = None
        for k in range(lo, hi + 1):
            den = sum(w for s, w in p.weights.items() if s > k)
            if den == 0:
                break
            num = sum(w * rho[s] for s, w in p.weights.items() if s > k)
            val = num / den
            if prev_val is not None and val > prev_val + tol:
                violations.append(
                    f"(a) kt={kt}: conditional tail rises at k={k}")
            prev_val = val
    part_a_ok = not any(v.startswith("(a)") for v in violations)

    # Part (b): conditioning on a positive vertex makes Y smaller.
    y = y_pmf if y_pmf is not None else parent
    both_exact = exact and y.exact
    work_p, work_parent = (p, parent) if both_exact else (p.as_float(),
                                                          parent.as_float())
    if not both_exact:
        y = y.as_float()
    ladder, _ = _sum_ladder(work_p, max(y.support), both_exact)
    rho_t = {}
    for yv in y.support:
        dist, _ = convolve_weights(work_parent.weights, ladder[yv], both_exact)
        rho_t[yv] = _Sorted(dist, both_exact).split(yv * (yv + 1))[2]
    den = sum(w * rho_t[yv] for yv, w in y.weights.items())
    for k in range(lo, hi + 1):
        lhs = sum(w for yv, w in y.weights.items() if yv > k)
        if den == 0:
            break
        rhs = sum(w * rho_t[yv] for yv, w in y.weights.items() if yv > k) / den
        if rhs > lhs + tol:
            violations.append(f"(b) conditioned tail exceeds plain tail at k={k}")
    part_b_ok = not any(v.startswith("(b)") for v in violations)

    return Lemma31Report(part_a_ok=part_a_ok, part_b_ok=part_b_ok,
                         k_range=(lo, hi), violations=tuple(violations))


# ---------------------------------------------------------------------------
# Poisson helpers (figure data and rate scans)
# ---------------------------------------------------------------------------

def poisson_tail_f(k_tilde: int, k: int, lam: float,
                   eps: float = 1e-12) -> float:
    """f(kt, k, lam) = P(kt + S_k - k(k+1) > 0) for Poisson(lam) offspring."""
    p = poisson_truncated(lam, eps)
    return _FloatTail(p).tail(k, k * (k + 1) - k_tilde)


@dataclass(frozen=True)
class PoissonScanPoint:
    lam: float
    verdict: MonoVerdict
    witness: Optional[MonoWitness]


def scan_poisson_mono(lo: float, hi: float, step: float,
                      eps: float = 1e-12,
                      k_tilde_set: Optional[Sequence[int]] = None
                      ) -> list[PoissonScanPoint]:
    """Monotonicity verdicts on a grid of Poisson rates.

    The grid is ``lo, lo+step, ...`` up to and including ``hi`` (within
    half a step).  Used to bracket the rate window where the condition
    fails.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    points = []
    count = int(math.floor((hi - lo) / step + 0.5)) + 1
    for i in range(count):
        lam = round(lo + i * step, 10)
        res = mono_condition(poisson_truncated(lam, eps),
                             k_tilde_set=k_tilde_set)
        points.append(PoissonScanPoint(lam=lam, verdict=res.verdict,
                                       witness=res.witness))
    return points
