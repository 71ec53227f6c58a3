"""Closed-form asymptotics: critical fitness, limiting shape, killing rates,
recurrence classification and branching-process extinction probabilities.

Everything here is a pure function of an immutable (measure, increment law)
pair.  Quantities that only exist in a parameter regime raise ``RegimeError``
outside it; ``shape_law`` returns a flagged object instead so callers can
report "undefined" without exception plumbing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, RegimeError
from .increments import IncrementLaw
from .measure import BorelSet, FitnessMeasure

#: |drift| below this counts as zero when classifying recurrence; the closed
#: forms of interest are rationals whose rounding noise is ~1e-16, while real
#: nonzero drifts in any scenario are >= 1e-3.
DRIFT_TOL = 1e-9

FIXED_POINT_TOL = 1e-12
MAX_FIXED_POINT_ITER = 10**6


def critical_fitness(m: FitnessMeasure, law: IncrementLaw) -> float:
    """inf{f : F(f) > E[Y]/E[X]}; +inf when E[Y] >= E[X].

    With E[X] infinite the threshold ratio is 0 and the result is the lower
    edge of the measure's support.  Solved exactly over the breakpoint
    structure, no bisection.  Crossings landing within 1e-9 of a breakpoint
    snap onto it: the threshold ratio carries ~1e-16 rounding, and an epsilon
    miss of an atom would flip every one-sided quantity evaluated at f_c.
    """
    mx, my = law.mean_x, law.mean_y
    if math.isinf(my):
        return math.inf
    ratio = 0.0 if math.isinf(mx) else my / mx
    if ratio >= 1.0:
        return math.inf
    bps = m.breakpoints()
    for i, b in enumerate(bps):
        fb = m.cdf(b)
        if fb > ratio:
            left = m.cdf_left(b)
            if left > ratio and i > 0:
                # crossed strictly inside the previous linear segment
                prev = bps[i - 1]
                y0 = m.cdf(prev)
                slope = (left - y0) / (b - prev)
                x = prev + (ratio - y0) / slope
                if x - prev < DRIFT_TOL:
                    return prev
                if b - x < DRIFT_TOL:
                    return b
                return x
            return b
    return math.inf  # unreachable for ratio < 1 since F(1) = 1


@dataclass(frozen=True)
class ShapeLaw:
    """Limiting fitness distribution of the surviving population.

    Defined only when E[Y] < E[X] < inf: a rescaled copy of mu above f_c plus
    a possible extra atom at f_c itself.  ``defined=False`` flags every other
    regime; the accessors then raise ``RegimeError``.
    """

    defined: bool
    measure: FitnessMeasure
    f_c: float
    atom_at_fc: float
    continuous_factor: float
    mean_x: float
    mean_y: float

    def _check(self):
        if not self.defined:
            raise RegimeError("limiting shape undefined: requires E[Y] < E[X] < inf")

    def cdf(self, f: float) -> float:
        self._check()
        if f < self.f_c:
            return 0.0
        return (self.measure.cdf(f) * self.mean_x - self.mean_y) / (self.mean_x - self.mean_y)

    def cdf_left(self, f: float) -> float:
        self._check()
        if f <= self.f_c:
            return 0.0
        return (self.measure.cdf_left(f) * self.mean_x - self.mean_y) / (self.mean_x - self.mean_y)

    def mass(self, borel: BorelSet) -> float:
        self._check()
        above = borel.clipped(self.f_c, 1.0, lo_closed=False)
        out = self.measure.mass(above) * self.continuous_factor
        if borel.contains(self.f_c):
            out += self.atom_at_fc
        return out

    def breakpoints(self) -> list[float]:
        self._check()
        return sorted({self.f_c, 1.0} | {b for b in self.measure.breakpoints() if b >= self.f_c})


def shape_law(m: FitnessMeasure, law: IncrementLaw) -> ShapeLaw:
    mx, my = law.mean_x, law.mean_y
    if math.isinf(mx) or my >= mx:
        return ShapeLaw(False, m, math.inf, math.nan, math.nan, mx, my)
    fc = critical_fitness(m, law)
    atom = (m.cdf(fc) * mx - my) / (mx - my)
    return ShapeLaw(True, m, fc, atom, mx / (mx - my), mx, my)


def limit_cdf(m: FitnessMeasure, law: IncrementLaw, f: float) -> float:
    """Limiting CDF of surviving fitness at f (raises outside the defined regime)."""
    return shape_law(m, law).cdf(f)


def limit_measure(m: FitnessMeasure, law: IncrementLaw, borel: BorelSet) -> float:
    """Limiting probability that a surviving species has fitness in the set."""
    return shape_law(m, law).mass(borel)


# ---------------------------------------------------------------------------
# Recurrence / survival classification
# ---------------------------------------------------------------------------

TRANSIENT = "transient"
NULL_RECURRENT = "null-recurrent"
POSITIVE_RECURRENT = "positive-recurrent"


@dataclass(frozen=True)
class RecurrenceClass:
    tag: str
    drift: float


def classify_left_interval(m: FitnessMeasure, law: IncrementLaw, f: float,
                           include_f: bool = True) -> RecurrenceClass:
    """Classify the left-interval count process by the sign of E[mu(I)X - Y]."""
    alpha = m.cdf(f) if include_f else m.cdf_left(f)
    if alpha <= 0.0:
        raise DomainError(f"interval [0,{f}{']' if include_f else ')'} carries no mass")
    d = law.drift(alpha)
    if d > DRIFT_TOL:
        tag = TRANSIENT
    elif d < -DRIFT_TOL:
        tag = POSITIVE_RECURRENT
    else:
        tag, d = NULL_RECURRENT, 0.0
    return RecurrenceClass(tag, d)


SURVIVAL = "survival"
EXTINCTION = "extinction"


def survival_verdict(m: FitnessMeasure, law: IncrementLaw, f: float) -> tuple[str, float]:
    """Survival in [0,f] iff E[F(f)X - Y] > 0; ties go to extinction."""
    d = law.drift(m.cdf(f))
    return (SURVIVAL if d > DRIFT_TOL else EXTINCTION), d


# ---------------------------------------------------------------------------
# Killing rates
# ---------------------------------------------------------------------------


def killing_rate(m: FitnessMeasure, law: IncrementLaw, borel: BorelSet) -> float:
    """Long-run kills per step in the set:
    lim K_n(A)/n = mu(A n [0,f_c]) E[X]/2 - 1_A(f_c) E[mu([0,f_c])X - Y]/2.
    """
    mx, my = law.mean_x, law.mean_y
    if math.isinf(mx) or not mx - my > 0.0:
        raise RegimeError("killing rates need 0 < E[X-Y] < inf")
    fc = critical_fitness(m, law)
    rate = m.mass(borel.clipped(0.0, fc)) * mx / 2.0
    if borel.contains(fc):
        rate -= (m.cdf(fc) * mx - my) / 2.0
    return max(rate, 0.0)


@dataclass(frozen=True)
class KillRegion:
    rate: float
    total_finite: bool


@dataclass(frozen=True)
class KillingRates:
    """Predicted kill rates/totals split at the critical fitness.

    ``at_or_above_diverges`` restates that the total killed in [f_c, 1]
    grows without bound whenever the process is supercritical.
    """

    below: KillRegion         # [0, f_c)
    at_critical: KillRegion   # {f_c}
    above: KillRegion         # (f_c, 1]
    at_or_above_rate: float   # [f_c, 1]
    at_or_above_diverges: bool


def killing_report(m: FitnessMeasure, law: IncrementLaw) -> KillingRates:
    mx, my = law.mean_x, law.mean_y
    if math.isinf(mx) or not mx - my > 0.0:
        raise RegimeError("killing rates need 0 < E[X-Y] < inf")
    fc = critical_fitness(m, law)
    ratio = my / mx
    mass_below = m.cdf_left(fc)
    atom = m.atom_mass_at(fc)
    below = KillRegion(rate=mass_below * mx / 2.0, total_finite=mass_below == 0.0)
    at_rate = max(0.0, (my - mass_below * mx) / 2.0) if atom > 0.0 else 0.0
    at_critical = KillRegion(rate=at_rate, total_finite=atom == 0.0)
    above = KillRegion(rate=0.0, total_finite=m.cdf(fc) > ratio + DRIFT_TOL)
    return KillingRates(
        below=below,
        at_critical=at_critical,
        above=above,
        at_or_above_rate=at_rate,
        at_or_above_diverges=True,
    )


# ---------------------------------------------------------------------------
# Branching-process extinction (Y identically 1)
# ---------------------------------------------------------------------------


def bp_extinction(m: FitnessMeasure, law: IncrementLaw, f: float, *,
                  left_open: bool = False, i: int = 1, j: int = 1) -> float:
    """Extinction probability of the species with fitness in [0,f] (or [0,f)).

    Given i species present at an odd time, returns qbar^i for hitting zero at
    a later odd time (j=1) and qbar^(i-1) for an even time (j=2), where qbar
    is the smallest fixed point in [0,1] of Psi(z) = Phi(z*F + 1 - F) and Phi
    is the PGF of X.  qbar = 1 exactly when F * Phi'(1) <= 1.
    """
    if not law.y_is_unit:
        raise RegimeError("branching-process extinction requires Y identically 1")
    if i < 1:
        raise DomainError(f"species count i={i} must be >= 1")
    if j not in (1, 2):
        raise DomainError(f"time parity selector j={j} must be 1 or 2")
    big_f = m.cdf_left(f) if left_open else m.cdf(f)
    qbar = _smallest_fixed_point(law, big_f)
    return qbar**i if j == 1 else qbar ** (i - 1)


def _smallest_fixed_point(law: IncrementLaw, big_f: float) -> float:
    mean = law.pgf_x_prime_at_1()
    if big_f * mean <= 1.0 + FIXED_POINT_TOL:
        return 1.0
    z = 0.0
    for _ in range(MAX_FIXED_POINT_ITER):
        nxt = law.pgf_x(z * big_f + 1.0 - big_f)
        if abs(nxt - z) < FIXED_POINT_TOL:
            return nxt
        z = nxt
    raise ConvergenceError("fixed-point iteration did not converge")
