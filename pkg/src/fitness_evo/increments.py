"""Joint laws of the per-cycle birth count X and death count Y.

Means live in (0, +inf] and at least one of E[X], E[Y] must be finite; the
drift E[alpha*X - Y] follows the extended-real conventions of the model:

* E[X] = +inf > E[Y] and alpha > 0   ->  +inf
* E[X] = +inf > E[Y] and alpha = 0   ->  -E[Y]   (0 * inf counts as 0)
* E[Y] = +inf > E[X]                 ->  -inf for every alpha

Python floats carry +inf natively, so no tagged wrapper type is needed; only
the alpha = 0 case deviates from IEEE arithmetic and is special-cased.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from .errors import ConfigError, ConstructionError, DomainError, RegimeError

PROB_TOL = 1e-12


# ---------------------------------------------------------------------------
# Marginal laws on {0, 1, 2, ...}
# ---------------------------------------------------------------------------


class ShiftedGeometric:
    """Geometric on {1,2,...}: P(k) = (1-r)^(k-1) * r, mean 1/r."""

    def __init__(self, r: float):
        if not 0.0 < r <= 1.0:
            raise ConstructionError(f"geometric parameter {r} not in (0,1]")
        self.r = float(r)

    def mean(self) -> float:
        return 1.0 / self.r

    def pmf(self, k: int) -> float:
        return (1.0 - self.r) ** (k - 1) * self.r if k >= 1 else 0.0

    def pgf(self, z: float) -> float:
        return self.r * z / (1.0 - (1.0 - self.r) * z)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.geometric(self.r, size=size)

    def __repr__(self):
        return f"ShiftedGeometric({self.r!r})"


class Deterministic:
    def __init__(self, value: int):
        if value < 0 or value != int(value):
            raise ConstructionError(f"deterministic count {value} must be a nonnegative integer")
        self.value = int(value)

    def mean(self) -> float:
        return float(self.value)

    def pmf(self, k: int) -> float:
        return 1.0 if k == self.value else 0.0

    def pgf(self, z: float) -> float:
        return z**self.value

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value, dtype=np.int64)

    def __repr__(self):
        return f"Deterministic({self.value})"


class FiniteTable:
    """Explicit pmf on finitely many nonnegative integers."""

    def __init__(self, values, probs):
        values = [int(v) for v in values]
        probs = [float(p) for p in probs]
        if len(values) != len(probs) or not values:
            raise ConstructionError("values and probs must be nonempty and equal length")
        if any(v < 0 for v in values) or len(set(values)) != len(values):
            raise ConstructionError("values must be distinct nonnegative integers")
        if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > PROB_TOL:
            raise ConstructionError("probs must be nonnegative and sum to 1")
        order = np.argsort(values)
        self.values = np.asarray(values, dtype=np.int64)[order]
        self.probs = np.asarray(probs)[order]
        self._cum = np.cumsum(self.probs)

    def mean(self) -> float:
        return float(np.dot(self.values, self.probs))

    def pmf(self, k: int) -> float:
        i = np.searchsorted(self.values, k)
        if i < len(self.values) and self.values[i] == k:
            return float(self.probs[i])
        return 0.0

    def pgf(self, z: float) -> float:
        return float(np.sum(self.probs * np.power(float(z), self.values)))

    def sample(self, rng: np.random.Generator, size=None):
        u = rng.random(size)
        idx = np.searchsorted(self._cum, u, side="right")
        idx = np.minimum(idx, len(self.values) - 1)
        picked = self.values[idx]
        return int(picked) if size is None else picked

    def __repr__(self):
        return f"FiniteTable({self.values.tolist()}, {self.probs.tolist()})"


class ZetaLike:
    """Power-law pmf on {1,2,...} proportional to k^(-s); infinite mean when s <= 2.

    Sampling is exact: inverse CDF over a table for the bulk plus an analytic
    (Hurwitz zeta) tail search for the rare draws beyond the table, so no
    truncation bias enters.  The table cutoff and residual tail mass are
    exposed for run metadata.
    """

    TABLE_MAX = 10**6
    TAIL_TOL = 1e-12

    def __init__(self, s: float):
        if s <= 1.0:
            raise ConstructionError(f"zeta-like exponent {s} must exceed 1")
        self.s = float(s)
        self._norm = float(_hurwitz_zeta(self.s, 1.0))
        k = 1
        # grow the table until the residual tail is negligible or the cap hits
        while k < self.TABLE_MAX and self.tail(k + 1) > self.TAIL_TOL:
            k = min(self.TABLE_MAX, k * 32)
        ks = np.arange(1, k + 1, dtype=np.float64)
        self._cdf = np.cumsum(ks**-self.s) / self._norm
        self.table_cutoff = k

    def tail(self, k: int) -> float:
        """P(X >= k)."""
        return float(_hurwitz_zeta(self.s, k)) / self._norm

    def mean(self) -> float:
        if self.s <= 2.0:
            return math.inf
        return float(_hurwitz_zeta(self.s - 1.0, 1.0)) / self._norm

    def pmf(self, k: int) -> float:
        return k**-self.s / self._norm if k >= 1 else 0.0

    def pgf(self, z: float) -> float:
        raise RegimeError("zeta-like laws have no tractable closed-form PGF here")

    def sample(self, rng: np.random.Generator, size=None):
        scalar = size is None
        u = rng.random(1 if scalar else size)
        out = np.searchsorted(self._cdf, u, side="left") + 1
        out = out.astype(np.int64)
        for i in np.nonzero(u > self._cdf[-1])[0]:
            out[i] = self._tail_quantile(float(u[i]))
        return int(out[0]) if scalar else out

    def _tail_quantile(self, u: float) -> int:
        # smallest k with P(X <= k) >= u, i.e. tail(k+1) <= 1-u
        target = (1.0 - u) * self._norm
        lo = self.table_cutoff + 1
        hi = 2 * lo
        while _hurwitz_zeta(self.s, hi + 1) > target:
            hi *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            if _hurwitz_zeta(self.s, mid + 1) <= target:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def __repr__(self):
        return f"ZetaLike({self.s!r})"


def discrete_law_from_config(cfg: dict):
    if not isinstance(cfg, dict) or len(cfg) != 1:
        raise ConfigError(f"discrete law config must have exactly one key, got {cfg!r}")
    ((kind, arg),) = cfg.items()
    try:
        if kind == "deterministic":
            return Deterministic(arg)
        if kind == "geometric":
            return ShiftedGeometric(arg)
        if kind == "zeta":
            return ZetaLike(arg)
        if kind == "table":
            return FiniteTable([v for v, _ in arg], [p for _, p in arg])
    except (TypeError, ConstructionError) as exc:
        raise ConfigError(f"bad discrete law config {cfg!r}: {exc}") from exc
    raise ConfigError(f"unknown discrete law kind {kind!r}")


def discrete_law_to_config(law) -> dict:
    if isinstance(law, Deterministic):
        return {"deterministic": law.value}
    if isinstance(law, ShiftedGeometric):
        return {"geometric": law.r}
    if isinstance(law, ZetaLike):
        return {"zeta": law.s}
    if isinstance(law, FiniteTable):
        return {"table": [[int(v), float(p)] for v, p in zip(law.values, law.probs)]}
    raise ConfigError(f"cannot serialize law {law!r}")


# ---------------------------------------------------------------------------
# Joint increment laws
# ---------------------------------------------------------------------------


class IncrementLaw:
    """Joint law of (X, Y) plus the fitness batching mode.

    Use the classmethod constructors; ``kind`` records which model variant
    built the law.  With ``batch_constant=True`` every species in one birth
    batch receives the same (single) fitness draw.
    """

    def __init__(self, law_x, law_y, *, kind="product", batch_constant=False, joint=None):
        self.law_x = law_x
        self.law_y = law_y
        self.kind = kind
        self.batch_constant = bool(batch_constant)
        self._joint = joint  # (pairs int64[n,2], probs, cum) for custom-joint
        mx, my = self.mean_x, self.mean_y
        if mx <= 0.0 or my <= 0.0:
            raise ConstructionError("E[X] and E[Y] must both be positive")
        if math.isinf(mx) and math.isinf(my):
            raise ConstructionError("at least one of E[X], E[Y] must be finite")

    # -- constructors --------------------------------------------------------

    @classmethod
    def gms(cls, p: float, *, batch_constant=False) -> "IncrementLaw":
        """Single-coin model: X ~ G(1-p) and Y ~ G(p) on {1,2,...}."""
        if not 0.0 < p < 1.0:
            raise ConstructionError(f"gms parameter p={p} must lie in (0,1)")
        return cls(ShiftedGeometric(1.0 - p), ShiftedGeometric(p), kind="gms", batch_constant=batch_constant)

    @classmethod
    def markov(cls, p: float, q: float, *, batch_constant=False) -> "IncrementLaw":
        """Two-state chain: birth runs X ~ G(1-p), death runs Y ~ G(1-q)."""
        if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
            raise ConstructionError(f"markov parameters (p={p}, q={q}) must lie in (0,1)")
        return cls(ShiftedGeometric(1.0 - p), ShiftedGeometric(1.0 - q), kind="markov", batch_constant=batch_constant)

    @classmethod
    def bp(cls, law_x, *, batch_constant=False) -> "IncrementLaw":
        """Branching-process case: Y identically 1."""
        return cls(law_x, Deterministic(1), kind="bp", batch_constant=batch_constant)

    @classmethod
    def product(cls, law_x, law_y, *, batch_constant=False) -> "IncrementLaw":
        return cls(law_x, law_y, kind="product", batch_constant=batch_constant)

    @classmethod
    def custom_joint(cls, table, *, batch_constant=False) -> "IncrementLaw":
        """Dependent (X,Y) from an explicit table of ((x, y), prob) entries."""
        pairs = np.asarray([[int(x), int(y)] for (x, y), _ in table], dtype=np.int64)
        probs = np.asarray([float(p) for _, p in table])
        if np.any(pairs < 0) or np.any(probs < 0) or abs(probs.sum() - 1.0) > PROB_TOL:
            raise ConstructionError("joint table needs nonnegative entries with probs summing to 1")
        mx = float(np.dot(pairs[:, 0], probs))
        my = float(np.dot(pairs[:, 1], probs))
        law_x = FiniteTable(*_marginal(pairs[:, 0], probs))
        law_y = FiniteTable(*_marginal(pairs[:, 1], probs))
        self = cls(law_x, law_y, kind="custom-joint", batch_constant=batch_constant,
                   joint=(pairs, probs, np.cumsum(probs)))
        assert abs(self.mean_x - mx) < 1e-9 and abs(self.mean_y - my) < 1e-9
        return self

    # -- moments and drift -----------------------------------------------------

    @property
    def mean_x(self) -> float:
        return self.law_x.mean()

    @property
    def mean_y(self) -> float:
        return self.law_y.mean()

    def drift(self, alpha: float) -> float:
        """E[alpha*X - Y] under the extended-real conventions above."""
        if not 0.0 <= alpha <= 1.0:
            raise DomainError(f"alpha {alpha} outside [0,1]")
        mx, my = self.mean_x, self.mean_y
        if math.isinf(mx):
            return math.inf if alpha > 0.0 else -my
        if math.isinf(my):
            return -math.inf
        return alpha * mx - my

    # -- PGF of X ---------------------------------------------------------------

    def pgf_x(self, z: float) -> float:
        if not 0.0 <= z <= 1.0:
            raise DomainError(f"z {z} outside [0,1]")
        return self.law_x.pgf(z)

    def pgf_x_prime_at_1(self) -> float:
        """Phi'(1) = E[X]; +inf is a flagged value, not an error."""
        return self.mean_x

    # -- sampling ----------------------------------------------------------------

    def sample_pair(self, rng: np.random.Generator) -> tuple[int, int]:
        xs, ys = self.sample_pairs(rng, 1)
        return int(xs[0]), int(ys[0])

    def sample_pairs(self, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Block-draw n joint (X, Y) pairs; X block first, then Y block."""
        if self._joint is not None:
            pairs, _, cum = self._joint
            idx = np.minimum(np.searchsorted(cum, rng.random(n), side="right"), len(pairs) - 1)
            return pairs[idx, 0].copy(), pairs[idx, 1].copy()
        xs = np.asarray(self.law_x.sample(rng, size=n), dtype=np.int64)
        ys = np.asarray(self.law_y.sample(rng, size=n), dtype=np.int64)
        return xs, ys

    @property
    def y_is_unit(self) -> bool:
        return isinstance(self.law_y, Deterministic) and self.law_y.value == 1

    # -- config ---------------------------------------------------------------------

    @classmethod
    def from_config(cls, cfg: dict) -> "IncrementLaw":
        if not isinstance(cfg, dict):
            raise ConfigError("increments config must be an object")
        cfg = dict(cfg)
        batch = cfg.pop("fitness_batch", "iid")
        if batch not in ("iid", "constant"):
            raise ConfigError(f"fitness_batch must be 'iid' or 'constant', got {batch!r}")
        bc = batch == "constant"
        kind = cfg.pop("kind", None)
        try:
            if kind == "gms":
                return cls.gms(cfg.pop("p"), batch_constant=bc)
            if kind == "markov":
                return cls.markov(cfg.pop("p"), cfg.pop("q"), batch_constant=bc)
            if kind == "bp":
                return cls.bp(discrete_law_from_config(cfg.pop("x")), batch_constant=bc)
            if kind == "product":
                return cls.product(discrete_law_from_config(cfg.pop("x")),
                                   discrete_law_from_config(cfg.pop("y")), batch_constant=bc)
            if kind == "custom_joint":
                return cls.custom_joint(cfg.pop("table"), batch_constant=bc)
        except KeyError as exc:
            raise ConfigError(f"increments config missing key {exc}") from exc
        except (TypeError, ConstructionError) as exc:
            raise ConfigError(f"bad increments config: {exc}") from exc
        raise ConfigError(f"unknown increments kind {kind!r}")

    def to_config(self) -> dict:
        out: dict = {"kind": self.kind.replace("-", "_")}
        if self.kind == "gms":
            out["p"] = 1.0 - self.law_x.r
        elif self.kind == "markov":
            out["p"] = 1.0 - self.law_x.r
            out["q"] = 1.0 - self.law_y.r
        elif self.kind == "bp":
            out["x"] = discrete_law_to_config(self.law_x)
        elif self.kind == "custom-joint":
            pairs, probs, _ = self._joint
            out["table"] = [[[int(x), int(y)], float(p)] for (x, y), p in zip(pairs, probs)]
        else:
            out["x"] = discrete_law_to_config(self.law_x)
            out["y"] = discrete_law_to_config(self.law_y)
        if self.batch_constant:
            out["fitness_batch"] = "constant"
        return out

    def __repr__(self):
        return (f"IncrementLaw(kind={self.kind!r}, x={self.law_x!r}, y={self.law_y!r}"
                + (", batch_constant=True)" if self.batch_constant else ")"))


def _marginal(vals: np.ndarray, probs: np.ndarray):
    uniq = np.unique(vals)
    return uniq, [float(probs[vals == v].sum()) for v in uniq]
