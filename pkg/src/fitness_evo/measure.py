"""Fitness measures on [0,1] and the finite interval-union sets they are queried on.

A ``FitnessMeasure`` is a probability measure built from finitely many atoms
plus finitely many uniform-density pieces.  That family is closed under every
query the model needs (CDF, left limits, masses of interval unions) and all
of them evaluate in closed form, so no numerical integration appears anywhere.

A ``BorelSet`` is a finite union of disjoint intervals with explicit
endpoint-inclusion flags; degenerate components encode singletons.  This is
the only set algebra the model requires.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ConstructionError, DomainError

MASS_TOL = 1e-12


# ---------------------------------------------------------------------------
# Borel sets: finite unions of disjoint intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BorelSet:
    """Finite union of disjoint intervals in [0,1].

    ``components`` is a sorted tuple of ``(lo, hi, lo_closed, hi_closed)``.
    A singleton {x} is stored as ``(x, x, True, True)``.  The empty set has
    no components.
    """

    components: tuple[tuple[float, float, bool, bool], ...] = ()

    def __post_init__(self):
        prev_hi, prev_hc = None, None
        for lo, hi, lc, hc in self.components:
            if not (0.0 <= lo <= hi <= 1.0):
                raise ConstructionError(f"component [{lo}, {hi}] not inside [0,1]")
            if lo == hi and not (lc and hc):
                raise ConstructionError("degenerate component must be closed on both ends")
            if prev_hi is not None:
                if lo < prev_hi or (lo == prev_hi and prev_hc and lc):
                    raise ConstructionError("components must be disjoint and sorted")
            prev_hi, prev_hc = hi, hc

    # -- constructors ------------------------------------------------------

    @classmethod
    def empty(cls) -> "BorelSet":
        return cls(())

    @classmethod
    def interval(cls, lo: float, hi: float, lo_closed: bool = True, hi_closed: bool = True) -> "BorelSet":
        return cls(((float(lo), float(hi), bool(lo_closed), bool(hi_closed)),))

    @classmethod
    def point(cls, x: float) -> "BorelSet":
        return cls(((float(x), float(x), True, True),))

    @classmethod
    def parse(cls, text: str | list | tuple) -> "BorelSet":
        """Parse interval notation: ``"[0,0.5)"``, ``"{0.5}"`` or a list of such."""
        if isinstance(text, (list, tuple)):
            comps = []
            for part in text:
                comps.extend(cls.parse(part).components)
            return cls(tuple(sorted(comps)))
        s = text.strip()
        try:
            if s.startswith("{") and s.endswith("}"):
                return cls.point(float(s[1:-1]))
            lo_closed = s[0] == "["
            hi_closed = s[-1] == "]"
            if s[0] not in "[(" or s[-1] not in ")]":
                raise ValueError(s)
            lo_s, hi_s = s[1:-1].split(",")
            return cls.interval(float(lo_s), float(hi_s), lo_closed, hi_closed)
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"cannot parse interval notation {text!r}") from exc

    # -- queries -----------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.components

    def contains(self, x: float) -> bool:
        for lo, hi, lc, hc in self.components:
            if lo < x < hi or (x == lo and lc) or (x == hi and hc):
                return True
        return False

    def contains_array(self, xs: np.ndarray) -> np.ndarray:
        out = np.zeros(np.shape(xs), dtype=bool)
        for lo, hi, lc, hc in self.components:
            inside = (xs > lo) & (xs < hi)
            if lc:
                inside |= xs == lo
            if hc:
                inside |= xs == hi
            out |= inside
        return out

    def clipped(self, lo: float, hi: float, lo_closed: bool = True, hi_closed: bool = True) -> "BorelSet":
        """Intersection with a single interval."""
        comps = []
        for a, b, ac, bc in self.components:
            if a > lo:
                na, nac = a, ac
            elif a < lo:
                na, nac = lo, lo_closed and (lo < b or bc)
            else:
                na, nac = a, ac and lo_closed
            if b < hi:
                nb, nbc = b, bc
            elif b > hi:
                nb, nbc = hi, hi_closed and (hi > a or ac)
            else:
                nb, nbc = b, bc and hi_closed
            if na > nb or (na == nb and not (nac and nbc)):
                continue
            comps.append((na, nb, nac, nbc))
        return BorelSet(tuple(comps))

    def __str__(self) -> str:
        if not self.components:
            return "{}"
        parts = []
        for lo, hi, lc, hc in self.components:
            if lo == hi:
                parts.append(f"{{{lo:g}}}")
            else:
                parts.append(f"{'[' if lc else '('}{lo:g},{hi:g}{']' if hc else ')'}")
        return " u ".join(parts)


# ---------------------------------------------------------------------------
# Fitness measures: atoms + uniform pieces
# ---------------------------------------------------------------------------


class FitnessMeasure:
    """Probability measure on [0,1]: atoms plus weighted uniform pieces.

    Total mass must be 1 within ``MASS_TOL``; the constructor rejects rather
    than rescales, so configuration mistakes fail loudly.
    """

    def __init__(self, atoms=(), uniform_pieces=()):
        atoms = tuple((float(a), float(m)) for a, m in atoms)
        pieces = tuple((float(lo), float(hi), float(w)) for lo, hi, w in uniform_pieces)
        prev = -1.0
        for loc, m in atoms:
            if not 0.0 <= loc <= 1.0:
                raise ConstructionError(f"atom location {loc} outside [0,1]")
            if m <= 0.0:
                raise ConstructionError(f"atom mass {m} must be positive")
            if loc <= prev:
                raise ConstructionError("atom locations must be strictly increasing")
            prev = loc
        for lo, hi, w in pieces:
            if not (0.0 <= lo < hi <= 1.0):
                raise ConstructionError(f"piece [{lo},{hi}] must satisfy 0 <= lo < hi <= 1")
            if w <= 0.0:
                raise ConstructionError(f"piece weight {w} must be positive")
        total = sum(m for _, m in atoms) + sum(w for *_, w in pieces)
        if abs(total - 1.0) > MASS_TOL:
            raise ConstructionError(f"total mass {total!r} != 1 (no silent rescaling)")
        self.atoms = atoms
        self.uniform_pieces = pieces
        self._atom_locs = [a for a, _ in atoms]
        self._quantile = _QuantileTable(self)

    # -- named examples ------------------------------------------------------

    @classmethod
    def uniform(cls) -> "FitnessMeasure":
        return cls(uniform_pieces=[(0.0, 1.0, 1.0)])

    @classmethod
    def point_mass(cls, loc: float) -> "FitnessMeasure":
        return cls(atoms=[(loc, 1.0)])

    @classmethod
    def atom_uniform_mix(cls, alpha: float, atom: float = 0.5) -> "FitnessMeasure":
        """alpha * delta_{atom} + (1-alpha) * Uniform[0,1]."""
        if alpha == 0.0:
            return cls.uniform()
        if alpha == 1.0:
            return cls.point_mass(atom)
        return cls(atoms=[(atom, alpha)], uniform_pieces=[(0.0, 1.0, 1.0 - alpha)])

    # -- CDF and masses ------------------------------------------------------

    def atom_mass_at(self, f: float) -> float:
        i = bisect.bisect_left(self._atom_locs, f)
        if i < len(self._atom_locs) and self._atom_locs[i] == f:
            return self.atoms[i][1]
        return 0.0

    def cdf(self, f: float) -> float:
        """F(f) = mu([0, f]); right-continuous, F(1) = 1."""
        if not 0.0 <= f <= 1.0:
            raise DomainError(f"fitness {f} outside [0,1]")
        tot = sum(m for loc, m in self.atoms if loc <= f)
        for lo, hi, w in self.uniform_pieces:
            if f >= hi:
                tot += w
            elif f > lo:
                tot += w * (f - lo) / (hi - lo)
        return min(tot, 1.0)

    def cdf_left(self, f: float) -> float:
        """F(f-) = mu([0, f)); equals cdf(f) minus the atom mass at f."""
        if not 0.0 <= f <= 1.0:
            raise DomainError(f"fitness {f} outside [0,1]")
        return self.cdf(f) - self.atom_mass_at(f)

    def mass(self, borel: BorelSet) -> float:
        """mu(A) for a finite interval union, honouring endpoint flags."""
        tot = 0.0
        for lo, hi, lc, hc in borel.components:
            upper = self.cdf(hi) if hc else self.cdf_left(hi)
            lower = self.cdf_left(lo) if lc else self.cdf(lo)
            tot += upper - lower
        return tot

    # -- sampling -------------------------------------------------------------

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw from mu by inverse CDF; one uniform per draw.

        Atom draws return the stored location exactly, so repeated draws of an
        atom collide bit-for-bit (the population store relies on this).
        """
        if size is None:
            return float(self._quantile.value(rng.random()))
        return self._quantile.values(rng.random(size))

    def breakpoints(self) -> list[float]:
        """Sorted locations where F changes slope or jumps (plus 0 and 1)."""
        pts = {0.0, 1.0}
        pts.update(self._atom_locs)
        for lo, hi, _ in self.uniform_pieces:
            pts.add(lo)
            pts.add(hi)
        return sorted(pts)

    # -- config ---------------------------------------------------------------

    @classmethod
    def from_config(cls, cfg: dict) -> "FitnessMeasure":
        if not isinstance(cfg, dict):
            raise ConfigError("measure config must be an object")
        unknown = set(cfg) - {"atoms", "uniform_pieces"}
        if unknown:
            raise ConfigError(f"unknown measure config keys: {sorted(unknown)}")
        try:
            return cls(atoms=cfg.get("atoms", ()), uniform_pieces=cfg.get("uniform_pieces", ()))
        except (TypeError, ConstructionError) as exc:
            raise ConfigError(f"bad measure config: {exc}") from exc

    def to_config(self) -> dict:
        return {
            "atoms": [[a, m] for a, m in self.atoms],
            "uniform_pieces": [[lo, hi, w] for lo, hi, w in self.uniform_pieces],
        }

    def __repr__(self) -> str:
        return f"FitnessMeasure(atoms={list(self.atoms)}, uniform_pieces={list(self.uniform_pieces)})"


class _QuantileTable:
    """Generalized inverse of a mixed CDF, vectorized over uniforms.

    Stores, per breakpoint b_j, the left limit F(b_j-) and value F(b_j); a
    uniform landing in (F(b_j-), F(b_j)] maps to the atom at b_j, otherwise it
    is interpolated linearly inside the segment it falls in.
    """

    def __init__(self, m: FitnessMeasure):
        bps = m.breakpoints()
        self.points = np.asarray(bps)
        self.y_left = np.asarray([m.cdf_left(b) for b in bps])
        self.y_right = np.asarray([m.cdf(b) for b in bps])

    def values(self, u: np.ndarray) -> np.ndarray:
        j = np.searchsorted(self.y_right, u, side="left")
        j = np.minimum(j, len(self.points) - 1)
        out = self.points[j].copy()
        seg = (u <= self.y_left[j]) & (j > 0)  # not swallowed by the atom at points[j]
        if np.any(seg):
            jj = j[seg]
            y0 = self.y_right[jj - 1]
            x0 = self.points[jj - 1]
            dy = self.y_left[jj] - y0
            with np.errstate(invalid="ignore", divide="ignore"):
                frac = np.where(dy > 0, (u[seg] - y0) / dy, 1.0)
            out[seg] = x0 + frac * (self.points[jj] - x0)
        return out

    def value(self, u: float) -> float:
        return float(self.values(np.asarray([u]))[0])
