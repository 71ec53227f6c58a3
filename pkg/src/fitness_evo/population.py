"""Live species store: batch births at odd steps, least-fit bulk removal at even steps.

Internally a hash map fitness -> count plus a min-heap over the distinct keys,
so a death step costs O(keys drained + log size): whole keys below the
removal boundary are drained, then the boundary key is decremented.  Atoms
repeat their exact stored float, so counts merge without epsilon games;
continuous draws collide with probability zero.

Sorted views (``items_sorted``, ``empirical_cdf``, ``count_in``) are built
lazily and cached until the next mutation.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import EmptyPopulationError, SequencingError
from .measure import BorelSet


@dataclass(frozen=True)
class KillReport:
    """What one death step removed.

    ``removed`` is sorted by fitness and every entry except possibly the last
    drained its key completely; ``shortfall`` is the unmet part of the request
    when the population ran out.
    """

    removed: tuple[tuple[float, int], ...]
    requested: int
    shortfall: int

    @property
    def total_removed(self) -> int:
        return self.requested - self.shortfall


class Population:
    def __init__(self, initial: dict[float, int] | None = None):
        self._counts: dict[float, int] = {}
        self._heap: list[float] = []
        self.total = 0
        self.step = 0
        self._sorted: tuple[list[float], list[int]] | None = None
        if initial:
            for f, c in initial.items():
                self._add(float(f), int(c))

    def _add(self, fitness: float, count: int) -> None:
        if count <= 0:
            if count == 0:
                return
            raise ValueError("count must be nonnegative")
        if fitness in self._counts:
            self._counts[fitness] += count
        else:
            self._counts[fitness] = count
            heapq.heappush(self._heap, fitness)
        self.total += count

    # -- dynamics -----------------------------------------------------------

    def birth_step(self, values, count: int | None = None) -> None:
        """Insert a birth batch at an even step (the step becomes odd).

        ``values`` is a sequence of fitness draws, or a single fitness paired
        with ``count`` for batch-constant mode.
        """
        if self.step % 2 != 0:
            raise SequencingError(f"birth_step at odd step {self.step}")
        self._sorted = None
        if count is not None:
            self._add(float(values), count)
        else:
            if isinstance(values, np.ndarray):
                values = values.tolist()
            for f in values:
                self._add(float(f), 1)
        self.step += 1

    def death_step(self, y: int) -> KillReport:
        """Remove the y least-fit species at an odd step; record any shortfall."""
        if self.step % 2 != 1:
            raise SequencingError(f"death_step at even step {self.step}")
        y = int(y)
        if y < 0:
            raise ValueError("death count must be nonnegative")
        self._sorted = None
        self.step += 1
        removed: list[tuple[float, int]] = []
        if y >= self.total:
            shortfall = y - self.total
            if self.total:
                removed = sorted(self._counts.items())
                self._counts.clear()
                self._heap.clear()
                self.total = 0
            return KillReport(tuple(removed), y, shortfall)
        need = y
        while need > 0:
            f = self._heap[0]
            c = self._counts[f]
            if c <= need:
                heapq.heappop(self._heap)
                del self._counts[f]
                removed.append((f, c))
                need -= c
            else:
                self._counts[f] = c - need
                removed.append((f, need))
                need = 0
        self.total -= y
        return KillReport(tuple(removed), y, 0)

    # -- queries ------------------------------------------------------------

    def _sorted_view(self):
        if self._sorted is None:
            keys = sorted(self._counts)
            cum = np.cumsum([self._counts[k] for k in keys]).tolist() if keys else []
            self._sorted = (keys, cum)
        return self._sorted

    def items_sorted(self) -> list[tuple[float, int]]:
        keys, _ = self._sorted_view()
        return [(k, self._counts[k]) for k in keys]

    def count_in(self, borel: BorelSet) -> int:
        """Number of live species with fitness in the given set."""
        keys, cum = self._sorted_view()
        if not keys:
            return 0
        total = 0
        for lo, hi, lc, hc in borel.components:
            i0 = bisect_left(keys, lo) if lc else bisect_right(keys, lo)
            i1 = bisect_right(keys, hi) if hc else bisect_left(keys, hi)
            if i1 > i0:
                total += cum[i1 - 1] - (cum[i0 - 1] if i0 else 0)
        return total

    def empirical_cdf(self) -> list[tuple[float, float]]:
        """Right-continuous step function (fitness, cumulative fraction); final value 1."""
        if self.total == 0:
            raise EmptyPopulationError("empirical CDF of an empty population")
        keys, cum = self._sorted_view()
        return [(k, c / self.total) for k, c in zip(keys, cum)]

    def fitness_counts(self) -> tuple[np.ndarray, np.ndarray]:
        """Sorted fitness keys and their counts as arrays (snapshot form)."""
        keys, _ = self._sorted_view()
        return (np.asarray(keys, dtype=np.float64),
                np.asarray([self._counts[k] for k in keys], dtype=np.int64))

    # -- snapshot dump ---------------------------------------------------------

    def write_snapshot(self, fh) -> None:
        write_snapshot(fh, self.step, self.total, self.items_sorted())

    def __len__(self) -> int:
        return self.total

    def __repr__(self) -> str:
        return f"Population(step={self.step}, total={self.total}, keys={len(self._counts)})"


def write_snapshot(fh, step: int, total: int, items) -> None:
    """Dump `fitness,count` rows sorted ascending, with a step/total header."""
    fh.write(f"# step={step} total={total}\n")
    fh.write("fitness,count\n")
    for f, c in items:
        fh.write(f"{float(f)!r},{int(c)}\n")
