import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fitness_evo import BorelSet, EmptyPopulationError, Population, SequencingError


def make_pop(counts: dict[float, int], step: int = 0) -> Population:
    pop = Population(initial=counts)
    pop.step = step
    return pop


class TestBirthStep:
    def test_insert_batch(self):
        pop = Population()
        pop.birth_step([0.5, 0.5, 0.9])
        assert pop.items_sorted() == [(0.5, 2), (0.9, 1)]
        assert pop.total == 3
        assert pop.step == 1

    def test_empty_batch_advances_step(self):
        pop = Population()
        pop.birth_step([])
        assert pop.total == 0
        assert pop.step == 1

    def test_count_merge(self):
        pop = make_pop({0.2: 1})
        pop.birth_step([0.2])
        assert pop.items_sorted() == [(0.2, 2)]

    def test_weighted_batch(self):
        pop = Population()
        pop.birth_step(0.4, count=10**9)
        assert pop.total == 10**9

    def test_parity_enforced(self):
        pop = Population()
        pop.birth_step([0.1])
        with pytest.raises(SequencingError):
            pop.birth_step([0.2])


class TestDeathStep:
    def test_removal_with_boundary_decrement(self):
        pop = make_pop({0.2: 3, 0.5: 2, 0.9: 1}, step=1)
        report = pop.death_step(4)
        assert pop.items_sorted() == [(0.5, 1), (0.9, 1)]
        assert report.removed == ((0.2, 3), (0.5, 1))
        assert report.shortfall == 0
        assert pop.step == 2

    def test_shortfall_when_exhausted(self):
        pop = make_pop({0.3: 2}, step=1)
        report = pop.death_step(5)
        assert pop.total == 0
        assert pop.items_sorted() == []
        assert report.shortfall == 3
        assert report.removed == ((0.3, 2),)

    def test_exact_boundary_drains_whole_key(self):
        pop = make_pop({0.2: 3, 0.5: 2}, step=1)
        report = pop.death_step(3)
        assert pop.items_sorted() == [(0.5, 2)]
        assert report.removed == ((0.2, 3),)

    def test_zero_deaths(self):
        pop = make_pop({0.2: 3}, step=1)
        report = pop.death_step(0)
        assert pop.total == 3
        assert report.removed == ()
        assert report.shortfall == 0

    def test_parity_enforced(self):
        pop = make_pop({0.2: 3}, step=0)
        with pytest.raises(SequencingError):
            pop.death_step(1)

    def test_everything_below_boundary_key_empties(self):
        # after a partial removal at the boundary key, nothing below it survives
        pop = make_pop({0.1: 2, 0.3: 5, 0.8: 1}, step=1)
        report = pop.death_step(4)
        x_plus = report.removed[-1][0]
        assert pop.count_in(BorelSet.interval(0.0, x_plus, True, False)) == 0


class TestQueries:
    def test_count_in_respects_flags(self):
        pop = make_pop({0.5: 2, 0.9: 1})
        assert pop.count_in(BorelSet.interval(0.5, 1.0, False, True)) == 1
        assert pop.count_in(BorelSet.interval(0.5, 1.0, True, True)) == 3
        assert pop.count_in(BorelSet.empty()) == 0

    def test_empirical_cdf(self):
        pop = make_pop({0.5: 1, 0.9: 1})
        assert pop.empirical_cdf() == [(0.5, 0.5), (0.9, 1.0)]
        assert make_pop({0.3: 4}).empirical_cdf() == [(0.3, 1.0)]

    def test_empirical_cdf_empty_raises(self):
        with pytest.raises(EmptyPopulationError):
            Population().empirical_cdf()

    def test_snapshot_format(self):
        pop = make_pop({0.5: 2, 0.25: 1}, step=4)
        buf = io.StringIO()
        pop.write_snapshot(buf)
        assert buf.getvalue() == "# step=4 total=3\nfitness,count\n0.25,1\n0.5,2\n"


counts_strategy = st.dictionaries(
    st.floats(0.0, 1.0, allow_nan=False), st.integers(1, 50), min_size=0, max_size=8)


class TestProperties:
    @settings(max_examples=200)
    @given(counts=counts_strategy, deaths=st.lists(st.integers(0, 120), min_size=1, max_size=6),
           batches=st.lists(st.lists(st.floats(0.0, 1.0, allow_nan=False), max_size=10),
                            min_size=1, max_size=6))
    def test_conservation_and_order(self, counts, deaths, batches):
        pop = Population(initial=counts)
        born = sum(counts.values())
        removed_total = 0
        for batch, y in zip(batches, deaths):
            pop.birth_step(batch)
            born += len(batch)
            report = pop.death_step(y)
            removed_total += report.total_removed
            # removal bookkeeping is exact
            assert sum(c for _, c in report.removed) + report.shortfall == report.requested
            # monotone removal: removed keys never exceed survivors, except at
            # the boundary key where a partial removal is allowed
            if report.removed and pop.total:
                survivors_min = pop.items_sorted()[0][0]
                removed_max = report.removed[-1][0]
                assert removed_max <= survivors_min
        assert pop.total == born - removed_total
        assert all(c > 0 for _, c in pop.items_sorted())

    @settings(max_examples=100)
    @given(data=st.data())
    def test_left_interval_queue_duality(self, data):
        """The interval count equals the reflected free walk, integer-exactly."""
        f = data.draw(st.floats(0.1, 0.9))
        include_f = data.draw(st.booleans())
        interval = BorelSet.interval(0.0, f, True, include_f)
        cycles = data.draw(st.integers(1, 25))
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32)))
        pop = Population()
        walk = 0
        run_min = 0
        for _ in range(cycles):
            x = int(rng.integers(0, 6))
            y = int(rng.integers(0, 6))
            batch = rng.random(x)
            # throw some mass exactly onto the boundary to stress tie handling
            batch[rng.random(x) < 0.3] = f
            pop.birth_step(batch)
            xtil = int(interval.contains_array(batch).sum())
            pop.death_step(y)
            walk += xtil - y
            run_min = min(run_min, walk)
            assert pop.count_in(interval) == walk - run_min

    @settings(max_examples=50)
    @given(counts=counts_strategy, y=st.integers(0, 100))
    def test_death_matches_sorted_reference(self, counts, y):
        """Oracle: removing y smallest from the fully sorted multiset."""
        pop = Population(initial=counts)
        pop.step = 1
        flat = sorted([f for f, c in counts.items() for _ in range(c)])
        survivors = flat[y:]
        pop.death_step(y)
        assert pop.total == len(survivors)
        got = [f for f, c in pop.items_sorted() for _ in range(c)]
        assert got == survivors
