import math

import numpy as np
import pytest
from scipy.special import zeta
from scipy.stats import chisquare

from fitness_evo import (
    ConstructionError,
    Deterministic,
    DomainError,
    FiniteTable,
    IncrementLaw,
    RegimeError,
    ShiftedGeometric,
    ZetaLike,
)
from fitness_evo.increments import discrete_law_from_config, discrete_law_to_config


class TestMarginals:
    def test_geometric_mean_and_pmf(self):
        g = ShiftedGeometric(1 / 3)
        assert g.mean() == pytest.approx(3.0)
        assert g.pmf(1) == pytest.approx(1 / 3)
        assert g.pmf(3) == pytest.approx((2 / 3) ** 2 / 3)
        assert g.pmf(0) == 0.0

    def test_geometric_pgf_against_partial_sum(self):
        # oracle: truncated series sum of the pmf, 10^4 terms
        g = ShiftedGeometric(1 / 3)
        z = 0.5
        series = sum(g.pmf(k) * z**k for k in range(1, 10**4))
        assert g.pgf(z) == pytest.approx(series, abs=1e-12)
        assert g.pgf(z) == pytest.approx(0.25, abs=1e-12)

    def test_deterministic(self):
        d = Deterministic(1)
        assert d.mean() == 1.0
        assert d.pgf(0.3) == 0.3
        with pytest.raises(ConstructionError):
            Deterministic(-1)

    def test_finite_table(self):
        t = FiniteTable([0, 2, 5], [0.2, 0.5, 0.3])
        assert t.mean() == pytest.approx(2.5)
        assert t.pgf(1.0) == pytest.approx(1.0)
        assert t.pmf(2) == pytest.approx(0.5)
        with pytest.raises(ConstructionError):
            FiniteTable([0, 2], [0.5, 0.6])

    def test_zeta_mean(self):
        assert math.isinf(ZetaLike(2.0).mean())
        assert math.isinf(ZetaLike(1.5).mean())
        # oracle for s=3: ratio of zeta values
        assert ZetaLike(3.0).mean() == pytest.approx(zeta(2.0) / zeta(3.0), rel=1e-12)

    def test_zeta_pmf_normalizes(self):
        z = ZetaLike(2.5)
        assert sum(z.pmf(k) for k in range(1, 5000)) == pytest.approx(1.0, abs=1e-3)

    def test_zeta_has_no_tractable_pgf(self):
        with pytest.raises(RegimeError):
            ZetaLike(2.0).pgf(0.5)

    def test_zeta_sampling_matches_pmf(self):
        rng = np.random.default_rng(99)
        z = ZetaLike(2.0)
        draws = z.sample(rng, 10**5)
        for k in (1, 2, 3):
            assert np.mean(draws == k) == pytest.approx(z.pmf(k), abs=0.01)
        assert draws.min() >= 1

    def test_zeta_tail_quantile_exact(self):
        z = ZetaLike(2.0)
        cut = z.table_cutoff
        # u strictly inside the CDF step of cut+2, so the answer is unambiguous
        u = 1.0 - (z.tail(cut + 2) + z.tail(cut + 3)) / 2.0
        # brute-force oracle: walk the pmf upward from the cutoff
        k, cdf = cut, 1.0 - z.tail(cut + 1)
        while cdf < u:
            k += 1
            cdf += z.pmf(k)
        assert z._tail_quantile(u) == k == cut + 2


class TestIncrementLaw:
    def test_gms_means(self):
        law = IncrementLaw.gms(4 / 5)
        assert law.mean_x == pytest.approx(5.0)
        assert law.mean_y == pytest.approx(5 / 4)

    def test_bp_pair_degenerate(self, rng):
        law = IncrementLaw.bp(Deterministic(2))
        assert law.sample_pair(rng) == (2, 1)
        assert law.y_is_unit

    def test_gms_sample_means_clt_band(self):
        rng = np.random.default_rng(7)
        law = IncrementLaw.gms(2 / 3)
        xs, ys = law.sample_pairs(rng, 10**6)
        # CLT: sd(X) = sqrt(p)/(1-p) ~ 2.45, so 3 sigma on the mean ~ 0.0073
        assert abs(xs.mean() - 3.0) < 0.0074
        assert abs(ys.mean() - 1.5) < 0.0033

    def test_gms_marginals_chi_square(self):
        rng = np.random.default_rng(31)
        law = IncrementLaw.gms(2 / 3)
        xs, _ = law.sample_pairs(rng, 10**5)
        kmax = 15
        observed = np.bincount(np.minimum(xs, kmax), minlength=kmax + 1)[1:]
        probs = np.array([law.law_x.pmf(k) for k in range(1, kmax)])
        probs = np.append(probs, 1.0 - probs.sum())  # lump the tail
        _, pvalue = chisquare(observed, probs * len(xs))
        assert pvalue > 0.01

    def test_drift_table_values(self, half_mix):
        assert IncrementLaw.gms(2 / 3).drift(3 / 4) == pytest.approx(3 / 4)
        assert IncrementLaw.markov(3 / 4, 1 / 2).drift(3 / 4) == pytest.approx(1.0)

    def test_drift_infinite_conventions(self):
        heavy_x = IncrementLaw.product(ZetaLike(2.0), Deterministic(1))
        assert heavy_x.drift(0.1) == math.inf
        assert heavy_x.drift(0.0) == -1.0
        heavy_y = IncrementLaw.product(Deterministic(3), ZetaLike(2.0))
        assert heavy_y.drift(0.5) == -math.inf
        assert heavy_y.drift(0.0) == -math.inf

    def test_drift_endpoints(self):
        law = IncrementLaw.gms(2 / 3)
        assert law.drift(1.0) == pytest.approx(law.mean_x - law.mean_y)
        assert law.drift(0.0) == pytest.approx(-law.mean_y)
        with pytest.raises(DomainError):
            law.drift(1.5)

    def test_drift_monotone_in_alpha(self):
        law = IncrementLaw.markov(0.7, 0.4)
        drifts = [law.drift(a) for a in np.linspace(0, 1, 21)]
        assert all(b >= a for a, b in zip(drifts, drifts[1:]))

    def test_rejects_both_means_infinite(self):
        with pytest.raises(ConstructionError):
            IncrementLaw.product(ZetaLike(2.0), ZetaLike(2.0))

    def test_pgf_x(self):
        law = IncrementLaw.bp(Deterministic(2))
        assert law.pgf_x(0.5) == pytest.approx(0.25)
        assert law.pgf_x(1.0) == pytest.approx(1.0)
        assert law.pgf_x_prime_at_1() == pytest.approx(2.0)
        assert IncrementLaw.product(ZetaLike(2.0), Deterministic(1)).pgf_x_prime_at_1() == math.inf

    def test_pgf_monotone_convex(self):
        law = IncrementLaw.gms(0.6)
        zs = np.linspace(0.0, 1.0, 41)
        vals = [law.pgf_x(z) for z in zs]
        diffs = np.diff(vals)
        assert np.all(diffs >= -1e-12)
        assert np.all(np.diff(diffs) >= -1e-12)

    def test_custom_joint(self):
        rng = np.random.default_rng(5)
        law = IncrementLaw.custom_joint([((0, 1), 0.25), ((3, 0), 0.25), ((2, 2), 0.5)])
        assert law.mean_x == pytest.approx(1.75)
        assert law.mean_y == pytest.approx(1.25)
        xs, ys = law.sample_pairs(rng, 50000)
        # only the three configured pairs ever occur
        seen = set(zip(xs.tolist(), ys.tolist()))
        assert seen == {(0, 1), (3, 0), (2, 2)}
        assert abs(np.mean((xs == 2) & (ys == 2)) - 0.5) < 0.02


class TestConfig:
    @pytest.mark.parametrize("cfg", [
        {"kind": "gms", "p": 0.6667},
        {"kind": "markov", "p": 0.75, "q": 0.5},
        {"kind": "bp", "x": {"deterministic": 2}},
        {"kind": "product", "x": {"geometric": 0.4}, "y": {"zeta": 2.0}},
        {"kind": "product", "x": {"table": [[1, 0.5], [4, 0.5]]}, "y": {"deterministic": 1},
         "fitness_batch": "constant"},
    ])
    def test_round_trip(self, cfg):
        law = IncrementLaw.from_config(cfg)
        again = IncrementLaw.from_config(law.to_config())
        assert again.kind == law.kind
        assert again.batch_constant == law.batch_constant
        assert again.mean_y == pytest.approx(law.mean_y) or (
            math.isinf(again.mean_y) and math.isinf(law.mean_y))

    def test_bad_kind(self):
        from fitness_evo import ConfigError
        with pytest.raises(ConfigError):
            IncrementLaw.from_config({"kind": "mystery"})
        with pytest.raises(ConfigError):
            IncrementLaw.from_config({"kind": "gms"})

    def test_discrete_law_round_trip(self):
        for cfg in ({"deterministic": 3}, {"geometric": 0.25}, {"zeta": 2.5},
                    {"table": [[0, 0.5], [2, 0.5]]}):
            law = discrete_law_from_config(cfg)
            assert discrete_law_to_config(law) == cfg
