import math

import numpy as np
import pytest

from wiretapgame import (
    AliceAction,
    ConfigError,
    EveAction,
    HypothesisPair,
    Payoffs,
    ScenarioConfig,
    SensingSample,
    bob_hypotheses,
    eve_hypotheses,
    log_likelihood_ratio,
    mpe_decide,
    payoff_matrix,
    play_gamma_e3,
    play_gamma_e4,
    posterior,
    posterior_from_llr,
    simulate_sensing,
    solve_strategic,
    spe_alice_first,
    spe_eve_first,
)
from wiretapgame.channel import complex_normal, sample_channels, trial_rng

F, A = AliceAction.FULL_POWER, AliceAction.ARTIFICIAL_NOISE
E, J = EveAction.EAVESDROP, EveAction.JAM


def make_cfg(**kw):
    base = dict(Na=5, Nb=3, Ne=4, Pa=100.0, Pe=100.0, g1=2.8, g2=0.9, d=2,
                rho=0.4, trials=200, seed=0)
    base.update(kw)
    return ScenarioConfig(**base)


def fixed_bob_hyp(priors=(0.5, 0.5), seed=21):
    cfg = make_cfg()
    ch = sample_channels(cfg, trial_rng(seed, 0))
    return cfg, bob_hypotheses(cfg, ch, F, priors)


def batch_llr(hyp, truth_alt, M, trials, rng):
    """Vectorized oracle for the log-likelihood ratio using explicit inverses."""
    Z = hyp.Z1_total if truth_alt else hyp.Z0
    L = np.linalg.cholesky(Z)
    n = Z.shape[0]
    Y = L @ complex_normal(rng, (trials, n, M))
    Adiff = np.linalg.inv(hyp.Z0) - np.linalg.inv(hyp.Z1_total)
    quad = np.einsum("tij,tkj,ki->t", Y, Y.conj(), Adiff).real
    const = np.linalg.slogdet(hyp.Z1_total)[1] - np.linalg.slogdet(hyp.Z0)[1]
    return quad - M * const


class TestHypothesisModels:
    def test_prior_validation(self):
        with pytest.raises(ConfigError):
            HypothesisPair(Z0=np.eye(2), Z1_total=np.eye(2), priors=(0.7, 0.7))

    def test_bob_alternative_adds_jam_covariance(self):
        cfg = make_cfg()
        ch = sample_channels(cfg, trial_rng(1, 0))
        hyp = bob_hypotheses(cfg, ch, F, (0.5, 0.5))
        jam = hyp.Z1_total - hyp.Z0
        expected = (cfg.g2 * cfg.Pe / cfg.Ne) * ch.H_be @ ch.H_be.conj().T
        assert np.allclose(jam, expected)

    def test_bob_zero_jam_power_indistinguishable(self):
        cfg = make_cfg(Pe=0.0)
        ch = sample_channels(cfg, trial_rng(2, 0))
        hyp = bob_hypotheses(cfg, ch, A, (0.5, 0.5))
        assert np.array_equal(hyp.Z0, hyp.Z1_total)
        sample = simulate_sensing(hyp, truth_alt=True, M=8, rng=trial_rng(2, 1))
        assert log_likelihood_ratio(sample, hyp) == 0.0

    def test_eve_models_are_the_received_covariances(self):
        cfg = make_cfg()
        ch = sample_channels(cfg, trial_rng(3, 0))
        hyp = eve_hypotheses(cfg, ch, (0.5, 0.5))
        from wiretapgame.channel import alice_covariance, build_precoders
        q_f = alice_covariance(cfg, build_precoders(ch.H_ba, cfg.r), F)
        expect0 = cfg.g1 * ch.H_ea @ q_f @ ch.H_ea.conj().T + np.eye(cfg.Ne)
        assert np.allclose(hyp.Z0, expect0)
        assert not np.allclose(hyp.Z0, hyp.Z1_total)


class TestSensing:
    def test_scalar_sample_variance(self):
        hyp = HypothesisPair(Z0=np.array([[1.0]]), Z1_total=np.array([[4.0]]),
                             priors=(0.5, 0.5))
        rng = np.random.default_rng(4)
        draws = [simulate_sensing(hyp, True, 1, rng).Y[0, 0] for _ in range(4000)]
        assert np.mean(np.abs(draws) ** 2) == pytest.approx(4.0, rel=0.1)

    def test_empirical_covariance_matches_model(self):
        cfg, hyp = fixed_bob_hyp()
        sample = simulate_sensing(hyp, truth_alt=True, M=10_000,
                                  rng=trial_rng(5, 0))
        emp = sample.Y @ sample.Y.conj().T / sample.M
        rel = np.linalg.norm(emp - hyp.Z1_total) / np.linalg.norm(hyp.Z1_total)
        assert rel < 0.05

    def test_zero_samples_supported(self):
        _, hyp = fixed_bob_hyp()
        sample = simulate_sensing(hyp, truth_alt=False, M=0, rng=trial_rng(6, 0))
        assert sample.M == 0
        assert log_likelihood_ratio(sample, hyp) == 0.0
        assert posterior(sample, hyp).alpha0 == hyp.priors[0]


class TestLikelihoodRatio:
    def test_scalar_closed_form(self):
        hyp = HypothesisPair(Z0=np.array([[1.0]]), Z1_total=np.array([[2.0]]),
                             priors=(0.5, 0.5))
        y = 1.3 - 0.4j
        sample = SensingSample(Y=np.array([[y]]))
        t = abs(y) ** 2
        assert log_likelihood_ratio(sample, hyp) == pytest.approx(
            t / 2 - math.log(2), abs=1e-12)

    def test_matches_density_oracle(self):
        # direct complex-Gaussian log densities with explicit inverses
        cfg, hyp = fixed_bob_hyp()
        sample = simulate_sensing(hyp, truth_alt=True, M=6, rng=trial_rng(7, 0))

        def logpdf(Y, Z):
            n, m = Y.shape
            quad = np.trace(np.linalg.inv(Z) @ Y @ Y.conj().T).real
            return (-m * n * math.log(math.pi)
                    - m * np.linalg.slogdet(Z)[1] - quad)

        expected = logpdf(sample.Y, hyp.Z1_total) - logpdf(sample.Y, hyp.Z0)
        assert log_likelihood_ratio(sample, hyp) == pytest.approx(expected, rel=1e-10)


class TestDecisionRule:
    def test_even_priors_threshold_zero(self):
        assert mpe_decide(0.0, (0.5, 0.5)) == 1       # ties go to the alternative
        assert mpe_decide(-1e-12, (0.5, 0.5)) == 0
        assert mpe_decide(1e-12, (0.5, 0.5)) == 1

    def test_zero_priors_force_decision(self):
        assert mpe_decide(1e9, (1.0, 0.0)) == 0
        assert mpe_decide(-1e9, (0.0, 1.0)) == 1

    def test_likely_alternative_lowers_the_bar(self):
        # prior odds 3:1 for H1: H1 is declared even at slightly negative llr
        priors = (0.25, 0.75)
        thr = math.log(priors[0] / priors[1])
        assert thr < 0
        assert mpe_decide(thr + 1e-9, priors) == 1
        assert mpe_decide(thr - 1e-9, priors) == 0

    def test_minimizes_empirical_error_among_thresholds(self):
        cfg, hyp = fixed_bob_hyp(priors=(0.3, 0.7))
        rng = np.random.default_rng(8)
        n = 20_000
        llr0 = batch_llr(hyp, False, 2, n, rng)
        llr1 = batch_llr(hyp, True, 2, n, rng)

        def err(thr):
            fa = np.mean(llr0 >= thr)
            miss = np.mean(llr1 < thr)
            return hyp.priors[0] * fa + hyp.priors[1] * miss

        map_thr = math.log(hyp.priors[0] / hyp.priors[1])
        sweep = np.linspace(map_thr - 6, map_thr + 6, 241)
        best = min(err(t) for t in sweep)
        noise = 3.0 / math.sqrt(n)
        assert err(map_thr) <= best + noise


class TestPosterior:
    def test_uninformative_sample_keeps_prior(self):
        assert posterior_from_llr(0.0, (0.3, 0.7)).alpha0 == pytest.approx(0.3)

    def test_saturation(self):
        assert posterior_from_llr(1e9, (0.5, 0.5)).alpha0 == 0.0
        assert posterior_from_llr(-1e9, (0.5, 0.5)).alpha0 == pytest.approx(1.0)

    def test_sums_to_one_exactly(self):
        b = posterior_from_llr(0.37, (0.4, 0.6))
        assert b.alpha0 + b.alpha1 == 1.0

    def test_matches_two_line_bayes_oracle(self):
        priors = (0.35, 0.65)
        for llr in (-2.0, -0.1, 0.0, 0.4, 3.0):
            direct = priors[0] / (priors[0] + priors[1] * math.exp(llr))
            assert posterior_from_llr(llr, priors).alpha0 == pytest.approx(
                direct, abs=1e-12)

    def test_belief_calibration(self):
        # among samples with alpha0 in a bin, H0 must occur at that frequency
        cfg, hyp = fixed_bob_hyp(priors=(0.4, 0.6), seed=22)
        rng = np.random.default_rng(9)
        n = 40_000
        truth_alt = rng.random(n) < hyp.priors[1]
        llr = np.empty(n)
        llr[~truth_alt] = batch_llr(hyp, False, 1, int((~truth_alt).sum()), rng)
        llr[truth_alt] = batch_llr(hyp, True, 1, int(truth_alt.sum()), rng)
        logit = llr + math.log(hyp.priors[1] / hyp.priors[0])
        alpha0 = 1.0 / (1.0 + np.exp(logit))
        edges = np.arange(0.0, 1.0001, 0.05)
        for lo, hi in zip(edges[:-1], edges[1:]):
            sel = (alpha0 >= lo) & (alpha0 < hi)
            if sel.sum() < 400:
                continue
            freq = np.mean(~truth_alt[sel])
            center = (lo + hi) / 2
            band = 3 * math.sqrt(center * (1 - center) / sel.sum()) + 0.025
            assert abs(freq - center) <= band
            mean_alpha = alpha0[sel].mean()
            band_mean = 3 * math.sqrt(mean_alpha * (1 - mean_alpha) / sel.sum()) + 0.005
            assert abs(freq - mean_alpha) <= band_mean


class TestDetectorPerformance:
    def test_roc_point_matches_large_oracle(self):
        # detection probability at false-alarm 0.1, package path vs oracle
        cfg, hyp = fixed_bob_hyp(seed=23)
        M, n_pkg = 20, 3000
        llr0 = np.empty(n_pkg)
        llr1 = np.empty(n_pkg)
        for t in range(n_pkg):
            rng = trial_rng(900, t)
            llr0[t] = log_likelihood_ratio(
                simulate_sensing(hyp, False, M, rng), hyp)
            llr1[t] = log_likelihood_ratio(
                simulate_sensing(hyp, True, M, rng), hyp)
        thr = np.quantile(llr0, 0.9)
        pd_pkg = np.mean(llr1 >= thr)

        rng = np.random.default_rng(10)
        o0 = batch_llr(hyp, False, M, 100_000, rng)
        o1 = batch_llr(hyp, True, M, 100_000, rng)
        pd_oracle = np.mean(o1 >= np.quantile(o0, 0.9))
        assert abs(pd_pkg - pd_oracle) <= 0.02

    def test_error_rate_non_increasing_in_samples(self):
        cfg, hyp = fixed_bob_hyp(priors=(0.5, 0.5), seed=24)
        rng = np.random.default_rng(11)
        n = 8000
        rates = []
        for M in (1, 5, 20, 100):
            llr0 = batch_llr(hyp, False, M, n, rng)
            llr1 = batch_llr(hyp, True, M, n, rng)
            err = 0.5 * np.mean(llr0 >= 0) + 0.5 * np.mean(llr1 < 0)
            rates.append(err)
        band = 3 / math.sqrt(n)
        for worse, better in zip(rates, rates[1:]):
            assert better <= worse + band


@pytest.fixture(scope="module")
def baseline():
    cfg = make_cfg(trials=1500, seed=11)
    pm = payoff_matrix(cfg, trials=1500)
    return cfg, pm, solve_strategic(Payoffs.from_matrix(pm))


class TestImperfectInformationPlay:

    def test_no_information_equals_mixed_value(self, baseline):
        cfg, pm, eq = baseline
        for play in (play_gamma_e3, play_gamma_e4):
            res = play(cfg, pm, M=0, trials=1200, seed=31)
            band = 3 * math.hypot(res.payoff.std_err, 0.05)
            assert abs(res.payoff.mean - eq.value) <= band

    def test_large_sample_conditionals_reach_subgame_values(self, baseline):
        cfg, pm, eq = baseline
        R = Payoffs.from_matrix(pm)
        res4 = play_gamma_e4(cfg, pm, M=400, trials=1200, seed=32)
        be = res4.by_first_action["E"]
        bj = res4.by_first_action["J"]
        assert abs(be.mean - R.R_AE) <= 3 * math.hypot(be.std_err, pm.R_AE.std_err)
        assert abs(bj.mean - R.R_FJ) <= 3 * math.hypot(bj.std_err, pm.R_FJ.std_err)
        assert res4.error_rate <= 0.01

        res3 = play_gamma_e3(cfg, pm, M=400, trials=1200, seed=33)
        spe = spe_alice_first(R)
        cond = res3.by_first_action[spe.path[0].value]
        assert abs(cond.mean - spe.value) <= 3 * math.hypot(cond.std_err,
                                                            pm.R_AJ.std_err)

    def test_information_helps_the_sensing_side(self, baseline):
        cfg, pm, eq = baseline
        # Alice senses in the Eve-first game: payoff rises with M
        lo = play_gamma_e4(cfg, pm, M=1, trials=1200, seed=34)
        hi = play_gamma_e4(cfg, pm, M=100, trials=1200, seed=34)
        assert hi.payoff.mean >= lo.payoff.mean
        # Eve senses in the Alice-first game: payoff falls with M
        lo3 = play_gamma_e3(cfg, pm, M=1, trials=1200, seed=35)
        hi3 = play_gamma_e3(cfg, pm, M=100, trials=1200, seed=35)
        assert hi3.payoff.mean <= lo3.payoff.mean
        # the sensed side's value stays bracketed by the no-information value
        # and the perfect-information sequential outcome
        v = eq.value
        spe2 = spe_eve_first(Payoffs.from_matrix(pm)).value
        band = 3 * (hi.payoff.std_err + 0.06)
        assert v - band <= hi.payoff.mean <= spe2 + band

    def test_sensing_strategy_override(self, baseline):
        cfg, pm, _ = baseline
        res = play_gamma_e4(cfg, pm, M=5, trials=300, seed=36, alice_sensing=F)
        assert res.trials == 300
        assert 0.0 <= res.error_rate <= 1.0


class TestPowerScalingContrast:
    """Growing both budgets (Pe = 2 Pa) helps the Alice/Bob side's sensing
    game but leaves Eve's detection problem essentially unchanged, because
    the data-to-interference ratio she observes is power-invariant."""

    @staticmethod
    def _point(pa_db, seed_offset=0):
        pa = 10 ** (pa_db / 10)
        cfg = ScenarioConfig(Na=3, Nb=3, Ne=2, Pa=pa, Pe=2 * pa, g1=0.8,
                             g2=1.3, d=2, trials=1000, seed=41)
        pm = payoff_matrix(cfg, trials=1000)
        r3 = play_gamma_e3(cfg, pm, M=1, trials=1000, seed=42 + seed_offset)
        r4 = play_gamma_e4(cfg, pm, M=1, trials=1000, seed=43 + seed_offset)
        return pm, r3, r4

    def test_eve_flat_bob_helped(self):
        pm_lo, r3_lo, r4_lo = self._point(14.0)
        pm_hi, r3_hi, r4_hi = self._point(20.0)
        # Eve's error rate stays flat as the budgets grow
        assert abs(r3_hi.error_rate - r3_lo.error_rate) < 0.05
        # Bob's never degrades
        band = 3 * math.sqrt(0.25 / r4_lo.trials)
        assert r4_hi.error_rate <= r4_lo.error_rate + band
        # Alice's belief-play payoff sits between the no-information value
        # and the perfect-detection asymptote (q*-weighted subgame payoffs)
        for pm, r4 in ((pm_lo, r4_lo), (pm_hi, r4_hi)):
            R = Payoffs.from_matrix(pm)
            eq = solve_strategic(R, tol=pm.ordering_tolerance())
            asymptote = eq.q_star * R.R_AE + (1 - eq.q_star) * R.R_FJ
            band = 3 * math.hypot(r4.payoff.std_err, 0.05)
            assert eq.value - band <= r4.payoff.mean <= asymptote + band
