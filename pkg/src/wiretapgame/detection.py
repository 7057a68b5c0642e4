"""Gaussian likelihood-ratio sensing and belief-based play under imperfect
information.

The second mover never observes the first mover's action directly: she (or
her ally) collects M zero-mean complex Gaussian snapshots whose covariance
depends on that action, runs a minimum-probability-of-error likelihood-ratio
test with priors taken from the opponent's equilibrium mixture, forms the
Bayesian posterior, and best-responds to it.  Sensing and payoff accrual are
separate phases of one channel coherence block; the sensing overhead is not
charged against the rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky as _scipy_cholesky
from scipy.linalg import solve_triangular

from .channel import (
    AliceAction,
    ChannelSet,
    EveAction,
    ScenarioConfig,
    alice_covariance,
    build_precoders,
    complex_normal,
    herm,
    sample_channels,
    trial_rng,
)
from .errors import ConfigError, NumericalError
from .game import (
    Payoffs,
    best_response_alice,
    best_response_eve,
    solve_strategic,
)
from .rates import PayoffMatrix, RateEstimate, instantaneous_secrecy_rate


@dataclass(frozen=True)
class HypothesisPair:
    """Covariance models of one snapshot under H0 and H1, with priors.

    Z1_total is the complete alternative-hypothesis covariance (not an
    increment over Z0).
    """

    Z0: np.ndarray
    Z1_total: np.ndarray
    priors: tuple[float, float]

    def __post_init__(self):
        p0, p1 = self.priors
        if p0 < 0 or p1 < 0 or abs(p0 + p1 - 1.0) > 1e-9:
            raise ConfigError(f"priors must be a probability pair, got {self.priors}")


@dataclass(frozen=True)
class Beliefs:
    """Posterior probability of H0 after observing the sample block."""

    alpha0: float

    @property
    def alpha1(self) -> float:
        return 1.0 - self.alpha0


@dataclass(frozen=True)
class SensingSample:
    """M i.i.d. received snapshots stacked as the columns of an N x M matrix."""

    Y: np.ndarray

    @property
    def M(self) -> int:
        return self.Y.shape[1]


def _chol_lower(Z: np.ndarray) -> np.ndarray:
    try:
        return _scipy_cholesky(0.5 * (Z + Z.conj().T), lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("hypothesis covariance is singular to working "
                             "precision") from exc


def bob_hypotheses(cfg: ScenarioConfig, ch: ChannelSet,
                   alice_sensing: AliceAction,
                   priors: tuple[float, float]) -> HypothesisPair:
    """Bob's test for Eve's action: H0 she listens, H1 she jams.

    Z0 carries Alice's transmit covariance for whatever she sends during the
    sensing phase (Bob knows her actual action; they cooperate locally).
    """
    d, _ = cfg.effective(alice_sensing)
    pre = build_precoders(ch.H_ba, d)
    Qa = alice_covariance(cfg, pre, alice_sensing)
    Z0 = ch.H_ba @ Qa @ herm(ch.H_ba) + cfg.sigma_b2 * np.eye(cfg.Nb)
    Z_jam = (cfg.g2 * cfg.Pe / cfg.Ne) * (ch.H_be @ herm(ch.H_be))
    return HypothesisPair(Z0=Z0, Z1_total=Z0 + Z_jam, priors=priors)


def eve_hypotheses(cfg: ScenarioConfig, ch: ChannelSet,
                   priors: tuple[float, float]) -> HypothesisPair:
    """Eve's test for Alice's action: H0 full power, H1 artificial noise.

    Both covariances are the exact received models implied by the transmit
    scheme, so the detector is matched.
    """
    s_eye = cfg.sigma_e2 * np.eye(cfg.Ne)
    pre_f = build_precoders(ch.H_ba, cfg.r)
    Q_f = alice_covariance(cfg, pre_f, AliceAction.FULL_POWER)
    pre_a = build_precoders(ch.H_ba, cfg.d)
    Q_a = alice_covariance(cfg, pre_a, AliceAction.ARTIFICIAL_NOISE)
    Z0 = cfg.g1 * (ch.H_ea @ Q_f @ herm(ch.H_ea)) + s_eye
    Z1 = cfg.g1 * (ch.H_ea @ Q_a @ herm(ch.H_ea)) + s_eye
    return HypothesisPair(Z0=Z0, Z1_total=Z1, priors=priors)


def simulate_sensing(hyp: HypothesisPair, truth_alt: bool, M: int,
                     rng: np.random.Generator) -> SensingSample:
    """Draw M snapshots from the covariance selected by the true hypothesis."""
    if M < 0:
        raise ConfigError(f"sample count must be >= 0, got {M}")
    Z = hyp.Z1_total if truth_alt else hyp.Z0
    L = _chol_lower(Z)
    return SensingSample(Y=L @ complex_normal(rng, (Z.shape[0], M)))


def log_likelihood_ratio(sample: SensingSample, hyp: HypothesisPair) -> float:
    """ln f(Y|H1) - ln f(Y|H0) for the two zero-mean Gaussian models.

    Equals Tr((Z0^-1 - Z1^-1) Y Y^H) - M (ln det Z1 - ln det Z0), evaluated
    through Cholesky factors.  Monotone in the quadratic sensing statistic
    for a fixed sample count.
    """
    L0 = _chol_lower(hyp.Z0)
    L1 = _chol_lower(hyp.Z1_total)
    if sample.M == 0:
        q0 = q1 = 0.0
    else:
        q0 = float(np.sum(np.abs(solve_triangular(L0, sample.Y, lower=True)) ** 2))
        q1 = float(np.sum(np.abs(solve_triangular(L1, sample.Y, lower=True)) ** 2))
    ld0 = 2.0 * float(np.sum(np.log(np.diag(L0).real)))
    ld1 = 2.0 * float(np.sum(np.log(np.diag(L1).real)))
    return (q0 - q1) - sample.M * (ld1 - ld0)


def mpe_decide(llr: float, priors: tuple[float, float]) -> int:
    """Minimum-probability-of-error (MAP) decision from a log-likelihood ratio.

    Decides H1 iff llr >= ln(pi0/pi1); ties go to H1.  A zero prior forces
    the decision to the other hypothesis.
    """
    p0, p1 = priors
    if p1 == 0.0:
        return 0
    if p0 == 0.0:
        return 1
    return 1 if llr >= math.log(p0 / p1) else 0


def posterior_from_llr(llr: float, priors: tuple[float, float]) -> Beliefs:
    """Bayes posterior of H0, stabilized in the log domain."""
    p0, p1 = priors
    if p0 == 0.0:
        return Beliefs(alpha0=0.0)
    if p1 == 0.0:
        return Beliefs(alpha0=1.0)
    logit = llr + math.log(p1) - math.log(p0)   # log posterior odds of H1
    if logit > 700.0:
        return Beliefs(alpha0=0.0)
    return Beliefs(alpha0=1.0 / (1.0 + math.exp(logit)))


def posterior(sample: SensingSample, hyp: HypothesisPair) -> Beliefs:
    """Posterior beliefs over the hypotheses after observing the sample."""
    return posterior_from_llr(log_likelihood_ratio(sample, hyp), hyp.priors)


@dataclass(frozen=True)
class PlayResult:
    """Monte Carlo outcome of one imperfect-information sequential game."""

    payoff: RateEstimate
    by_first_action: dict[str, RateEstimate]
    error_rate: float
    M: int
    trials: int


def _aggregate(payoffs: np.ndarray, first: list[str], errors: np.ndarray,
               M: int, keys: tuple[str, str]) -> PlayResult:
    first = np.asarray(first)
    by = {}
    for k in keys:
        sel = payoffs[first == k]
        by[k] = (RateEstimate.from_samples(sel) if sel.size
                 else RateEstimate(mean=float("nan"), std_err=0.0, trials=0))
    return PlayResult(payoff=RateEstimate.from_samples(payoffs),
                      by_first_action=by,
                      error_rate=float(np.mean(errors)),
                      M=M, trials=int(payoffs.size))


def play_gamma_e3(cfg: ScenarioConfig, pm: PayoffMatrix, M: int,
                  trials: int, seed: int, clip: bool = True) -> PlayResult:
    """Alice moves first (mixing per her equilibrium strategy); Eve senses.

    Per trial: fresh channels, Alice's move drawn from her mixture, Eve
    observes M snapshots, updates beliefs and best-responds.  Returns the
    overall expected payoff, payoffs conditioned on Alice's move, and Eve's
    hypothesis-test error rate.
    """
    R = Payoffs.from_matrix(pm)
    eq = solve_strategic(R, tol=pm.ordering_tolerance())
    priors = (eq.p_star, 1.0 - eq.p_star)       # H0: Alice plays F
    cfg = cfg.with_split(pm.rho_star, pm.d_star)
    payoffs = np.empty(trials)
    errors = np.empty(trials, dtype=bool)
    moves: list[str] = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        ch = sample_channels(cfg, rng)
        alice = (AliceAction.FULL_POWER if rng.random() < eq.p_star
                 else AliceAction.ARTIFICIAL_NOISE)
        hyp = eve_hypotheses(cfg, ch, priors)
        sample = simulate_sensing(
            hyp, truth_alt=(alice is AliceAction.ARTIFICIAL_NOISE), M=M, rng=rng)
        llr = log_likelihood_ratio(sample, hyp)
        eve = best_response_eve(posterior_from_llr(llr, priors).alpha0, R)
        truth = int(alice is AliceAction.ARTIFICIAL_NOISE)
        errors[t] = mpe_decide(llr, priors) != truth
        payoffs[t] = instantaneous_secrecy_rate(cfg, ch, alice, eve, clip=clip)
        moves.append(alice.value)
    return _aggregate(payoffs, moves, errors, M, keys=("F", "A"))


def play_gamma_e4(cfg: ScenarioConfig, pm: PayoffMatrix, M: int,
                  trials: int, seed: int, clip: bool = True,
                  alice_sensing: AliceAction | None = None) -> PlayResult:
    """Eve moves first (mixing per her equilibrium strategy); Bob senses for
    Alice and feeds the inference back over an error-free channel.

    During sensing Alice transmits her mixture's realized action (or a fixed
    `alice_sensing` override); Bob knows that action.  Alice then commits to
    her belief-based best response for the payoff phase.  Reports Bob's
    hypothesis-test error rate.
    """
    R = Payoffs.from_matrix(pm)
    eq = solve_strategic(R, tol=pm.ordering_tolerance())
    priors = (eq.q_star, 1.0 - eq.q_star)       # H0: Eve eavesdrops
    cfg = cfg.with_split(pm.rho_star, pm.d_star)
    payoffs = np.empty(trials)
    errors = np.empty(trials, dtype=bool)
    moves: list[str] = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        ch = sample_channels(cfg, rng)
        eve = (EveAction.EAVESDROP if rng.random() < eq.q_star
               else EveAction.JAM)
        if alice_sensing is None:
            a_sense = (AliceAction.FULL_POWER if rng.random() < eq.p_star
                       else AliceAction.ARTIFICIAL_NOISE)
        else:
            a_sense = alice_sensing
        hyp = bob_hypotheses(cfg, ch, a_sense, priors)
        sample = simulate_sensing(
            hyp, truth_alt=(eve is EveAction.JAM), M=M, rng=rng)
        llr = log_likelihood_ratio(sample, hyp)
        alice = best_response_alice(posterior_from_llr(llr, priors).alpha0, R)
        truth = int(eve is EveAction.JAM)
        errors[t] = mpe_decide(llr, priors) != truth
        payoffs[t] = instantaneous_secrecy_rate(cfg, ch, alice, eve, clip=clip)
        moves.append(eve.value)
    return _aggregate(payoffs, moves, errors, M, keys=("E", "J"))
