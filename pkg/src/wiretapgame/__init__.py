"""Monte Carlo simulation and game solving for MIMO wiretap channels with a
dual-mode (eavesdrop/jam) adversary."""

from .channel import (
    AliceAction,
    ChannelSet,
    EveAction,
    PrecoderPair,
    ScenarioConfig,
    alice_covariance,
    bob_noise_cov,
    build_precoders,
    eve_noise_cov,
    sample_channel_block,
    sample_channels,
)
from .detection import (
    Beliefs,
    HypothesisPair,
    PlayResult,
    SensingSample,
    bob_hypotheses,
    eve_hypotheses,
    log_likelihood_ratio,
    mpe_decide,
    play_gamma_e3,
    play_gamma_e4,
    posterior,
    posterior_from_llr,
    simulate_sensing,
)
from .errors import (
    ConfigError,
    DegenerateGameError,
    InconsistentPayoffError,
    NumericalError,
    ScenarioParseError,
    WiretapGameError,
)
from .game import (
    EquilibriumKind,
    EquilibriumResult,
    Payoffs,
    SPEOutcome,
    best_response_alice,
    best_response_eve,
    mixed_ne,
    pure_ne,
    repeated_value,
    saddle_oracle,
    solve_strategic,
    spe_alice_first,
    spe_eve_first,
)
from .rates import (
    PayoffMatrix,
    PowerSplit,
    RateEstimate,
    ergodic_rate,
    instantaneous_secrecy_rate,
    optimize_power_split,
    payoff_matrix,
    rate_term,
)

__version__ = "0.1.0"
