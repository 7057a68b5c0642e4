"""Random MIMO channels, singular-vector precoders, and covariance assembly.

The simplified transmit model: Alice splits her power budget Pa between a
d-stream data signal (fraction rho, uniform power rho*Pa/d per stream) and an
artificial-interference signal spread uniformly over the remaining Na-d
transmit dimensions (eta = (1-rho)*Pa/(Na-d) per dimension).  Data and
interference precoders are disjoint sets of right singular vectors of the
main channel, so the interference is invisible to Bob.  Eve either listens
through a sqrt(g1) receive gain or jams Bob isotropically with power Pe
through a sqrt(g2) transmit gain.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import ConfigError


class AliceAction(str, Enum):
    FULL_POWER = "F"
    ARTIFICIAL_NOISE = "A"


class EveAction(str, Enum):
    EAVESDROP = "E"
    JAM = "J"


@dataclass(frozen=True)
class ScenarioConfig:
    """All scenario parameters, powers and gains in linear scale."""

    Na: int
    Nb: int
    Ne: int
    Pa: float
    Pe: float
    g1: float
    g2: float
    sigma_b2: float = 1.0
    sigma_e2: float = 1.0
    d: int = 1
    rho: float = 1.0
    trials: int = 5000
    seed: int = 0

    def __post_init__(self):
        if min(self.Na, self.Nb, self.Ne) < 1:
            raise ConfigError(f"antenna counts must be >= 1, got "
                              f"Na={self.Na}, Nb={self.Nb}, Ne={self.Ne}")
        for name in ("Pa", "Pe", "g1", "g2", "sigma_b2", "sigma_e2"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 1 <= self.d <= self.r:
            raise ConfigError(f"d must satisfy 1 <= d <= min(Na, Nb) = {self.r}, "
                              f"got d={self.d}")
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError(f"rho must lie in [0, 1], got {self.rho}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")

    @property
    def r(self) -> int:
        return min(self.Na, self.Nb)

    def effective(self, alice: AliceAction) -> tuple[int, float]:
        """(d, rho) actually transmitted: full power forces (r, 1)."""
        if alice == AliceAction.FULL_POWER:
            return self.r, 1.0
        return self.d, self.rho

    def with_split(self, rho: float, d: int) -> "ScenarioConfig":
        return replace(self, rho=rho, d=d)


@dataclass(frozen=True)
class ChannelSet:
    """One draw (or a stack of draws) of the three channel matrices.

    Arrays may carry leading batch dimensions; the trailing two are
    (Nb, Na), (Nb, Ne) and (Ne, Na) respectively.
    """

    H_ba: np.ndarray
    H_be: np.ndarray
    H_ea: np.ndarray


@dataclass(frozen=True)
class PrecoderPair:
    """Orthonormal data/interference precoders: [T Tp] is unitary."""

    T: np.ndarray
    Tp: np.ndarray


def herm(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose over the trailing two axes."""
    return a.conj().swapaxes(-1, -2)


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0, 1) entries: real and imaginary parts each N(0, 1/2)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent per-trial stream; reproducible for a fixed (seed, trial)."""
    return np.random.default_rng((seed, trial))


def sample_channels(cfg: ScenarioConfig, rng: np.random.Generator) -> ChannelSet:
    """Draw one i.i.d. CN(0,1) realization of the three channels."""
    return ChannelSet(
        H_ba=complex_normal(rng, (cfg.Nb, cfg.Na)),
        H_be=complex_normal(rng, (cfg.Nb, cfg.Ne)),
        H_ea=complex_normal(rng, (cfg.Ne, cfg.Na)),
    )


def sample_channel_block(cfg: ScenarioConfig, trials: int, seed: int) -> ChannelSet:
    """Stack of `trials` independent draws, one RNG stream per trial.

    Trial t depends only on (seed, t), so extending a run never perturbs
    earlier draws and trials can be evaluated in parallel.
    """
    H_ba = np.empty((trials, cfg.Nb, cfg.Na), dtype=complex)
    H_be = np.empty((trials, cfg.Nb, cfg.Ne), dtype=complex)
    H_ea = np.empty((trials, cfg.Ne, cfg.Na), dtype=complex)
    for t in range(trials):
        ch = sample_channels(cfg, trial_rng(seed, t))
        H_ba[t], H_be[t], H_ea[t] = ch.H_ba, ch.H_be, ch.H_ea
    return ChannelSet(H_ba=H_ba, H_be=H_be, H_ea=H_ea)


def _fix_phases(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    idx = np.argmax(np.abs(V), axis=-2)
    anchor = np.take_along_axis(V, idx[..., None, :], axis=-2)
    mag = np.abs(anchor)
    phase = np.where(mag > 0, anchor / np.where(mag > 0, mag, 1.0), 1.0)
    return V * phase.conj()


def build_precoders(H_ba: np.ndarray, d: int) -> PrecoderPair:
    """Split the right singular vectors of H_ba into data and interference bases.

    T spans the d dominant right singular directions, Tp the remaining Na-d.
    Columns are phase-fixed for determinism; with repeated singular values any
    orthonormal basis of the invariant subspace may be returned.
    """
    Na = H_ba.shape[-1]
    Nb = H_ba.shape[-2]
    if not 1 <= d <= min(Na, Nb):
        raise ConfigError(f"d={d} out of range for a {Nb}x{Na} channel")
    if not np.all(np.isfinite(H_ba)):
        raise ConfigError("channel matrix contains non-finite entries")
    # full_matrices keeps the null-space directions needed for interference
    _, _, Vh = np.linalg.svd(H_ba, full_matrices=True)
    V = _fix_phases(herm(Vh))
    return PrecoderPair(T=V[..., :, :d], Tp=V[..., :, d:])


def interference_power(cfg: ScenarioConfig, d: int, rho: float) -> float:
    """Per-dimension artificial-interference power (1-rho)Pa/(Na-d)."""
    if d == cfg.Na:
        if rho < 1.0:
            raise ConfigError(
                "d equals Na: no transmit dimensions left for interference "
                "(rho < 1 is infeasible)")
        return 0.0
    return (1.0 - rho) * cfg.Pa / (cfg.Na - d)


def alice_covariance(cfg: ScenarioConfig, pre: PrecoderPair,
                     alice: AliceAction) -> np.ndarray:
    """Transmit covariance Q_a = (rho Pa/d) T T^H + eta Tp Tp^H; trace = Pa."""
    d, rho = cfg.effective(alice)
    if pre.T.shape[-1] != d:
        raise ConfigError(f"precoder has {pre.T.shape[-1]} data columns, "
                          f"expected {d} for action {alice.value}")
    eta = interference_power(cfg, d, rho)
    Qa = (rho * cfg.Pa / d) * (pre.T @ herm(pre.T))
    if eta > 0.0:
        Qa = Qa + eta * (pre.Tp @ herm(pre.Tp))
    return Qa


def bob_noise_cov(cfg: ScenarioConfig, ch: ChannelSet,
                  eve: EveAction) -> np.ndarray:
    """Interference-plus-noise covariance at Bob: jamming raises sigma_b^2 I."""
    eye = np.eye(cfg.Nb)
    if eve == EveAction.EAVESDROP:
        return cfg.sigma_b2 * eye
    coeff = cfg.g2 * cfg.Pe / cfg.Ne
    if coeff == 0.0:
        return cfg.sigma_b2 * eye
    return coeff * (ch.H_be @ herm(ch.H_be)) + cfg.sigma_b2 * eye


def eve_noise_cov(cfg: ScenarioConfig, ch: ChannelSet, pre: PrecoderPair,
                  alice: AliceAction) -> np.ndarray:
    """Interference-plus-noise covariance at Eve; sigma_e^2 I under full power."""
    d, rho = cfg.effective(alice)
    eye = np.eye(cfg.Ne)
    coeff = cfg.g1 * interference_power(cfg, d, rho)
    if coeff == 0.0:
        return cfg.sigma_e2 * eye
    G = ch.H_ea @ pre.Tp
    return coeff * (G @ herm(G)) + cfg.sigma_e2 * eye
