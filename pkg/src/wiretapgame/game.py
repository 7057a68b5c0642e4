"""Solvers for the 2x2 zero-sum game between Alice (rows F/A, maximizer) and
Eve (columns E/J, minimizer), in strategic and extensive form.

Payoff cells are plain floats here; Monte Carlo standard errors are carried
separately by the rate engine and ignored by equilibrium computation.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import AliceAction, EveAction
from .errors import ConfigError, DegenerateGameError, InconsistentPayoffError


@dataclass(frozen=True)
class Payoffs:
    """The four secrecy-rate cells R_xy (Alice action x, Eve action y)."""

    R_FE: float
    R_FJ: float
    R_AE: float
    R_AJ: float

    @classmethod
    def from_matrix(cls, pm) -> "Payoffs":
        """Extract cell means from a PayoffMatrix-like object."""
        return cls(R_FE=pm.R_FE.mean, R_FJ=pm.R_FJ.mean,
                   R_AE=pm.R_AE.mean, R_AJ=pm.R_AJ.mean)

    def as_array(self) -> np.ndarray:
        """Rows (F, A) x columns (E, J)."""
        return np.array([[self.R_FE, self.R_FJ], [self.R_AE, self.R_AJ]])


class EquilibriumKind(Enum):
    PURE_AE = "PureAE"
    PURE_FJ = "PureFJ"
    MIXED = "Mixed"


@dataclass(frozen=True)
class EquilibriumResult:
    """p_star = probability Alice plays F, q_star = probability Eve plays E."""

    kind: EquilibriumKind
    p_star: float
    q_star: float
    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class SPEOutcome:
    """Backward-induction outcome of a perfect-information sequential game."""

    first_mover: str                 # "Alice" or "Eve"
    path: tuple                     # actions in move order
    value: float


def check_properties(R: Payoffs, tol: float = 1e-9) -> None:
    """Verify R_FE <= R_AE and R_AJ <= R_FJ (within tol), else raise."""
    if R.R_FE > R.R_AE + tol:
        raise InconsistentPayoffError(
            f"R_FE={R.R_FE} exceeds R_AE={R.R_AE}: the power-split search "
            "should never do worse than full power against a listener")
    if R.R_AJ > R.R_FJ + tol:
        raise InconsistentPayoffError(
            f"R_AJ={R.R_AJ} exceeds R_FJ={R.R_FJ}: diverting power to "
            "interference cannot help against a jammer")


def pure_ne(R: Payoffs, tol: float = 1e-9) -> EquilibriumResult | None:
    """Pure saddle point, if one exists.

    R_AE is an equilibrium when R_AE <= R_AJ; R_FJ when R_FJ <= R_FE.  When
    both conditions hold (fully tied matrix) the AE equilibrium is returned
    with the degenerate flag set.
    """
    check_properties(R, tol=tol)
    ae = R.R_AE <= R.R_AJ
    fj = R.R_FJ <= R.R_FE
    if ae:
        return EquilibriumResult(EquilibriumKind.PURE_AE, p_star=0.0, q_star=1.0,
                                 value=R.R_AE, degenerate=fj)
    if fj:
        return EquilibriumResult(EquilibriumKind.PURE_FJ, p_star=1.0, q_star=0.0,
                                 value=R.R_FJ)
    return None


def mixed_ne(R: Payoffs, tol: float = 1e-9) -> EquilibriumResult:
    """Closed-form mixed equilibrium; requires that no pure saddle point exists."""
    if pure_ne(R, tol=tol) is not None:
        raise ConfigError("game has a pure saddle point; mixed_ne does not apply")
    D = R.R_FE + R.R_AJ - R.R_FJ - R.R_AE
    if abs(D) < 1e-15:
        raise DegenerateGameError("payoff cells are tied; mixing is undefined")
    p = (R.R_AJ - R.R_AE) / D
    q = (R.R_AJ - R.R_FJ) / D
    if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
        # only reachable when the rate orderings are (slightly) violated
        raise DegenerateGameError(
            f"closed-form mixing probabilities ({p:.4f}, {q:.4f}) fall outside "
            "(0, 1); the cell orderings do not support an interior equilibrium")
    v = (R.R_FE * R.R_AJ - R.R_FJ * R.R_AE) / D
    return EquilibriumResult(EquilibriumKind.MIXED, p_star=p, q_star=q, value=v)


def _pure_saddle_scan(R: Payoffs) -> EquilibriumResult | None:
    """Best-response scan of the four cells, for payoffs that escape the
    standard taxonomy because an ordering is marginally violated."""
    arr = R.as_array()
    for i in (0, 1):
        for j in (0, 1):
            if arr[i, j] >= arr[1 - i, j] and arr[i, j] <= arr[i, 1 - j]:
                if (i, j) == (1, 0):
                    return EquilibriumResult(EquilibriumKind.PURE_AE, 0.0, 1.0,
                                             value=R.R_AE)
                if (i, j) == (0, 1):
                    return EquilibriumResult(EquilibriumKind.PURE_FJ, 1.0, 0.0,
                                             value=R.R_FJ)
                # off-taxonomy saddles are encoded as boundary mixtures
                p, q = 1.0 - i, 1.0 - j
                return EquilibriumResult(EquilibriumKind.MIXED, float(p), float(q),
                                         value=float(arr[i, j]), degenerate=True)
    return None


def solve_strategic(R: Payoffs, tol: float = 1e-9) -> EquilibriumResult:
    """Unique equilibrium of the simultaneous-move game.

    `tol` is the allowance for the rate-ordering sanity checks (use the
    estimates' standard errors for Monte Carlo cells).  Cells that violate an
    ordering within tol are resolved by a direct best-response scan.
    """
    eq = pure_ne(R, tol=tol)
    if eq is not None:
        return eq
    try:
        return mixed_ne(R, tol=tol)
    except DegenerateGameError:
        eq = _pure_saddle_scan(R)
        if eq is None:
            raise
        return eq


def expected_payoff(R: Payoffs, p: float, q: float) -> float:
    """Alice's expected payoff when she plays F w.p. p and Eve plays E w.p. q."""
    return (p * q * R.R_FE + p * (1 - q) * R.R_FJ
            + (1 - p) * q * R.R_AE + (1 - p) * (1 - q) * R.R_AJ)


def saddle_oracle(R: Payoffs, grid_step: float = 0.001) -> tuple[float, float, float]:
    """Brute-force maximin over a (p, q) grid; test oracle for solve_strategic."""
    if not 0.0 < grid_step <= 0.5:
        raise ConfigError(f"grid_step must lie in (0, 0.5], got {grid_step}")
    grid = np.arange(0.0, 1.0 + grid_step / 2, grid_step)
    grid = np.minimum(grid, 1.0)
    # payoff(p, q) is bilinear: evaluate row payoffs against every q at once
    row_f = grid * R.R_FE + (1 - grid) * R.R_FJ          # play F vs q
    row_a = grid * R.R_AE + (1 - grid) * R.R_AJ          # play A vs q
    payoff = grid[:, None] * row_f[None, :] + (1 - grid)[:, None] * row_a[None, :]
    inner_min = payoff.min(axis=1)
    i = int(np.argmax(inner_min))
    j = int(np.argmin(payoff[i]))
    return float(grid[i]), float(grid[j]), float(inner_min[i])


def _eve_subgame(R: Payoffs, alice: AliceAction) -> tuple[EveAction, float]:
    """Eve's best response once Alice's move is known; ties prefer E."""
    r_e = R.R_FE if alice == AliceAction.FULL_POWER else R.R_AE
    r_j = R.R_FJ if alice == AliceAction.FULL_POWER else R.R_AJ
    return (EveAction.EAVESDROP, r_e) if r_e <= r_j else (EveAction.JAM, r_j)


def _alice_subgame(R: Payoffs, eve: EveAction) -> tuple[AliceAction, float]:
    """Alice's best response once Eve's move is known; ties follow P1/P2."""
    if eve == EveAction.EAVESDROP:
        if R.R_AE >= R.R_FE:
            return AliceAction.ARTIFICIAL_NOISE, R.R_AE
        return AliceAction.FULL_POWER, R.R_FE
    if R.R_FJ >= R.R_AJ:
        return AliceAction.FULL_POWER, R.R_FJ
    return AliceAction.ARTIFICIAL_NOISE, R.R_AJ


def spe_alice_first(R: Payoffs, tol: float = 1e-9) -> SPEOutcome:
    """Backward induction when Alice commits first and Eve observes her move."""
    check_properties(R, tol=tol)
    candidates = []
    for a in (AliceAction.FULL_POWER, AliceAction.ARTIFICIAL_NOISE):
        e, val = _eve_subgame(R, a)
        candidates.append((val, a, e))
    val, a, e = max(candidates, key=lambda c: c[0])
    return SPEOutcome(first_mover="Alice", path=(a, e), value=val)


def spe_eve_first(R: Payoffs, tol: float = 1e-9) -> SPEOutcome:
    """Backward induction when Eve commits first; the value is min(R_FJ, R_AE)."""
    check_properties(R, tol=tol)
    candidates = []
    for e in (EveAction.EAVESDROP, EveAction.JAM):
        a, val = _alice_subgame(R, e)
        candidates.append((val, e, a))
    # Eve minimizes; tie prefers E (listed first, min is stable)
    val, e, a = min(candidates, key=lambda c: c[0])
    return SPEOutcome(first_mover="Eve", path=(e, a), value=val)


def repeated_value(R: Payoffs, delta: float, horizon: int | None = None,
                   tol: float = 1e-9) -> float:
    """Normalized discounted payoff of the repeated game.

    Stage play is the constant single-stage equilibrium value, so the
    normalized sum equals that value for any horizon and any delta in [0, 1).
    """
    if not 0.0 <= delta < 1.0:
        raise ConfigError(f"discount factor must lie in [0, 1), got {delta}")
    if horizon is not None and horizon < 1:
        raise ConfigError(f"horizon must be >= 1, got {horizon}")
    v = solve_strategic(R, tol=tol).value
    if horizon is None:
        return v
    weights = delta ** np.arange(horizon)
    return float(np.sum(weights * v) / np.sum(weights))


def alice_threshold(R: Payoffs) -> float:
    """Belief level at which Alice is indifferent between F and A."""
    den = R.R_AE - R.R_FE + R.R_FJ - R.R_AJ
    if den <= 0.0:
        raise DegenerateGameError("both rate orderings are tied; belief "
                                  "thresholds are undefined")
    return (R.R_FJ - R.R_AJ) / den


def eve_threshold(R: Payoffs) -> float:
    """Belief level at which Eve is indifferent between E and J."""
    den = R.R_AE - R.R_FE + R.R_FJ - R.R_AJ
    if den <= 0.0:
        raise DegenerateGameError("both rate orderings are tied; belief "
                                  "thresholds are undefined")
    return (R.R_AE - R.R_AJ) / den


def best_response_alice(alpha0: float, R: Payoffs) -> AliceAction:
    """Alice's best response to her posterior alpha0 that Eve eavesdropped.

    F at or below the indifference threshold, A above it.  With fully tied
    cells both actions pay the same and F is returned.
    """
    if not 0.0 <= alpha0 <= 1.0:
        raise ConfigError(f"alpha0 must lie in [0, 1], got {alpha0}")
    try:
        thr = alice_threshold(R)
    except DegenerateGameError:
        return AliceAction.FULL_POWER
    return AliceAction.FULL_POWER if alpha0 <= thr else AliceAction.ARTIFICIAL_NOISE


def best_response_eve(alpha0: float, R: Payoffs) -> EveAction:
    """Eve's best response to her posterior alpha0 that Alice used full power.

    J below the indifference threshold, E at or above it: certainty of full
    power (alpha0=1) must trigger eavesdropping whenever R_FE <= R_FJ, and
    certainty of artificial noise (alpha0=0) must trigger jamming.
    """
    if not 0.0 <= alpha0 <= 1.0:
        raise ConfigError(f"alpha0 must lie in [0, 1], got {alpha0}")
    try:
        thr = eve_threshold(R)
    except DegenerateGameError:
        return EveAction.EAVESDROP
    return EveAction.EAVESDROP if alpha0 >= thr else EveAction.JAM
