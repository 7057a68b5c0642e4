"""Scenario files, parameter sweeps, and CSV emission.

Scenario files are flat `key = value` text (one pair per line, `#` comments).
Powers may be given in linear scale or with a `dB` suffix; dB-to-linear
conversion happens only at this boundary.  A sweep runs one payoff matrix
per swept value with a per-point seed derived from (base seed, point index),
so adding points never perturbs existing ones.
"""
from __future__ import annotations

import os
import tempfile
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .channel import ScenarioConfig
from .detection import play_gamma_e3, play_gamma_e4
from .errors import ConfigError, InconsistentPayoffError, ScenarioParseError
from .game import (
    EquilibriumKind,
    Payoffs,
    solve_strategic,
    spe_alice_first,
    spe_eve_first,
)
from .rates import PayoffMatrix, payoff_matrix

SWEEP_PARAMETERS = ("Pa", "Pe_over_Pa", "Ne_over_Na", "M")

# kind codes used in CSV output
EQ_KIND_CODE = {EquilibriumKind.PURE_AE: 0.0,
                EquilibriumKind.PURE_FJ: 1.0,
                EquilibriumKind.MIXED: 2.0}

OUTPUT_GROUPS = {
    "cells": ("R_FE", "R_FJ", "R_AE", "R_AJ", "rho_star", "d_star"),
    "equilibrium": ("eq_kind", "p_star", "q_star", "value"),
    "spe": ("spe_alice", "spe_eve"),
    "imperfect": ("gamma3_payoff", "gamma3_error", "gamma4_payoff", "gamma4_error"),
}
ALL_QUANTITIES = tuple(q for group in OUTPUT_GROUPS.values() for q in group)


@dataclass(frozen=True)
class SweepSpec:
    """A base scenario plus one swept parameter and the quantities to record."""

    base: ScenarioConfig
    parameter: str | None
    values: tuple[float, ...]
    outputs: tuple[str, ...]
    pe_over_pa: float | None = None
    sense_samples: int = 20
    clip_mode: str = "draw"

    def config_for(self, value: float) -> ScenarioConfig:
        """Scenario at one swept value (sweep coupling applied)."""
        cfg = self.base
        if self.parameter == "Pa":
            pe = self.pe_over_pa * value if self.pe_over_pa is not None else cfg.Pe
            cfg = replace(cfg, Pa=value, Pe=pe)
        elif self.parameter == "Pe_over_Pa":
            cfg = replace(cfg, Pe=value * cfg.Pa)
        elif self.parameter == "Ne_over_Na":
            ne = int(round(value * cfg.Na))
            if ne < 1:
                raise ConfigError(f"Ne_over_Na={value} yields Ne={ne} < 1")
            cfg = replace(cfg, Ne=ne)
        elif self.parameter == "M":
            if value < 0 or value != int(value):
                raise ConfigError(f"swept M must be a nonnegative integer, got {value}")
        elif self.parameter is not None:
            raise ConfigError(f"unknown swept parameter {self.parameter!r}")
        return cfg

    def samples_for(self, value: float) -> int:
        return int(value) if self.parameter == "M" else self.sense_samples


def _parse_number(token: str, key: str, line_no: int) -> float:
    """Parse a scalar, honoring a dB suffix (power dB: 10^(x/10))."""
    t = token.strip()
    is_db = t.lower().endswith("db")
    if is_db:
        t = t[:-2].strip()
    try:
        x = float(t)
    except ValueError:
        raise ScenarioParseError(
            f"line {line_no}: value {token!r} for key {key!r} is not a number") from None
    return 10.0 ** (x / 10.0) if is_db else x


_INT_KEYS = {"na", "nb", "ne", "d", "trials", "seed", "sense_samples"}
_FLOAT_KEYS = {"pa", "pe", "g1", "g2", "sigma_b2", "sigma_e2", "rho", "pe_over_pa"}
_LIST_KEYS = {"values", "outputs"}
_STR_KEYS = {"sweep", "clip"}
_KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _LIST_KEYS | _STR_KEYS
_REQUIRED_KEYS = ("na", "nb", "ne", "pa", "g1", "g2")


def parse_scenario(source: str | os.PathLike) -> SweepSpec:
    """Parse a scenario file path, or inline scenario text containing newlines."""
    text = str(source)
    if "\n" not in text and "=" not in text:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()

    raw: dict[str, tuple[str, int]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ScenarioParseError(f"line {line_no}: expected 'key = value', "
                                     f"got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip().lower()
        if key not in _KNOWN_KEYS:
            raise ScenarioParseError(f"line {line_no}: unknown key {key!r}")
        if key in raw:
            raise ScenarioParseError(f"line {line_no}: duplicate key {key!r}")
        raw[key] = (value.strip(), line_no)

    for key in _REQUIRED_KEYS:
        if key not in raw:
            raise ScenarioParseError(f"missing required key {key!r}")
    if "pe" in raw and "pe_over_pa" in raw:
        raise ScenarioParseError("give either 'pe' or 'pe_over_pa', not both")
    if "pe" not in raw and "pe_over_pa" not in raw:
        raise ScenarioParseError("missing required key 'pe' (or 'pe_over_pa')")

    def number(key: str, default=None) -> float | None:
        if key not in raw:
            return default
        value, line_no = raw[key]
        return _parse_number(value, key, line_no)

    def integer(key: str, default=None) -> int | None:
        if key not in raw:
            return default
        x = number(key)
        if x != int(x):
            line_no = raw[key][1]
            raise ScenarioParseError(f"line {line_no}: key {key!r} must be an "
                                     f"integer, got {raw[key][0]!r}")
        return int(x)

    pe_over_pa = number("pe_over_pa")
    pa = number("pa")
    pe = number("pe", default=None)
    if pe is None:
        pe = pe_over_pa * pa

    try:
        base = ScenarioConfig(
            Na=integer("na"), Nb=integer("nb"), Ne=integer("ne"),
            Pa=pa, Pe=pe,
            g1=number("g1"), g2=number("g2"),
            sigma_b2=number("sigma_b2", 1.0), sigma_e2=number("sigma_e2", 1.0),
            d=integer("d", 1), rho=number("rho", 0.5),
            trials=integer("trials", 5000), seed=integer("seed", 0),
        )
    except ConfigError as exc:
        raise ScenarioParseError(str(exc)) from exc

    parameter = raw.get("sweep", (None, 0))[0]
    if parameter is not None:
        matches = [p for p in SWEEP_PARAMETERS if p.lower() == parameter.lower()]
        if not matches:
            raise ScenarioParseError(
                f"line {raw['sweep'][1]}: sweep parameter must be one of "
                f"{SWEEP_PARAMETERS}, got {parameter!r}")
        parameter = matches[0]

    values: tuple[float, ...] = ()
    if "values" in raw:
        tokens, line_no = raw["values"]
        values = tuple(_parse_number(t, "values", line_no)
                       for t in tokens.split(",") if t.strip())
        if not values:
            raise ScenarioParseError(f"line {line_no}: 'values' list is empty")
        if list(values) != sorted(values):
            raise ScenarioParseError(f"line {line_no}: 'values' must be sorted "
                                     "ascending")
    if (parameter is None) != (not values):
        raise ScenarioParseError("'sweep' and 'values' must be given together")

    outputs: tuple[str, ...] = OUTPUT_GROUPS["cells"] + OUTPUT_GROUPS["equilibrium"]
    if "outputs" in raw:
        tokens, line_no = raw["outputs"]
        names: list[str] = []
        for tok in tokens.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if tok in OUTPUT_GROUPS:
                names.extend(OUTPUT_GROUPS[tok])
            elif tok in ALL_QUANTITIES:
                names.append(tok)
            else:
                raise ScenarioParseError(f"line {line_no}: unknown output {tok!r}")
        if not names:
            raise ScenarioParseError(f"line {line_no}: 'outputs' list is empty")
        outputs = tuple(dict.fromkeys(names))

    clip_mode = raw.get("clip", ("draw", 0))[0]
    if clip_mode not in ("draw", "mean"):
        raise ScenarioParseError(f"clip must be 'draw' or 'mean', got {clip_mode!r}")

    return SweepSpec(base=base, parameter=parameter, values=values,
                     outputs=outputs, pe_over_pa=pe_over_pa,
                     sense_samples=integer("sense_samples", 20),
                     clip_mode=clip_mode)


@dataclass(frozen=True)
class ResultRow:
    """One sweep point: swept value plus (mean, stderr) per requested quantity."""

    value: float
    quantities: dict[str, tuple[float, float]]
    seed: int
    trials: int


def point_seed(base_seed: int, index: int) -> int:
    """Stable per-point seed; independent of the other points."""
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1)[0])




def compute_row(spec: SweepSpec, index: int, value: float,
                trials: int | None = None) -> ResultRow:
    """Evaluate every requested quantity at one swept value."""
    cfg = spec.config_for(value)
    seed = point_seed(spec.base.seed, index)
    trials = trials or cfg.trials
    pm = payoff_matrix(cfg, trials=trials, seed=seed, clip_mode=spec.clip_mode)
    R = Payoffs.from_matrix(pm)
    tol = pm.ordering_tolerance()
    nan = (float("nan"), float("nan"))

    out: dict[str, tuple[float, float]] = {}
    for name in spec.outputs:
        if name in ("R_FE", "R_FJ", "R_AE", "R_AJ"):
            est = getattr(pm, name)
            out[name] = (est.mean, est.std_err)
        elif name == "rho_star":
            out[name] = (pm.rho_star, 0.0)
        elif name == "d_star":
            out[name] = (float(pm.d_star), 0.0)
        elif name in ("eq_kind", "p_star", "q_star", "value"):
            try:
                eq = solve_strategic(R, tol=tol)
            except InconsistentPayoffError as exc:
                warnings.warn(f"sweep value {value}: {exc}")
                out[name] = nan
                continue
            if name == "eq_kind":
                out[name] = (EQ_KIND_CODE[eq.kind], 0.0)
            else:
                out[name] = (float(getattr(eq, name)), 0.0)
        elif name in ("spe_alice", "spe_eve"):
            try:
                spe = (spe_alice_first if name == "spe_alice" else spe_eve_first)(R, tol=tol)
                out[name] = (spe.value, 0.0)
            except InconsistentPayoffError as exc:
                warnings.warn(f"sweep value {value}: {exc}")
                out[name] = nan
        elif name.startswith("gamma"):
            play = play_gamma_e3 if name.startswith("gamma3") else play_gamma_e4
            try:
                res = play(cfg, pm, M=spec.samples_for(value), trials=trials,
                           seed=seed + 1)
            except InconsistentPayoffError as exc:
                warnings.warn(f"sweep value {value}: {exc}")
                out[name] = nan
                continue
            if name.endswith("payoff"):
                out[name] = (res.payoff.mean, res.payoff.std_err)
            else:
                out[name] = (res.error_rate, 0.0)
        else:
            raise ConfigError(f"unknown output quantity {name!r}")
    return ResultRow(value=value, quantities=out, seed=seed, trials=trials)


def run_sweep(spec: SweepSpec, out_path: str | None = None,
              trials: int | None = None) -> list[ResultRow]:
    """Run all sweep points in order; optionally write the CSV atomically."""
    if spec.parameter is None or not spec.values:
        raise ConfigError("scenario has no sweep; add 'sweep' and 'values' keys")
    rows = [compute_row(spec, i, v, trials=trials)
            for i, v in enumerate(spec.values)]
    if out_path is not None:
        write_csv(rows, spec, out_path)
    return rows


def csv_header(spec: SweepSpec) -> str:
    cols = [spec.parameter or "value"]
    for name in spec.outputs:
        cols += [f"{name}_mean", f"{name}_stderr"]
    cols += ["seed", "trials"]
    return ",".join(cols)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def write_csv(rows: list[ResultRow], spec: SweepSpec, path: str) -> None:
    """Write rows as UTF-8 CSV; atomic replace so readers never see partials."""
    lines = [csv_header(spec)]
    for row in rows:
        cells = [_fmt(row.value)]
        for name in spec.outputs:
            mean, se = row.quantities[name]
            cells += [_fmt(mean), _fmt(se)]
        cells += [str(row.seed), str(row.trials)]
        lines.append(",".join(cells))
    data = "\n".join(lines) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_equilibrium(cfg: ScenarioConfig, trials: int | None = None,
                       d_candidates=None, clip_mode: str = "draw") -> str:
    """Human-readable summary: payoff table, equilibria, sequential outcomes."""
    pm = payoff_matrix(cfg, trials=trials, d_candidates=d_candidates,
                       clip_mode=clip_mode)
    R = Payoffs.from_matrix(pm)
    tol = pm.ordering_tolerance()
    lines = [
        f"scenario: Na={cfg.Na} Nb={cfg.Nb} Ne={cfg.Ne} Pa={cfg.Pa:g} Pe={cfg.Pe:g} "
        f"g1={cfg.g1:g} g2={cfg.g2:g} d={cfg.d} trials={pm.R_FE.trials} seed={cfg.seed}",
        f"power split: rho*={pm.rho_star:g}, d*={pm.d_star}",
        "payoffs (bits/channel use, mean +/- stderr):",
        f"              Eve: E                 Eve: J",
        f"  Alice F   {pm.R_FE.mean:8.4f} +/- {pm.R_FE.std_err:.4f}   "
        f"{pm.R_FJ.mean:8.4f} +/- {pm.R_FJ.std_err:.4f}",
        f"  Alice A   {pm.R_AE.mean:8.4f} +/- {pm.R_AE.std_err:.4f}   "
        f"{pm.R_AJ.mean:8.4f} +/- {pm.R_AJ.std_err:.4f}",
    ]
    if pm.rho_star == 1.0 and pm.d_star == cfg.r:
        lines.append("note: the optimal split is full power (rho*=1, d*=r); "
                     "the A row coincides with the F row")
    try:
        eq = solve_strategic(R, tol=tol)
    except InconsistentPayoffError as exc:
        lines.append(f"equilibrium: unavailable ({exc})")
        return "\n".join(lines)
    lines.append(f"simultaneous play: {eq.kind.value}  "
                 f"p*={eq.p_star:.4f} (Alice plays F)  "
                 f"q*={eq.q_star:.4f} (Eve plays E)  value={eq.value:.4f}")
    if eq.degenerate:
        lines.append("note: both pure saddle conditions hold (tied cells); "
                     "the AE equilibrium was selected")
    spe1 = spe_alice_first(R, tol=tol)
    spe2 = spe_eve_first(R, tol=tol)
    lines.append(f"Alice moves first: path "
                 f"{'->'.join(a.value for a in spe1.path)}, value {spe1.value:.4f}")
    lines.append(f"Eve moves first:   path "
                 f"{'->'.join(a.value for a in spe2.path)}, value {spe2.value:.4f}")
    return "\n".join(lines)
