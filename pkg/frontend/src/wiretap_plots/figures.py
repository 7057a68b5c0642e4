"""Render figures from wiretapgame sweep CSVs.

Input is always a CSV produced by the simulator (`wiretapgame sweep` or
`wiretapgame oracle --grid-out`); this package never calls the simulator.
Every renderer returns the exact series it drew, keyed by legend label, so
tests can compare plotted data against the CSV columns directly.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

FIGURE_KINDS = ("rates_vs_sweep", "mixing_probs", "spe_compare",
                "imperfect_compare", "saddle_surface")

# eq_kind column coding used by the simulator
KIND_LABELS = {0.0: "pure (A,E)", 1.0: "pure (F,J)", 2.0: "mixed"}


class MissingColumnError(KeyError):
    """The CSV lacks a column the figure kind needs."""


class EmptyCsvError(ValueError):
    """The CSV has a header but no data rows."""


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    kind: str
    out_path: str
    x_label: str | None = None
    y_label: str | None = None
    title: str | None = None


def read_csv(path: str) -> dict[str, np.ndarray]:
    """Load a sweep CSV into float arrays keyed by column name."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyCsvError(f"{path} is empty") from None
        rows = [row for row in reader if row]
    if not rows:
        raise EmptyCsvError(f"{path} has no data rows")
    data = np.array([[float(cell) for cell in row] for row in rows])
    return {name: data[:, i] for i, name in enumerate(header)}


def _need(data: dict[str, np.ndarray], names: list[str], kind: str) -> None:
    missing = [n for n in names if n not in data]
    if missing:
        raise MissingColumnError(
            f"figure kind {kind!r} needs columns {missing}; "
            f"available: {sorted(data)}")


def _x_column(data: dict[str, np.ndarray]) -> tuple[str, np.ndarray]:
    name = next(iter(data))
    return name, data[name]


def _transition_marks(ax, x, kinds) -> None:
    """Dashed red verticals where the equilibrium regime changes."""
    for i in range(1, len(kinds)):
        if kinds[i] != kinds[i - 1]:
            ax.axvline(0.5 * (x[i] + x[i - 1]), color="red", linestyle="--",
                       linewidth=1.0, alpha=0.8)


def _errorbar(ax, x, data, name, label, series):
    ax.errorbar(x, data[f"{name}_mean"], yerr=data[f"{name}_stderr"],
                marker="o", markersize=3, capsize=2, label=label)
    series[label] = data[f"{name}_mean"]


def _render_rates(ax_rates, ax_mix, data, kind, series):
    xname, x = _x_column(data)
    cells = ["R_FE", "R_FJ", "R_AE", "R_AJ"]
    _need(data, [f"{c}_mean" for c in cells] + [f"{c}_stderr" for c in cells],
          kind)
    for c in cells:
        _errorbar(ax_rates, x, data, c, c, series)
    if "value_mean" in data:
        ax_rates.plot(x, data["value_mean"], color="red", linestyle="--",
                      label="equilibrium value")
        series["equilibrium value"] = data["value_mean"]
    if "eq_kind_mean" in data:
        _transition_marks(ax_rates, x, data["eq_kind_mean"])
    ax_rates.set_xlabel(xname)
    ax_rates.set_ylabel("secrecy rate [bits/channel use]")
    ax_rates.legend(fontsize=8)
    ax_rates.grid(True, alpha=0.3)

    if ax_mix is not None:
        _need(data, ["p_star_mean", "q_star_mean"], kind)
        ax_mix.plot(x, data["p_star_mean"], marker="o", markersize=3,
                    label="p* (Alice: full power)")
        ax_mix.plot(x, data["q_star_mean"], marker="s", markersize=3,
                    label="q* (Eve: eavesdrop)")
        series["p*"] = data["p_star_mean"]
        series["q*"] = data["q_star_mean"]
        if "eq_kind_mean" in data:
            _transition_marks(ax_mix, x, data["eq_kind_mean"])
        ax_mix.set_xlabel(xname)
        ax_mix.set_ylabel("mixing probability")
        ax_mix.set_ylim(-0.05, 1.05)
        ax_mix.legend(fontsize=8)
        ax_mix.grid(True, alpha=0.3)


def render(spec: PlotSpec) -> dict[str, np.ndarray]:
    """Draw one figure, write it to spec.out_path, return the plotted series."""
    if spec.kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {spec.kind!r}; "
                         f"choose from {FIGURE_KINDS}")
    data = read_csv(spec.csv_path)
    series: dict[str, np.ndarray] = {}

    if spec.kind == "saddle_surface":
        _need(data, ["p", "q", "value"], spec.kind)
        p, q, v = data["p"], data["q"], data["value"]
        pu, qu = np.unique(p), np.unique(q)
        grid = v.reshape(pu.size, qu.size)
        fig = plt.figure(figsize=(6, 5))
        ax = fig.add_subplot(projection="3d")
        P, Q = np.meshgrid(pu, qu, indexing="ij")
        ax.plot_surface(P, Q, grid, cmap="viridis", linewidth=0,
                        antialiased=True, alpha=0.9)
        ax.set_xlabel(spec.x_label or "p (Alice plays F)")
        ax.set_ylabel(spec.y_label or "q (Eve plays E)")
        ax.set_zlabel("value [bits/channel use]")
        series.update({"p": p, "q": q, "value": v})

    elif spec.kind == "rates_vs_sweep":
        two_panel = "p_star_mean" in data and "q_star_mean" in data
        if two_panel:
            fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.5, 7.5))
            _render_rates(ax1, ax2, data, spec.kind, series)
        else:
            fig, ax1 = plt.subplots(figsize=(6.5, 4.5))
            _render_rates(ax1, None, data, spec.kind, series)

    elif spec.kind == "mixing_probs":
        _need(data, ["p_star_mean", "q_star_mean"], spec.kind)
        xname, x = _x_column(data)
        fig, ax = plt.subplots(figsize=(6.5, 4.0))
        ax.plot(x, data["p_star_mean"], marker="o", markersize=3,
                label="p* (Alice: full power)")
        ax.plot(x, data["q_star_mean"], marker="s", markersize=3,
                label="q* (Eve: eavesdrop)")
        series["p*"] = data["p_star_mean"]
        series["q*"] = data["q_star_mean"]
        if "eq_kind_mean" in data:
            _transition_marks(ax, x, data["eq_kind_mean"])
        ax.set_xlabel(spec.x_label or xname)
        ax.set_ylabel("mixing probability")
        ax.set_ylim(-0.05, 1.05)
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)

    elif spec.kind == "spe_compare":
        _need(data, ["spe_alice_mean", "spe_eve_mean"], spec.kind)
        xname, x = _x_column(data)
        fig, ax = plt.subplots(figsize=(6.5, 4.5))
        ax.plot(x, data["spe_alice_mean"], color="red", linestyle="--",
                marker="v", markersize=4, label="Alice moves first")
        ax.plot(x, data["spe_eve_mean"], color="blue", linestyle="--",
                marker="^", markersize=4, label="Eve moves first")
        series["Alice moves first"] = data["spe_alice_mean"]
        series["Eve moves first"] = data["spe_eve_mean"]
        if "value_mean" in data:
            ax.plot(x, data["value_mean"], color="black", marker=".",
                    label="simultaneous value")
            series["simultaneous value"] = data["value_mean"]
        if "eq_kind_mean" in data:
            _transition_marks(ax, x, data["eq_kind_mean"])
        ax.set_xlabel(spec.x_label or xname)
        ax.set_ylabel("equilibrium rate [bits/channel use]")
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)

    elif spec.kind == "imperfect_compare":
        _need(data, ["gamma4_payoff_mean", "value_mean"], spec.kind)
        xname, x = _x_column(data)
        fig, ax = plt.subplots(figsize=(6.5, 4.5))
        ax.plot(x, data["value_mean"], color="black", linestyle=":",
                label="no information (mixed value)")
        series["no information (mixed value)"] = data["value_mean"]
        _errorbar(ax, x, data, "gamma4_payoff",
                  "belief play (ally senses for Alice)", series)
        if "gamma3_payoff_mean" in data:
            _errorbar(ax, x, data, "gamma3_payoff",
                      "belief play (adversary senses)", series)
        for col, label in (("spe_alice_mean", "perfect info, Alice first"),
                           ("spe_eve_mean", "perfect info, Eve first")):
            if col in data:
                ax.plot(x, data[col], linestyle="--", label=label)
                series[label] = data[col]
        ax.set_xlabel(spec.x_label or xname)
        ax.set_ylabel("expected payoff [bits/channel use]")
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)

    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return series
