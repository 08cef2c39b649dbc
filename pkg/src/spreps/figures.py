"""Matplotlib figure rendering for the report path.

Figures are written next to the delimited output with deterministic bytes
(fixed dpi, no embedded software metadata).
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_SAVE_KW = dict(dpi=110, metadata={"Software": None})


def _finish(fig, outdir: str, name: str) -> str:
    path = os.path.join(outdir, f"{name}.png")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path


def orbit_census(rows, outdir: str, name: str = "forms_orbits") -> str:
    """Bar chart of orbit sizes by label, closed form vs enumeration."""
    labels = [r[2] for r in rows]
    closed = [r[4] for r in rows]
    enum = [r[5] for r in rows]
    x = range(len(labels))
    fig, ax = plt.subplots(figsize=(6, 3.4))
    ax.bar([i - 0.18 for i in x], closed, width=0.36, label="closed form")
    ax.bar([i + 0.18 for i in x], enum, width=0.36, label="enumerated")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels)
    ax.set_xlabel("orbit (rank, type)")
    ax.set_ylabel("count")
    ax.set_yscale("log")
    ax.legend()
    return _finish(fig, outdir, name)


def heisenberg_census(row, outdir: str, name: str = "heisenberg_census") -> str:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(["linear", "dim q^n"], [row["linear"], row["big"]])
    ax.set_ylabel("number of irreducibles")
    ax.set_title(f"Irr(H) census, n={row['n']}, q={row['q']}")
    return _finish(fig, outdir, name)


def even_odd_dims(rows, outdir: str, name: str = "weil_even_odd") -> str:
    """Grouped bars of the two central-eigenspace dimensions."""
    labels = [f"a={r[2]}" for r in rows]
    plus = [r[3] for r in rows]
    minus = [r[4] for r in rows]
    x = range(len(labels))
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar([i - 0.18 for i in x], plus, width=0.36, label="center acts +1")
    ax.bar([i + 0.18 for i in x], minus, width=0.36, label="center acts -1")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels)
    ax.set_ylabel("dimension")
    ax.legend()
    return _finish(fig, outdir, name)


def rank_scatter(rows, q: int, outdir: str, name: str = "rank_table") -> str:
    """log_q(dim) against rank, one marker per irreducible."""
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    xs = [r["rank"] for r in rows]
    ys = [math.log(r["dim"], q) for r in rows]
    colors = {"none": "tab:gray", "plus": "tab:blue", "minus": "tab:red",
              "both": "tab:purple"}
    cs = [colors[r["type"]] for r in rows]
    ax.scatter(xs, ys, c=cs, s=28)
    ax.set_xlabel("rank")
    ax.set_ylabel(f"log_{q}(dim)")
    ax.set_xticks(sorted(set(xs)))
    for typ, col in colors.items():
        ax.scatter([], [], c=col, label=typ)
    ax.legend(fontsize=8)
    return _finish(fig, outdir, name)


def eta_ratios(rows, outdir: str, name: str = "eta_ratios") -> str:
    """dim eta / (dim tau * orbit size) against the estimate bound."""
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    xs = list(range(len(rows)))
    ratios = [float(r[9]) for r in rows]
    bounds = [float(r[10]) for r in rows]
    ax.scatter(xs, ratios, label="ratio", zorder=3)
    ax.plot(xs, bounds, "k--", label="upper bound")
    ax.axhline(1.0, color="k", linewidth=0.8, label="lower bound")
    ax.set_xticks(xs)
    ax.set_xticklabels([f"{r[3]}:t{r[4]}" for r in rows], fontsize=7)
    ax.set_ylabel("dimension ratio")
    ax.legend(fontsize=8)
    return _finish(fig, outdir, name)


def ore_ratios(rows, q: int, outdir: str, name: str = "ore_ratios") -> str:
    """Character ratios at the transvection against the dimension bucket."""
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    xs = [r["bucket"] for r in rows]
    ys = [r["ratio_float"] for r in rows]
    ax.scatter(xs, ys, facecolors="none", edgecolors="tab:blue")
    ax.axhline(0.0, color="k", linewidth=0.8)
    ax.set_xlabel(f"nearest integer to log_{q}(dim)")
    ax.set_ylabel("character ratio at transvection")
    ax.set_xticks(sorted(set(xs)))
    return _finish(fig, outdir, name)


def ore_deviation(rows, outdir: str, name: str = "ore_deviation") -> str:
    """Commutator-density deviation per conjugacy class."""
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    xs = [r["class"] for r in rows]
    ys = [r["deviation_float"] for r in rows]
    ax.bar(xs, ys)
    ax.set_xlabel("conjugacy class")
    ax.set_ylabel("sum of character ratios (g != 1 ideally small)")
    return _finish(fig, outdir, name)
