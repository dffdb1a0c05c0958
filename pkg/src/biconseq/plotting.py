"""Figures for the report command. Rendering only, no logic."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from biconseq.theories import TheorySpace, maximal_pairs  # noqa: E402


def witness_trend(sizes, s_series, t_series, path, title="minimal witness size by truncation"):
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.plot(sizes, s_series, "o-", color="#b2182b", label="S: denied-side witness")
    ax.plot(sizes, t_series, "s--", color="#2166ac", label="T: premise witness")
    ax.plot(sizes, sizes, ":", color="0.6", lw=1, label="N")
    ax.set_xlabel("truncation N")
    ax.set_ylabel("witness size")
    ax.set_xticks(list(sizes))
    ax.set_title(title, fontsize=10)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def _label(space: TheorySpace, x) -> str:
    lang = space.lang
    if x.theorems == lang.full and x.antitheorems == lang.full:
        return "(L, L)"
    t1 = ",".join(lang.names(x.theorems)) or "∅"
    t0 = ",".join(lang.names(x.antitheorems)) or "∅"
    return f"({t1} | {t0})"


def hasse(space: TheorySpace, path, title="theory-pair lattice"):
    """Hasse diagram: rank by total size, edges for covering pairs only."""
    pairs = list(space)
    rank = {x: bin(x.theorems).count("1") + bin(x.antitheorems).count("1") for x in pairs}
    levels: dict[int, list] = {}
    for x in pairs:
        levels.setdefault(rank[x], []).append(x)
    pos = {}
    for r, row in sorted(levels.items()):
        row.sort()
        for i, x in enumerate(row):
            pos[x] = (i - (len(row) - 1) / 2, r)
    maxi = maximal_pairs(space)

    fig, ax = plt.subplots(figsize=(max(5, 1.6 * max(len(r) for r in levels.values())), 5))
    for x in pairs:
        for y in pairs:
            if x != y and x <= y and not any(
                z not in (x, y) and x <= z and z <= y for z in pairs
            ):
                ax.plot(*zip(pos[x], pos[y]), color="0.7", lw=1, zorder=1)
    for x in pairs:
        color = "#b2182b" if x in maxi else "#f7f7f7"
        ax.scatter(*pos[x], s=80, color=color, edgecolor="0.2", zorder=2)
        ax.annotate(_label(space, x), pos[x], xytext=(0, 7), textcoords="offset points",
                    ha="center", fontsize=7)
    ax.set_axis_off()
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
