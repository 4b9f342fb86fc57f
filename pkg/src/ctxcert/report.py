"""Figure rendering for the report path.

The core modules stay plotting-free; these helpers take the same rows that go
into the plot-data CSV files and render them to image files, so every figure
can also be regenerated externally from the CSVs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

_CONTEXT_COLORS = ["#4878cf", "#ee854a", "#6acc65", "#d65f5f",
                   "#956cb4", "#8c613c", "#dc7ec0", "#797979"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_vertex_probabilities(rows: list[dict[str, Any]], path: str | Path,
                                classical_bound: float | None = None,
                                quantum_bound: float | None = None) -> None:
    """Bar chart of per-event probabilities, colored by context.

    ``rows`` need keys ``vertex`` (1-based), ``context`` (1-based), ``p`` and
    optionally ``stderr``; context sums are annotated above each group.
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8.0, 4.0))
    contexts = sorted({int(r["context"]) for r in rows})
    sums = {c: 0.0 for c in contexts}
    for row in rows:
        c = int(row["context"])
        color = _CONTEXT_COLORS[(c - 1) % len(_CONTEXT_COLORS)]
        err = float(row.get("stderr", 0.0)) or None
        ax.bar(int(row["vertex"]), float(row["p"]), color=color,
               yerr=err, capsize=2, edgecolor="black", linewidth=0.4)
        sums[c] += float(row["p"])
    for c in contexts:
        members = [int(r["vertex"]) for r in rows if int(r["context"]) == c]
        center = sum(members) / len(members)
        top = max(float(r["p"]) for r in rows if int(r["context"]) == c)
        ax.text(center, top + 0.02, f"$\\Sigma$ = {sums[c]:.4f}",
                ha="center", fontsize=8)
    ax.set_xlabel("event index")
    ax.set_ylabel("detection probability")
    ax.set_xticks([int(r["vertex"]) for r in rows])
    ax.set_ylim(0, max(float(r["p"]) for r in rows) * 1.25)
    if classical_bound is not None and quantum_bound is not None:
        ax.set_title(
            f"event probabilities (classical budget {classical_bound:g}, "
            f"quantum prediction {quantum_bound:g})", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_signaling(rows: list[dict[str, Any]], path: str | Path) -> None:
    """Signaling factors per directed edge with error bars around zero.

    ``rows`` need keys ``index``, ``eps_prime`` and optionally ``stderr``.
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8.0, 3.2))
    xs = [int(r["index"]) for r in rows]
    ys = [100.0 * float(r["eps_prime"]) for r in rows]
    errs = [100.0 * float(r.get("stderr", 0.0)) for r in rows]
    ax.errorbar(xs, ys, yerr=errs if any(errs) else None, fmt="o",
                markersize=2.5, linewidth=0.8, capsize=1.5, color="#4878cf")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("directed edge index")
    ax.set_ylabel(r"$\varepsilon'$ (%)")
    ax.set_title("no-signaling check between compatible measurements",
                 fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
