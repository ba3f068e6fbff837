"""SVG chart emission for impulse responses.

Output is deterministic: the Agg backend, a fixed hash salt for element
ids, and no date metadata.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .svar import IrfResult

_SHOCK_NAMES = ("demand shock", "supply shock")


def write_irf_panel(
    irf: IrfResult,
    variable: int,
    path: str | Path,
    var_label: str = "",
    cumulative: bool = True,
    title: str | None = None,
) -> None:
    """One panel: the response of one variable to both structural shocks."""
    data = irf.cumulative if cumulative else irf.responses
    horizons = range(1, irf.horizon + 1)
    with plt.rc_context({"svg.hashsalt": "lrsvar"}):
        fig, ax = plt.subplots(figsize=(7.0, 4.0))
        for j, name in enumerate(_SHOCK_NAMES):
            ax.plot(horizons, data[:, variable, j], marker="o", markersize=3, label=name)
        ax.axhline(0.0, color="black", linewidth=0.6)
        ax.set_xlabel("quarters after shock")
        ax.set_ylabel(("cumulative " if cumulative else "") + "response")
        if title is None:
            title = f"Response of {var_label or f'variable {variable}'} to structural shocks"
        ax.set_title(title)
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
