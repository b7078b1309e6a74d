"""
Deterministic SVG rendering of prior sweeps with matplotlib
"""
import logging
from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

logger = logging.getLogger(__name__)

WIDTH_PX, HEIGHT_PX = 800, 500
DPI = 72
# Rows where the constrained value beats no information by more than this are highlighted
HIGHLIGHT_TOL = 1e-9


def render_sweep_svg(frame: pd.DataFrame, path: Union[str, Path], title: str = "") -> None:
    """
    Plot v_S, the unconstrained and the constrained concavification against the prior
    The stretch where the constrained value exceeds v_S is drawn dashed.
    """
    plt.rcParams["svg.hashsalt"] = "persuasion-sweep"
    fig, ax = plt.subplots(figsize=(WIDTH_PX / DPI, HEIGHT_PX / DPI), dpi=DPI)
    try:
        x = frame["prior"].to_numpy()
        single = len(frame) == 1
        style = dict(marker="o", linestyle="none") if single else {}
        ax.plot(x, frame["v_s"], color="black", label="v_S", **style)
        ax.plot(x, frame["cav_unconstrained"], color="tab:blue", label="unconstrained cav", **style)
        ax.plot(x, frame["cav_constrained"], color="tab:red", label="constrained cav", **style)
        if not single:
            gain = frame["cav_constrained"].to_numpy() > frame["v_s"].to_numpy() + HIGHLIGHT_TOL
            if np.any(gain):
                ax.plot(
                    x, np.where(gain, frame["cav_constrained"], np.nan),
                    color="tab:red", linestyle="--", linewidth=2.5, label="information revealed",
                )
        ax.set_xlabel("prior")
        ax.set_ylabel("sender value")
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.info(f"Wrote sweep plot to {path}")
