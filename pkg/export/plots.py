"""
export/plots.py
---------------
SVG line plot of the first-decay time distributions.

Se dibuja con matplotlib sobre el backend Agg; la sal del hash SVG y la
metadata de fecha están fijas, así que las mismas curvas dan el mismo archivo.
"""

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from physics.tagging import Fig1Curves  # noqa: E402

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

SVG_HASH_SALT: str = "kaon-fig1"

# (serie, etiqueta, linestyle)
_SERIES = (
    ("interference", "observada (interferencia)", "-"),
    ("decoherence", r"decoherencia $e^{-\Gamma_S t_1}$", "--"),
    ("total_width", r"ancho total $e^{-(\Gamma_S+\kappa\Gamma_L) t_1}$", ":"),
)


def plot_fig1_svg(curves: Fig1Curves, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for field, label, style in _SERIES:
            ax.plot(curves.t1_grid, getattr(curves, field), linestyle=style, color="#2E86AB", label=label)
        ax.set_xlabel(r"$t_1$ [$\tau_S$]")
        ax.set_ylabel("tasa (normalizada en $t_1 = 0$)")
        ax.set_title(f"Primer decaimiento a {curves.channel}, segundo observado en $t_2$ = {curves.t2:g}")
        ax.set_xlim(curves.t1_grid[0], curves.t1_grid[-1])
        ax.set_ylim(bottom=0.0)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

    logger.info(f"Figura escrita en {path}")
    return path
