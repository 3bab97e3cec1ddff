"""
commands/fig1.py
----------------
``fig1``: distribuciones del tiempo del primer decaimiento con el segundo visto en t2.

Escribe un CSV (t1,interference,decoherence,total_width) y un SVG con las
tres curvas: interferencia continua, decoherencia a trazos, ancho total
punteado. Las opciones que faltan se toman de los bloques [fig1] y [output].

Example:
    $ python main.py fig1 --t2 3.0 --points 301 --csv fig1.csv --svg fig1.svg
"""

import argparse
import logging
from pathlib import Path

import numpy as np

from export.plots import plot_fig1_svg
from export.tables import write_fig1_csv
from physics.errors import DomainError
from physics.tagging import fig1_curves
from settings import RunConfig

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

NAME = "fig1"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        NAME,
        help="curvas del tiempo del primer decaimiento (CSV + SVG)",
        description="Distribuciones de t1 interference, decoherence y total-width, iguales a 1 en t1 = 0.",
    )
    parser.add_argument("--channel", help="canal del primer decaimiento (default: [fig1] channel o el primer canal)")
    parser.add_argument("--f2", help="canal del segundo decaimiento (default: el mismo de --channel)")
    parser.add_argument("--t2", type=float, help="tiempo del segundo decaimiento [tau_S]")
    parser.add_argument("--t1-max", type=float, help="fin de la grilla (default: t2)")
    parser.add_argument("--points", type=int, help="número de puntos de la grilla")
    parser.add_argument("--csv", type=Path, help="ruta del CSV de salida")
    parser.add_argument("--svg", type=Path, help="ruta del SVG de salida")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    options = config.fig1
    if args.t2 is not None:
        options = options.model_copy(update={"t2": args.t2})
    channel = args.channel or options.channel or config.channel_ids[0]
    t2 = options.t2
    t1_max = options.grid_end() if args.t1_max is None else args.t1_max
    points = options.points if args.points is None else args.points
    if points < 2:
        raise DomainError(f"--points must be >= 2 (got {points})")

    logger.debug(f"Grilla de t1: [0, {t1_max}] con {points} puntos, t2={t2}")
    grid = np.linspace(0.0, t1_max, points)
    curves = fig1_curves(channel, t2, options.kappa, grid, config.context(), f2=args.f2)

    csv_path = write_fig1_csv(curves, args.csv or config.output.fig1_csv)
    svg_path = plot_fig1_svg(curves, args.svg or config.output.fig1_svg)
    print(f"csv = {csv_path}")
    print(f"svg = {svg_path}")
    return 0
