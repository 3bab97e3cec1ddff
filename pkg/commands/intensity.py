"""
commands/intensity.py
---------------------
``intensity``: evalúa I(f1, t1; f2, t2) de las dos formas e imprime los factores TH.

Example:
    $ python main.py intensity pipi 1.0 pipi 4.0
"""

import argparse
import logging

from physics.ly_model import ly_intensity
from physics.th_model import th_intensity
from settings import RunConfig

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

NAME = "intensity"
RELATIVE_FLOOR: float = 1e-300


def fmt_complex(value: complex) -> str:
    return f"{value.real:.12g}{value.imag:+.12g}j"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        NAME,
        help="tasa de doble decaimiento según las descripciones LY y TH",
        description="Evalúa I(f1, t1; f2, t2) desde la amplitud y desde la historia temporal.",
    )
    parser.add_argument("f1", help="canal del primer decaimiento")
    parser.add_argument("t1", type=float, help="tiempo del primer decaimiento [tau_S]")
    parser.add_argument("f2", help="canal del segundo decaimiento")
    parser.add_argument("t2", type=float, help="tiempo del segundo decaimiento [tau_S], >= t1")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    ctx = config.context()
    logger.debug(f"Intensidad en f1={args.f1} t1={args.t1} f2={args.f2} t2={args.t2}")

    ly = ly_intensity(args.f1, args.t1, args.f2, args.t2, ctx)
    th = th_intensity(args.f1, args.t1, args.f2, args.t2, ctx)
    rel_diff = abs(th.total - ly) / max(th.total, ly, RELATIVE_FLOOR)

    print(f"I_LY       = {ly:.12g}")
    print(f"I_TH       = {th.total:.12g}")
    print(f"rel_diff   = {rel_diff:.12g}")
    print(f"step1_prob = {th.step1_prob:.12g}")
    print(f"step2_amp  = {fmt_complex(th.step2_amp)}")
    print(f"step3_prob = {th.step3_prob:.12g}")
    print(f"step4_amp  = {fmt_complex(th.step4_amp)}")
    return 0
