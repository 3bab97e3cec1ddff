"""
commands/classify.py
--------------------
``classify``: etiqueta space-like / time-like de dos decaimientos en el sistema CM.
"""

import argparse

from physics.kinematics import CmKinematics, classify, interval_sq
from settings import RunConfig

NAME = "classify"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        NAME,
        help="clase causal de los dos decaimientos",
        description="Clasifica tiempos ordenados t1 <= t2 para kaones con velocidad beta_k en el CM.",
    )
    parser.add_argument("t1", type=float)
    parser.add_argument("t2", type=float)
    parser.add_argument("beta_k", type=float, help="velocidad del kaón en el sistema CM, en [0, 1)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    kin = CmKinematics(beta_k=args.beta_k)
    label = classify(args.t1, args.t2, kin)
    print(label.value)
    print(f"ratio_r     = {kin.ratio_r:.12g}")
    print(f"interval_sq = {interval_sq(args.t1, args.t2, kin):.12g}")
    return 0
