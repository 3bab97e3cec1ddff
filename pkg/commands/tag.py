"""
commands/tag.py
---------------
``tag``: umbral de decoherencia de un tag K_L o K_S para una cota de contaminación.

Example:
    $ python main.py tag KS_tag pipi 0.01
"""

import argparse
import logging

from physics.tagging import TagKind, tag_report
from settings import RunConfig

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

NAME = "tag"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        NAME,
        help="umbral del tag K_L / K_S",
        description="Menor delta_t con contaminación del tag igual o menor a la cota.",
    )
    parser.add_argument("kind", choices=[k.value for k in TagKind])
    parser.add_argument("channel", help="id del canal (f1 para KL_tag, f2 para KS_tag)")
    parser.add_argument("bound", type=float, help="cota de contaminación, > 0")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    logger.debug(f"Tag {args.kind} sobre el canal {args.channel}, cota={args.bound}")
    report = tag_report(TagKind(args.kind), args.channel, args.bound, config.context())
    print(f"kind          = {report.kind.value}")
    print(f"channel       = {report.channel}")
    print(f"delta_t       = {report.delta_t:.12g}")
    print(f"contamination = {report.contamination:.12g}")
    print(f"purity        = {report.purity:.12g}")
    return 0
