"""
main.py
-------
kaon-entanglement command-line entry point.

Este módulo interpreta las opciones globales, carga la configuración de la
corrida, delega en uno de los subcomandos de ``commands/`` y traduce las
excepciones a exit codes.

Exit codes:
    0  éxito
    2  error de uso, de configuración o de dominio (canal o tiempos inválidos, ...)
    3  error de generación o error inesperado en ejecución

Environment Variables:
    Ninguna. Los valores por defecto viven en config/defaults.env.

Example:
    $ python main.py --config config/sample.conf fig1 --csv fig1.csv --svg fig1.svg
    $ python main.py tag KS_tag pipi 0.01
    $ python main.py --seed 7 --n-events 1000 generate --out events.csv --check
"""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from commands import COMMANDS
from physics.errors import (
    ChannelNotFoundError,
    ConfigError,
    DegenerateBasisError,
    DomainError,
    GenerationError,
)
from settings import load_run_config

# ── Logger ────────────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3

USAGE_ERRORS = (ConfigError, DomainError, ChannelNotFoundError, DegenerateBasisError, ValidationError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kaon",
        description="Pares de kaones neutros entrelazados: tasas de decaimiento, tags, curvas y eventos.",
    )
    parser.add_argument(
        "--config",
        type=Path,
        help="archivo de configuración de la corrida (default: constantes incluidas)",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="nivel de logging en stderr",
    )
    parser.add_argument("--seed", type=int, help="reemplaza [generate] seed")
    parser.add_argument("--n-events", type=int, help="reemplaza [generate] n_events")
    parser.add_argument("--t-max", type=float, help="reemplaza [generate] t_max")
    parser.add_argument("--kappa", type=float, help="reemplaza [fig1] kappa")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr)
    logger.debug(f"Comando: {args.command}")

    try:
        config = load_run_config(args.config).with_overrides(
            seed=args.seed,
            n_events=args.n_events,
            t_max=args.t_max,
            kappa=args.kappa,
        )
        return args.handler(args, config)
    except USAGE_ERRORS as exc:
        logger.error(f"Falló {args.command}: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenerationError as exc:
        logger.error(f"Falló la generación: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:
        logger.error(f"Excepción no manejada en {args.command}: {exc}", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
