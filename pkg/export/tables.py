"""
export/tables.py
----------------
CSV writers and readers for the figure curves and the event files.

Los floats se escriben con 17 dígitos significativos, así que al leer el
archivo se recuperan exactamente los mismos doubles.

Formato del archivo de eventos:
    # config_sha256=<hex> seed=<seed> partitions=<p> rng=<stream rule>
    f1,f2,t1,t2,causal_class
    pipi,pipi,0.53...,12.7...,time_like
"""

import csv
import logging
import re
from pathlib import Path
from typing import Iterable

from pydantic import BaseModel, ConfigDict, ValidationError

from physics.errors import ConfigError
from physics.kinematics import CausalClass
from physics.montecarlo import STREAM_RULE, EventRecord
from physics.tagging import Fig1Curves

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

FIG1_COLUMNS: tuple[str, ...] = ("t1", "interference", "decoherence", "total_width")
EVENT_COLUMNS: tuple[str, ...] = ("f1", "f2", "t1", "t2", "causal_class")

_HEADER_RE = re.compile(
    r"^# config_sha256=(?P<hash>[0-9a-f]{64}) seed=(?P<seed>\d+) "
    r"partitions=(?P<partitions>\d+) rng=(?P<rng>\S+)$"
)


class EventFileHeader(BaseModel):
    model_config = ConfigDict(frozen=True)

    config_sha256: str
    seed: int
    partitions: int
    rng: str = STREAM_RULE

    def line(self) -> str:
        return (
            f"# config_sha256={self.config_sha256} seed={self.seed} "
            f"partitions={self.partitions} rng={self.rng}"
        )


def fmt(value: float) -> str:
    return f"{value:.17g}"


def _prepare(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


# ── Figure Curves ─────────────────────────────────────────────────────────────

def write_fig1_csv(curves: Fig1Curves, path: Path) -> Path:
    path = _prepare(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(FIG1_COLUMNS)
        for row in curves.rows():
            writer.writerow([fmt(v) for v in row])
    logger.info(f"Se escribieron {len(curves.t1_grid)} filas en {path}")
    return path


def read_fig1_csv(path: Path) -> list[tuple[float, float, float, float]]:
    with Path(path).open(encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if tuple(header or ()) != FIG1_COLUMNS:
            raise ConfigError(f"unexpected header {header}", str(path), 1)
        return [tuple(float(v) for v in row) for row in reader]


# ── Events ────────────────────────────────────────────────────────────────────

def write_events_csv(events: Iterable[EventRecord], header: EventFileHeader, path: Path) -> Path:
    path = _prepare(path)
    count = 0
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(header.line() + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(EVENT_COLUMNS)
        for event in events:
            writer.writerow(
                [event.f1, event.f2, fmt(event.t1), fmt(event.t2), event.causal_class.value]
            )
            count += 1
    logger.info(f"Se escribieron {count} eventos en {path}")
    return path


def read_events_csv(path: Path) -> tuple[EventFileHeader, list[EventRecord]]:
    """
    Lee un archivo de eventos escrito por ``write_events_csv``.

    Args:
        path: Ruta del CSV

    Returns:
        tuple: (EventFileHeader, lista de EventRecord)

    Raises:
        ConfigError: Encabezado o registro mal formado, con su número de línea
    """
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as f:
        first = f.readline().rstrip("\n")
        match = _HEADER_RE.match(first)
        if not match:
            raise ConfigError("missing or malformed event-file header", str(path), 1)
        header = EventFileHeader(
            config_sha256=match["hash"],
            seed=int(match["seed"]),
            partitions=int(match["partitions"]),
            rng=match["rng"],
        )

        reader = csv.reader(f)
        columns = next(reader, None)
        if tuple(columns or ()) != EVENT_COLUMNS:
            raise ConfigError(f"unexpected column header {columns}", str(path), 2)

        events: list[EventRecord] = []
        for number, row in enumerate(reader, start=3):
            try:
                f1, f2, t1, t2, label = row
                events.append(
                    EventRecord(f1=f1, f2=f2, t1=float(t1), t2=float(t2), causal_class=CausalClass(label))
                )
            except (ValueError, ValidationError) as exc:
                raise ConfigError(f"bad event record: {exc}", str(path), number) from exc
    return header, events
