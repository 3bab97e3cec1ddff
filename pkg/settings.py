"""
settings.py
-----------
Shipped physics defaults and the run-configuration file loader.

Los valores por defecto vienen de ``config/defaults.env`` (leído con
python-dotenv a través de pydantic-settings, prefijo ``KAON_``). Las
variables de entorno del proceso no se consultan: una corrida queda
determinada solo por el archivo de defaults, la configuración y la línea
de comandos.

Formato de la configuración (líneas planas ``key = value``, comentarios ``#``):

    gamma_s   = 1.0
    gamma_l   = 0.002
    delta_m   = 0.47
    epsilon_s = 1.6e-3+1.5e-3j      # o bien: epsilon = ..., delta = ...
    epsilon_l = 1.6e-3+1.5e-3j

    [channel pipi]
    eta_abs   = 2.232e-3
    eta_phase = 0.7594
    weight    = 1

    [fig1]          channel, t2, kappa, t1_max, points
    [generate]      n_events, t_max, seed, beta_k, partitions, workers, max_attempts
    [output]        fig1_csv, fig1_svg, events_csv

Los canales definidos en un archivo de configuración reemplazan el catálogo por defecto.

Example:
    >>> config = load_run_config(Path("config/sample.conf"))
    >>> ctx = config.context()
"""

import hashlib
import logging
import re
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from physics.errors import ConfigError
from physics.kaon_core import CpParams, DecayChannel, PhysicsParams
from physics.ly_model import LyContext
from physics.montecarlo import ChannelWeight, GeneratorConfig
from physics.tagging import DEFAULT_KAPPA

# ── Logger Setup ──────────────────────────────────────────────────────────────
logger = logging.getLogger(__name__)

# ── Paths ─────────────────────────────────────────────────────────────────────
BASE_DIR: Path = Path(__file__).resolve().parent
DEFAULTS_FILE: Path = BASE_DIR / "config" / "defaults.env"


# ── Config Blocks ─────────────────────────────────────────────────────────────

class ChannelSpec(BaseModel):
    """Canal de decaimiento tal como se escribe en la configuración (forma polar)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str
    eta_abs: float = Field(ge=0.0)
    eta_phase: float = 0.0
    amp_abs: float = Field(default=1.0, gt=0.0)
    amp_phase: float = 0.0
    weight: float = Field(default=1.0, ge=0.0)

    def to_channel(self) -> DecayChannel:
        return DecayChannel.from_polar(
            self.id, self.eta_abs, self.eta_phase, self.amp_abs, self.amp_phase
        )


class Fig1Options(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    channel: str | None = None
    t2: float = Field(default=3.0, gt=0.0)
    kappa: float = Field(default=DEFAULT_KAPPA, gt=0.0)
    t1_max: float | None = Field(default=None, ge=0.0)
    points: int = Field(default=301, ge=2)

    def grid_end(self) -> float:
        return self.t2 if self.t1_max is None else self.t1_max


class GenerateOptions(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_events: int = Field(default=100_000, ge=1)
    t_max: float = Field(default=10_000.0, gt=0.0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    beta_k: float | None = Field(default=None, ge=0.0, lt=1.0)
    partitions: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    max_attempts: int | None = Field(default=None, ge=1)


class OutputOptions(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    fig1_csv: Path = Path("fig1.csv")
    fig1_svg: Path = Path("fig1.svg")
    events_csv: Path = Path("events.csv")


class RunConfig(BaseModel):
    """Todo lo que necesita una corrida del CLI, validado en conjunto."""

    model_config = ConfigDict(frozen=True)

    physics: PhysicsParams
    cp: CpParams
    channels: tuple[ChannelSpec, ...]
    fig1: Fig1Options = Fig1Options()
    generate: GenerateOptions = GenerateOptions()
    output: OutputOptions = OutputOptions()

    @model_validator(mode="after")
    def _check_channels(self) -> "RunConfig":
        if not self.channels:
            raise ValueError("at least one channel is required")
        ids = [c.id for c in self.channels]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate channel ids")
        if self.fig1.channel is not None and self.fig1.channel not in ids:
            raise ValueError(f"[fig1] channel '{self.fig1.channel}' is not defined")
        return self

    @property
    def channel_ids(self) -> list[str]:
        return [c.id for c in self.channels]

    def context(self) -> LyContext:
        return LyContext.build(self.physics, self.cp, [c.to_channel() for c in self.channels])

    def generator_config(self) -> GeneratorConfig:
        g = self.generate
        return GeneratorConfig(
            channels=tuple(ChannelWeight(id=c.id, weight=c.weight) for c in self.channels),
            t_max=g.t_max,
            n_events=g.n_events,
            seed=g.seed,
            beta_k=g.beta_k,
            partitions=g.partitions,
            workers=g.workers,
            max_attempts=g.max_attempts,
        )

    def config_hash(self) -> str:
        """sha256 de todo lo que afecta los resultados (sin las rutas de salida)."""
        payload = self.model_dump_json(exclude={"output"})
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def with_overrides(
        self,
        seed: int | None = None,
        n_events: int | None = None,
        t_max: float | None = None,
        kappa: float | None = None,
    ) -> "RunConfig":
        """Aplica los overrides de la línea de comandos y los valida como valores del archivo."""
        generate = self.generate.model_dump()
        fig1 = self.fig1.model_dump()
        for block, key, value in (
            (generate, "seed", seed),
            (generate, "n_events", n_events),
            (generate, "t_max", t_max),
            (fig1, "kappa", kappa),
        ):
            if value is not None:
                block[key] = value
        try:
            return self.model_copy(
                update={"generate": GenerateOptions(**generate), "fig1": Fig1Options(**fig1)}
            )
        except ValidationError as exc:
            first = exc.errors()[0]
            field = first["loc"][0] if first["loc"] else "override"
            raise ConfigError(f"invalid value for --{str(field).replace('_', '-')}: {first['msg']}") from exc


# ── Shipped Defaults ──────────────────────────────────────────────────────────

class KaonDefaults(BaseSettings):
    """Constantes medidas del kaón neutro en unidades de tau_S, desde config/defaults.env."""

    model_config = SettingsConfigDict(
        env_file=DEFAULTS_FILE,
        env_file_encoding="utf-8",
        env_prefix="KAON_",
        extra="ignore",
        frozen=True,
    )

    gamma_s: float = 1.0
    gamma_l: float
    delta_m: float
    epsilon_re: float
    epsilon_im: float
    delta_re: float = 0.0
    delta_im: float = 0.0
    channels: list[ChannelSpec]

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return init_settings, dotenv_settings

    def physics(self) -> PhysicsParams:
        return PhysicsParams(gamma_s=self.gamma_s, gamma_l=self.gamma_l, delta_m=self.delta_m)

    def cp(self) -> CpParams:
        return CpParams.from_epsilon_delta(
            complex(self.epsilon_re, self.epsilon_im), complex(self.delta_re, self.delta_im)
        )

    def run_config(self) -> RunConfig:
        return RunConfig(physics=self.physics(), cp=self.cp(), channels=tuple(self.channels))


def load_defaults(env_file: Path | None = None) -> KaonDefaults:
    path = DEFAULTS_FILE if env_file is None else env_file
    if not path.is_file():
        logger.error(f"Archivo de defaults no encontrado: {path}")
        raise ConfigError("defaults file not found", str(path))
    try:
        return KaonDefaults(_env_file=path)
    except ValidationError as exc:
        logger.error(f"Archivo de defaults inválido {path}: {exc}")
        raise ConfigError(f"invalid defaults: {exc.errors()[0]['msg']}", str(path)) from exc


# ── Run-Config Parsing ────────────────────────────────────────────────────────

_SECTION_RE = re.compile(r"^\[\s*(?P<name>[A-Za-z0-9_]+)(?:\s+(?P<arg>[^\]]*?))?\s*\]$")
_KEY_RE = re.compile(r"^(?P<key>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*(?P<value>.*)$")

_TOP_KEYS = {"gamma_s", "gamma_l", "delta_m", "epsilon_s", "epsilon_l", "epsilon", "delta"}
_SECTION_KEYS: dict[str, set[str]] = {
    "channel": {"eta_abs", "eta_phase", "amp_abs", "amp_phase", "weight"},
    "fig1": set(Fig1Options.model_fields),
    "generate": set(GenerateOptions.model_fields),
    "output": set(OutputOptions.model_fields),
}
_NONE_VALUES = {"", "none", "null"}


class _Block:
    """Entradas crudas ``key -> (value, line)`` de una sección."""

    def __init__(self, name: str, line: int, arg: str | None = None):
        self.name = name
        self.line = line
        self.arg = arg
        self.entries: dict[str, tuple[str, int]] = {}

    def values(self) -> dict[str, Any]:
        return {
            key: (None if value.lower() in _NONE_VALUES else value)
            for key, (value, _) in self.entries.items()
        }

    def line_of(self, key: Any) -> int:
        if key in self.entries:
            return self.entries[key][1]
        if self.name == "top" and self.entries:
            return min(line for _, line in self.entries.values())
        return self.line


def _parse_lines(text: str, path: str) -> tuple[_Block, list[_Block]]:
    top = _Block("top", 1)
    sections: list[_Block] = []
    current = top
    seen: set[tuple[str, str | None]] = set()

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        section = _SECTION_RE.match(line)
        if section:
            name, arg = section["name"], (section["arg"] or None)
            if name not in _SECTION_KEYS:
                raise ConfigError(f"unknown section [{name}]", path, number)
            if name == "channel" and not arg:
                raise ConfigError("[channel] needs an id, e.g. [channel pipi]", path, number)
            if name != "channel" and arg:
                raise ConfigError(f"[{name}] takes no argument", path, number)
            if (name, arg) in seen:
                label = f"channel id '{arg}'" if name == "channel" else f"section [{name}]"
                raise ConfigError(f"duplicate {label}", path, number)
            seen.add((name, arg))
            current = _Block(name, number, arg)
            sections.append(current)
            continue

        entry = _KEY_RE.match(line)
        if not entry:
            raise ConfigError(f"malformed line: {raw.strip()!r}", path, number)
        key, value = entry["key"], entry["value"].strip()
        allowed = _TOP_KEYS if current is top else _SECTION_KEYS[current.name]
        if key not in allowed:
            where = "top level" if current is top else f"[{current.name}]"
            raise ConfigError(f"unknown key '{key}' in {where}", path, number)
        if key in current.entries:
            raise ConfigError(f"duplicate key '{key}'", path, number)
        current.entries[key] = (value, number)

    return top, sections


def _parse_complex(block: _Block, key: str, path: str) -> complex | None:
    if key not in block.entries:
        return None
    value, line = block.entries[key]
    try:
        return complex(value.replace(" ", ""))
    except ValueError:
        raise ConfigError(f"'{key}' is not a complex number: {value!r}", path, line) from None


def _validated(model: type[BaseModel], data: dict[str, Any], block: _Block, path: str) -> Any:
    try:
        return model(**data)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = first["loc"][0] if first["loc"] else None
        label = f"'{key}'" if key is not None else f"[{block.name}]"
        raise ConfigError(f"invalid {label}: {first['msg']}", path, block.line_of(key)) from exc


def _physics_from(top: _Block, defaults: KaonDefaults, path: str) -> tuple[PhysicsParams, CpParams]:
    data = {
        "gamma_s": defaults.gamma_s,
        "gamma_l": defaults.gamma_l,
        "delta_m": defaults.delta_m,
    }
    data.update({k: v for k, v in top.values().items() if k in data})
    physics = _validated(PhysicsParams, data, top, path)

    eps_s = _parse_complex(top, "epsilon_s", path)
    eps_l = _parse_complex(top, "epsilon_l", path)
    eps = _parse_complex(top, "epsilon", path)
    delta = _parse_complex(top, "delta", path)

    if (eps_s is not None or eps_l is not None) and (eps is not None or delta is not None):
        line = max(top.line_of(k) for k in ("epsilon_s", "epsilon_l", "epsilon", "delta") if k in top.entries)
        raise ConfigError("use either epsilon_s/epsilon_l or epsilon/delta, not both", path, line)

    fallback = defaults.cp()
    if eps is not None or delta is not None:
        eps = fallback.epsilon if eps is None else eps
        delta = fallback.delta if delta is None else delta
        data = {"epsilon_s": eps + delta, "epsilon_l": eps - delta}
    else:
        data = {
            "epsilon_s": fallback.epsilon_s if eps_s is None else eps_s,
            "epsilon_l": fallback.epsilon_l if eps_l is None else eps_l,
        }
    cp = _validated(CpParams, data, top, path)
    return physics, cp


def parse_run_config(text: str, path: str = "<config>", defaults: KaonDefaults | None = None) -> RunConfig:
    """
    Interpreta el texto de una configuración de corrida.

    Args:
        text: Contenido del archivo
        path: Ruta usada en los mensajes de error (opcional)
        defaults: Constantes por defecto (se cargan si no se pasan)

    Returns:
        RunConfig: Configuración validada

    Raises:
        ConfigError: Cualquier problema, con la línea que lo causa
    """
    defaults = load_defaults() if defaults is None else defaults
    top, sections = _parse_lines(text, path)
    physics, cp = _physics_from(top, defaults, path)

    channels: list[ChannelSpec] = []
    blocks: dict[str, Any] = {}
    for block in sections:
        if block.name == "channel":
            data = {"id": block.arg, **block.values()}
            if "eta_abs" not in data:
                raise ConfigError(f"[channel {block.arg}] is missing 'eta_abs'", path, block.line)
            channel = _validated(ChannelSpec, data, block, path)
            try:
                channel.to_channel()
            except ValidationError as exc:
                raise ConfigError(
                    f"invalid channel '{block.arg}': {exc.errors()[0]['msg']}", path, block.line
                ) from exc
            channels.append(channel)
        else:
            model = {"fig1": Fig1Options, "generate": GenerateOptions, "output": OutputOptions}[block.name]
            data = {k: v for k, v in block.values().items() if v is not None}
            blocks[block.name] = _validated(model, data, block, path)

    if not channels:
        channels = list(defaults.channels)

    try:
        config = RunConfig(physics=physics, cp=cp, channels=tuple(channels), **blocks)
    except ValidationError as exc:
        fig1 = next((b for b in sections if b.name == "fig1"), None)
        line = fig1.line_of("channel") if fig1 is not None else None
        raise ConfigError(exc.errors()[0]["msg"], path, line) from exc

    logger.debug(f"Configuración cargada desde {path}: canales={config.channel_ids}")
    return config


def load_run_config(path: Path | None = None, defaults: KaonDefaults | None = None) -> RunConfig:
    """Configuración desde ``path``, o los defaults incluidos si no se da ruta."""
    defaults = load_defaults() if defaults is None else defaults
    if path is None:
        return defaults.run_config()
    path = Path(path)
    if not path.is_file():
        logger.error(f"Archivo de configuración no encontrado: {path}")
        raise ConfigError("config file not found", str(path))
    return parse_run_config(path.read_text(encoding="utf-8"), str(path), defaults)
