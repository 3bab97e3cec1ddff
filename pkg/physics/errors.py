"""
physics/errors.py
-----------------
Exception hierarchy shared by the physics modules and the CLI.

El CLI las traduce a exit codes en ``main.py`` (2 para errores de uso,
configuración y dominio; 3 para fallas de generación o de ejecución).
"""


class KaonError(Exception):
    """Raíz de todos los errores del paquete."""


class DomainError(KaonError, ValueError):
    """Argumento fuera del dominio de una operación (tiempo negativo, t2 < t1, ...)."""


class DegenerateBasisError(KaonError, ValueError):
    """Dos estados que deberían ser linealmente independientes son (numéricamente) paralelos."""


class ChannelNotFoundError(KaonError, KeyError):
    """Id de canal ausente del catálogo."""

    def __init__(self, channel_id: str):
        self.channel_id = channel_id
        super().__init__(channel_id)

    def __str__(self) -> str:
        return f"unknown decay channel '{self.channel_id}'"


class GenerationError(KaonError, RuntimeError):
    """El generador de eventos no pudo producir la muestra pedida."""


class EnvelopeViolationError(GenerationError):
    """La densidad objetivo superó la envolvente de rechazo."""


class ConfigError(KaonError, ValueError):
    """Configuración inválida; lleva el archivo y la línea cuando se conocen."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        super().__init__(message)

    def __str__(self) -> str:
        message = super().__str__()
        if self.path is not None and self.line is not None:
            return f"{self.path}:{self.line}: {message}"
        if self.path is not None:
            return f"{self.path}: {message}"
        return message
