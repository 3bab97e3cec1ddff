"""
commands package
================

Un módulo por subcomando del CLI. Cada uno expone ``NAME``, ``register(subparsers)``
y ``run(args, config) -> exit code``; ``main.py`` los registra todos.

    - intensity: evaluación LY y TH de un punto (f1, t1, f2, t2)
    - fig1: curvas del primer decaimiento a CSV y SVG
    - tag: umbrales de los tags K_L / K_S
    - generate: archivo de eventos del generador Monte Carlo
    - classify: etiqueta space-like / time-like
"""

from . import classify, fig1, generate, intensity, tag

COMMANDS = (intensity, fig1, tag, generate, classify)

__all__ = ["COMMANDS", "classify", "fig1", "generate", "intensity", "tag"]
