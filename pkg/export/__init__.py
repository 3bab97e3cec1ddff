"""
export package
==============

Archivos de salida del CLI.

    - tables: CSV con 17 dígitos para curvas y archivos de eventos (escritura y lectura)
    - plots: SVG de matplotlib con las curvas de la figura
"""

from . import plots, tables

__all__ = ["plots", "tables"]
