"""
physics package
===============

Física del par de kaones neutros: álgebra de estados, las dos descripciones
equivalentes de la tasa de doble decaimiento, tags, cinemática y generación
de eventos.

Estructura:
    - errors: jerarquía de excepciones que main.py traduce a exit codes
    - kaon_core: estados K0/K0bar, base K_S/K_L, evolución, K_not_f
    - ly_model: amplitud e intensidad Lee-Yang y estados inferidos
    - th_model: factorización time-history de la misma intensidad
    - tagging: umbrales de los tags K_L / K_S, pureza y curvas de la figura
    - kinematics: clasificación space-like / time-like en el sistema CM
    - montecarlo: generador de eventos con semilla y prueba de bondad de ajuste

Unidades:
    Tiempos propios en tau_S, anchos y delta_m en 1/tau_S, hbar = c = 1.
"""

from . import errors, kaon_core, kinematics, ly_model, montecarlo, tagging, th_model

__all__ = ["errors", "kaon_core", "kinematics", "ly_model", "montecarlo", "tagging", "th_model"]

__version__ = "0.1.0"
