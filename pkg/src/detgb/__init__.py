"""Exact Groebner bases of determinantal ideals of corank one over prime fields."""

from .engine import GroebnerBasis, ZSet, detgb, lazard_oracle, modgb, normal_form
from .ff import DEFAULT_PRIME, FieldSpec, Fel
from .gncomplex import GNData, LinearMatrix
from .ring import ModuleElement, ModuleMonomial, Polynomial

__all__ = [
    "DEFAULT_PRIME",
    "FieldSpec",
    "Fel",
    "GNData",
    "GroebnerBasis",
    "LinearMatrix",
    "ModuleElement",
    "ModuleMonomial",
    "Polynomial",
    "ZSet",
    "detgb",
    "lazard_oracle",
    "modgb",
    "normal_form",
]
