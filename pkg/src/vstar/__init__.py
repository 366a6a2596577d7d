"""Finite-scale checks for structured sets, theories and interpretations."""

from .hf import EMPTY, HF, atom, format_value, kpair, parse_value, set_of
from .interp import Interpretation, apply, get_interp, get_pair
from .structured import AtomMap, QuasiStructuredSet, check_quasi, check_structured
from .theories import catalog, enumerate_models, get_theory

__all__ = [
    "EMPTY",
    "HF",
    "atom",
    "format_value",
    "kpair",
    "parse_value",
    "set_of",
    "Interpretation",
    "apply",
    "get_interp",
    "get_pair",
    "AtomMap",
    "QuasiStructuredSet",
    "check_quasi",
    "check_structured",
    "catalog",
    "enumerate_models",
    "get_theory",
]
