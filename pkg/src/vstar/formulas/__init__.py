"""The bounded language with constants D and d: syntax, parsing, evaluation."""

from .evaluate import Evaluator, eval3, eval_formula, eval_term
from .parser import Definitions, InterpDef, TheoryDef, load_definitions, parse, parse_formula, parse_term
from .syntax import LevyClass, classify, pretty

__all__ = [
    "Evaluator",
    "eval3",
    "eval_formula",
    "eval_term",
    "Definitions",
    "InterpDef",
    "TheoryDef",
    "load_definitions",
    "parse",
    "parse_formula",
    "parse_term",
    "LevyClass",
    "classify",
    "pretty",
]
