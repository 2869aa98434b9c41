"""Symbolic loop-bracket engine: expressions, parsing, rules, signatures, closure."""

from .bracket import BracketError, bracket
from .closure import (
    ClosureResult,
    build_f_expression,
    closure_check,
    evaluate_expression,
    evaluate_monomial,
    instantiate,
)
from .core import (
    CoeffAtom,
    Composite,
    Expression,
    Loop,
    Monomial,
    TraceAtom,
    ZERO,
    disjoint_product,
    expressions_equal,
    normalize,
    to_json,
)
from .examples import reproduce_examples, worked_example_bracket
from .parse import ParseError, parse_expr
from .signature import Signature, normalize_and_recognize, recognize

__all__ = [
    "BracketError", "bracket", "ClosureResult", "build_f_expression",
    "closure_check", "evaluate_expression", "evaluate_monomial", "instantiate",
    "CoeffAtom", "Composite", "Expression", "Loop", "Monomial", "TraceAtom",
    "ZERO", "disjoint_product", "expressions_equal", "normalize", "to_json",
    "reproduce_examples", "worked_example_bracket", "ParseError", "parse_expr",
    "Signature", "normalize_and_recognize", "recognize",
]
