"""Exact symbolic engine for graded Poisson algebra and reduction."""
from .core import (ContextMismatch, Generator, GradedContext, GradedPoly, ParityError,
                   evaluate, left_derivative, right_derivative, substitute)
from .expr import ParseError, format_poly, parse

__all__ = [
    "ContextMismatch", "Generator", "GradedContext", "GradedPoly", "ParityError",
    "ParseError", "evaluate", "format_poly", "left_derivative", "parse",
    "right_derivative", "substitute",
]
