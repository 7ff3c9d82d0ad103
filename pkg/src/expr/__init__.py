from src.expr.parser import Lexer, Parser, parse, parse_x_polynomial
from src.expr.printer import (
    SCHEMA_VERSION,
    TARGETS,
    polynomial_from_dict,
    polynomial_to_dict,
    render,
    render_latex,
    render_plain,
    render_report,
)

__all__ = [
    "Lexer",
    "Parser",
    "SCHEMA_VERSION",
    "TARGETS",
    "parse",
    "parse_x_polynomial",
    "polynomial_from_dict",
    "polynomial_to_dict",
    "render",
    "render_latex",
    "render_plain",
    "render_report",
]
