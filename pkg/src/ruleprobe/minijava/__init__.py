"""Bundled reference toolchain for a small Java-compatible language subset."""

from .parser import parse, ParseError
from .analysis import check_program, Diagnostic
from .interp import Interpreter, java_string_hash

__all__ = ["parse", "ParseError", "check_program", "Diagnostic", "Interpreter", "java_string_hash"]
