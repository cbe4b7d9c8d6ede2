from .operators import ALL_OPERATORS, DESCRIPTIONS, INSERTION_OPERATORS
from .engine import (Mutant, EngineError, applicable_operators,
                     mutate_deterministic, generate_variants, normalize_ws)
from .certify import certify_equivalence, compile_and_run
from .llm import mutate_llm

__all__ = [
    "ALL_OPERATORS", "DESCRIPTIONS", "INSERTION_OPERATORS", "Mutant", "EngineError",
    "applicable_operators", "mutate_deterministic", "generate_variants", "normalize_ws",
    "certify_equivalence", "compile_and_run", "mutate_llm",
]
