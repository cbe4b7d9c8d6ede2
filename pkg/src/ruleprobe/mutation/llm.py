"""LLM mutation path: prompt for a transformation, repair until it compiles.

Distinctness across a seed's variants is whitespace-normalized textual
inequality; a variant equal to the seed or to an earlier variant is treated
like a compile failure and sent back for repair.
"""

from pathlib import Path

from .. import build_exec
from ..seed_agent import RefinementBudget, Discarded, load_prompt, _source_name
from ..gateway import GENERATION, extract_code_block, ExtractionError
from . import operators as ops
from .engine import Mutant, normalize_ws


def mutate_llm(seed, op: str, variant_index: int, gateway, toolchain, workdir,
               budget: RefinementBudget | None = None, existing_sources=()):
    """One compiling, distinct mutant for (seed, op) or Discarded."""
    budget = budget or RefinementBudget()
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    gen_tpl, _ = load_prompt("mutant_generation")
    repair_tpl, _ = load_prompt("mutant_repair")
    taken = {normalize_ws(seed.source)}
    taken.update(normalize_ws(s) for s in existing_sources)

    source = None
    diagnostics = ""
    transcript_ids = []

    while not budget.exhausted:
        if source is None:
            prompt = gen_tpl.substitute(
                operator_code=op, operator_description=ops.DESCRIPTIONS[op],
                seed_source=seed.source, variant_index=variant_index)
        else:
            prompt = repair_tpl.substitute(
                mutant_source=source, diagnostics=diagnostics, operator_code=op)
        completion, entry_id = gateway.complete(GENERATION, [("user", prompt)])
        budget.spend()
        transcript_ids.append(entry_id)
        try:
            source = extract_code_block(completion, "source_file")
        except ExtractionError:
            diagnostics = "no code block could be extracted from the reply"
            source = source or ""
            continue
        if normalize_ws(source) in taken:
            diagnostics = ("policy: the transformed program is textually identical to the original "
                           "or to an earlier variant; produce a different transformation site")
            continue
        sandbox = build_exec.Sandbox(workdir / f"attempt-{budget.attempts_used}")
        src_path = sandbox.root / _source_name(source)
        src_path.write_text(source + "\n", encoding="utf-8")
        result = build_exec.compile([src_path], sandbox, toolchain)
        if result.success:
            return Mutant(seed_rule_key=seed.rule_key, operator=op,
                          variant_index=variant_index, source=source, mode="llm",
                          status="compiled", attempts_used=budget.attempts_used,
                          transcript_ids=transcript_ids)
        diagnostics = result.error_lines()

    return Discarded(stage="mutant", reason=f"no compiling {op} mutant after {budget.max_attempts} attempts",
                     diagnostics=diagnostics, attempts_used=budget.attempts_used,
                     transcript_ids=transcript_ids)
