"""Behavioral equivalence certification for mutants.

A mutant is equivalent iff the seed's accepted tests produce an identical
normalized execution signature on seed and mutant. LLM-path mismatches are
fed back for bounded repair; deterministic-path mismatches hard-fail, since
the deterministic engine guarantees equivalence by construction and a
mismatch there means an engine bug.
"""

from pathlib import Path

from .. import build_exec
from ..seed_agent import RefinementBudget, load_prompt, _source_name
from ..gateway import GENERATION, extract_code_block, ExtractionError
from .engine import Mutant, EngineError, normalize_ws


def compile_and_run(subject_source, test_source, toolchain, workdir):
    """Compile subject+test together in a fresh sandbox; run if compilable.

    Returns (compile_result, signature or None).
    """
    sandbox = build_exec.Sandbox(Path(workdir))
    subject_path = sandbox.root / _source_name(subject_source)
    subject_path.write_text(subject_source + "\n", encoding="utf-8")
    test_path = sandbox.root / _source_name(test_source)
    test_path.write_text(test_source + "\n", encoding="utf-8")
    result = build_exec.compile([subject_path, test_path], sandbox, toolchain)
    if not result.success:
        return result, None
    signature = build_exec.run_tests(result.artifacts_dir, result.artifacts_dir, sandbox, toolchain)
    return result, signature


def describe_difference(seed_sig, mutant_sig) -> str:
    parts = []
    if seed_sig.per_test_outcomes != mutant_sig.per_test_outcomes:
        parts.append(f"test outcomes differ: original {seed_sig.per_test_outcomes} "
                     f"vs transformed {mutant_sig.per_test_outcomes}")
    if seed_sig.stdout_digest != mutant_sig.stdout_digest:
        parts.append(f"stdout differs: original {seed_sig.stdout_digest!r} "
                     f"vs transformed {mutant_sig.stdout_digest!r}")
    if seed_sig.exception_types != mutant_sig.exception_types:
        parts.append(f"exceptions differ: original {seed_sig.exception_types} "
                     f"vs transformed {mutant_sig.exception_types}")
    if list(seed_sig.trace_frames) != list(mutant_sig.trace_frames):
        parts.append("stack traces differ")
    return "\n".join(parts) or "signatures differ"


def certify_equivalence(seed, mutant: Mutant, test_source, seed_signature,
                        toolchain, workdir, gateway=None,
                        budget: RefinementBudget | None = None) -> Mutant:
    """Sets mutant.status to equivalent or rejected (hard-fails on deterministic bugs)."""
    workdir = Path(workdir)
    if normalize_ws(mutant.source) == normalize_ws(seed.source):
        # no transformation happened; rejected before any execution
        mutant.status = "rejected"
        return mutant

    repair_tpl, _ = load_prompt("mutant_equivalence_repair")
    budget = budget or RefinementBudget()
    round_no = 0
    while True:
        result, mutant_sig = compile_and_run(mutant.source, test_source, toolchain,
                                             workdir / f"certify-{round_no}")
        if mutant_sig is None:
            if mutant.mode == "deterministic":
                raise EngineError(
                    f"deterministic mutant stopped compiling ({mutant.operator}): {result.error_lines()}")
            mutant.status = "rejected"
            return mutant
        mutant.status = "compiled"
        if build_exec.signatures_equal(seed_signature, mutant_sig):
            mutant.status = "equivalent"
            return mutant
        if mutant.mode == "deterministic":
            raise EngineError(
                f"deterministic mutant changed behavior ({mutant.operator} at {mutant.site_label}): "
                + describe_difference(seed_signature, mutant_sig))
        if gateway is None or budget.exhausted:
            mutant.status = "rejected"
            return mutant
        prompt = repair_tpl.substitute(
            seed_source=seed.source, mutant_source=mutant.source,
            operator_code=mutant.operator,
            difference_report=describe_difference(seed_signature, mutant_sig))
        completion, entry_id = gateway.complete(GENERATION, [("user", prompt)])
        budget.spend()
        mutant.attempts_used += 1
        mutant.transcript_ids.append(entry_id)
        try:
            mutant.source = extract_code_block(completion, "source_file")
        except ExtractionError:
            mutant.status = "rejected"
            return mutant
        if normalize_ws(mutant.source) == normalize_ws(seed.source):
            mutant.status = "rejected"
            return mutant
        round_no += 1
