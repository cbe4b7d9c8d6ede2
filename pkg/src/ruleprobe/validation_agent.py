"""Test generation, execution, and alignment judgment for seed programs.

A test is only accepted if it compiles together with its seed AND statically
invokes the seed's entry method; bypassing the entry method is the classic
way a generated test silently stops exercising the seeded defect. Judgment
runs at validation temperature and a verdict of "valid" additionally
requires an observable trigger (a failing or erroring test); a judge that
says valid while every test passes is demoted to inconclusive and flagged
for manual review, since silent defects cannot be auto-confirmed.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path

from . import build_exec
from .gateway import GENERATION, VALIDATION, extract_code_block, ExtractionError
from .seed_agent import RefinementBudget, Discarded, load_prompt, _source_name
from .minijava import parse as mj_parse, ParseError as MJParseError
from .minijava import nodes as N


@dataclass
class TestCase:
    seed_rule_key: str
    source: str
    attempts_used: int
    invoked_entry: bool
    transcript_ids: list = field(default_factory=list)
    source_path: str = ""


@dataclass
class ValidationVerdict:
    status: str  # valid | invalid | inconclusive
    rationale: str
    signature: build_exec.ExecutionSignature
    needs_manual_review: bool = False
    transcript_ids: list = field(default_factory=list)


def invokes_method(test_source: str, method_name: str) -> bool:
    """True iff the test source contains a call (not a declaration) of method_name."""
    try:
        unit = mj_parse(test_source)
    except MJParseError:
        # foreign-language test: fall back to an instance-call pattern scan
        return re.search(rf"\.\s*{re.escape(method_name)}\s*\(", test_source) is not None
    found = False

    def walk_expr(expr):
        nonlocal found
        if expr is None or found:
            return
        if isinstance(expr, N.Call):
            if expr.method == method_name:
                found = True
                return
            if expr.receiver is not None:
                walk_expr(expr.receiver)
            for a in expr.args:
                walk_expr(a)
        elif isinstance(expr, N.Binary):
            walk_expr(expr.left)
            walk_expr(expr.right)
        elif isinstance(expr, N.Unary):
            walk_expr(expr.operand)
        elif isinstance(expr, N.InstanceOf):
            walk_expr(expr.target)
        elif isinstance(expr, N.New):
            for a in expr.args:
                walk_expr(a)

    def walk_stmt(stmt):
        if stmt is None or found:
            return
        if isinstance(stmt, N.Block):
            for s in stmt.statements:
                walk_stmt(s)
        elif isinstance(stmt, N.VarDecl):
            walk_expr(stmt.init)
        elif isinstance(stmt, N.Assign):
            walk_expr(stmt.value)
        elif isinstance(stmt, N.ExprStmt):
            walk_expr(stmt.expr)
        elif isinstance(stmt, N.If):
            walk_expr(stmt.cond)
            walk_stmt(stmt.then)
            walk_stmt(stmt.orelse)
        elif isinstance(stmt, (N.While, N.DoWhile)):
            walk_expr(stmt.cond)
            walk_stmt(stmt.body)
        elif isinstance(stmt, N.For):
            walk_stmt(stmt.init)
            walk_expr(stmt.cond)
            walk_stmt(stmt.update)
            walk_stmt(stmt.body)
        elif isinstance(stmt, N.Switch):
            walk_expr(stmt.selector)
            for case in stmt.cases:
                for s in case.body:
                    walk_stmt(s)
        elif isinstance(stmt, (N.Return, N.Throw)):
            walk_expr(stmt.value)
        elif isinstance(stmt, N.TryCatch):
            walk_stmt(stmt.body)
            walk_stmt(stmt.handler)

    for cls in unit.classes:
        for method in cls.methods:
            walk_stmt(method.body)
    return found


def generate_test(seed, rule, gateway, toolchain, workdir,
                  budget: RefinementBudget | None = None):
    """Budgeted generate/repair loop for a test that compiles with its seed."""
    budget = budget or RefinementBudget()
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    gen_tpl, _ = load_prompt("test_generation")
    repair_tpl, _ = load_prompt("test_repair")

    test_source = None
    diagnostics = ""
    transcript_ids = []

    while not budget.exhausted:
        if test_source is None:
            prompt = gen_tpl.substitute(
                rule_title=rule.title, rule_description=rule.description,
                seed_class=seed.class_name, seed_source=seed.source,
                entry_method=seed.entry_method)
        else:
            prompt = repair_tpl.substitute(
                seed_source=seed.source, test_source=test_source,
                diagnostics=diagnostics, entry_method=seed.entry_method)
        completion, entry_id = gateway.complete(GENERATION, [("user", prompt)])
        budget.spend()
        transcript_ids.append(entry_id)
        try:
            test_source = extract_code_block(completion, "test_file")
        except ExtractionError:
            diagnostics = "no code block could be extracted from the reply"
            test_source = test_source or ""
            continue

        invoked = invokes_method(test_source, seed.entry_method)
        if not invoked:
            # rejected before execution; repairable like a compile failure
            diagnostics = f"policy: the test never invokes {seed.entry_method}()"
            continue
        sandbox = build_exec.Sandbox(workdir / f"attempt-{budget.attempts_used}")
        seed_path = sandbox.root / _source_name(seed.source)
        seed_path.write_text(seed.source + "\n", encoding="utf-8")
        test_path = sandbox.root / _source_name(test_source)
        test_path.write_text(test_source + "\n", encoding="utf-8")
        result = build_exec.compile([seed_path, test_path], sandbox, toolchain)
        if result.success:
            test = TestCase(seed_rule_key=seed.rule_key, source=test_source,
                            attempts_used=budget.attempts_used, invoked_entry=True,
                            transcript_ids=transcript_ids)
            final_path = workdir / _source_name(test_source)
            final_path.write_text(test_source + "\n", encoding="utf-8")
            test.source_path = str(final_path)
            return test
        diagnostics = result.error_lines()

    return Discarded(stage="test", reason=f"no compiling test after {budget.max_attempts} attempts",
                     diagnostics=diagnostics, attempts_used=budget.attempts_used,
                     transcript_ids=transcript_ids)


def execute_pair(seed, test_source, toolchain, workdir) -> build_exec.ExecutionSignature:
    sandbox = build_exec.Sandbox(Path(workdir) / "run")
    seed_path = sandbox.root / _source_name(seed.source)
    seed_path.write_text(seed.source + "\n", encoding="utf-8")
    test_path = sandbox.root / _source_name(test_source)
    test_path.write_text(test_source + "\n", encoding="utf-8")
    result = build_exec.compile([seed_path, test_path], sandbox, toolchain)
    if not result.success:
        raise build_exec.SandboxError(f"accepted pair stopped compiling: {result.error_lines()}")
    return build_exec.run_tests(result.artifacts_dir, result.artifacts_dir, sandbox, toolchain)


def render_execution_report(signature: build_exec.ExecutionSignature) -> str:
    lines = []
    for name, outcome in signature.per_test_outcomes.items():
        lines.append(f"- {name}: {outcome}")
    if signature.exception_types:
        lines.append("exceptions raised, in order: " + ", ".join(signature.exception_types))
    if signature.trace_frames:
        frames = " -> ".join(f"{c}.{m}" for c, m in signature.trace_frames)
        lines.append("stack frames (innermost first): " + frames)
    if signature.stdout_digest.strip():
        lines.append("captured output:")
        lines.append(signature.stdout_digest)
    return "\n".join(lines) if lines else "(no tests ran)"


def judge_alignment(rule, seed, test_source, signature, gateway) -> ValidationVerdict:
    """One judgment call at validation temperature; parses the VERDICT trailer."""
    tpl, _ = load_prompt("judge_alignment")
    prompt = tpl.substitute(
        rule_id=rule.rule_id, rule_title=rule.title, rule_description=rule.description,
        seed_source=seed.source, test_source=test_source,
        execution_report=render_execution_report(signature))
    completion, entry_id = gateway.complete(VALIDATION, [("user", prompt)])
    status = _parse_verdict(completion.text)
    rationale = _parse_rationale(completion.text)
    verdict = ValidationVerdict(status=status, rationale=rationale, signature=signature,
                                transcript_ids=[entry_id])
    observable = any(v in ("fail", "error") for v in signature.per_test_outcomes.values())
    if status == "valid" and not observable:
        verdict.status = "inconclusive"
        verdict.needs_manual_review = True
    return verdict


def _parse_verdict(text: str) -> str:
    m = re.search(r"VERDICT\s*:\s*(valid|invalid|inconclusive)", text, re.IGNORECASE)
    if m:
        return m.group(1).lower()
    m = re.search(r"\b(valid|invalid|inconclusive)\b", text, re.IGNORECASE)
    return m.group(1).lower() if m else "inconclusive"


def _parse_rationale(text: str) -> str:
    m = re.search(r"RATIONALE\s*:\s*(.+)", text, re.IGNORECASE | re.DOTALL)
    return m.group(1).strip() if m else text.strip()


def validate_seed(seed, rule, gateway, toolchain, workdir,
                  max_attempts: int = 5, regeneration_limit: int = 1):
    """Full validation: test generation, execution, judgment, bounded refinement.

    Total gateway spend per seed stays within max_attempts generation calls
    plus max_attempts judgment calls. On a non-valid verdict the current test
    is discarded and regenerated up to regeneration_limit times; after that
    the seed itself is discarded.
    """
    workdir = Path(workdir)
    gen_budget = RefinementBudget(max_attempts=max_attempts)
    judgments = 0
    invalid_regens = 0
    rounds = 0
    last = None

    while not gen_budget.exhausted and judgments < max_attempts:
        produced = generate_test(seed, rule, gateway, toolchain,
                                 workdir / f"gen-{rounds}", budget=gen_budget)
        rounds += 1
        if isinstance(produced, Discarded):
            return produced
        signature = execute_pair(seed, produced.source, toolchain,
                                 workdir / f"exec-{judgments}")
        verdict = judge_alignment(rule, seed, produced.source, signature, gateway)
        judgments += 1
        last = (produced, verdict)
        if verdict.status == "valid":
            return produced, verdict
        if verdict.status == "invalid":
            # discard this test; one fresh regeneration, then give up on the seed
            if invalid_regens >= regeneration_limit:
                break
            invalid_regens += 1
        # inconclusive: keep refining while the budget lasts

    reason = "validation budget exhausted without a valid verdict"
    if last is not None:
        reason = f"final verdict {last[1].status}: {last[1].rationale[:200]}"
    discarded = Discarded(stage="validate", reason=reason,
                          attempts_used=gen_budget.attempts_used)
    if last is not None and last[1].needs_manual_review:
        discarded.reason = "needs manual review: " + discarded.reason
    return discarded
