"""Seed generation: rule description in, compilable bug-seeded program out.

The generation loop is budgeted: the initial request and every repair count
against the same attempt budget (default 5), and each repair prompt carries
the full diagnostics of the immediately preceding failure. Static policy
checks (entry method present, standard-library imports only) are enforced
by scanning the source, never by trusting the model.
"""

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from string import Template

from . import build_exec
from .gateway import GENERATION, extract_code_block, extract_trailer_field, ExtractionError

DEFAULT_ENTRY_METHOD = "showBug"
DEFAULT_MAX_ATTEMPTS = 5

ALLOWED_IMPORT_PREFIXES = ("java.", "javax.")

_PROMPTS_DIR = Path(__file__).parent / "prompts"
_IMPORT_RE = re.compile(r"^\s*import\s+(?:static\s+)?([\w.]+(?:\.\*)?)\s*;", re.MULTILINE)


def load_prompt(name: str) -> tuple:
    """Returns (template, template_id); the first line names the template version."""
    text = (_PROMPTS_DIR / f"{name}.txt").read_text(encoding="utf-8")
    first, _, rest = text.partition("\n")
    template_id = first.removeprefix("# template:").strip() if first.startswith("# template:") else name
    return Template(rest), template_id


@dataclass
class RefinementBudget:
    max_attempts: int = DEFAULT_MAX_ATTEMPTS
    attempts_used: int = 0

    def spend(self):
        if self.attempts_used >= self.max_attempts:
            raise RuntimeError("budget overspent; loop bug")
        self.attempts_used += 1

    @property
    def exhausted(self):
        return self.attempts_used >= self.max_attempts


@dataclass
class SeedProgram:
    rule_key: str
    source: str
    entry_method: str
    buggy_lines: list
    attempts_used: int
    backend_id: str
    transcript_ids: list = field(default_factory=list)
    source_path: str = ""

    @property
    def class_name(self):
        m = re.search(r"\bclass\s+(\w+)", self.source)
        return m.group(1) if m else ""


@dataclass
class Discarded:
    stage: str
    reason: str
    diagnostics: str = ""
    attempts_used: int = 0
    transcript_ids: list = field(default_factory=list)


def scan_disallowed_imports(source: str) -> list:
    """Imports outside the platform standard library; empty list means clean."""
    bad = []
    for m in _IMPORT_RE.finditer(source):
        name = m.group(1)
        if not name.startswith(ALLOWED_IMPORT_PREFIXES):
            bad.append(name)
    return bad


def method_declared(source: str, name: str) -> bool:
    return re.search(rf"[\w>\]]\s+{re.escape(name)}\s*\(", source) is not None


def parse_buggy_lines(text: str | None, line_count: int) -> list:
    if not text:
        return []
    lines = []
    for part in re.split(r"[,\s]+", text.strip()):
        if not part:
            continue
        try:
            n = int(part)
        except ValueError:
            continue
        if 1 <= n <= line_count:
            lines.append(n)
    return sorted(set(lines))


def _policy_diagnostics(source: str, entry_method: str) -> list:
    problems = []
    if not method_declared(source, entry_method):
        problems.append(f"policy: required method {entry_method} is not declared")
    for name in scan_disallowed_imports(source):
        problems.append(f"policy: import {name} is not a standard library")
    return problems


def generate_seed(rule, gateway, toolchain, workdir, budget: RefinementBudget | None = None,
                  entry_method: str = DEFAULT_ENTRY_METHOD):
    """Run the budgeted generate/repair loop; returns SeedProgram or Discarded."""
    budget = budget or RefinementBudget()
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    gen_tpl, _ = load_prompt("seed_generation")
    repair_tpl, _ = load_prompt("seed_repair")

    source = None
    diagnostics = ""
    transcript_ids = []
    chosen_entry = entry_method
    buggy_lines = []

    while not budget.exhausted:
        if source is None:
            prompt = gen_tpl.substitute(
                analyzer_id=rule.analyzer_id, rule_id=rule.rule_id,
                rule_title=rule.title, rule_description=rule.description,
                entry_method=entry_method)
        else:
            prompt = repair_tpl.substitute(
                rule_title=rule.title, entry_method=entry_method,
                source=source, diagnostics=diagnostics)
        completion, entry_id = gateway.complete(GENERATION, [("user", prompt)])
        budget.spend()
        transcript_ids.append(entry_id)
        try:
            source = extract_code_block(completion, "source_file")
        except ExtractionError:
            diagnostics = "no code block could be extracted from the reply"
            source = source or ""
            continue
        trailer_entry = extract_trailer_field(completion.text, "ENTRY_METHOD")
        if trailer_entry and re.fullmatch(r"\w+", trailer_entry):
            chosen_entry = trailer_entry
        line_count = source.count("\n") + 1
        buggy_lines = parse_buggy_lines(extract_trailer_field(completion.text, "BUGGY_LINES"), line_count)

        sandbox = build_exec.Sandbox(workdir / f"attempt-{budget.attempts_used}")
        src_path = sandbox.root / _source_name(source)
        src_path.write_text(source + "\n", encoding="utf-8")
        result = build_exec.compile([src_path], sandbox, toolchain)
        problems = _policy_diagnostics(source, chosen_entry)
        if result.success and not problems:
            seed = SeedProgram(
                rule_key=rule.key, source=source, entry_method=chosen_entry,
                buggy_lines=buggy_lines, attempts_used=budget.attempts_used,
                backend_id=completion.backend_id, transcript_ids=transcript_ids)
            final_path = workdir / _source_name(source)
            final_path.write_text(source + "\n", encoding="utf-8")
            seed.source_path = str(final_path)
            return seed
        diagnostics = result.error_lines()
        if problems:
            diagnostics = (diagnostics + "\n" if diagnostics else "") + "\n".join(problems)

    return Discarded(stage="seed", reason=f"uncompilable after {budget.max_attempts} attempts",
                     diagnostics=diagnostics, attempts_used=budget.attempts_used,
                     transcript_ids=transcript_ids)


def _source_name(source: str) -> str:
    m = re.search(r"\bclass\s+(\w+)", source)
    return f"{m.group(1)}.java" if m else "Seed.java"


def write_seed_metadata(seed: SeedProgram, workdir) -> Path:
    """Persist the seed record; read-back must equal what was written."""
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    path = workdir / "metadata.json"
    record = {
        "rule_key": seed.rule_key,
        "entry_method": seed.entry_method,
        "buggy_lines": list(seed.buggy_lines),
        "attempts_used": seed.attempts_used,
        "backend_id": seed.backend_id,
        "transcript_ids": list(seed.transcript_ids),
        "source_file": Path(seed.source_path).name if seed.source_path else "",
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(record, indent=2, sort_keys=True), encoding="utf-8")
    tmp.replace(path)
    return path


def read_seed_metadata(workdir) -> dict:
    return json.loads((Path(workdir) / "metadata.json").read_text(encoding="utf-8"))
