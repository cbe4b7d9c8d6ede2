"""Campaign driver: per-rule pipeline with persisted, resumable stage state.

Each rule owns a workspace directory and advances through
pending -> seeded -> validated -> mutated -> analyzed -> evaluated,
one JSON state file per rule. Stages are idempotent over completed work;
re-running a campaign resumes from the persisted states. One rule's failure
marks only that rule failed and never aborts the campaign.

Workspace layout:
    <root>/transcript.jsonl
    <root>/rules/<analyzer>/<rule_id>/state.json
    <root>/rules/<analyzer>/<rule_id>/{seed,test,mutants,reports,verdict}/
    <root>/summary.json, summary.txt
"""

import fnmatch
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import build_exec, evaluator
from .analyzers import run_analyzer, rule_detected, save_findings, load_findings, probe_version
from .catalog import load_catalog, filter_rules
from .config import CampaignConfig, ConfigError, build_gateway
from .evaluator import DetectionMatrix, classify, build_summary, write_summary
from .mutation import applicable_operators, generate_variants, mutate_llm, certify_equivalence
from .seed_agent import (RefinementBudget, SeedProgram, Discarded,
                         generate_seed, write_seed_metadata, _source_name)
from .validation_agent import validate_seed

log = logging.getLogger(__name__)

STAGES = ("pending", "seeded", "validated", "mutated", "analyzed", "evaluated")

STAGE_COMMANDS = {
    "generate": ("pending", "seeded", "seed"),
    "validate": ("seeded", "validated", "test"),
    "mutate": ("validated", "mutated", "mutants"),
    "analyze": ("mutated", "analyzed", "reports"),
    "evaluate": ("analyzed", "evaluated", "verdict"),
}


class StageOrderError(Exception):
    pass


class CampaignFailures(Exception):
    """Campaign completed, but one or more rules failed."""


@dataclass
class RuleJobState:
    rule_key: str
    stage: str = "pending"
    failed_stage: str | None = None
    failure_reason: str | None = None
    timestamps: dict = field(default_factory=dict)
    counters: dict = field(default_factory=dict)
    verdict_kind: str | None = None
    manual_label: str = "unreviewed"
    root_cause_tag: str | None = None

    @property
    def failed(self):
        return self.failed_stage is not None

    def reached(self, stage):
        return STAGES.index(self.stage) >= STAGES.index(stage)

    def advance(self, stage):
        if STAGES.index(stage) <= STAGES.index(self.stage):
            raise StageOrderError(f"{self.rule_key}: cannot move {self.stage} -> {stage}")
        self.stage = stage
        self.timestamps[stage] = time.strftime("%Y-%m-%dT%H:%M:%S")

    def fail(self, stage_cmd, reason):
        self.failed_stage = stage_cmd
        self.failure_reason = str(reason)[:2000]

    def to_json(self):
        return {
            "rule_key": self.rule_key, "stage": self.stage,
            "failed_stage": self.failed_stage, "failure_reason": self.failure_reason,
            "timestamps": self.timestamps, "counters": self.counters,
            "verdict_kind": self.verdict_kind, "manual_label": self.manual_label,
            "root_cause_tag": self.root_cause_tag,
        }

    @classmethod
    def from_json(cls, d):
        return cls(rule_key=d["rule_key"], stage=d["stage"], failed_stage=d.get("failed_stage"),
                   failure_reason=d.get("failure_reason"), timestamps=d.get("timestamps", {}),
                   counters=d.get("counters", {}), verdict_kind=d.get("verdict_kind"),
                   manual_label=d.get("manual_label", "unreviewed"),
                   root_cause_tag=d.get("root_cause_tag"))


class Campaign:
    def __init__(self, config: CampaignConfig, gateway=None):
        self.config = config
        self.root = Path(config.workspace_root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.gateway = gateway or build_gateway(config, self.root / "transcript.jsonl")
        self.toolchain = config.toolchain

    # ----------------------------------------------------------- workspace

    def rule_dir(self, rule) -> Path:
        return self.root / "rules" / rule.analyzer_id / rule.rule_id

    def state_path(self, rule) -> Path:
        return self.rule_dir(rule) / "state.json"

    def load_state(self, rule) -> RuleJobState:
        path = self.state_path(rule)
        if path.exists():
            return RuleJobState.from_json(json.loads(path.read_text(encoding="utf-8")))
        return RuleJobState(rule_key=rule.key)

    def save_state(self, rule, state: RuleJobState):
        path = self.state_path(rule)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(state.to_json(), indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(path)

    def select_rules(self, pattern=None):
        rules = filter_rules(load_catalog(self.config.catalog_path), self.config.filter_policy)
        if pattern:
            rules = [r for r in rules if fnmatch.fnmatch(r.key, pattern) or pattern in r.key]
        return rules

    # -------------------------------------------------------------- stages

    def ensure_stage(self, rule, state, command):
        prereq, _, _ = STAGE_COMMANDS[command]
        if not state.reached(prereq):
            raise StageOrderError(
                f"{rule.key}: stage '{command}' requires completed '{prereq}' "
                f"(currently at '{state.stage}')")

    def force_stage(self, rule, state, command):
        """Redo a stage: reset state to its prerequisite, drop downstream outputs."""
        import shutil
        prereq, _, _ = STAGE_COMMANDS[command]
        order = list(STAGE_COMMANDS)
        for later in order[order.index(command):]:
            _, _, subdir = STAGE_COMMANDS[later]
            target = self.rule_dir(rule) / subdir
            if target.exists():
                shutil.rmtree(target)
        state.stage = prereq
        state.failed_stage = None
        state.failure_reason = None
        state.verdict_kind = None
        for later in order[order.index(command):]:
            _, done, _ = STAGE_COMMANDS[later]
            state.timestamps.pop(done, None)
        self.save_state(rule, state)

    def stage_generate(self, rule, state: RuleJobState):
        workdir = self.rule_dir(rule) / "seed"
        budget = RefinementBudget(max_attempts=self.config.budgets.max_attempts)
        seed = generate_seed(rule, self.gateway, self.toolchain, workdir, budget,
                             entry_method=self.config.entry_method)
        regenerations = 0
        while isinstance(seed, Discarded) and regenerations < self.config.budgets.regeneration_limit:
            (workdir / f"discarded-{regenerations}.json").write_text(
                json.dumps(seed.__dict__, indent=2, sort_keys=True), encoding="utf-8")
            regenerations += 1
            seed = generate_seed(rule, self.gateway, self.toolchain, workdir,
                                 RefinementBudget(max_attempts=self.config.budgets.max_attempts),
                                 entry_method=self.config.entry_method)
        if isinstance(seed, Discarded):
            state.counters["seed_compiled"] = False
            state.fail("generate", f"seed-failed: {seed.reason}")
            return
        write_seed_metadata(seed, workdir)
        state.counters["seed_compiled"] = True
        state.counters["seed_attempts"] = seed.attempts_used
        state.advance("seeded")

    def _load_seed(self, rule) -> SeedProgram:
        workdir = self.rule_dir(rule) / "seed"
        meta = json.loads((workdir / "metadata.json").read_text(encoding="utf-8"))
        source = (workdir / meta["source_file"]).read_text(encoding="utf-8").rstrip("\n")
        return SeedProgram(rule_key=rule.key, source=source, entry_method=meta["entry_method"],
                           buggy_lines=meta["buggy_lines"], attempts_used=meta["attempts_used"],
                           backend_id=meta["backend_id"], transcript_ids=meta["transcript_ids"],
                           source_path=str(workdir / meta["source_file"]))

    def stage_validate(self, rule, state: RuleJobState):
        seed = self._load_seed(rule)
        workdir = self.rule_dir(rule) / "test"
        outcome = validate_seed(seed, rule, self.gateway, self.toolchain, workdir,
                                max_attempts=self.config.budgets.max_attempts,
                                regeneration_limit=self.config.budgets.regeneration_limit)
        if isinstance(outcome, Discarded):
            state.counters["test_compiled"] = False
            state.counters["seed_valid"] = False
            state.fail("validate", f"validation-failed: {outcome.reason}")
            return
        test, verdict = outcome
        final_test = workdir / Path(test.source_path).name
        final_test.write_text(test.source + "\n", encoding="utf-8")
        (workdir / "signature.json").write_text(
            json.dumps(verdict.signature.to_json(), indent=2, sort_keys=True), encoding="utf-8")
        (workdir / "verdict.json").write_text(json.dumps({
            "status": verdict.status, "rationale": verdict.rationale,
            "needs_manual_review": verdict.needs_manual_review,
            "transcript_ids": verdict.transcript_ids,
            "test_file": Path(test.source_path).name,
            "attempts_used": test.attempts_used,
        }, indent=2, sort_keys=True), encoding="utf-8")
        state.counters["test_compiled"] = True
        state.counters["seed_valid"] = True
        state.advance("validated")

    def _load_test_source(self, rule) -> str:
        workdir = self.rule_dir(rule) / "test"
        meta = json.loads((workdir / "verdict.json").read_text(encoding="utf-8"))
        return (workdir / meta["test_file"]).read_text(encoding="utf-8").rstrip("\n")

    def _load_seed_signature(self, rule) -> build_exec.ExecutionSignature:
        workdir = self.rule_dir(rule) / "test"
        return build_exec.ExecutionSignature.from_json(
            json.loads((workdir / "signature.json").read_text(encoding="utf-8")))

    def stage_mutate(self, rule, state: RuleJobState, mode=None, variants=None, rng_seed=None):
        mode = mode or self.config.mutation_mode
        variants = variants or self.config.budgets.variants_per_operator
        rng_seed = self.config.rng_seed if rng_seed is None else rng_seed
        seed = self._load_seed(rule)
        test_source = self._load_test_source(rule)
        seed_signature = self._load_seed_signature(rule)
        mutants_dir = self.rule_dir(rule) / "mutants"
        ops = sorted(applicable_operators(seed.source))
        generated = 0
        compiled = 0
        equivalent = 0
        for op in ops:
            produced = []
            if mode in ("deterministic", "both"):
                produced.extend(generate_variants(seed.source, rule.key, op, rng_seed, count=variants))
            if mode in ("llm", "both"):
                existing = [m.source for m in produced]
                for k in range(variants):
                    out = mutate_llm(seed, op, len(existing) + 1, self.gateway, self.toolchain,
                                     mutants_dir / op / f"llm-gen-{k + 1}",
                                     RefinementBudget(max_attempts=self.config.budgets.max_attempts),
                                     existing_sources=existing)
                    if isinstance(out, Discarded):
                        generated += 1  # attempted but never compiled
                        continue
                    out.variant_index = len(produced) + 1
                    produced.append(out)
                    existing.append(out.source)
            for mutant in produced:
                generated += 1
                mdir = mutants_dir / op / str(mutant.variant_index)
                mdir.mkdir(parents=True, exist_ok=True)
                mutant = certify_equivalence(
                    seed, mutant, test_source, seed_signature, self.toolchain, mdir,
                    gateway=self.gateway if mutant.mode == "llm" else None,
                    budget=RefinementBudget(max_attempts=self.config.budgets.max_attempts))
                if mutant.status in ("compiled", "equivalent"):
                    compiled += 1
                if mutant.status == "equivalent":
                    equivalent += 1
                (mdir / _source_name(mutant.source)).write_text(mutant.source + "\n", encoding="utf-8")
                (mdir / "status.json").write_text(json.dumps({
                    "operator": op, "variant_index": mutant.variant_index,
                    "mode": mutant.mode, "status": mutant.status,
                    "attempts_used": mutant.attempts_used,
                    "transcript_ids": mutant.transcript_ids,
                    "site_label": mutant.site_label,
                    "source_file": _source_name(mutant.source),
                }, indent=2, sort_keys=True), encoding="utf-8")
        state.counters["mutants_generated"] = generated
        state.counters["mutants_compiled"] = compiled
        state.counters["mutants_equivalent"] = equivalent
        state.counters["operators_applied"] = ops
        state.advance("mutated")

    def _equivalent_mutants(self, rule):
        mutants_dir = self.rule_dir(rule) / "mutants"
        found = []
        if not mutants_dir.exists():
            return found
        for status_path in sorted(mutants_dir.glob("*/*/status.json")):
            meta = json.loads(status_path.read_text(encoding="utf-8"))
            if meta["status"] != "equivalent":
                continue
            source_path = status_path.parent / meta["source_file"]
            found.append((f"{meta['operator']}/{meta['variant_index']}", meta["operator"], source_path))
        return found

    def stage_analyze(self, rule, state: RuleJobState, analyzer_id=None):
        analyzer = self.config.analyzer_for(analyzer_id or rule.analyzer_id)
        if analyzer is None:
            raise ConfigError(f"no analyzer configured for {analyzer_id or rule.analyzer_id}")
        seed = self._load_seed(rule)
        reports_dir = self.rule_dir(rule) / "reports"
        subjects = [("seed", Path(seed.source_path))]
        subjects += [(mid, path) for mid, _, path in self._equivalent_mutants(rule)]
        for subject_id, source_path in subjects:
            subject = self._prepare_subject(analyzer, source_path, reports_dir, subject_id)
            safe = subject_id.replace("/", "-")
            raw_path = reports_dir / "raw" / f"{safe}.{_report_ext(analyzer.report_format)}"
            findings = run_analyzer(analyzer, subject, raw_path, base=source_path.parent)
            save_findings(findings, reports_dir / f"{safe}.findings.jsonl")
        state.advance("analyzed")

    def _prepare_subject(self, analyzer, source_path, reports_dir, subject_id):
        if analyzer.input_kind == "source":
            return source_path
        sandbox = build_exec.Sandbox(reports_dir / "build" / subject_id.replace("/", "-"))
        result = build_exec.compile([source_path], sandbox, self.toolchain)
        if not result.success:
            raise build_exec.SandboxError(
                f"subject stopped compiling for analysis: {result.error_lines()}")
        return Path(result.artifacts_dir)

    def stage_evaluate(self, rule, state: RuleJobState):
        seed = self._load_seed(rule)
        reports_dir = self.rule_dir(rule) / "reports"
        seed_file = Path(seed.source_path).name
        seed_findings = load_findings(reports_dir / "seed.findings.jsonl")
        seed_hit = rule_detected(seed_findings, rule.rule_id, seed_file)
        mutant_detected = {}
        witness_ops = {}
        for mid, op, path in self._equivalent_mutants(rule):
            safe = mid.replace("/", "-")
            findings = load_findings(reports_dir / f"{safe}.findings.jsonl")
            mutant_detected[mid] = rule_detected(findings, rule.rule_id, path.name)
            witness_ops[mid] = op
        matrix = DetectionMatrix(rule_key=rule.key, seed_detected=seed_hit,
                                 mutant_detected=mutant_detected)
        verdict = classify(matrix)
        verdict_dir = self.rule_dir(rule) / "verdict"
        verdict_dir.mkdir(parents=True, exist_ok=True)
        evidence = {
            "seed_source": str(Path(seed.source_path).relative_to(self.root)),
            "reports_dir": str(reports_dir.relative_to(self.root)),
            "signature": str((self.rule_dir(rule) / "test" / "signature.json").relative_to(self.root)),
        }
        record = {
            "rule_key": rule.key,
            "kind": verdict.kind,
            "witnesses": verdict.witnesses,
            "witness_operators": sorted({witness_ops[w] for w in verdict.witnesses}),
            "matrix": {"seed_detected": matrix.seed_detected,
                       "mutant_detected": dict(sorted(matrix.mutant_detected.items()))},
            "evidence": evidence,
            "manual_label": state.manual_label,
            "root_cause_tag": state.root_cause_tag,
        }
        (verdict_dir / "verdict.json").write_text(
            json.dumps(record, indent=2, sort_keys=True), encoding="utf-8")
        state.verdict_kind = verdict.kind
        state.advance("evaluated")

    # ------------------------------------------------------------ pipeline

    def run_rule(self, rule):
        """Advance one rule to its terminal state; exceptions mark it failed."""
        state = self.load_state(rule)
        if state.failed or state.stage == "evaluated":
            return state
        stage_fns = [
            ("generate", self.stage_generate, "seeded"),
            ("validate", self.stage_validate, "validated"),
            ("mutate", self.stage_mutate, "mutated"),
            ("analyze", self.stage_analyze, "analyzed"),
            ("evaluate", self.stage_evaluate, "evaluated"),
        ]
        for command, fn, done in stage_fns:
            if state.reached(done):
                continue  # resumed: stage already completed
            try:
                fn(rule, state)
            except Exception as e:
                log.exception("%s failed in %s", rule.key, command)
                state.fail(command, e)
            self.save_state(rule, state)
            if state.failed:
                break
        return state

    def run(self, pattern=None):
        """Full campaign over the filtered catalog; returns the summary dict."""
        for analyzer in self.config.analyzers:
            if analyzer.version_probe:
                version = probe_version(analyzer)
                log.info("analyzer %s: %s", analyzer.analyzer_id, version)
        rules = self.select_rules(pattern)
        # scripted replays depend on global call order, so they stay sequential
        workers = self.config.parallelism
        if getattr(self.gateway.backend, "backend_kind", "") == "scripted":
            workers = 1
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                states = list(pool.map(self.run_rule, rules))
        else:
            states = [self.run_rule(rule) for rule in rules]
        summary = self.emit_report(pattern)
        if any(s.failed for s in states):
            raise CampaignFailures(
                f"{sum(1 for s in states if s.failed)} of {len(states)} rules failed")
        return summary

    # -------------------------------------------------------------- report

    def emit_report(self, pattern=None) -> dict:
        rules = self.select_rules(pattern)
        rows = []
        reports = []
        per_operator = {}
        for rule in rules:
            state = self.load_state(rule)
            row = {
                "rule_key": rule.key,
                "stage": state.stage,
                "failed_stage": state.failed_stage,
                "seed_compiled": bool(state.counters.get("seed_compiled")),
                "test_compiled": bool(state.counters.get("test_compiled")),
                "seed_valid": bool(state.counters.get("seed_valid")),
                "mutants_generated": state.counters.get("mutants_generated", 0),
                "mutants_compiled": state.counters.get("mutants_compiled", 0),
                "mutants_equivalent": state.counters.get("mutants_equivalent", 0),
                "verdict_kind": state.verdict_kind,
                "manual_label": state.manual_label,
            }
            rows.append(row)
            verdict_path = self.rule_dir(rule) / "verdict" / "verdict.json"
            if verdict_path.exists():
                record = json.loads(verdict_path.read_text(encoding="utf-8"))
                matrix = DetectionMatrix(rule_key=rule.key,
                                         seed_detected=record["matrix"]["seed_detected"],
                                         mutant_detected=record["matrix"]["mutant_detected"])
                verdict = evaluator.Verdict(kind=record["kind"], witnesses=record["witnesses"],
                                            matrix=matrix)
                reports.append(evaluator.BugReport(
                    rule_key=rule.key, verdict=verdict, evidence=record["evidence"],
                    manual_label=state.manual_label, root_cause_tag=state.root_cause_tag,
                    witness_operators=tuple(record.get("witness_operators", ()))))
                for op in record.get("witness_operators", ()):
                    bucket = per_operator.setdefault(op, {"type1": 0, "type2": 0})
                    if record["kind"] == evaluator.TYPE1:
                        bucket["type1"] += 1
                    elif record["kind"] == evaluator.TYPE2:
                        bucket["type2"] += 1
        meta = {
            "backend": self.config.backend.backend_id,
            "analyzers": sorted(a.analyzer_id for a in self.config.analyzers),
            "toolchain": self.toolchain.toolchain_id,
            "mutation_mode": self.config.mutation_mode,
            "rng_seed": self.config.rng_seed,
            "variants_per_operator": self.config.budgets.variants_per_operator,
            "max_attempts": self.config.budgets.max_attempts,
            "temperatures": dict(sorted(self.config.temperatures.items())),
        }
        summary = build_summary(meta, rows, reports, per_operator)
        write_summary(summary, self.root / "summary.json", self.root / "summary.txt")
        return summary

    def review(self, bug_id, label, root_cause=None):
        """Attach a manual verification label to one evaluated rule."""
        rules = [r for r in self.select_rules(None) if r.key == bug_id]
        if not rules:
            raise ConfigError(f"no rule with key {bug_id!r} in the filtered catalog")
        rule = rules[0]
        state = self.load_state(rule)
        if not state.reached("evaluated"):
            raise StageOrderError(f"{bug_id}: cannot review before 'evaluate' completed")
        state.manual_label = {"tp": "true_positive", "fp": "false_positive"}[label]
        if root_cause:
            state.root_cause_tag = root_cause
        self.save_state(rule, state)
        verdict_path = self.rule_dir(rule) / "verdict" / "verdict.json"
        record = json.loads(verdict_path.read_text(encoding="utf-8"))
        record["manual_label"] = state.manual_label
        record["root_cause_tag"] = state.root_cause_tag
        verdict_path.write_text(json.dumps(record, indent=2, sort_keys=True), encoding="utf-8")
        return state


def _report_ext(report_format):
    return {"sarif_json": "sarif", "native_xml": "xml",
            "native_json": "json", "line_text": "txt"}[report_format]
