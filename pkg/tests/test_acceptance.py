"""Acceptance suite: one test per criterion, at the stated tolerance.

The terminal summary prints one pass/fail line per criterion (see conftest).
Criterion 7 is environment-gated and skips unless a real JDK and a real
bytecode-level analyzer are installed.
"""

import itertools
import json
import os
import shutil
import subprocess
import time
from pathlib import Path

import pytest

from campaign_fixture import write_campaign_fixture
from conftest import make_gateway
from ruleprobe import build_exec
from ruleprobe.analyzers import AnalyzerConfig, parse_report, run_analyzer, rule_detected, \
    save_findings, load_findings, probe_version
from ruleprobe.catalog import RuleSpec
from ruleprobe.config import load_config
from ruleprobe.evaluator import DetectionMatrix, classify, TYPE1, TYPE2, CONSISTENT, SEED_MISS_ONLY
from ruleprobe.gateway import read_transcript
from ruleprobe.mutation import applicable_operators, generate_variants, certify_equivalence, \
    compile_and_run, ALL_OPERATORS
from ruleprobe.orchestrator import Campaign
from ruleprobe.seed_agent import SeedProgram, Discarded, generate_seed
from ruleprobe.validation_agent import generate_test

RULE = RuleSpec(analyzer_id="spotbugs", rule_id="RV_ABSOLUTE_VALUE_OF_HASHCODE",
                title="Bad attempt to compute absolute value of signed 32-bit hashcode",
                description="Math.abs of a hashCode overflows at the minimum integer.",
                category="correctness")

BROKEN = "```java\npublic class HashAbs {\n    public int showBug(String s) {\n        int x = \n    }\n}\n```"


@pytest.mark.acceptance(1, "deterministic mutation oracle, 100% over the corpus")
def test_criterion_1_deterministic_oracle(tmp_path, all_corpus_pairs):
    started = time.monotonic()
    assert len(all_corpus_pairs) >= 20
    operators_seen = set()
    operators_absent_somewhere = set()
    triples = 0
    for name, seed_src, test_src in all_corpus_pairs:
        _, seed_sig = compile_and_run(seed_src, test_src, None, tmp_path / name / "base")
        assert seed_sig is not None, f"corpus seed {name} must compile and run"
        seed = SeedProgram(rule_key=f"corpus/{name}", source=seed_src, entry_method="showBug",
                           buggy_lines=[], attempts_used=1, backend_id="fixture")
        ops = applicable_operators(seed_src)
        operators_seen |= ops
        operators_absent_somewhere |= set(ALL_OPERATORS) - ops
        for op in sorted(ops):
            for mutant in generate_variants(seed_src, seed.rule_key, op, rng_seed=1234, count=3):
                mutant = certify_equivalence(seed, mutant, test_src, seed_sig, None,
                                             tmp_path / name / f"{op}-{mutant.variant_index}")
                assert mutant.status == "equivalent", (name, op, mutant.variant_index)
                triples += 1
    # the corpus spans every operator's precondition, both satisfied and not
    assert operators_seen == set(ALL_OPERATORS)
    assert "FOR_WHILE_TO_DO_WHILE" in operators_absent_somewhere
    assert triples >= 100
    elapsed = time.monotonic() - started
    assert elapsed < 300, f"oracle sweep took {elapsed:.0f}s, budget is 5 minutes"


@pytest.mark.acceptance(2, "classification matches brute force on all 62 matrices")
def test_criterion_2_truth_table():
    def brute_force(seed_detected, flags):
        missed = any(not d for d in flags)
        if seed_detected:
            return TYPE1 if missed else CONSISTENT
        return TYPE2 if missed else SEED_MISS_ONLY

    cases = 0
    for n in range(5):
        for seed_detected in (True, False):
            for flags in itertools.product((True, False), repeat=n):
                matrix = DetectionMatrix(rule_key="a/r", seed_detected=seed_detected,
                                         mutant_detected={f"m{i}": d for i, d in enumerate(flags)})
                verdict = classify(matrix)
                assert verdict.kind == brute_force(seed_detected, list(flags))
                expected_witnesses = sorted(f"m{i}" for i, d in enumerate(flags) if not d)
                if verdict.kind in (TYPE1, TYPE2):
                    assert verdict.witnesses == expected_witnesses
                cases += 1
    assert cases == 62


@pytest.mark.acceptance(3, "budget enforcement: exactly 5 attempts then discarded")
def test_criterion_3_budget_enforcement(tmp_path):
    gw = make_gateway([BROKEN] * 20, tmp_path, name="seed.jsonl")
    outcome = generate_seed(RULE, gw, None, tmp_path / "seedwork")
    assert isinstance(outcome, Discarded)
    entries = read_transcript(tmp_path / "seed.jsonl")
    assert len(entries) == 5
    assert all(e["request"]["task_kind"] == "generation" for e in entries)

    seed = SeedProgram(
        rule_key=RULE.key, entry_method="showBug", buggy_lines=[5], attempts_used=1,
        backend_id="scripted",
        source=("public class HashAbs {\n\n    public int showBug(String input) {\n"
                "        int hash = input.hashCode();\n        return Math.abs(hash);\n    }\n}"))
    gw2 = make_gateway([BROKEN] * 20, tmp_path, name="test.jsonl")
    outcome2 = generate_test(seed, RULE, gw2, None, tmp_path / "testwork")
    assert isinstance(outcome2, Discarded)
    entries2 = read_transcript(tmp_path / "test.jsonl")
    assert len(entries2) == 5


@pytest.mark.acceptance(4, "temperature routing: 0.75 generation, 0.1 validation")
def test_criterion_4_temperature_routing(tmp_path):
    campaign = Campaign(load_config(write_campaign_fixture(tmp_path / "fx")))
    campaign.run()
    entries = read_transcript(campaign.root / "transcript.jsonl")
    generation = [e for e in entries if e["request"]["task_kind"] == "generation"]
    validation = [e for e in entries if e["request"]["task_kind"] == "validation"]
    assert generation and validation
    assert all(e["request"]["temperature"] == 0.75 for e in generation)
    assert all(e["request"]["temperature"] == 0.1 for e in validation)


@pytest.mark.acceptance(5, "end-to-end determinism with planted verdicts")
def test_criterion_5_end_to_end_determinism(tmp_path):
    started = time.monotonic()
    first = Campaign(load_config(write_campaign_fixture(tmp_path / "one")))
    second = Campaign(load_config(write_campaign_fixture(tmp_path / "two")))
    summary = first.run()
    second.run()
    totals = summary["totals"]
    assert (totals["type1"], totals["type2"], totals["consistent"], totals["seed_miss_only"]) == (1, 1, 1, 1)
    bytes_a = (first.root / "summary.json").read_bytes()
    bytes_b = (second.root / "summary.json").read_bytes()
    assert bytes_a == bytes_b
    elapsed = time.monotonic() - started
    assert elapsed < 60, f"campaign pair took {elapsed:.0f}s, budget is 1 minute"


@pytest.mark.acceptance(6, "report parsers against golden files + round-trip")
def test_criterion_6_report_parsers(tmp_path, reports_dir):
    sarif = parse_report("sarif_json", (reports_dir / "two_results.sarif").read_bytes(),
                         base="/work", analyzer_id="demo")
    assert [(f.rule_id, f.file, f.line_start, f.line_end) for f in sarif] == [
        ("RV_ABSOLUTE_VALUE_OF_HASHCODE", "HashAbs.java", 5, 5),
        ("NP_ALWAYS_NULL", "NullDeref.java", 4, 6),
    ]
    xml = parse_report("native_xml", (reports_dir / "bugcollection.xml").read_bytes(),
                       base="/work", analyzer_id="spotbugs")
    assert [(f.rule_id, f.file, f.line_start, f.line_end) for f in xml] == [
        ("RV_ABSOLUTE_VALUE_OF_HASHCODE", "HashAbs.java", 5, 5),
        ("DLS_DEAD_LOCAL_STORE", "", 0, 0),
    ]
    for findings in (sarif, xml):
        path = tmp_path / "roundtrip.jsonl"
        save_findings(findings, path)
        assert load_findings(path) == findings


def _spotbugs_command():
    exe = shutil.which("spotbugs")
    if exe:
        return [exe]
    home = os.environ.get("SPOTBUGS_HOME")
    if home and (Path(home) / "bin" / "spotbugs").exists():
        return [str(Path(home) / "bin" / "spotbugs")]
    return None


HAVE_JDK = shutil.which("javac") is not None and shutil.which("java") is not None
HAVE_SPOTBUGS = _spotbugs_command() is not None


@pytest.mark.acceptance(7, "worked example against a real bytecode analyzer")
@pytest.mark.skipif(not (HAVE_JDK and HAVE_SPOTBUGS),
                    reason="requires javac/java and spotbugs on PATH or SPOTBUGS_HOME")
def test_criterion_7_real_analyzer_worked_example(tmp_path):
    fixtures = Path(__file__).parent / "fixtures" / "java"
    spotbugs = _spotbugs_command()
    config = AnalyzerConfig(
        analyzer_id="spotbugs",
        invocation=spotbugs + ["-textui", "-xml:withMessages", "-output", "{output}", "{input}"],
        input_kind="compiled_artifact",
        report_format="native_xml",
        version_probe=spotbugs + ["-version"],
    )
    version = probe_version(config)
    detections = {}
    for variant in ("seed", "mutant"):
        classes = tmp_path / variant / "classes"
        classes.mkdir(parents=True)
        src = fixtures / variant / "HashAbs.java"
        subprocess.run(["javac", "-d", str(classes), str(src)], check=True, capture_output=True)
        findings = run_analyzer(config, classes, tmp_path / variant / "report.xml", base=classes)
        detections[variant] = rule_detected(findings, "RV_ABSOLUTE_VALUE_OF_HASHCODE", "HashAbs.java")
    matrix = DetectionMatrix(rule_key="spotbugs/RV_ABSOLUTE_VALUE_OF_HASHCODE",
                             seed_detected=detections["seed"],
                             mutant_detected={"UNREACHABLE_SWITCH/1": detections["mutant"]})
    verdict = classify(matrix)
    record = {"analyzer_version": version, "verdict": verdict.kind, "matrix": detections}
    (tmp_path / "integration.json").write_text(json.dumps(record, indent=2))
    assert detections["seed"] is True
    assert detections["mutant"] is False
    assert verdict.kind == TYPE1


GOOD = """public class Probe {

    public int poke(int x) {
        int y = 10 / x;
        return y;
    }
}
"""

GOOD_TEST = """public class ProbeTest {

    public void testPoke() {
        Probe subject = new Probe();
        subject.poke(0);
    }
}
"""


@pytest.mark.acceptance(8, "signature normalization: shift-invariant, behavior-sensitive")
def test_criterion_8_signature_robustness(tmp_path):
    def run_in(label, source):
        sandbox = build_exec.Sandbox(tmp_path / label)
        subject = sandbox.root / "Probe.java"
        subject.write_text(source, encoding="utf-8")
        test = sandbox.root / "ProbeTest.java"
        test.write_text(GOOD_TEST, encoding="utf-8")
        result = build_exec.compile([subject, test], sandbox)
        assert result.success, result.error_lines()
        return build_exec.run_tests(result.artifacts_dir, result.artifacts_dir, sandbox)

    base = run_in("base/deeply/nested", GOOD)
    path_shifted = run_in("other-root", GOOD)
    line_shifted = run_in("shifted", "// leading comment moves every line down\n" + GOOD)
    assert build_exec.signatures_equal(base, path_shifted)
    assert build_exec.signatures_equal(base, line_shifted)
    assert base.exception_types == ["ArithmeticException"]

    bug_fixed = run_in("fixed", GOOD.replace("10 / x", "10 / Math.max(x, 1)"))
    assert not build_exec.signatures_equal(base, bug_fixed)
