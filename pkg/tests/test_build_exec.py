"""Sandboxed compile/run and execution-signature behavior."""

import dataclasses

import pytest
from hypothesis import given, strategies as st

from ruleprobe import build_exec
from ruleprobe.build_exec import (Sandbox, ExecutionSignature, signatures_equal,
                                  normalize_stdout, normalize_frames, SandboxError,
                                  ToolchainMissingError, default_toolchain)

GOOD = """public class Good {

    public int twice(int x) {
        return x * 2;
    }
}
"""

GOOD_TEST = """public class GoodTest {

    public void testTwice() {
        Good subject = new Good();
        Assert.assertEquals(8, subject.twice(4));
    }

    public void testPrints() {
        System.out.println("hello run");
        Assert.assertTrue(true);
    }
}
"""

BAD_TYPES = """public class Bad {

    public void showBug() {
        String value = "test";
        if (value instanceof Integer) {
            System.out.println("impossible");
        }
    }
}
"""

LOOPER = """public class Looper {

    public void spin() {
        int i = 0;
        while (i >= 0) {
            i = 0;
        }
    }
}
"""

LOOPER_TEST = """public class LooperTest {

    public void testSpins() {
        Looper subject = new Looper();
        subject.spin();
    }
}
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_minimal_program_compiles(tmp_path):
    sandbox = Sandbox(tmp_path / "sb")
    result = build_exec.compile([write(tmp_path, "Good.java", GOOD)], sandbox)
    assert result.success
    assert not result.diagnostics
    assert (sandbox.artifacts_dir / "manifest.json").exists()


def test_incompatible_instanceof_reports_diagnostic(tmp_path):
    sandbox = Sandbox(tmp_path / "sb")
    result = build_exec.compile([write(tmp_path, "Bad.java", BAD_TYPES)], sandbox)
    assert not result.success
    assert any("incompatible types" in d.message for d in result.diagnostics)
    assert any(d.file == "Bad.java" and d.line == 5 for d in result.diagnostics)


def test_empty_source_set_is_a_precondition_error(tmp_path):
    with pytest.raises(SandboxError):
        build_exec.compile([], Sandbox(tmp_path / "sb"))


def test_compiling_twice_in_fresh_sandboxes_gives_equal_results(tmp_path):
    src = write(tmp_path, "Bad.java", BAD_TYPES)
    a = build_exec.compile([src], Sandbox(tmp_path / "one"))
    b = build_exec.compile([src], Sandbox(tmp_path / "two"))
    assert a.success == b.success
    assert a.diagnostics == b.diagnostics  # equal modulo elapsed time


def test_missing_toolchain_is_a_config_error(tmp_path):
    tc = default_toolchain()
    tc = dataclasses.replace(tc, compile_argv=["definitely-not-a-real-compiler", "{sources}", "{outdir}"])
    with pytest.raises(ToolchainMissingError):
        build_exec.compile([write(tmp_path, "Good.java", GOOD)], Sandbox(tmp_path / "sb"), tc)


def run_pair(tmp_path, label, subject, test):
    sandbox = Sandbox(tmp_path / label)
    result = build_exec.compile([
        write(sandbox.root, _name(subject), subject),
        write(sandbox.root, _name(test), test),
    ], sandbox)
    assert result.success, result.error_lines()
    return build_exec.run_tests(result.artifacts_dir, result.artifacts_dir, sandbox)


def _name(source):
    import re
    return re.search(r"class (\w+)", source).group(1) + ".java"


def test_run_captures_outcomes_and_stdout(tmp_path):
    sig = run_pair(tmp_path, "a", GOOD, GOOD_TEST)
    assert sig.per_test_outcomes == {"GoodTest.testTwice": "pass", "GoodTest.testPrints": "pass"}
    assert "hello run" in sig.stdout_digest
    assert sig.exception_types == []


def test_same_artifacts_run_twice_identical(tmp_path):
    a = run_pair(tmp_path, "a", GOOD, GOOD_TEST)
    b = run_pair(tmp_path, "b", GOOD, GOOD_TEST)
    assert signatures_equal(a, b)


def test_path_shifted_runs_produce_equal_signatures(tmp_path):
    # identical programs compiled in two different absolute sandbox locations
    a = run_pair(tmp_path / "deep" / "one", "x", GOOD, GOOD_TEST)
    b = run_pair(tmp_path / "elsewhere", "y", GOOD, GOOD_TEST)
    assert signatures_equal(a, b)


FAILING = """public class Fails {

    public int half(int x) {
        return x / 0;
    }
}
"""

FAILING_TEST = """public class FailsTest {

    public void testHalf() {
        Fails subject = new Fails();
        subject.half(4);
    }
}
"""


def test_line_shifted_traces_compare_equal(tmp_path):
    shifted = "// shifted by a leading comment line\n" + FAILING
    a = run_pair(tmp_path, "base", FAILING, FAILING_TEST)
    b = run_pair(tmp_path, "shift", shifted, FAILING_TEST)
    assert a.exception_types == ["ArithmeticException"] == b.exception_types
    assert a.trace_frames and a.trace_frames == b.trace_frames
    assert signatures_equal(a, b)


def test_mutant_that_fixed_the_bug_differs(tmp_path):
    fixed = FAILING.replace("x / 0", "x / 2")
    a = run_pair(tmp_path, "buggy", FAILING, FAILING_TEST)
    b = run_pair(tmp_path, "fixed", fixed, FAILING_TEST)
    assert not signatures_equal(a, b)


def test_infinite_loop_hits_step_budget_deterministically(tmp_path):
    sandbox = Sandbox(tmp_path / "loop")
    tc = dataclasses.replace(default_toolchain(), max_steps=200_000)
    result = build_exec.compile([write(sandbox.root, "Looper.java", LOOPER),
                                 write(sandbox.root, "LooperTest.java", LOOPER_TEST)], sandbox, tc)
    assert result.success
    sig = build_exec.run_tests(result.artifacts_dir, result.artifacts_dir, sandbox, tc)
    assert sig.per_test_outcomes["LooperTest.testSpins"] == "error"
    assert "ExecutionBudgetExceeded" in sig.exception_types


def test_infinite_loop_killed_at_wall_clock_cap(tmp_path):
    sandbox = Sandbox(tmp_path / "loop")
    tc = dataclasses.replace(default_toolchain(), time_cap_s=3.0, max_steps=10 ** 12)
    result = build_exec.compile([write(sandbox.root, "Looper.java", LOOPER),
                                 write(sandbox.root, "LooperTest.java", LOOPER_TEST)], sandbox, tc)
    assert result.success
    sig = build_exec.run_tests(result.artifacts_dir, result.artifacts_dir, sandbox, tc)
    assert sig.per_test_outcomes["LooperTest.testSpins"] == "error"
    assert "ExecutionTimeout" in sig.exception_types


# ------------------------------------------------------------- normalization


def test_normalize_stdout_trims_trailing_whitespace_per_line():
    assert normalize_stdout("a  \nb\t\nc") == "a\nb\nc"


frames = st.lists(st.tuples(st.text(min_size=1, max_size=6), st.text(min_size=1, max_size=6),
                            st.text(max_size=10), st.integers(0, 999)), max_size=6)


@given(frames)
def test_frame_normalization_strips_positions_and_is_idempotent(raw):
    once = normalize_frames(raw)
    assert all(len(f) == 2 for f in once)
    assert normalize_frames(once) == once


signatures = st.builds(
    ExecutionSignature,
    per_test_outcomes=st.dictionaries(st.sampled_from(["t1", "t2", "t3"]),
                                      st.sampled_from(["pass", "fail", "error"]), max_size=3),
    stdout_digest=st.text(max_size=20),
    exception_types=st.lists(st.sampled_from(["A", "B"]), max_size=3),
    trace_frames=st.lists(st.tuples(st.sampled_from(["C", "D"]), st.sampled_from(["m", "n"])), max_size=3),
)


@given(signatures, signatures, signatures)
def test_signatures_equal_is_an_equivalence_relation(a, b, c):
    assert signatures_equal(a, a)
    assert signatures_equal(a, b) == signatures_equal(b, a)
    if signatures_equal(a, b) and signatures_equal(b, c):
        assert signatures_equal(a, c)


@given(signatures)
def test_signature_json_roundtrip(sig):
    assert signatures_equal(ExecutionSignature.from_json(sig.to_json()), sig)
