"""Compiler and interpreter semantics of the bundled toolchain."""

import io

import pytest

from ruleprobe.minijava import parse, ParseError, check_program, Interpreter, java_string_hash
from ruleprobe.minijava.interp import MiniThrow, wrap32, trunc_div, trunc_rem, java_str


def compile_errors(source):
    return [d.message for d in check_program([parse(source, source_file="T.java")])]


def run_method(source, method, args=(), class_name=None):
    unit = parse(source, source_file="T.java")
    diags = check_program([unit])
    assert not diags, diags
    buf = io.StringIO()
    interp = Interpreter([unit], stdout=buf)
    cname = class_name or unit.classes[0].name
    value = interp.invoke(cname, method, list(args))
    return value, buf.getvalue()


# ---------------------------------------------------------------- arithmetic


def test_java_string_hash_matches_jvm_values():
    assert java_string_hash("") == 0
    assert java_string_hash("a") == 97
    assert java_string_hash("hello") == 99162322
    # the classic minimum-integer hash input
    assert java_string_hash("polygenelubricants") == -2147483648


def test_int_wraps_at_32_bits():
    src = """
public class T {
    public int run() {
        int big = Integer.MAX_VALUE;
        return big + 1;
    }
}
"""
    value, _ = run_method(src, "run")
    assert value == -2147483648


def test_abs_of_min_value_stays_negative():
    src = """
public class T {
    public int run() {
        return Math.abs(Integer.MIN_VALUE);
    }
}
"""
    value, _ = run_method(src, "run")
    assert value == -2147483648


def test_division_truncates_toward_zero():
    assert trunc_div(-7, 2) == -3
    assert trunc_div(7, -2) == -3
    assert trunc_rem(-15, 12) == -3
    src = """
public class T {
    public int run(int a, int b) {
        return a / b;
    }
}
"""
    assert run_method(src, "run", [-7, 2])[0] == -3


def test_division_by_zero_raises_arithmetic_exception():
    src = """
public class T {
    public int run() {
        int zero = 0;
        return 5 / zero;
    }
}
"""
    unit = parse(src, source_file="T.java")
    assert not check_program([unit])
    interp = Interpreter([unit], stdout=io.StringIO())
    with pytest.raises(MiniThrow) as exc:
        interp.invoke("T", "run", [])
    assert exc.value.exc.type_name == "ArithmeticException"
    assert exc.value.exc.message == "/ by zero"


def test_string_concat_uses_java_formatting():
    src = """
public class T {
    public String run() {
        double d = 1.5;
        boolean b = true;
        String s = "v=" + d + " b=" + b + " n=" + null;
        return s;
    }
}
"""
    value, _ = run_method(src, "run")
    assert value == "v=1.5 b=true n=null"


def test_java_str_edge_values():
    assert java_str(True) == "true"
    assert java_str(None) == "null"
    assert java_str(2.0) == "2.0"
    assert java_str(float("nan")) == "NaN"
    assert java_str(float("inf")) == "Infinity"


# ------------------------------------------------------------- control flow


def test_switch_fallthrough_and_default():
    src = """
public class T {
    public String run(int code) {
        String out = "";
        switch (code) {
            case 1:
                out = out + "one ";
            case 2:
                out = out + "two";
                break;
            default:
                out = "other";
        }
        return out;
    }
}
"""
    assert run_method(src, "run", [1])[0] == "one two"
    assert run_method(src, "run", [2])[0] == "two"
    assert run_method(src, "run", [9])[0] == "other"


def test_do_while_runs_body_before_condition():
    src = """
public class T {
    public int run() {
        int n = 100;
        do {
            n = n + 1;
        } while (n < 10);
        return n;
    }
}
"""
    assert run_method(src, "run")[0] == 101


def test_try_catch_matches_subtypes():
    src = """
public class T {
    public String run() {
        try {
            throw new NumberFormatException("boom");
        } catch (RuntimeException e) {
            return "caught: " + e.getMessage();
        }
    }
}
"""
    assert run_method(src, "run")[0] == "caught: boom"


def test_uncaught_exception_carries_stack_frames():
    src = """
public class T {
    public void run() {
        inner();
    }

    public void inner() {
        throw new IllegalStateException("deep");
    }
}
"""
    unit = parse(src, source_file="T.java")
    assert not check_program([unit])
    interp = Interpreter([unit], stdout=io.StringIO())
    with pytest.raises(MiniThrow) as exc:
        interp.invoke("T", "run", [])
    frames = exc.value.exc.frames
    assert [(f[0], f[1]) for f in frames] == [("T", "inner"), ("T", "run")]
    assert all(f[2] == "T.java" and f[3] > 0 for f in frames)


# ------------------------------------------------------------ compile checks


def test_while_false_body_is_unreachable():
    errors = compile_errors("""
public class T {
    public void run() {
        while (false) {
            int x = 1;
        }
    }
}
""")
    assert any("unreachable statement" in e for e in errors)


def test_for_false_condition_body_is_unreachable():
    errors = compile_errors("""
public class T {
    public void run() {
        for (int i = 0; false; i = i + 1) {
            int x = 1;
        }
    }
}
""")
    assert any("unreachable statement" in e for e in errors)


def test_if_false_is_allowed_like_javac():
    assert compile_errors("""
public class T {
    public void run() {
        if (false) {
            System.out.println("never");
        }
    }
}
""") == []


def test_non_constant_false_guard_compiles():
    assert compile_errors("""
public class T {
    public void run() {
        boolean p = false;
        while (p) {
            int x = 1;
        }
    }
}
""") == []


def test_missing_return_in_empty_if_branch():
    errors = compile_errors("""
public class T {
    public String run(String output) {
        if (false) {
        } else {
            return output;
        }
    }
}
""")
    assert any("missing return statement" in e for e in errors)


def test_statement_after_return_is_unreachable():
    errors = compile_errors("""
public class T {
    public int run() {
        return 1;
        int dead = 2;
    }
}
""")
    assert any("unreachable statement" in e for e in errors)


def test_instanceof_between_unrelated_types_rejected():
    errors = compile_errors("""
public class T {
    public void run() {
        String value = "test";
        if (value instanceof Integer) {
            System.out.println("impossible");
        }
    }
}
""")
    assert any("incompatible types: String cannot be converted to Integer" in e for e in errors)


def test_undeclared_variable_reported():
    errors = compile_errors("""
public class T {
    public void run() {
        total = 3;
    }
}
""")
    assert any("cannot find symbol: variable total" in e for e in errors)


def test_string_reference_comparison_rejected():
    errors = compile_errors("""
public class T {
    public boolean run(String a, String b) {
        return a == b;
    }
}
""")
    assert any("use equals()" in e for e in errors)


def test_lossy_assignment_rejected():
    errors = compile_errors("""
public class T {
    public void run() {
        int narrow = 1.5;
    }
}
""")
    assert any("lossy conversion" in e for e in errors)


def test_while_true_without_break_counts_as_termination():
    assert compile_errors("""
public class T {
    public int run() {
        while (true) {
            int x = 1;
        }
    }
}
""") == []


def test_bare_declaration_as_branch_body_rejected():
    errors = compile_errors("""
public class T {
    public int run(boolean c) {
        if (c) int x = 1;
        return 0;
    }
}
""")
    assert any("not allowed here" in e for e in errors)


def test_parse_error_positions():
    with pytest.raises(ParseError) as exc:
        parse("public class T {\n    public void run( {\n}\n", source_file="T.java")
    assert exc.value.line == 2
