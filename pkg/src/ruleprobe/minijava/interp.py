"""Tree-walking interpreter with Java numeric semantics.

int and long wrap at 32/64 bits, division truncates toward zero,
`String.hashCode()` is the 31-multiplier algorithm over 32-bit wrap, so the
classic minimum-integer hash inputs behave exactly as on a JVM. Every frame
records (class, method, file, line) so thrown exceptions carry real stack
traces for the execution signature.
"""

import math
from dataclasses import dataclass, field

from . import nodes as N
from .analysis import THROWABLE_TYPES, exception_is_subtype

INT_MIN, INT_MAX = -(2 ** 31), 2 ** 31 - 1
LONG_MIN, LONG_MAX = -(2 ** 63), 2 ** 63 - 1

MAX_CALL_DEPTH = 200


def wrap32(v: int) -> int:
    return (v + 2 ** 31) % 2 ** 32 - 2 ** 31


def wrap64(v: int) -> int:
    return (v + 2 ** 63) % 2 ** 64 - 2 ** 63


def trunc_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def trunc_rem(a: int, b: int) -> int:
    return a - trunc_div(a, b) * b


def java_string_hash(s: str) -> int:
    h = 0
    for ch in s:
        h = wrap32(wrap32(h * 31) + ord(ch))
    return h


def java_str(value) -> str:
    """Java-style string conversion for println and concatenation."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return java_double_str(value)
    if isinstance(value, MiniObject):
        return f"{value.class_name}@{value.serial:x}"
    if isinstance(value, MiniExc):
        if value.message is None:
            return value.type_name
        return f"{value.type_name}: {value.message}"
    return str(value)


def java_double_str(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    a = abs(v)
    if a != 0.0 and (a < 1e-3 or a >= 1e7):
        # Java switches to computerized scientific notation outside [1e-3, 1e7)
        text = repr(v)
        if "e" in text:
            mantissa, exp = text.split("e")
            if "." not in mantissa:
                mantissa += ".0"
            exp_val = int(exp)
            return f"{mantissa}E{exp_val}"
        return text
    text = repr(v)
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


@dataclass
class MiniObject:
    class_name: str
    serial: int = 0


@dataclass
class MiniExc:
    type_name: str
    message: str | None
    frames: list = field(default_factory=list)  # [(class, method, file, line)] innermost first


class MiniThrow(Exception):
    def __init__(self, exc: MiniExc):
        super().__init__(exc.type_name)
        self.exc = exc


class BudgetExceeded(Exception):
    """Deterministic step-budget trip; not catchable by interpreted code."""


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


@dataclass
class Frame:
    class_name: str
    method_name: str
    file: str
    line: int = 0


class Env:
    def __init__(self, parent=None):
        self.parent = parent
        self.vars = {}

    def declare(self, name, value):
        self.vars[name] = value

    def get(self, name):
        env = self
        while env is not None:
            if name in env.vars:
                return env.vars[name]
            env = env.parent
        raise KeyError(name)

    def set(self, name, value):
        env = self
        while env is not None:
            if name in env.vars:
                env.vars[name] = value
                return
            env = env.parent
        raise KeyError(name)


class Interpreter:
    def __init__(self, units, stdout, max_steps=50_000_000):
        self.stdout = stdout
        self.max_steps = max_steps
        self.steps = 0
        self.stack = []
        self.serial = 0
        self.classes = {}
        self.class_files = {}
        for unit in units:
            for cls in unit.classes:
                self.classes[cls.name] = cls
                self.class_files[cls.name] = unit.source_file

    # ------------------------------------------------------------- plumbing

    def tick(self):
        self.steps += 1
        if self.steps > self.max_steps:
            raise BudgetExceeded()

    def throw(self, type_name, message):
        frames = [(f.class_name, f.method_name, f.file, f.line) for f in reversed(self.stack)]
        raise MiniThrow(MiniExc(type_name, message, frames))

    def current_frames(self):
        return [(f.class_name, f.method_name, f.file, f.line) for f in reversed(self.stack)]

    def new_object(self, class_name):
        self.serial += 1
        return MiniObject(class_name, self.serial)

    # ------------------------------------------------------------ invocation

    def invoke(self, class_name, method_name, args):
        cls = self.classes[class_name]
        method = next(m for m in cls.methods if m.name == method_name)
        if len(self.stack) >= MAX_CALL_DEPTH:
            self.throw("StackOverflowError", None)
        frame = Frame(class_name, method_name, self.class_files.get(class_name, ""), method.line)
        env = Env()
        for p, a in zip(method.params, args):
            env.declare(p.name, coerce(p.type_name, a))
        self.stack.append(frame)
        try:
            self.exec_block(method.body, env, frame)
        except _Return as r:
            return coerce(method.return_type, r.value) if method.return_type != "void" else None
        finally:
            self.stack.pop()
        return None

    # ------------------------------------------------------------ statements

    def exec_block(self, block, env, frame):
        inner = Env(env)
        for stmt in block.statements:
            self.exec_stmt(stmt, inner, frame)

    def exec_stmt(self, stmt, env, frame):
        self.tick()
        frame.line = stmt.line
        if isinstance(stmt, N.Block):
            self.exec_block(stmt, env, frame)
        elif isinstance(stmt, N.VarDecl):
            value = self.eval(stmt.init, env, frame) if stmt.init is not None else default_value(stmt.type_name)
            env.declare(stmt.name, coerce(stmt.type_name, value))
        elif isinstance(stmt, N.Assign):
            value = self.eval(stmt.value, env, frame)
            env.set(stmt.name, coerce_like(env.get(stmt.name), stmt.value.stype, value))
        elif isinstance(stmt, N.ExprStmt):
            self.eval(stmt.expr, env, frame)
        elif isinstance(stmt, N.If):
            if self.eval(stmt.cond, env, frame):
                self.exec_stmt(stmt.then, Env(env), frame)
            elif stmt.orelse is not None:
                self.exec_stmt(stmt.orelse, Env(env), frame)
        elif isinstance(stmt, N.While):
            while self.eval(stmt.cond, env, frame):
                self.tick()
                try:
                    self.exec_stmt(stmt.body, Env(env), frame)
                except _Break:
                    break
                except _Continue:
                    continue
        elif isinstance(stmt, N.DoWhile):
            while True:
                self.tick()
                try:
                    self.exec_stmt(stmt.body, Env(env), frame)
                except _Break:
                    break
                except _Continue:
                    pass
                if not self.eval(stmt.cond, env, frame):
                    break
        elif isinstance(stmt, N.For):
            loop_env = Env(env)
            if stmt.init is not None:
                self.exec_stmt(stmt.init, loop_env, frame)
            while stmt.cond is None or self.eval(stmt.cond, loop_env, frame):
                self.tick()
                try:
                    self.exec_stmt(stmt.body, Env(loop_env), frame)
                except _Break:
                    break
                except _Continue:
                    pass
                if stmt.update is not None:
                    self.exec_stmt(stmt.update, loop_env, frame)
            frame.line = stmt.line
        elif isinstance(stmt, N.Switch):
            selector = self.eval(stmt.selector, env, frame)
            case_env = Env(env)
            matched = None
            default_index = None
            for i, case in enumerate(stmt.cases):
                if case.label is None:
                    default_index = i
                elif self.eval(case.label, case_env, frame) == selector:
                    matched = i
                    break
            if matched is None:
                matched = default_index
            if matched is not None:
                try:
                    for case in stmt.cases[matched:]:
                        for s in case.body:
                            self.exec_stmt(s, case_env, frame)
                except _Break:
                    pass
        elif isinstance(stmt, N.Break):
            raise _Break()
        elif isinstance(stmt, N.Continue):
            raise _Continue()
        elif isinstance(stmt, N.Return):
            value = self.eval(stmt.value, env, frame) if stmt.value is not None else None
            raise _Return(value)
        elif isinstance(stmt, N.Throw):
            value = self.eval(stmt.value, env, frame)
            if value is None:
                self.throw("NullPointerException", None)
            value.frames = self.current_frames()
            raise MiniThrow(value)
        elif isinstance(stmt, N.TryCatch):
            try:
                self.exec_block(stmt.body, env, frame)
            except MiniThrow as t:
                if exception_is_subtype(t.exc.type_name, stmt.exc_type):
                    handler_env = Env(env)
                    handler_env.declare(stmt.exc_name, t.exc)
                    self.exec_block(stmt.handler, handler_env, frame)
                else:
                    raise
        else:
            raise AssertionError(f"unhandled statement {type(stmt).__name__}")

    # ----------------------------------------------------------- expressions

    def eval(self, expr, env, frame):
        self.tick()
        if isinstance(expr, N.IntLit):
            return wrap32(expr.value)
        if isinstance(expr, N.LongLit):
            return wrap64(expr.value)
        if isinstance(expr, N.DoubleLit):
            return expr.value
        if isinstance(expr, N.BoolLit):
            return expr.value
        if isinstance(expr, N.StringLit):
            return expr.value
        if isinstance(expr, N.NullLit):
            return None
        if isinstance(expr, N.VarRef):
            return env.get(expr.name)
        if isinstance(expr, N.Unary):
            v = self.eval(expr.operand, env, frame)
            if expr.op == "!":
                return not v
            if expr.stype == "int":
                return wrap32(-v)
            if expr.stype == "long":
                return wrap64(-v)
            return -v
        if isinstance(expr, N.Binary):
            return self.eval_binary(expr, env, frame)
        if isinstance(expr, N.InstanceOf):
            v = self.eval(expr.target, env, frame)
            if v is None:
                return False
            if isinstance(v, str):
                return expr.type_name == "String"
            if isinstance(v, MiniExc):
                return exception_is_subtype(v.type_name, expr.type_name)
            if isinstance(v, MiniObject):
                return v.class_name == expr.type_name
            return False
        if isinstance(expr, N.FieldAccess):
            table = {
                ("Integer", "MIN_VALUE"): INT_MIN, ("Integer", "MAX_VALUE"): INT_MAX,
                ("Long", "MIN_VALUE"): LONG_MIN, ("Long", "MAX_VALUE"): LONG_MAX,
            }
            return table[(expr.qualifier, expr.name)]
        if isinstance(expr, N.Call):
            return self.eval_call(expr, env, frame)
        if isinstance(expr, N.New):
            return self.eval_new(expr, env, frame)
        raise AssertionError(f"unhandled expression {type(expr).__name__}")

    def eval_binary(self, expr, env, frame):
        op = expr.op
        if op == "&&":
            return bool(self.eval(expr.left, env, frame)) and bool(self.eval(expr.right, env, frame))
        if op == "||":
            return bool(self.eval(expr.left, env, frame)) or bool(self.eval(expr.right, env, frame))
        left = self.eval(expr.left, env, frame)
        right = self.eval(expr.right, env, frame)
        if op == "+" and expr.stype == "String":
            return java_str(left) + java_str(right)
        if op in ("==", "!="):
            eq = self.values_equal(expr, left, right)
            return eq if op == "==" else not eq
        if op in ("<", "<=", ">", ">="):
            return {"<": left < right, "<=": left <= right, ">": left > right, ">=": left >= right}[op]
        return self.arith(expr, op, left, right)

    def values_equal(self, expr, left, right):
        lt = expr.left.stype
        rt = expr.right.stype
        if lt in ("int", "long", "double") and rt in ("int", "long", "double"):
            return left == right
        if isinstance(left, MiniObject) or isinstance(right, MiniObject):
            return left is right
        if isinstance(left, MiniExc) or isinstance(right, MiniExc):
            return left is right
        return left == right  # boolean == boolean, or null comparisons

    def arith(self, expr, op, left, right):
        if expr.stype == "double":
            left = float(left)
            right = float(right)
            if op == "+":
                return left + right
            if op == "-":
                return left - right
            if op == "*":
                return left * right
            if op == "/":
                if right == 0.0:
                    if left == 0.0 or math.isnan(left):
                        return math.nan
                    return math.copysign(math.inf, left * math.copysign(1.0, right))
                return left / right
            if right == 0.0:
                return math.nan
            return math.fmod(left, right)
        wrap = wrap32 if expr.stype == "int" else wrap64
        if op == "+":
            return wrap(left + right)
        if op == "-":
            return wrap(left - right)
        if op == "*":
            return wrap(left * right)
        if right == 0:
            self.throw("ArithmeticException", "/ by zero")
        if op == "/":
            return wrap(trunc_div(left, right))
        return wrap(trunc_rem(left, right))

    def eval_call(self, expr, env, frame):
        # console
        if isinstance(expr.receiver, N.FieldAccess) and expr.receiver.stype == "__console":
            text = java_str(self.eval(expr.args[0], env, frame)) if expr.args else ""
            self.stdout.write(text + ("\n" if expr.method == "println" else ""))
            return None
        args = [self.eval(a, env, frame) for a in expr.args]
        # static builtin or static user call: checker cleared .receiver
        if expr.receiver is None and expr.receiver_name is not None:
            if expr.receiver_name in self.classes:
                return self.invoke(expr.receiver_name, expr.method, args)
            return self.builtin_static(expr, args)
        # same-class call
        if expr.receiver is None and expr.receiver_name is None:
            return self.invoke(frame.class_name, expr.method, args)
        receiver = self.eval(expr.receiver, env, frame)
        return self.instance_dispatch(expr, receiver, args)

    def builtin_static(self, expr, args):
        owner = expr.receiver_name
        name = expr.method
        if owner == "Math":
            if name == "abs":
                v = args[0]
                if expr.stype == "int":
                    return wrap32(abs(v))
                if expr.stype == "long":
                    return wrap64(abs(v))
                return abs(float(v))
            if name == "max":
                vals = [float(a) for a in args] if expr.stype == "double" else args
                return max(vals)
            if name == "min":
                vals = [float(a) for a in args] if expr.stype == "double" else args
                return min(vals)
            if name == "sqrt":
                v = float(args[0])
                return math.sqrt(v) if v >= 0 else math.nan
            if name == "floorDiv":
                if args[1] == 0:
                    self.throw("ArithmeticException", "/ by zero")
                wrap = wrap32 if expr.stype == "int" else wrap64
                return wrap(args[0] // args[1])
        if owner == "Integer":
            if name == "parseInt":
                return self.parse_integer(args[0], INT_MIN, INT_MAX)
            if name == "toString":
                return str(args[0])
            if name == "valueOf":
                return args[0]
        if owner == "Long":
            if name == "parseLong":
                return self.parse_integer(args[0], LONG_MIN, LONG_MAX)
            if name == "toString":
                return str(args[0])
        if owner == "String" and name == "valueOf":
            return java_str(args[0])
        if owner == "Assert":
            return self.run_assert(expr, name, args)
        raise AssertionError(f"unknown builtin {owner}.{name}")

    def parse_integer(self, text, lo, hi):
        if text is None:
            self.throw("NumberFormatException", "Cannot parse null string")
        body = text[1:] if text[:1] in "+-" else text
        if not body.isdigit():
            self.throw("NumberFormatException", f'For input string: "{text}"')
        value = int(text, 10)
        if not lo <= value <= hi:
            self.throw("NumberFormatException", f'For input string: "{text}"')
        return value

    def run_assert(self, expr, name, args):
        if name == "fail":
            self.throw("AssertionError", args[0] if args else None)
        if name in ("assertTrue", "assertFalse"):
            if len(args) == 2:
                message, cond = args
            else:
                message, cond = None, args[0]
            ok = bool(cond) if name == "assertTrue" else not cond
            if not ok:
                self.throw("AssertionError", message)
            return None
        if name == "assertEquals":
            expected, actual = args
            lt = expr.args[0].stype
            rt = expr.args[1].stype
            numeric = lt in ("int", "long", "double") and rt in ("int", "long", "double")
            same = (expected == actual) if numeric else self.values_equal_raw(expected, actual)
            if not same:
                self.throw("AssertionError", f"expected:<{java_str(expected)}> but was:<{java_str(actual)}>")
            return None
        raise AssertionError(f"unknown Assert method {name}")

    def values_equal_raw(self, a, b):
        if isinstance(a, (MiniObject, MiniExc)) or isinstance(b, (MiniObject, MiniExc)):
            return a is b
        return a == b

    def instance_dispatch(self, expr, receiver, args):
        if receiver is None:
            self.throw("NullPointerException",
                       f'Cannot invoke method "{expr.method}()" because the receiver is null')
        if isinstance(receiver, str):
            return self.string_method(expr, receiver, args)
        if isinstance(receiver, MiniExc):
            if expr.method == "getMessage":
                return receiver.message
        if isinstance(receiver, MiniObject):
            return self.invoke(receiver.class_name, expr.method, args)
        raise AssertionError(f"bad receiver for {expr.method}")

    def string_method(self, expr, s, args):
        name = expr.method
        if name == "hashCode":
            return java_string_hash(s)
        if name == "length":
            return len(s)
        if name == "isEmpty":
            return len(s) == 0
        if name == "equals":
            return args[0] is not None and s == args[0]
        if name == "concat":
            if args[0] is None:
                self.throw("NullPointerException", None)
            return s + args[0]
        if name == "substring":
            start = args[0]
            end = args[1] if len(args) > 1 else len(s)
            if start < 0 or end > len(s) or start > end:
                self.throw("IndexOutOfBoundsException", f"begin {start}, end {end}, length {len(s)}")
            return s[start:end]
        if name == "indexOf":
            return s.find(args[0])
        if name == "contains":
            return args[0] in s
        if name == "startsWith":
            return s.startswith(args[0])
        if name == "endsWith":
            return s.endswith(args[0])
        if name == "toUpperCase":
            return s.upper()
        if name == "toLowerCase":
            return s.lower()
        if name == "trim":
            return s.strip()
        if name == "repeat":
            if args[0] < 0:
                self.throw("IllegalArgumentException", f"count is negative: {args[0]}")
            return s * args[0]
        raise AssertionError(f"unknown String method {name}")

    def eval_new(self, expr, env, frame):
        args = [self.eval(a, env, frame) for a in expr.args]
        if expr.class_name in THROWABLE_TYPES:
            return MiniExc(expr.class_name, args[0] if args else None, [])
        return self.new_object(expr.class_name)


def default_value(type_name):
    return {"int": 0, "long": 0, "double": 0.0, "boolean": False}.get(type_name)


def coerce(type_name, value):
    """Apply Java widening/wrapping at assignment boundaries."""
    if type_name == "double" and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if type_name == "int" and isinstance(value, int) and not isinstance(value, bool):
        return wrap32(value)
    if type_name == "long" and isinstance(value, int) and not isinstance(value, bool):
        return wrap64(value)
    return value


def coerce_like(current, src_type, value):
    if isinstance(current, float) and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value
