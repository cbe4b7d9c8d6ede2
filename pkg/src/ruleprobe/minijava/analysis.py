"""Static checks: name resolution, type checking, reachability, definite return.

The checker mirrors the javac behaviors that matter for this toolchain's
users: `while (false) { ... }` and `for (; false;)` bodies are unreachable
statements (errors), `if (false)` is permitted, and a non-void method whose
body can complete normally is a missing-return error. Constant conditions
are literals only, so a non-final `boolean b = false;` guard compiles.
"""

from dataclasses import dataclass

from . import nodes as N

NUMERIC = ("int", "long", "double")

EXCEPTION_PARENTS = {
    "ArithmeticException": "RuntimeException",
    "NullPointerException": "RuntimeException",
    "IllegalStateException": "RuntimeException",
    "NumberFormatException": "IllegalArgumentException",
    "IllegalArgumentException": "RuntimeException",
    "IndexOutOfBoundsException": "RuntimeException",
    "RuntimeException": "Exception",
    "AssertionError": "Error",
    "StackOverflowError": "Error",
    "Exception": "Throwable",
    "Error": "Throwable",
    "Throwable": None,
}

THROWABLE_TYPES = set(EXCEPTION_PARENTS)

# name -> {method -> list of (param_types, return_type)}; "num" widens over int/long/double
STATIC_METHODS = {
    "Math": {
        "abs": [(("int",), "int"), (("long",), "long"), (("double",), "double")],
        "max": [(("int", "int"), "int"), (("long", "long"), "long"), (("double", "double"), "double")],
        "min": [(("int", "int"), "int"), (("long", "long"), "long"), (("double", "double"), "double")],
        "sqrt": [(("double",), "double")],
        "floorDiv": [(("int", "int"), "int"), (("long", "long"), "long")],
    },
    "Integer": {
        "parseInt": [(("String",), "int")],
        "toString": [(("int",), "String")],
        "valueOf": [(("int",), "int")],
    },
    "Long": {
        "parseLong": [(("String",), "long")],
        "toString": [(("long",), "String")],
    },
    "String": {
        "valueOf": [(("int",), "String"), (("long",), "String"), (("double",), "String"), (("boolean",), "String")],
    },
    "Assert": {
        "assertTrue": [(("boolean",), "void"), (("String", "boolean"), "void")],
        "assertFalse": [(("boolean",), "void"), (("String", "boolean"), "void")],
        "assertEquals": [(("any", "any"), "void")],
        "fail": [((), "void"), (("String",), "void")],
    },
}

STATIC_FIELDS = {
    ("Integer", "MIN_VALUE"): "int",
    ("Integer", "MAX_VALUE"): "int",
    ("Long", "MIN_VALUE"): "long",
    ("Long", "MAX_VALUE"): "long",
}

STRING_METHODS = {
    "hashCode": [((), "int")],
    "length": [((), "int")],
    "isEmpty": [((), "boolean")],
    "equals": [(("String",), "boolean")],
    "concat": [(("String",), "String")],
    "substring": [(("int",), "String"), (("int", "int"), "String")],
    "indexOf": [(("String",), "int")],
    "contains": [(("String",), "boolean")],
    "startsWith": [(("String",), "boolean")],
    "endsWith": [(("String",), "boolean")],
    "toUpperCase": [((), "String")],
    "toLowerCase": [((), "String")],
    "trim": [((), "String")],
    "repeat": [(("int",), "String")],
}

THROWABLE_METHODS = {
    "getMessage": [((), "String")],
}

BUILTIN_CLASS_NAMES = set(STATIC_METHODS) | THROWABLE_TYPES | {"System", "String"}

# reference types accepted on the right of instanceof
INSTANCEOF_TARGETS = THROWABLE_TYPES | {"String", "Integer", "Long", "Double", "Boolean", "Object"}


@dataclass
class Diagnostic:
    file: str
    line: int
    col: int
    message: str

    def render(self):
        return f"{self.file}:{self.line}:{self.col}: error: {self.message}"


def exception_is_subtype(sub: str, sup: str) -> bool:
    cur = sub
    while cur is not None:
        if cur == sup:
            return True
        cur = EXCEPTION_PARENTS.get(cur)
    return False


def is_numeric(t):
    return t in NUMERIC


def promote(a, b):
    if "double" in (a, b):
        return "double"
    if "long" in (a, b):
        return "long"
    return "int"


def assignable(target, src):
    if target == src:
        return True
    if target == "long" and src == "int":
        return True
    if target == "double" and src in ("int", "long"):
        return True
    if src == "null" and target not in NUMERIC and target not in ("boolean", "void"):
        return True
    if target in THROWABLE_TYPES and src in THROWABLE_TYPES:
        return exception_is_subtype(src, target)
    return False


class Scope:
    def __init__(self, parent=None):
        self.parent = parent
        self.vars = {}

    def declare(self, name, type_name):
        self.vars[name] = type_name

    def lookup(self, name):
        scope = self
        while scope is not None:
            if name in scope.vars:
                return scope.vars[name]
            scope = scope.parent
        return None

    def declared_here_or_above(self, name):
        return self.lookup(name) is not None


class Checker:
    """Checks one program: every class from every compilation unit, jointly."""

    def __init__(self, units):
        self.units = units
        self.diags = []
        self.classes = {}
        for unit in units:
            for cls in unit.classes:
                if cls.name in self.classes:
                    self.error(unit.source_file, cls, f"duplicate class {cls.name}")
                else:
                    self.classes[cls.name] = (cls, unit.source_file)

    def error(self, file, node, message):
        self.diags.append(Diagnostic(file, node.line, node.col, message))

    def run(self):
        for unit in self.units:
            for cls in unit.classes:
                seen = {}
                for method in cls.methods:
                    key = method.name
                    if key in seen:
                        self.error(unit.source_file, method, f"method {method.name} is already defined in class {cls.name}")
                    seen[key] = method
                for method in cls.methods:
                    self.check_method(unit.source_file, cls, method)
        return self.diags

    def known_type(self, name):
        return name in ("int", "long", "double", "boolean", "String", "void") \
            or name in self.classes or name in THROWABLE_TYPES

    # ------------------------------------------------------------- statements

    def check_method(self, file, cls, method):
        self.file = file
        self.cls = cls
        self.method = method
        if not self.known_type(method.return_type):
            self.error(file, method, f"cannot find symbol: class {method.return_type}")
        scope = Scope()
        for p in method.params:
            if not self.known_type(p.type_name) or p.type_name == "void":
                self.error(file, p, f"cannot find symbol: class {p.type_name}")
            if p.name in scope.vars:
                self.error(file, p, f"variable {p.name} is already defined in method {method.name}")
            scope.declare(p.name, p.type_name)
        can_complete = self.check_block(method.body, scope, in_loop=False, in_switch=False)
        if method.return_type != "void" and can_complete:
            self.diags.append(Diagnostic(file, method.body.end_line or method.line, 1, "missing return statement"))

    def check_block(self, block, parent_scope, in_loop, in_switch):
        scope = Scope(parent_scope)
        reachable = True
        reported_unreachable = False
        for stmt in block.statements:
            if not reachable and not reported_unreachable:
                self.error(self.file, stmt, "unreachable statement")
                reported_unreachable = True
            cc = self.check_stmt(stmt, scope, in_loop, in_switch)
            reachable = reachable and cc
        return reachable

    def check_stmt(self, stmt, scope, in_loop, in_switch):
        """Type-check one statement; returns True iff it can complete normally."""
        if isinstance(stmt, N.Block):
            return self.check_block(stmt, scope, in_loop, in_switch)
        if isinstance(stmt, N.VarDecl):
            if not self.known_type(stmt.type_name) or stmt.type_name == "void":
                self.error(self.file, stmt, f"cannot find symbol: class {stmt.type_name}")
            if stmt.name in scope.vars or scope.declared_here_or_above(stmt.name):
                self.error(self.file, stmt, f"variable {stmt.name} is already defined")
            if stmt.init is not None:
                t = self.type_of(stmt.init, scope)
                if t is not None and not assignable(stmt.type_name, t):
                    self.error(self.file, stmt, self.conversion_error(stmt.type_name, t))
            scope.declare(stmt.name, stmt.type_name)
            return True
        if isinstance(stmt, N.Assign):
            declared = scope.lookup(stmt.name)
            if declared is None:
                self.error(self.file, stmt, f"cannot find symbol: variable {stmt.name}")
                self.type_of(stmt.value, scope)
                return True
            t = self.type_of(stmt.value, scope)
            if t is not None and not assignable(declared, t):
                self.error(self.file, stmt, self.conversion_error(declared, t))
            return True
        if isinstance(stmt, N.ExprStmt):
            self.type_of(stmt.expr, scope)
            return True
        if isinstance(stmt, N.If):
            self.require_boolean(stmt.cond, scope)
            self.reject_bare_declaration(stmt.then)
            self.reject_bare_declaration(stmt.orelse)
            then_cc = self.check_stmt(stmt.then, scope, in_loop, in_switch)
            if stmt.orelse is None:
                # if-then can always complete normally (javac conditional-compilation rule)
                return True
            else_cc = self.check_stmt(stmt.orelse, scope, in_loop, in_switch)
            return then_cc or else_cc
        if isinstance(stmt, N.While):
            const = self.const_bool(stmt.cond)
            self.require_boolean(stmt.cond, scope)
            self.reject_bare_declaration(stmt.body)
            if const is False:
                self.error(self.file, stmt.body, "unreachable statement")
                return True
            self.check_stmt(stmt.body, scope, in_loop=True, in_switch=in_switch)
            if const is True and not contains_break(stmt.body):
                return False
            return True
        if isinstance(stmt, N.DoWhile):
            self.reject_bare_declaration(stmt.body)
            body_cc = self.check_stmt(stmt.body, scope, in_loop=True, in_switch=in_switch)
            const = self.const_bool(stmt.cond)
            self.require_boolean(stmt.cond, scope)
            if contains_break(stmt.body):
                return True
            if not body_cc and not contains_continue(stmt.body):
                return False
            if const is True:
                return False
            return True
        if isinstance(stmt, N.For):
            for_scope = Scope(scope)
            self.reject_bare_declaration(stmt.body)
            if stmt.init is not None:
                self.check_stmt(stmt.init, for_scope, in_loop, in_switch)
            const = None
            if stmt.cond is not None:
                const = self.const_bool(stmt.cond)
                self.require_boolean(stmt.cond, for_scope)
            if const is False:
                self.error(self.file, stmt.body, "unreachable statement")
                return True
            self.check_stmt(stmt.body, for_scope, in_loop=True, in_switch=in_switch)
            if stmt.update is not None:
                self.check_stmt(stmt.update, for_scope, in_loop=True, in_switch=in_switch)
            if (stmt.cond is None or const is True) and not contains_break(stmt.body):
                return False
            return True
        if isinstance(stmt, N.Switch):
            sel = self.type_of(stmt.selector, scope)
            if sel is not None and sel != "int":
                self.error(self.file, stmt, f"incompatible types: {sel} cannot be converted to int")
            labels = set()
            for case in stmt.cases:
                if case.label is not None:
                    value = self.const_int(case.label)
                    if value is None:
                        self.error(self.file, case, "constant expression required")
                    elif value in labels:
                        self.error(self.file, case, "duplicate case label")
                    else:
                        labels.add(value)
                case_scope = Scope(scope)
                for s in case.body:
                    self.check_stmt(s, case_scope, in_loop, in_switch=True)
            return True
        if isinstance(stmt, N.Break):
            if not in_loop and not in_switch:
                self.error(self.file, stmt, "break outside switch or loop")
            return False
        if isinstance(stmt, N.Continue):
            if not in_loop:
                self.error(self.file, stmt, "continue outside of loop")
            return False
        if isinstance(stmt, N.Return):
            rt = self.method.return_type
            if stmt.value is None:
                if rt != "void":
                    self.error(self.file, stmt, "missing return value")
            else:
                if rt == "void":
                    self.error(self.file, stmt, "incompatible types: unexpected return value")
                else:
                    t = self.type_of(stmt.value, scope)
                    if t is not None and not assignable(rt, t):
                        self.error(self.file, stmt, self.conversion_error(rt, t))
            return False
        if isinstance(stmt, N.Throw):
            t = self.type_of(stmt.value, scope)
            if t is not None and t != "null" and t not in THROWABLE_TYPES:
                self.error(self.file, stmt, f"incompatible types: {t} cannot be converted to Throwable")
            return False
        if isinstance(stmt, N.TryCatch):
            body_cc = self.check_block(stmt.body, scope, in_loop, in_switch)
            if stmt.exc_type not in THROWABLE_TYPES:
                self.error(self.file, stmt, f"cannot find symbol: class {stmt.exc_type}")
            handler_scope = Scope(scope)
            handler_scope.declare(stmt.exc_name, stmt.exc_type if stmt.exc_type in THROWABLE_TYPES else "Throwable")
            handler_cc = self.check_block(stmt.handler, handler_scope, in_loop, in_switch)
            return body_cc or handler_cc
        raise AssertionError(f"unhandled statement {type(stmt).__name__}")

    def reject_bare_declaration(self, body):
        if isinstance(body, N.VarDecl):
            self.error(self.file, body, "variable declaration not allowed here")

    def conversion_error(self, target, src):
        if is_numeric(target) and is_numeric(src):
            return f"incompatible types: possible lossy conversion from {src} to {target}"
        return f"incompatible types: {src} cannot be converted to {target}"

    def const_bool(self, expr):
        if isinstance(expr, N.BoolLit):
            return expr.value
        return None

    def const_int(self, expr):
        if isinstance(expr, N.IntLit):
            return expr.value
        if isinstance(expr, N.Unary) and expr.op == "-" and isinstance(expr.operand, N.IntLit):
            return -expr.operand.value
        return None

    def require_boolean(self, expr, scope):
        t = self.type_of(expr, scope)
        if t is not None and t != "boolean":
            self.error(self.file, expr, f"incompatible types: {t} cannot be converted to boolean")

    # ------------------------------------------------------------ expressions

    def type_of(self, expr, scope):
        """Annotates expr.stype and returns it; None means already-reported error."""
        t = self._type_of(expr, scope)
        expr.stype = t
        return t

    def _type_of(self, expr, scope):
        if isinstance(expr, N.IntLit):
            return "int"
        if isinstance(expr, N.LongLit):
            return "long"
        if isinstance(expr, N.DoubleLit):
            return "double"
        if isinstance(expr, N.BoolLit):
            return "boolean"
        if isinstance(expr, N.StringLit):
            return "String"
        if isinstance(expr, N.NullLit):
            return "null"
        if isinstance(expr, N.VarRef):
            t = scope.lookup(expr.name)
            if t is None:
                self.error(self.file, expr, f"cannot find symbol: variable {expr.name}")
            return t
        if isinstance(expr, N.Unary):
            t = self.type_of(expr.operand, scope)
            if t is None:
                return None
            if expr.op == "-":
                if not is_numeric(t):
                    self.error(self.file, expr, f"bad operand type {t} for unary operator '-'")
                    return None
                return t
            if t != "boolean":
                self.error(self.file, expr, f"bad operand type {t} for unary operator '!'")
                return None
            return "boolean"
        if isinstance(expr, N.Binary):
            return self.type_of_binary(expr, scope)
        if isinstance(expr, N.InstanceOf):
            t = self.type_of(expr.target, scope)
            known_target = expr.type_name in INSTANCEOF_TARGETS or expr.type_name in self.classes
            if not known_target:
                self.error(self.file, expr, f"cannot find symbol: class {expr.type_name}")
                return "boolean"
            if t is not None:
                if is_numeric(t) or t == "boolean":
                    self.error(self.file, expr, f"unexpected type: {t} cannot be used with instanceof")
                elif t != "null" and t != expr.type_name and expr.type_name != "Object" \
                        and not self.ref_related(t, expr.type_name):
                    self.error(self.file, expr, f"incompatible types: {t} cannot be converted to {expr.type_name}")
            return "boolean"
        if isinstance(expr, N.FieldAccess):
            if (expr.qualifier, expr.name) in STATIC_FIELDS:
                return STATIC_FIELDS[(expr.qualifier, expr.name)]
            if expr.qualifier == "System" and expr.name == "out":
                return "__console"
            if scope.lookup(expr.qualifier) is not None:
                self.error(self.file, expr, f"cannot find symbol: field {expr.name}")
            else:
                self.error(self.file, expr, f"cannot find symbol: {expr.qualifier}.{expr.name}")
            return None
        if isinstance(expr, N.Call):
            return self.type_of_call(expr, scope)
        if isinstance(expr, N.New):
            return self.type_of_new(expr, scope)
        raise AssertionError(f"unhandled expression {type(expr).__name__}")

    def ref_related(self, a, b):
        if a in THROWABLE_TYPES and b in THROWABLE_TYPES:
            return exception_is_subtype(a, b) or exception_is_subtype(b, a)
        return False

    def type_of_binary(self, expr, scope):
        lt = self.type_of(expr.left, scope)
        rt = self.type_of(expr.right, scope)
        op = expr.op
        if lt is None or rt is None:
            return None
        if op == "+" and ("String" in (lt, rt)):
            if "void" in (lt, rt) or "__console" in (lt, rt):
                self.error(self.file, expr, "bad operand types for string concatenation")
                return None
            return "String"
        if op in ("+", "-", "*", "/", "%"):
            if not (is_numeric(lt) and is_numeric(rt)):
                self.error(self.file, expr, f"bad operand types for binary operator '{op}': {lt}, {rt}")
                return None
            return promote(lt, rt)
        if op in ("<", "<=", ">", ">="):
            if not (is_numeric(lt) and is_numeric(rt)):
                self.error(self.file, expr, f"bad operand types for binary operator '{op}': {lt}, {rt}")
            return "boolean"
        if op in ("==", "!="):
            if is_numeric(lt) and is_numeric(rt):
                return "boolean"
            if lt == "boolean" and rt == "boolean":
                return "boolean"
            if lt == "String" and rt == "String":
                self.error(self.file, expr, "reference comparison of String values is outside the subset; use equals()")
                return "boolean"
            if "null" in (lt, rt):
                other = rt if lt == "null" else lt
                if is_numeric(other) or other == "boolean":
                    self.error(self.file, expr, f"incomparable types: {lt} and {rt}")
                return "boolean"
            if lt == rt or self.ref_related(lt, rt):
                return "boolean"
            self.error(self.file, expr, f"incomparable types: {lt} and {rt}")
            return "boolean"
        if op in ("&&", "||"):
            if lt != "boolean" or rt != "boolean":
                self.error(self.file, expr, f"bad operand types for binary operator '{op}': {lt}, {rt}")
            return "boolean"
        raise AssertionError(f"unhandled operator {op}")

    def match_overload(self, overloads, arg_types):
        for params, ret in overloads:
            if len(params) != len(arg_types):
                continue
            ok = True
            for want, got in zip(params, arg_types):
                if want == "any":
                    continue
                if got is None or not assignable(want, got):
                    ok = False
                    break
            if ok:
                return ret
        return None

    def check_args_against(self, expr, owner, overloads, arg_types):
        ret = self.match_overload(overloads, arg_types)
        if ret is None:
            shown = ",".join(t or "?" for t in arg_types)
            self.error(self.file, expr, f"no suitable method {expr.method}({shown}) in {owner}")
        return ret

    def type_of_call(self, expr, scope):
        arg_types = [self.type_of(a, scope) for a in expr.args]
        # console: System.out.println(...)
        if isinstance(expr.receiver, N.FieldAccess) and expr.receiver.qualifier == "System" and expr.receiver.name == "out":
            expr.receiver.stype = "__console"
            if expr.method not in ("println", "print"):
                self.error(self.file, expr, f"cannot find symbol: method {expr.method} on System.out")
            elif len(expr.args) > 1:
                self.error(self.file, expr, f"too many arguments to {expr.method}")
            elif expr.args and (arg_types[0] in ("void", "__console")):
                self.error(self.file, expr, f"bad argument type for {expr.method}")
            return "void"
        # unqualified: same-class method
        if expr.receiver is None and expr.receiver_name is None:
            method = self.find_user_method(self.cls.name, expr.method)
            if method is None:
                self.error(self.file, expr, f"cannot find symbol: method {expr.method}")
                return None
            return self.check_user_call(expr, self.cls.name, method, arg_types)
        # name-qualified: local variable beats class name (Java scoping)
        if expr.receiver_name is not None:
            var_type = scope.lookup(expr.receiver_name)
            if var_type is not None:
                expr.receiver.stype = var_type
                return self.instance_call(expr, var_type, arg_types)
            if expr.receiver_name in STATIC_METHODS:
                expr.receiver = None  # resolved as a static call
                overloads = STATIC_METHODS[expr.receiver_name].get(expr.method)
                if overloads is None:
                    self.error(self.file, expr, f"cannot find symbol: method {expr.method} in {expr.receiver_name}")
                    return None
                return self.check_args_against(expr, expr.receiver_name, overloads, arg_types)
            if expr.receiver_name in self.classes:
                expr.receiver = None
                method = self.find_user_method(expr.receiver_name, expr.method)
                if method is None:
                    self.error(self.file, expr, f"cannot find symbol: method {expr.method} in {expr.receiver_name}")
                    return None
                return self.check_user_call(expr, expr.receiver_name, method, arg_types)
            self.error(self.file, expr, f"cannot find symbol: variable {expr.receiver_name}")
            return None
        # expression receiver
        rt = self.type_of(expr.receiver, scope)
        if rt is None:
            return None
        return self.instance_call(expr, rt, arg_types)

    def instance_call(self, expr, recv_type, arg_types):
        if recv_type == "null":
            self.error(self.file, expr, "null cannot be dereferenced")
            return None
        if recv_type == "String":
            overloads = STRING_METHODS.get(expr.method)
            if overloads is None:
                self.error(self.file, expr, f"cannot find symbol: method {expr.method} on String")
                return None
            return self.check_args_against(expr, "String", overloads, arg_types)
        if recv_type in THROWABLE_TYPES:
            overloads = THROWABLE_METHODS.get(expr.method)
            if overloads is None:
                self.error(self.file, expr, f"cannot find symbol: method {expr.method} on {recv_type}")
                return None
            return self.check_args_against(expr, recv_type, overloads, arg_types)
        if recv_type in self.classes:
            method = self.find_user_method(recv_type, expr.method)
            if method is None:
                self.error(self.file, expr, f"cannot find symbol: method {expr.method} in {recv_type}")
                return None
            return self.check_user_call(expr, recv_type, method, arg_types)
        if is_numeric(recv_type) or recv_type == "boolean":
            self.error(self.file, expr, f"{recv_type} cannot be dereferenced")
            return None
        self.error(self.file, expr, f"cannot find symbol: class {recv_type}")
        return None

    def find_user_method(self, class_name, method_name):
        entry = self.classes.get(class_name)
        if entry is None:
            return None
        cls, _ = entry
        for m in cls.methods:
            if m.name == method_name:
                return m
        return None

    def check_user_call(self, expr, class_name, method, arg_types):
        if len(arg_types) != len(method.params):
            self.error(self.file, expr,
                       f"method {method.name} in {class_name} cannot be applied: "
                       f"expected {len(method.params)} argument(s), got {len(arg_types)}")
            return method.return_type
        for p, got in zip(method.params, arg_types):
            if got is not None and not assignable(p.type_name, got):
                self.error(self.file, expr, self.conversion_error(p.type_name, got))
        return method.return_type

    def type_of_new(self, expr, scope):
        arg_types = [self.type_of(a, scope) for a in expr.args]
        if expr.class_name in THROWABLE_TYPES:
            if len(arg_types) > 1 or (arg_types and arg_types[0] not in ("String", "null")):
                self.error(self.file, expr, f"no suitable constructor for {expr.class_name}")
            return expr.class_name
        if expr.class_name in self.classes:
            if arg_types:
                self.error(self.file, expr, f"no suitable constructor for {expr.class_name}: only the no-argument form is supported")
            return expr.class_name
        self.error(self.file, expr, f"cannot find symbol: class {expr.class_name}")
        return None


def contains_break(body):
    """break lexically inside a loop body, binding to that loop (nested loops and switches capture their own)."""
    return _scan_exits(body, "break")


def contains_continue(body):
    return _scan_exits(body, "continue")


def _scan_exits(body, kind):
    hit_type = N.Break if kind == "break" else N.Continue
    stack = [body]
    while stack:
        node = stack.pop()
        if isinstance(node, hit_type):
            return True
        if isinstance(node, (N.While, N.DoWhile, N.For)):
            continue  # inner loop captures both break and continue
        if kind == "break" and isinstance(node, N.Switch):
            continue  # switch captures break
        if isinstance(node, N.Block):
            stack.extend(node.statements)
        elif isinstance(node, N.If):
            stack.append(node.then)
            if node.orelse:
                stack.append(node.orelse)
        elif isinstance(node, N.Switch):
            for case in node.cases:
                stack.extend(case.body)
        elif isinstance(node, N.TryCatch):
            stack.append(node.body)
            stack.append(node.handler)
    return False


def check_program(units) -> list:
    """Run all static checks over the given compilation units; returns diagnostics."""
    return Checker(units).run()
