"""Syntax tree nodes for the Java-subset toolchain.

Every node carries (line, col) of its first token; statements additionally
record end_line so source rewrites can target exact statement extents.
Expression nodes get a `stype` annotation filled in by the checker, which the
interpreter consults for numeric width (32 vs 64 bit wrapping).
"""

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class Node:
    line: int = field(default=0, kw_only=True)
    col: int = field(default=0, kw_only=True)


# ---------------------------------------------------------------- expressions

@dataclass
class Expr(Node):
    stype: Optional[str] = field(default=None, kw_only=True)


@dataclass
class IntLit(Expr):
    value: int = 0


@dataclass
class LongLit(Expr):
    value: int = 0


@dataclass
class DoubleLit(Expr):
    value: float = 0.0


@dataclass
class BoolLit(Expr):
    value: bool = False


@dataclass
class StringLit(Expr):
    value: str = ""


@dataclass
class NullLit(Expr):
    pass


@dataclass
class VarRef(Expr):
    name: str = ""


@dataclass
class Unary(Expr):
    op: str = ""
    operand: Expr = None


@dataclass
class Binary(Expr):
    op: str = ""
    left: Expr = None
    right: Expr = None


@dataclass
class InstanceOf(Expr):
    target: Expr = None
    type_name: str = ""


@dataclass
class FieldAccess(Expr):
    """Qualified constant such as Integer.MIN_VALUE; only builtins resolve."""
    qualifier: str = ""
    name: str = ""


@dataclass
class Call(Expr):
    # receiver is None for same-class calls: helper(x)
    # receiver_name set for static/qualified calls: Math.abs(x), obj.hashCode()
    receiver: Optional[Expr] = None
    receiver_name: Optional[str] = None
    method: str = ""
    args: list = field(default_factory=list)


@dataclass
class New(Expr):
    class_name: str = ""
    args: list = field(default_factory=list)


# ----------------------------------------------------------------- statements

@dataclass
class Stmt(Node):
    end_line: int = field(default=0, kw_only=True)


@dataclass
class Block(Stmt):
    statements: list = field(default_factory=list)


@dataclass
class VarDecl(Stmt):
    type_name: str = ""
    name: str = ""
    init: Optional[Expr] = None


@dataclass
class Assign(Stmt):
    name: str = ""
    value: Expr = None


@dataclass
class ExprStmt(Stmt):
    expr: Expr = None


@dataclass
class If(Stmt):
    cond: Expr = None
    then: Stmt = None
    orelse: Optional[Stmt] = None


@dataclass
class While(Stmt):
    cond: Expr = None
    body: Stmt = None


@dataclass
class DoWhile(Stmt):
    body: Stmt = None
    cond: Expr = None


@dataclass
class For(Stmt):
    init: Optional[Stmt] = None      # VarDecl or Assign
    cond: Optional[Expr] = None
    update: Optional[Stmt] = None    # Assign
    body: Stmt = None


@dataclass
class SwitchCase(Node):
    # label is None for default
    label: Optional[Expr] = None
    body: list = field(default_factory=list)


@dataclass
class Switch(Stmt):
    selector: Expr = None
    cases: list = field(default_factory=list)


@dataclass
class Break(Stmt):
    pass


@dataclass
class Continue(Stmt):
    pass


@dataclass
class Return(Stmt):
    value: Optional[Expr] = None


@dataclass
class Throw(Stmt):
    value: Expr = None


@dataclass
class TryCatch(Stmt):
    body: Block = None
    exc_type: str = ""
    exc_name: str = ""
    handler: Block = None


# ------------------------------------------------------------------- toplevel

@dataclass
class Param(Node):
    type_name: str = ""
    name: str = ""


@dataclass
class Method(Node):
    name: str = ""
    return_type: str = "void"
    params: list = field(default_factory=list)
    body: Block = None
    static: bool = False


@dataclass
class ClassDecl(Node):
    name: str = ""
    methods: list = field(default_factory=list)


@dataclass
class CompilationUnit(Node):
    imports: list = field(default_factory=list)   # (dotted_name, line)
    classes: list = field(default_factory=list)
    source_file: str = ""
