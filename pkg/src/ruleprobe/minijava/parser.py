"""Recursive-descent parser for the Java-subset toolchain.

Supported surface: one or more classes holding methods, locals of type
int/long/double/boolean/String or a user class, control flow (if/else,
while, do-while, classic for, switch-on-int, break/continue), try/catch,
throw, method calls, `new`, instanceof, and ++/--/compound-assignment
sugar in statement position. Fields, generics, arrays, lambdas and
annotations are out of the subset and produce a syntax error.
"""

from . import nodes as N
from .lexer import tokenize, LexError


PRIMITIVE_TYPES = {"int", "long", "double", "boolean", "void"}


class ParseError(Exception):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.pos = 0

    # -- token helpers

    def peek(self, offset=0):
        return self.toks[min(self.pos + offset, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind, text=None):
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError(f"expected '{want}' but found '{tok.text or tok.kind}'", tok.line, tok.col)
        return self.next()

    def accept(self, kind, text=None):
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.next()
        return None

    def at_kw(self, word):
        return self.peek().is_kw(word)

    # -- toplevel

    def parse_unit(self, source_file=""):
        unit = N.CompilationUnit(source_file=source_file, line=1, col=1)
        while self.at_kw("import"):
            tok = self.next()
            parts = [self.expect("ident").text]
            while self.accept("."):
                if self.accept("*"):
                    parts.append("*")
                    break
                parts.append(self.expect("ident").text)
            self.expect(";")
            unit.imports.append((".".join(parts), tok.line))
        while self.peek().kind != "eof":
            unit.classes.append(self.parse_class())
        if not unit.classes:
            tok = self.peek()
            raise ParseError("no class declaration found", tok.line, tok.col)
        return unit

    def skip_modifiers(self):
        static = False
        while self.peek().kind == "kw" and self.peek().text in ("public", "private", "protected", "static", "final"):
            if self.peek().text == "static":
                static = True
            self.next()
        return static

    def parse_class(self):
        self.skip_modifiers()
        tok = self.expect("kw", "class")
        name = self.expect("ident").text
        cls = N.ClassDecl(name=name, line=tok.line, col=tok.col)
        self.expect("{")
        while not self.accept("}"):
            cls.methods.append(self.parse_method())
        return cls

    def parse_type_name(self):
        tok = self.peek()
        if tok.kind == "kw" and tok.text in PRIMITIVE_TYPES:
            self.next()
            return tok.text
        if tok.kind == "ident":
            self.next()
            return tok.text
        raise ParseError(f"expected a type but found '{tok.text or tok.kind}'", tok.line, tok.col)

    def parse_method(self):
        static = self.skip_modifiers()
        start = self.peek()
        rtype = self.parse_type_name()
        name = self.expect("ident").text
        self.expect("(")
        params = []
        if not self.accept(")"):
            while True:
                ptok = self.peek()
                ptype = self.parse_type_name()
                pname = self.expect("ident").text
                params.append(N.Param(type_name=ptype, name=pname, line=ptok.line, col=ptok.col))
                if not self.accept(","):
                    break
            self.expect(")")
        body = self.parse_block()
        return N.Method(name=name, return_type=rtype, params=params, body=body,
                        static=static, line=start.line, col=start.col)

    # -- statements

    def parse_block(self):
        open_tok = self.expect("{")
        stmts = []
        while not self.peek().kind == "}":
            if self.peek().kind == "eof":
                raise ParseError("unexpected end of input inside block", self.peek().line, self.peek().col)
            stmts.append(self.parse_statement())
        close = self.expect("}")
        return N.Block(statements=stmts, line=open_tok.line, col=open_tok.col, end_line=close.line)

    def looks_like_decl(self):
        tok = self.peek()
        if tok.kind == "kw" and tok.text in ("int", "long", "double", "boolean"):
            return True
        if tok.text == "String" and self.peek(1).kind == "ident":
            return True
        return tok.kind == "ident" and self.peek(1).kind == "ident"

    def parse_statement(self):
        tok = self.peek()
        if tok.kind == "{":
            return self.parse_block()
        if tok.is_kw("if"):
            return self.parse_if()
        if tok.is_kw("while"):
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            body = self.parse_statement()
            return N.While(cond=cond, body=body, line=tok.line, col=tok.col, end_line=body.end_line or body.line)
        if tok.is_kw("do"):
            self.next()
            body = self.parse_statement()
            self.expect("kw", "while")
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            semi = self.expect(";")
            return N.DoWhile(body=body, cond=cond, line=tok.line, col=tok.col, end_line=semi.line)
        if tok.is_kw("for"):
            return self.parse_for()
        if tok.is_kw("switch"):
            return self.parse_switch()
        if tok.is_kw("return"):
            self.next()
            value = None
            if self.peek().kind != ";":
                value = self.parse_expr()
            semi = self.expect(";")
            return N.Return(value=value, line=tok.line, col=tok.col, end_line=semi.line)
        if tok.is_kw("throw"):
            self.next()
            value = self.parse_expr()
            semi = self.expect(";")
            return N.Throw(value=value, line=tok.line, col=tok.col, end_line=semi.line)
        if tok.is_kw("break"):
            self.next()
            semi = self.expect(";")
            return N.Break(line=tok.line, col=tok.col, end_line=semi.line)
        if tok.is_kw("continue"):
            self.next()
            semi = self.expect(";")
            return N.Continue(line=tok.line, col=tok.col, end_line=semi.line)
        if tok.is_kw("try"):
            self.next()
            body = self.parse_block()
            self.expect("kw", "catch")
            self.expect("(")
            etype = self.parse_type_name()
            ename = self.expect("ident").text
            self.expect(")")
            handler = self.parse_block()
            return N.TryCatch(body=body, exc_type=etype, exc_name=ename, handler=handler,
                              line=tok.line, col=tok.col, end_line=handler.end_line)
        if self.looks_like_decl():
            decl = self.parse_var_decl()
            semi = self.expect(";")
            decl.end_line = semi.line
            return decl
        stmt = self.parse_simple_statement()
        semi = self.expect(";")
        stmt.end_line = semi.line
        return stmt

    def parse_if(self):
        tok = self.expect("kw", "if")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then = self.parse_statement()
        orelse = None
        end = then.end_line or then.line
        if self.at_kw("else"):
            self.next()
            orelse = self.parse_statement()
            end = orelse.end_line or orelse.line
        return N.If(cond=cond, then=then, orelse=orelse, line=tok.line, col=tok.col, end_line=end)

    def parse_for(self):
        tok = self.expect("kw", "for")
        self.expect("(")
        init = None
        if self.peek().kind != ";":
            if self.looks_like_decl():
                init = self.parse_var_decl()
            else:
                init = self.parse_simple_statement()
        self.expect(";")
        cond = None
        if self.peek().kind != ";":
            cond = self.parse_expr()
        self.expect(";")
        update = None
        if self.peek().kind != ")":
            update = self.parse_simple_statement()
        self.expect(")")
        body = self.parse_statement()
        return N.For(init=init, cond=cond, update=update, body=body,
                     line=tok.line, col=tok.col, end_line=body.end_line or body.line)

    def parse_switch(self):
        tok = self.expect("kw", "switch")
        self.expect("(")
        selector = self.parse_expr()
        self.expect(")")
        self.expect("{")
        cases = []
        seen_default = False
        while not self.peek().kind == "}":
            ctok = self.peek()
            if self.accept("kw", "case"):
                label = self.parse_expr()
                self.expect(":")
                cases.append(N.SwitchCase(label=label, body=[], line=ctok.line, col=ctok.col))
            elif self.accept("kw", "default"):
                if seen_default:
                    raise ParseError("duplicate default label", ctok.line, ctok.col)
                seen_default = True
                self.expect(":")
                cases.append(N.SwitchCase(label=None, body=[], line=ctok.line, col=ctok.col))
            else:
                if not cases:
                    raise ParseError("statement outside of any switch case", ctok.line, ctok.col)
                cases[-1].body.append(self.parse_statement())
        close = self.expect("}")
        return N.Switch(selector=selector, cases=cases, line=tok.line, col=tok.col, end_line=close.line)

    def parse_var_decl(self):
        tok = self.peek()
        type_name = self.parse_type_name()
        name = self.expect("ident").text
        init = None
        if self.accept("="):
            init = self.parse_expr()
        nxt = self.peek()
        if nxt.kind == ",":
            raise ParseError("multiple declarators in one statement are not supported", nxt.line, nxt.col)
        return N.VarDecl(type_name=type_name, name=name, init=init,
                         line=tok.line, col=tok.col, end_line=tok.line)

    def parse_simple_statement(self):
        """Assignment, ++/--, compound assignment, or a call/new expression."""
        tok = self.peek()
        if tok.kind in ("++", "--") and self.peek(1).kind == "ident":
            op = self.next().text
            name_tok = self.expect("ident")
            delta = N.IntLit(value=1, line=tok.line, col=tok.col)
            value = N.Binary(op="+" if op == "++" else "-",
                             left=N.VarRef(name=name_tok.text, line=tok.line, col=tok.col),
                             right=delta, line=tok.line, col=tok.col)
            return N.Assign(name=name_tok.text, value=value, line=tok.line, col=tok.col, end_line=tok.line)
        if tok.kind == "ident":
            nxt = self.peek(1)
            if nxt.kind == "=":
                self.next()
                self.next()
                value = self.parse_expr()
                return N.Assign(name=tok.text, value=value, line=tok.line, col=tok.col, end_line=tok.line)
            if nxt.kind in ("+=", "-=", "*=", "/=", "%="):
                self.next()
                op = self.next().text[0]
                rhs = self.parse_expr()
                value = N.Binary(op=op, left=N.VarRef(name=tok.text, line=tok.line, col=tok.col),
                                 right=rhs, line=tok.line, col=tok.col)
                return N.Assign(name=tok.text, value=value, line=tok.line, col=tok.col, end_line=tok.line)
            if nxt.kind in ("++", "--"):
                self.next()
                op = self.next().text
                value = N.Binary(op="+" if op == "++" else "-",
                                 left=N.VarRef(name=tok.text, line=tok.line, col=tok.col),
                                 right=N.IntLit(value=1, line=tok.line, col=tok.col),
                                 line=tok.line, col=tok.col)
                return N.Assign(name=tok.text, value=value, line=tok.line, col=tok.col, end_line=tok.line)
        expr = self.parse_expr()
        if not isinstance(expr, (N.Call, N.New)):
            raise ParseError("not a statement", tok.line, tok.col)
        return N.ExprStmt(expr=expr, line=tok.line, col=tok.col, end_line=tok.line)

    # -- expressions (precedence climbing)

    def parse_expr(self):
        return self.parse_or()

    def parse_or(self):
        left = self.parse_and()
        while self.peek().kind == "||":
            tok = self.next()
            right = self.parse_and()
            left = N.Binary(op="||", left=left, right=right, line=tok.line, col=tok.col)
        return left

    def parse_and(self):
        left = self.parse_equality()
        while self.peek().kind == "&&":
            tok = self.next()
            right = self.parse_equality()
            left = N.Binary(op="&&", left=left, right=right, line=tok.line, col=tok.col)
        return left

    def parse_equality(self):
        left = self.parse_relational()
        while self.peek().kind in ("==", "!="):
            tok = self.next()
            right = self.parse_relational()
            left = N.Binary(op=tok.kind, left=left, right=right, line=tok.line, col=tok.col)
        return left

    def parse_relational(self):
        left = self.parse_additive()
        while True:
            tok = self.peek()
            if tok.kind in ("<", "<=", ">", ">="):
                self.next()
                right = self.parse_additive()
                left = N.Binary(op=tok.kind, left=left, right=right, line=tok.line, col=tok.col)
            elif tok.is_kw("instanceof"):
                self.next()
                tname = self.parse_type_name()
                left = N.InstanceOf(target=left, type_name=tname, line=tok.line, col=tok.col)
            else:
                return left

    def parse_additive(self):
        left = self.parse_multiplicative()
        while self.peek().kind in ("+", "-"):
            tok = self.next()
            right = self.parse_multiplicative()
            left = N.Binary(op=tok.kind, left=left, right=right, line=tok.line, col=tok.col)
        return left

    def parse_multiplicative(self):
        left = self.parse_unary()
        while self.peek().kind in ("*", "/", "%"):
            tok = self.next()
            right = self.parse_unary()
            left = N.Binary(op=tok.kind, left=left, right=right, line=tok.line, col=tok.col)
        return left

    def parse_unary(self):
        tok = self.peek()
        if tok.kind in ("!", "-"):
            self.next()
            operand = self.parse_unary()
            return N.Unary(op=tok.kind, operand=operand, line=tok.line, col=tok.col)
        return self.parse_postfix()

    def parse_postfix(self):
        expr = self.parse_primary()
        while self.peek().kind == ".":
            dot = self.next()
            name = self.expect("ident").text
            if self.accept("("):
                args = self.parse_args()
                if isinstance(expr, N.VarRef):
                    expr = N.Call(receiver=expr, receiver_name=expr.name, method=name,
                                  args=args, line=dot.line, col=dot.col)
                else:
                    expr = N.Call(receiver=expr, method=name, args=args, line=dot.line, col=dot.col)
            else:
                if not isinstance(expr, N.VarRef):
                    raise ParseError("field access is only supported on simple names", dot.line, dot.col)
                expr = N.FieldAccess(qualifier=expr.name, name=name, line=dot.line, col=dot.col)
        return expr

    def parse_args(self):
        args = []
        if self.accept(")"):
            return args
        while True:
            args.append(self.parse_expr())
            if not self.accept(","):
                break
        self.expect(")")
        return args

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return N.IntLit(value=int(tok.text), line=tok.line, col=tok.col)
        if tok.kind == "long":
            self.next()
            return N.LongLit(value=int(tok.text), line=tok.line, col=tok.col)
        if tok.kind == "double":
            self.next()
            return N.DoubleLit(value=float(tok.text), line=tok.line, col=tok.col)
        if tok.kind == "string":
            self.next()
            return N.StringLit(value=tok.text, line=tok.line, col=tok.col)
        if tok.is_kw("true") or tok.is_kw("false"):
            self.next()
            return N.BoolLit(value=tok.text == "true", line=tok.line, col=tok.col)
        if tok.is_kw("null"):
            self.next()
            return N.NullLit(line=tok.line, col=tok.col)
        if tok.is_kw("new"):
            self.next()
            cname = self.expect("ident").text
            self.expect("(")
            args = self.parse_args()
            return N.New(class_name=cname, args=args, line=tok.line, col=tok.col)
        if tok.kind == "ident":
            self.next()
            if self.accept("("):
                args = self.parse_args()
                return N.Call(receiver=None, method=tok.text, args=args, line=tok.line, col=tok.col)
            return N.VarRef(name=tok.text, line=tok.line, col=tok.col)
        if tok.kind == "(":
            self.next()
            expr = self.parse_expr()
            self.expect(")")
            return expr
        raise ParseError(f"unexpected token '{tok.text or tok.kind}'", tok.line, tok.col)


def parse(source: str, source_file: str = "") -> N.CompilationUnit:
    try:
        tokens = tokenize(source)
    except LexError as e:
        raise ParseError(e.message, e.line, e.col) from e
    return Parser(tokens).parse_unit(source_file)
