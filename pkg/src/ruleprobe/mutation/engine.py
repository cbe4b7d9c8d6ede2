"""Deterministic syntax-tree mutation path.

Transforms are position-guided text edits over the parsed seed, so untouched
code keeps its exact formatting and the mutant diff is precisely the
operator's documented change. Site choice comes from a random stream seeded
by (rng seed, seed identity, operator), making every mutant reproducible
byte for byte.

Safety rules baked into site selection, so generated mutants always compile
and always preserve behavior exactly:
  - statements are only inserted at line-starting statement boundaries,
    never after a return/throw/break/continue;
  - unreachable constructs are guarded by a fresh non-constant false local,
    never a literal false loop condition;
  - only assignments that are invocation-free AND do not read their own
    target are duplicated (self-referencing assignments are not idempotent);
  - for-loops containing a loop-level continue are not converted to
    do-while form (the rewrite would skip the update on continue).
"""

import random
import re
from dataclasses import dataclass, field

from ..minijava import nodes as N
from ..minijava.parser import parse, ParseError
from ..minijava.analysis import check_program, contains_continue
from . import operators as ops

LETTERS = "abcdefghijklmnopqrstuvwxyz"

KEYWORD_BLOCKLIST = {
    "if", "else", "while", "for", "do", "switch", "case", "default", "break",
    "continue", "return", "new", "throw", "try", "catch", "true", "false",
    "null", "instanceof", "import", "class", "int", "long", "double",
    "boolean", "void", "public", "private", "protected", "static", "final",
}


class EngineError(Exception):
    """A deterministic transform misbehaved; this is a bug, not a data condition."""


@dataclass
class Mutant:
    seed_rule_key: str
    operator: str
    variant_index: int
    source: str
    mode: str  # deterministic | llm
    status: str = "uncompiled"  # uncompiled | compiled | equivalent | rejected
    attempts_used: int = 0
    transcript_ids: list = field(default_factory=list)
    site_label: str = ""


def normalize_ws(source: str) -> str:
    return " ".join(source.split())


# --------------------------------------------------------------- seed facts


@dataclass
class _InsertionSite:
    line: int       # insert before this 1-based line
    indent: str
    label: str


@dataclass
class _SeedFacts:
    unit: object
    lines: list
    insertion_sites: list
    duplicable_assigns: list    # (stmt, label)
    locals_by_method: list      # (method, [VarDecl...])
    numeric_targets: list       # (stmt, node, is_whole_expr, label)
    loop_sites: list            # (stmt, label)
    identifiers: set


def analyze_seed(source: str) -> _SeedFacts:
    try:
        unit = parse(source, source_file="seed")
    except ParseError as e:
        raise EngineError(f"accepted seed no longer parses: {e}") from e
    diags = check_program([unit])
    if diags:
        raise EngineError(f"accepted seed no longer checks: {diags[0].render()}")
    lines = source.split("\n")
    facts = _SeedFacts(unit=unit, lines=lines, insertion_sites=[], duplicable_assigns=[],
                       locals_by_method=[], numeric_targets=[], loop_sites=[],
                       identifiers=set(_identifier_tokens(source)))
    for cls in unit.classes:
        for method in cls.methods:
            locals_found = []
            _collect_block(facts, method.body, lines, f"{cls.name}.{method.name}", locals_found)
            if locals_found:
                facts.locals_by_method.append((method, locals_found))
    return facts


def _identifier_tokens(source: str):
    for m in re.finditer(r"[A-Za-z_]\w*", source):
        yield m.group(0)


def _starts_its_line(lines, line, col) -> bool:
    text = lines[line - 1]
    return text[: col - 1].strip() == ""


def _line_indent(lines, line) -> str:
    text = lines[line - 1]
    return text[: len(text) - len(text.lstrip())]


def _collect_block(facts, block, lines, where, locals_found):
    for i, stmt in enumerate(block.statements):
        if _starts_its_line(lines, stmt.line, stmt.col):
            facts.insertion_sites.append(_InsertionSite(
                line=stmt.line, indent=_line_indent(lines, stmt.line),
                label=f"{where}#before-L{stmt.line}"))
        _collect_stmt(facts, stmt, lines, where, locals_found, in_block=True)
    # end-of-block site, only when the block cannot end with a terminator
    if block.end_line and lines[block.end_line - 1].strip().startswith("}"):
        last = block.statements[-1] if block.statements else None
        if last is None or not isinstance(last, (N.Return, N.Throw, N.Break, N.Continue)):
            indent = (_line_indent(lines, last.line) if last is not None
                      else _line_indent(lines, block.end_line) + "    ")
            facts.insertion_sites.append(_InsertionSite(
                line=block.end_line, indent=indent, label=f"{where}#end-L{block.end_line}"))


def _collect_stmt(facts, stmt, lines, where, locals_found, in_block=False):
    if isinstance(stmt, N.Block):
        _collect_block(facts, stmt, lines, where, locals_found)
        return
    if isinstance(stmt, N.VarDecl):
        locals_found.append(stmt)
        if stmt.init is not None:
            _collect_numeric_targets(facts, stmt, stmt.init, where)
        return
    if isinstance(stmt, N.Assign):
        _collect_numeric_targets(facts, stmt, stmt.value, where)
        # duplication copies whole lines, so the assignment must be a direct
        # block child (an unbraced if/loop body would eject the copy) and the
        # sole statement on its line(s)
        if (in_block
                and _starts_its_line(lines, stmt.line, stmt.col)
                and lines[(stmt.end_line or stmt.line) - 1].count(";") == 1
                and lines[(stmt.end_line or stmt.line) - 1].rstrip().endswith(";")
                and not _contains_invocation(stmt.value)
                and not _reads_var(stmt.value, stmt.name)):
            facts.duplicable_assigns.append((stmt, f"{where}#assign-L{stmt.line}"))
        return
    if isinstance(stmt, N.Return):
        if stmt.value is not None:
            _collect_numeric_targets(facts, stmt, stmt.value, where)
        return
    if isinstance(stmt, N.If):
        _collect_stmt(facts, stmt.then, lines, where, locals_found)
        if stmt.orelse is not None:
            _collect_stmt(facts, stmt.orelse, lines, where, locals_found)
        return
    if isinstance(stmt, (N.While, N.For)):
        if isinstance(stmt, N.For):
            if stmt.init is not None:
                _collect_stmt(facts, stmt.init, lines, where, locals_found)
            if stmt.update is not None:
                _collect_stmt(facts, stmt.update, lines, where, locals_found)
        eligible = (_starts_its_line(lines, stmt.line, stmt.col)
                    and isinstance(stmt.body, N.Block)
                    and stmt.end_line
                    and lines[stmt.end_line - 1].strip() == "}")
        if eligible and isinstance(stmt, N.For) and contains_continue(stmt.body):
            eligible = False
        if eligible:
            facts.loop_sites.append((stmt, f"{where}#loop-L{stmt.line}"))
        _collect_stmt(facts, stmt.body, lines, where, locals_found)
        return
    if isinstance(stmt, N.DoWhile):
        _collect_stmt(facts, stmt.body, lines, where, locals_found)
        return
    if isinstance(stmt, N.Switch):
        for case in stmt.cases:
            for s in case.body:
                _collect_stmt(facts, s, lines, where, locals_found)
        return
    if isinstance(stmt, N.TryCatch):
        _collect_stmt(facts, stmt.body, lines, where, locals_found)
        _collect_stmt(facts, stmt.handler, lines, where, locals_found)
        return


def _contains_invocation(expr) -> bool:
    found = False

    def walk(e):
        nonlocal found
        if e is None or found:
            return
        if isinstance(e, (N.Call, N.New)):
            found = True
            return
        if isinstance(e, N.Binary):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, N.Unary):
            walk(e.operand)
        elif isinstance(e, N.InstanceOf):
            walk(e.target)

    walk(expr)
    return found


def _reads_var(expr, name) -> bool:
    found = False

    def walk(e):
        nonlocal found
        if e is None or found:
            return
        if isinstance(e, N.VarRef) and e.name == name:
            found = True
            return
        if isinstance(e, N.Binary):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, N.Unary):
            walk(e.operand)
        elif isinstance(e, N.InstanceOf):
            walk(e.target)
        elif isinstance(e, (N.Call, N.New)):
            if isinstance(e, N.Call) and e.receiver is not None:
                walk(e.receiver)
            for a in e.args:
                walk(a)

    walk(expr)
    return found


def _collect_numeric_targets(facts, stmt, root, where):
    def walk(e):
        if e is None:
            return
        if isinstance(e, (N.IntLit, N.LongLit, N.DoubleLit)):
            facts.numeric_targets.append((stmt, e, e is root, f"{where}#num-L{e.line}C{e.col}"))
        elif isinstance(e, N.VarRef):
            if e.stype in ("int", "long", "double"):
                facts.numeric_targets.append((stmt, e, e is root, f"{where}#var-L{e.line}C{e.col}"))
        elif isinstance(e, N.Binary):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, N.Unary):
            walk(e.operand)
        elif isinstance(e, (N.Call, N.New)):
            for a in e.args:
                walk(a)
            if isinstance(e, N.Call) and e.receiver is not None:
                walk(e.receiver)

    walk(root)


# ------------------------------------------------------------- applicability


def applicable_operators(source: str) -> set:
    """Operators with at least one eligible transformation site in this seed."""
    facts = analyze_seed(source)
    result = set()
    if facts.insertion_sites:
        result |= set(ops.INSERTION_OPERATORS)
    if facts.duplicable_assigns:
        result.add(ops.DUPLICATE_ASSIGNMENT)
    if facts.locals_by_method:
        result.add(ops.RENAME_LOCAL)
    if facts.numeric_targets:
        result.add(ops.OBFUSCATE_NUMERIC)
    if facts.loop_sites:
        result.add(ops.FOR_WHILE_TO_DO_WHILE)
    return result


# ---------------------------------------------------------------- transforms


def _fresh_names(count, used, rng):
    """Fresh identifiers absent from the source, single letters first."""
    pool = [c for c in LETTERS if c not in used and c not in KEYWORD_BLOCKLIST]
    rng.shuffle(pool)
    names = []
    while len(names) < count:
        if pool:
            names.append(pool.pop())
        else:
            i = 0
            while f"v{i}" in used or f"v{i}" in names:
                i += 1
            names.append(f"v{i}")
    for n in names:
        used.add(n)
    return names


def _insert_lines(lines, at_line, new_lines):
    return lines[: at_line - 1] + new_lines + lines[at_line - 1:]


def _insertion_payload(op, indent, names, rng):
    g = names[0]
    h = names[1]
    if op == ops.DEAD_STORE:
        decl = rng.choice([
            f"int {g} = 0;",
            f"long {g} = 0L;",
            f"double {g} = 0.0;",
            f"boolean {g} = false;",
            f'String {g} = "unused";',
        ])
        return [indent + decl]
    if op == ops.UNREACHABLE_IF:
        return [
            indent + f"boolean {g} = false;",
            indent + f"if ({g}) {{",
            indent + '    System.out.println("skipped");',
            indent + "}",
        ]
    if op == ops.UNREACHABLE_IF_ELSE:
        return [
            indent + f"boolean {g} = false;",
            indent + f"if ({g}) {{",
            indent + '    System.out.println("skipped");',
            indent + "} else {",
            indent + f"    int {h} = 0;",
            indent + "}",
        ]
    if op == ops.UNREACHABLE_SWITCH:
        return [
            indent + f"int {g} = 0;",
            indent + f"switch ({g}) {{",
            indent + "    case 1:",
            indent + '        System.out.println("one");',
            indent + "        break;",
            indent + "    case 2:",
            indent + '        System.out.println("two");',
            indent + "        break;",
            indent + "    default:",
            indent + "        break;",
            indent + "}",
        ]
    if op == ops.UNREACHABLE_FOR:
        return [
            indent + f"boolean {g} = false;",
            indent + f"for (int {h} = 0; {g}; {h} = {h} + 1) {{",
            indent + f"    System.out.println({h});",
            indent + "}",
        ]
    if op == ops.UNREACHABLE_WHILE:
        return [
            indent + f"boolean {g} = false;",
            indent + f"while ({g}) {{",
            indent + '    System.out.println("looping");',
            indent + "}",
        ]
    raise EngineError(f"not an insertion operator: {op}")


def _apply_insertion(facts, op, site, rng):
    used = set(facts.identifiers) | KEYWORD_BLOCKLIST
    names = _fresh_names(2, used, rng)
    payload = _insertion_payload(op, site.indent, names, rng)
    return "\n".join(_insert_lines(list(facts.lines), site.line, payload))


def _apply_duplicate(facts, stmt):
    lines = list(facts.lines)
    end = stmt.end_line or stmt.line
    copy = lines[stmt.line - 1: end]
    return "\n".join(lines[:end] + copy + lines[end:])


_NUMBER_RE = re.compile(r"\d[\w.]*(?:[eE][+-]?\d+)?")


def _token_text_at(facts, node):
    line_text = facts.lines[node.line - 1]
    start = node.col - 1
    if isinstance(node, N.VarRef):
        m = re.match(r"\w+", line_text[start:])
    else:
        m = _NUMBER_RE.match(line_text[start:])
    if not m or (isinstance(node, N.VarRef) and m.group(0) != node.name):
        raise EngineError(f"source drift at {node.line}:{node.col}")
    return m.group(0), start, start + len(m.group(0))


def _obfuscation_constant(node, rng):
    t = node.stype
    if t == "double":
        return "0.0"
    if t == "long":
        return rng.choice(["0L", "1L"])
    return rng.choice(["0", "1"])


def _apply_obfuscate(facts, target, rng):
    stmt, node, is_whole, _ = target
    text, start, end = _token_text_at(facts, node)
    const = _obfuscation_constant(node, rng)
    if is_whole:
        replacement = f"{text} + {const} - {const}"
    else:
        replacement = f"({text} + {const} - {const})"
    lines = list(facts.lines)
    line_text = lines[node.line - 1]
    lines[node.line - 1] = line_text[:start] + replacement + line_text[end:]
    return "\n".join(lines)


def _in_string_literal(line: str, index: int) -> bool:
    quotes = 0
    i = 0
    while i < index:
        if line[i] == "\\":
            i += 2
            continue
        if line[i] == '"':
            quotes += 1
        i += 1
    return quotes % 2 == 1


def _apply_rename(facts, method, decl, rng):
    used = set(facts.identifiers) | KEYWORD_BLOCKLIST
    new_name = _fresh_names(1, used, rng)[0]
    start_line = method.line
    end_line = method.body.end_line or start_line
    lines = list(facts.lines)
    pattern = re.compile(rf"(?<![\w.]){re.escape(decl.name)}(?!\w)")

    def rename_in(line_text):
        def swap(m):
            if _in_string_literal(line_text, m.start()):
                return m.group(0)
            rest = line_text[m.end():].lstrip()
            if rest.startswith("("):
                return m.group(0)  # a method name, never a local
            return new_name
        return pattern.sub(swap, line_text)

    for i in range(start_line - 1, min(end_line, len(lines))):
        lines[i] = rename_in(lines[i])
    return "\n".join(lines)


def _scan_balanced(text, start):
    """Index just past the ')' matching the '(' at text[start]; respects strings."""
    depth = 0
    i = start
    in_str = False
    while i < len(text):
        ch = text[i]
        if in_str:
            if ch == "\\":
                i += 2
                continue
            if ch == '"':
                in_str = False
        elif ch == '"':
            in_str = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    raise EngineError("unbalanced parentheses in loop header")


def _split_top_semicolons(text):
    parts = []
    depth = 0
    in_str = False
    current = []
    for ch in text:
        if in_str:
            current.append(ch)
            if ch == '"':
                in_str = False
            continue
        if ch == '"':
            in_str = True
            current.append(ch)
        elif ch == "(":
            depth += 1
            current.append(ch)
        elif ch == ")":
            depth -= 1
            current.append(ch)
        elif ch == ";" and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _apply_do_while(facts, loop):
    lines = list(facts.lines)
    end = loop.end_line
    segment = "\n".join(lines[loop.line - 1: end])
    indent = _line_indent(lines, loop.line)
    open_paren = segment.index("(")
    close = _scan_balanced(segment, open_paren)
    header = segment[open_paren + 1: close - 1]
    after = segment[close:]
    brace = after.index("{")
    body_inner = after[brace + 1: after.rindex("}")]
    if isinstance(loop, N.While):
        cond = header.strip()
        rewritten = (
            f"{indent}if ({cond}) {{\n"
            f"{indent}    do {{{body_inner}{indent}    }} while ({cond});\n"
            f"{indent}}}"
        )
    else:
        init, cond, update = (p.strip() for p in _split_top_semicolons(header))
        cond = cond or "true"
        inner = f"{indent}        do {{{body_inner}"
        if update:
            inner += f"{indent}        {update};\n"
        inner += f"{indent}        }} while ({cond});\n"
        rewritten = f"{indent}{{\n"
        if init:
            rewritten += f"{indent}    {init};\n"
        rewritten += f"{indent}    if ({cond}) {{\n"
        rewritten += inner
        rewritten += f"{indent}    }}\n"
        rewritten += f"{indent}}}"
    new_lines = lines[: loop.line - 1] + rewritten.split("\n") + lines[end:]
    return "\n".join(new_lines)


# ------------------------------------------------------------------ frontend


def _sites_for(facts, op):
    if op in ops.INSERTION_OPERATORS:
        return list(facts.insertion_sites)
    if op == ops.DUPLICATE_ASSIGNMENT:
        return list(facts.duplicable_assigns)
    if op == ops.RENAME_LOCAL:
        return [(m, d) for m, decls in facts.locals_by_method for d in decls]
    if op == ops.OBFUSCATE_NUMERIC:
        return list(facts.numeric_targets)
    if op == ops.FOR_WHILE_TO_DO_WHILE:
        return list(facts.loop_sites)
    raise EngineError(f"unknown operator {op}")


def _apply_at(facts, op, site, rng):
    if op in ops.INSERTION_OPERATORS:
        return _apply_insertion(facts, op, site, rng), site.label
    if op == ops.DUPLICATE_ASSIGNMENT:
        stmt, label = site
        return _apply_duplicate(facts, stmt), label
    if op == ops.RENAME_LOCAL:
        method, decl = site
        return _apply_rename(facts, method, decl, rng), f"rename-{decl.name}-L{decl.line}"
    if op == ops.OBFUSCATE_NUMERIC:
        return _apply_obfuscate(facts, site, rng), site[3]
    if op == ops.FOR_WHILE_TO_DO_WHILE:
        loop, label = site
        return _apply_do_while(facts, loop), label
    raise EngineError(f"unknown operator {op}")


def generate_variants(seed_source: str, rule_key: str, op: str, rng_seed: int,
                      count: int = 3) -> list:
    """Up to `count` distinct deterministic mutants; fewer when the seed has
    fewer distinct sites. Same inputs always produce byte-identical output."""
    facts = analyze_seed(seed_source)
    sites = _sites_for(facts, op)
    if not sites:
        return []
    rng = random.Random(f"{rng_seed}:{rule_key}:{op}")
    order = list(range(len(sites)))
    rng.shuffle(order)
    variants = []
    seen = {normalize_ws(seed_source)}
    for idx in order:
        if len(variants) >= count:
            break
        source, label = _apply_at(facts, op, sites[idx], rng)
        key = normalize_ws(source)
        if key in seen:
            continue
        seen.add(key)
        variants.append(Mutant(
            seed_rule_key=rule_key, operator=op, variant_index=len(variants) + 1,
            source=source, mode="deterministic", site_label=label))
    if not variants:
        raise EngineError(f"operator {op} was applicable but produced no distinct variant")
    return variants


def mutate_deterministic(seed_source: str, rule_key: str, op: str, rng_seed: int) -> Mutant:
    """Exactly one transformation at one rng-chosen site."""
    return generate_variants(seed_source, rule_key, op, rng_seed, count=1)[0]
