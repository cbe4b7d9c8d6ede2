"""Command-line entry points for the bundled toolchain.

`compile` validates sources and drops an artifact manifest; `run` executes
every test* method found in the artifact's classes, streaming one JSON event
per line to the events file so a killed process still leaves a usable,
per-test record behind.
"""

import argparse
import io
import json
import os
import shutil
import sys

from .parser import parse, ParseError
from .analysis import check_program
from .interp import Interpreter, MiniThrow, BudgetExceeded

TOOL_VERSION = "minijava 1.0"


def load_units(paths):
    units = []
    errors = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        name = os.path.basename(path)
        try:
            units.append(parse(text, source_file=name))
        except ParseError as e:
            errors.append(f"{name}:{e.line}:{e.col}: error: {e.message}")
    return units, errors


def cmd_compile(args):
    units, errors = load_units(args.sources)
    if not errors:
        for diag in check_program(units):
            errors.append(diag.render())
    if errors:
        for line in errors:
            print(line, file=sys.stderr)
        print(f"{len(errors)} error(s)", file=sys.stderr)
        return 1
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    manifest = {"tool": TOOL_VERSION, "sources": [], "classes": {}}
    for path, unit in zip(args.sources, units):
        name = os.path.basename(path)
        dest = os.path.join(outdir, name)
        if os.path.abspath(path) != os.path.abspath(dest):
            shutil.copyfile(path, dest)
        manifest["sources"].append(name)
        for cls in unit.classes:
            manifest["classes"][cls.name] = name
    with open(os.path.join(outdir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return 0


def discover_tests(units):
    """(class_name, method_name) pairs for every test* method, in source order."""
    found = []
    for unit in units:
        for cls in unit.classes:
            for m in cls.methods:
                if m.name.startswith("test") and not m.params:
                    found.append((cls.name, m.name))
    return found


def cmd_run(args):
    manifest_path = os.path.join(args.artifacts, "manifest.json")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    paths = [os.path.join(args.artifacts, name) for name in manifest["sources"]]
    units, errors = load_units(paths)
    if not errors:
        # the checker also annotates the static types the interpreter relies on
        errors = [d.render() for d in check_program(units)]
    if errors:
        print("artifact sources no longer compile; recompile", file=sys.stderr)
        for line in errors:
            print(line, file=sys.stderr)
        return 2

    tests = discover_tests(units)
    events = open(args.events, "w", encoding="utf-8")

    def emit(record):
        events.write(json.dumps(record, sort_keys=True) + "\n")
        events.flush()

    for class_name, method_name in tests:
        emit({"event": "start", "test": f"{class_name}.{method_name}"})
        buf = io.StringIO()
        interp = Interpreter(units, stdout=buf, max_steps=args.max_steps)
        record = {"event": "end", "test": f"{class_name}.{method_name}"}
        try:
            interp.invoke(class_name, method_name, [])
            record["outcome"] = "pass"
        except MiniThrow as t:
            record["outcome"] = "fail" if t.exc.type_name == "AssertionError" else "error"
            record["exception"] = {
                "type": t.exc.type_name,
                "message": t.exc.message,
                "frames": [list(f) for f in t.exc.frames],
            }
        except BudgetExceeded:
            record["outcome"] = "error"
            record["exception"] = {"type": "ExecutionBudgetExceeded", "message": None, "frames": []}
        record["stdout"] = buf.getvalue()
        emit(record)
    events.close()
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(prog="minijava")
    ap.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="validate sources and write an artifact manifest")
    c.add_argument("sources", nargs="+")
    c.add_argument("--out", required=True)

    r = sub.add_parser("run", help="run test* methods from a compiled artifact")
    r.add_argument("--artifacts", required=True)
    r.add_argument("--events", required=True)
    r.add_argument("--max-steps", type=int, default=50_000_000)

    args = ap.parse_args(argv)
    if args.command == "compile":
        return cmd_compile(args)
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
