"""Pattern-matching stub analyzer for offline end-to-end runs.

Reads a rules file of regex patterns, scans one source file, and writes a
SARIF report. An entry fires when `pattern` matches the file text and
`unless_pattern` (if present) does not. This stands in for real analyzers in
CI, where none of them can be assumed installed.

Rules file format (JSON):
    [{"rule_id": "X", "pattern": "regex", "unless_pattern": "regex?"}, ...]
"""

import argparse
import json
import re
import sys

STUB_VERSION = "stub-analyzer 1.0"


def scan(text, rules):
    results = []
    for rule in rules:
        if not re.search(rule["pattern"], text, re.MULTILINE):
            continue
        unless = rule.get("unless_pattern")
        if unless and re.search(unless, text, re.MULTILINE):
            continue
        m = re.search(rule["pattern"], text, re.MULTILINE)
        line = text.count("\n", 0, m.start()) + 1
        results.append((rule["rule_id"], line))
    return results


def to_sarif(target, results):
    return {
        "version": "2.1.0",
        "$schema": "https://docs.oasis-open.org/sarif/sarif/v2.1.0/os/schemas/sarif-schema-2.1.0.json",
        "runs": [{
            "tool": {"driver": {"name": "stub-analyzer", "version": "1.0"}},
            "results": [
                {
                    "ruleId": rule_id,
                    "level": "warning",
                    "message": {"text": f"pattern for rule {rule_id} matched"},
                    "locations": [{
                        "physicalLocation": {
                            "artifactLocation": {"uri": target},
                            "region": {"startLine": line, "endLine": line},
                        }
                    }],
                }
                for rule_id, line in results
            ],
        }],
    }


def main(argv=None):
    ap = argparse.ArgumentParser(prog="ruleprobe-stub-analyzer")
    ap.add_argument("--version", action="version", version=STUB_VERSION)
    ap.add_argument("--rules", required=True)
    ap.add_argument("--input", required=True)
    ap.add_argument("--output", required=True)
    args = ap.parse_args(argv)

    with open(args.rules, "r", encoding="utf-8") as fh:
        rules = json.load(fh)
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    results = scan(text, rules)
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(to_sarif(args.input, results), fh, indent=2, sort_keys=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
