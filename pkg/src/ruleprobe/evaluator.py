"""Metamorphic comparison of analyzer behavior across seed/mutant families.

Classification of a detection matrix:
    Consistent    seed detected, every mutant detected (or no mutants)
    Type1         seed detected, at least one mutant missed
    Type2         seed missed, at least one mutant missed
    SeedMissOnly  seed missed but every mutant detected

The fourth kind is deliberately separate: the Type1/Type2 definitions leave
that corner uncovered, and folding it into Type2 would corrupt the counts,
so the summary reports Type2 both with and without it.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

CONSISTENT = "Consistent"
TYPE1 = "Type1"
TYPE2 = "Type2"
SEED_MISS_ONLY = "SeedMissOnly"

VERDICT_KINDS = (CONSISTENT, TYPE1, TYPE2, SEED_MISS_ONLY)

SUMMARY_SCHEMA = "campaign-summary/1"

SUMMARY_COLUMNS = (
    "analyzer", "backend", "rules", "comp_seeds", "tests", "valid_seeds",
    "mutants", "comp_mutants", "valid_mutants",
    "type1", "type1_tp", "type2", "type2_tp",
    "consistent", "seed_miss_only",
)


@dataclass
class DetectionMatrix:
    rule_key: str
    seed_detected: bool
    mutant_detected: dict  # mutant id -> bool, equivalence-certified mutants only


@dataclass
class Verdict:
    kind: str
    witnesses: list        # mutant ids justifying the kind (the undetected ones)
    matrix: DetectionMatrix


@dataclass
class BugReport:
    rule_key: str
    verdict: Verdict
    evidence: dict = field(default_factory=dict)   # label -> workspace-relative path
    manual_label: str = "unreviewed"               # true_positive | false_positive | unreviewed
    root_cause_tag: str | None = None
    witness_operators: tuple = ()

    @property
    def bug_id(self):
        return self.rule_key


def classify(matrix: DetectionMatrix) -> Verdict:
    """Pure function of the matrix; exactly one kind applies."""
    missed = sorted(mid for mid, det in matrix.mutant_detected.items() if not det)
    if matrix.seed_detected:
        if missed:
            return Verdict(kind=TYPE1, witnesses=missed, matrix=matrix)
        return Verdict(kind=CONSISTENT, witnesses=[], matrix=matrix)
    if missed:
        return Verdict(kind=TYPE2, witnesses=missed, matrix=matrix)
    if matrix.mutant_detected:
        return Verdict(kind=SEED_MISS_ONLY, witnesses=[], matrix=matrix)
    # no mutants and no detection: nothing to compare against, seed simply missed
    return Verdict(kind=SEED_MISS_ONLY, witnesses=[], matrix=matrix)


def group_unique(reports) -> list:
    """Unique-bug groups: same rule + same root cause collapse into one.

    Reports without a curated root_cause_tag fall into a provisional group
    keyed by their witness operator set; groups never straddle two rules.
    """
    groups = {}
    for report in reports:
        if report.root_cause_tag:
            key = (report.rule_key, "tag", report.root_cause_tag)
        else:
            key = (report.rule_key, "ops", tuple(sorted(set(report.witness_operators))))
        groups.setdefault(key, []).append(report)
    ordered = sorted(groups.items(), key=lambda kv: (kv[0][0], str(kv[0][2])))
    return [
        {
            "rule_key": key[0],
            "group_kind": "curated" if key[1] == "tag" else "provisional",
            "group_key": key[2] if key[1] == "tag" else list(key[2]),
            "reports": members,
        }
        for key, members in ordered
    ]


def _kind_count(rule_rows, kind, tp=False):
    return sum(1 for row in rule_rows
               if row.get("verdict_kind") == kind
               and (not tp or row.get("manual_label") == "true_positive"))


def build_summary(campaign_meta: dict, rule_rows: list, reports: list,
                  per_operator: dict | None = None) -> dict:
    """Machine-readable campaign summary; deterministic (no timestamps, sorted keys)."""
    totals = {
        "rules": len(rule_rows),
        "comp_seeds": sum(1 for row in rule_rows if row.get("seed_compiled")),
        "tests": sum(1 for row in rule_rows if row.get("test_compiled")),
        "valid_seeds": sum(1 for row in rule_rows if row.get("seed_valid")),
        "mutants": sum(row.get("mutants_generated", 0) for row in rule_rows),
        "comp_mutants": sum(row.get("mutants_compiled", 0) for row in rule_rows),
        "valid_mutants": sum(row.get("mutants_equivalent", 0) for row in rule_rows),
        "type1": _kind_count(rule_rows, TYPE1),
        "type1_tp": _kind_count(rule_rows, TYPE1, tp=True),
        "type2": _kind_count(rule_rows, TYPE2),
        "type2_tp": _kind_count(rule_rows, TYPE2, tp=True),
        "consistent": _kind_count(rule_rows, CONSISTENT),
        "seed_miss_only": _kind_count(rule_rows, SEED_MISS_ONLY),
        "type2_including_seed_miss": (_kind_count(rule_rows, TYPE2)
                                      + _kind_count(rule_rows, SEED_MISS_ONLY)),
    }
    unique_groups = group_unique([r for r in reports if r.verdict.kind in (TYPE1, TYPE2)])
    summary = {
        "schema": SUMMARY_SCHEMA,
        "campaign": dict(sorted(campaign_meta.items())),
        "totals": totals,
        "rules": sorted(rule_rows, key=lambda r: r["rule_key"]),
        "unique_bugs": [
            {
                "rule_key": g["rule_key"],
                "group_kind": g["group_kind"],
                "group_key": g["group_key"],
                "kinds": sorted({m.verdict.kind for m in g["reports"]}),
                "report_count": len(g["reports"]),
            }
            for g in unique_groups
        ],
        "per_operator": dict(sorted((per_operator or {}).items())),
        "trace_granularity": "frames",  # traces compare as (type, method) frames, positions stripped
    }
    return summary


def render_summary_table(summary: dict) -> str:
    """Human-readable one-row-per-analyzer table."""
    rows = {}
    for row in summary["rules"]:
        analyzer = row["rule_key"].split("/", 1)[0]
        agg = rows.setdefault(analyzer, {c: 0 for c in SUMMARY_COLUMNS})
        agg["analyzer"] = analyzer
        agg["backend"] = summary["campaign"].get("backend", "")
        agg["rules"] += 1
        agg["comp_seeds"] += 1 if row.get("seed_compiled") else 0
        agg["tests"] += 1 if row.get("test_compiled") else 0
        agg["valid_seeds"] += 1 if row.get("seed_valid") else 0
        agg["mutants"] += row.get("mutants_generated", 0)
        agg["comp_mutants"] += row.get("mutants_compiled", 0)
        agg["valid_mutants"] += row.get("mutants_equivalent", 0)
        kind = row.get("verdict_kind")
        if kind == TYPE1:
            agg["type1"] += 1
            agg["type1_tp"] += 1 if row.get("manual_label") == "true_positive" else 0
        elif kind == TYPE2:
            agg["type2"] += 1
            agg["type2_tp"] += 1 if row.get("manual_label") == "true_positive" else 0
        elif kind == CONSISTENT:
            agg["consistent"] += 1
        elif kind == SEED_MISS_ONLY:
            agg["seed_miss_only"] += 1
    header = " | ".join(SUMMARY_COLUMNS)
    lines = [header, "-" * len(header)]
    for analyzer in sorted(rows):
        agg = rows[analyzer]
        lines.append(" | ".join(str(agg[c]) for c in SUMMARY_COLUMNS))
    totals = summary["totals"]
    lines.append("")
    lines.append(f"type2 including seed-miss-only: {totals['type2_including_seed_miss']}")
    lines.append(f"unique bugs (type1+type2 groups): {len(summary['unique_bugs'])}")
    return "\n".join(lines) + "\n"


def write_summary(summary: dict, json_path, text_path=None) -> None:
    json_path = Path(json_path)
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if text_path is not None:
        Path(text_path).write_text(render_summary_table(summary), encoding="utf-8")
