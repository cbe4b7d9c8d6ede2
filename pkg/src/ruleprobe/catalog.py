"""Analyzer rule catalogs: load, validate, filter.

Catalog files are line-delimited JSON with a versioned header record, one
rule per following line. Categories are curated data carried in the file,
not inferred here; a rule with an empty description is rejected at load
because downstream prompt construction requires it.
"""

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

SCHEMA = "rule-catalog/1"

CATEGORIES = {
    "correctness", "security", "performance", "style",
    "maintainability", "framework_specific", "test_only", "other",
}


class CatalogError(Exception):
    pass


@dataclass(frozen=True)
class RuleSpec:
    analyzer_id: str
    rule_id: str
    title: str
    description: str
    category: str
    severity: int | None = None
    tags: tuple = ()
    example_snippets: tuple = ()
    source_url: str | None = None

    @property
    def key(self) -> str:
        return f"{self.analyzer_id}/{self.rule_id}"

    def to_json(self) -> dict:
        d = asdict(self)
        d["tags"] = list(self.tags)
        d["example_snippets"] = list(self.example_snippets)
        return d


@dataclass(frozen=True)
class FilterPolicy:
    included_categories: frozenset
    excluded_tags: frozenset = frozenset()

    def __post_init__(self):
        if not self.included_categories:
            raise CatalogError("filter policy must include at least one category")
        unknown = set(self.included_categories) - CATEGORIES
        if unknown:
            raise CatalogError(f"unknown categories in policy: {sorted(unknown)}")


#: the inclusion judgment the pipeline defaults to: keep rules about program
#: behavior, drop stylistic/framework/test-only ones
DEFAULT_POLICY = FilterPolicy(
    included_categories=frozenset({"correctness", "security", "performance"}),
    excluded_tags=frozenset({"framework_specific", "test_only"}),
)


def _require(record, name, index):
    if name not in record or record[name] in (None, ""):
        rid = record.get("rule_id", f"record #{index}")
        raise CatalogError(f"rule {rid!r}: missing or empty field {name!r}")
    return record[name]


def load_catalog(path) -> list:
    """Load every rule record, preserving file order; malformed records raise."""
    path = Path(path)
    if not path.exists():
        raise CatalogError(f"catalog file not found: {path}")
    rules = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as e:
            raise CatalogError(f"catalog header is not valid JSON: {e}") from e
        if header.get("schema") != SCHEMA:
            raise CatalogError(f"unsupported catalog schema {header.get('schema')!r}; expected {SCHEMA!r}")
        for index, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise CatalogError(f"record #{index} is not valid JSON: {e}") from e
            rule = RuleSpec(
                analyzer_id=_require(record, "analyzer_id", index),
                rule_id=_require(record, "rule_id", index),
                title=_require(record, "title", index),
                description=_require(record, "description", index),
                category=_require(record, "category", index),
                severity=record.get("severity"),
                tags=tuple(record.get("tags", ())),
                example_snippets=tuple(record.get("example_snippets", ())),
                source_url=record.get("source_url"),
            )
            if rule.category not in CATEGORIES:
                raise CatalogError(f"rule {rule.key!r}: unknown category {rule.category!r}")
            if rule.key in seen:
                raise CatalogError(f"rule {rule.key!r}: duplicate rule_id within analyzer")
            seen.add(rule.key)
            rules.append(rule)
    return rules


def save_catalog(rules, path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"schema": SCHEMA}) + "\n")
        for rule in rules:
            fh.write(json.dumps(rule.to_json(), sort_keys=True) + "\n")


def filter_rules(rules, policy: FilterPolicy) -> list:
    """Keep rules whose category is included and which carry no excluded tag."""
    kept = []
    for rule in rules:
        if rule.category not in policy.included_categories:
            continue
        if policy.excluded_tags and (set(rule.tags) & policy.excluded_tags):
            continue
        kept.append(rule)
    return kept


def catalog_stats(rules) -> dict:
    counts = {}
    for rule in rules:
        counts[rule.category] = counts.get(rule.category, 0) + 1
    return {
        "total": len(rules),
        "analyzers": sorted({r.analyzer_id for r in rules}),
        "by_category": dict(sorted(counts.items())),
    }
