"""Rule catalog loading, filtering, and its algebraic properties."""

import json

import pytest
from hypothesis import given, strategies as st

from ruleprobe.catalog import (RuleSpec, FilterPolicy, DEFAULT_POLICY, CATEGORIES,
                               load_catalog, save_catalog, filter_rules,
                               catalog_stats, CatalogError, SCHEMA)


def make_rule(i, category="correctness", tags=()):
    return RuleSpec(analyzer_id="demo", rule_id=f"R{i}", title=f"rule {i}",
                    description=f"description of rule {i}", category=category, tags=tuple(tags))


def write_catalog(path, records, header=None):
    lines = [json.dumps(header or {"schema": SCHEMA})]
    lines += [json.dumps(r) for r in records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


BASE_RECORD = {
    "analyzer_id": "demo", "rule_id": "R1", "title": "t",
    "description": "d", "category": "correctness",
}


def test_load_three_wellformed_records(tmp_path):
    records = [dict(BASE_RECORD, rule_id=f"R{i}") for i in range(3)]
    path = tmp_path / "cat.jsonl"
    write_catalog(path, records)
    rules = load_catalog(path)
    assert [r.rule_id for r in rules] == ["R0", "R1", "R2"]


def test_missing_description_names_the_record(tmp_path):
    bad = dict(BASE_RECORD)
    del bad["description"]
    path = tmp_path / "cat.jsonl"
    write_catalog(path, [bad])
    with pytest.raises(CatalogError) as exc:
        load_catalog(path)
    assert "R1" in str(exc.value) and "description" in str(exc.value)


def test_empty_description_rejected(tmp_path):
    path = tmp_path / "cat.jsonl"
    write_catalog(path, [dict(BASE_RECORD, description="")])
    with pytest.raises(CatalogError):
        load_catalog(path)


def test_missing_file():
    with pytest.raises(CatalogError, match="not found"):
        load_catalog("/nonexistent/catalog.jsonl")


def test_bad_schema_header(tmp_path):
    path = tmp_path / "cat.jsonl"
    write_catalog(path, [BASE_RECORD], header={"schema": "rule-catalog/999"})
    with pytest.raises(CatalogError, match="schema"):
        load_catalog(path)


def test_duplicate_rule_id_rejected(tmp_path):
    path = tmp_path / "cat.jsonl"
    write_catalog(path, [BASE_RECORD, BASE_RECORD])
    with pytest.raises(CatalogError, match="duplicate"):
        load_catalog(path)


def test_category_filter_excludes_style():
    rules = [make_rule(1, "correctness"), make_rule(2, "style"), make_rule(3, "security")]
    kept = filter_rules(rules, DEFAULT_POLICY)
    assert [r.rule_id for r in kept] == ["R1", "R3"]


def test_framework_tag_excluded():
    rules = [make_rule(1, "correctness", tags=["framework_specific"]), make_rule(2, "correctness")]
    kept = filter_rules(rules, DEFAULT_POLICY)
    assert [r.rule_id for r in kept] == ["R2"]


def test_identity_policy_keeps_everything():
    rules = [make_rule(i, category) for i, category in enumerate(sorted(CATEGORIES))]
    policy = FilterPolicy(included_categories=frozenset(CATEGORIES))
    assert filter_rules(rules, policy) == rules


def test_empty_policy_rejected():
    with pytest.raises(CatalogError):
        FilterPolicy(included_categories=frozenset())


def test_roundtrip_save_load(tmp_path):
    rules = [make_rule(1), make_rule(2, "security", tags=["x"]), make_rule(3, "performance")]
    path = tmp_path / "out.jsonl"
    save_catalog(rules, path)
    assert load_catalog(path) == rules


def test_snapshot_catalog_loads(catalogs_dir):
    rules = load_catalog(catalogs_dir / "spotbugs_snapshot.jsonl")
    assert len(rules) == 11
    stats = catalog_stats(rules)
    assert stats["analyzers"] == ["spotbugs"]
    kept = filter_rules(rules, DEFAULT_POLICY)
    kept_ids = {r.rule_id for r in kept}
    assert "RV_ABSOLUTE_VALUE_OF_HASHCODE" in kept_ids
    assert "NM_CLASS_NAMING_CONVENTION" not in kept_ids       # style
    assert "SW_SWING_METHODS_INVOKED_IN_SWING_THREAD" not in kept_ids  # framework tag
    assert "IJU_SETUP_NO_SUPER" not in kept_ids               # test-only tag


# ----------------------------------------------------------------- properties

categories = st.sampled_from(sorted(CATEGORIES))
tags = st.lists(st.sampled_from(["framework_specific", "test_only", "jdk", "io"]), max_size=2)
rules_lists = st.lists(
    st.builds(lambda i, c, t: make_rule(i, c, t), st.integers(0, 50), categories, tags),
    max_size=20)
policies = st.builds(
    lambda inc, exc: FilterPolicy(included_categories=frozenset(inc), excluded_tags=frozenset(exc)),
    st.sets(categories, min_size=1), st.sets(st.sampled_from(["framework_specific", "test_only", "jdk"])))


@given(rules_lists, policies)
def test_filter_idempotent(rules, policy):
    once = filter_rules(rules, policy)
    assert filter_rules(once, policy) == once


@given(rules_lists, policies, st.sets(categories))
def test_filter_monotone_in_included_categories(rules, policy, extra):
    bigger = FilterPolicy(included_categories=policy.included_categories | frozenset(extra),
                          excluded_tags=policy.excluded_tags)
    kept_small = filter_rules(rules, policy)
    kept_big = filter_rules(rules, bigger)
    assert set(r.rule_id for r in kept_small) <= set(r.rule_id for r in kept_big)


@given(rules_lists, policies)
def test_filter_preserves_order_and_never_grows(rules, policy):
    kept = filter_rules(rules, policy)
    assert len(kept) <= len(rules)
    kept_set = set(kept)
    assert kept == [r for r in rules if r in kept_set]
