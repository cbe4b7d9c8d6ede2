"""Command-line surface for the pipeline.

Exit codes: 0 success, 1 stage/runtime error, 2 configuration error,
3 campaign completed with failed rules.
"""

import json
import sys

import click

from .catalog import load_catalog, catalog_stats, CatalogError
from .config import load_config, ConfigError
from .evaluator import render_summary_table
from .orchestrator import Campaign, CampaignFailures, StageOrderError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_FAILURES = 3


@click.group()
@click.option("--config", "config_path", type=click.Path(), default="ruleprobe.yaml",
              show_default=True, help="campaign configuration file")
@click.pass_context
def main(ctx, config_path):
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path


def _campaign(ctx, backend_id=None) -> Campaign:
    try:
        config = load_config(ctx.obj["config_path"])
        if backend_id:
            config.select_backend(backend_id)
        return Campaign(config)
    except ConfigError as e:
        click.echo(f"config error: {e}", err=True)
        sys.exit(EXIT_CONFIG)


@main.group()
def catalog():
    """Inspect rule catalog files."""


@catalog.command("validate")
@click.argument("path", type=click.Path())
def catalog_validate(path):
    try:
        rules = load_catalog(path)
    except CatalogError as e:
        click.echo(f"invalid catalog: {e}", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(f"ok: {len(rules)} rules")


@catalog.command("stats")
@click.argument("path", type=click.Path())
def catalog_stats_cmd(path):
    try:
        rules = load_catalog(path)
    except CatalogError as e:
        click.echo(f"invalid catalog: {e}", err=True)
        sys.exit(EXIT_ERROR)
    stats = catalog_stats(rules)
    click.echo(json.dumps(stats, indent=2, sort_keys=True))


def _run_stage(ctx, command, rules_pattern, force, backend_id=None, **stage_kwargs):
    campaign = _campaign(ctx, backend_id=backend_id)
    selected = campaign.select_rules(rules_pattern)
    if not selected:
        click.echo("no rules matched")
        return
    failures = 0
    for rule in selected:
        state = campaign.load_state(rule)
        if force:
            campaign.force_stage(rule, state, command)
            state = campaign.load_state(rule)
        try:
            campaign.ensure_stage(rule, state, command)
        except StageOrderError as e:
            click.echo(f"stage-order error: {e}", err=True)
            sys.exit(EXIT_ERROR)
        _, done, _ = campaign_stage_bounds(command)
        if state.reached(done) or state.failed:
            click.echo(f"{rule.key}: already {state.stage}" +
                       (f" (failed in {state.failed_stage})" if state.failed else ""))
            continue
        fn = getattr(campaign, f"stage_{command}")
        try:
            fn(rule, state, **stage_kwargs)
        except Exception as e:  # per-rule isolation
            state.fail(command, e)
        campaign.save_state(rule, state)
        if state.failed:
            failures += 1
            click.echo(f"{rule.key}: FAILED in {state.failed_stage}: {state.failure_reason}")
        else:
            click.echo(f"{rule.key}: {state.stage}")
    if failures:
        sys.exit(EXIT_FAILURES)


def campaign_stage_bounds(command):
    from .orchestrator import STAGE_COMMANDS
    return STAGE_COMMANDS[command]


@main.command()
@click.option("--rules", "rules_pattern", default=None, help="rule key filter (glob or substring)")
@click.option("--backend", "backend_id", default=None, help="backend id from the config's backends list")
@click.option("--force", is_flag=True, help="redo this stage and invalidate downstream stages")
@click.pass_context
def generate(ctx, rules_pattern, backend_id, force):
    """Generate bug-seeded programs for the filtered rules."""
    _run_stage(ctx, "generate", rules_pattern, force, backend_id=backend_id)


@main.command()
@click.option("--rules", "rules_pattern", default=None)
@click.option("--backend", "backend_id", default=None)
@click.option("--force", is_flag=True)
@click.pass_context
def validate(ctx, rules_pattern, backend_id, force):
    """Generate and judge bug-triggering tests for accepted seeds."""
    _run_stage(ctx, "validate", rules_pattern, force, backend_id=backend_id)


@main.command()
@click.option("--rules", "rules_pattern", default=None)
@click.option("--mode", type=click.Choice(["deterministic", "llm", "both"]), default=None)
@click.option("--variants", type=int, default=None, help="variants per operator")
@click.option("--rng-seed", type=int, default=None)
@click.option("--backend", "backend_id", default=None)
@click.option("--force", is_flag=True)
@click.pass_context
def mutate(ctx, rules_pattern, mode, variants, rng_seed, backend_id, force):
    """Produce and certify behavior-preserving mutants of validated seeds."""
    _run_stage(ctx, "mutate", rules_pattern, force, backend_id=backend_id,
               mode=mode, variants=variants, rng_seed=rng_seed)


@main.command()
@click.option("--rules", "rules_pattern", default=None)
@click.option("--analyzer", "analyzer_id", default=None,
              help="analyzer id from the config (defaults to each rule's own analyzer)")
@click.option("--force", is_flag=True)
@click.pass_context
def analyze(ctx, rules_pattern, analyzer_id, force):
    """Run the configured analyzer over seeds and certified mutants."""
    _run_stage(ctx, "analyze", rules_pattern, force, analyzer_id=analyzer_id)


@main.command()
@click.option("--rules", "rules_pattern", default=None)
@click.option("--force", is_flag=True)
@click.pass_context
def evaluate(ctx, rules_pattern, force):
    """Classify detection matrices into verdicts."""
    _run_stage(ctx, "evaluate", rules_pattern, force)


@main.command()
@click.pass_context
def report(ctx):
    """Write summary.json / summary.txt and print the table."""
    campaign = _campaign(ctx)
    summary = campaign.emit_report()
    click.echo(render_summary_table(summary), nl=False)


@main.command()
@click.option("--bug", "bug_id", required=True, help="rule key, e.g. spotbugs/RV_X")
@click.option("--label", type=click.Choice(["tp", "fp"]), required=True)
@click.option("--root-cause", default=None)
@click.pass_context
def review(ctx, bug_id, label, root_cause):
    """Record the manual true/false-positive judgment for one bug."""
    campaign = _campaign(ctx)
    try:
        state = campaign.review(bug_id, label, root_cause)
    except (ConfigError, StageOrderError, KeyError) as e:
        click.echo(f"review error: {e}", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(f"{bug_id}: manual_label={state.manual_label} root_cause={state.root_cause_tag}")


@main.command()
@click.option("--rules", "rules_pattern", default=None)
@click.pass_context
def run(ctx, rules_pattern):
    """Run the full campaign: generate, validate, mutate, analyze, evaluate, report."""
    campaign = _campaign(ctx)
    try:
        summary = campaign.run(rules_pattern)
    except CampaignFailures as e:
        click.echo(f"campaign finished with failures: {e}", err=True)
        sys.exit(EXIT_FAILURES)
    click.echo(render_summary_table(summary), nl=False)


if __name__ == "__main__":
    main()
