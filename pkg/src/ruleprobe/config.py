"""Campaign configuration: one YAML file, env vars for credentials only.

Budgets and temperatures default to the reference values (5 attempts, 3
variants per operator, 1 regeneration; generation 0.75 / validation 0.1)
and every relative path is resolved against the config file's directory.
"""

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .analyzers import AnalyzerConfig, AnalyzerError
from .build_exec import ToolchainConfig, default_toolchain
from .catalog import FilterPolicy, DEFAULT_POLICY, CatalogError


class ConfigError(Exception):
    pass


@dataclass
class BackendConfig:
    backend_id: str
    kind: str                      # scripted | http
    script: str | None = None
    endpoint: str | None = None
    model: str | None = None
    api_key_env: str | None = None
    retry_count: int = 3
    backoff_s: float = 1.0
    extra_params: dict = field(default_factory=dict)


@dataclass
class Budgets:
    max_attempts: int = 5
    variants_per_operator: int = 3
    regeneration_limit: int = 1


@dataclass
class CampaignConfig:
    workspace_root: Path
    catalog_path: Path
    backend: BackendConfig
    analyzers: list
    toolchain: ToolchainConfig
    filter_policy: FilterPolicy
    budgets: Budgets = field(default_factory=Budgets)
    temperatures: dict = field(default_factory=lambda: {"generation": 0.75, "validation": 0.1})
    parallelism: int = 1
    rng_seed: int = 0
    mutation_mode: str = "deterministic"   # deterministic | llm | both
    entry_method: str = "showBug"
    max_output_tokens: int = 2048
    backends: dict = field(default_factory=dict)

    def analyzer_for(self, analyzer_id):
        for a in self.analyzers:
            if a.analyzer_id == analyzer_id:
                return a
        return None

    def select_backend(self, backend_id):
        """Switch the active backend to one defined under `backends`."""
        if backend_id == self.backend.backend_id:
            return
        if backend_id not in self.backends:
            raise ConfigError(f"backend {backend_id!r} is not defined in the config")
        self.backend = self.backends[backend_id]


def _resolve(base: Path, value: str) -> Path:
    p = Path(os.path.expanduser(str(value)))
    return p if p.is_absolute() else (base / p).resolve()


def _expand_env(value):
    if isinstance(value, str) and value.startswith("${") and value.endswith("}"):
        name = value[2:-1]
        if name not in os.environ:
            raise ConfigError(f"environment variable {name} is not set")
        return os.environ[name]
    return value


def load_config(path) -> CampaignConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    base = path.parent.resolve()
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"config is not valid YAML: {e}") from e

    for key in ("workspace", "catalog", "backend"):
        if key not in data:
            raise ConfigError(f"config is missing required key {key!r}")

    def parse_backend(raw):
        kind = raw.get("kind")
        if kind not in ("scripted", "http"):
            raise ConfigError(f"backend.kind must be 'scripted' or 'http', got {kind!r}")
        parsed = BackendConfig(
            backend_id=raw.get("id", kind),
            kind=kind,
            script=str(_resolve(base, raw["script"])) if raw.get("script") else None,
            endpoint=_expand_env(raw.get("endpoint")),
            model=raw.get("model"),
            api_key_env=raw.get("api_key_env"),
            retry_count=int(raw.get("retry_count", 3)),
            backoff_s=float(raw.get("backoff_s", 1.0)),
            extra_params=raw.get("extra_params", {}) or {},
        )
        if kind == "scripted" and not parsed.script:
            raise ConfigError("scripted backend requires backend.script")
        if kind == "http" and not parsed.endpoint:
            raise ConfigError("http backend requires backend.endpoint")
        return parsed

    backends = {}
    for raw in data.get("backends", ()) or ():
        parsed = parse_backend(raw)
        backends[parsed.backend_id] = parsed
    raw_backend = data["backend"]
    if isinstance(raw_backend, str):
        if raw_backend not in backends:
            raise ConfigError(f"backend {raw_backend!r} is not defined under 'backends'")
        backend = backends[raw_backend]
    else:
        backend = parse_backend(raw_backend)
        backends.setdefault(backend.backend_id, backend)

    raw_budgets = data.get("budgets", {}) or {}
    budgets = Budgets(
        max_attempts=int(raw_budgets.get("max_attempts", 5)),
        variants_per_operator=int(raw_budgets.get("variants_per_operator", 3)),
        regeneration_limit=int(raw_budgets.get("regeneration_limit", 1)),
    )
    if budgets.max_attempts < 1 or budgets.variants_per_operator < 1:
        raise ConfigError("budgets must be positive")

    raw_temps = data.get("temperatures", {}) or {}
    temperatures = {
        "generation": float(raw_temps.get("generation", 0.75)),
        "validation": float(raw_temps.get("validation", 0.1)),
    }

    raw_filter = data.get("filter")
    if raw_filter:
        try:
            policy = FilterPolicy(
                included_categories=frozenset(raw_filter.get("included_categories", ())),
                excluded_tags=frozenset(raw_filter.get("excluded_tags", ())),
            )
        except CatalogError as e:
            raise ConfigError(str(e)) from e
    else:
        policy = DEFAULT_POLICY

    raw_tc = data.get("toolchain")
    if raw_tc:
        toolchain = ToolchainConfig(
            toolchain_id=raw_tc.get("id", "custom"),
            compile_argv=list(raw_tc["compile"]),
            run_argv=list(raw_tc["run"]),
            time_cap_s=float(raw_tc.get("time_cap_s", 30.0)),
            memory_cap_mb=int(raw_tc.get("memory_cap_mb", 512)),
            max_steps=int(raw_tc.get("max_steps", 50_000_000)),
        )
    else:
        toolchain = default_toolchain()

    analyzers = []
    for raw in data.get("analyzers", ()) or ():
        try:
            analyzers.append(AnalyzerConfig(
                analyzer_id=raw["analyzer_id"],
                invocation=[_expand_env(x) for x in raw["invocation"]],
                input_kind=raw.get("input_kind", "source"),
                report_format=raw["report_format"],
                version_probe=list(raw.get("version_probe", ())),
                rule_id_map=raw.get("rule_id_map", {}) or {},
                severity_threshold=raw.get("severity_threshold"),
            ))
        except (KeyError, AnalyzerError) as e:
            raise ConfigError(f"bad analyzer entry: {e}") from e

    mode = data.get("mutation_mode", "deterministic")
    if mode not in ("deterministic", "llm", "both"):
        raise ConfigError(f"mutation_mode must be deterministic, llm, or both; got {mode!r}")

    return CampaignConfig(
        workspace_root=_resolve(base, data["workspace"]),
        catalog_path=_resolve(base, data["catalog"]),
        backend=backend,
        analyzers=analyzers,
        toolchain=toolchain,
        filter_policy=policy,
        budgets=budgets,
        temperatures=temperatures,
        parallelism=int(data.get("parallelism", 1)),
        rng_seed=int(data.get("rng_seed", 0)),
        mutation_mode=mode,
        entry_method=data.get("entry_method", "showBug"),
        max_output_tokens=int(data.get("max_output_tokens", 2048)),
        backends=backends,
    )


def build_gateway(config: CampaignConfig, transcript_path):
    from .gateway import Gateway, ScriptedBackend, HttpChatBackend

    b = config.backend
    if b.kind == "scripted":
        backend = ScriptedBackend.from_file(b.script, backend_id=b.backend_id)
    else:
        api_key = os.environ.get(b.api_key_env) if b.api_key_env else None
        backend = HttpChatBackend(
            backend_id=b.backend_id, endpoint=b.endpoint, model=b.model,
            api_key=api_key, retry_count=b.retry_count, backoff_s=b.backoff_s,
            extra_params=b.extra_params)
    return Gateway(backend, transcript_path=transcript_path,
                   temperatures=config.temperatures,
                   max_output_tokens=config.max_output_tokens)
