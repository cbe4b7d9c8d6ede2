"""Sandboxed compile-and-run of subject programs and their tests.

The toolchain is configuration, not code: compile/run command lines come in
as argv templates with placeholders, and diagnostics are parsed from the
toolchain's stderr with a javac-compatible pattern. The bundled minijava
toolchain is the default so the whole pipeline works offline; pointing the
same config at javac is a config edit, not a code change.

Sandbox layout is stable so evidence bundles can reference it:
    <sandbox>/sources/    input files
    <sandbox>/artifacts/  compiler output (manifest + copies or class files)
    <sandbox>/logs/       raw toolchain output and run events
"""

import json
import os
import re
import shutil
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

DIAG_PATTERN = re.compile(r"^(?P<file>[^:\s][^:]*):(?P<line>\d+)(?::(?P<col>\d+))?:\s*(?:error|warning):\s*(?P<msg>.*)$")

DEFAULT_TIME_CAP_S = 30.0
DEFAULT_MEMORY_CAP_MB = 512
KILL_GRACE_S = 2.0


class ToolchainMissingError(Exception):
    """The configured toolchain command does not resolve; a config problem, not a compile failure."""


class SandboxError(Exception):
    pass


@dataclass
class ToolchainConfig:
    toolchain_id: str
    compile_argv: list
    run_argv: list
    time_cap_s: float = DEFAULT_TIME_CAP_S
    memory_cap_mb: int = DEFAULT_MEMORY_CAP_MB
    max_steps: int = 50_000_000


def default_toolchain() -> ToolchainConfig:
    return ToolchainConfig(
        toolchain_id="minijava",
        compile_argv=["{python}", "-m", "ruleprobe.minijava", "compile", "{sources}", "--out", "{outdir}"],
        run_argv=["{python}", "-m", "ruleprobe.minijava", "run", "--artifacts", "{artifacts}",
                  "--events", "{events}", "--max-steps", "{max_steps}"],
    )


@dataclass
class Diagnostic:
    file: str
    line: int
    message: str


@dataclass
class CompileResult:
    success: bool
    diagnostics: list
    elapsed: float
    artifacts_dir: str = ""

    def error_lines(self) -> str:
        return "\n".join(f"{d.file}:{d.line}: error: {d.message}" for d in self.diagnostics)


@dataclass
class ExecutionSignature:
    per_test_outcomes: dict = field(default_factory=dict)
    stdout_digest: str = ""
    exception_types: list = field(default_factory=list)
    trace_frames: list = field(default_factory=list)  # [(type, method)], positions stripped

    def to_json(self) -> dict:
        return {
            "per_test_outcomes": dict(self.per_test_outcomes),
            "stdout_digest": self.stdout_digest,
            "exception_types": list(self.exception_types),
            "trace_frames": [list(f) for f in self.trace_frames],
        }

    @classmethod
    def from_json(cls, data) -> "ExecutionSignature":
        return cls(
            per_test_outcomes=dict(data["per_test_outcomes"]),
            stdout_digest=data["stdout_digest"],
            exception_types=list(data["exception_types"]),
            trace_frames=[tuple(f) for f in data["trace_frames"]],
        )


def normalize_stdout(text: str) -> str:
    lines = text.split("\n")
    return "\n".join(line.rstrip() for line in lines)


def normalize_frames(frames) -> list:
    """Strip file/line from raw (type, method, file, line) frames; idempotent."""
    out = []
    for f in frames:
        out.append((f[0], f[1]))
    return out


def signatures_equal(a: ExecutionSignature, b: ExecutionSignature) -> bool:
    return (a.per_test_outcomes == b.per_test_outcomes
            and a.stdout_digest == b.stdout_digest
            and a.exception_types == b.exception_types
            and list(a.trace_frames) == list(b.trace_frames))


class Sandbox:
    """Private working directory for one compile/run; never share between invocations."""

    def __init__(self, root):
        self.root = Path(root)
        for sub in ("sources", "artifacts", "logs"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    @property
    def sources_dir(self):
        return self.root / "sources"

    @property
    def artifacts_dir(self):
        return self.root / "artifacts"

    @property
    def logs_dir(self):
        return self.root / "logs"


def _render_argv(template, mapping):
    argv = []
    for item in template:
        if item == "{sources}":
            argv.extend(str(p) for p in mapping["sources"])
            continue
        rendered = item
        for key, value in mapping.items():
            if key == "sources":
                continue
            rendered = rendered.replace("{" + key + "}", str(value))
        argv.append(rendered)
    return argv


def _check_command(argv):
    prog = argv[0]
    if os.path.sep in prog or (os.path.altsep and os.path.altsep in prog):
        if not os.path.exists(prog):
            raise ToolchainMissingError(f"toolchain command not found: {prog}")
    elif shutil.which(prog) is None:
        raise ToolchainMissingError(f"toolchain command not found on PATH: {prog}")


def _memory_limiter(cap_mb):
    if cap_mb is None or not sys.platform.startswith("linux"):
        return None

    import resource

    def set_limits():
        cap = cap_mb * 1024 * 1024
        try:
            resource.setrlimit(resource.RLIMIT_AS, (cap, cap))
        except (ValueError, OSError):
            pass

    return set_limits


def compile(sources, sandbox: Sandbox, toolchain: ToolchainConfig | None = None) -> CompileResult:
    """Copy sources into the sandbox and run the configured compiler over them."""
    if not sources:
        raise SandboxError("empty source set")
    toolchain = toolchain or default_toolchain()
    staged = []
    for src in sources:
        src = Path(src)
        if not src.exists():
            raise SandboxError(f"source file missing: {src}")
        dest = sandbox.sources_dir / src.name
        shutil.copyfile(src, dest)
        staged.append(dest)
    argv = _render_argv(toolchain.compile_argv, {
        "python": sys.executable,
        "sources": staged,
        "outdir": sandbox.artifacts_dir,
    })
    _check_command(argv)
    start = time.monotonic()
    proc = subprocess.run(argv, capture_output=True, text=True, cwd=sandbox.root,
                          timeout=toolchain.time_cap_s + KILL_GRACE_S)
    elapsed = time.monotonic() - start
    (sandbox.logs_dir / "compile.log").write_text(proc.stdout + proc.stderr, encoding="utf-8")
    diagnostics = []
    for line in (proc.stderr + "\n" + proc.stdout).splitlines():
        m = DIAG_PATTERN.match(line.strip())
        if m:
            diagnostics.append(Diagnostic(file=m.group("file"), line=int(m.group("line")), message=m.group("msg")))
    success = proc.returncode == 0
    if not success and not diagnostics:
        diagnostics.append(Diagnostic(file="", line=0, message=proc.stderr.strip() or "compiler failed without diagnostics"))
    return CompileResult(success=success, diagnostics=diagnostics, elapsed=elapsed,
                         artifacts_dir=str(sandbox.artifacts_dir) if success else "")


def run_tests(test_artifact, subject_artifact, sandbox: Sandbox,
              toolchain: ToolchainConfig | None = None,
              time_cap_s: float | None = None) -> ExecutionSignature:
    """Execute the compiled tests against the compiled subject; returns the normalized signature."""
    toolchain = toolchain or default_toolchain()
    if str(test_artifact) != str(subject_artifact):
        raise SandboxError("test and subject artifacts must come from the same sandbox compile")
    cap = time_cap_s if time_cap_s is not None else toolchain.time_cap_s
    events_path = sandbox.logs_dir / "events.jsonl"
    argv = _render_argv(toolchain.run_argv, {
        "python": sys.executable,
        "artifacts": test_artifact,
        "events": events_path,
        "max_steps": toolchain.max_steps,
    })
    _check_command(argv)
    killed = False
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, cwd=sandbox.root,
                              timeout=cap + KILL_GRACE_S,
                              preexec_fn=_memory_limiter(toolchain.memory_cap_mb))
        (sandbox.logs_dir / "run.log").write_text(proc.stdout + proc.stderr, encoding="utf-8")
        if proc.returncode not in (0,):
            raise SandboxError(f"test runner failed: {proc.stderr.strip()[:500]}")
    except subprocess.TimeoutExpired:
        killed = True
    return _signature_from_events(events_path, killed=killed)


def _signature_from_events(events_path, killed=False) -> ExecutionSignature:
    outcomes = {}
    stdout_parts = []
    exception_types = []
    frames = []
    started = []
    if Path(events_path).exists():
        with open(events_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError:
                    continue  # torn tail write after a kill
                if event.get("event") == "start":
                    started.append(event["test"])
                elif event.get("event") == "end":
                    name = event["test"]
                    outcomes[name] = event["outcome"]
                    stdout_parts.append(event.get("stdout", ""))
                    exc = event.get("exception")
                    if exc:
                        exception_types.append(exc["type"])
                        frames.extend(normalize_frames(exc.get("frames", [])))
    for name in started:
        if name not in outcomes:
            # the process died (time cap or crash) while this test was running
            outcomes[name] = "error"
            exception_types.append("ExecutionTimeout" if killed else "HarnessCrash")
    if killed and not started:
        outcomes["<harness>"] = "error"
        exception_types.append("ExecutionTimeout")
    return ExecutionSignature(
        per_test_outcomes=outcomes,
        stdout_digest=normalize_stdout("".join(stdout_parts)),
        exception_types=exception_types,
        trace_frames=frames,
    )
