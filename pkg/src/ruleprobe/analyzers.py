"""Run configured static analyzers and normalize their reports into Findings.

Parsers cover SARIF JSON, SpotBugs-style BugCollection XML, PMD-style JSON,
and the classic `file:line: rule: message` line format. A record that lacks
a mappable location is kept with a (0, 0) span and the skip reason logged,
never silently dropped. Findings are matched per (rule, file) and never per
line, because mutation legitimately shifts line numbers.
"""

import json
import logging
import re
import subprocess
import sys
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

REPORT_FORMATS = ("sarif_json", "native_xml", "native_json", "line_text")

_LINE_TEXT_RE = re.compile(r"^(?P<file>[^:\s][^:]*):(?P<line>\d+)(?::\d+)?:\s*(?P<rule>[\w.$-]+)\s*:\s*(?P<msg>.*)$")


class AnalyzerError(Exception):
    pass


class AnalyzerMissingError(AnalyzerError):
    pass


class ReportParseError(AnalyzerError):
    pass


@dataclass
class AnalyzerConfig:
    analyzer_id: str
    invocation: list            # argv template; needs {input} and {output}
    input_kind: str             # source | compiled_artifact
    report_format: str
    version_probe: list = field(default_factory=list)
    rule_id_map: dict = field(default_factory=dict)
    severity_threshold: int | None = None

    def __post_init__(self):
        joined = " ".join(self.invocation)
        if "{input}" not in joined or "{output}" not in joined:
            raise AnalyzerError(
                f"analyzer {self.analyzer_id}: invocation template must contain "
                "both {input} and {output} placeholders")
        if self.report_format not in REPORT_FORMATS:
            raise AnalyzerError(f"analyzer {self.analyzer_id}: unknown report format {self.report_format}")
        if self.input_kind not in ("source", "compiled_artifact"):
            raise AnalyzerError(f"analyzer {self.analyzer_id}: unknown input kind {self.input_kind}")


@dataclass(frozen=True)
class Finding:
    analyzer_id: str
    rule_id: str
    file: str
    line_start: int
    line_end: int
    message: str

    def to_json(self):
        return {
            "analyzer_id": self.analyzer_id,
            "rule_id": self.rule_id,
            "file": self.file,
            "line_start": self.line_start,
            "line_end": self.line_end,
            "message": self.message,
        }

    @classmethod
    def from_json(cls, d):
        return cls(analyzer_id=d["analyzer_id"], rule_id=d["rule_id"], file=d["file"],
                   line_start=d["line_start"], line_end=d["line_end"], message=d["message"])


def _relativize(path_text: str, base) -> str:
    if not path_text:
        return ""
    p = Path(path_text)
    try:
        return str(p.relative_to(base))
    except ValueError:
        return p.name if p.is_absolute() else str(p)


def probe_version(config: AnalyzerConfig) -> str:
    if not config.version_probe:
        raise AnalyzerMissingError(f"analyzer {config.analyzer_id}: no version probe configured")
    argv = [a.replace("{python}", sys.executable) for a in config.version_probe]
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=60)
    except (FileNotFoundError, subprocess.TimeoutExpired) as e:
        raise AnalyzerMissingError(f"analyzer {config.analyzer_id}: version probe failed: {e}") from e
    if proc.returncode != 0:
        raise AnalyzerMissingError(
            f"analyzer {config.analyzer_id}: version probe exited {proc.returncode}")
    return (proc.stdout + proc.stderr).strip()


def run_analyzer(config: AnalyzerConfig, subject_path, output_path, base=None) -> list:
    """Invoke the analyzer on one subject; returns normalized findings.

    The raw report is left at output_path for the evidence bundle. A nonzero
    exit with no report is an error; a produced report is parsed regardless
    of exit code, since several analyzers exit nonzero when they find bugs.
    """
    subject_path = Path(subject_path)
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    base = Path(base) if base else subject_path.parent
    argv = []
    for item in config.invocation:
        item = item.replace("{python}", sys.executable)
        item = item.replace("{input}", str(subject_path))
        item = item.replace("{output}", str(output_path))
        argv.append(item)
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=600)
    except FileNotFoundError as e:
        raise AnalyzerMissingError(f"analyzer {config.analyzer_id}: command not found: {argv[0]}") from e
    if not output_path.exists():
        if proc.returncode != 0:
            raise AnalyzerError(
                f"analyzer {config.analyzer_id} exited {proc.returncode} without a report; "
                f"stderr: {proc.stderr.strip()[:500]}")
        raise AnalyzerError(f"analyzer {config.analyzer_id} exited 0 but produced no report")
    findings = parse_report(config.report_format, output_path.read_bytes(), base,
                            analyzer_id=config.analyzer_id)
    if config.rule_id_map:
        findings = [
            Finding(analyzer_id=f.analyzer_id,
                    rule_id=config.rule_id_map.get(f.rule_id, f.rule_id),
                    file=f.file, line_start=f.line_start, line_end=f.line_end,
                    message=f.message)
            for f in findings
        ]
    return findings


def parse_report(report_format: str, raw: bytes, base, analyzer_id: str = "") -> list:
    if report_format == "sarif_json":
        return _parse_sarif(raw, base, analyzer_id)
    if report_format == "native_xml":
        return _parse_bugcollection_xml(raw, base, analyzer_id)
    if report_format == "native_json":
        return _parse_pmd_json(raw, base, analyzer_id)
    if report_format == "line_text":
        return _parse_line_text(raw, base, analyzer_id)
    raise ReportParseError(f"unknown report format {report_format}")


def _parse_sarif(raw, base, analyzer_id):
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ReportParseError(f"malformed SARIF report: {e}") from e
    findings = []
    for run in data.get("runs", []):
        tool = run.get("tool", {}).get("driver", {}).get("name", analyzer_id or "unknown")
        for i, result in enumerate(run.get("results", [])):
            rule_id = result.get("ruleId")
            if not rule_id:
                log.warning("sarif result #%d skipped: no ruleId", i)
                continue
            message = result.get("message", {}).get("text", "")
            file = ""
            start = end = 0
            locations = result.get("locations", [])
            if locations:
                phys = locations[0].get("physicalLocation", {})
                file = _relativize(phys.get("artifactLocation", {}).get("uri", ""), base)
                region = phys.get("region", {})
                start = region.get("startLine", 0)
                end = region.get("endLine", start)
            else:
                log.info("sarif result #%d (%s): no location; keeping with (0,0) span", i, rule_id)
            findings.append(Finding(analyzer_id=analyzer_id or tool, rule_id=rule_id,
                                    file=file, line_start=start, line_end=end, message=message))
    return findings


def _parse_bugcollection_xml(raw, base, analyzer_id):
    """BugCollection format: BugInstance elements with a SourceLine child."""
    try:
        root = ET.fromstring(raw)
    except ET.ParseError as e:
        raise ReportParseError(f"malformed XML report: {e}") from e
    findings = []
    for i, bug in enumerate(root.iter("BugInstance")):
        rule_id = bug.get("type")
        if not rule_id:
            log.warning("BugInstance #%d skipped: no type attribute", i)
            continue
        message_el = bug.find("LongMessage")
        if message_el is None:
            message_el = bug.find("ShortMessage")
        message = (message_el.text or "").strip() if message_el is not None else ""
        source_line = bug.find("SourceLine")
        file = ""
        start = end = 0
        if source_line is not None:
            file = _relativize(source_line.get("sourcepath", source_line.get("sourcefile", "")), base)
            try:
                start = int(source_line.get("start", "0"))
                end = int(source_line.get("end", str(start)))
            except ValueError:
                log.info("BugInstance #%d (%s): unparseable line attributes; (0,0) span", i, rule_id)
                start = end = 0
        else:
            log.info("BugInstance #%d (%s): no SourceLine; keeping with (0,0) span", i, rule_id)
        findings.append(Finding(analyzer_id=analyzer_id, rule_id=rule_id, file=file,
                                line_start=start, line_end=end, message=message))
    return findings


def _parse_pmd_json(raw, base, analyzer_id):
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ReportParseError(f"malformed JSON report: {e}") from e
    findings = []
    for file_entry in data.get("files", []):
        file = _relativize(file_entry.get("filename", ""), base)
        for v in file_entry.get("violations", []):
            rule_id = v.get("rule")
            if not rule_id:
                log.warning("violation in %s skipped: no rule", file)
                continue
            findings.append(Finding(
                analyzer_id=analyzer_id, rule_id=rule_id, file=file,
                line_start=v.get("beginline", 0), line_end=v.get("endline", v.get("beginline", 0)),
                message=v.get("description", "")))
    return findings


def _parse_line_text(raw, base, analyzer_id):
    findings = []
    for lineno, line in enumerate(raw.decode("utf-8", errors="replace").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        m = _LINE_TEXT_RE.match(line)
        if not m:
            log.info("line %d skipped: does not match file:line: rule: message", lineno)
            continue
        findings.append(Finding(
            analyzer_id=analyzer_id, rule_id=m.group("rule"),
            file=_relativize(m.group("file"), base),
            line_start=int(m.group("line")), line_end=int(m.group("line")),
            message=m.group("msg")))
    return findings


def rule_detected(findings, rule_id: str, file: str) -> bool:
    """Line-insensitive detection: any finding for this rule on this file.

    Basename matching tolerates the different path relativization habits of
    the supported report formats; a finding without a location never counts.
    """
    if not file:
        return False
    file_name = Path(file).name
    for f in findings:
        if f.rule_id != rule_id or not f.file:
            continue
        if f.file == file or Path(f.file).name == file_name:
            return True
    return False


def save_findings(findings, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for f in findings:
            fh.write(json.dumps(f.to_json(), sort_keys=True) + "\n")


def load_findings(path) -> list:
    findings = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                findings.append(Finding.from_json(json.loads(line)))
    return findings
