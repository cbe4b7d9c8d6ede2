"""Uniform access to text-generation backends.

Two backends: an HTTP chat-completion client for real runs and a scripted
backend that replays a fixed response sequence for offline tests. Every
(request, completion) pair lands in the workspace transcript, so a recorded
campaign can be replayed byte-for-byte through the scripted backend.

Sampling temperature is routed here, per task kind: generation tasks sample
at 0.75, validation tasks at 0.1, unless the config overrides them.
"""

import json
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

GENERATION = "generation"
VALIDATION = "validation"

DEFAULT_TEMPERATURES = {GENERATION: 0.75, VALIDATION: 0.1}
DEFAULT_MAX_OUTPUT_TOKENS = 2048

_FENCE_RE = re.compile(r"```[a-zA-Z0-9_+-]*\n(.*?)```", re.DOTALL)


class GatewayError(Exception):
    pass


class ScriptExhaustedError(GatewayError):
    """The scripted backend ran out of responses: a test-fixture bug, not a model issue."""


class ExtractionError(GatewayError):
    pass


@dataclass
class PromptRequest:
    messages: list                      # [(role, text)], role in {system, user, assistant}
    temperature: float
    max_output_tokens: int
    task_kind: str

    def to_json(self):
        return {
            "messages": [{"role": r, "text": t} for r, t in self.messages],
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
            "task_kind": self.task_kind,
        }


@dataclass
class Completion:
    text: str
    backend_id: str
    latency: float = 0.0
    token_usage: dict | None = None


class ScriptedBackend:
    """Replays a fixed sequence of responses; call order is serialized internally."""

    backend_kind = "scripted"

    def __init__(self, responses, backend_id="scripted"):
        self.backend_id = backend_id
        self._responses = list(responses)
        self._index = 0
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path, backend_id="scripted"):
        """Accepts either a JSON array of strings or a transcript JSONL recording."""
        text = Path(path).read_text(encoding="utf-8").strip()
        if text.startswith("["):
            return cls(json.loads(text), backend_id=backend_id)
        responses = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            if "completion" in entry:
                responses.append(entry["completion"]["text"])
            elif "text" in entry:
                responses.append(entry["text"])
        return cls(responses, backend_id=backend_id)

    def complete(self, request: PromptRequest) -> Completion:
        with self._lock:
            if self._index >= len(self._responses):
                raise ScriptExhaustedError(
                    f"scripted backend exhausted after {self._index} responses")
            text = self._responses[self._index]
            self._index += 1
        return Completion(text=text, backend_id=self.backend_id)

    @property
    def remaining(self):
        return len(self._responses) - self._index


class HttpChatBackend:
    """Minimal chat-completions client; retries transport failures, never content."""

    backend_kind = "http"

    def __init__(self, backend_id, endpoint, model, api_key=None,
                 retry_count=3, backoff_s=1.0, timeout_s=120.0,
                 extra_params=None, transport=None, sleep=time.sleep):
        self.backend_id = backend_id
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.retry_count = retry_count
        self.backoff_s = backoff_s
        self.timeout_s = timeout_s
        self.extra_params = extra_params or {}
        self._transport = transport or self._default_transport
        self._sleep = sleep

    def _default_transport(self, payload, headers):
        import requests

        resp = requests.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout_s)
        if resp.status_code >= 500:
            raise TransportFailure(f"server error {resp.status_code}")
        if resp.status_code in (401, 403):
            raise GatewayError(f"authentication failure ({resp.status_code})")
        if resp.status_code != 200:
            raise GatewayError(f"backend returned {resp.status_code}: {resp.text[:300]}")
        return resp.json()

    def complete(self, request: PromptRequest) -> Completion:
        payload = {
            "model": self.model,
            "messages": [{"role": r, "content": t} for r, t in request.messages],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        payload.update(self.extra_params)
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        attempt = 0
        while True:
            try:
                start = time.monotonic()
                data = self._transport(payload, headers)
                latency = time.monotonic() - start
                break
            except TransportFailure as e:
                attempt += 1
                if attempt > self.retry_count:
                    raise GatewayError(f"transport failed after {self.retry_count} retries: {e}") from e
                self._sleep(self.backoff_s * (2 ** (attempt - 1)))
        try:
            text = data["choices"][0]["message"]["content"] or ""
            usage = data.get("usage")
        except (KeyError, IndexError, TypeError) as e:
            raise GatewayError(f"malformed backend response: {e}") from e
        return Completion(text=text, backend_id=self.backend_id, latency=latency, token_usage=usage)


class TransportFailure(Exception):
    """Retryable transport-level failure (connection reset, 5xx, timeout)."""


class Gateway:
    """Routes requests to one backend, applies per-task sampling defaults,
    and records every exchange in the workspace transcript."""

    def __init__(self, backend, transcript_path=None, temperatures=None,
                 max_output_tokens=DEFAULT_MAX_OUTPUT_TOKENS, extra_sampling=None):
        self.backend = backend
        self.transcript_path = Path(transcript_path) if transcript_path else None
        self.temperatures = dict(DEFAULT_TEMPERATURES)
        if temperatures:
            self.temperatures.update(temperatures)
        self.max_output_tokens = max_output_tokens
        self._lock = threading.Lock()
        self._next_id = 0

    def complete(self, task_kind, messages, temperature=None, max_output_tokens=None) -> tuple:
        """Returns (completion, transcript_entry_id)."""
        if task_kind not in (GENERATION, VALIDATION):
            raise GatewayError(f"unknown task kind {task_kind!r}")
        request = PromptRequest(
            messages=list(messages),
            temperature=self.temperatures[task_kind] if temperature is None else temperature,
            max_output_tokens=max_output_tokens or self.max_output_tokens,
            task_kind=task_kind,
        )
        # an empty generation is a real model outcome; it is recorded and
        # returned as-is for callers to handle, never papered over
        completion = self.backend.complete(request)
        entry_id = self._record(request, completion)
        return completion, entry_id

    def _record(self, request, completion):
        with self._lock:
            entry_id = self._next_id
            self._next_id += 1
            if self.transcript_path is not None:
                entry = {
                    "id": entry_id,
                    "backend_id": completion.backend_id,
                    "request": request.to_json(),
                    "completion": {"text": completion.text},
                }
                self.transcript_path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.transcript_path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry, sort_keys=True) + "\n")
        return entry_id


def read_transcript(path):
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                entries.append(json.loads(line))
    return entries


def extract_code_block(completion: Completion, expected_artifact="source_file") -> str:
    """First fenced block wins; with no fence the whole text is the artifact."""
    text = completion.text
    m = _FENCE_RE.search(text)
    body = m.group(1) if m else text
    body = body.strip("\n").rstrip()
    if not body.strip():
        raise ExtractionError(f"no extractable {expected_artifact} content in completion")
    return body


def extract_trailer_field(text: str, name: str) -> str | None:
    """Reads `NAME: value` trailer lines the prompts ask the model to append."""
    pattern = re.compile(rf"^\s*{re.escape(name)}\s*:\s*(.+?)\s*$", re.MULTILINE | re.IGNORECASE)
    without_fences = _FENCE_RE.sub("", text)
    m = pattern.search(without_fences)
    return m.group(1) if m else None
