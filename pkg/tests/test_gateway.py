"""Gateway routing, scripted backend, transcripts, extraction."""

import json

import pytest

from ruleprobe.gateway import (Gateway, ScriptedBackend, HttpChatBackend, Completion,
                               PromptRequest, GatewayError, ScriptExhaustedError,
                               ExtractionError, TransportFailure,
                               extract_code_block, extract_trailer_field,
                               read_transcript, GENERATION, VALIDATION)


def test_scripted_backend_preserves_order(tmp_path):
    gw = Gateway(ScriptedBackend(["A", "B"]), transcript_path=tmp_path / "t.jsonl")
    first, _ = gw.complete(GENERATION, [("user", "one")])
    second, _ = gw.complete(GENERATION, [("user", "two")])
    assert (first.text, second.text) == ("A", "B")


def test_scripted_backend_exhaustion_is_a_fixture_bug(tmp_path):
    gw = Gateway(ScriptedBackend([]), transcript_path=tmp_path / "t.jsonl")
    with pytest.raises(ScriptExhaustedError):
        gw.complete(GENERATION, [("user", "hello")])


def test_generation_default_temperature_recorded(tmp_path):
    gw = Gateway(ScriptedBackend(["x", "y"]), transcript_path=tmp_path / "t.jsonl")
    gw.complete(GENERATION, [("user", "p")])
    gw.complete(VALIDATION, [("user", "p")])
    entries = read_transcript(tmp_path / "t.jsonl")
    assert entries[0]["request"]["temperature"] == 0.75
    assert entries[0]["request"]["task_kind"] == "generation"
    assert entries[1]["request"]["temperature"] == 0.1
    assert entries[1]["request"]["task_kind"] == "validation"


def test_explicit_temperature_override(tmp_path):
    gw = Gateway(ScriptedBackend(["x"]), transcript_path=tmp_path / "t.jsonl")
    gw.complete(GENERATION, [("user", "p")], temperature=0.2)
    entries = read_transcript(tmp_path / "t.jsonl")
    assert entries[0]["request"]["temperature"] == 0.2


def test_transcript_replay_reproduces_outputs(tmp_path):
    gw = Gateway(ScriptedBackend(["first", "second"]), transcript_path=tmp_path / "t.jsonl")
    gw.complete(GENERATION, [("user", "a")])
    gw.complete(VALIDATION, [("user", "b")])
    replay = ScriptedBackend.from_file(tmp_path / "t.jsonl")
    req = PromptRequest(messages=[("user", "a")], temperature=0.75,
                        max_output_tokens=100, task_kind="generation")
    assert replay.complete(req).text == "first"
    assert replay.complete(req).text == "second"


def test_scripted_from_json_array(tmp_path):
    path = tmp_path / "script.json"
    path.write_text(json.dumps(["one", "two"]))
    backend = ScriptedBackend.from_file(path)
    req = PromptRequest(messages=[], temperature=0.75, max_output_tokens=10, task_kind="generation")
    assert backend.complete(req).text == "one"


def test_http_backend_retries_transport_then_succeeds():
    calls = []

    def transport(payload, headers):
        calls.append(payload)
        if len(calls) < 3:
            raise TransportFailure("connection reset")
        return {"choices": [{"message": {"content": "ok"}}], "usage": {"total_tokens": 3}}

    backend = HttpChatBackend("b", "http://example/v1", "m", transport=transport,
                              retry_count=3, sleep=lambda s: None)
    req = PromptRequest(messages=[("user", "hi")], temperature=0.75,
                        max_output_tokens=10, task_kind="generation")
    completion = backend.complete(req)
    assert completion.text == "ok"
    assert len(calls) == 3


def test_http_backend_gives_up_after_retry_budget():
    def transport(payload, headers):
        raise TransportFailure("down")

    backend = HttpChatBackend("b", "http://example/v1", "m", transport=transport,
                              retry_count=2, sleep=lambda s: None)
    req = PromptRequest(messages=[], temperature=0.1, max_output_tokens=10, task_kind="validation")
    with pytest.raises(GatewayError, match="after 2 retries"):
        backend.complete(req)


def test_http_backend_never_retries_content_errors():
    calls = []

    def transport(payload, headers):
        calls.append(1)
        raise GatewayError("authentication failure (401)")

    backend = HttpChatBackend("b", "http://example/v1", "m", transport=transport,
                              retry_count=5, sleep=lambda s: None)
    req = PromptRequest(messages=[], temperature=0.1, max_output_tokens=10, task_kind="validation")
    with pytest.raises(GatewayError, match="authentication"):
        backend.complete(req)
    assert len(calls) == 1


# ------------------------------------------------------------------ extraction


def c(text):
    return Completion(text=text, backend_id="t")


def test_extract_single_fence():
    assert extract_code_block(c("here is code:\n```\nX\n```")) == "X"


def test_extract_first_of_two_fences():
    text = "```java\nclass A {}\n```\nand also\n```\nclass B {}\n```"
    assert extract_code_block(c(text)) == "class A {}"


def test_extract_whole_text_without_fence():
    assert extract_code_block(c("class A {}")) == "class A {}"


def test_extract_empty_raises():
    with pytest.raises(ExtractionError):
        extract_code_block(c("   \n  "))


def test_trailer_field_outside_fence():
    text = "```\nint x = BUGGY_LINES;\n```\nENTRY_METHOD: showBug\nBUGGY_LINES: 4, 5\n"
    assert extract_trailer_field(text, "ENTRY_METHOD") == "showBug"
    assert extract_trailer_field(text, "BUGGY_LINES") == "4, 5"
    assert extract_trailer_field("no trailers here", "BUGGY_LINES") is None
