"""Remote backend error translation, with the HTTP layer mocked out."""
import json

import httpx
import pytest

from facet.sampler import (BackendUnavailable, MalformedResponse,
                           QuotaExceeded, RemoteBackend)


class FakeResponse:
    def __init__(self, status_code, payload=None, text=""):
        self.status_code = status_code
        self._payload = payload
        self.text = text or json.dumps(payload or {})

    def json(self):
        if self._payload is None:
            raise ValueError("no JSON")
        return self._payload


def backend():
    return RemoteBackend(base_url="https://llm.example/v1", api_key="k",
                         model="m", max_retries=1)


def test_successful_completion_returns_content(monkeypatch):
    payload = {"choices": [{"message": {"content": "[]"}}]}
    calls = []

    def fake_post(url, json=None, headers=None, timeout=None):
        calls.append((url, json, headers, timeout))
        return FakeResponse(200, payload)

    monkeypatch.setattr(httpx, "post", fake_post)
    text = backend().complete("system", "user")
    assert text == "[]"
    url, body, headers, timeout = calls[0]
    assert url == "https://llm.example/v1/chat/completions"
    assert body["messages"][0] == {"role": "system", "content": "system"}
    assert body["response_format"] == {"type": "json_object"}
    assert headers["Authorization"] == "Bearer k"
    assert timeout == 60.0


def test_rate_limit_raises_quota_exceeded(monkeypatch):
    monkeypatch.setattr(httpx, "post",
                        lambda *a, **k: FakeResponse(429, {}, "slow down"))
    with pytest.raises(QuotaExceeded):
        backend().complete("s", "u")


def test_auth_failure_raises_backend_unavailable(monkeypatch):
    monkeypatch.setattr(httpx, "post", lambda *a, **k: FakeResponse(401, {}))
    with pytest.raises(BackendUnavailable):
        backend().complete("s", "u")


def test_server_errors_retry_then_fail(monkeypatch):
    calls = []

    def fake_post(*args, **kwargs):
        calls.append(1)
        return FakeResponse(503, {})

    monkeypatch.setattr(httpx, "post", fake_post)
    with pytest.raises(BackendUnavailable):
        backend().complete("s", "u")
    assert len(calls) == 2  # initial + one retry


def test_network_error_retries_then_recovers(monkeypatch):
    payload = {"choices": [{"message": {"content": "ok"}}]}
    responses = [httpx.ConnectError("refused"), FakeResponse(200, payload)]

    def fake_post(*args, **kwargs):
        item = responses.pop(0)
        if isinstance(item, Exception):
            raise item
        return item

    monkeypatch.setattr(httpx, "post", fake_post)
    assert backend().complete("s", "u") == "ok"


def test_unexpected_payload_is_malformed(monkeypatch):
    monkeypatch.setattr(httpx, "post",
                        lambda *a, **k: FakeResponse(200, {"weird": True}))
    with pytest.raises(MalformedResponse):
        backend().complete("s", "u")
