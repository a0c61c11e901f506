"""Sources of replacement candidates for masked positions.

Two backends implement the same predict() contract: a mock backed by a
JSON fixture (deterministic, used in tests and offline runs) and an HTTP
client for a model-serving endpoint.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx

MASK_TOKEN = "⟨M⟩"  # ⟨M⟩

DEFAULT_TIMEOUT_MS = 10_000


class ProviderError(Exception):
    """A backend could not produce predictions for a query."""


@dataclass(frozen=True)
class TokenSequence:
    """A tokenized sentence plus the positions to be masked."""

    tokens: tuple[str, ...]
    mask_positions: tuple[int, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("tokens must be non-empty")
        positions = tuple(sorted(set(self.mask_positions)))
        if positions != tuple(self.mask_positions):
            object.__setattr__(self, "mask_positions", positions)
        for p in self.mask_positions:
            if not 0 <= p < len(self.tokens):
                raise ValueError(f"mask position {p} out of range")

    def masked_text(self) -> str:
        masks = set(self.mask_positions)
        return "".join(MASK_TOKEN if i in masks else t
                       for i, t in enumerate(self.tokens))


@dataclass(frozen=True)
class CandidateDistribution:
    """Ranked (token, probability) candidates for one masked position."""

    position: int
    candidates: tuple[tuple[str, float], ...]

    def __post_init__(self):
        seen = set()
        total = 0.0
        prev = None
        for token, prob in self.candidates:
            if not 0.0 < prob <= 1.0:
                raise ValueError(f"probability {prob} outside (0, 1]")
            if prev is not None and prob > prev:
                raise ValueError("candidates must be sorted by prob descending")
            if token in seen:
                raise ValueError(f"duplicate candidate token {token!r}")
            seen.add(token)
            total += prob
            prev = prob
        if total > 1.0 + 1e-6:
            raise ValueError(f"probabilities sum to {total} > 1")


def fixture_key(seq: TokenSequence, position: int) -> str:
    return f"{seq.masked_text()}|{position}"


class MockProvider:
    """Pure-lookup provider backed by a fixture mapping.

    Keys are "masked-text|position" (mask positions rendered as ⟨M⟩),
    values are [[token, prob], ...] sorted by prob descending.
    """

    def __init__(self, entries: dict[str, list]):
        self._entries = dict(entries)

    @classmethod
    def from_fixture(cls, path: str | Path) -> "MockProvider":
        path = Path(path)
        try:
            raw = json.loads(path.read_text("utf-8"))
        except OSError as exc:
            raise ProviderError(f"cannot read fixture {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ProviderError(f"fixture {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ProviderError(f"fixture {path} must be a JSON object")
        return cls(raw)

    def to_fixture(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self._entries, ensure_ascii=False, indent=2),
            encoding="utf-8")

    def predict(self, seq: TokenSequence, top_k: int) -> list[CandidateDistribution]:
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        out = []
        for pos in seq.mask_positions:
            key = fixture_key(seq, pos)
            if key not in self._entries:
                raise ProviderError(f"no fixture entry for {key!r}")
            cands = tuple((str(t), float(p))
                          for t, p in self._entries[key][:top_k])
            out.append(CandidateDistribution(pos, cands))
        return out


@dataclass
class HTTPProvider:
    """Client for a POST {base}/v1/mlm prediction endpoint."""

    base_url: str
    timeout_ms: int | None = None
    max_inflight: int = 4
    retries: int = 2
    transport: httpx.BaseTransport | None = None
    _sem: threading.Semaphore = field(init=False, repr=False)
    _client: httpx.Client = field(init=False, repr=False)

    def __post_init__(self):
        if self.timeout_ms is None:
            self.timeout_ms = int(os.environ.get(
                "PHONO_HTTP_TIMEOUT_MS", DEFAULT_TIMEOUT_MS))
        self._sem = threading.Semaphore(self.max_inflight)
        self._client = httpx.Client(
            base_url=self.base_url.rstrip("/"),
            timeout=self.timeout_ms / 1000.0,
            transport=self.transport,
        )

    def predict(self, seq: TokenSequence, top_k: int) -> list[CandidateDistribution]:
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not seq.mask_positions:
            return []
        body = {
            "tokens": list(seq.tokens),
            "mask_positions": list(seq.mask_positions),
            "top_k": top_k,
        }
        data = self._post_json("/v1/mlm", body)
        try:
            by_pos = {
                int(p["position"]): tuple(
                    (str(c["token"]), float(c["prob"])) for c in p["candidates"])
                for p in data["predictions"]
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise ProviderError(f"malformed /v1/mlm response: {exc}") from exc
        out = []
        for pos in seq.mask_positions:
            if pos not in by_pos:
                raise ProviderError(f"response missing position {pos}")
            out.append(CandidateDistribution(pos, by_pos[pos][:top_k]))
        return out

    def _post_json(self, path: str, body: dict) -> dict:
        delay = 0.2
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(delay)
                delay *= 2
            try:
                with self._sem:
                    resp = self._client.post(path, json=body)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if resp.status_code // 100 == 2:
                return resp.json()
            last_error = ProviderError(
                f"backend returned {resp.status_code} for {path}")
            if 400 <= resp.status_code < 500:
                break  # not transient, retrying cannot help
        raise ProviderError(f"backend unavailable: {last_error}")

    def close(self):
        self._client.close()
