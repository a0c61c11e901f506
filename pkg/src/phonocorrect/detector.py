"""Error-position detection: reference-based oracle or a scored backend."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

import httpx

from .providers import ProviderError

DEFAULT_THRESHOLD = 0.5


class AlignmentError(Exception):
    """Hypothesis and reference lengths differ; alignment required first."""


@dataclass(frozen=True)
class DetectionResult:
    positions: tuple[int, ...]
    scores: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(sorted(set(self.positions))))


def oracle_detect(hypothesis: Sequence[str], reference: Sequence[str]) -> DetectionResult:
    """Flag every position where hypothesis and reference disagree.

    Requires equal lengths (substitution-only alignment); unequal pairs
    must be aligned upstream (see evaluation.aligned_oracle_detections).
    """
    if len(hypothesis) != len(reference):
        raise AlignmentError(
            f"length mismatch ({len(hypothesis)} vs {len(reference)}); "
            "align the pair before oracle detection")
    positions = tuple(i for i, (h, r) in enumerate(zip(hypothesis, reference))
                      if h != r)
    return DetectionResult(positions)


class ScoreBackend(Protocol):
    def score(self, tokens: Sequence[str]) -> list[float]: ...


def model_detect(hypothesis: Sequence[str], threshold: float,
                 backend: ScoreBackend) -> DetectionResult:
    """Flag positions whose backend error score reaches the threshold."""
    scores = [float(s) for s in backend.score(hypothesis)]
    if len(scores) != len(hypothesis):
        raise ProviderError(
            f"backend returned {len(scores)} scores for {len(hypothesis)} tokens")
    positions = tuple(i for i, s in enumerate(scores) if s >= threshold)
    return DetectionResult(positions, scores=tuple(scores))


@dataclass
class HTTPDetector:
    """Client for a POST {base}/v1/detect scoring endpoint."""

    base_url: str
    timeout_ms: int = 10_000
    transport: httpx.BaseTransport | None = None

    def __post_init__(self):
        self._client = httpx.Client(
            base_url=self.base_url.rstrip("/"),
            timeout=self.timeout_ms / 1000.0,
            transport=self.transport,
        )

    def score(self, tokens: Sequence[str]) -> list[float]:
        try:
            resp = self._client.post("/v1/detect", json={"tokens": list(tokens)})
        except httpx.HTTPError as exc:
            raise ProviderError(f"detector backend unavailable: {exc}") from exc
        if resp.status_code // 100 != 2:
            raise ProviderError(
                f"detector backend returned {resp.status_code}")
        try:
            return [float(s) for s in resp.json()["scores"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ProviderError(f"malformed /v1/detect response: {exc}") from exc

    def close(self):
        self._client.close()
