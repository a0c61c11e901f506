"""Masking/replacement strategies and the combined semantic-phonetic score.

A candidate's score is its model probability damped by phonetic distance
to the erroneous surface character: P * exp(-alpha * S). alpha = 0 (or
disabling phonetics) reproduces the probability-only baseline.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .detector import DetectionResult
from .phonetics import CharDistance, PhoneticTable, char_distance
from .providers import (MASK_TOKEN, CandidateDistribution, ProviderError,
                        TokenSequence)


class StrategyKind(enum.Enum):
    MASK_ALL_REPLACE_ALL = "mask-all-replace-all"
    MASK_ONE_REPLACE_ONE = "mask-one-replace-one"
    MASK_ALL_REPLACE_ONE = "mask-all-replace-one"

    @classmethod
    def parse(cls, name: str) -> "StrategyKind":
        for kind in cls:
            if kind.value == name:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise ValueError(f"unknown strategy {name!r}; valid: {valid}")


@dataclass(frozen=True)
class PsiConfig:
    alpha: float = 0.0
    top_k: int = 20
    phonetics_enabled: bool = True

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


@dataclass(frozen=True)
class ScoredCandidate:
    token: str
    prob: float
    distance: float | None  # None when phonetics was not consulted
    psi: float


@dataclass(frozen=True)
class IterationStep:
    masked_positions: tuple[int, ...]
    scored: dict[int, tuple[ScoredCandidate, ...]]
    replacements: dict[int, str]


@dataclass
class CorrectionTrace:
    input: tuple[str, ...]
    detections: DetectionResult
    iterations: list[IterationStep] = field(default_factory=list)
    output: tuple[str, ...] = ()


class CorrectionError(Exception):
    """Provider failure mid-correction; carries the partial trace."""

    def __init__(self, message: str, partial_trace: CorrectionTrace):
        super().__init__(message)
        self.partial_trace = partial_trace


def psi_score(p: float, dist: CharDistance, alpha: float) -> float:
    """P * exp(-alpha * S); an uncoverable candidate scores 0."""
    if not dist.covered:
        return 0.0
    return p * math.exp(-alpha * dist.value)


def _score_candidates(error_char: str, dist: CandidateDistribution,
                      cfg: PsiConfig, table: PhoneticTable
                      ) -> tuple[ScoredCandidate, ...]:
    use_phonetics = (cfg.phonetics_enabled
                     and error_char in table)  # uncoverable error: fall back to P
    scored = []
    for token, prob in dist.candidates:
        if token == MASK_TOKEN or len(token) != 1:
            continue
        if use_phonetics:
            d = char_distance(error_char, token, table)
            psi = psi_score(prob, d, cfg.alpha)
            s_value = d.value if d.covered else None
        else:
            psi = prob
            s_value = None
        scored.append(ScoredCandidate(token, prob, s_value, psi))
    return tuple(scored)


def select_replacement(error_char: str, dist: CandidateDistribution,
                       cfg: PsiConfig, table: PhoneticTable
                       ) -> tuple[str, float]:
    """Best candidate by psi; ties go to higher P, then earlier rank."""
    scored = _score_candidates(error_char, dist, cfg, table)
    if not scored:
        raise ValueError("no scorable candidates")
    best = scored[0]
    for cand in scored[1:]:
        if cand.psi > best.psi or (cand.psi == best.psi and cand.prob > best.prob):
            best = cand
    return best.token, best.psi


def _best_or_none(scored: tuple[ScoredCandidate, ...]) -> ScoredCandidate | None:
    best = None
    for cand in scored:
        if best is None or cand.psi > best.psi or (
                cand.psi == best.psi and cand.prob > best.prob):
            best = cand
    return best


def correct(sentence: Sequence[str], detections: DetectionResult,
            strategy: StrategyKind, cfg: PsiConfig, provider,
            table: PhoneticTable) -> CorrectionTrace:
    """Run one masking/replacement strategy over the detected positions."""
    tokens = list(sentence)
    for p in detections.positions:
        if not 0 <= p < len(tokens):
            raise ValueError(f"detection position {p} out of range")

    trace = CorrectionTrace(input=tuple(sentence), detections=detections)
    if not detections.positions:
        trace.output = tuple(tokens)
        return trace

    try:
        if strategy is StrategyKind.MASK_ALL_REPLACE_ALL:
            _run_all_all(tokens, detections.positions, cfg, provider, table, trace)
        elif strategy is StrategyKind.MASK_ONE_REPLACE_ONE:
            _run_one_one(tokens, detections.positions, cfg, provider, table, trace)
        else:
            _run_all_one(tokens, detections.positions, cfg, provider, table, trace)
    except ProviderError as exc:
        trace.output = tuple(tokens)
        raise CorrectionError(str(exc), trace) from exc

    trace.output = tuple(tokens)
    return trace


def _predict(tokens, positions, cfg, provider):
    seq = TokenSequence(tuple(tokens), tuple(positions))
    return {d.position: d for d in provider.predict(seq, cfg.top_k)}


def _run_all_all(tokens, positions, cfg, provider, table, trace):
    dists = _predict(tokens, positions, cfg, provider)
    scored = {}
    replacements = {}
    for pos in positions:
        cands = _score_candidates(tokens[pos], dists[pos], cfg, table)
        scored[pos] = cands
        best = _best_or_none(cands)
        if best is not None:
            replacements[pos] = best.token
    trace.iterations.append(IterationStep(tuple(positions), scored, replacements))
    for pos, token in replacements.items():
        tokens[pos] = token


def _run_one_one(tokens, positions, cfg, provider, table, trace):
    for pos in positions:  # left to right
        dists = _predict(tokens, (pos,), cfg, provider)
        cands = _score_candidates(tokens[pos], dists[pos], cfg, table)
        best = _best_or_none(cands)
        replacements = {}
        if best is not None:
            replacements[pos] = best.token
            tokens[pos] = best.token
        trace.iterations.append(IterationStep((pos,), {pos: cands}, replacements))


def _run_all_one(tokens, positions, cfg, provider, table, trace):
    unresolved = sorted(positions)
    while unresolved:
        dists = _predict(tokens, unresolved, cfg, provider)
        scored = {pos: _score_candidates(tokens[pos], dists[pos], cfg, table)
                  for pos in unresolved}
        # replace the position whose best candidate scores highest;
        # ties resolved leftmost for determinism
        chosen_pos, chosen = None, None
        for pos in unresolved:
            best = _best_or_none(scored[pos])
            if best is None:
                continue
            if chosen is None or best.psi > chosen.psi or (
                    best.psi == chosen.psi and best.prob > chosen.prob):
                chosen_pos, chosen = pos, best
        if chosen_pos is None:
            # nothing scorable anywhere; keep surface forms and stop
            trace.iterations.append(IterationStep(tuple(unresolved), scored, {}))
            break
        tokens[chosen_pos] = chosen.token
        trace.iterations.append(IterationStep(
            tuple(unresolved), scored, {chosen_pos: chosen.token}))
        unresolved.remove(chosen_pos)
