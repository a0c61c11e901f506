"""Metrics and analyses for correction runs.

Character error rate (edit distance / reference length, macro and micro),
character-level correction precision/recall/F1, an alpha grid search over
the full correction pipeline, and the recoverable/unrecoverable
classification of individual errors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ._native import kernels
from .corrector import PsiConfig, StrategyKind, correct
from .detector import DetectionResult, oracle_detect
from .phonetics import PhoneticTable, char_distance
from .providers import CandidateDistribution, TokenSequence


def cer(hypothesis: Sequence[str], reference: Sequence[str]) -> float:
    """Unit-cost edit distance divided by reference length."""
    if len(reference) == 0:
        raise ValueError("reference must be non-empty")
    return kernels.levenshtein(tuple(hypothesis), tuple(reference)) / len(reference)


def substitution_alignment(hypothesis: Sequence[str],
                           reference: Sequence[str]) -> list[tuple[int, int]]:
    """Positions aligned one-to-one (match or substitution) by edit distance.

    Insertions and deletions produce no pair. Backtracking prefers the
    diagonal, then deletion, so the result is deterministic.
    """
    la, lb = len(hypothesis), len(reference)
    dp = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(la + 1):
        dp[i][0] = i
    for j in range(lb + 1):
        dp[0][j] = j
    for i in range(1, la + 1):
        hi = hypothesis[i - 1]
        row, prev = dp[i], dp[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if hi == reference[j - 1] else 1
            row[j] = min(prev[j] + 1, row[j - 1] + 1, prev[j - 1] + cost)
    pairs = []
    i, j = la, lb
    while i > 0 and j > 0:
        cost = 0 if hypothesis[i - 1] == reference[j - 1] else 1
        if dp[i][j] == dp[i - 1][j - 1] + cost:
            pairs.append((i - 1, j - 1))
            i, j = i - 1, j - 1
        elif dp[i][j] == dp[i - 1][j] + 1:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return pairs


def aligned_oracle_detections(hypothesis: Sequence[str],
                              reference: Sequence[str]) -> DetectionResult:
    """Oracle detection that tolerates unequal lengths via alignment.

    Only substitution-aligned positions are correctable by masked
    replacement, so only those are flagged.
    """
    if len(hypothesis) == len(reference):
        return oracle_detect(hypothesis, reference)
    positions = tuple(i for i, j in substitution_alignment(hypothesis, reference)
                      if hypothesis[i] != reference[j])
    return DetectionResult(positions)


@dataclass(frozen=True)
class EvalPair:
    id: str
    hypothesis: tuple[str, ...]
    reference: tuple[str, ...]
    corrected: tuple[str, ...]

    def __post_init__(self):
        if len(self.corrected) != len(self.hypothesis):
            raise ValueError(
                f"{self.id}: corrected length {len(self.corrected)} != "
                f"hypothesis length {len(self.hypothesis)}")


def correction_counts(pairs: Iterable[EvalPair]) -> tuple[int, int, int]:
    """(TP, FP, FN) over all substitution-aligned character positions."""
    tp = fp = fn = 0
    for pair in pairs:
        if len(pair.hypothesis) == len(pair.reference):
            aligned = [(i, i) for i in range(len(pair.hypothesis))]
        else:
            aligned = substitution_alignment(pair.hypothesis, pair.reference)
        for i, j in aligned:
            h, r, c = pair.hypothesis[i], pair.reference[j], pair.corrected[i]
            if h != r and c == r:
                tp += 1
            if c != h and c != r:
                fp += 1
            if h != r and c != r:
                fn += 1
    return tp, fp, fn


def prf_from_counts(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


def correction_prf(pairs: Iterable[EvalPair]) -> tuple[float, float, float]:
    return prf_from_counts(*correction_counts(pairs))


@dataclass
class EvalReport:
    cer_macro: float
    cer_micro: float
    correction_tp: int
    correction_fp: int
    correction_fn: int
    precision: float
    recall: float
    f1: float
    pair_count: int
    recoverable_count: int | None = None
    unrecoverable_count: int | None = None
    correct_missing_count: int | None = None
    recovered_count: int | None = None
    top_k: int | None = None
    strategy_accuracy: float | None = None

    def to_dict(self) -> dict:
        out = {
            "cer_macro": round(self.cer_macro, 4),
            "cer_micro": round(self.cer_micro, 4),
            "correction_tp": self.correction_tp,
            "correction_fp": self.correction_fp,
            "correction_fn": self.correction_fn,
            "precision": round(self.precision, 4),
            "recall": round(self.recall, 4),
            "f1": round(self.f1, 4),
            "pair_count": self.pair_count,
        }
        for name in ("recoverable_count", "unrecoverable_count",
                     "correct_missing_count", "recovered_count", "top_k"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        if self.strategy_accuracy is not None:
            out["strategy_accuracy"] = round(self.strategy_accuracy, 4)
        return out


def evaluate(pairs: Sequence[EvalPair]) -> EvalReport:
    """Aggregate CER and correction P/R/F1 over evaluated pairs."""
    if not pairs:
        raise ValueError("no pairs to evaluate")
    total_edits = 0
    total_ref = 0
    cer_sum = 0.0
    restored = 0
    detected = 0
    for pair in pairs:
        edits = kernels.levenshtein(pair.corrected, pair.reference)
        total_edits += edits
        total_ref += len(pair.reference)
        cer_sum += edits / len(pair.reference)
        det = aligned_oracle_detections(pair.hypothesis, pair.reference)
        detected += len(det.positions)
        if len(pair.hypothesis) == len(pair.reference):
            restored += sum(1 for i in det.positions
                            if pair.corrected[i] == pair.reference[i])
        else:
            ref_of = dict(substitution_alignment(pair.hypothesis, pair.reference))
            restored += sum(1 for i in det.positions
                            if pair.corrected[i] == pair.reference[ref_of[i]])
    tp, fp, fn = correction_counts(pairs)
    precision, recall, f1 = prf_from_counts(tp, fp, fn)
    return EvalReport(
        cer_macro=cer_sum / len(pairs),
        cer_micro=total_edits / total_ref if total_ref else 0.0,
        correction_tp=tp, correction_fp=fp, correction_fn=fn,
        precision=precision, recall=recall, f1=f1,
        pair_count=len(pairs),
        strategy_accuracy=restored / detected if detected else None,
    )


@dataclass(frozen=True)
class EvalRecord:
    """One dataset line: ASR hypothesis, reference, optional detections."""

    id: str
    hypothesis: tuple[str, ...]
    reference: tuple[str, ...] | None
    detections: tuple[int, ...] | None = None

    def resolve_detections(self) -> DetectionResult:
        if self.detections is not None:
            return DetectionResult(self.detections)
        if self.reference is None:
            raise ValueError(f"{self.id}: no detections and no reference")
        return aligned_oracle_detections(self.hypothesis, self.reference)


def run_pipeline(records: Sequence[EvalRecord], strategy: StrategyKind,
                 cfg: PsiConfig, provider, table: PhoneticTable
                 ) -> list[EvalPair]:
    pairs = []
    for rec in records:
        trace = correct(rec.hypothesis, rec.resolve_detections(),
                        strategy, cfg, provider, table)
        pairs.append(EvalPair(rec.id, rec.hypothesis, rec.reference, trace.output))
    return pairs


def default_alpha_grid() -> list[float]:
    """Log-spaced grid {1,2,5,7} x 10^e for e in -6..4."""
    return sorted(m * 10.0 ** e for e in range(-6, 5) for m in (1, 2, 5, 7))


@dataclass
class GridResult:
    rows: list[tuple[float, float, float]]  # (alpha, f1, cer_macro)
    best_alpha: float
    best_f1: float

    def to_tsv(self) -> str:
        lines = ["alpha\tf1\tcer_macro"]
        for alpha, f1, cer_macro in self.rows:
            lines.append(f"{alpha:g}\t{f1:.6f}\t{cer_macro:.6f}")
        return "\n".join(lines) + "\n"


class GridAborted(Exception):
    """Provider failure mid-sweep; carries the rows finished so far."""

    def __init__(self, message: str, partial_rows: list):
        super().__init__(message)
        self.partial_rows = partial_rows


def grid_search_alpha(records: Sequence[EvalRecord], alphas: Iterable[float],
                      strategy: StrategyKind, base_cfg: PsiConfig,
                      provider, table: PhoneticTable) -> GridResult:
    """Full pipeline per alpha; best alpha by F1, ties to the smaller alpha."""
    unique = sorted(set(float(a) for a in alphas))
    if not unique:
        raise ValueError("alphas must be non-empty")
    rows = []
    best_alpha, best_f1 = None, -1.0
    for alpha in unique:
        cfg = PsiConfig(alpha=alpha, top_k=base_cfg.top_k,
                        phonetics_enabled=base_cfg.phonetics_enabled)
        try:
            pairs = run_pipeline(records, strategy, cfg, provider, table)
        except Exception as exc:
            raise GridAborted(f"sweep aborted at alpha={alpha}: {exc}", rows) from exc
        report = evaluate(pairs)
        rows.append((alpha, report.f1, report.cer_macro))
        if report.f1 > best_f1:
            best_alpha, best_f1 = alpha, report.f1
    return GridResult(rows=rows, best_alpha=best_alpha, best_f1=best_f1)


class Recoverability(enum.Enum):
    RECOVERABLE = "recoverable"
    UNRECOVERABLE = "unrecoverable"
    CORRECT_NOT_IN_CANDIDATES = "correct-not-in-candidates"


def recoverability(error_char: str, correct_char: str,
                   dist: CandidateDistribution,
                   table: PhoneticTable) -> Recoverability:
    """Unrecoverable iff some wrong candidate has both probability >= and
    phonetic distance (from the error character) <= the correct candidate's."""
    if not dist.candidates:
        raise ValueError("candidate distribution is empty")
    p_correct = None
    for token, prob in dist.candidates:
        if token == correct_char:
            p_correct = prob
            break
    if p_correct is None:
        return Recoverability.CORRECT_NOT_IN_CANDIDATES
    s_correct = char_distance(error_char, correct_char, table).value
    for token, prob in dist.candidates:
        if token == correct_char:
            continue
        if prob >= p_correct:
            s = char_distance(error_char, token, table).value
            if s <= s_correct:
                return Recoverability.UNRECOVERABLE
    return Recoverability.RECOVERABLE


@dataclass
class RecoverabilityReport:
    recoverable: int = 0
    unrecoverable: int = 0
    correct_missing: int = 0
    recovered: int = 0
    errors_total: int = 0
    top_k: int = 0
    per_record: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "errors_total": self.errors_total,
            "recoverable_count": self.recoverable,
            "unrecoverable_count": self.unrecoverable,
            "correct_not_in_candidates_count": self.correct_missing,
            "recovered_count": self.recovered,
            "top_k": self.top_k,
        }
        if self.recoverable:
            out["recovered_rate"] = round(self.recovered / self.recoverable, 4)
        return out


def recoverability_report(records: Sequence[EvalRecord],
                          strategy: StrategyKind, cfg: PsiConfig,
                          provider, table: PhoneticTable
                          ) -> RecoverabilityReport:
    """Classify every detected error and count how many recoverable ones the
    corrector actually fixed."""
    report = RecoverabilityReport(top_k=cfg.top_k)
    for rec in records:
        detections = rec.resolve_detections()
        if len(rec.hypothesis) == len(rec.reference):
            ref_of = {i: i for i in detections.positions}
        else:
            ref_of = dict(substitution_alignment(rec.hypothesis, rec.reference))
        trace = correct(rec.hypothesis, detections, strategy, cfg, provider, table)
        # candidate sets for classification come from masking all detections
        # at once, mirroring the first iteration of the mask-all strategies
        seq = TokenSequence(tuple(rec.hypothesis), detections.positions)
        dists = {d.position: d for d in provider.predict(seq, cfg.top_k)}
        for pos in detections.positions:
            if pos not in ref_of:
                continue
            error_char = rec.hypothesis[pos]
            correct_char = rec.reference[ref_of[pos]]
            label = recoverability(error_char, correct_char, dists[pos], table)
            report.errors_total += 1
            if label is Recoverability.RECOVERABLE:
                report.recoverable += 1
                if trace.output[pos] == correct_char:
                    report.recovered += 1
            elif label is Recoverability.UNRECOVERABLE:
                report.unrecoverable += 1
            else:
                report.correct_missing += 1
            report.per_record.append(
                {"id": rec.id, "position": pos, "error": error_char,
                 "correct": correct_char, "label": label.value,
                 "fixed": trace.output[pos] == correct_char})
    return report
