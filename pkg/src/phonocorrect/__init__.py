"""Phonetic re-ranking post-correction for Chinese ASR output."""

from .corrector import (CorrectionTrace, PsiConfig, ScoredCandidate,
                        StrategyKind, correct, psi_score, select_replacement)
from .detector import (AlignmentError, DetectionResult, HTTPDetector,
                       model_detect, oracle_detect)
from .evaluation import (EvalPair, EvalRecord, EvalReport, Recoverability,
                         cer, correction_prf, default_alpha_grid,
                         grid_search_alpha, recoverability,
                         recoverability_report)
from .phonetics import (CharDistance, PhoneticTable, Pronunciation, TableError,
                        char_distance, default_table, load_table,
                        syllable_distance)
from .providers import (MASK_TOKEN, CandidateDistribution, HTTPProvider,
                        MockProvider, ProviderError, TokenSequence)

__version__ = "0.1.0"
