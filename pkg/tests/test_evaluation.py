import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import build_planted_dataset
from phonocorrect.corrector import PsiConfig, StrategyKind
from phonocorrect.evaluation import (EvalPair, EvalRecord, GridAborted,
                                     Recoverability, aligned_oracle_detections,
                                     cer, correction_counts, correction_prf,
                                     default_alpha_grid, evaluate,
                                     grid_search_alpha, recoverability,
                                     recoverability_report,
                                     substitution_alignment)
from phonocorrect.providers import CandidateDistribution, MockProvider


def brute_force_edit_distance(a, b):
    # full-matrix DP, written independently of the kernel implementations
    m, n = len(a), len(b)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        d[i][0] = i
    for j in range(n + 1):
        d[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1),
            )
    return d[m][n]


class TestCer:
    def test_identical(self):
        assert cer(tuple("我想吃蛋糕"), tuple("我想吃蛋糕")) == 0.0

    def test_one_substitution(self):
        assert cer(tuple("我想吃蛋糕"), tuple("我想吃蛋高")) == pytest.approx(0.2)

    def test_empty_hypothesis(self):
        assert cer((), tuple("你好吗呀")) == 1.0

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            cer(tuple("你好"), ())

    def test_matches_brute_force_oracle(self):
        rng = random.Random(31)
        alphabet = "甲乙丙丁戊己"
        for _ in range(200):
            hyp = [rng.choice(alphabet) for _ in range(rng.randint(0, 12))]
            ref = [rng.choice(alphabet) for _ in range(rng.randint(1, 12))]
            assert cer(hyp, ref) == brute_force_edit_distance(hyp, ref) / len(ref)


class TestAlignment:
    def test_equal_lengths_identity_when_substitution_only(self):
        pairs = substitution_alignment(tuple("abcd"), tuple("axcd"))
        assert pairs == [(0, 0), (1, 1), (2, 2), (3, 3)]

    def test_deletion_skips_position(self):
        pairs = substitution_alignment(tuple("abcd"), tuple("acd"))
        assert (0, 0) in pairs and len(pairs) == 3

    def test_aligned_oracle_unequal(self):
        # hypothesis dropped one char and substituted another
        det = aligned_oracle_detections(tuple("axd"), tuple("abcd"))
        assert det.positions == (1,) or det.positions == (2,)


def enumerate_counts(pairs):
    # independent per-position enumeration of TP/FP/FN
    tp = fp = fn = 0
    for pair in pairs:
        assert len(pair.hypothesis) == len(pair.reference)
        for h, r, c in zip(pair.hypothesis, pair.reference, pair.corrected):
            if h != r:
                if c == r:
                    tp += 1
                else:
                    fn += 1
            if c != h and c != r:
                fp += 1
    return tp, fp, fn


class TestCorrectionPrf:
    def test_perfect_correction(self):
        pairs = [EvalPair("1", tuple("abx"), tuple("abc"), tuple("abc"))]
        assert correction_prf(pairs) == (1.0, 1.0, 1.0)

    def test_no_change(self):
        pairs = [EvalPair("1", tuple("abx"), tuple("abc"), tuple("abx"))]
        assert correction_counts(pairs) == (0, 0, 1)
        assert correction_prf(pairs) == (0.0, 0.0, 0.0)

    def test_three_error_fixture(self):
        # 3 errors; one fixed, one miscorrected, one untouched
        pairs = [EvalPair("1", tuple("xyzab"), tuple("cdeab"), tuple("cwzab"))]
        assert correction_counts(pairs) == (1, 1, 2)
        p, r, f1 = correction_prf(pairs)
        assert p == pytest.approx(0.5)
        assert r == pytest.approx(1 / 3)
        assert f1 == pytest.approx(0.4)

    def test_matches_independent_enumeration(self):
        rng = random.Random(41)
        alphabet = "甲乙丙丁"
        for _ in range(100):
            pairs = []
            for i in range(rng.randint(1, 5)):
                n = rng.randint(1, 10)
                ref = [rng.choice(alphabet) for _ in range(n)]
                hyp = [rng.choice(alphabet) for _ in range(n)]
                cor = [rng.choice([h, r, rng.choice(alphabet)])
                       for h, r in zip(hyp, ref)]
                pairs.append(EvalPair(str(i), tuple(hyp), tuple(ref), tuple(cor)))
            assert correction_counts(pairs) == enumerate_counts(pairs)

    def test_f1_formula_invariant(self):
        rng = random.Random(43)
        alphabet = "甲乙丙"
        for _ in range(50):
            n = rng.randint(1, 8)
            ref = [rng.choice(alphabet) for _ in range(n)]
            hyp = [rng.choice(alphabet) for _ in range(n)]
            cor = [rng.choice(alphabet) for _ in range(n)]
            p, r, f1 = correction_prf(
                [EvalPair("x", tuple(hyp), tuple(ref), tuple(cor))])
            if p + r > 0:
                assert f1 == pytest.approx(2 * p * r / (p + r))
            else:
                assert f1 == 0.0


class TestEvaluate:
    def test_report_consistency(self):
        pairs = [
            EvalPair("1", tuple("abx"), tuple("abc"), tuple("abc")),
            EvalPair("2", tuple("qqq"), tuple("qqq"), tuple("qqq")),
        ]
        report = evaluate(pairs)
        assert report.cer_macro == 0.0
        assert report.f1 == 1.0
        assert report.pair_count == 2
        assert report.strategy_accuracy == 1.0

    def test_corrected_length_must_match(self):
        with pytest.raises(ValueError):
            EvalPair("1", tuple("ab"), tuple("ab"), tuple("abc"))


@pytest.fixture(scope="module")
def planted(table):
    return build_planted_dataset(table, n_sentences=20, seed=12)


class TestGridSearch:
    def test_single_alpha(self, table, planted):
        records, provider = planted
        result = grid_search_alpha(records, [1.0],
                                   StrategyKind.MASK_ALL_REPLACE_ALL,
                                   PsiConfig(), provider, table)
        assert len(result.rows) == 1
        assert result.best_alpha == 1.0

    def test_duplicates_deduplicated(self, table, planted):
        records, provider = planted
        result = grid_search_alpha(records, [1.0, 1.0, 0.5],
                                   StrategyKind.MASK_ALL_REPLACE_ALL,
                                   PsiConfig(), provider, table)
        assert [row[0] for row in result.rows] == [0.5, 1.0]

    def test_homophone_fixture_needs_positive_alpha(self, table, planted):
        records, provider = planted
        result = grid_search_alpha(records, [0.0, 0.2],
                                   StrategyKind.MASK_ALL_REPLACE_ALL,
                                   PsiConfig(), provider, table)
        f1_by_alpha = dict((a, f) for a, f, _ in result.rows)
        assert result.best_alpha > 0
        assert f1_by_alpha[0.2] > f1_by_alpha[0.0]

    def test_abort_carries_partial_rows(self, table, planted):
        records, _ = planted
        empty_provider = MockProvider({})
        with pytest.raises(GridAborted) as exc_info:
            grid_search_alpha(records, [1.0], StrategyKind.MASK_ALL_REPLACE_ALL,
                              PsiConfig(), empty_provider, table)
        assert exc_info.value.partial_rows == []

    def test_default_grid_shape(self):
        grid = default_alpha_grid()
        assert len(grid) == 44
        assert min(grid) == pytest.approx(1e-6)
        assert max(grid) == pytest.approx(7e4)


FIG2 = CandidateDistribution(4, (("有", 0.4), ("高", 0.2), ("羔", 0.1)))


class TestRecoverability:
    def test_fig2_recoverable(self, table):
        assert recoverability("糕", "高", FIG2, table) is Recoverability.RECOVERABLE

    def test_equal_p_homophone_unrecoverable(self, table):
        dist = CandidateDistribution(0, (("高", 0.2), ("羔", 0.2)))
        assert recoverability("糕", "高", dist, table) is \
            Recoverability.UNRECOVERABLE

    def test_correct_ranked_first_recoverable(self, table):
        dist = CandidateDistribution(0, (("高", 0.5), ("有", 0.3)))
        assert recoverability("糕", "高", dist, table) is \
            Recoverability.RECOVERABLE

    def test_correct_missing(self, table):
        dist = CandidateDistribution(0, (("有", 0.4),))
        assert recoverability("糕", "高", dist, table) is \
            Recoverability.CORRECT_NOT_IN_CANDIDATES

    def test_empty_distribution_rejected(self, table):
        with pytest.raises(ValueError):
            recoverability("糕", "高", CandidateDistribution(0, ()), table)

    def test_monotone_in_correct_probability(self, table):
        # raising P(correct) with everything else fixed never flips
        # recoverable -> unrecoverable
        competitors = (("有", 0.3), ("羔", 0.2))
        last_recoverable = False
        for p in (0.05, 0.15, 0.35, 0.45):
            cands = tuple(sorted(competitors + (("高", p),),
                                 key=lambda c: -c[1]))
            label = recoverability("糕", "高",
                                   CandidateDistribution(0, cands), table)
            now = label is Recoverability.RECOVERABLE
            assert now or not last_recoverable
            last_recoverable = now

    def test_matches_brute_force(self, table):
        rng = random.Random(51)
        chars = sorted(table.readings)
        from phonocorrect.phonetics import char_distance
        for _ in range(300):
            error = rng.choice(chars)
            tokens = rng.sample(chars, 5)
            probs = sorted((rng.random() for _ in tokens), reverse=True)
            total = sum(probs)
            cands = tuple((t, p / total * 0.9) for t, p in zip(tokens, probs))
            correct_char = rng.choice(tokens)
            dist = CandidateDistribution(0, cands)
            # brute-force: direct double loop over the definitions
            p_map = dict(cands)
            p_c = p_map[correct_char]
            s_c = char_distance(error, correct_char, table).value
            unrec = any(
                p >= p_c and char_distance(error, t, table).value <= s_c
                for t, p in cands if t != correct_char)
            expected = (Recoverability.UNRECOVERABLE if unrec
                        else Recoverability.RECOVERABLE)
            assert recoverability(error, correct_char, dist, table) is expected


class TestRecoverabilityReport:
    def test_planted_dataset_counts(self, table):
        records, provider = build_planted_dataset(table, n_sentences=20, seed=13)
        report = recoverability_report(
            records, StrategyKind.MASK_ALL_REPLACE_ALL,
            PsiConfig(alpha=0.1), provider, table)
        assert report.errors_total == 20
        assert (report.recoverable + report.unrecoverable
                + report.correct_missing) == 20
        assert report.recovered <= report.recoverable
        d = report.to_dict()
        assert d["recovered_count"] == report.recovered
