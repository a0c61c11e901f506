import random

import httpx
import pytest
from hypothesis import given, strategies as st

from phonocorrect.detector import (AlignmentError, DetectionResult,
                                   HTTPDetector, model_detect, oracle_detect)
from phonocorrect.providers import ProviderError


class FakeBackend:
    def __init__(self, scores):
        self.scores = scores

    def score(self, tokens):
        return self.scores


class TestOracleDetect:
    def test_fig2(self):
        res = oracle_detect(tuple("我想吃蛋糕"), tuple("我想吃蛋高"))
        assert res.positions == (4,)

    def test_identical(self):
        assert oracle_detect(tuple("你好"), tuple("你好")).positions == ()

    def test_all_differ(self):
        assert oracle_detect(tuple("abc"), tuple("xyz")).positions == (0, 1, 2)

    def test_length_mismatch(self):
        with pytest.raises(AlignmentError):
            oracle_detect(tuple("abc"), tuple("ab"))

    def test_soundness_on_random_corruptions(self):
        rng = random.Random(3)
        alphabet = "零一二三四五六七八九"
        for _ in range(100):
            ref = [rng.choice(alphabet) for _ in range(rng.randint(3, 15))]
            hyp = list(ref)
            corrupted = sorted(rng.sample(range(len(ref)),
                                          rng.randint(0, len(ref) // 2)))
            for i in corrupted:
                hyp[i] = chr(ord(ref[i]) + 0x1000)  # guaranteed different
            assert oracle_detect(hyp, ref).positions == tuple(corrupted)


class TestModelDetect:
    def test_direct_thresholding(self):
        res = model_detect(list("abc"), 0.5, FakeBackend([0.1, 0.9, 0.4]))
        assert res.positions == (1,)
        assert res.scores == (0.1, 0.9, 0.4)

    def test_threshold_zero_flags_all(self):
        res = model_detect(list("abc"), 0.0, FakeBackend([0.1, 0.0, 0.4]))
        assert res.positions == (0, 1, 2)

    def test_threshold_one_flags_none(self):
        res = model_detect(list("abc"), 1.0, FakeBackend([0.99, 0.5, 0.0]))
        assert res.positions == ()

    def test_score_count_mismatch(self):
        with pytest.raises(ProviderError):
            model_detect(list("abc"), 0.5, FakeBackend([0.1]))

    @given(st.lists(st.floats(min_value=0, max_value=1), min_size=1, max_size=20),
           st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1))
    def test_threshold_monotonicity(self, scores, t1, t2):
        lo, hi = min(t1, t2), max(t1, t2)
        tokens = ["x"] * len(scores)
        low = set(model_detect(tokens, lo, FakeBackend(scores)).positions)
        high = set(model_detect(tokens, hi, FakeBackend(scores)).positions)
        assert high <= low


class TestHTTPDetector:
    def test_score(self):
        def handler(request):
            return httpx.Response(200, json={"scores": [0.1, 0.8]})

        det = HTTPDetector("http://test", transport=httpx.MockTransport(handler))
        assert det.score(list("你好")) == [0.1, 0.8]

    def test_backend_error(self):
        det = HTTPDetector("http://test",
                           transport=httpx.MockTransport(
                               lambda r: httpx.Response(503)))
        with pytest.raises(ProviderError):
            det.score(list("你好"))


def test_detection_result_sorts_and_dedups():
    assert DetectionResult((3, 1, 3)).positions == (1, 3)
