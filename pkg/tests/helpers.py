"""Shared test utilities: synthetic providers and fixture builders."""

import hashlib
import random

from phonocorrect.evaluation import EvalRecord
from phonocorrect.providers import (CandidateDistribution, MockProvider,
                                    TokenSequence, fixture_key)


class SyntheticProvider:
    """Deterministic pseudo-random candidate provider.

    Candidates for a query depend only on (seed, masked text, position),
    so repeated calls agree and truncation is prefix-stable.
    """

    def __init__(self, char_pool, seed=0, max_candidates=8):
        self.char_pool = list(char_pool)
        self.seed = seed
        self.max_candidates = max_candidates

    def _candidates(self, masked_text, position):
        digest = hashlib.sha256(
            f"{self.seed}|{masked_text}|{position}".encode()).digest()
        rng = random.Random(digest)
        n = rng.randint(3, self.max_candidates)
        tokens = rng.sample(self.char_pool, n)
        probs = sorted((rng.random() for _ in range(n)), reverse=True)
        total = sum(probs)
        return tuple((t, p * 0.9 / total) for t, p in zip(tokens, probs))

    def predict(self, seq: TokenSequence, top_k: int):
        text = seq.masked_text()
        return [CandidateDistribution(pos, self._candidates(text, pos)[:top_k])
                for pos in seq.mask_positions]


def homophone_groups(table, min_size=2):
    """Characters grouped by shared exact reading."""
    groups = {}
    for char, readings in table.readings.items():
        for pron in readings:
            groups.setdefault(pron, []).append(char)
    return {p: chars for p, chars in groups.items() if len(chars) >= min_size}


def build_planted_dataset(table, n_sentences=50, seed=7):
    """Sentences with one planted homophone-style error each, plus a mock
    provider whose candidate lists make phonetic re-ranking decisive.

    Two sentence classes:
      * reward: the correct char is a homophone of the error; a
        phonetically-far distractor has higher probability. Fixed only
        when alpha is large enough.
      * punish: the correct char is a tone-variant of the error (small
        nonzero distance); a lower-probability homophone of the error
        wins once alpha is very large.
    """
    from phonocorrect.phonetics import char_distance

    rng = random.Random(seed)
    groups = homophone_groups(table)
    all_chars = sorted(table.readings)

    # readings that have >=2 homophones and a same-syllable different-tone
    # neighbour; index by toneless syllable
    by_syllable = {}
    for pron, chars in groups.items():
        by_syllable.setdefault((pron.initial, pron.final), []).append((pron, chars))

    tone_pairs = [pair for pair in by_syllable.values() if len(pair) >= 2]
    homo_list = sorted(groups.items(), key=lambda kv: str(kv[0]))
    rng.shuffle(tone_pairs)
    rng.shuffle(homo_list)

    records = []
    fixture = {}
    filler_pool = [c for c in all_chars if len(table.readings[c]) == 1]

    def far_char(anchor):
        while True:
            cand = rng.choice(all_chars)
            d = char_distance(anchor, cand, table)
            if d.covered and d.value > 5.0:
                return cand

    n_reward = (n_sentences * 7) // 10
    for idx in range(n_sentences):
        filler = rng.sample(filler_pool, 5)
        pos = rng.randint(0, 5)
        if idx < n_reward:
            pron, chars = homo_list[idx % len(homo_list)]
            error_char, correct_char = rng.sample(chars, 2)
            distractor = far_char(error_char)
            extra = rng.choice([c for c in filler
                                if c not in (distractor, correct_char)])
            cands = [[distractor, 0.4], [correct_char, 0.3], [extra, 0.1]]
        else:
            error_char = correct_char = homophone_of_error = None
            for offset in range(len(tone_pairs)):
                pair = tone_pairs[(idx + offset) % len(tone_pairs)]
                (_, chars_a), (_, chars_b) = pair[0], pair[1]
                err = rng.choice(chars_a)
                homos = [c for c in chars_a
                         if c != err and char_distance(err, c, table).value == 0.0]
                goods = [c for c in chars_b if c != err
                         and 0.0 < char_distance(err, c, table).value < 3.0]
                if homos and goods:
                    error_char = err
                    correct_char = rng.choice(goods)
                    homophone_of_error = rng.choice(homos)
                    break
            assert error_char is not None, "no usable tone-variant pair found"
            extra = rng.choice([c for c in filler
                                if c not in (correct_char, homophone_of_error)])
            cands = [[correct_char, 0.5], [homophone_of_error, 0.35],
                     [extra, 0.05]]
        ref = filler[:pos] + [correct_char] + filler[pos:]
        hyp = filler[:pos] + [error_char] + filler[pos:]
        seq = TokenSequence(tuple(hyp), (pos,))
        fixture[fixture_key(seq, pos)] = cands
        records.append(EvalRecord(id=str(idx), hypothesis=tuple(hyp),
                                  reference=tuple(ref)))
    return records, MockProvider(fixture)
