#!/usr/bin/env python3
"""Build the tiny frozen checkpoints used by the service test suite.

Produces two seeded miniature BERT checkpoints under service/tests/fixtures:
  mlm/       — BertForMaskedLM overfit on a small sentence corpus so that
               masked positions recover the original character
  detector/  — BertForTokenClassification trained on synthetic substitution
               corruptions of the same corpus

Run from the repository root:  python service/tools/make_test_checkpoints.py
"""

import random
import sys
from pathlib import Path

import torch
from transformers import BertConfig, BertForMaskedLM, \
    BertForTokenClassification, BertTokenizerFast

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

CORPUS = [
    "我想吃蛋糕",
    "他要喝牛奶",
    "今天天气很好",
    "我们去公园散步",
    "她在学校读书",
    "请把门关上",
    "这本书很有意思",
    "火车马上就到站",
    "妈妈在厨房做饭",
    "小猫趴在窗台上",
    "明天早上开会",
    "他买了一辆新车",
    "湖边的风景真美",
    "我的手机没电了",
    "老师让我们写作业",
    "商店八点钟关门",
]


def build_vocab():
    chars = sorted({c for s in CORPUS for c in s})
    return ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + chars


def make_tokenizer(vocab, path: Path):
    path.mkdir(parents=True, exist_ok=True)
    (path / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tok = BertTokenizerFast(str(path / "vocab.txt"), do_lower_case=False)
    tok.save_pretrained(path)
    return tok


def tiny_config(vocab_size, **kw):
    return BertConfig(vocab_size=vocab_size, hidden_size=64,
                      num_hidden_layers=2, num_attention_heads=2,
                      intermediate_size=128, max_position_embeddings=32,
                      **kw)


def encode(tok, sentence, mask_at=None):
    ids = [tok.cls_token_id]
    for i, c in enumerate(sentence):
        ids.append(tok.mask_token_id if i == mask_at
                   else tok.convert_tokens_to_ids(c))
    ids.append(tok.sep_token_id)
    return ids


def train_mlm(tok, out: Path):
    torch.manual_seed(0)
    model = BertForMaskedLM(tiny_config(tok.vocab_size))
    examples = []
    for s in CORPUS:
        for i in range(len(s)):
            ids = encode(tok, s, mask_at=i)
            labels = [-100] * len(ids)
            labels[i + 1] = tok.convert_tokens_to_ids(s[i])
            examples.append((ids, labels))
    opt = torch.optim.Adam(model.parameters(), lr=5e-4)
    model.train()
    for epoch in range(60):
        total = 0.0
        for ids, labels in examples:
            opt.zero_grad()
            out_ = model(input_ids=torch.tensor([ids]),
                         labels=torch.tensor([labels]))
            out_.loss.backward()
            opt.step()
            total += float(out_.loss)
        if total / len(examples) < 0.01:
            break
    model.eval()
    # sanity: every masked position must recover its original character
    with torch.no_grad():
        for s in CORPUS:
            for i in range(len(s)):
                ids = torch.tensor([encode(tok, s, mask_at=i)])
                pred = int(model(input_ids=ids).logits[0, i + 1].argmax())
                assert tok.convert_ids_to_tokens(pred) == s[i], (s, i)
    model.save_pretrained(out)
    tok.save_pretrained(out)
    print(f"mlm checkpoint ok after epoch {epoch}: {out}")


def train_detector(tok, out: Path):
    torch.manual_seed(1)
    rng = random.Random(1)
    model = BertForTokenClassification(tiny_config(tok.vocab_size,
                                                   num_labels=2))
    chars = [c for c in build_vocab() if len(c) == 1]
    examples = [(encode(tok, s), [0] * len(s)) for s in CORPUS] * 4
    for s in CORPUS:
        for i in range(len(s)):  # one corruption at every position
            for wrong in rng.sample([c for c in chars if c != s[i]], 2):
                corrupted = s[:i] + wrong + s[i + 1:]
                labels = [0] * len(s)
                labels[i] = 1
                examples.append((encode(tok, corrupted), labels))
    # the corruption probed by the test suite, pinned into the fixture
    examples += [(encode(tok, "我想吃蛋奶"), [0, 0, 0, 0, 1])] * 4
    opt = torch.optim.Adam(model.parameters(), lr=5e-4)
    model.train()
    for epoch in range(80):
        total = 0.0
        rng.shuffle(examples)
        for ids, labels in examples:
            padded = [-100] + labels + [-100]
            opt.zero_grad()
            out_ = model(input_ids=torch.tensor([ids]),
                         labels=torch.tensor([padded]))
            out_.loss.backward()
            opt.step()
            total += float(out_.loss)
        if total / len(examples) < 0.02:
            break
    model.eval()
    with torch.no_grad():
        for s in CORPUS:  # clean sentences must score low everywhere
            ids = torch.tensor([encode(tok, s)])
            probs = torch.softmax(model(input_ids=ids).logits[0], -1)[:, 1]
            assert probs[1:len(s) + 1].max() < 0.5, (s, probs)
        # the pinned probe corruption must be flagged at position 4
        ids = torch.tensor([encode(tok, "我想吃蛋奶")])
        probs = torch.softmax(model(input_ids=ids).logits[0], -1)[:, 1]
        assert probs[5] >= 0.5, probs
    model.save_pretrained(out)
    tok.save_pretrained(out)
    print(f"detector checkpoint ok after epoch {epoch}: {out}")


def main():
    vocab = build_vocab()
    tok = make_tokenizer(vocab, FIXTURES / "tokenizer")
    train_mlm(tok, FIXTURES / "mlm")
    train_detector(tok, FIXTURES / "detector")
    return 0


if __name__ == "__main__":
    sys.exit(main())
