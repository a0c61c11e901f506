"""Model loading and inference for the masked-LM and detection endpoints."""

import threading

import torch


class ModelNotLoaded(RuntimeError):
    pass


def _single_char_mask(tokenizer) -> torch.Tensor:
    """Boolean mask over the vocabulary selecting plain single-character
    tokens (no wordpiece continuations, no special or reserved tokens)."""
    vocab = tokenizer.get_vocab()
    mask = torch.zeros(len(vocab), dtype=torch.bool)
    special = set(tokenizer.all_special_tokens)
    for token, idx in vocab.items():
        if len(token) == 1 and token not in special:
            mask[idx] = True
    return mask


class ModelBundle:
    """Holds the masked-LM (and optionally a token-classification detector)
    behind a lock-free read-only interface; loading happens once up front."""

    def __init__(self, model_id: str, detector_checkpoint: str | None = None):
        from transformers import (AutoModelForMaskedLM,
                                  AutoModelForTokenClassification,
                                  AutoTokenizer)

        self.model_id = model_id
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.mlm = AutoModelForMaskedLM.from_pretrained(model_id)
        self.mlm.eval()
        self._allowed = _single_char_mask(self.tokenizer)
        self._id_to_token = {i: t for t, i in
                             self.tokenizer.get_vocab().items()}
        self.detector = None
        if detector_checkpoint is not None:
            self.detector = AutoModelForTokenClassification.from_pretrained(
                detector_checkpoint)
            self.detector.eval()
        # torch inference itself is thread-safe for read-only modules, but
        # serialize anyway so concurrent requests cannot oversubscribe CPU
        self._lock = threading.Lock()

    @property
    def detect_capable(self) -> bool:
        return self.detector is not None

    def _encode(self, tokens: list[str], mask_positions: set[int]):
        tok = self.tokenizer
        ids = [tok.cls_token_id]
        for i, t in enumerate(tokens):
            if i in mask_positions:
                ids.append(tok.mask_token_id)
            else:
                ids.append(tok.convert_tokens_to_ids(t))
        ids.append(tok.sep_token_id)
        return torch.tensor([ids])

    def predict_masked(self, tokens: list[str], mask_positions: list[int],
                       top_k: int) -> list[dict]:
        """Top-k single-character candidates per masked position.

        Probabilities are softmax over the full vocabulary, so after the
        single-character filter they do not sum to one.
        """
        if not mask_positions:
            return []
        input_ids = self._encode(tokens, set(mask_positions))
        with self._lock, torch.no_grad():
            logits = self.mlm(input_ids=input_ids).logits[0]
        predictions = []
        for pos in mask_positions:
            probs = torch.softmax(logits[pos + 1], dim=-1)  # +1 skips [CLS]
            probs = torch.where(self._allowed, probs, torch.zeros(()))
            values, indices = torch.topk(probs, min(top_k, len(probs)))
            candidates = [
                {"token": self._id_to_token[int(i)], "prob": float(v)}
                for v, i in zip(values, indices) if v > 0]
            predictions.append({"position": pos, "candidates": candidates})
        return predictions

    def detect_scores(self, tokens: list[str]) -> list[float]:
        """Per-token error probability in [0, 1] from the detector head."""
        if self.detector is None:
            raise ModelNotLoaded("no detector checkpoint configured")
        input_ids = self._encode(tokens, set())
        with self._lock, torch.no_grad():
            logits = self.detector(input_ids=input_ids).logits[0]
        inner = logits[1:len(tokens) + 1]  # strip [CLS]/[SEP]
        if inner.shape[-1] == 1:
            scores = torch.sigmoid(inner[:, 0])
        else:
            scores = torch.softmax(inner, dim=-1)[:, 1]
        return [float(s) for s in scores]
