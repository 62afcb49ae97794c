"""Model backends: a deterministic offline stand-in and a transformers runner.

Both expose the same four operations — per-style scores, sentence
embeddings, perplexity, adversarial probability — so the batch entry
points do not care which one is active. Any failure to resolve or run a
model surfaces as :class:`~scorer_adapter.schemas.ModelError`, which the
CLI turns into a nonzero exit before any output file exists.
"""
from __future__ import annotations

import hashlib

from .schemas import ModelError


class HashedBackend:
    """Derives every output from a SHA-256 digest of (model, purpose, text).

    No models, no downloads, no state: identical text always yields
    identical values, and every value respects the schema's range
    contracts. Meant for tests, CI, and plumbing dry runs.
    """

    name = "hashed"

    def __init__(self, device: str = "cpu", batch_size: int = 32):
        self.device = device
        self.batch_size = batch_size

    @staticmethod
    def _unit(model_id: str, purpose: str, text: str, counter: int = 0) -> float:
        digest = hashlib.sha256(
            f"{model_id}\x1f{purpose}\x1f{counter}\x1f{text}".encode("utf-8")
        ).digest()
        return int.from_bytes(digest[:8], "big") / 2.0**64

    def style_score(self, model_id: str, style: str, text: str) -> float:
        return self._unit(model_id, f"score:{style}", text)

    def embedding(self, model_id: str, text: str, dim: int) -> list[float]:
        return [2.0 * self._unit(model_id, "embed", text, i) - 1.0
                for i in range(dim)]

    def perplexity(self, model_id: str, text: str) -> float:
        return 5.0 + 500.0 * self._unit(model_id, "perplexity", text)

    def adversarial(self, model_id: str, text: str) -> float:
        return self._unit(model_id, "adversarial", text)


class TransformersBackend:
    """Runs pretrained Hugging Face checkpoints in deterministic eval mode.

    Models are loaded lazily, once per id, before any output is produced;
    a missing package, unreachable hub, or bad checkpoint id raises
    ModelError. Inference runs under ``torch.no_grad()`` with the model in
    ``eval()`` mode, so repeated runs on the same input are identical.
    """

    name = "transformers"

    def __init__(self, device: str = "cpu", batch_size: int = 32):
        self.device = device
        self.batch_size = batch_size
        self._cache: dict[tuple[str, str], tuple] = {}

    def _modules(self):
        try:
            import torch
            import transformers
        except ImportError as exc:
            raise ModelError(f"transformers backend unavailable: {exc}") from exc
        return torch, transformers

    def _load(self, model_id: str, kind: str):
        key = (kind, model_id)
        if key in self._cache:
            return self._cache[key]
        torch, transformers = self._modules()
        factories = {
            "classifier": transformers.AutoModelForSequenceClassification,
            "embedder": transformers.AutoModel,
            "lm": transformers.AutoModelForCausalLM,
        }
        try:
            tokenizer = transformers.AutoTokenizer.from_pretrained(model_id)
            model = factories[kind].from_pretrained(model_id)
        except Exception as exc:  # any load failure is fatal, by contract
            raise ModelError(f"cannot load {kind} model {model_id!r}: {exc}") from exc
        model.to(self.device)
        model.eval()
        self._cache[key] = (tokenizer, model)
        return tokenizer, model

    def _positive_probability(self, model_id: str, text: str) -> float:
        torch, _ = self._modules()
        tokenizer, model = self._load(model_id, "classifier")
        with torch.no_grad():
            inputs = tokenizer(text, return_tensors="pt", truncation=True)
            logits = model(**{k: v.to(self.device) for k, v in inputs.items()}).logits
            if logits.shape[-1] == 1:
                return float(torch.sigmoid(logits)[0, 0])
            return float(torch.softmax(logits, dim=-1)[0, -1])

    def style_score(self, model_id: str, style: str, text: str) -> float:
        return self._positive_probability(model_id, text)

    def embedding(self, model_id: str, text: str, dim: int) -> list[float]:
        # dim is advisory here: the checkpoint decides the width.
        torch, _ = self._modules()
        tokenizer, model = self._load(model_id, "embedder")
        with torch.no_grad():
            inputs = tokenizer(text, return_tensors="pt", truncation=True)
            inputs = {k: v.to(self.device) for k, v in inputs.items()}
            hidden = model(**inputs).last_hidden_state
            mask = inputs["attention_mask"].unsqueeze(-1)
            pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1)
            return [float(v) for v in pooled[0]]

    def perplexity(self, model_id: str, text: str) -> float:
        torch, _ = self._modules()
        tokenizer, model = self._load(model_id, "lm")
        with torch.no_grad():
            inputs = tokenizer(text, return_tensors="pt", truncation=True)
            input_ids = inputs["input_ids"].to(self.device)
            loss = model(input_ids=input_ids, labels=input_ids).loss
            return float(torch.exp(loss))

    def adversarial(self, model_id: str, text: str) -> float:
        return self._positive_probability(model_id, text)


BACKENDS = {
    HashedBackend.name: HashedBackend,
    TransformersBackend.name: TransformersBackend,
}


def make_backend(name: str, device: str, batch_size: int):
    return BACKENDS[name](device=device, batch_size=batch_size)
