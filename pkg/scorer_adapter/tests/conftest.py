import pytest

from corpus_fixture import SENTENCES, write_jsonl


@pytest.fixture
def sentences_file(tmp_path):
    rows = [{"id": rid, "text": text} for rid, text in SENTENCES]
    return write_jsonl(tmp_path / "sentences.jsonl", rows)


@pytest.fixture
def empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    return path
