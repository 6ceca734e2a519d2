import json

import pytest

from cycleseg.corpus import TokenizedAbstract


@pytest.fixture
def toy_corpus_file(tmp_path):
    """Small JSONL corpus with gold labels, one record per style."""
    records = [
        {
            "id": "a1",
            "title": "first",
            "sentences": [
                "Coronavirus antigen binding was measured in cells.",
                "Samples showed strong antigen response curves.",
                "Vaccination reduced viral load substantially.",
                "Antibody titers rose after booster doses.",
                "These findings suggest antigen vaccines protect mice.",
            ],
            "gold_conclusion_indices": [4],
        },
        {
            "id": "a2",
            "title": "second",
            "body": "Protein folding was simulated. Energy landscapes were explored. Folding pathways converge quickly.",
            "gold_conclusion_indices": [2],
        },
        {
            "id": "a3",
            "title": "third",
            "sentences": [
                "Background sentence one here.",
                "Methods sentence follows now.",
                "Results look promising overall.",
                "We conclude the approach works.",
            ],
            "section_tags": ["Background", "Methods", "Results", "Conclusions"],
        },
    ]
    path = tmp_path / "toy.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return path


def make_abstract(aid: str, sentences: list[list[str]], gold=None) -> TokenizedAbstract:
    return TokenizedAbstract(
        id=aid,
        sentences=tuple(tuple(s) for s in sentences),
        gold=frozenset(gold) if gold is not None else None,
    )


@pytest.fixture
def make_tokenized():
    return make_abstract
