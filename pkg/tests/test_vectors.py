import json

import numpy as np
import pytest

from cycleseg.errors import ParseError, ValidationError
from cycleseg.vectors import abstract_vectors, load_vector_file, sentence_vectors, write_vector_file


def write_lines(path, lines):
    path.write_text("\n".join(json.dumps(x) for x in lines) + "\n")


class TestLoadVectorFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "v.jsonl"
        records = [("a1", np.array([1.0, 2.0])), ("a1#0", np.array([0.5, 0.5]))]
        write_vector_file(path, records, model="test-model")
        vectors, manifest = load_vector_file(path)
        assert set(vectors) == {"a1", "a1#0"}
        assert manifest == {"model": "test-model", "dimension": 2, "count": 2}
        np.testing.assert_allclose(vectors["a1"], [1.0, 2.0])

    def test_dimension_mismatch_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        write_lines(path, [{"id": "a", "vector": [1.0]}, {"id": "b", "vector": [1.0, 2.0]}])
        with pytest.raises(ValidationError, match="dimension"):
            load_vector_file(path)

    def test_zero_vector_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        write_lines(path, [{"id": "a", "vector": [0.0, 0.0]}])
        with pytest.raises(ValidationError, match="zero vector"):
            load_vector_file(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        write_lines(path, [{"id": "a", "vector": [1.0]}, {"id": "a", "vector": [2.0]}])
        with pytest.raises(ValidationError, match="duplicate"):
            load_vector_file(path)

    def test_manifest_count_checked(self, tmp_path):
        path = tmp_path / "v.jsonl"
        write_lines(
            path,
            [{"id": "a", "vector": [1.0]}, {"manifest": {"model": "m", "dimension": 1, "count": 5}}],
        )
        with pytest.raises(ValidationError, match="count"):
            load_vector_file(path)

    def test_records_after_manifest_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        write_lines(
            path,
            [
                {"id": "a", "vector": [1.0]},
                {"manifest": {"model": "m", "dimension": 1, "count": 1}},
                {"id": "b", "vector": [1.0]},
            ],
        )
        with pytest.raises(ParseError):
            load_vector_file(path)

    def test_granularity_split(self, tmp_path):
        path = tmp_path / "v.jsonl"
        write_lines(
            path,
            [
                {"id": "a", "vector": [1.0]},
                {"id": "a#0", "vector": [2.0]},
                {"id": "a#1", "vector": [3.0]},
            ],
        )
        vectors, _ = load_vector_file(path)
        assert set(abstract_vectors(vectors)) == {"a"}
        sent = sentence_vectors(vectors)
        assert set(sent["a"]) == {0, 1}
