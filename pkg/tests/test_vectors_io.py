import numpy as np
import pytest

from taxmap.embed import EmbeddingTable, load_vectors, save_vectors
from taxmap.errors import MissingOovError, ParseError, UnknownConceptError, ValidationError


def random_table(rng, n=3, dim=4, with_oov=False):
    oov = rng.normal(size=dim) if with_oov else None
    return EmbeddingTable([f"tok{i}" for i in range(n)],
                          rng.normal(size=(n, dim)), oov_vector=oov)


class TestRoundTrip:
    def test_basic(self, tmp_path):
        table = random_table(np.random.default_rng(0))
        path = tmp_path / "vecs.txt"
        save_vectors(table, path)
        assert load_vectors(path) == table

    def test_with_oov(self, tmp_path):
        table = random_table(np.random.default_rng(1), with_oov=True)
        path = tmp_path / "vecs.txt"
        save_vectors(table, path)
        loaded = load_vectors(path)
        assert loaded == table
        assert np.array_equal(loaded.oov_vector, table.oov_vector)

    def test_randomized_exact(self, tmp_path):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            table = random_table(rng, n=int(rng.integers(1, 30)),
                                 dim=int(rng.integers(1, 50)),
                                 with_oov=bool(seed % 2))
            path = tmp_path / f"r{seed}.txt"
            save_vectors(table, path)
            assert load_vectors(path) == table

    def test_dim_200_header(self, tmp_path):
        table = random_table(np.random.default_rng(2), n=3, dim=200)
        path = tmp_path / "vecs.txt"
        save_vectors(table, path)
        loaded = load_vectors(path)
        assert loaded.dim == 200
        assert path.read_text(encoding="utf-8").splitlines()[0] == "3 200"


class TestMalformed:
    def test_short_row(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 4\na 1.0 2.0 3.0\nb 1.0 2.0 3.0 4.0\n", encoding="utf-8")
        with pytest.raises(ParseError) as err:
            load_vectors(path)
        assert err.value.line == 2

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("nope\n", encoding="utf-8")
        with pytest.raises(ParseError) as err:
            load_vectors(path)
        assert err.value.line == 1

    def test_missing_rows(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 2\na 1.0 2.0\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_vectors(path)

    def test_unexpected_extra_row(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 2\na 1.0 2.0\nb 3.0 4.0\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_vectors(path)

    def test_non_finite_value(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 2\na nan 2.0\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_vectors(path)

    def test_token_with_space_rejected_on_save(self, tmp_path):
        table = EmbeddingTable(["a b"], np.ones((1, 2)))
        with pytest.raises(ValidationError):
            save_vectors(table, tmp_path / "x.txt")


class TestLookup:
    def table(self):
        matrix = np.arange(12, dtype=float).reshape(3, 4)
        return EmbeddingTable(["aspirin", "ibuprofen", "codeine"], matrix,
                              oov_vector=np.full(4, -1.0))

    def test_in_vocab(self):
        table = self.table()
        assert np.array_equal(table.lookup("aspirin"), table.matrix[0])

    def test_oov_strings_share_vector(self):
        table = self.table()
        a = table.lookup("warfarin")
        b = table.lookup("xyzzy")
        assert np.array_equal(a, b)
        assert np.array_equal(a, table.oov_vector)

    def test_missing_oov(self):
        table = EmbeddingTable(["a"], np.ones((1, 2)))
        with pytest.raises(MissingOovError):
            table.lookup("b")

    def test_strict_vector(self):
        table = self.table()
        with pytest.raises(UnknownConceptError):
            table.vector("warfarin")

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            EmbeddingTable(["a"], np.array([[np.inf, 0.0]]))
