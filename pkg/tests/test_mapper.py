import numpy as np
import pytest

from taxmap.embed import EmbeddingTable
from taxmap.errors import (
    DegenerateQueryError,
    EmptyPhraseError,
    NumericError,
    ValidationError,
)
from taxmap.mapper import (
    MapperConfig,
    NeighborIndex,
    PhraseEncoder,
    build_index,
    map_phrase,
    map_phrases,
    tokenize,
    train_mapper,
)
from taxmap.nn import create_model


def brute_force_topk(ids, matrix, point, k, metric):
    """Independent full-sort oracle with the ascending-id tie rule."""
    scored = []
    for cid, row in zip(ids, matrix):
        if metric == "cosine":
            denom = np.sqrt((row * row).sum()) * np.sqrt((point * point).sum())
            score = float((row * point).sum() / denom) if denom > 0 else 0.0
            scored.append((cid, score))
        else:
            diff = row - point
            scored.append((cid, float(np.sqrt((diff * diff).sum()))))
    if metric == "cosine":
        scored.sort(key=lambda t: (-t[1], t[0]))
    else:
        scored.sort(key=lambda t: (t[1], t[0]))
    return scored[:min(k, len(ids))]


class TestTokenizer:
    def test_hand_tokenized_strings(self):
        assert tokenize("Viral Pneumonia,") == ["viral", "pneumonia", ","]
        assert tokenize("E11.9 type-2") == ["e11", ".", "9", "type", "-", "2"]
        assert tokenize("  spaced   out  ") == ["spaced", "out"]
        assert tokenize("(fracture)") == ["(", "fracture", ")"]

    def test_empty(self):
        assert tokenize("") == []
        assert tokenize("   ") == []


class TestPhraseEncoder:
    def encoder(self):
        rng = np.random.default_rng(0)
        table = EmbeddingTable(["viral", "pneumonia", "acute", ","],
                               rng.normal(size=(4, 6)),
                               oov_vector=rng.normal(size=6))
        return PhraseEncoder(table, max_len=20)

    def test_padding(self):
        enc = self.encoder()
        mat = enc.encode("acute viral pneumonia")
        assert mat.shape == (20, 6)
        assert np.array_equal(mat[0], enc.word_source.vector("acute"))
        assert not np.array_equal(mat[2], np.zeros(6))
        assert np.array_equal(mat[3:], np.zeros((17, 6)))

    def test_truncation(self):
        enc = self.encoder()
        phrase = " ".join(["viral"] * 25)
        mat = enc.encode(phrase)
        assert np.array_equal(mat, np.tile(enc.word_source.vector("viral"), (20, 1)))

    def test_first_row_is_lookup(self):
        enc = self.encoder()
        mat = enc.encode("Viral Pneumonia,")
        assert np.array_equal(mat[0], enc.word_source.lookup("viral"))
        assert np.array_equal(mat[2], enc.word_source.lookup(","))

    def test_empty_phrase(self):
        with pytest.raises(EmptyPhraseError):
            self.encoder().encode("   ")

    def test_deterministic(self):
        enc = self.encoder()
        assert np.array_equal(enc.encode("viral oddity"), enc.encode("viral oddity"))


class TestNeighborIndex:
    def table(self, n=20, dim=6, seed=0):
        rng = np.random.default_rng(seed)
        ids = [f"C{i:03d}" for i in range(n)]
        return EmbeddingTable(ids, rng.normal(size=(n, dim)))

    def test_self_query_cosine(self):
        table = self.table()
        index = build_index(table, metric="cosine")
        result = index.query_topk(table.vector("C007"), 1)
        assert result[0][0] == "C007"
        assert result[0][1] == pytest.approx(1.0, abs=1e-12)

    def test_self_query_l2(self):
        table = self.table()
        index = build_index(table, metric="l2")
        result = index.query_topk(table.vector("C003"), 1)
        assert result[0] == ("C003", 0.0)

    def test_subset_of_one(self):
        table = self.table()
        index = build_index(table, subset={"C005"}, metric="cosine")
        for seed in range(5):
            point = np.random.default_rng(seed).normal(size=6)
            assert index.query_topk(point, 3) == index.query_topk(point, 1)
            assert index.query_topk(point, 1)[0][0] == "C005"

    def test_empty_subset(self):
        with pytest.raises(ValidationError):
            build_index(self.table(), subset=set())

    def test_unknown_subset_id(self):
        with pytest.raises(ValidationError):
            build_index(self.table(), subset={"C001", "nope"})

    def test_full_table_row_count(self):
        index = build_index(self.table(n=37))
        assert len(index) == 37

    @pytest.mark.parametrize("metric", ["cosine", "l2"])
    def test_matches_brute_force(self, metric):
        table = self.table(n=100, dim=16, seed=4)
        index = build_index(table, metric=metric)
        for seed in range(5):
            point = np.random.default_rng(100 + seed).normal(size=16)
            got = index.query_topk(point, 10)
            want = brute_force_topk(index.ids, index.matrix, point, 10, metric)
            assert [c for c, _ in got] == [c for c, _ in want]
            assert np.allclose([s for _, s in got], [s for _, s in want], rtol=1e-9)

    @pytest.mark.parametrize("metric", ["cosine", "l2"])
    def test_duplicate_vectors_tie_break_ascending_id(self, metric):
        rng = np.random.default_rng(8)
        base = rng.normal(size=(4, 5))
        matrix = np.vstack([base, base[1]])  # C900 duplicates C001
        ids = ["C001", "C000", "C777", "C123", "C900"]
        ids_sorted_rows = matrix  # NeighborIndex sorts internally
        index = NeighborIndex(ids, ids_sorted_rows, metric)
        result = index.query_topk(base[1], 5)
        ranked = [c for c, _ in result]
        # the two identical vectors score equally; ascending id wins
        assert ranked.index("C000") < ranked.index("C900")
        assert ranked[0] == "C000"
        want = brute_force_topk(index.ids, index.matrix, base[1], 5, metric)
        assert ranked == [c for c, _ in want]

    def test_k_clamped(self):
        index = build_index(self.table(n=5))
        assert len(index.query_topk(np.ones(6), 50)) == 5

    def test_bad_k(self):
        index = build_index(self.table())
        with pytest.raises(ValidationError):
            index.query_topk(np.ones(6), 0)

    def test_zero_norm_cosine_query(self):
        index = build_index(self.table(), metric="cosine")
        with pytest.raises(DegenerateQueryError):
            index.query_topk(np.zeros(6), 1)

    def test_non_finite_query(self):
        index = build_index(self.table(), metric="l2")
        with pytest.raises(NumericError):
            index.query_topk(np.full(6, np.nan), 1)

    def test_cosine_scale_invariance(self):
        index = build_index(self.table(n=50, dim=8, seed=2), metric="cosine")
        point = np.random.default_rng(9).normal(size=8)
        base = [c for c, _ in index.query_topk(point, 20)]
        for scale in (1e-6, 0.5, 3.0, 1e6):
            scaled = [c for c, _ in index.query_topk(scale * point, 20)]
            assert scaled == base

    def test_l2_orthogonal_invariance(self):
        rng = np.random.default_rng(10)
        table = self.table(n=40, dim=8, seed=3)
        q, _ = np.linalg.qr(rng.normal(size=(8, 8)))
        rotated = EmbeddingTable(table.tokens, table.matrix @ q.T)
        index = build_index(table, metric="l2")
        index_rot = build_index(rotated, metric="l2")
        for seed in range(5):
            point = np.random.default_rng(seed).normal(size=8)
            a = [c for c, _ in index.query_topk(point, 15)]
            b = [c for c, _ in index_rot.query_topk(q @ point, 15)]
            assert a == b

    def test_bad_metric(self):
        with pytest.raises(ValidationError):
            build_index(self.table(), metric="manhattan")


def toy_world(seed=0):
    rng = np.random.default_rng(seed)
    vocab = ["red", "fox", "blue", "owl", "green", "asp"]
    word = EmbeddingTable(vocab, rng.normal(size=(6, 8)), oov_vector=np.zeros(8))
    concepts = [f"N{i}" for i in range(10)]
    node = EmbeddingTable(concepts, rng.normal(size=(10, 4)))
    return PhraseEncoder(word, max_len=5), node


class TestTrainMapper:
    def test_single_pair_interpolates(self):
        enc, node = toy_world()
        model = create_model("linear", seed=3, max_len=5, word_dim=8, out_dim=4)
        result = train_mapper([("red fox", "N7")], node, enc, model,
                              MapperConfig(epochs=600, batch=1,
                                           learning_rate=0.05, seed=0))
        assert result.epoch_losses[-1] < 1e-6

    def test_loss_non_increasing_on_frozen_set(self):
        # pilot-established fixture: 100 pairs over a 20-concept table
        rng = np.random.default_rng(0)
        vocab = [f"w{i}" for i in range(30)]
        word = EmbeddingTable(vocab, rng.normal(size=(30, 8)),
                              oov_vector=np.zeros(8))
        concepts = [f"C{i:02d}" for i in range(20)]
        node = EmbeddingTable(concepts, rng.normal(size=(20, 4)))
        pairs = []
        for _ in range(100):
            n_tok = rng.integers(1, 6)
            phrase = " ".join(rng.choice(vocab, size=n_tok))
            pairs.append((phrase, concepts[rng.integers(20)]))
        enc = PhraseEncoder(word, max_len=5)
        for variant in ("linear", "cnn", "bilstm"):
            extra = {"hidden": 6} if variant == "bilstm" else (
                {"feature_maps": 5} if variant == "cnn" else {})
            model = create_model(variant, seed=1, max_len=5, word_dim=8,
                                 out_dim=4, **extra)
            losses = train_mapper(pairs, node, enc, model,
                                  MapperConfig(epochs=5, batch=16, seed=2)).epoch_losses
            assert len(losses) == 5
            for before, after in zip(losses, losses[1:]):
                assert after <= before, variant

    def test_zero_epochs_is_noop(self):
        enc, node = toy_world()
        model = create_model("linear", seed=4, max_len=5, word_dim=8, out_dim=4)
        before = {k: v.copy() for k, v in model.params.items()}
        result = train_mapper([("red fox", "N1")], node, enc, model,
                              MapperConfig(epochs=0))
        assert result.epoch_losses == []
        for name, p in result.model.params.items():
            assert np.array_equal(p, before[name])

    def test_unknown_concept_rejected_before_training(self):
        enc, node = toy_world()
        model = create_model("linear", seed=0, max_len=5, word_dim=8, out_dim=4)
        pairs = [("red fox", "N1"), ("blue owl", "MISSING")]
        with pytest.raises(ValidationError, match="MISSING"):
            train_mapper(pairs, node, enc, model)

    def test_empty_pairs_rejected(self):
        enc, node = toy_world()
        model = create_model("linear", seed=0, max_len=5, word_dim=8, out_dim=4)
        with pytest.raises(ValidationError):
            train_mapper([], node, enc, model)

    def test_deterministic_final_loss(self):
        enc, node = toy_world()
        pairs = [("red fox", "N1"), ("blue owl", "N2"), ("green asp", "N3")]

        def run():
            model = create_model("bilstm", seed=5, max_len=5, word_dim=8,
                                 out_dim=4, hidden=6)
            return train_mapper(pairs, node, enc, model,
                                MapperConfig(epochs=3, batch=2, seed=6))

        a, b = run(), run()
        assert a.epoch_losses == b.epoch_losses
        for name in a.model.params:
            assert np.array_equal(a.model.params[name], b.model.params[name])


class TestMapPhrase:
    def test_trained_pipeline_interpolation(self):
        enc, node = toy_world()
        model = create_model("linear", seed=3, max_len=5, word_dim=8, out_dim=4)
        train_mapper([("red fox", "N7")], node, enc, model,
                     MapperConfig(epochs=600, batch=1, learning_rate=0.05, seed=0))
        index = build_index(node, metric="cosine")
        assert map_phrase(enc, model, index, "red fox", 1)[0][0] == "N7"

    def test_empty_phrase_propagates(self):
        enc, node = toy_world()
        model = create_model("linear", seed=0, max_len=5, word_dim=8, out_dim=4)
        index = build_index(node)
        with pytest.raises(EmptyPhraseError):
            map_phrase(enc, model, index, "", 1)

    def test_k_clamped_to_index_size(self):
        enc, node = toy_world()
        model = create_model("linear", seed=0, max_len=5, word_dim=8, out_dim=4)
        index = build_index(node)
        assert len(map_phrase(enc, model, index, "red", 500)) == len(node.tokens)

    def test_batch_order_stable(self):
        enc, node = toy_world()
        model = create_model("linear", seed=1, max_len=5, word_dim=8, out_dim=4)
        index = build_index(node)
        phrases = ["red fox", "blue owl", "green asp"]
        batch = map_phrases(enc, model, index, phrases, 3)
        singles = [map_phrase(enc, model, index, p, 3) for p in phrases]
        for got, want in zip(batch, singles):
            assert [c for c, _ in got] == [c for c, _ in want]
        assert map_phrases(enc, model, index, [], 3) == []
