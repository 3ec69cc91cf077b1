"""Smoke tests for the python module: thin checks that the bound surface
behaves like the native one."""

import math

import pytest

import langbench as lb


def test_version():
    assert lb.__version__


def test_builtin_languages():
    assert set(lb.builtin_language_ids()) == {
        "anbn", "anbncn", "anbncndn", "anbmcnpm", "dyck1", "dyck2",
    }
    lang = lb.builtin_language("anbn")
    assert lang.symbols == "#ab"
    assert lang.metric == "deterministic"
    assert lb.builtin_language("dyck2").metric == "categorical"
    with pytest.raises(ValueError):
        lb.builtin_language("nope")


def test_oracle_operations():
    lang = lb.builtin_language("anbn")
    assert lb.valid_next_symbols(lang, "") == "#a"
    assert lb.valid_next_symbols(lang, "aab") == "b"
    assert lb.deterministic_next(lang, "aabb") == "#"
    assert lb.deterministic_next(lang, "aa") is None
    assert lb.membership(lang, "aabb")
    assert not lb.membership(lang, "aab")


def test_sampling_and_enumeration():
    lang = lb.builtin_language("anbn")
    train = lb.sample_training(lang, seed=100, prior=0.3, size=200)
    assert len(train) == 200
    assert all(lb.membership(lang, s) for s in train.strings)
    again = lb.sample_training(lang, seed=100, prior=0.3, size=200)
    assert list(train.strings) == list(again.strings)

    test = lb.enumerate_test(lang, train, 10)
    first_n = train.frontier + 1
    assert test.strings[0] == "a" * first_n + "b" * first_n


def test_framing():
    lang = lb.builtin_language("anbn")
    inputs, targets = lb.frame(lang, "aabb")
    assert inputs == "#aabb"
    assert targets == "aabb#"


def test_corpus_io_roundtrip(tmp_path):
    lang = lb.builtin_language("dyck1")
    corpus = lb.sample_training(lang, seed=7, prior=0.3, size=50)
    path = str(tmp_path / "corpus.txt")
    lb.save_corpus(corpus, path)
    loaded = lb.load_corpus(path)
    assert list(loaded.strings) == list(corpus.strings)

    archive = str(tmp_path / "corpus.zip")
    lb.export_protected(corpus, archive, "sesame")
    restored = lb.import_protected(archive, "sesame")
    assert list(restored.strings) == list(corpus.strings)
    with pytest.raises(ValueError):
        lb.import_protected(archive, "wrong")


def test_metrics_with_builtin_models():
    lang = lb.builtin_language("anbn")
    oracle = lb.model_from_uri("builtin:oracle", lang)
    ev = lb.det_accuracy(oracle, "aaabbb", lang)
    assert ev.evaluated_steps == 3
    assert ev.accuracy == 1.0
    assert ev.accepted

    always_b = lb.model_from_uri("builtin:always:b", lang)
    ev200 = lb.det_accuracy(always_b, "a" * 200 + "b" * 200, lang, epsilon=0.005)
    assert ev200.accuracy == 199.0 / 200.0
    assert ev200.accepted
    assert not lb.det_accuracy(always_b, "a" * 200 + "b" * 200, lang).accepted


def test_reference_networks():
    counter = lb.reference_anbn_counter()
    assert counter.hidden_count == 1
    assert lb.encoding_length(counter) == 185.0

    lang = lb.builtin_language("anbn")
    model = lb.genome_model(counter)
    assert lb.max_generalization_n(model, lang, 100) == 100

    dyck = lb.builtin_language("dyck1")
    net = lb.genome_model(lb.reference_dyck1())
    assert lb.cat_accuracy(net, "(())", dyck).accuracy == 1.0

    probs = net.run(dyck, "()")
    assert len(probs) == 3
    assert all(abs(sum(row) - 1.0) < 1e-9 for row in probs)


def test_data_cost_uniform():
    lang = lb.builtin_language("anbncn")
    corpus = lb.sample_training(lang, seed=1, prior=0.3, size=100)
    framed_length = sum(len(s) + 1 for s in corpus.strings)
    uniform = lb.genome_from_text("mrnn 1\narity 4\nnormalization softmax\n")
    assert lb.data_cost(uniform, lang, corpus) == 2.0 * framed_length


def test_small_index_run():
    lang = lb.builtin_language("anbn")
    result = lb.compute_index("oracle", lang, magnitude=1, ladder=[1.0, 2.0], epsilon=0.0)
    assert result.display == "2"
    assert result.value == 2.0
    assert [r.train_size for r in result.records] == [10, 5]
    assert [r.test_size for r in result.records] == [10, 20]

    failing = lb.compute_index("fixed:builtin:always:b", lang, magnitude=1,
                               ladder=[1.0, 2.0], epsilon=0.0)
    assert failing.display == "<1"
    assert failing.value is None


def test_tiny_evolution():
    lang = lb.builtin_language("anbn")
    train = lb.sample_training(lang, seed=3, prior=0.3, size=60)
    out = lb.evolve(lang, train, population=20, island_size=10, generations=15, seed=5)
    trace = out["trace"]
    assert len(trace) == 16  # generation 0 plus 15 steps
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert out["total"] == trace[-1]
