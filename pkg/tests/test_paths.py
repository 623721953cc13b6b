from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import nilforge.paths as paths
from conftest import col
from nilforge.complex import CapacityError
from nilforge.paths import (FactorIndex, Path, all_paths, embeddings, encode, enumerate_words, first_violation,
                            valid, well_formed)


def random_path(c, data, max_edges=5):
    g = c.graph
    start = v = data.draw(st.integers(0, len(g.out) - 1))
    hs = []
    for _ in range(data.draw(st.integers(0, max_edges))):
        h = data.draw(st.sampled_from(g.out[v]))
        hs.append(h)
        v = g.head[h]
    return Path(start, tuple(hs))


def test_encode_shapes():
    c = col(2)
    assert len(encode(c, Path(0))) == 1
    h = c.graph.out[0][0]
    assert [a[0] for a in encode(c, Path(0, (h,)))] == list("YZXY")


def test_well_formed_examples():
    assert well_formed(("Y1", "Z1", "X1", "Y2"))
    assert not well_formed(("Y1", "Y2"))
    assert well_formed(())
    assert first_violation(("Y1", "Z1", "Z2")) == 1


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_embeddings_round_trip(data):
    c = col(3)
    p = random_path(c, data)
    assert valid(c.graph, p)
    assert p in embeddings(c, encode(c, p))


def test_unrealized_word_has_no_embedding():
    c = col(1)
    g = c.graph
    h = g.out[0][0]
    wrong = next(v for v in range(4) if v != g.head[h])
    assert embeddings(c, (c.vtok[0], c.otok[h], c.itok[h], c.vtok[wrong])) == []


def test_coarse_letters_give_repeated_embeddings():
    c = col(3, 0)
    counts = Counter(encode(c, p) for p in all_paths(c.graph, 1))
    word = max(counts, key=counts.get)
    assert len(embeddings(c, word)) >= 2


def test_enumerate_words_small():
    c = col(1)
    assert enumerate_words(c, 0) == {(t,) for t in c.vtok}
    words = enumerate_words(c, 1)
    assert sum(len(w) == 4 for w in words) == 8
    assert enumerate_words(c, 2) == enumerate_words(col(1), 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_factor_index_windows_match_brute_force(n):
    c = col(n)
    brute = set()
    for p in all_paths(c.graph, 3):
        w = encode(c, p)
        brute |= {w[i:i + 7] for i in range(len(w) - 6)}
    assert FactorIndex(c).windows(7) == brute


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_factors_of_path_words_are_realizable(data):
    c = col(3)
    w = encode(c, random_path(c, data))
    i = data.draw(st.integers(0, len(w) - 1))
    j = data.draw(st.integers(i + 1, len(w)))
    assert FactorIndex(c).realizable(w[i:j])


def test_enumeration_capacity(monkeypatch):
    monkeypatch.setattr(paths, "ENUMERATE_CAP", 100)
    with pytest.raises(CapacityError):
        list(all_paths(col(3).graph, 4))
