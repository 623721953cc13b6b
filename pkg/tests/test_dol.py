import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cx
from nilforge.complex import CapacityError
from nilforge.dol import (dol_iterate, dol_step, edge_levels, find_square_fast, has_adjacent_repeat, is_factor,
                          level_periodicity, project_edge_word, renumber_step)


def brute_ranks(seq):
    """Rank of each position by literal recursion on the split structure."""
    n = len(seq) + 1  # number of segments, a power of two
    out = []
    for p in range(1, n):
        r = 1
        while p % (2 ** r) == 0:
            r += 1
        out.append(r)
    return out


@pytest.mark.parametrize("k, seq", [(1, "1"), (2, "121"), (3, "1213121"), (4, "121312131213121")])
def test_edge_levels_small(k, seq):
    assert edge_levels(k) == seq


def test_edge_levels_rejects_bad_input():
    with pytest.raises(ValueError):
        edge_levels(0)
    with pytest.raises(CapacityError):
        edge_levels(40)


@pytest.mark.parametrize("k", range(1, 15))
def test_edge_levels_is_capped_rank(k):
    assert edge_levels(k) == "".join(str(min(r, 3)) for r in brute_ranks("x" * (2 ** k - 1)))


def test_renumber_examples():
    assert renumber_step("1") == "121"
    assert renumber_step("121") == "1213121"


@given(st.text(alphabet="123", max_size=40))
def test_renumber_length_law(s):
    assert len(renumber_step(s)) == 2 * len(s) + 1


@pytest.mark.parametrize("k", range(1, 16))
def test_renumber_advances_edge_levels(k):
    assert renumber_step(edge_levels(k)) == edge_levels(k + 1)


@pytest.mark.parametrize("k", range(3, 17))
def test_level_periodicity(k):
    assert level_periodicity(edge_levels(k))


def test_periodicity_detects_a_break():
    assert not level_periodicity("1213121" + "1")


def test_dol_rules():
    assert dol_step(("U1",)) == ("U1", "U", "L1")
    assert dol_step(("U",)) == ("U",)
    assert dol_iterate(2) == ("U1", "U", "L1", "U", "U1", "L", "L1")


@pytest.mark.parametrize("n", range(0, 10))
def test_dol_length_and_level_one_positions(n):
    w = dol_iterate(n)
    assert len(w) == 2 ** (n + 1) - 1
    ones = [i for i, a in enumerate(w) if a.endswith("1")]
    assert ones == [i for i, c in enumerate(edge_levels(n + 1)) if c == "1"]


def test_adjacent_repeat_examples():
    assert has_adjacent_repeat(["U", "L", "U", "L"]) == ("U", "L")
    assert has_adjacent_repeat([]) is None
    assert find_square_fast([]) is None


@pytest.mark.parametrize("n", range(1, 13))
def test_iterates_are_square_free(n):
    w = dol_iterate(n)
    assert find_square_fast(w) is None
    if n <= 9:
        assert has_adjacent_repeat(w) is None


@settings(max_examples=200)
@given(st.lists(st.sampled_from("ab"), max_size=30))
def test_fast_and_naive_scans_agree(w):
    assert find_square_fast(w) == has_adjacent_repeat(w)


@given(st.lists(st.sampled_from(["U1", "U", "L1", "L"]), min_size=1, max_size=12))
def test_square_found_is_really_a_square(w):
    q = has_adjacent_repeat(w)
    if q is not None:
        assert is_factor(q + q, w)


def test_project_single_node():
    assert project_edge_word([("UL", 1)]) == ("U1",)
    with pytest.raises(ValueError):
        project_edge_word([("UR", 1)])


def test_projection_preserves_squares():
    nodes = [("UL", 1), ("LU", 2), ("UL", 1), ("LU", 2)]
    assert has_adjacent_repeat(nodes) is not None
    assert has_adjacent_repeat(project_edge_word(nodes)) is not None


def test_actual_edge_words_are_factors_of_iterates():
    c = cx(4)
    seen = 0
    for car in c.carriers:
        if not car.internal or len(car.nodes) < 5:
            continue
        nodes = [(c.vertices[v].kind, c.level_of(v)) for v in car.nodes[1:-1]]
        if {k for k, _ in nodes} <= {"UL", "LU"}:
            word = project_edge_word(nodes)
            assert any(is_factor(word, dol_iterate(n, s)) for n in range(1, 6) for s in ("U1", "L1"))
            seen += 1
    assert seen >= 1
