from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import col, cx
from nilforge.coloring import Coloring, alphabet, boss_set, parse_letter
from nilforge.complex import build


def test_single_square_alphabet():
    c = col(1)
    fam = Counter(t[0] for t in c.alphabet())
    # four corners, then out/in letters for both directions of four sides
    assert fam == {"Y": 4, "Z": 8, "X": 8}
    assert {c.letter(t).kind for t in c.alphabet() if t[0] == "Y"} == {"CUL", "CUR", "CDR", "CDL"}


def test_boss_rules_on_every_inner_vertex():
    c = cx(3)
    for v in c.vertices:
        if v.kclass != "inner":
            continue
        t = c.macrotiles[v.owner]
        want = (t.mids["U"], t.corners[3], t.corners[2]) if v.kind == "C" else (t.mids["U"],)
        assert boss_set(c, v.id).members() == want


def test_boundary_vertices_have_no_bosses():
    c = cx(3)
    for v in c.vertices:
        if v.kclass in ("boundary", "corner") and v.kind != "CDR":
            assert boss_set(c, v.id).members() == ()


def test_letters_are_canonical_across_rebuilds():
    assert alphabet(build(3)) == Coloring(cx(3)).alphabet()


def test_isomorphic_positions_share_letters():
    c = col(4)
    fresh = Counter(c.vtok[v.id] for v in c.cx.vertices if v.birth == c.cx.step and v.kclass == "side")
    assert max(fresh.values()) >= 2


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_letter_text_round_trips(n, data):
    c = col(n)
    tok = data.draw(st.sampled_from(c.alphabet()))
    letter = c.letter(tok)
    fields = parse_letter(tok, letter.text())
    if tok[0] == "Y":
        assert (fields["kind"], fields["pasted"], fields["level"]) == (letter.kind, letter.pasted, letter.level)
    else:
        assert (fields["carrier"], fields["main"], fields["pasting"]) == (letter.tag, letter.main, letter.pasting)


def test_main_flag_along_a_carrier():
    c = col(3)
    g = c.graph
    for car in c.cx.carriers:
        if not car.internal or len(car.nodes) < 3:
            continue
        for v in car.nodes[1:-1]:
            for h in g.out[v]:
                if g.carrier_of(h) == car.id:
                    assert c.main_flag(h, v)


def test_entering_a_subtile_is_not_main():
    c = col(2)
    t = c.cx.macrotiles[0]
    u, a = t.mids["U"], t.inner["A"]
    h = c.graph.half_between[(u, a)][0]
    assert not c.main_flag(h, u)
    letter = c.letter(c.otok[h])
    assert letter.subtile and not letter.pasting


def test_pasting_exit_is_flagged():
    c = col(5)
    g = c.graph
    flagged = 0
    for h in range(len(g.tail)):
        head = g.head[h]
        if c.cx.vertices[head].plane != c.cx.carriers[g.carrier_of(h)].plane:
            letter = c.letter(c.itok[h])
            assert letter.pasting and not letter.main
            flagged += 1
    assert flagged > 0


def test_alphabet_size_within_bound():
    assert len(col(5).alphabet()) <= 7 * 10 ** 36


@pytest.mark.xfail(strict=True, reason="no vertex carries both CUR and CDL: same-step windows sit 8 apart")
def test_double_pasting_corner_exists():
    c = cx(6)
    assert any({"CUR", "CDL"} <= v.pasted for v in c.vertices)


@pytest.mark.xfail(strict=True, reason="letters carry level and neighbourhood data that shift as the complex grows")
@pytest.mark.parametrize("n", [3, 4])
def test_alphabet_grows_by_inclusion(n):
    assert set(col(n).alphabet()) <= set(col(n + 1).alphabet())


def test_alphabet_growth_is_recorded():
    sizes = [len(col(n).alphabet()) for n in range(1, 6)]
    assert sizes == sorted(sizes)
