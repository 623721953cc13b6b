from pathlib import Path as FilePath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import col, cx, pres
from nilforge.paths import FactorIndex, Path, all_paths, encode, enumerate_words, path_from_vertices
from nilforge.presentation import (DeterminismError, Presentation, PresentationParseError, build_presentation,
                                   cat1_zero, dead_paths, determinism_check, gen_cat2, gen_cat3, gen_cat4, gen_cat5,
                                   tile_path_pairs)

GOLDEN = FilePath(__file__).parent / "golden"


def test_cat1_examples():
    assert cat1_zero(("X1", "Z1"))
    assert cat1_zero(("Z1", "Z2"))
    assert not cat1_zero(("Y1", "Z1", "X1", "Y2"))


def test_cat2_on_a_single_square():
    c = col(1)
    g = c.graph
    rels = gen_cat2(c, 4)
    h = g.out[0][0]
    wrong = next(v for v in range(4) if v != g.head[h])
    assert (c.vtok[0], c.otok[h], c.itok[h], c.vtok[wrong]) in rels
    realized = {w[i:j] for w in enumerate_words(c, 2) for i in range(len(w)) for j in range(i + 1, min(len(w), i + 4) + 1)}
    assert not rels & realized


def test_cat3_shape_and_membership():
    c = col(2)
    g = c.graph
    rels = gen_cat3(c)
    for w in rels:
        assert len(w) == 7 and w[0] == w[6]
    h = g.out[0][0]
    assert encode(c, Path(0, (h, h ^ 1))) in rels
    turns = [p for p in all_paths(g, 2) if p.edges == 2 and p.halves[1] != p.halves[0] ^ 1]
    assert not {encode(c, p) for p in turns} & rels


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cat4_covers_every_dead_pattern(n):
    c = col(n)
    p = pres(n)
    zero = p.zero_words()
    names = set()
    for name, _, triple in dead_paths(c.cx):
        assert encode(c, path_from_vertices(c.graph, triple)) in zero
        names.add(name)
    assert names == {"AUB", "ACB", "CDL-D", "CDR-D"}


def test_dead_pattern_aub_uses_edges_one_and_two():
    c = cx(2)
    t = c.macrotiles[0]
    triples = {tr for name, _, tr in dead_paths(c) if name == "AUB"}
    assert (t.inner["A"], t.mids["U"], t.inner["B"]) in triples


def test_cat5_relations():
    c = col(2)
    zero = gen_cat3(c) | gen_cat4(c)
    eqs = gen_cat5(c, zero)
    assert all(len(e.left) == len(e.right) == 7 for e in eqs)
    for a, b in tile_path_pairs(c.graph):
        wa, wb = encode(c, a), encode(c, b)
        pair = tuple(sorted((wa, wb)))
        listed = any((e.left, e.right) == pair for e in eqs)
        assert listed == (wa not in zero and wb not in zero)
    assert any(encode(c, a) in zero for a, _ in tile_path_pairs(c.graph))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_determinism_holds_on_small_complexes(n):
    assert determinism_check(col(n)).passed


def test_coarse_coloring_breaks_determinism():
    rep = determinism_check(col(3, 0))
    assert not rep.passed and rep.conflicts and rep.geometric == 0
    with pytest.raises(DeterminismError):
        build_presentation(col(3, 0))


def test_export_import_round_trip():
    p = pres(2)
    text = p.export()
    q = Presentation.parse(text)
    assert q.export() == text
    assert q.relations == p.relations


def test_golden_presentation_is_byte_stable():
    golden = (GOLDEN / "presentation_level3_cat2_1.txt").read_text()
    assert build_presentation(col(3), cat2_edges=1).export() == golden
    assert Presentation.parse(golden).export() == golden


def test_foreign_record_reports_its_line():
    text = pres(1).export().splitlines()
    text.insert(3, "Q 1 2 3")
    with pytest.raises(PresentationParseError) as err:
        Presentation.parse("\n".join(text))
    assert err.value.lineno == 4


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_whitelist_agrees_with_the_automaton(data):
    c = col(2)
    parsed = Presentation.parse(pres(2).export())
    index = FactorIndex(c)
    fam = {f: sorted(t for t in c.records if t[0] == f) for f in "YZX"}
    first = data.draw(st.sampled_from("YZX"))
    w, f = [], first
    for _ in range(data.draw(st.integers(1, parsed.window))):
        w.append(data.draw(st.sampled_from(fam[f])))
        f = {"Y": "Z", "Z": "X", "X": "Y"}[f]
    assert parsed.realizable(w) == index.realizable(w)
