from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cx
from nilforge.complex import CapacityError, CHILD_CORNERS, INTERNAL_EDGES, build, distances, dump, subdivide_tile


def euler(c):
    g = c.graph()
    return len(c.vertices) - g.n_edges + len(g.tiles)


def test_subdivide_tile_counts():
    vertices, edges, faces, internal = subdivide_tile()
    assert (len(vertices), len(edges), len(faces), len(internal)) == (11, 16, 6, 8)


def test_subdivided_tile_vertex_and_edge_totals():
    # V - E + F = 2 with the outer face: 11 - 16 + 7
    c = cx(2)
    assert len(c.vertices) == 11
    assert c.graph().n_edges == 16


def test_inner_degrees_among_internal_edges():
    deg = Counter(x for a, b in INTERNAL_EDGES.values() for x in (a, b))
    assert (deg["A"], deg["B"], deg["C"]) == (3, 3, 4)


def test_children_are_clockwise_faces_of_the_layout():
    edges = {frozenset(e) for e in INTERNAL_EDGES.values()}
    edges |= {frozenset(p) for p in (("UL", "U"), ("U", "UR"), ("UR", "R"), ("R", "DR"),
                                     ("DR", "D"), ("D", "DL"), ("DL", "L"), ("L", "UL"))}
    for face in CHILD_CORNERS:
        assert all(frozenset((face[i], face[(i + 1) % 4])) in edges for i in range(4))
    # every internal edge borders two children, every half side one
    sides = Counter(frozenset((f[i], f[(i + 1) % 4])) for f in CHILD_CORNERS for i in range(4))
    assert all(sides[frozenset(e)] == 2 for e in INTERNAL_EDGES.values())
    assert sum(1 for e, k in sides.items() if k == 1) == 8


def test_build_one_is_a_square():
    c = cx(1)
    assert (len(c.vertices), c.graph().n_edges, len(c.leaves())) == (4, 4, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_base_plane_tile_count(n):
    assert len(cx(n).base_tiles()) == 6 ** (n - 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_complex_stays_a_disk(n):
    # pastings glue disks along contractible paths
    assert euler(cx(n)) == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_every_tile_is_a_directed_four_cycle(n):
    g = cx(n).graph()
    for _, corners, hs in g.tiles:
        assert [g.tail[h] for h in hs] == list(corners)
        assert [g.head[h] for h in hs] == list(corners[1:] + corners[:1])


def test_vertex_levels_age_by_one_step():
    before, after = cx(3), cx(4)
    for v in range(len(before.vertices)):
        assert after.level_of(v) == min(3, before.level_of(v) + 1)


def test_no_sites_on_short_carriers():
    # level 2: three-node carriers; level 3: interior levels 121
    assert cx(2).pasting_sites() == []
    assert cx(3).pasting_sites() == []
    assert all(len(cx(n).pastings) == 0 for n in (1, 2, 3, 4))


def test_site_sits_at_the_level_three_centre():
    c = build(5, paste=False)
    sites = c.pasting_sites()
    assert sites
    for cid, k in sites:
        levels = "".join(str(c.level_of(v)) for v in c.carriers[cid].nodes[k - 2:k + 3])
        assert levels == "21312"


def test_carrier_with_1213121_has_exactly_one_site():
    c = build(5, paste=False)
    sites = Counter(cid for cid, _ in c.pasting_sites())
    for cid, count in sites.items():
        inner = "".join(str(c.level_of(v)) for v in c.carriers[cid].nodes[1:-1])
        if inner == "1213121":
            assert count == 1


def test_paste_adds_six_tiles_and_marks_corners():
    c = build(5, paste=False)
    site = c.pasting_sites()[0]
    tiles = len(c.leaves())
    p = c.paste(site)
    assert len(c.leaves()) == tiles + 6
    host = p.host_path
    assert "CUL" in c.vertices[p.kernel].pasted
    assert "CUR" in c.vertices[host[0]].pasted
    assert "CDL" in c.vertices[host[-1]].pasted
    assert c.macrotiles[p.macrotile].corners[0] == p.kernel


def test_pasting_counts():
    assert [len(cx(n).pastings) for n in (4, 5)] == [0, 8]


def test_distance_to_self_is_zero():
    assert distances(cx(3), 5, 5) == 0


def test_level_two_adjacent_corners_are_two_apart():
    c = cx(2)
    ul, ur, dr, dl = c.macrotiles[0].corners
    assert [distances(c, a, b) for a, b in ((ul, ur), (ur, dr), (dr, dl), (dl, ul))] == [2, 2, 2, 2]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.data())
def test_side_paths_are_edge_paths_of_the_right_length(n, data):
    c = cx(n)
    g = c.graph()
    mid = data.draw(st.integers(0, len(c.macrotiles) - 1))
    level = c.macrotile_level(mid)
    for path in c.side_paths(mid):
        assert len(path) == 2 ** (level - 1) + 1
        assert all((a, b) in g.half_between for a, b in zip(path, path[1:]))


def test_capacity_guard(monkeypatch):
    monkeypatch.setenv("NILFORGE_LEVEL_MAX", "3")
    with pytest.raises(CapacityError):
        build(4)
    with pytest.raises(ValueError):
        build(0)


def test_dump_is_stable_and_complete():
    text = dump(build(3))
    assert text == dump(build(3))
    tags = Counter(line.split()[0] for line in text.splitlines()[1:])
    c = cx(3)
    assert tags == {"V": len(c.vertices), "H": 2 * c.graph().n_edges, "T": len(c.leaves())}
