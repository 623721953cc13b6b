"""Verification checks over built complexes, each producing a :class:`Report`."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

from .coloring import DEFAULT_RADIUS, Coloring
from .complex import Complex, build
from .dol import edge_levels
from .paths import all_paths, cyclic_word, encode, path_from_vertices
from .presentation import Presentation, build_presentation, determinism_check
from .rewrite import Zero, closure, find_zero, replay, reduces_to_zero

PASS, FAIL, UNKNOWN = "PASS", "FAIL", "UNKNOWN"
EXIT_CODES = {PASS: 0, FAIL: 1, UNKNOWN: 2}
RADIUS_MAX = 16


@dataclass
class Report:
    check: str
    scope: dict
    verdict: str
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=str)


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.seconds = round(time.perf_counter() - t0, 3)
        return rep

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def exit_code(reports) -> int:
    verdicts = {r.verdict for r in reports}
    if FAIL in verdicts:
        return 1
    return 2 if UNKNOWN in verdicts else 0


# -- radius search -------------------------------------------------------------

def select_radius(cx: Complex, start: int = DEFAULT_RADIUS, r_max: int = RADIUS_MAX):
    """Raise the environment radius until determinism holds.

    Stops early once every remaining conflict is geometric (one path
    bordering two tiles), since no radius can separate those.  Returns
    ``(coloring, report, history)`` for the first passing radius, else for
    the radius with fewest conflicts.
    """
    history, best = [], None
    for r in range(start, r_max + 1):
        col = Coloring(cx, r)
        rep = determinism_check(col)
        history.append(rep.summary())
        if best is None or len(rep.conflicts) < len(best[1].conflicts):
            best = (col, rep)
        if rep.passed or len(rep.conflicts) == rep.geometric:
            break
    return best[0], best[1], history


# -- structure -------------------------------------------------------------------

def leaf_count(cx: Complex, mid: int) -> int:
    stack, n = [mid], 0
    while stack:
        m = cx.macrotiles[stack.pop()]
        if m.children:
            stack.extend(m.children)
        else:
            n += 1
    return n


def region_vertices(cx: Complex, mid: int) -> set:
    stack, out = [mid], set()
    while stack:
        m = cx.macrotiles[stack.pop()]
        if m.children:
            stack.extend(m.children)
        else:
            out.update(m.corners)
    return out


def structure_checks(cx: Complex) -> dict:
    """Named structural laws mapped to lists of witnesses (empty = holds)."""
    step = cx.step
    wit = {k: [] for k in ("subdivision", "internal_edges", "side_length", "pasting_corners", "edge_levels")}
    base = len(cx.base_tiles())
    if base != 6 ** (step - 1):
        wit["subdivision"].append(f"base tiles {base} != 6^{step - 1}")
    for m in cx.macrotiles:
        lv = m.level(step)
        if m.children and len(m.carriers) != 8:
            wit["internal_edges"].append(f"macrotile {m.id} has {len(m.carriers)} internal edges")
        if leaf_count(cx, m.id) != 6 ** (lv - 1):
            wit["subdivision"].append(f"macrotile {m.id} level {lv} has {leaf_count(cx, m.id)} tiles")
        for label, path in zip("URDL", cx.side_paths(m.id)):
            if len(path) - 1 != 2 ** (lv - 1):
                wit["side_length"].append(f"macrotile {m.id} side {label} has {len(path) - 1} edges")
    for p in cx.pastings:
        mt = cx.macrotiles[p.macrotile]
        ul, ur, _, dl = mt.corners
        nodes = cx.carriers[p.carrier].nodes
        on_host = all(x in nodes for x in (ul, ur, dl))
        types = ("CUL" in cx.vertices[ul].pasted, "CUR" in cx.vertices[ur].pasted, "CDL" in cx.vertices[dl].pasted)
        if ul != p.kernel or not on_host or not all(types):
            wit["pasting_corners"].append(f"pasting {p.id}")
    for c in cx.carriers:
        if not c.internal or len(c.nodes) < 3:
            continue
        k = (len(c.nodes) - 1).bit_length() - 1
        seq = "".join(str(cx.level_of(v)) for v in c.nodes[1:-1])
        if seq != edge_levels(k):
            wit["edge_levels"].append(f"carrier {c.id}: {seq} != edge_levels({k})")
    return wit


def distance_checks(cx: Complex) -> dict:
    g = cx.graph()
    wit = {"corner_distance": [], "pasting_distance": []}
    cache: dict = {}

    def dist(a):
        if a not in cache:
            cache[a] = g.bfs([a])
        return cache[a]

    for m in cx.macrotiles:
        lv = m.level(cx.step)
        if lv < 2:
            continue
        ul, ur, dr, dl = m.corners
        pairs = [("adjacent", a, b, 2 ** (lv - 1)) for a, b in ((ul, ur), (ur, dr), (dr, dl), (dl, ul))]
        pairs += [("opposite", ul, dr, 2 ** lv), ("opposite", ur, dl, 2 ** lv)]
        if m.mids:
            pairs.append(("mid-to-mid", m.mids["U"], m.mids["D"], 2 ** lv))
            pairs.append(("mid-to-mid", m.mids["L"], m.mids["R"], 2 ** lv))
        for kind, a, b, want in pairs:
            got = dist(a).get(b)
            if got != want:
                wit["corner_distance"].append(f"macrotile {m.id} {kind} {a}-{b}: {got} != {want}")
    wit["pasting_distance"] = pasting_distance_witnesses(cx)
    return wit


def pasting_exits(cx: Complex, pid: int) -> set:
    """Host-side vertices with an edge into the pasted macrotile."""
    mt = cx.macrotiles[cx.pastings[pid].macrotile]
    sides = cx.side_paths(mt.id)
    return set(sides[0]) | set(sides[3])


def pasting_distance_witnesses(cx: Complex, samples: list | None = None) -> list:
    """Pairs (X on the boundary of T, pasting exit Y strictly inside T) closer than 2^(n-1)."""
    g = cx.graph()
    out = []
    regions = {p.id: region_vertices(cx, p.macrotile) for p in cx.pastings}
    exits = {p.id: pasting_exits(cx, p.id) for p in cx.pastings}
    for t in cx.macrotiles:
        if t.level(cx.step) < 2:
            continue
        border = cx.boundary_vertices(t.id)
        inside = region_vertices(cx, t.id) - border
        relevant = [
            p for p in cx.pastings
            if p.kernel in inside and not (regions[p.id] & border)
        ]
        if not relevant:
            continue
        dist = g.bfs(border)
        for p in relevant:
            n = cx.macrotiles[p.macrotile].level(cx.step)
            for y in exits[p.id] & inside:
                if samples is not None:
                    samples.append((t.id, p.id, y, dist[y], n))
                if dist[y] < 2 ** (n - 1):
                    out.append(f"macrotile {t.id} pasting {p.id} exit {y}: {dist[y]} < 2^{n - 1}")
    return out


@_timed
def verify_structure(level: int) -> Report:
    cx = build(level)
    wit = structure_checks(cx)
    wit.update(distance_checks(cx))
    witnesses = [f"{k}: {w}" for k, ws in wit.items() for w in ws[:5]]
    details = {k: len(v) for k, v in wit.items()}
    details.update(vertices=len(cx.vertices), tiles=len(cx.leaves()), pastings=len(cx.pastings))
    return Report("verify-structure", {"level": level}, FAIL if witnesses else PASS, witnesses, details)


def verify_dump(text: str) -> Report:
    """Re-check a textual dump: every tile record must close up into a 4-cycle."""
    half, tiles, verts = {}, [], set()
    witnesses = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "V":
            verts.add(int(parts[1]))
        elif parts[0] == "H":
            half[int(parts[1])] = (int(parts[2]), int(parts[3]))
        elif parts[0] == "T":
            tiles.append((lineno, [int(x) for x in parts[3:]]))
    for h, (a, b) in half.items():
        twin = half.get(h ^ 1)
        if twin != (b, a):
            witnesses.append(f"half-edge {h} has no opposite twin")
        if a not in verts or b not in verts:
            witnesses.append(f"half-edge {h} references a missing vertex")
    for lineno, hs in tiles:
        ends = [half.get(h) for h in hs]
        if None in ends or len(hs) != 4:
            witnesses.append(f"line {lineno}: tile references unknown half-edges")
            continue
        if any(ends[i][1] != ends[(i + 1) % 4][0] for i in range(4)) or len({e[0] for e in ends}) != 4:
            witnesses.append(f"line {lineno}: tile is not a 4-cycle")
    return Report("verify-dump", {}, FAIL if witnesses else PASS, witnesses[:20], {"tiles": len(tiles)})


# -- determinism ---------------------------------------------------------------------

@_timed
def verify_determinism(level: int, radius: int = DEFAULT_RADIUS, retry: bool = True, r_max: int = RADIUS_MAX) -> Report:
    cx = build(level)
    if retry:
        col, rep, history = select_radius(cx, radius, r_max)
    else:
        col = Coloring(cx, radius)
        rep = determinism_check(col)
        history = [rep.summary()]
    witnesses = []
    for wa, pairs in rep.conflicts[:3]:
        desc = []
        for a, b in pairs[:2]:
            desc.append({"path": list(a.vertices(col.graph)), "complement": list(b.vertices(col.graph))})
        witnesses.append({"encoding": " ".join(wa), "tiles": desc})
    details = {"radius": rep.radius, "history": history, "geometric": rep.geometric, "spurious": rep.spurious,
               "conflicts": len(rep.conflicts), "groups": rep.groups}
    return Report("verify-determinism", {"level": level, "radius": radius, "retry": retry},
                  PASS if rep.passed else FAIL, witnesses, details)


# -- nil check -------------------------------------------------------------------------

def nil_words(col: Coloring, max_edges: int):
    """Closed-path words (cyclic form) and open-path words (full encodings)."""
    g = col.graph
    closed, opened, letter_closed = set(), set(), set()
    for p in all_paths(g, max_edges):
        if not p.edges:
            continue
        if p.closed(g):
            closed.add(cyclic_word(col, p))
        else:
            opened.add(encode(col, p))
            letter_closed.add(cyclic_word(col, p))
    return sorted(closed), sorted(opened), sorted(letter_closed)


@_timed
def nil_check(level: int = 4, max_edges: int = 4, budget: int = 1_000_000, radius: int = DEFAULT_RADIUS,
              pres: Presentation | None = None, col: Coloring | None = None) -> Report:
    if col is None:
        col, _, _ = select_radius(build(level), radius)
    if pres is None:
        pres = build_presentation(col, strict=False)
    closed, opened, cyc_open = nil_words(col, max_edges)
    witnesses, unknown, traces = [], [], 0
    zero_power: dict = {}
    for w in closed:
        res = reduces_to_zero(w * 9, pres, budget)
        if isinstance(res, Zero):
            if replay(w * 9, res.trace, pres) != ("0",):
                witnesses.append({"word": " ".join(w), "problem": "trace does not replay"})
            traces += 1
            k = next(k for k in range(1, 10) if isinstance(reduces_to_zero(w * k, pres, budget), Zero))
            zero_power[k] = zero_power.get(k, 0) + 1
        elif type(res).__name__ == "Unknown":
            unknown.append(" ".join(w))
        else:
            witnesses.append({"word": " ".join(w), "problem": "W^9 irreducible"})
    seam_fail = [" ".join(w) for w in opened if find_zero(w + w, pres) is None]
    witnesses += [{"word": w, "problem": "W.W has no zero seam factor"} for w in seam_fail[:5]]
    # cyclic forms of open paths whose seam is realizable behave like closed words
    lettered = 0
    for w in cyc_open:
        if find_zero(w + w, pres) is None:
            lettered += 1
            res = reduces_to_zero(w * 9, pres, budget)
            if isinstance(res, Zero):
                traces += 1
            elif type(res).__name__ == "Unknown":
                unknown.append(" ".join(w))
            else:
                witnesses.append({"word": " ".join(w), "problem": "letter-closed W^9 irreducible"})
    verdict = FAIL if witnesses else (UNKNOWN if unknown else PASS)
    details = {"closed": len(closed), "open": len(opened), "letter_closed_open": lettered,
               "unknown": len(unknown), "replayed_traces": traces, "zero_power": dict(sorted(zero_power.items())),
               "radius": col.radius}
    return Report("nil-check", {"level": level, "max_edges": max_edges, "budget": budget}, verdict,
                  witnesses + [{"unknown": u} for u in unknown[:5]], details)


# -- growth census -------------------------------------------------------------------------

def two_side_paths(cx: Complex, mid: int):
    """The eight two-adjacent-sides boundary paths of a macrotile."""
    sides = cx.side_paths(mid)
    for i in range(4):
        vs = sides[i] + sides[(i + 1) % 4][1:]
        yield vs
        yield vs[::-1]


def perimeter_words(col: Coloring, levels, per_level: int | None = 1):
    """``level -> sorted distinct encodings`` of two-side paths.

    ``per_level`` caps how many base-plane macrotiles are sampled; None takes
    every macrotile of that level, pasted ones included.
    """
    cx, g = col.cx, col.graph
    out = {}
    for lv in levels:
        tiles = [m for m in cx.macrotiles if m.level(cx.step) == lv]
        if per_level is not None:
            tiles = [m for m in tiles if m.plane == 0][:per_level]
        words = {encode(col, path_from_vertices(g, vs)) for m in tiles for vs in two_side_paths(cx, m.id)}
        out[lv] = sorted(words)
    return out


def census_words(col: Coloring, pres: Presentation, max_len: int, budget: int) -> dict:
    """``edges -> words`` of every path word with no zero reached in ``budget`` expansions."""
    words: dict = {}
    for p in all_paths(col.graph, max_len):
        words.setdefault(p.edges, set()).add(encode(col, p))
    return {n: {w for w in ws if not isinstance(reduces_to_zero(w, pres, budget, "bfs"), Zero)}
            for n, ws in sorted(words.items())}


@_timed
def growth_census(level: int = 4, max_len: int = 2, budget: int = 2_000, radius: int = DEFAULT_RADIUS,
                  per_level: int | None = 1, col: Coloring | None = None) -> Report:
    """Surviving words per length plus two-side perimeters of every level.

    Unknown verdicts count as survivors.  Only perimeters of level two and
    up must never reach zero; a level-1 perimeter is a single tile corner.
    """
    if col is None:
        col, _, _ = select_radius(build(level), radius)
    pres = build_presentation(col, strict=False)
    census = census_words(col, pres, max_len, budget)
    perim = perimeter_words(col, range(1, level + 1), per_level)
    summary, witnesses, lengths = {}, [], []
    for lv, words in perim.items():
        verdicts = [type(closure(w, pres, budget)).__name__ for w in words]
        alive = [w for w, v in zip(words, verdicts) if v != "Zero"]
        edges = (len(words[0]) - 1) // 3 if words else 0
        summary[lv] = {"edges": edges, "words": len(words),
                       "verdicts": {v: verdicts.count(v) for v in sorted(set(verdicts))}}
        if alive:
            census.setdefault(edges, set()).update(alive)
            lengths.append(edges)
        if lv >= 2 and len(alive) < len(words):
            witnesses.append({"level": lv, "problem": "two-side perimeter word reduced to zero"})
    if any(a >= b for a, b in zip(lengths, lengths[1:])):
        witnesses.append({"problem": "perimeter lengths not strictly increasing", "lengths": lengths})
    details = {"radius": col.radius, "survivors_by_edges": {n: len(ws) for n, ws in sorted(census.items())},
               "perimeter_lengths": lengths, "perimeters": summary}
    return Report("growth-census", {"level": level, "max_len": max_len, "budget": budget},
                  FAIL if witnesses else PASS, witnesses, details)


# -- report ---------------------------------------------------------------------------------

def full_report(level: int = 4, budget: int = 100_000):
    return [
        verify_structure(level),
        verify_determinism(level),
        nil_check(min(level, 4), 4, budget),
        growth_census(level, 2, min(budget, 2_000)),
    ]


__all__ = [
    "Report", "verify_structure", "verify_dump", "verify_determinism", "nil_check", "growth_census",
    "select_radius", "exit_code", "full_report", "census_words", "perimeter_words",
]
