"""Paths on a complex and their letter encodings.

A path ``v0 h1 v1 ... hk vk`` is encoded as
``Y(v0) Z(h1) X(h1) Y(v1) ... Z(hk) X(hk) Y(vk)``: node letters sit at
every third position, each edge contributes its out-letter then its
in-letter.  Words are tuples of tokens; the token's first character names
its family.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import Coloring
from .complex import CapacityError

ZERO = ("0",)
NEXT_FAMILY = {"Y": "Z", "Z": "X", "X": "Y"}
ENUMERATE_CAP = 5_000_000


@dataclass(frozen=True)
class Path:
    start: int
    halves: tuple = ()

    def vertices(self, g) -> tuple:
        return (self.start,) + tuple(g.head[h] for h in self.halves)

    @property
    def edges(self) -> int:
        return len(self.halves)

    def closed(self, g) -> bool:
        return bool(self.halves) and g.head[self.halves[-1]] == self.start


def path_from_vertices(g, vs) -> Path:
    """Path through consecutive vertices; each step must be a single edge."""
    hs = []
    for a, b in zip(vs, vs[1:]):
        cand = g.half_between.get((a, b))
        if not cand:
            raise ValueError(f"no edge between {a} and {b}")
        hs.append(cand[0])
    return Path(vs[0], tuple(hs))


def valid(g, p: Path) -> bool:
    v = p.start
    for h in p.halves:
        if g.tail[h] != v:
            return False
        v = g.head[h]
    return True


def encode(col: Coloring, p: Path) -> tuple:
    g = col.graph
    w = [col.vtok[p.start]]
    for h in p.halves:
        w += (col.otok[h], col.itok[h], col.vtok[g.head[h]])
    return tuple(w)


def cyclic_word(col: Coloring, p: Path) -> tuple:
    """Encoding without its final node letter; powers of it spell ``p^n``."""
    return encode(col, p)[:-1]


def well_formed(w) -> bool:
    if w == ZERO:
        return False
    return all(NEXT_FAMILY.get(a[0]) == b[0] for a, b in zip(w, w[1:]))


def first_violation(w):
    """Index ``i`` such that ``w[i] w[i+1]`` breaks the alternation, or None."""
    for i in range(len(w) - 1):
        if NEXT_FAMILY.get(w[i][0]) != w[i + 1][0]:
            return i
    return None


def node_positions(w):
    return [i for i, a in enumerate(w) if a[0] == "Y"]


def embeddings(col: Coloring, w) -> list:
    """Every path whose encoding is exactly ``w``."""
    if w == ZERO or not w or w[0][0] != "Y" or len(w) % 3 != 1:
        return []
    g = col.graph
    out = []
    for v0 in (v for v, t in enumerate(col.vtok) if t == w[0]):
        stack = [(v0, ())]
        while stack:
            v, hs = stack.pop()
            i = 3 * len(hs)
            if i == len(w) - 1:
                out.append(Path(v0, hs))
                continue
            for h in g.out[v]:
                if col.otok[h] == w[i + 1] and col.itok[h] == w[i + 2] and col.vtok[g.head[h]] == w[i + 3]:
                    stack.append((g.head[h], hs + (h,)))
    out.sort(key=lambda p: (p.start, p.halves))
    return out


def all_paths(g, max_edges: int, start=None):
    """Directed paths with at most ``max_edges`` edges, shortest first."""
    starts = range(len(g.out)) if start is None else [start]
    layer = [Path(v) for v in starts]
    total = len(layer)
    yield from layer
    for _ in range(max_edges):
        nxt = []
        for p in layer:
            end = g.head[p.halves[-1]] if p.halves else p.start
            for h in g.out[end]:
                nxt.append(Path(p.start, p.halves + (h,)))
        total += len(nxt)
        if total > ENUMERATE_CAP:
            raise CapacityError(f"more than {ENUMERATE_CAP} paths")
        yield from nxt
        layer = nxt


def enumerate_words(col: Coloring, max_edges: int = 6) -> set:
    return {encode(col, p) for p in all_paths(col.graph, max_edges)}


class FactorIndex:
    """Decides whether a word is a factor of some path encoding.

    Runs the subset construction of the letter automaton whose states are
    vertices, out-half-edges and in-half-edges of the complex.
    """

    def __init__(self, col: Coloring):
        self.col = col
        g = col.graph
        n = len(col.vtok)
        self.n = n
        self.starts: dict[str, set] = {}
        for v, t in enumerate(col.vtok):
            self.starts.setdefault(t, set()).add(v)
        for h in range(len(g.tail)):
            self.starts.setdefault(col.otok[h], set()).add(n + 2 * h)
            self.starts.setdefault(col.itok[h], set()).add(n + 2 * h + 1)
        self.out_by = {}
        for v in range(n):
            for h in g.out[v]:
                self.out_by.setdefault((v, col.otok[h]), []).append(h)
        self._cache: dict = {}

    def _step(self, states, a):
        col, g, n = self.col, self.col.graph, self.n
        nxt = set()
        for s in states:
            if s < n:
                for h in self.out_by.get((s, a), ()):
                    nxt.add(n + 2 * h)
            elif (s - n) % 2 == 0:
                h = (s - n) // 2
                if col.itok[h] == a:
                    nxt.add(s + 1)
            else:
                h = (s - n) // 2
                if col.vtok[g.head[h]] == a:
                    nxt.add(g.head[h])
        return nxt

    def realizable(self, w) -> bool:
        w = tuple(w)
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        states = self.starts.get(w[0], set()) if w else {0}
        for a in w[1:]:
            if not states:
                break
            states = self._step(states, a)
        ok = bool(states)
        if len(self._cache) > 1_000_000:
            self._cache.clear()
        self._cache[w] = ok
        return ok

    def windows(self, length: int):
        """All distinct realizable factors of exactly ``length`` letters."""
        col, g, n = self.col, self.col.graph, self.n
        found = set()

        def letter(s):
            if s < n:
                return col.vtok[s]
            h = (s - n) // 2
            return col.otok[h] if (s - n) % 2 == 0 else col.itok[h]

        def succ(s):
            if s < n:
                return [n + 2 * h for h in g.out[s]]
            if (s - n) % 2 == 0:
                return [s + 1]
            return [g.head[(s - n) // 2]]

        for s0 in range(n + 2 * len(g.tail)):
            stack = [(s0, (letter(s0),))]
            while stack:
                s, w = stack.pop()
                if len(w) == length:
                    found.add(w)
                    continue
                for t in succ(s):
                    stack.append((t, w + (letter(t),)))
        return found
