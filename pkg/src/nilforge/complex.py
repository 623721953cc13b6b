"""Substitution-and-pasting complexes.

A complex of level 1 is a single square tile.  Every construction step
splits each minimal tile into six tiles (every edge gains a midpoint, three
inner vertices ``A``, ``B``, ``C`` appear, eight internal edges are drawn),
then glues a fresh level-2 macrotile onto every length-4 window of an
internal carrier whose centre vertex has just reached rank 3.

Geometry is purely combinatorial: tiles are oriented 4-cycles with corners
listed clockwise starting from the upper-left one.  Edges live on
*carriers*: the line segment drawn at some step, later cut into ``2**k``
pieces by subsequent subdivisions.  A carrier keeps its vertices in
positive order, so the rank of a carrier node is ``v2(position) + 1``.

Layout of one subdivided tile (parent-local vertex names)::

    UL ---- U ---- UR
    |     / \\      |
    L -- A   B --- R
    |     \\ /      |
    |      C       |
    |    /   \\     |
    DL ---- D ---- DR

Faces: UL-U-A-L, U-UR-R-B, A-U-B-C, L-A-C-DL, C-B-R-DR, DL-C-DR-D.
Internal edges: 1=U-A, 2=U-B, 3=L-A, 4=A-C, 5=C-B, 6=R-B, 7=DL-C, 8=DR-C.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field

CORNERS = ("CUL", "CUR", "CDR", "CDL")
SIDE_LABELS = ("U", "R", "D", "L")
INNER = ("A", "B", "C")

# positive direction of each internal carrier, parent-local names
INTERNAL_EDGES = {
    1: ("U", "A"),
    2: ("U", "B"),
    3: ("L", "A"),
    4: ("A", "C"),
    5: ("C", "B"),
    6: ("R", "B"),
    7: ("DL", "C"),
    8: ("DR", "C"),
}

# children as (UL, UR, DR, DL) in parent-local names; clockwise order
CHILD_CORNERS = (
    ("UL", "U", "A", "L"),
    ("UR", "R", "B", "U"),
    ("B", "C", "A", "U"),
    ("DL", "L", "A", "C"),
    ("DR", "C", "B", "R"),
    ("DR", "D", "DL", "C"),
)

# parent side -> (start corner, midpoint, end corner), clockwise
PARENT_SIDES = {
    "U": ("UL", "U", "UR"),
    "R": ("UR", "R", "DR"),
    "D": ("DR", "D", "DL"),
    "L": ("DL", "L", "UL"),
}

DEFAULT_LEVEL_MAX = 7


class CapacityError(ValueError):
    """Requested construction exceeds the configured desk-scale bound."""


def level_max() -> int:
    return int(os.environ.get("NILFORGE_LEVEL_MAX", DEFAULT_LEVEL_MAX))


def v2(n: int) -> int:
    """2-adic valuation of a positive integer."""
    return (n & -n).bit_length() - 1


def subdivide_tile():
    """Local structure of one subdivided tile.

    Returns ``(vertices, edges, faces, internal)`` using parent-local names.
    ``edges`` is a sorted list of unordered pairs, ``faces`` the six
    children as clockwise corner tuples, ``internal`` maps index -> pair.
    """
    faces = [tuple(c) for c in CHILD_CORNERS]
    edges = set()
    for f in faces:
        for i in range(4):
            edges.add(frozenset((f[i], f[(i + 1) % 4])))
    vertices = sorted({v for f in faces for v in f})
    return vertices, sorted(tuple(sorted(e)) for e in edges), faces, dict(INTERNAL_EDGES)


@dataclass
class Vertex:
    id: int
    plane: int
    birth: int
    kind: str = ""
    kclass: str = ""  # corner | boundary | side | inner
    pasted: set = field(default_factory=set)
    carrier: int | None = None
    owner: int | None = None  # macrotile whose subdivision/pasting created it


@dataclass
class Carrier:
    id: int
    plane: int
    tag: object  # 1..8 for internal carriers, side label for boundary ones
    owner: int | None
    birth: int
    nodes: list

    @property
    def internal(self) -> bool:
        return isinstance(self.tag, int)


@dataclass
class Macrotile:
    id: int
    plane: int
    birth: int
    corners: tuple  # UL, UR, DR, DL vertex ids
    parent: int | None = None
    children: list = field(default_factory=list)
    mids: dict = field(default_factory=dict)
    inner: dict = field(default_factory=dict)
    carriers: dict = field(default_factory=dict)
    sides: tuple = ()  # leaves only: (carrier, segment, forward) for U, R, D, L

    def level(self, step: int) -> int:
        return step - self.birth + 1


@dataclass
class Pasting:
    id: int
    kernel: int
    carrier: int
    birth: int
    macrotile: int
    host_path: tuple  # five vertex ids in positive carrier order


class Complex:
    """Mutable during construction; treat as read-only once built."""

    def __init__(self):
        self.step = 1
        self.vertices: list[Vertex] = []
        self.carriers: list[Carrier] = []
        self.macrotiles: list[Macrotile] = []
        self.pastings: list[Pasting] = []
        self.kernels: set = set()
        self.log: list = []
        self._graph = None
        self._root()

    # -- construction -------------------------------------------------
    def _vertex(self, plane, kind="", kclass="", owner=None, carrier=None):
        v = Vertex(len(self.vertices), plane, self.step, kind, kclass, set(), carrier, owner)
        self.vertices.append(v)
        return v.id

    def _carrier(self, plane, tag, owner, nodes):
        c = Carrier(len(self.carriers), plane, tag, owner, self.step, list(nodes))
        self.carriers.append(c)
        return c.id

    def _root(self):
        vs = [self._vertex(0, k, "corner", owner=0) for k in CORNERS]
        ul, ur, dr, dl = vs
        sides = []
        for label, (a, b) in zip(SIDE_LABELS, ((ul, ur), (ur, dr), (dr, dl), (dl, ul))):
            cid = self._carrier(0, label, None, (a, b))
            sides.append((cid, 0, True))
        self.macrotiles.append(Macrotile(0, 0, 1, tuple(vs), sides=tuple(sides)))
        self.log.append(("root", 1))

    def leaves(self):
        return [m for m in self.macrotiles if not m.children]

    def subdivide(self):
        """Replace every minimal tile by six; every edge gains a midpoint."""
        self.step += 1
        self._graph = None
        mid = {}
        for c in self.carriers:
            old = c.nodes
            new = [old[0]]
            for i in range(len(old) - 1):
                m = self._vertex(c.plane, carrier=c.id, owner=c.owner)
                mid[(c.id, i)] = m
                new.append(m)
                new.append(old[i + 1])
            c.nodes = new
        base_labels = {}
        for t in self.leaves():
            for label, (cid, seg, fwd) in zip(SIDE_LABELS, t.sides):
                m = mid[(cid, seg)]
                if t.plane == self.carriers[cid].plane:
                    base_labels.setdefault(m, {})["A" if fwd else "B"] = label
                else:
                    self.vertices[m].pasted.add(label)
        for m, labels in base_labels.items():
            v = self.vertices[m]
            if len(labels) == 2:
                v.kind, v.kclass = labels["A"] + labels["B"], "side"
            else:
                (v.kind,) = labels.values()
                v.kclass = "boundary"
        for t in self.leaves():
            self._split_leaf(t, mid)
        self.log.append(("subdivide", self.step))

    def _split_leaf(self, t: Macrotile, mid):
        names = dict(zip(("UL", "UR", "DR", "DL"), t.corners))
        seg_of = {}
        for label, (cid, seg, fwd) in zip(SIDE_LABELS, t.sides):
            a, m, b = PARENT_SIDES[label]
            names[m] = mid[(cid, seg)]
            first, second = (2 * seg, 2 * seg + 1) if fwd else (2 * seg + 1, 2 * seg)
            _link(seg_of, a, m, (cid, first, fwd))
            _link(seg_of, m, b, (cid, second, fwd))
        self._fill(t, names, seg_of)

    def _fill(self, t: Macrotile, names, seg_of):
        """Create inner vertices, internal carriers and the six children."""
        for name in INNER:
            names[name] = self._vertex(t.plane, name, "inner", owner=t.id)
        t.mids = {k: names[k] for k in SIDE_LABELS}
        t.inner = {k: names[k] for k in INNER}
        for idx, (a, b) in INTERNAL_EDGES.items():
            cid = self._carrier(t.plane, idx, t.id, (names[a], names[b]))
            t.carriers[idx] = cid
            _link(seg_of, a, b, (cid, 0, True))
        for corners in CHILD_CORNERS:
            sides = tuple(seg_of[(corners[i], corners[(i + 1) % 4])] for i in range(4))
            child = Macrotile(
                len(self.macrotiles), t.plane, self.step,
                tuple(names[c] for c in corners), parent=t.id, sides=sides,
            )
            self.macrotiles.append(child)
            t.children.append(child.id)
        t.sides = ()

    def pasting_sites(self):
        """Windows (carrier, centre position) whose centre just reached rank 3."""
        sites = []
        for c in self.carriers:
            if not c.internal:
                continue
            for k in range(4, len(c.nodes) - 4, 8):
                if c.nodes[k] not in self.kernels:
                    sites.append((c.id, k))
        return sites

    def paste(self, site):
        """Glue a level-2 macrotile along the window centred at ``site``.

        The macrotile's upper side runs UL -> UR over positions k .. k-2 and
        its left side DL -> UL over k+2 .. k, so the kernel becomes its
        upper-left corner.
        """
        cid, k = site
        c = self.carriers[cid]
        if not (c.internal and k >= 4 and v2(k) == 2 and k <= len(c.nodes) - 5):
            raise ValueError(f"not a pasting site: {site}")
        kernel = c.nodes[k]
        if kernel in self.kernels:
            raise ValueError(f"vertex {kernel} already carries a pasting")
        self._graph = None
        plane = len(self.pastings) + 1
        host = tuple(c.nodes[k - 2:k + 3])
        ur, u, ul, l, dl = host
        mt = Macrotile(len(self.macrotiles), plane, self.step - 1, ())
        self.macrotiles.append(mt)
        dr = self._vertex(plane, "CDR", "corner", owner=mt.id)
        r = self._vertex(plane, "R", "boundary", owner=mt.id)
        d = self._vertex(plane, "D", "boundary", owner=mt.id)
        mt.corners = (ul, ur, dr, dl)
        rc = self._carrier(plane, "R", None, (ur, r, dr))
        dc = self._carrier(plane, "D", None, (dr, d, dl))
        self.vertices[r].carrier = rc
        self.vertices[d].carrier = dc
        for vid, t in ((u, "U"), (l, "L"), (ul, "CUL"), (ur, "CUR"), (dl, "CDL")):
            self.vertices[vid].pasted.add(t)
        names = {"UL": ul, "UR": ur, "DR": dr, "DL": dl, "U": u, "R": r, "D": d, "L": l}
        seg_of = {}
        _link(seg_of, "UL", "U", (cid, k - 1, False))
        _link(seg_of, "U", "UR", (cid, k - 2, False))
        _link(seg_of, "UR", "R", (rc, 0, True))
        _link(seg_of, "R", "DR", (rc, 1, True))
        _link(seg_of, "DR", "D", (dc, 0, True))
        _link(seg_of, "D", "DL", (dc, 1, True))
        _link(seg_of, "DL", "L", (cid, k + 1, False))
        _link(seg_of, "L", "UL", (cid, k, False))
        self._fill(mt, names, seg_of)
        self.kernels.add(kernel)
        p = Pasting(len(self.pastings), kernel, cid, self.step, mt.id, host)
        self.pastings.append(p)
        self.log.append(("paste", self.step, cid, k))
        return p

    # -- queries -------------------------------------------------------
    def level_of(self, vid: int) -> int:
        return min(3, self.step - self.vertices[vid].birth + 1)

    def macrotile_level(self, mid: int) -> int:
        return self.macrotiles[mid].level(self.step)

    def tiles(self):
        """Minimal tiles as (macrotile id, (UL, UR, DR, DL))."""
        return [(m.id, m.corners) for m in self.leaves()]

    def graph(self) -> "Graph":
        if self._graph is None:
            self._graph = Graph(self)
        return self._graph

    def distance(self, a: int, b: int) -> int:
        return distances(self, a, b)

    def base_tiles(self):
        return [m for m in self.leaves() if m.plane == 0]

    def boundary_vertices(self, mid: int) -> set:
        """Vertices on the boundary of a macrotile at the current step."""
        return {v for path in self.side_paths(mid) for v in path}

    def side_paths(self, mid: int):
        """Four boundary paths U, R, D, L of a macrotile, clockwise."""
        m = self.macrotiles[mid]
        ul, ur, dr, dl = m.corners
        return [
            self._segment_between(ul, ur, mid, "U"),
            self._segment_between(ur, dr, mid, "R"),
            self._segment_between(dr, dl, mid, "D"),
            self._segment_between(dl, ul, mid, "L"),
        ]

    def _segment_between(self, a, b, mid, label):
        # descend through children that own the side; collect in order
        m = self.macrotiles[mid]
        if not m.children:
            return [a, b]
        s, mm, e = PARENT_SIDES[label]
        names = dict(zip(("UL", "UR", "DR", "DL"), m.corners))
        names.update(m.mids)
        first = self._child_side(m, names[s], names[mm])
        second = self._child_side(m, names[mm], names[e])
        return first + second[1:]

    def _child_side(self, m, a, b):
        for cid in m.children:
            ch = self.macrotiles[cid]
            cs = ch.corners
            for i, label in enumerate(SIDE_LABELS):
                if cs[i] == a and cs[(i + 1) % 4] == b:
                    return self._segment_between(a, b, cid, label)
                if cs[i] == b and cs[(i + 1) % 4] == a:
                    return self._segment_between(b, a, cid, label)[::-1]
        raise AssertionError("side not found among children")


class Graph:
    """Frozen index over a complex: undirected edges and half-edges.

    Half-edge ``2*e`` runs along the carrier's positive direction, ``2*e+1``
    against it.
    """

    def __init__(self, cx: Complex):
        self.edge_carrier = []
        self.edge_pos = []
        self.tail = []
        self.head = []
        index = {}
        for c in cx.carriers:
            for i in range(len(c.nodes) - 1):
                e = len(self.edge_carrier)
                index[(c.id, i)] = e
                self.edge_carrier.append(c.id)
                self.edge_pos.append(i)
                a, b = c.nodes[i], c.nodes[i + 1]
                self.tail += [a, b]
                self.head += [b, a]
        self.edge_index = index
        n = len(cx.vertices)
        self.out = [[] for _ in range(n)]
        for h in range(len(self.tail)):
            self.out[self.tail[h]].append(h)
        self.nbrs = [sorted({self.head[h] for h in hs}) for hs in self.out]
        self.tiles = []
        for m in cx.leaves():
            hs = []
            for cid, seg, fwd in m.sides:
                e = index[(cid, seg)]
                hs.append(2 * e if fwd else 2 * e + 1)
            self.tiles.append((m.id, m.corners, tuple(hs)))
        self.half_between = {}
        for h in range(len(self.tail)):
            self.half_between.setdefault((self.tail[h], self.head[h]), []).append(h)

    @property
    def n_edges(self) -> int:
        return len(self.edge_carrier)

    def carrier_of(self, h: int) -> int:
        return self.edge_carrier[h >> 1]

    def forward(self, h: int) -> bool:
        return not h & 1

    def bfs(self, sources):
        dist = {}
        q = deque()
        for s in sources:
            dist[s] = 0
            q.append(s)
        while q:
            v = q.popleft()
            d = dist[v] + 1
            for u in self.nbrs[v]:
                if u not in dist:
                    dist[u] = d
                    q.append(u)
        return dist


def distances(cx: Complex, a: int, b: int) -> int:
    """Graph distance over all edges, pastings included."""
    if a == b:
        return 0
    dist = cx.graph().bfs([a])
    if b not in dist:
        raise ValueError(f"vertices {a} and {b} are disconnected")
    return dist[b]


def build(n: int, paste: bool = True) -> Complex:
    """Level-n complex: a square, then n-1 rounds of subdivide + paste."""
    if n < 1:
        raise ValueError("level must be positive")
    if n > level_max():
        raise CapacityError(f"level {n} exceeds capacity bound {level_max()} (NILFORGE_LEVEL_MAX)")
    cx = Complex()
    for _ in range(n - 1):
        cx.subdivide()
        if paste:
            for site in cx.pasting_sites():
                cx.paste(site)
    return cx


def dump(cx: Complex) -> str:
    """Line-oriented text form with a stable field order.

    Records: ``V id plane birth level kind pasted carrier owner``,
    ``H id tail head carrier position``, ``T id macrotile h1 h2 h3 h4``,
    ``P id kernel carrier birth macrotile host...``.
    """
    g = cx.graph()
    out = [f"# nilforge complex level={cx.step}"]
    for v in cx.vertices:
        pasted = ",".join(sorted(v.pasted)) or "-"
        out.append(
            f"V {v.id} {v.plane} {v.birth} {cx.level_of(v.id)} {v.kind} {pasted} "
            f"{'-' if v.carrier is None else v.carrier} {'-' if v.owner is None else v.owner}"
        )
    for h in range(len(g.tail)):
        out.append(f"H {h} {g.tail[h]} {g.head[h]} {g.carrier_of(h)} {g.edge_pos[h >> 1]}")
    for i, (mid, _, hs) in enumerate(g.tiles):
        out.append(f"T {i} {mid} " + " ".join(map(str, hs)))
    for p in cx.pastings:
        out.append(
            f"P {p.id} {p.kernel} {p.carrier} {p.birth} {p.macrotile} " + " ".join(map(str, p.host_path))
        )
    return "\n".join(out) + "\n"


def _link(seg_of, a, b, ref):
    cid, seg, fwd = ref
    seg_of[(a, b)] = ref
    seg_of[(b, a)] = (cid, seg, not fwd)
