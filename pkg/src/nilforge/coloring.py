"""Finite coloring of vertices and half-edges.

A vertex letter bundles the vertex type (base kind plus the set of pasted
types), its level, a hash of its radius-``r`` neighbourhood, and the same
data for up to three *bosses*.  Edge letters record the carrier, the
reading direction and whether the step enters or leaves a pasting or a
subtile.  Letters are named by short content hashes so that equal data in
different complexes gives equal tokens.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .complex import Complex

DEFAULT_RADIUS = 2
TOKEN_DIGEST = 5  # bytes of blake2b per token


def digest(text: str, size: int = TOKEN_DIGEST) -> str:
    return hashlib.blake2b(text.encode(), digest_size=size).hexdigest()


@dataclass(frozen=True)
class VertexLetter:
    kind: str
    pasted: tuple
    level: int
    env: str
    info: tuple  # ((kind, pasted, level, env) per boss, in boss order)

    family = "Y"

    def text(self) -> str:
        info = ";".join(f"{k}/{','.join(p) or '-'}/{lv}/{e}" for k, p, lv, e in self.info) or "-"
        return f"kind={self.kind} pasted={','.join(self.pasted) or '-'} level={self.level} env={self.env} info={info}"


@dataclass(frozen=True)
class EdgeLetter:
    family: str  # "Z" for the out-letter at the tail, "X" for the in-letter at the head
    tag: str
    side: str  # A when read along the carrier's positive direction
    main: bool
    pasting: bool  # entering (Z) or leaving (X) a pasting
    subtile: bool  # entering (Z) or leaving (X) a subtile

    def text(self) -> str:
        return (
            f"dir={'out' if self.family == 'Z' else 'in'} carrier={self.tag} side={self.side} "
            f"main={int(self.main)} pasting={int(self.pasting)} subtile={int(self.subtile)}"
        )


def parse_letter(token: str, text: str) -> dict:
    """Inverse of ``text()`` into a field dict (tuples and ints restored)."""
    out = {}
    for part in text.split():
        k, _, v = part.partition("=")
        out[k] = v
    if token[0] == "Y":
        out["pasted"] = () if out.get("pasted", "-") == "-" else tuple(out["pasted"].split(","))
        out["level"] = int(out["level"])
    else:
        for k in ("main", "pasting", "subtile"):
            out[k] = out.get(k) == "1"
    return out


def token_of(letter) -> str:
    return letter.family + digest(letter.text())


@dataclass(frozen=True)
class BossSet:
    first: int | None = None
    second: int | None = None
    third: int | None = None

    def members(self):
        return tuple(b for b in (self.first, self.second, self.third) if b is not None)


def boss_set(cx: Complex, v: int) -> BossSet:
    vx = cx.vertices[v]
    if vx.kclass == "inner":
        t = cx.macrotiles[vx.owner]
        ul, ur, dr, dl = t.corners
        if vx.kind == "C":
            return BossSet(t.mids["U"], dl, dr)
        return BossSet(t.mids["U"])
    if vx.kclass == "side":
        c = cx.carriers[vx.carrier]
        t = cx.macrotiles[c.owner]
        ul, ur, dr, dl = t.corners
        if c.tag in (2, 5, 6):
            return BossSet(t.mids["U"], dr)
        if c.tag in (7, 8):
            return BossSet(t.mids["U"], dl, dr)
        return BossSet(t.mids["U"])
    if vx.kind == "CDR":
        return BossSet(cx.macrotiles[vx.owner].corners[3])
    return BossSet()


class Coloring:
    """Letters of every vertex and half-edge of a finished complex."""

    def __init__(self, cx: Complex, radius: int = DEFAULT_RADIUS):
        self.cx = cx
        self.radius = radius
        self.graph = g = cx.graph()
        n = len(cx.vertices)
        self.levels = [cx.level_of(v) for v in range(n)]
        self.types = [(vx.kind, tuple(sorted(vx.pasted))) for vx in cx.vertices]
        self.env = self._environment(radius)
        self.bosses = [boss_set(cx, v) for v in range(n)]
        self.records: dict[str, object] = {}
        self.vletters = [self._vertex_letter(v) for v in range(n)]
        self.vtok = [self._register(x) for x in self.vletters]
        self.otok, self.itok = [], []
        for h in range(len(g.tail)):
            self.otok.append(self._register(self.edge_letter(h, "Z")))
            self.itok.append(self._register(self.edge_letter(h, "X")))

    def _register(self, letter) -> str:
        tok = token_of(letter)
        prev = self.records.setdefault(tok, letter)
        if prev != letter:
            raise RuntimeError(f"token collision on {tok}")
        return tok

    def _environment(self, radius: int):
        g = self.graph
        codes = [digest(f"{k}|{','.join(p)}|{lv}") for (k, p), lv in zip(self.types, self.levels)]
        for _ in range(radius):
            codes = [
                digest(codes[v] + ":" + ".".join(sorted(codes[u] for u in g.nbrs[v])))
                for v in range(len(codes))
            ]
        return codes

    def vertex_type(self, v: int):
        kind, pasted = self.types[v]
        return (kind, pasted, self.levels[v], self.env[v])

    def information(self, v: int):
        return tuple(self.vertex_type(b) for b in self.bosses[v].members())

    def _vertex_letter(self, v: int) -> VertexLetter:
        kind, pasted, level, env = self.vertex_type(v)
        return VertexLetter(kind, pasted, level, env, self.information(v))

    def main_flag(self, h: int, at: int) -> bool:
        """Whether half-edge ``h`` continues its carrier through ``at``."""
        cx = self.cx
        c = cx.carriers[self.graph.carrier_of(h)]
        if at != c.nodes[0] and at != c.nodes[-1]:
            return True
        return c.internal and at in cx.macrotiles[c.owner].inner.values()

    def edge_letter(self, h: int, family: str) -> EdgeLetter:
        g, cx = self.graph, self.cx
        c = cx.carriers[g.carrier_of(h)]
        at = g.tail[h] if family == "Z" else g.head[h]
        main = self.main_flag(h, at)
        crossing = cx.vertices[at].plane != c.plane
        return EdgeLetter(family, str(c.tag), "A" if g.forward(h) else "B", main, crossing, not main and not crossing)

    def vertex_letter(self, v: int) -> VertexLetter:
        return self.vletters[v]

    def letter(self, token: str):
        return self.records[token]

    def fields(self, token: str) -> dict:
        return parse_letter(token, self.records[token].text())

    def alphabet(self):
        return sorted(self.records)


def alphabet(cx: Complex, radius: int = DEFAULT_RADIUS):
    return Coloring(cx, radius).alphabet()


def alphabet_text(col: Coloring) -> str:
    return "".join(f"{tok} {col.records[tok].text()}\n" for tok in col.alphabet())
