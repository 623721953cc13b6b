"""Defining relations of the semigroup.

* category 1: two adjacent letters breaking the ``Y Z X`` alternation;
* category 2: short words that encode no path (kept implicit: a factor of
  ``3L+1`` letters is zero iff no path encoding contains it);
* category 3: an edge walked there and straight back;
* category 4: the dead turns ``AUB``, ``ACB``, ``C-DL-D`` and ``C-DR-D``;
* category 5: the two 2-edge halves of every tile are equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .coloring import Coloring, parse_letter
from .complex import CapacityError, Complex
from .paths import NEXT_FAMILY, ZERO, FactorIndex, Path, all_paths, encode, path_from_vertices, well_formed

DEFAULT_CAT2_EDGES = 4
CAT2_ENUM_CAP = 1_000_000


class DeterminismError(RuntimeError):
    def __init__(self, report):
        super().__init__(f"determinism violated: {report.conflicts[0] if report.conflicts else report}")
        self.report = report


class PresentationParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True, order=True)
class ZeroRel:
    cat: int
    word: tuple


@dataclass(frozen=True, order=True)
class EqRel:
    left: tuple
    right: tuple
    cat: int = 5


def cat1_zero(w) -> bool:
    return w != ZERO and not well_formed(w)


# -- tile geometry ---------------------------------------------------------

def tile_path_pairs(g):
    """Every directed 2-edge path around a tile with its complement."""
    for _, corners, hs in g.tiles:
        rev = [h ^ 1 for h in hs]
        for i in range(4):
            a = Path(corners[i], (hs[i], hs[(i + 1) % 4]))
            b = Path(corners[i], (rev[(i - 1) % 4], rev[(i - 2) % 4]))
            yield a, b
            yield b, a


def dead_paths(cx: Complex):
    """Dead turns of every subdivided macrotile, both directions.

    Yields ``(pattern, macrotile id, vertex triple)``.
    """
    for m in cx.macrotiles:
        if not m.children:
            continue
        car = {k: cx.carriers[c].nodes for k, c in m.carriers.items()}
        u, c = m.mids["U"], m.inner["C"]
        _, _, dr, dl = m.corners
        bottom = cx.side_paths(m.id)[2]  # DR ... DL
        triples = [
            ("AUB", (car[1][1], u, car[2][1])),
            ("ACB", (car[4][-2], c, car[5][1])),
            ("CDL-D", (car[7][1], dl, bottom[-2])),
            ("CDR-D", (car[8][1], dr, bottom[1])),
        ]
        for name, (x, y, z) in triples:
            yield name, m.id, (x, y, z)
            yield name, m.id, (z, y, x)


def gen_cat3(col: Coloring) -> set:
    g = col.graph
    return {encode(col, Path(g.tail[h], (h, h ^ 1))) for h in range(len(g.tail))}


def gen_cat4(col: Coloring) -> set:
    g = col.graph
    return {encode(col, path_from_vertices(g, t)) for _, _, t in dead_paths(col.cx)}


def gen_cat2(col: Coloring, letters: int = 4, cap: int = CAT2_ENUM_CAP) -> set:
    """Explicit category 2: unrealizable well-formed words of <= ``letters`` letters.

    Only feasible for tiny alphabets; the presentation itself keeps this
    category implicit.
    """
    fam = {f: sorted(t for t in col.records if t[0] == f) for f in "YZX"}
    total = sum(_count_words(fam, n) for n in range(1, letters + 1))
    if total > cap:
        raise CapacityError(f"{total} candidate words exceed the enumeration cap {cap}")
    index = FactorIndex(col)
    out = set()
    for n in range(1, letters + 1):
        for first in "YZX":
            seq = [first]
            for _ in range(n - 1):
                seq.append(NEXT_FAMILY[seq[-1]])
            for w in itertools.product(*(fam[f] for f in seq)):
                if not index.realizable(w):
                    out.add(tuple(w))
    return out


def _count_words(fam, n):
    total = 0
    for first in "YZX":
        f, prod = first, 1
        for _ in range(n):
            prod *= len(fam[f])
            f = NEXT_FAMILY[f]
        total += prod
    return total


# -- determinism -----------------------------------------------------------

@dataclass
class DeterminismReport:
    passed: bool
    radius: int
    groups: int
    conflicts: list = field(default_factory=list)  # (encoding, [(tile path, complement path), ...])
    geometric: int = 0  # conflicts where one path borders two different tiles
    spurious: int = 0  # non-tile 2-edge paths sharing a tile-path encoding

    def summary(self) -> str:
        return (
            f"radius={self.radius} groups={self.groups} conflicts={len(self.conflicts)} "
            f"geometric={self.geometric} spurious={self.spurious}"
        )


def determinism_check(col: Coloring, dead: set | None = None) -> DeterminismReport:
    """Group non-dead tile paths by encoding; each group needs one complement."""
    g = col.graph
    if dead is None:
        dead = gen_cat4(col)
    groups: dict = {}
    tile_halves = set()
    for a, b in tile_path_pairs(g):
        tile_halves.add(a.halves)
        wa = encode(col, a)
        if wa in dead:
            continue
        groups.setdefault(wa, {}).setdefault(encode(col, b), []).append((a, b))
    conflicts, geometric = [], 0
    for wa in sorted(groups):
        comps = groups[wa]
        if len(comps) > 1:
            witnesses = [lst[0] for _, lst in sorted(comps.items())]
            conflicts.append((wa, witnesses))
            shared = set.intersection(*({a.halves for a, _ in lst} for lst in comps.values()))
            geometric += bool(shared)
    spurious = 0
    for p in all_paths(g, 2):
        if p.edges == 2 and p.halves not in tile_halves and encode(col, p) in groups:
            spurious += 1
    return DeterminismReport(not conflicts, col.radius, len(groups), conflicts, geometric, spurious)


def gen_cat5(col: Coloring, zero: set, strict: bool = True) -> set:
    """Tile flips, skipping pairs with a forbidden side."""
    if strict:
        rep = determinism_check(col, {w for w in zero})
        if not rep.passed:
            raise DeterminismError(rep)
    out = set()
    for a, b in tile_path_pairs(col.graph):
        wa, wb = encode(col, a), encode(col, b)
        if wa in zero or wb in zero:
            continue
        out.add(EqRel(*sorted((wa, wb))))
    return out


# -- the presentation --------------------------------------------------------

class Presentation:
    """Relations plus the oracle deciding category 2."""

    def __init__(self, letters: dict, zero_rels, eq_rels, meta: dict, realizer=None, whitelist=None):
        self.letters = dict(sorted(letters.items()))
        self.zero_rels = sorted(zero_rels)
        self.eq_rels = sorted(eq_rels)
        self.meta = dict(meta)
        self.cat2_edges = int(self.meta.get("cat2_edges", DEFAULT_CAT2_EDGES))
        self.window = 3 * self.cat2_edges + 1
        self._realizer = realizer
        self.whitelist = whitelist
        self._factors: dict = {}
        self._fields: dict = {}
        self.relations = list(self.zero_rels) + list(self.eq_rels)
        self.zero_index = {z.word: i for i, z in enumerate(self.zero_rels)}
        self.eq_index: dict = {}
        off = len(self.zero_rels)
        for i, r in enumerate(self.eq_rels):
            self.eq_index.setdefault(r.left, []).append((off + i, True, r.right))
            self.eq_index.setdefault(r.right, []).append((off + i, False, r.left))

    # category 2
    def realizable(self, w) -> bool:
        w = tuple(w)
        if self._realizer is not None:
            return self._realizer.realizable(w)
        if self.whitelist is None:
            return True
        if len(w) == self.window:
            return w in self.whitelist
        n = len(w)
        facs = self._factors.get(n)
        if facs is None:
            facs = {x[i:i + n] for x in self.whitelist for i in range(self.window - n + 1)}
            self._factors[n] = facs
        return w in facs

    def fields(self, token: str) -> dict:
        f = self._fields.get(token)
        if f is None:
            f = self._fields[token] = parse_letter(token, self.letters[token])
        return f

    def zero_words(self, cat: int | None = None) -> set:
        return {z.word for z in self.zero_rels if cat is None or z.cat == cat}

    def counts(self) -> dict:
        out = {"letters": len(self.letters), "cat5": len(self.eq_rels)}
        for c in (3, 4):
            out[f"cat{c}"] = sum(z.cat == c for z in self.zero_rels)
        if self.whitelist is not None:
            out["cat2_whitelist"] = len(self.whitelist)
        return out

    # serialisation
    def export(self, whitelist: bool = True) -> str:
        lines = ["# nilforge presentation"]
        lines.append("M " + " ".join(f"{k}={v}" for k, v in sorted(self.meta.items())))
        for tok, text in self.letters.items():
            lines.append(f"A {tok} {text}")
        if whitelist:
            wl = self.whitelist
            if wl is None and self._realizer is not None:
                wl = self._realizer.windows(self.window)
            for w in sorted(wl or ()):
                lines.append("R " + " ".join(w))
        for z in self.zero_rels:
            lines.append(f"Z {z.cat} " + " ".join(z.word))
        for e in self.eq_rels:
            lines.append("E " + " ".join(e.left) + " | " + " ".join(e.right))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Presentation":
        letters, zeros, eqs, meta, whitelist = {}, [], [], {}, set()
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            tag, _, rest = line.partition(" ")
            try:
                if tag == "M":
                    for part in rest.split():
                        k, _, v = part.partition("=")
                        meta[k] = v
                elif tag == "A":
                    tok, _, desc = rest.partition(" ")
                    letters[tok] = desc
                elif tag == "R":
                    whitelist.add(tuple(rest.split()))
                elif tag == "Z":
                    cat, _, w = rest.partition(" ")
                    zeros.append(ZeroRel(int(cat), tuple(w.split())))
                elif tag == "E":
                    left, sep, right = rest.partition(" | ")
                    if not sep:
                        raise ValueError("missing ' | ' separator")
                    eqs.append(EqRel(tuple(left.split()), tuple(right.split())))
                else:
                    raise ValueError(f"unknown record tag {tag!r}")
            except ValueError as exc:
                raise PresentationParseError(lineno, str(exc)) from None
        return cls(letters, zeros, eqs, meta, whitelist=whitelist or None)


def build_presentation(
    col: Coloring, cat2_edges: int = DEFAULT_CAT2_EDGES, strict: bool = True
) -> Presentation:
    cat3 = gen_cat3(col)
    cat4 = gen_cat4(col) - cat3
    zero = cat3 | cat4
    eqs = gen_cat5(col, zero, strict=strict)
    letters = {t: col.records[t].text() for t in col.records}
    meta = {"level": col.cx.step, "radius": col.radius, "cat2_edges": cat2_edges, "strict": int(strict)}
    zrels = [ZeroRel(3, w) for w in cat3] + [ZeroRel(4, w) for w in cat4]
    return Presentation(letters, zrels, eqs, meta, realizer=FactorIndex(col))
