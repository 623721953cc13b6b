"""Rewriting in the semigroup with zero.

Equalities (tile flips) are applied in both directions; zero relations
end a branch.  The search explores the flip-closure of a word breadth
first (or best first for the ``pipeline`` strategy) and returns a
:class:`Zero` with a replayable trace, :class:`Irreducible` when the
whole closure was seen without meeting a zero factor, or :class:`Unknown`
when the budget ran out first.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass

from .paths import NEXT_FAMILY, ZERO, embeddings
from .presentation import Presentation

EQ_LEN = 7  # letters in a 2-edge path encoding


class RewriteError(ValueError):
    """A step does not match the word it is applied to."""


@dataclass(frozen=True)
class RewriteStep:
    rel: object  # relation index, or "cat1" / "cat2" for the implicit families
    pos: int
    forward: bool = True
    length: int = 0  # factor length for implicit families


@dataclass
class Zero:
    trace: list

    def __bool__(self):
        return True


@dataclass
class Irreducible:
    word: tuple
    explored: int = 0


@dataclass
class Unknown:
    frontier: int
    budget: int
    explored: int = 0


@dataclass
class Embedded:
    path: object


# -- single steps --------------------------------------------------------

def find_zero(w, pres: Presentation, lo: int = 0, hi: int | None = None):
    """A zero-producing step whose factor meets ``[lo, hi)``, or None."""
    if w == ZERO:
        return None
    n = len(w)
    hi = n if hi is None else min(hi, n)
    for i in range(max(0, lo - 1), min(hi, n - 1)):
        if NEXT_FAMILY.get(w[i][0]) != w[i + 1][0]:
            return RewriteStep("cat1", i, length=2)
    for i in range(max(0, lo - EQ_LEN + 1), min(hi, n - EQ_LEN + 1)):
        if w[i][0] == "Y":
            rid = pres.zero_index.get(w[i:i + EQ_LEN])
            if rid is not None:
                return RewriteStep(rid, i)
    width = pres.window
    if n <= width:
        if n and not pres.realizable(w):
            return RewriteStep("cat2", 0, length=n)
        return None
    for i in range(max(0, lo - width + 1), min(hi, n - width + 1)):
        if not pres.realizable(w[i:i + width]):
            return RewriteStep("cat2", i, length=width)
    return None


def apply(w, step: RewriteStep, pres: Presentation):
    if w == ZERO:
        raise RewriteError("cannot rewrite the zero word")
    i = step.pos
    if step.rel == "cat1":
        if i + 1 < len(w) and NEXT_FAMILY.get(w[i][0]) != w[i + 1][0]:
            return ZERO
        raise RewriteError(f"no alternation break at {i}")
    if step.rel == "cat2":
        factor = tuple(w[i:i + step.length])
        if len(factor) == step.length and step.length <= pres.window and not pres.realizable(factor):
            return ZERO
        raise RewriteError(f"factor at {i} is realizable")
    rel = pres.relations[step.rel]
    if rel.cat != 5:
        if tuple(w[i:i + len(rel.word)]) == rel.word:
            return ZERO
        raise RewriteError(f"zero relation {step.rel} does not match at {i}")
    src, dst = (rel.left, rel.right) if step.forward else (rel.right, rel.left)
    if tuple(w[i:i + len(src)]) != src:
        raise RewriteError(f"relation {step.rel} does not match at {i}")
    return tuple(w[:i]) + dst + tuple(w[i + len(src):])


def flips(w, pres: Presentation):
    """All one-step equality rewrites as ``(step, word)`` pairs."""
    for i in range(0, len(w) - EQ_LEN + 1):
        if w[i][0] != "Y":
            continue
        for rid, fwd, rep in pres.eq_index.get(w[i:i + EQ_LEN], ()):
            yield RewriteStep(rid, i, fwd), w[:i] + rep + w[i + EQ_LEN:]


def neighbors(w, pres: Presentation) -> set:
    if find_zero(w, pres) is not None:
        return {ZERO}
    return {v for _, v in flips(w, pres)}


def replay(w, trace, pres: Presentation):
    for step in trace:
        w = apply(w, step, pres)
    return w


# -- search ----------------------------------------------------------------

def closure(w, pres: Presentation, budget: int, priority=None):
    """Explore the flip-closure of ``w`` looking for a zero factor."""
    w = tuple(w)
    z = find_zero(w, pres)
    if z is not None:
        return Zero([z])
    parent = {w: None}
    tie = itertools.count()
    if priority is None:
        frontier = deque([w])
        pop, push = frontier.popleft, frontier.append
    else:
        heap = [(priority(w), next(tie), w)]
        frontier = heap
        pop = lambda: heapq.heappop(heap)[2]  # noqa: E731
        push = lambda v: heapq.heappush(heap, (priority(v), next(tie), v))  # noqa: E731
    expanded = 0
    while frontier:
        if expanded >= budget:
            return Unknown(len(frontier), budget, len(parent))
        u = pop()
        expanded += 1
        for step, v in flips(u, pres):
            if v in parent:
                continue
            parent[v] = (u, step)
            z = find_zero(v, pres, step.pos, step.pos + EQ_LEN)
            if z is not None:
                return Zero(_trace(parent, v) + [z])
            push(v)
    return Irreducible(w, len(parent))


def _trace(parent, v):
    steps = []
    while parent[v] is not None:
        v, step = parent[v]
        steps.append(step)
    return steps[::-1]


def reduces_to_zero(w, pres: Presentation, budget: int = 1_000_000, strategy: str = "pipeline"):
    if strategy == "bfs":
        return closure(w, pres, budget)
    if strategy != "pipeline":
        raise ValueError(f"unknown strategy {strategy!r}")
    return reduce_pipeline(w, pres, budget)


# -- brackets ------------------------------------------------------------------

@dataclass(frozen=True)
class BracketProjection:
    symbols: str
    positions: tuple

    def innermost_pair(self):
        i = self.symbols.find("[]")
        return None if i < 0 else (self.positions[i], self.positions[i + 1])


def bracket_structure(w, pres: Presentation) -> BracketProjection:
    syms, pos = [], []
    for i, a in enumerate(w):
        if a[0] in "ZX":
            f = pres.fields(a)
            if f["pasting"] or f["subtile"]:
                syms.append("[" if a[0] == "Z" else "]")
                pos.append(i)
    return BracketProjection("".join(syms), tuple(pos))


def eliminate_innermost_bracket_pair(w, pres: Presentation, budget: int = 10_000):
    """Rewrite the factor around the innermost ``[ ]`` to fewer brackets.

    Returns ``(word, steps)`` on success (``steps`` empty when the closure
    of the factor offers nothing better), :class:`Zero`, or
    :class:`Unknown`.
    """
    w = tuple(w)
    proj = bracket_structure(w, pres)
    pair = proj.innermost_pair()
    if pair is None:
        raise ValueError("no adjacent bracket pair")
    i, j = pair
    lo, hi = i - 1, j + 2  # node letter before the opening edge .. after the closing edge
    factor = w[lo:hi]
    z = find_zero(factor, pres)
    if z is not None:
        return Zero([_shift(z, lo)])
    start = len(bracket_structure(factor, pres).symbols)
    parent = {factor: None}
    queue = deque([factor])
    expanded = 0
    while queue:
        if expanded >= budget:
            return Unknown(len(queue), budget, len(parent))
        u = queue.popleft()
        expanded += 1
        for step, v in flips(u, pres):
            if v in parent:
                continue
            parent[v] = (u, step)
            z = find_zero(v, pres, step.pos, step.pos + EQ_LEN)
            if z is not None:
                return Zero([_shift(s, lo) for s in _trace(parent, v) + [z]])
            if len(bracket_structure(v, pres).symbols) < start:
                steps = [_shift(s, lo) for s in _trace(parent, v)]
                return w[:lo] + v + w[hi:], steps
            queue.append(v)
    return w, []


def _shift(step: RewriteStep, by: int) -> RewriteStep:
    return RewriteStep(step.rel, step.pos + by, step.forward, step.length)


def reduce_pipeline(w, pres: Presentation, budget: int = 1_000_000):
    """Monomials first, then bracket elimination, then best-first search."""
    w = tuple(w)
    z = find_zero(w, pres)
    if z is not None:
        return Zero([z])
    prefix = []
    spent = 0
    local = max(1, budget // 20)
    while spent < budget // 2:
        if bracket_structure(w, pres).innermost_pair() is None:
            break
        res = eliminate_innermost_bracket_pair(w, pres, local)
        spent += local
        if isinstance(res, Zero):
            return Zero(prefix + res.trace)
        if isinstance(res, Unknown) or not res[1]:
            break
        w, steps = res
        prefix += steps
    res = closure(w, pres, budget - spent, priority=lambda v: len(bracket_structure(v, pres).symbols))
    if isinstance(res, Zero):
        return Zero(prefix + res.trace)
    return res


# -- side-node words: ranks and representatives -----------------------------

SIDE_KINDS = {a + b for a in "URDL" for b in "URDL" if a != b}


@dataclass(frozen=True)
class RankDiagram:
    ranks: tuple
    diagnostics: tuple = ()

    def text(self) -> str:
        return "".join(str(r) for r in self.ranks)


def canonical_ranks(k: int) -> tuple:
    """Ranks along a carrier split ``k`` times: 1 2 1 3 1 2 1 ..."""
    r = (1,)
    for j in range(2, k + 1):
        r = r + (j,) + r
    return r


def _node_fields(w, lex):
    nodes = [lex.fields(a) for a in w if a[0] == "Y"]
    edges = [lex.fields(a) for a in w if a[0] in "ZX"]
    return nodes, edges


def ranks_from_levels(levels) -> RankDiagram:
    """Ranks of consecutive carrier nodes from their (capped) levels.

    Levels stop at 3, so deeper ranks are recovered stage by stage: the
    rank-``n-1`` nodes sit ``2**(n-2)`` apart and alternate between staying
    put and being promoted, anchored at the ends of each run.
    """
    levels = list(levels)
    m = len(levels)
    rank = [min(lv, 3) for lv in levels]
    diags = []
    for i, lv in enumerate(levels):
        if lv == 3 and not _window_ok(rank, i, 3):
            diags.append(f"node {i}: level 3 without a 21312 window")
    n = 4
    while 2 ** (n - 2) < m:
        h = 2 ** (n - 2)
        cand = [i for i in range(m) if rank[i] == n - 1]
        runs, run = [], []
        for i in cand:
            if run and i - run[-1] == h:
                run.append(i)
            else:
                if run:
                    runs.append(run)
                run = [i]
        if run:
            runs.append(run)
        promoted = False
        for run in runs:
            if len(run) % 2 == 0:
                diags.append(f"node {run[-1]}: rank {n - 1} run of even length")
            for i in run[1:-1:2]:
                if _window_ok(rank, i, n):
                    rank[i] = n
                    promoted = True
        if not promoted:
            break
        n += 1
    return RankDiagram(tuple(rank), tuple(diags))


def _window_ok(rank, i, n):
    h = 2 ** (n - 2)
    if i - h < 0 or i + h >= len(rank):
        return False
    if rank[i - h] != n - 1 or rank[i + h] != n - 1:
        return False
    inner = canonical_ranks(n - 2) if n > 2 else ()
    return tuple(rank[i - h + 1:i]) == inner and tuple(rank[i + 1:i + h]) == inner


def rank_diagram(w, lex) -> RankDiagram:
    """Rank of every node letter of a main-edge side-node word."""
    nodes, edges = _node_fields(w, lex)
    for f in nodes:
        if f["kind"] not in SIDE_KINDS:
            raise ValueError(f"node of type {f['kind']} is not a side node")
    if edges and (len({e["carrier"] for e in edges}) != 1 or not all(e["main"] for e in edges)):
        raise ValueError("edges must all be main edges of one carrier")
    return ranks_from_levels(f["level"] for f in nodes)


@dataclass(frozen=True)
class Representative:
    first: int  # node index of the left end
    last: int  # node index of the right end
    factor: tuple

    @property
    def nodes(self) -> int:
        return self.last - self.first + 1


def word_representative(w, i: int, lex, pres: Presentation | None = None):
    """Smallest centred CUR ... CDL window around node ``i`` (5, 9, 17, ... nodes)."""
    w = tuple(w)
    ypos = [p for p, a in enumerate(w) if a[0] == "Y"]
    fields = [lex.fields(w[p]) for p in ypos]
    if fields[i]["level"] != 3:
        raise ValueError("word representatives exist only for level-3 nodes")
    h = 2
    while i - h >= 0 and i + h < len(ypos):
        if "CUR" in fields[i - h]["pasted"] and "CDL" in fields[i + h]["pasted"]:
            factor = w[ypos[i - h]:ypos[i + h] + 1]
            if pres is not None:
                z = find_zero(factor, pres)
                if z is not None:
                    return Zero([_shift(z, ypos[i - h])])
            return Representative(i - h, i + h, factor)
        h *= 2
    return Unknown(0, h, 0)


def realize_edge_word(w, pres: Presentation, col, budget: int = 10_000):
    """Zero, or an embedding of ``w`` as a path on ``col``'s complex."""
    w = tuple(w)
    z = find_zero(w, pres)
    if z is not None:
        return Zero([z])
    found = embeddings(col, w)
    if found:
        return Embedded(found[0])
    res = closure(w, pres, budget)
    return res if isinstance(res, Zero) else Unknown(0, budget, getattr(res, "explored", 0))


def power(w, k: int) -> tuple:
    return tuple(w) * k

