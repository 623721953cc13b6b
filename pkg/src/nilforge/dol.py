"""EdgeLevels sequences and the four-letter substitution ``f``.

``f(U1) = U1 U L1``, ``f(L1) = U1 L L1``; ``U`` and ``L`` are fixed.
Iterates of ``f`` model the node letters along one carrier, read with the
level-1 nodes marked, and are square-free.
"""

from __future__ import annotations

import numpy as np

from .complex import CapacityError

EDGE_LEVELS_MAX = 24
DOL_RULES = {"U1": ("U1", "U", "L1"), "L1": ("U1", "L", "L1"), "U": ("U",), "L": ("L",)}


def edge_levels(k: int) -> str:
    """Node levels along a carrier split ``k`` times (levels capped at 3)."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > EDGE_LEVELS_MAX:
        raise CapacityError(f"edge_levels({k}) exceeds 2**{EDGE_LEVELS_MAX}")
    s = "1"
    for j in range(2, k + 1):
        s = s + ("2" if j == 2 else "3") + s
    return s


def renumber_step(s: str) -> str:
    """Age every node by one level and put a fresh level-1 node in each gap."""
    aged = s.translate(str.maketrans("12", "23"))
    return "1" + "".join(c + "1" for c in aged)


def dol_step(w):
    return tuple(x for a in w for x in DOL_RULES[a])


def dol_iterate(n: int, start: str = "U1"):
    w = (start,)
    for _ in range(n):
        w = dol_step(w)
    return w


def has_adjacent_repeat(w):
    """Some ``Q`` with ``QQ`` a factor of ``w`` (shortest first), else None.

    Plain quadratic scan; kept as the reference for :func:`find_square_fast`.
    """
    w = list(w)
    n = len(w)
    for p in range(1, n // 2 + 1):
        run = 0
        for i in range(n - p):
            run = run + 1 if w[i] == w[i + p] else 0
            if run == p:
                start = i - p + 1
                return tuple(w[start:start + p])
    return None


def find_square_fast(w):
    """Vectorised variant of :func:`has_adjacent_repeat` with the same answer."""
    if len(w) < 2:
        return None
    codes = {a: i for i, a in enumerate(sorted(set(w)))}
    arr = np.fromiter((codes[a] for a in w), dtype=np.int16, count=len(w))
    n = len(arr)
    for p in range(1, n // 2 + 1):
        eq = (arr[:-p] == arr[p:]).astype(np.int8)
        if eq.sum() < p:
            continue
        # longest run of ones ending at each index via cumulative sums
        idx = np.arange(eq.size)
        zeros = np.where(eq == 0, idx, -1)
        last_zero = np.maximum.accumulate(zeros)
        run = idx - last_zero
        hits = np.nonzero(run >= p)[0]
        if hits.size:
            start = int(hits[0]) - p + 1
            return tuple(w[start:start + p])
    return None


def level_periodicity(s: str, period: str = "3121", preperiod: str = "121") -> bool:
    """True iff ``s`` reads ``preperiod`` then repeats ``period`` to the end."""
    if not s.startswith(preperiod):
        return False
    tail = s[len(preperiod):]
    reps = period * (len(tail) // len(period) + 1)
    return tail == reps[: len(tail)]


def project_edge_word(nodes):
    """Map side-node records ``(kind, level)`` to DOL letters.

    Only ``UL`` and ``LU`` nodes are admissible; anything else raises.
    """
    out = []
    for kind, level in nodes:
        if kind == "UL":
            out.append("U1" if level == 1 else "U")
        elif kind == "LU":
            out.append("L1" if level == 1 else "L")
        else:
            raise ValueError(f"node type {kind} is outside the UL/LU alphabet")
    return tuple(out)


def is_factor(small, big) -> bool:
    m = len(small)
    return any(tuple(big[i:i + m]) == tuple(small) for i in range(len(big) - m + 1))
