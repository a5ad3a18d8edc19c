"""Blown-up even cycle: the extremal planar family for ``C_{2k}`` counts.

Start from ``C_{2k}`` with vertices ``a_0, b_0, a_1, b_1, ...`` and replace
each ``b_i`` by an independent set ``B_i`` whose members are all adjacent to
``a_i`` and ``a_{i+1}``. Hubs get labels ``0..k-1``; class members follow in
class order. For ``k >= 3`` a ``2k``-cycle must pick one member from every
class, so there are ``prod |B_i|`` of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import TooFewVertices, ValidationError
from .weights import SimpleGraph


@dataclass(frozen=True)
class BlowupConstruction:
    n: int
    k: int
    hubs: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    graph: SimpleGraph

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def embedding(self) -> dict[int, tuple[float, float]]:
        """Straight-line planar drawing.

        Hub ``a_i`` sits on the unit circle at angle ``2 pi i / k``; the
        ``j``-th member of ``B_i`` sits on the bisecting ray at radius
        ``1 + (j + 1) / (|B_i| + 1)``. Triangles ``a_i x a_{i+1}`` over one
        class are nested and live in the closed wedge between the two hub
        rays, so no two edges cross.
        """
        pos: dict[int, tuple[float, float]] = {}
        for i, a in enumerate(self.hubs):
            th = 2 * math.pi * i / self.k
            pos[a] = (math.cos(th), math.sin(th))
        for i, cls in enumerate(self.classes):
            th = 2 * math.pi * (i + 0.5) / self.k
            for j, x in enumerate(cls):
                r = 1 + (j + 1) / (len(cls) + 1)
                pos[x] = (r * math.cos(th), r * math.sin(th))
        return pos

    def metadata(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "hub_ids": list(self.hubs),
            "class_sizes": self.class_sizes,
            "edge_count": self.graph.num_edges(),
            "closed_form_count": closed_form_count(self.n, self.k),
        }


def _check(n: int, k: int) -> None:
    if k < 2:
        raise ValidationError(f"need k >= 2, got {k}")
    if n < 2 * k:
        raise TooFewVertices(f"blowup of C_{2 * k} needs n >= {2 * k}, got {n}")


def class_sizes(n: int, k: int) -> list[int]:
    """Balanced split of the ``n - k`` non-hub vertices; larger classes first."""
    _check(n, k)
    q, r = divmod(n - k, k)
    return [q + 1 if i < r else q for i in range(k)]


def build_blowup(n: int, k: int) -> BlowupConstruction:
    sizes = class_sizes(n, k)
    hubs = tuple(range(k))
    classes = []
    nxt = k
    for s in sizes:
        classes.append(tuple(range(nxt, nxt + s)))
        nxt += s
    edges = []
    for i, cls in enumerate(classes):
        for x in cls:
            edges.append((hubs[i], x))
            edges.append((hubs[(i + 1) % k], x))
    return BlowupConstruction(n, k, hubs, tuple(classes), SimpleGraph.from_edges(n, edges))


def closed_form_count(n: int, k: int) -> int:
    """``prod |B_i|`` over the balanced classes.

    This is the number of ``2k``-cycles in the construction for ``k >= 3``.
    For ``k = 2`` both classes hang off the same two hubs (the graph is
    ``K_{2, n-2}``), so the true 4-cycle count is ``C(n - 2, 2)`` instead.
    """
    return math.prod(class_sizes(n, k))


def asymptotic_ratio(n: int, k: int) -> float:
    """``closed_form_count(n, k) / (n^k / k^k)``, computed exactly then rounded."""
    return float(Fraction(closed_form_count(n, k) * k**k, n**k))


def four_cycle_count(n: int, k: int) -> int:
    """4-cycles in the construction for ``k >= 3``: two members of one class and its two hubs."""
    return sum(math.comb(s, 2) for s in class_sizes(n, k))


def segments_cross(p1, p2, q1, q2) -> bool:
    """Proper crossing of segments ``p1p2`` and ``q1q2`` (shared endpoints do not count)."""
    if {p1, p2} & {q1, q2}:
        return False

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 1e-12) - (v < -1e-12)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def is_plane_drawing(G: SimpleGraph, pos: dict[int, tuple[float, float]]) -> bool:
    """Brute-force check that no two edges of ``G`` cross in the drawing ``pos``."""
    edges = G.sorted_edges()
    for i, (a, b) in enumerate(edges):
        for c, d in edges[i + 1 :]:
            if segments_cross(pos[a], pos[b], pos[c], pos[d]):
                return False
    return True
