"""Weighted and unweighted graph model.

Vertices are plain ``int`` labels in ``[0, n)``. Deleting vertices never
relabels the survivors, so a restriction such as ``K_n \\ {v1, v2}`` still
talks about the original vertex names.

Weights are stored sparsely: an edge that is absent from the mapping has
weight zero. Values are either ``float`` or :class:`fractions.Fraction` (exact
mode); every routine in the package is generic over the two.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from numbers import Real
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    DuplicateEdge,
    EdgeNotInGraph,
    NegativeWeight,
    NonFiniteWeight,
    ParseError,
    SelfLoop,
    ValidationError,
    VertexNotInGraph,
    VertexOutOfRange,
    ZeroTotalWeight,
)

Edge = tuple[int, int]

NORMALIZATION_TOL = 1e-12


def edge(u: int, v: int) -> Edge:
    """Canonical form ``(min, max)`` of an unordered pair."""
    if u == v:
        raise SelfLoop(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on a subset of ``range(n)``."""

    n: int
    vertices: frozenset[int]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        for v in self.vertices:
            if not 0 <= v < self.n:
                raise VertexOutOfRange(f"vertex {v} outside [0, {self.n})")
        for u, v in self.edges:
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if u > v:
                raise ValidationError(f"edge {(u, v)} is not in canonical (u < v) form")
            if u not in self.vertices or v not in self.vertices:
                raise VertexNotInGraph(f"edge {(u, v)} has an endpoint outside the vertex set")

    @classmethod
    def complete(cls, n: int) -> SimpleGraph:
        return cls(n, frozenset(range(n)), frozenset(combinations(range(n), 2)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
        seen: set[Edge] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge {(u, v)} outside [0, {n})")
            e = edge(u, v)
            if e in seen:
                raise DuplicateEdge(f"edge {e} listed twice")
            seen.add(e)
        return cls(n, frozenset(range(n)), frozenset(seen))

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(nb)) for v, nb in adj.items()}

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and edge(u, v) in self.edges

    def num_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def is_complete(self) -> bool:
        s = len(self.vertices)
        return len(self.edges) == s * (s - 1) // 2


def delete_vertices(G: SimpleGraph, S: Iterable[int]) -> SimpleGraph:
    """Induced subgraph ``G[V(G) \\ S]``; surviving labels are unchanged."""
    S = frozenset(S)
    missing = S - G.vertices
    if missing:
        raise VertexNotInGraph(f"vertices {sorted(missing)} not in graph")
    if not S:
        return G
    edges = frozenset(e for e in G.edges if e[0] not in S and e[1] not in S)
    return SimpleGraph(G.n, G.vertices - S, edges)


def delete_edge(G: SimpleGraph, e: tuple[int, int]) -> SimpleGraph:
    e = edge(*e)
    if e not in G.edges:
        raise EdgeNotInGraph(f"edge {e} not in graph")
    return SimpleGraph(G.n, G.vertices, G.edges - {e})


def add_edge(G: SimpleGraph, e: tuple[int, int]) -> SimpleGraph:
    e = edge(*e)
    if e[0] not in G.vertices or e[1] not in G.vertices:
        raise VertexNotInGraph(f"edge {e} has an endpoint outside the graph")
    if e in G.edges:
        raise DuplicateEdge(f"edge {e} already present")
    return SimpleGraph(G.n, G.vertices, G.edges | {e})


def _check_value(e: Edge, x) -> None:
    if not isinstance(x, (Real, Fraction)) or isinstance(x, bool):
        raise ValidationError(f"weight of {e} is not a real number: {x!r}")
    if isinstance(x, float) and not math.isfinite(x):
        raise NonFiniteWeight(f"weight of {e} is not finite: {x!r}")
    if x < 0:
        raise NegativeWeight(f"weight of {e} is negative: {x!r}")


@dataclass(frozen=True)
class WeightFunction:
    """Nonnegative edge weights on a host graph (``K_n`` unless given).

    Only strictly positive weights are kept in ``weights``. Build instances
    with :func:`new_weight_function` rather than directly.
    """

    n: int
    weights: Mapping[Edge, Real]
    host: SimpleGraph | None = field(default=None, compare=False)
    normalized: bool = False

    @cached_property
    def graph(self) -> SimpleGraph:
        return self.host if self.host is not None else SimpleGraph.complete(self.n)

    @property
    def exact(self) -> bool:
        return any(isinstance(x, Fraction) for x in self.weights.values())

    def weight(self, u: int, v: int):
        if u == v:
            return self.zero
        return self.weights.get(edge(u, v), self.zero)

    @property
    def zero(self):
        return Fraction(0) if self.exact else 0.0

    @cached_property
    def total(self):
        return sum((self.weights[e] for e in sorted(self.weights)), self.zero)

    def support(self) -> list[Edge]:
        return sorted(self.weights)

    def support_vertices(self) -> list[int]:
        return sorted({v for e in self.weights for v in e})

    def items(self) -> Iterator[tuple[Edge, Real]]:
        for e in sorted(self.weights):
            yield e, self.weights[e]

    def max_weight_edge(self) -> tuple[Edge, Real]:
        """Heaviest edge; ties go to the lexicographically smallest pair."""
        if not self.weights:
            raise ZeroTotalWeight("weight function has empty support")
        best = max(self.weights.values())
        e = min(e for e, x in self.weights.items() if x == best)
        return e, best

    def replace(self, updates: Mapping[tuple[int, int], Real]) -> WeightFunction:
        """Copy with some weights overwritten (and re-validated)."""
        merged = dict(self.weights)
        for (u, v), x in updates.items():
            merged[edge(u, v)] = x
        return new_weight_function(self.n, merged.items(), host=self.host)

    def to_float(self) -> WeightFunction:
        return new_weight_function(self.n, ((e, float(x)) for e, x in self.items()), host=self.host)

    def to_exact(self) -> WeightFunction:
        return new_weight_function(self.n, ((e, Fraction(x)) for e, x in self.items()), host=self.host)

    def matrix(self, order: list[int] | None = None, graph: SimpleGraph | None = None) -> np.ndarray:
        """Dense symmetric weight matrix over ``order`` (default all vertices).

        Entries for pairs that are not edges of ``graph`` are zero. Exact
        weight functions give an ``object`` array of Fractions.
        """
        if order is None:
            order = list(range(self.n))
        pos = {v: i for i, v in enumerate(order)}
        exact = self.exact
        W = np.zeros((len(order), len(order)), dtype=object if exact else float)
        if exact:
            W[...] = Fraction(0)
        for (u, v), x in self.weights.items():
            if u in pos and v in pos and (graph is None or (u, v) in graph.edges):
                W[pos[u], pos[v]] = x
                W[pos[v], pos[u]] = x
        return W

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "normalized": self.normalized,
            "edges": [{"u": u, "v": v, "w": float(x)} for (u, v), x in self.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def new_weight_function(
    n: int,
    entries: Iterable[tuple[tuple[int, int], Real]] | Mapping[tuple[int, int], Real],
    host: SimpleGraph | None = None,
    exact: bool = False,
) -> WeightFunction:
    """Validate ``entries`` and build a :class:`WeightFunction` on ``host``.

    Zero entries are accepted and dropped. The ``normalized`` flag is set
    when the total is within ``NORMALIZATION_TOL`` of one. With
    ``exact=True`` every value is converted to a Fraction first.
    """
    if n < 2:
        raise ValidationError(f"need n >= 2, got {n}")
    if host is not None and host.n != n:
        raise ValidationError(f"host graph has n={host.n}, expected {n}")
    if isinstance(entries, Mapping):
        entries = entries.items()
    weights: dict[Edge, Real] = {}
    seen: set[Edge] = set()
    for (u, v), x in entries:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge {(u, v)} outside [0, {n})")
        e = edge(u, v)
        if e in seen:
            raise DuplicateEdge(f"edge {e} listed twice")
        seen.add(e)
        if exact:
            x = Fraction(x)
        _check_value(e, x)
        if host is not None and e not in host.edges:
            raise EdgeNotInGraph(f"edge {e} is not an edge of the host graph")
        if x != 0:
            weights[e] = x
    if weights and any(isinstance(x, Fraction) for x in weights.values()):
        if not all(isinstance(x, Fraction) for x in weights.values()):
            weights = {e: Fraction(x) for e, x in weights.items()}
    w = WeightFunction(n, weights, host, False)
    normalized = bool(weights) and abs(w.total - 1) <= NORMALIZATION_TOL
    return WeightFunction(n, weights, host, normalized)


def normalize(w: WeightFunction) -> WeightFunction:
    total = w.total
    if total <= 0:
        raise ZeroTotalWeight("cannot normalize a weight function with zero total weight")
    if w.exact:
        scaled = {e: x / total for e, x in w.items()}
    elif total == 1.0:
        return w
    else:
        scaled = {e: x / total for e, x in w.items()}
    return new_weight_function(w.n, scaled, host=w.host)


def weighted_degree(w: WeightFunction, G: SimpleGraph | None, v: int):
    """``d_G(v)``: total weight of the edges of ``G`` at ``v``."""
    G = w.graph if G is None else G
    if v not in G.vertices:
        raise VertexNotInGraph(f"vertex {v} not in graph")
    total = w.zero
    for u in G.adjacency[v]:
        total += w.weight(u, v)
    return total


def total_weight(w: WeightFunction, G: SimpleGraph | None = None):
    """Sum of ``w(e)`` over the edges of ``G`` (default: the host)."""
    if G is None:
        return w.total
    return sum((x for e, x in w.items() if e in G.edges), w.zero)


def uniform_cycle_weights(n: int, cycle: list[int], exact: bool = False) -> WeightFunction:
    """Weight ``1/k`` on each edge of the given ``k``-cycle, zero elsewhere."""
    k = len(cycle)
    val = Fraction(1, k) if exact else 1.0 / k
    entries = [((cycle[i], cycle[(i + 1) % k]), val) for i in range(k)]
    return new_weight_function(n, entries)


def uniform_complete_weights(n: int, exact: bool = False) -> WeightFunction:
    m = n * (n - 1) // 2
    val = Fraction(1, m) if exact else 1.0 / m
    return new_weight_function(n, [(e, val) for e in combinations(range(n), 2)])


def random_weight_function(n: int, rng: np.random.Generator) -> WeightFunction:
    """I.i.d. uniform ``[0, 1)`` weights on every edge of ``K_n``, normalized."""
    pairs = list(combinations(range(n), 2))
    raw = rng.random(len(pairs))
    raw = raw / raw.sum()
    return new_weight_function(n, zip(pairs, raw.tolist()))


def from_json_dict(data: dict, exact: bool = False) -> WeightFunction:
    try:
        n = int(data["n"])
        entries = [((int(r["u"]), int(r["v"])), r["w"]) for r in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed weight-function record: {exc}") from exc
    for (u, v), _ in entries:
        if u >= v:
            raise ValidationError(f"edge ({u}, {v}) must satisfy u < v")
    if exact:
        entries = [(e, Fraction(str(x))) for e, x in entries]
    return new_weight_function(n, entries)


def load_weights(path, exact: bool = False) -> WeightFunction:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return from_json_dict(data, exact=exact)


def write_edge_list(G: SimpleGraph) -> str:
    lines = [f"{G.n} {G.num_edges()}"]
    lines += [f"{u} {v}" for u, v in G.sorted_edges()]
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> SimpleGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except (IndexError, ValueError) as exc:
        raise ParseError(f"malformed edge list: {exc}") from exc
    if len(edges) != m:
        raise ParseError(f"header promises {m} edges, found {len(edges)}")
    return SimpleGraph.from_edges(n, edges)
