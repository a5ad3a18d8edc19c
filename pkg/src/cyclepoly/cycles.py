"""Weighted path sums and the cycle polynomial.

Two independent engines are provided:

* ``"enumeration"`` -- depth-first listing of simple paths / cycles over the
  positive-weight edges. Cycles are found once each by rooting at their
  smallest vertex and fixing the direction by comparing the second and last
  vertices. This is the reference oracle.
* ``"subset-dp"`` -- a Held-Karp style dynamic program over vertex subsets,
  vectorised with numpy. ``L[mask, last]`` holds the total weight of simple
  paths from a source that visit exactly ``mask`` and stop at ``last``. A
  ``k``-cycle is recovered from its ``2k`` rooted, directed traversals.

Both engines only look at vertices touched by the weight support (plus any
query terminals), so sparse weight functions on a large ``K_n`` are cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Literal

import numpy as np

from .errors import BadCycleLength, BadPathLength, IdenticalVertices, ValidationError, VertexNotInGraph
from .weights import SimpleGraph, WeightFunction, edge

Method = Literal["enumeration", "subset-dp", "identity"]

# layer width is C(s, p) * s cells per source
MAX_DP_VERTICES = 18


@dataclass(frozen=True)
class CyclePolynomialValue:
    k: int
    value: float | Fraction
    method: str

    def __float__(self) -> float:
        return float(self.value)


# -- shared helpers ---------------------------------------------------------


def _restricted_adjacency(w: WeightFunction, H: SimpleGraph) -> dict[int, list[tuple[int, object]]]:
    """Positive-weight neighbours inside ``H``, sorted by label."""
    adj: dict[int, list[tuple[int, object]]] = {}
    for (u, v), x in w.items():
        if (u, v) in H.edges:
            adj.setdefault(u, []).append((v, x))
            adj.setdefault(v, []).append((u, x))
    for nb in adj.values():
        nb.sort(key=lambda t: t[0])
    return adj


def _local_order(w: WeightFunction, H: SimpleGraph, extra=()) -> list[int]:
    verts = {v for e in w.weights if e in H.edges for v in e}
    verts.update(extra)
    return sorted(verts)


def _check_vertex(H: SimpleGraph, v: int) -> None:
    if v not in H.vertices:
        raise VertexNotInGraph(f"vertex {v} not in graph")


def _check_path_length(H: SimpleGraph, j: int) -> None:
    if j < 2 or j > len(H.vertices):
        raise BadPathLength(f"path must have between 2 and {len(H.vertices)} vertices, got {j}")


def _check_cycle_length(n: int, k: int) -> None:
    if k < 3 or k > n:
        raise BadCycleLength(f"cycle length must lie in [3, {n}], got {k}")


def _finish(value, exact: bool):
    if exact:
        return Fraction(value)
    return float(value)


# -- enumeration engine -----------------------------------------------------


def _cycle_dfs(adj: dict[int, list[tuple[int, object]]], k: int) -> Iterator[tuple[tuple[int, ...], object]]:
    path: list[int] = []
    on_path: set[int] = set()

    def closing_weight(last: int, root: int):
        for y, x in adj[last]:
            if y == root:
                return x
        return None

    def extend(root: int, prod) -> Iterator[tuple[tuple[int, ...], object]]:
        last = path[-1]
        if len(path) == k:
            if path[1] < path[-1]:
                x = closing_weight(last, root)
                if x is not None:
                    yield tuple(path), prod * x
            return
        for y, x in adj[last]:
            if y > root and y not in on_path:
                path.append(y)
                on_path.add(y)
                yield from extend(root, prod * x)
                path.pop()
                on_path.discard(y)

    for root in sorted(adj):
        path.append(root)
        on_path.add(root)
        yield from extend(root, 1)
        path.pop()
        on_path.discard(root)


def _path_dfs(adj, j: int, u: int, v: int) -> Iterator[tuple[tuple[int, ...], object]]:
    path = [u]
    on_path = {u}

    def extend(prod):
        last = path[-1]
        if len(path) == j - 1:
            for y, x in adj.get(last, ()):
                if y == v:
                    yield tuple(path) + (v,), prod * x
            return
        for y, x in adj.get(last, ()):
            if y != v and y not in on_path:
                path.append(y)
                on_path.add(y)
                yield from extend(prod * x)
                path.pop()
                on_path.discard(y)

    yield from extend(1)


def enumerate_cycles(w: WeightFunction, k: int, H: SimpleGraph | None = None):
    """Yield ``(vertices, product)`` for every positive-weight ``k``-cycle, once each."""
    H = w.graph if H is None else H
    yield from _cycle_dfs(_restricted_adjacency(w, H), k)


def enumerate_paths(w: WeightFunction, H: SimpleGraph | None, j: int, u: int, v: int):
    """Yield ``(vertices, product)`` for each ``u``-``v`` path on ``j`` vertices in ``H``."""
    H = w.graph if H is None else H
    yield from _path_dfs(_restricted_adjacency(w, H), j, u, v)


# -- subset-DP engine -------------------------------------------------------


@lru_cache(maxsize=None)
def _layer_masks(s: int) -> tuple[list[np.ndarray], np.ndarray]:
    """Masks grouped by popcount, and each mask's position inside its group."""
    masks = np.arange(1 << s)
    counts = np.array([bin(m).count("1") for m in range(1 << s)])
    groups = [masks[counts == p] for p in range(s + 1)]
    pos = np.zeros(1 << s, dtype=np.intp)
    for g in groups:
        pos[g] = np.arange(len(g))
    return groups, pos


@lru_cache(maxsize=None)
def _transition(s: int, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gather tables taking popcount-``p`` paths to popcount-``p + 1`` paths."""
    groups, pos = _layer_masks(s)
    nxt = groups[p + 1][:, None]
    bits = 1 << np.arange(s)[None, :]
    member = (nxt & bits) != 0
    prev = np.where(member, pos[nxt ^ bits], 0)
    cols = np.broadcast_to(np.arange(s)[None, :], prev.shape)
    return member, prev, cols


def _zeros(shape, W: np.ndarray) -> np.ndarray:
    return np.zeros(shape, dtype=W.dtype)


def _step(L: np.ndarray, W: np.ndarray, p: int) -> np.ndarray:
    """Extend every path on ``p`` vertices by one edge to an unvisited vertex."""
    member, prev, cols = _transition(W.shape[0], p)
    T = L @ W
    return np.where(member, T[:, prev, cols], 0)


def _initial_layer(W: np.ndarray, sources: list[int]) -> np.ndarray:
    s = W.shape[0]
    if s > MAX_DP_VERTICES:
        raise ValidationError(f"subset DP limited to {MAX_DP_VERTICES} active vertices, got {s}")
    # popcount-1 masks are 1 << v, stored at position v
    L = _zeros((len(sources), s, s), W)
    for i, src in enumerate(sources):
        L[i, src, src] = 1
    return L


def path_layers(W: np.ndarray, sources: list[int], max_vertices: int) -> list[np.ndarray]:
    """``out[j][i, x]``: weight of simple paths on ``j`` vertices from ``sources[i]`` to ``x``.

    Works in local indices of ``W``; ``max_vertices`` may not exceed its size.
    """
    L = _initial_layer(W, sources)
    out = [None, L.sum(axis=1)]
    for p in range(1, max_vertices):
        L = _step(L, W, p)
        out.append(L.sum(axis=1))
    return out


def forced_edge_path_sums(W: np.ndarray, source: int, j: int, a: int, b: int) -> np.ndarray:
    """Paths on ``j`` vertices from ``source`` that use edge ``ab``, its weight taken as 1.

    Returns a vector over local endpoints. No division by the weight of
    ``ab`` is involved, so this is safe when that weight is zero.
    """
    W0 = W.copy()
    W0[a, b] = W0[b, a] = 0
    E = _zeros(W.shape, W)
    E[a, b] = E[b, a] = 1
    free = _initial_layer(W, [source])
    used = _zeros(free.shape, W)
    for p in range(1, j):
        member, prev, cols = _transition(W.shape[0], p)
        T_used = used @ W0 + free @ E
        T_free = free @ W0
        used = np.where(member, T_used[:, prev, cols], 0)
        free = np.where(member, T_free[:, prev, cols], 0)
    return used.sum(axis=1)[0]


def cycle_dp(W: np.ndarray, k: int):
    """Sum over ``k``-cycles via all ``2k`` rooted directed traversals."""
    s = W.shape[0]
    if s < k:
        return 0
    P = path_layers(W, list(range(s)), k)[k]
    closed = (P * W).sum()
    if W.dtype == object:
        return Fraction(closed) / (2 * k)
    return closed / (2 * k)


# -- public operations ------------------------------------------------------


def path_sum_table(w: WeightFunction, H: SimpleGraph | None, u: int, max_j: int) -> dict[int, dict[int, object]]:
    """All path sums ``f_H(j, u, x)`` for ``2 <= j <= max_j`` from one DP pass.

    Returns ``{j: {x: value}}``; endpoints that are missing have value zero.
    """
    H = w.graph if H is None else H
    _check_vertex(H, u)
    order = _local_order(w, H, (u,))
    W = w.matrix(order, H)
    depth = min(max_j, len(order))
    layers = path_layers(W, [order.index(u)], depth)
    out: dict[int, dict[int, object]] = {}
    for j in range(2, max_j + 1):
        if j <= depth:
            row = layers[j][0]
            out[j] = {x: _finish(row[i], w.exact) for i, x in enumerate(order) if x != u}
        else:
            out[j] = {}
    return out


def path_sum(
    w: WeightFunction,
    H: SimpleGraph | None,
    j: int,
    u: int,
    v: int,
    method: Method = "subset-dp",
):
    """``f_H(j, u, v)``: total weight of the ``u``-``v`` paths in ``H`` with ``j`` vertices.

    Each path is counted once as a subgraph. ``H`` defaults to the host of
    ``w``; weights on pairs that are not edges of ``H`` are ignored.
    """
    H = w.graph if H is None else H
    _check_vertex(H, u)
    _check_vertex(H, v)
    if u == v:
        raise IdenticalVertices(f"path terminals must differ, got {u} twice")
    _check_path_length(H, j)
    if method == "enumeration":
        total = sum((p for _, p in enumerate_paths(w, H, j, u, v)), w.zero)
        return _finish(total, w.exact)
    if method != "subset-dp":
        raise ValidationError(f"unknown method {method!r}")
    return path_sum_table(w, H, u, j)[j].get(v, w.zero)


def path_sum_from(w: WeightFunction, H: SimpleGraph | None, j: int, u: int, method: Method = "subset-dp"):
    """``f_H(j, u)``: path sums from ``u`` on ``j`` vertices, summed over all other endpoints."""
    H = w.graph if H is None else H
    _check_vertex(H, u)
    _check_path_length(H, j)
    if method == "enumeration":
        total = w.zero
        for v in sorted(H.vertices - {u}):
            total += path_sum(w, H, j, u, v, method="enumeration")
        return total
    row = path_sum_table(w, H, u, j)[j]
    return sum((row[x] for x in sorted(row)), w.zero)


def beta(w: WeightFunction, k: int, method: Method = "subset-dp"):
    """Raw value of the cycle polynomial; see :func:`beta_cycles`."""
    _check_cycle_length(w.n, k)
    if method == "enumeration":
        total = sum((p for _, p in enumerate_cycles(w, k)), w.zero)
        return _finish(total, w.exact)
    if method == "subset-dp":
        order = _local_order(w, w.graph)
        W = w.matrix(order, w.graph)
        return _finish(cycle_dp(W, k), w.exact)
    if method == "identity":
        return beta_via_identity(w, k)
    raise ValidationError(f"unknown method {method!r}")


def beta_cycles(w: WeightFunction, k: int, method: Method = "subset-dp") -> CyclePolynomialValue:
    """Sum over all ``k``-cycle subgraphs of the product of their edge weights.

    >>> from cyclepoly.weights import uniform_cycle_weights
    >>> beta_cycles(uniform_cycle_weights(3, [0, 1, 2], exact=True), 3).value
    Fraction(1, 27)
    """
    return CyclePolynomialValue(k, beta(w, k, method), method)


def beta_via_identity(w: WeightFunction, k: int):
    """Cycle polynomial as ``(1/k) * sum_uv w(uv) f(k, u, v)``.

    Every ``k``-cycle through ``uv`` is the edge ``uv`` plus a ``u``-``v``
    path on ``k`` vertices, and each cycle has ``k`` edges.
    """
    _check_cycle_length(w.n, k)
    H = w.graph
    total = w.zero
    tables: dict[int, dict[int, object]] = {}
    for (u, v), x in w.items():
        if (u, v) not in H.edges:
            continue
        if u not in tables:
            tables[u] = path_sum_table(w, H, u, k)[k]
        total += x * tables[u].get(v, w.zero)
    return total / k


def count_cycles(G: SimpleGraph, length: int) -> int:
    """Exact number of ``length``-cycles in ``G``, each subgraph counted once."""
    if length < 3:
        raise BadCycleLength(f"cycle length must be at least 3, got {length}")
    if length > len(G.vertices):
        return 0
    adj = {v: [(u, 1) for u in nb] for v, nb in G.adjacency.items() if nb}
    return sum(1 for _ in _cycle_dfs(adj, length))


def complete_graph_cycle_count(n: int, length: int) -> int:
    """Closed form ``n! / (2 * length * (n - length)!)`` for ``K_n``."""
    if length > n:
        return 0
    return math.perm(n, length) // (2 * length)
