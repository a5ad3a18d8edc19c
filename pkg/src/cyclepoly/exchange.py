"""Pairwise weight-exchange ascent for the cycle polynomial.

Fix two edges ``e1``, ``e2`` and their combined mass ``c``. Every ``k``-cycle
uses an edge at most once, so with ``x = w(e1)`` and ``w(e2) = c - x`` the
polynomial is the concave quadratic

    g(x) = A x (c - x) + B1 x + B2 (c - x) + C

where ``A`` collects cycles through both edges, ``B1``/``B2`` cycles through
exactly one, and ``C`` cycles through neither. An exchange move replaces
``x`` by the maximiser of ``g`` on ``[0, c]``; total mass is unchanged.

The derivative ``g'(x)`` at the current point equals ``f(k, e1) - f(k, e2)``,
the difference of the two edge path sums, which is what the sweep uses to
skip pairs that cannot improve.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Literal

import numpy as np

from .cycles import beta, cycle_dp, forced_edge_path_sums, path_layers, path_sum_table
from .errors import (
    BadCycleLength,
    EdgeNotInGraph,
    EmptySupport,
    IdenticalEdges,
    NegativeMass,
    NotNormalized,
    ValidationError,
)
from .weights import Edge, WeightFunction, edge, new_weight_function, normalize, random_weight_function

PairStrategy = Literal["sweep", "greedy", "random"]

SNAP_TO_ZERO = 1e-14


@dataclass(frozen=True)
class ExchangeCoefficients:
    A: float
    B1: float
    B2: float
    C: float
    c: float
    x: float  # current w(e1)

    def g(self, x: float) -> float:
        return self.A * x * (self.c - x) + self.B1 * x + self.B2 * (self.c - x) + self.C


def _check_k(n: int, k: int) -> None:
    if k < 3 or k > n:
        raise BadCycleLength(f"cycle length must lie in [3, {n}], got {k}")


def exchange_coefficients(w: WeightFunction, k: int, e1: tuple[int, int], e2: tuple[int, int]) -> ExchangeCoefficients:
    """Coefficients of the exchange quadratic for the pair ``(e1, e2)``.

    Each coefficient is a constrained cycle sum with the weights of ``e1``
    and ``e2`` factored out, so nothing is divided by a possibly-zero weight.
    """
    _check_k(w.n, k)
    e1, e2 = edge(*e1), edge(*e2)
    if e1 == e2:
        raise IdenticalEdges(f"exchange needs two distinct edges, got {e1} twice")
    for e in (e1, e2):
        if e not in w.graph.edges:
            raise EdgeNotInGraph(f"edge {e} not in host graph")
    order = sorted({v for x in w.weights for v in x} | set(e1) | set(e2))
    idx = {v: i for i, v in enumerate(order)}
    W = w.matrix(order, w.graph)
    (a1, b1), (a2, b2) = (idx[e1[0]], idx[e1[1]]), (idx[e2[0]], idx[e2[1]])
    W0 = W.copy()
    W0[a1, b1] = W0[b1, a1] = 0
    W0[a2, b2] = W0[b2, a2] = 0
    C = cycle_dp(W0, k)
    if len(order) >= k:
        B1 = path_layers(W0, [a1], k)[k][0][b1]
        B2 = path_layers(W0, [a2], k)[k][0][b2]
        A = forced_edge_path_sums(W0, a1, k, a2, b2)[b1]
    else:
        A = B1 = B2 = 0
    x1, x2 = w.weight(*e1), w.weight(*e2)
    conv = (lambda t: t) if w.exact else float
    return ExchangeCoefficients(conv(A), conv(B1), conv(B2), conv(C), x1 + x2, x1)


def optimal_split(coeffs: ExchangeCoefficients) -> tuple[float, float]:
    """Maximiser of ``g`` on ``[0, c]`` and the value there.

    With ``A = 0`` the objective is linear and all mass goes to the better
    edge; on an exact tie the current split is kept.
    """
    A, B1, B2, c = coeffs.A, coeffs.B1, coeffs.B2, coeffs.c
    if c < 0:
        raise NegativeMass(f"combined mass is negative: {c}")
    if A > 0:
        x = (A * c + B1 - B2) / (2 * A)
        x = min(max(x, 0 * c), c)
    elif B1 > B2:
        x = c
    elif B1 < B2:
        x = 0 * c
    else:
        x = coeffs.x
    return x, coeffs.g(x)


# -- optimizer --------------------------------------------------------------


@dataclass(frozen=True)
class OptimizerConfig:
    max_steps: int = 10**6
    tol: float = 1e-12
    gap_tol: float = 1e-14
    pair_strategy: PairStrategy = "sweep"
    seed: int | None = None
    escape: bool = True
    escape_noise: float = 0.1


@dataclass(frozen=True)
class TraceStep:
    """One row of the trace.

    Exchange moves have ``e1 != e2``. A row with ``e1 == e2 == (v, v)`` is a
    support-reduction jump that deleted vertex ``v``: ``x_before`` is the
    mass that sat on its edges and ``beta`` the value after re-ascent.
    """

    step: int
    e1: Edge
    e2: Edge
    x_before: float
    x_after: float
    beta: float

    @property
    def is_jump(self) -> bool:
        return self.e1 == self.e2


@dataclass(frozen=True)
class EscapeRecord:
    step: int
    deleted_vertex: int
    beta_before: float
    beta_after: float
    start: WeightFunction
    ascent: OptimizationTrace


@dataclass
class OptimizationTrace:
    k: int
    initial_beta: float
    steps: list[TraceStep] = field(default_factory=list)
    termination: str = ""
    jumps: list[EscapeRecord] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.termination in ("converged", "no-improving-pair")

    @property
    def final_beta(self) -> float:
        return self.steps[-1].beta if self.steps else self.initial_beta

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["step", "e1_u", "e1_v", "e2_u", "e2_v", "x_before", "x_after", "beta"])
        for s in self.steps:
            out.writerow([s.step, *s.e1, *s.e2, repr(s.x_before), repr(s.x_after), repr(s.beta)])
        return buf.getvalue()


class _State:
    """Dense mutable weight matrix plus the edge path sums ``f(k, u, v)``."""

    def __init__(self, w: WeightFunction, k: int):
        self.n, self.k = w.n, k
        self.W = w.to_float().matrix()
        self.refresh()

    def refresh(self) -> None:
        n, k = self.n, self.k
        order = np.flatnonzero(self.W.sum(axis=1) > 0)
        self.order = order
        self.F = np.zeros((n, n))
        if len(order) >= k:
            P = path_layers(self.W[np.ix_(order, order)], list(range(len(order))), k)[k]
            self.F[np.ix_(order, order)] = P
        # every cycle through uv is uv plus a k-vertex u-v path
        self.beta = float((self.W * self.F).sum() / (2 * k))

    def mixed(self, e1: Edge, e2: Edge) -> float:
        """``A``: cycles through both edges, product over the other ``k - 2`` edges."""
        order = sorted(set(self.order.tolist()) | set(e1) | set(e2))
        if len(order) < self.k:
            return 0.0
        idx = {v: i for i, v in enumerate(order)}
        Wl = self.W[np.ix_(order, order)].copy()
        Wl[idx[e1[0]], idx[e1[1]]] = Wl[idx[e1[1]], idx[e1[0]]] = 0.0
        return float(forced_edge_path_sums(Wl, idx[e1[0]], self.k, idx[e2[0]], idx[e2[1]])[idx[e1[1]]])

    def gap(self, e1: Edge, e2: Edge) -> float:
        """``|g'(w(e1))|`` if mass can flow in the ascent direction, else 0."""
        d = self.F[e1] - self.F[e2]
        if (d > 0 and self.W[e2] > 0) or (d < 0 and self.W[e1] > 0):
            return abs(d)
        return 0.0

    def max_gap(self, edges: list[Edge]) -> float:
        pos = [e for e in edges if self.W[e] > 0]
        if not pos:
            return 0.0
        return float(max(self.F[e] for e in edges) - min(self.F[e] for e in pos))

    def propose(self, e1: Edge, e2: Edge) -> tuple[float, float] | None:
        """Best split for the pair as ``(x_new, gain)``, or None if no ascent is possible."""
        a, b = self.W[e1], self.W[e2]
        c = a + b
        d = self.F[e1] - self.F[e2]
        if c <= 0 or d == 0 or (d > 0 and b == 0) or (d < 0 and a == 0):
            return None
        A = self.mixed(e1, e2)
        B1 = max(self.F[e1] - A * b, 0.0)
        B2 = max(self.F[e2] - A * a, 0.0)
        x, _ = optimal_split(ExchangeCoefficients(A, B1, B2, 0.0, c, a))
        if x < SNAP_TO_ZERO:
            x = 0.0
        elif c - x < SNAP_TO_ZERO:
            x = c
        delta = x - a
        gain = d * delta - A * delta * delta
        if gain <= 0:
            return None
        return x, gain

    def apply(self, e1: Edge, e2: Edge, x: float) -> None:
        c = self.W[e1] + self.W[e2]
        for (u, v), val in ((e1, x), (e2, c - x)):
            self.W[u, v] = self.W[v, u] = val
        self.refresh()

    def weight_function(self, host) -> WeightFunction:
        entries = [((u, v), float(self.W[u, v])) for u, v in combinations(range(self.n), 2) if self.W[u, v] > 0]
        return new_weight_function(self.n, entries, host=host)


def _ascend(w0: WeightFunction, k: int, config: OptimizerConfig) -> tuple[WeightFunction, OptimizationTrace]:
    """Exchange moves only, until no pair improves ``beta`` by more than ``tol``."""
    state = _State(w0, k)
    trace = OptimizationTrace(k, state.beta)
    edges = w0.graph.sorted_edges()

    def record(e1, e2, x_before, x_after):
        trace.steps.append(TraceStep(len(trace.steps) + 1, e1, e2, float(x_before), float(x_after), state.beta))

    def move(e1, e2) -> float:
        prop = state.propose(e1, e2)
        if prop is None:
            return 0.0
        x, gain = prop
        before = state.W[e1]
        state.apply(e1, e2, x)
        record(e1, e2, before, x)
        return gain

    def settled(gained: float) -> bool:
        return gained <= config.tol and state.max_gap(edges) <= config.gap_tol

    def finish(reason: str):
        trace.termination = reason
        return state.weight_function(w0.host), trace

    strategy = config.pair_strategy
    if strategy == "sweep":
        pairs = list(combinations(edges, 2))
        while True:
            gained, moved = 0.0, 0
            for e1, e2 in pairs:
                g = move(e1, e2)
                if g > 0:
                    gained += g
                    moved += 1
                    if len(trace.steps) >= config.max_steps:
                        return finish("max-steps")
            if moved == 0:
                return finish("converged" if trace.steps else "no-improving-pair")
            if settled(gained):
                return finish("converged")
    if strategy == "greedy":
        rank = {e: i for i, e in enumerate(edges)}
        while len(trace.steps) < config.max_steps:
            pos = [e for e in edges if state.W[e] > 0]
            up = max(edges, key=lambda e: (state.F[e], -rank[e]))
            down = min(pos, key=lambda e: (state.F[e], rank[e]))
            g = move(up, down) if up != down else 0.0
            if g == 0.0:
                return finish("converged" if trace.steps else "no-improving-pair")
            if settled(g):
                return finish("converged")
        return finish("max-steps")
    if strategy == "random":
        rng = np.random.default_rng(config.seed)
        window = max(1, len(edges) * (len(edges) - 1) // 2)
        while True:
            gained = 0.0
            for _ in range(window):
                i, j = sorted(rng.choice(len(edges), size=2, replace=False).tolist())
                gained += move(edges[i], edges[j])
                if len(trace.steps) >= config.max_steps:
                    return finish("max-steps")
            if state.max_gap(edges) == 0.0:
                return finish("converged" if trace.steps else "no-improving-pair")
            if settled(gained):
                return finish("converged")
    raise ValidationError(f"unknown pair strategy {strategy!r}")


def _escape(w: WeightFunction, trace: OptimizationTrace, k: int, config: OptimizerConfig) -> WeightFunction:
    """Iterated local search over support reductions.

    Every exchange slice is concave, so pairwise moves cannot leave a
    stationary point such as uniform weights on ``K_4`` (``k = 3``) or a strict
    local maximum such as uniform weights on the octahedron (``k = 5``). From
    a converged ``w``, delete one support vertex, jitter the remaining weights
    by a factor in ``[1, 1 + noise)`` to break symmetry, renormalise and
    ascend again. The first deletion that raises ``beta`` by more than ``tol``
    is kept as a jump row and the search restarts from there; it stops once
    the support has ``k`` vertices or no deletion helps.
    """
    rng = np.random.default_rng(0 if config.seed is None else config.seed)
    inner = replace(config, escape=False)
    current = trace.final_beta
    while True:
        verts = w.support_vertices()
        if len(verts) <= k:
            break
        for v in verts:
            kept = [(e, x * (1 + config.escape_noise * rng.random())) for e, x in w.items() if v not in e]
            if not kept:
                continue
            start = normalize(new_weight_function(w.n, kept, host=w.host))
            cand, t = _ascend(start, k, inner)
            if t.final_beta > current + config.tol:
                removed = float(sum(x for e, x in w.items() if v in e))
                step = len(trace.steps) + 1
                trace.steps.append(TraceStep(step, (v, v), (v, v), removed, 0.0, t.final_beta))
                trace.jumps.append(EscapeRecord(step, v, current, t.final_beta, start, t))
                trace.termination = t.termination if t.termination == "max-steps" else "converged"
                w, current = cand, t.final_beta
                break
        else:
            break
        if trace.termination == "max-steps":
            break
    return w


def optimize(w0: WeightFunction, k: int, config: OptimizerConfig | None = None) -> tuple[WeightFunction, OptimizationTrace]:
    """Exchange ascent from ``w0``, followed by support-reduction jumps when ``config.escape`` is set.

    ``beta`` is non-decreasing along the returned trace; each jump row
    carries the value reached by its own re-ascent (kept in ``trace.jumps``).
    """
    config = config or OptimizerConfig()
    if not w0.normalized:
        raise NotNormalized("optimize needs a normalized starting weight function")
    _check_k(w0.n, k)
    w, trace = _ascend(w0, k, config)
    if config.escape and trace.termination != "max-steps":
        w = _escape(w, trace, k, config)
    return w, trace


@dataclass(frozen=True)
class RestartResult:
    restart: int
    start: WeightFunction
    weights: WeightFunction
    trace: OptimizationTrace

    @property
    def beta(self) -> float:
        return self.trace.final_beta


def random_start(n: int, seed: int, restart: int) -> WeightFunction:
    return random_weight_function(n, np.random.default_rng([seed, restart]))


def restart_seed(seed: int, restart: int) -> int:
    return int(np.random.SeedSequence([seed, restart, 1]).generate_state(1)[0])


def _run_restart(args) -> RestartResult:
    n, k, seed, i, config = args
    w0 = random_start(n, seed, i)
    w, trace = optimize(w0, k, replace(config, seed=restart_seed(seed, i)))
    return RestartResult(i, w0, w, trace)


def multistart(
    n: int,
    k: int,
    restarts: int = 20,
    seed: int = 0,
    config: OptimizerConfig | None = None,
    workers: int = 1,
    escape: bool = True,
) -> list[RestartResult]:
    """Independent seeded restarts, returned in restart order.

    Restart ``i`` starts from :func:`random_start` ``(n, seed, i)`` and runs
    :func:`optimize` with seed :func:`restart_seed` ``(seed, i)``.
    """
    _check_k(n, k)
    config = replace(config or OptimizerConfig(), escape=escape)
    jobs = [(n, k, seed, i, config) for i in range(restarts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_restart, jobs))
    return [_run_restart(j) for j in jobs]


def best_result(results: list[RestartResult]) -> RestartResult:
    """Highest final ``beta``; ties go to the earliest restart."""
    return max(results, key=lambda r: (r.beta, -r.restart))


# -- stationarity -----------------------------------------------------------


@dataclass(frozen=True)
class StationarityReport:
    k: int
    mu: float
    max_f_deviation: float
    max_weight: float
    beta: float
    mu_identity_residual: float
    f_values: dict[Edge, float]
    tol: float

    @property
    def stationary(self) -> bool:
        return self.max_f_deviation <= self.tol and self.max_weight <= 1 / self.k + self.tol

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "mu": float(self.mu),
            "max_f_deviation": float(self.max_f_deviation),
            "max_weight": float(self.max_weight),
            "beta": float(self.beta),
            "mu_identity_residual": float(self.mu_identity_residual),
            "stationary": self.stationary,
            "tol": self.tol,
            "f_values": [{"u": u, "v": v, "f": float(f)} for (u, v), f in sorted(self.f_values.items())],
        }


def stationarity_check(w: WeightFunction, k: int, tol: float = 1e-9) -> StationarityReport:
    """First-order optimality diagnostics for ``w`` as a maximiser of the ``k``-cycle polynomial.

    At a maximiser every edge of positive weight has the same path sum
    ``mu = f(k, u, v)``, the polynomial equals ``mu / k``, and no weight
    exceeds ``1 / k``.
    """
    if not w.normalized:
        raise NotNormalized("stationarity_check needs a normalized weight function")
    _check_k(w.n, k)
    support = [(e, x) for e, x in w.items() if x > tol]
    if not support:
        raise EmptySupport(f"no edge has weight above {tol}")
    tables: dict[int, dict[int, object]] = {}
    f_values: dict[Edge, float] = {}
    for (u, v), _ in support:
        if u not in tables:
            tables[u] = path_sum_table(w, None, u, k)[k]
        f_values[(u, v)] = tables[u].get(v, w.zero)
    vals = [f_values[e] for e, _ in support]
    mu = sum(vals, w.zero) / len(vals)
    dev = max(abs(f - mu) for f in vals)
    b = beta(w, k)
    return StationarityReport(
        k=k,
        mu=mu,
        max_f_deviation=dev,
        max_weight=max(x for _, x in w.items()),
        beta=b,
        mu_identity_residual=abs(b - mu / k),
        f_values=f_values,
        tol=tol,
    )
