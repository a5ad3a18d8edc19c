"""Numerical certificates for the bound ``mu <= 1/k^(k-1)``.

The argument walks a greedy vertex sequence ``v1, v2, ...`` from one end of
the heaviest edge ``v0 v1`` and peels path sums apart one vertex at a time:

* ``G_1`` is the host with the edge ``v0 v1`` removed and ``G_i`` (``i >= 2``)
  is the host with ``v1, ..., v_{i-1}`` removed;
* ``v_j`` maximises ``f_{G_j}(r - j + 1, x, u)`` over ``x``, so
  ``f_{G_1}(r, v1, u) <= d_{G_1}(v1) ... d_{G_{t-1}}(v_{t-1}) f_{G_t}(r - t + 1, v_t, u)``;
* path sums from a vertex obey the AM-GM bound ``f(r, v) <= (W / (r - 1))^(r - 1)``.

Every displayed inequality is evaluated and stored with its slack
(``rhs - lhs``), so a violated certificate points at the failing step.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .cycles import path_sum, path_sum_table
from .errors import BadPathLength, EmptySupport, IdenticalVertices, NotNormalized, NotStationary
from .exchange import stationarity_check
from .weights import SimpleGraph, WeightFunction, delete_edge, delete_vertices, total_weight, weighted_degree

CASE_TOL = 1e-12


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self):
        return self.rhs - self.lhs

    def to_json_dict(self) -> dict:
        return {"name": self.name, "lhs": float(self.lhs), "rhs": float(self.rhs), "slack": float(self.slack)}


@dataclass(frozen=True)
class GreedyStep:
    t: int
    vertex: int
    degree: float  # d_{G_t}(v_t)
    f_value: float  # f_{G_t}(r - t + 1, v_t, u)
    lhs: float
    rhs: float
    step_slack: float | None  # d_t * f_{t+1} - f_t; None on the last step

    @property
    def slack(self):
        return self.rhs - self.lhs


@dataclass(frozen=True)
class GreedySequenceCertificate:
    r: int
    v1: int
    u: int
    sequence: tuple[int, ...]  # v2, ..., v_{r-1}
    steps: tuple[GreedyStep, ...]  # t = 1, ..., r - 1
    tie_break: str = "smallest vertex index"

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.v1, *self.sequence)

    @property
    def min_slack(self):
        return min(s.slack for s in self.steps)

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "v1": self.v1,
            "u": self.u,
            "sequence": list(self.sequence),
            "tie_break": self.tie_break,
            "steps": [
                {
                    "t": s.t,
                    "vertex": s.vertex,
                    "degree": float(s.degree),
                    "f": float(s.f_value),
                    "lhs": float(s.lhs),
                    "rhs": float(s.rhs),
                    "slack": float(s.slack),
                }
                for s in self.steps
            ],
        }


def _peeled_graph(host: SimpleGraph, first: tuple[int, int], removed: list[int]) -> SimpleGraph:
    """``G_1 = host - first`` when nothing is removed yet, else ``host - removed``."""
    if not removed:
        return delete_edge(host, first) if host.has_edge(*first) else host
    return delete_vertices(host, removed)


def greedy_sequence(w: WeightFunction, r: int, v1: int, u: int) -> GreedySequenceCertificate:
    """Build ``v2, ..., v_{r-1}`` by the argmax rule and evaluate every step of the product bound.

    Ties in the argmax go to the smallest vertex label; ``u`` itself is never
    chosen.
    """
    host = w.graph
    if v1 == u:
        raise IdenticalVertices(f"v1 and u must differ, got {u} twice")
    if not 3 <= r <= len(host.vertices):
        raise BadPathLength(f"r must lie in [3, {len(host.vertices)}], got {r}")
    chosen = [v1]
    graphs = [_peeled_graph(host, (v1, u), [])]
    for j in range(2, r):
        G = _peeled_graph(host, (v1, u), chosen)
        length = r - j + 1
        row = path_sum_table(w, G, u, length)[length]
        candidates = sorted(G.vertices - {u})
        best = max(candidates, key=lambda x: (row.get(x, w.zero), -x))
        chosen.append(best)
        graphs.append(G)

    degrees = [weighted_degree(w, graphs[t], chosen[t]) for t in range(r - 1)]
    fvals = [path_sum(w, graphs[t], r - t, chosen[t], u) for t in range(r - 1)]
    lhs = fvals[0]
    steps = []
    prod = w.zero + 1
    for t in range(r - 1):
        step_slack = degrees[t] * fvals[t + 1] - fvals[t] if t + 1 < r - 1 else None
        steps.append(GreedyStep(t + 1, chosen[t], degrees[t], fvals[t], lhs, prod * fvals[t], step_slack))
        prod = prod * degrees[t]
    return GreedySequenceCertificate(r, v1, u, tuple(chosen[1:]), tuple(steps))


def path_amgm_bound(w: WeightFunction, r: int, H: SimpleGraph | None = None):
    """``(W_H / (r - 1))^(r - 1)`` with ``W_H`` the total weight on ``H``."""
    return (total_weight(w, H) / (r - 1)) ** (r - 1)


def verify_lemma33(w: WeightFunction, r: int, v: int, H: SimpleGraph | None = None):
    """Slack ``(W / (r - 1))^(r - 1) - f_H(r, v)``; nonnegative when the bound holds."""
    G = w.graph if H is None else H
    if not 2 <= r <= len(G.vertices):
        raise BadPathLength(f"r must lie in [2, {len(G.vertices)}], got {r}")
    row = path_sum_table(w, G, v, r)[r]
    f = sum((row[x] for x in sorted(row)), w.zero)
    return path_amgm_bound(w, r, H) - f


def amgm(values: list) -> Inequality:
    """``prod(values) <= mean(values)^m``; the empty product is 1 on both sides."""
    m = len(values)
    prod = math.prod(values, start=1)
    if m == 0:
        return Inequality("amgm", prod, 1)
    return Inequality("amgm", prod, (sum(values) / m) ** m)


@dataclass(frozen=True)
class MuBoundCertificate:
    k: int
    v0: int
    v1: int
    case: int
    t: int | None
    sequence: tuple[int, ...]  # v1, ..., v_{k-1}
    degrees: tuple  # d_{G_i}(v_i), i = 1, ..., k - 2
    degree_prefix_sums: tuple
    inequalities: tuple[Inequality, ...]
    mu: float
    bound: float
    stationary: bool
    equality_cycle: bool = False
    greedy: GreedySequenceCertificate | None = field(default=None, compare=False)

    @property
    def slack(self):
        return self.bound - self.mu

    @property
    def min_slack(self):
        return min(q.slack for q in self.inequalities)

    def inequality(self, name: str) -> Inequality:
        for q in self.inequalities:
            if q.name == name:
                return q
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "v0": self.v0,
            "v1": self.v1,
            "case": self.case,
            "t": self.t,
            "sequence": list(self.sequence),
            "degrees": [float(d) for d in self.degrees],
            "degree_prefix_sums": [float(s) for s in self.degree_prefix_sums],
            "mu": float(self.mu),
            "bound": float(self.bound),
            "slack": float(self.slack),
            "stationary": self.stationary,
            "equality_cycle": self.equality_cycle,
            "chain": [q.to_json_dict() for q in self.inequalities],
            "greedy": self.greedy.to_json_dict() if self.greedy else None,
        }


def certify_mu_bound(w: WeightFunction, k: int, tol: float = 1e-9) -> MuBoundCertificate:
    """Evaluate the Case 1 / Case 2 argument bounding ``mu`` on ``w``.

    ``mu`` is taken as ``f(k, v1, v0)`` for the heaviest edge ``v0 v1``
    (``v0 < v1``, lexicographically smallest on ties). Inputs that fail the
    stationarity check still get a certificate, flagged and with a warning.
    """
    if not w.weights:
        raise EmptySupport("weight function has empty support")
    if not w.normalized:
        raise NotNormalized("certify_mu_bound needs a normalized weight function")
    stationary = stationarity_check(w, k, tol).stationary
    if not stationary:
        warnings.warn(f"weight function is not stationary for k={k}; certificate is advisory", NotStationary, stacklevel=2)

    exact = w.exact
    one = Fraction(1) if exact else 1.0

    def frac(a: int, b: int):
        return Fraction(a, b) if exact else a / b

    (v0, v1), w01 = w.max_weight_edge()
    greedy = greedy_sequence(w, k, v1, v0)
    seq = greedy.vertices
    d = [s.degree for s in greedy.steps]
    f = [s.f_value for s in greedy.steps]
    mu = greedy.steps[0].lhs
    bound = frac(1, k ** (k - 1))
    prefix = []
    acc = 0 * one
    for x in d[: k - 2]:
        acc = acc + x
        prefix.append(acc)

    ineqs: list[Inequality] = []
    if prefix[-1] <= frac(k - 2, k) + CASE_TOL:
        case, t = 1, None
        head = d[: k - 2]
        ineqs.append(Inequality(f"greedy-product[t={k - 1}]", mu, math.prod(head, start=one) * f[k - 2]))
        am = amgm(head)
        ineqs.append(Inequality("amgm[d_1..d_k-2]", am.lhs, am.rhs))
        ineqs.append(Inequality("case1-hypothesis", am.rhs, frac(1, k ** (k - 2))))
        ineqs.append(Inequality("edge-cap[w(v_k-1 v0) <= 1/k]", f[k - 2], frac(1, k)))
        cycle = list(seq) + [v0]
        cyc_w = [w01] + [w.weight(cycle[i], cycle[i + 1]) for i in range(k - 1)]
        equality = all(abs(x - frac(1, k)) <= CASE_TOL for x in cyc_w)
    else:
        case = 2
        t = next(i for i in range(1, k - 1) if prefix[i - 1] > frac(i, k) + CASE_TOL)
        before = d[: t - 1]
        ineqs.append(Inequality(f"greedy-product[t={t}]", mu, math.prod(before, start=one) * f[t - 1]))
        am = amgm(before)
        ineqs.append(Inequality(f"amgm[d_1..d_{t - 1}]", am.lhs, am.rhs))
        ineqs.append(Inequality("case2-minimality", am.rhs, frac(1, k ** (t - 1))))

        vt = seq[t - 1]
        Gt1 = delete_vertices(w.graph, seq[:t])
        m = k - t - 1
        row = path_sum_table(w, Gt1, v0, k - t)[k - t]
        split = sum((w.weight(vt, x) * row[x] for x in sorted(row)), 0 * one)
        f_from_v0 = sum((row[x] for x in sorted(row)), 0 * one)
        W_next = total_weight(w, Gt1)
        amgm_rhs = (W_next / m) ** m
        merged = ((w01 + W_next) / (k - t)) ** (k - t)
        ineqs.append(Inequality("split-first-edge", f[t - 1], split))
        ineqs.append(Inequality("max-weight-factor", split, w01 * f_from_v0))
        ineqs.append(Inequality(f"path-amgm[G_{t + 1}]", f_from_v0, amgm_rhs))
        ineqs.append(Inequality("amgm-merge", w01 * amgm_rhs, merged))
        ineqs.append(Inequality("mass-budget", w01 + W_next, one - prefix[t - 1]))
        ineqs.append(Inequality("case2-threshold", one - prefix[t - 1], frac(k - t, k)))
        ineqs.append(Inequality("tail-bound", merged, frac(1, k ** (k - t))))
        equality = False
    ineqs.append(Inequality("mu-bound", mu, bound))
    return MuBoundCertificate(
        k=k,
        v0=v0,
        v1=v1,
        case=case,
        t=t,
        sequence=tuple(seq),
        degrees=tuple(d[: k - 2]),
        degree_prefix_sums=tuple(prefix),
        inequalities=tuple(ineqs),
        mu=mu,
        bound=bound,
        stationary=stationary,
        equality_cycle=equality,
        greedy=greedy,
    )
