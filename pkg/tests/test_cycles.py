import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclepoly.cycles import (
    beta,
    beta_cycles,
    beta_via_identity,
    complete_graph_cycle_count,
    count_cycles,
    enumerate_cycles,
    path_sum,
    path_sum_from,
    path_sum_table,
)
from cyclepoly.errors import BadCycleLength, BadPathLength, IdenticalVertices, VertexNotInGraph
from cyclepoly.weights import (
    SimpleGraph,
    delete_edge,
    delete_vertices,
    new_weight_function,
    random_weight_function,
    uniform_cycle_weights,
)

from .conftest import brute_beta, brute_path_sum, exact_random_weights, rel_close, sparse_random_weights

METHODS = ["enumeration", "subset-dp", "identity"]


# -- path sums --------------------------------------------------------------


@pytest.mark.parametrize("method", ["enumeration", "subset-dp"])
def test_path_sum_two_vertices_is_edge_weight(uniform_k4, method):
    assert path_sum(uniform_k4, None, 2, 0, 1, method) == Fraction(1, 6)
    w = new_weight_function(4, {(0, 1): 1.0})
    assert path_sum(w, None, 2, 2, 3, method) == 0


@pytest.mark.parametrize("method", ["enumeration", "subset-dp"])
def test_path_sum_k4(uniform_k4, method):
    assert path_sum(uniform_k4, None, 3, 0, 1, method) == Fraction(1, 18)


@pytest.mark.parametrize("method", ["enumeration", "subset-dp"])
def test_path_sum_hamiltonian_on_cycle(method):
    w = uniform_cycle_weights(5, [0, 1, 2, 3, 4], exact=True)
    assert path_sum(w, None, 5, 0, 1, method) == Fraction(1, 5**4)
    assert path_sum(w, None, 5, 0, 2, method) == 0


def test_path_sum_from_examples(uniform_k4):
    assert path_sum_from(uniform_k4, None, 2, 0) == Fraction(1, 2)
    assert path_sum_from(uniform_k4, None, 3, 0) == Fraction(1, 6)
    assert path_sum_from(uniform_k4, None, 3, 0, method="enumeration") == Fraction(1, 6)
    w = new_weight_function(5, {(1, 2): 0.5, (2, 3): 0.5})
    assert path_sum_from(w, None, 3, 0) == 0
    assert path_sum_from(w, None, 2, 4) == 0


def test_path_sum_errors(uniform_k4):
    with pytest.raises(BadPathLength):
        path_sum(uniform_k4, None, 1, 0, 1)
    with pytest.raises(BadPathLength):
        path_sum(uniform_k4, None, 5, 0, 1)
    with pytest.raises(IdenticalVertices):
        path_sum(uniform_k4, None, 3, 2, 2)
    G = delete_vertices(uniform_k4.graph, {3})
    with pytest.raises(VertexNotInGraph):
        path_sum(uniform_k4, G, 2, 0, 3)
    with pytest.raises(BadPathLength):
        path_sum(uniform_k4, G, 4, 0, 1)


def test_path_sum_respects_restriction(uniform_k4):
    G = delete_edge(uniform_k4.graph, (0, 2))
    assert path_sum(uniform_k4, G, 3, 0, 1) == Fraction(1, 36)
    assert path_sum(uniform_k4, G, 2, 0, 2) == 0


def test_path_sums_against_brute_force(rng):
    for _ in range(40):
        n = int(rng.integers(3, 7))
        w = exact_random_weights(n, rng, density=0.7)
        u, v = (int(x) for x in rng.choice(n, 2, replace=False))
        removed = {int(x) for x in rng.choice([x for x in range(n) if x not in (u, v)], int(rng.integers(0, n - 1)), replace=False)}
        H = delete_vertices(w.graph, removed)
        for j in range(2, len(H.vertices) + 1):
            want = brute_path_sum(w, j, u, v, removed)
            assert path_sum(w, H, j, u, v, "enumeration") == want
            assert path_sum(w, H, j, u, v, "subset-dp") == want


def test_path_sum_table_matches_single_queries(rng):
    w = random_weight_function(7, rng)
    table = path_sum_table(w, None, 2, 7)
    for j in range(2, 8):
        for x in range(7):
            if x != 2:
                assert rel_close(table[j][x], path_sum(w, None, j, 2, x, "enumeration"), 1e-12)


# -- cycle polynomial -------------------------------------------------------


@pytest.mark.parametrize("method", METHODS)
def test_beta_examples(uniform_triangle, uniform_k4, method):
    assert beta(uniform_triangle, 3, method) == Fraction(1, 27)
    assert beta(uniform_k4, 3, method) == Fraction(1, 54)
    w = uniform_cycle_weights(5, [0, 1, 2, 3, 4], exact=True)
    assert beta(w, 5, method) == Fraction(1, 3125)


@pytest.mark.parametrize("k", range(3, 8))
def test_uniform_cycle_equality_value(k):
    cycle = list(range(k))
    assert beta_via_identity(uniform_cycle_weights(k + 1, cycle, exact=True), k) == Fraction(1, k**k)
    assert rel_close(beta(uniform_cycle_weights(k + 1, cycle), k), 1 / k**k, 1e-15)


def test_beta_cycles_value_object(uniform_triangle):
    val = beta_cycles(uniform_triangle, 3, "enumeration")
    assert val.k == 3 and val.method == "enumeration"
    assert float(val) == pytest.approx(1 / 27)


@pytest.mark.parametrize("method", METHODS)
def test_beta_bad_length(uniform_k4, method):
    with pytest.raises(BadCycleLength):
        beta(uniform_k4, 2, method)
    with pytest.raises(BadCycleLength):
        beta(uniform_k4, 5, method)


def test_beta_exact_against_brute_force(rng):
    for _ in range(30):
        n = int(rng.integers(3, 7))
        w = exact_random_weights(n, rng, density=0.8)
        for k in range(3, n + 1):
            want = brute_beta(w, k)
            for m in METHODS:
                assert beta(w, k, m) == want, (n, k, m)


def test_enumeration_yields_canonical_cycles(uniform_k4):
    seen = [c for c, _ in enumerate_cycles(uniform_k4, 4)]
    assert len(seen) == 3
    assert all(c[0] == min(c) and c[1] < c[-1] for c in seen)


def test_engines_agree_and_identity_holds():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(4, 10))
        k = int(rng.integers(3, n + 1))
        w = random_weight_function(n, rng)
        b_enum = beta(w, k, "enumeration")
        b_dp = beta(w, k, "subset-dp")
        assert rel_close(b_enum, b_dp, 1e-12)
        assert abs(b_enum - beta_via_identity(w, k)) <= 1e-12 * max(1.0, b_enum)


def test_sparse_support_agreement(rng):
    for _ in range(50):
        n = int(rng.integers(4, 11))
        w = sparse_random_weights(n, rng, density=0.35)
        for k in range(3, min(n, 7) + 1):
            assert rel_close(beta(w, k, "enumeration"), beta(w, k, "subset-dp"), 1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(4, 7), st.integers(0, 2**32 - 1), st.data())
def test_monotone_in_each_weight(n, seed, data):
    rng = np.random.default_rng(seed)
    w = sparse_random_weights(n, rng)
    k = data.draw(st.integers(3, n))
    e = data.draw(st.sampled_from(list(itertools.combinations(range(n), 2))))
    bump = data.draw(st.floats(0, 1))
    bigger = w.replace({e: w.weight(*e) + bump})
    assert beta(bigger, k) >= beta(w, k) - 1e-15


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 8), st.integers(0, 2**32 - 1), st.data())
def test_relabeling_invariance(n, seed, data):
    rng = np.random.default_rng(seed)
    w = random_weight_function(n, rng)
    perm = data.draw(st.permutations(range(n)))
    k = data.draw(st.integers(3, n))
    relabeled = new_weight_function(n, {(perm[u], perm[v]): x for (u, v), x in w.items()})
    assert rel_close(beta(w, k), beta(relabeled, k), 1e-12)
    u, v = data.draw(st.lists(st.sampled_from(range(n)), min_size=2, max_size=2, unique=True))
    assert rel_close(path_sum(w, None, k, u, v), path_sum(relabeled, None, k, perm[u], perm[v]), 1e-12)
    G = SimpleGraph.from_edges(n, [e for e, x in w.items() if x > 1 / n**2])
    Gp = SimpleGraph.from_edges(n, [(perm[a], perm[b]) for a, b in G.edges])
    assert count_cycles(G, k) == count_cycles(Gp, k)


def test_upper_bound_witness():
    rng = np.random.default_rng(5)
    worst = math.inf
    for _ in range(1000):
        n = int(rng.integers(6, 9))
        w = random_weight_function(n, rng)
        for k in range(3, 7):
            worst = min(worst, 1 / k**k - beta(w, k))
    assert worst >= -1e-12


# -- unweighted counting ----------------------------------------------------


def test_count_cycles_examples():
    assert count_cycles(SimpleGraph.complete(4), 3) == 4
    assert count_cycles(SimpleGraph.complete(5), 5) == 12
    C6 = SimpleGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    assert count_cycles(C6, 6) == 1
    assert count_cycles(C6, 3) == 0
    with pytest.raises(BadCycleLength):
        count_cycles(C6, 2)


@pytest.mark.parametrize("n", range(3, 10))
def test_count_cycles_complete_closed_form(n):
    K = SimpleGraph.complete(n)
    for length in range(3, n + 1):
        want = math.factorial(n) // (2 * length * math.factorial(n - length))
        assert complete_graph_cycle_count(n, length) == want
        assert count_cycles(K, length) == want


def test_count_cycles_petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    P = SimpleGraph.from_edges(10, outer + spokes + inner)
    assert [count_cycles(P, length) for length in range(3, 11)] == [0, 0, 12, 10, 0, 15, 20, 0]
