import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclepoly.errors import (
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
from cyclepoly.weights import (
    SimpleGraph,
    add_edge,
    delete_edge,
    delete_vertices,
    from_json_dict,
    load_weights,
    new_weight_function,
    normalize,
    random_weight_function,
    read_edge_list,
    uniform_complete_weights,
    uniform_cycle_weights,
    weighted_degree,
    write_edge_list,
)

from .conftest import cycle_entries


def test_uniform_triangle_is_normalized(uniform_triangle):
    assert uniform_triangle.normalized
    assert uniform_triangle.total == 1
    assert uniform_triangle.support() == [(0, 1), (0, 2), (1, 2)]


def test_uniform_five_cycle_is_normalized():
    w = new_weight_function(5, cycle_entries([0, 1, 2, 3, 4], 0.2))
    assert w.normalized
    assert len(w.support()) == 5


def test_unnormalized_flag():
    w = new_weight_function(3, {(0, 1): 0.5})
    assert not w.normalized


@pytest.mark.parametrize(
    "n, entries, err",
    [
        (3, {(0, 1): -0.1, (1, 2): 1.1}, NegativeWeight),
        (3, {(1, 1): 0.5}, SelfLoop),
        (3, [((0, 1), 0.5), ((1, 0), 0.5)], DuplicateEdge),
        (3, {(0, 3): 1.0}, VertexOutOfRange),
        (3, {(0, 1): float("nan")}, NonFiniteWeight),
        (3, {(0, 1): float("inf")}, NonFiniteWeight),
        (1, {}, ValidationError),
    ],
)
def test_new_weight_function_rejects(n, entries, err):
    with pytest.raises(err):
        new_weight_function(n, entries)


def test_validation_errors_are_value_errors():
    with pytest.raises(ValueError):
        new_weight_function(3, {(0, 1): -1.0})


def test_keys_must_be_host_edges():
    host = SimpleGraph.from_edges(3, [(0, 1)])
    with pytest.raises(EdgeNotInGraph):
        new_weight_function(3, {(1, 2): 1.0}, host=host)


def test_zero_entries_dropped():
    w = new_weight_function(3, {(0, 1): 1.0, (1, 2): 0.0})
    assert w.support() == [(0, 1)]
    assert w.weight(2, 1) == 0


def test_normalize_examples():
    w = normalize(new_weight_function(3, {(0, 1): 2.0, (1, 2): 2.0}))
    assert dict(w.items()) == {(0, 1): 0.5, (1, 2): 0.5}
    assert w.normalized
    w = normalize(new_weight_function(3, {(0, 1): 3.0, (0, 2): 1.0}))
    assert dict(w.items()) == {(0, 1): 0.75, (0, 2): 0.25}


def test_normalize_idempotent(uniform_triangle):
    assert normalize(uniform_triangle) == uniform_triangle
    w = normalize(new_weight_function(4, {(0, 1): 0.3, (2, 3): 0.7}))
    assert normalize(w) == w


def test_normalize_zero_total():
    with pytest.raises(ZeroTotalWeight):
        normalize(new_weight_function(3, {}))


def test_weighted_degree_examples(uniform_triangle, uniform_k4):
    assert weighted_degree(uniform_triangle, None, 0) == Fraction(2, 3)
    cyc = uniform_cycle_weights(5, [0, 1, 2, 3, 4], exact=True)
    assert all(weighted_degree(cyc, None, v) == Fraction(2, 5) for v in range(5))
    assert all(weighted_degree(uniform_k4, None, v) == Fraction(1, 2) for v in range(4))


def test_weighted_degree_on_restriction(uniform_k4):
    G = delete_vertices(uniform_k4.graph, {3})
    assert weighted_degree(uniform_k4, G, 0) == Fraction(1, 3)
    with pytest.raises(VertexNotInGraph):
        weighted_degree(uniform_k4, G, 3)


def test_delete_vertices_examples():
    K4 = SimpleGraph.complete(4)
    K3 = delete_vertices(K4, {3})
    assert K3.vertices == {0, 1, 2}
    assert K3.edges == {(0, 1), (0, 2), (1, 2)}
    assert K3.is_complete()
    assert delete_vertices(K4, set()) == K4
    C5 = SimpleGraph.from_edges(5, cycle_entries([0, 1, 2, 3, 4], 1))
    P = delete_vertices(C5, {2})
    assert P.vertices == {0, 1, 3, 4}
    assert P.edges == {(3, 4), (0, 4), (0, 1)}
    with pytest.raises(VertexNotInGraph):
        delete_vertices(P, {2})


def test_delete_edge_examples():
    K3 = SimpleGraph.complete(3)
    P = delete_edge(K3, (0, 1))
    assert P.edges == {(0, 2), (1, 2)}
    assert add_edge(P, (1, 0)) == K3
    assert delete_edge(SimpleGraph.complete(4), (0, 1)).num_edges() == 5
    with pytest.raises(EdgeNotInGraph):
        delete_edge(P, (0, 1))


@st.composite
def weight_functions(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_weight_function(n, np.random.default_rng(seed))


@settings(max_examples=60, deadline=None)
@given(weight_functions())
def test_handshake(w):
    assert abs(sum(weighted_degree(w, None, v) for v in range(w.n)) - 2) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 9), st.data())
def test_deletion_composes(n, data):
    G = SimpleGraph.complete(n)
    verts = list(range(n))
    S1 = set(data.draw(st.lists(st.sampled_from(verts), unique=True, max_size=n - 1)))
    rest = [v for v in verts if v not in S1]
    S2 = set(data.draw(st.lists(st.sampled_from(rest), unique=True, max_size=len(rest))))
    assert delete_vertices(delete_vertices(G, S1), S2) == delete_vertices(G, S1 | S2)


@settings(max_examples=60, deadline=None)
@given(weight_functions(), st.data())
def test_degree_additive(w, data):
    G = w.graph
    e = data.draw(st.sampled_from(G.sorted_edges()))
    v = data.draw(st.sampled_from(e))
    lhs = weighted_degree(w, G, v)
    rhs = weighted_degree(w, delete_edge(G, e), v) + w.weight(*e)
    assert abs(lhs - rhs) <= 1e-14


def test_json_round_trip(tmp_path):
    w = random_weight_function(6, np.random.default_rng(3))
    d = w.to_json_dict()
    assert set(d) == {"n", "normalized", "edges"}
    assert all(r["u"] < r["v"] for r in d["edges"])
    path = tmp_path / "w.json"
    path.write_text(w.to_json())
    assert load_weights(path) == w


def test_json_exact_mode(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"n": 3, "normalized": True, "edges": [{"u": 0, "v": 1, "w": 0.1}, {"u": 1, "v": 2, "w": 0.9}]}))
    w = load_weights(path, exact=True)
    assert w.weight(0, 1) == Fraction(1, 10)
    assert w.normalized


@pytest.mark.parametrize(
    "payload",
    [{"n": 3}, {"edges": []}, {"n": 3, "edges": [{"u": 0, "w": 1.0}]}, {"n": "x", "edges": []}],
)
def test_json_malformed(payload):
    with pytest.raises(ParseError):
        from_json_dict(payload)


def test_json_requires_ordered_pairs():
    with pytest.raises(ValidationError):
        from_json_dict({"n": 3, "edges": [{"u": 2, "v": 1, "w": 1.0}]})


def test_invalid_json_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_weights(path)


def test_edge_list_round_trip():
    G = delete_vertices(SimpleGraph.complete(5), {1})
    text = write_edge_list(G)
    assert text.splitlines()[0] == "5 6"
    H = read_edge_list(text)
    assert H.edges == G.edges


@pytest.mark.parametrize("text", ["", "3 2\n0 1\n", "3 1\n0 x\n"])
def test_edge_list_malformed(text):
    with pytest.raises(ParseError):
        read_edge_list(text)


def test_matrix_and_max_weight_edge():
    w = new_weight_function(4, {(0, 1): 0.4, (2, 3): 0.4, (1, 2): 0.2})
    M = w.matrix()
    assert M.shape == (4, 4)
    assert np.allclose(M, M.T)
    assert M[1, 0] == pytest.approx(0.4)
    assert w.max_weight_edge() == ((0, 1), 0.4)


def test_uniform_complete_weights():
    w = uniform_complete_weights(5, exact=True)
    assert w.normalized
    assert set(w.weights.values()) == {Fraction(1, 10)}
    assert len(list(itertools.combinations(range(5), 2))) == len(w.support())
