"""Shared fixtures and a permutation-based oracle that shares no code with the engines."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from cyclepoly.weights import WeightFunction, new_weight_function

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_beta(w: WeightFunction, k: int):
    """Sum of weight products over vertex sequences closing into a k-cycle, divided by 2k."""
    total = w.zero
    for seq in itertools.permutations(range(w.n), k):
        p = w.zero + 1
        for i in range(k):
            p = p * w.weight(seq[i], seq[(i + 1) % k])
            if not p:
                break
        total = total + p
    return total / (2 * k)


def brute_path_sum(w: WeightFunction, j: int, u: int, v: int, removed=()):
    """Ordered u..v paths with j vertices on K_n minus ``removed``; each path is seen once."""
    others = [x for x in range(w.n) if x not in (u, v) and x not in removed]
    total = w.zero
    for mid in itertools.permutations(others, j - 2):
        seq = (u, *mid, v)
        p = w.zero + 1
        for a, b in zip(seq, seq[1:]):
            p = p * w.weight(a, b)
        total = total + p
    return total


def exact_random_weights(n: int, rng: np.random.Generator, density: float = 1.0) -> WeightFunction:
    """Normalized rational weights with small denominators; roughly ``density`` of the edges are positive."""
    entries = {}
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < density:
            entries[(u, v)] = Fraction(int(rng.integers(1, 10)))
    if not entries:
        entries[(0, 1)] = Fraction(1)
    s = sum(entries.values())
    return new_weight_function(n, {e: x / s for e, x in entries.items()}, exact=True)


def sparse_random_weights(n: int, rng: np.random.Generator, density: float = 0.6) -> WeightFunction:
    entries = {e: float(rng.random()) for e in itertools.combinations(range(n), 2) if rng.random() < density}
    if not entries:
        entries[(0, 1)] = 1.0
    s = sum(entries.values())
    return new_weight_function(n, {e: x / s for e, x in entries.items()})


def rel_close(a, b, rel: float) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(float(a)), abs(float(b)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def uniform_triangle():
    return new_weight_function(3, {(0, 1): Fraction(1, 3), (0, 2): Fraction(1, 3), (1, 2): Fraction(1, 3)}, exact=True)


@pytest.fixture
def uniform_k4():
    return new_weight_function(4, {e: Fraction(1, 6) for e in itertools.combinations(range(4), 2)}, exact=True)


def cycle_entries(cycle, value):
    k = len(cycle)
    return {(cycle[i], cycle[(i + 1) % k]): value for i in range(k)}


