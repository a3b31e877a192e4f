"""Shared fixtures, generators and independent oracles.

Oracles here deliberately avoid the library's packed-matrix code paths:
ranks come from plain uint8 elimination, connectivity from brute-force BFS.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from z2top.simplicial import SimplicialMap, SimplicialPair, build_pair


# -- independent GF(2) rank oracle -------------------------------------------


def oracle_rank(dense) -> int:
    """Gaussian elimination on a plain uint8 array."""
    a = (np.asarray(dense, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if a[i, c]:
                piv = i
                break
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def oracle_boundary_dense(pair: SimplicialPair, k: int) -> np.ndarray:
    """Dense relative boundary matrix built independently of the library."""
    rows = [s for s in pair.simplices_of_dim(k - 1) if s not in pair.sub]
    cols = [s for s in pair.simplices_of_dim(k) if s not in pair.sub]
    pos = {s: i for i, s in enumerate(rows)}
    m = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, s in enumerate(cols):
        for drop in range(len(s)):
            f = s[:drop] + s[drop + 1 :]
            if f in pos:
                m[pos[f], j] ^= 1
    return m


def oracle_homology_rank(pair: SimplicialPair, k: int) -> int:
    """rank H_k = dim ker d_k - rank d_{k+1}, via the dense oracle."""
    dk = oracle_boundary_dense(pair, k)
    dk1 = oracle_boundary_dense(pair, k + 1)
    n = dk.shape[1]
    return n - oracle_rank(dk) - oracle_rank(dk1) if n else 0


# -- random corpora ------------------------------------------------------------


def random_pair(rng: np.random.Generator, n_vertices=None, p_edge=0.35,
                p_triangle=0.25, p_sub=0.3) -> SimplicialPair:
    """A random small pair: graph plus some filled triangles, random sub."""
    if n_vertices is None:
        n_vertices = int(rng.integers(3, 9))
    simplices = [(v,) for v in range(n_vertices)]
    edges = []
    for a, b in itertools.combinations(range(n_vertices), 2):
        if rng.random() < p_edge:
            edges.append((a, b))
            simplices.append((a, b))
    edge_set = set(edges)
    for a, b, c in itertools.combinations(range(n_vertices), 3):
        if {(a, b), (a, c), (b, c)} <= edge_set and rng.random() < p_triangle:
            simplices.append((a, b, c))
    pair = build_pair(n_vertices, simplices)
    sub = [s for s in pair.all_simplices() if rng.random() < p_sub]
    return pair.with_sub(sub)


def complete_graph_pair(n: int) -> SimplicialPair:
    simplices = [(v,) for v in range(n)]
    simplices += list(itertools.combinations(range(n), 2))
    return build_pair(n, simplices)


def random_map_to_complete(rng: np.random.Generator, source: SimplicialPair,
                           n_target: int) -> SimplicialMap:
    """Any vertex assignment into a complete graph is simplicial."""
    target = complete_graph_pair(n_target)
    vm = rng.integers(0, n_target, source.n_vertices)
    return SimplicialMap(source.absolute(), target, [int(v) for v in vm])


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
