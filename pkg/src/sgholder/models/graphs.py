"""Graph-based chain constructors: cycles, hypercubes, complete and weighted graphs.

All builders return a validated FiniteChainGenerator.  Weighted graphs use
symmetric conductances w_ij >= 0 and off-diagonal rates A_ij = -w_ij / mu_i,
which satisfies detailed balance for any positive measure.
"""

from __future__ import annotations

import numpy as np

from ..errors import DetailedBalanceError, SignError
from ..spectral import FiniteChainGenerator, StateSpace, validate_generator


def cycle_graph(N: int, rate: float = 1.0) -> FiniteChainGenerator:
    """Nearest-neighbour Laplacian on the N-cycle, uniform measure."""
    if N < 2:
        raise ValueError("cycle needs at least 2 states")
    if rate <= 0:
        raise ValueError("rate must be positive")
    A = np.zeros((N, N))
    for i in range(N):
        A[i, i] += 2.0 * rate
        A[i, (i + 1) % N] -= rate
        A[i, (i - 1) % N] -= rate
    space = StateSpace(np.full(N, 1.0 / N))
    return validate_generator(space, A)


def hypercube_graph(d: int, rate: float = 1.0) -> FiniteChainGenerator:
    """Hamming-edge Laplacian on {0,1}^d, uniform measure; N = 2^d."""
    if d < 1:
        raise ValueError("hypercube dimension must be >= 1")
    if rate <= 0:
        raise ValueError("rate must be positive")
    N = 1 << d
    A = np.zeros((N, N))
    for i in range(N):
        A[i, i] = d * rate
        for b in range(d):
            A[i, i ^ (1 << b)] = -rate
    space = StateSpace(np.full(N, 1.0 / N))
    return validate_generator(space, A)


def complete_graph(N: int, rate: float = 1.0) -> FiniteChainGenerator:
    """All-to-all Laplacian K_N with unit conductances scaled by rate."""
    if N < 2:
        raise ValueError("complete graph needs at least 2 states")
    A = rate * (N * np.eye(N) - np.ones((N, N)))
    space = StateSpace(np.full(N, 1.0 / N))
    return validate_generator(space, A)


def path_graph(N: int, weights=None) -> FiniteChainGenerator:
    """Path (birth-death) Laplacian with optional per-edge weights (N-1 of them)."""
    if N < 2:
        raise ValueError("path needs at least 2 states")
    if weights is None:
        weights = np.ones(N - 1)
    edges = [(i, i + 1, float(w)) for i, w in enumerate(weights)]
    return weighted_graph(edges, mu=np.full(N, 1.0 / N), size=N)


def weighted_graph(edges, mu=None, size=None) -> FiniteChainGenerator:
    """Chain from an undirected weighted edge list [(i, j, w), ...].

    Duplicate (i, j) entries must agree in weight (the list is undirected);
    conflicting duplicates raise DetailedBalanceError, negative weights raise
    SignError.  mu defaults to the uniform measure.
    """
    edges = [(int(i), int(j), float(w)) for i, j, w in edges]
    if size is None:
        size = 1 + max(max(i, j) for i, j, _ in edges)
    if mu is None:
        mu = np.full(size, 1.0 / size)
    mu = np.asarray(mu, dtype=float)
    if mu.size != size:
        raise ValueError(f"measure has {mu.size} entries for {size} states")

    W = np.zeros((size, size))
    seen = {}
    for i, j, w in edges:
        if i == j:
            raise ValueError(f"self-loop at state {i}")
        if w < 0:
            raise SignError((i, j), f"negative edge weight at ({i}, {j})")
        key = (min(i, j), max(i, j))
        if key in seen and abs(seen[key] - w) > 1e-12 * max(abs(w), 1.0):
            raise DetailedBalanceError(key, f"conflicting weights for edge {key}")
        seen[key] = w
        W[i, j] = W[j, i] = w

    A = -W / mu[:, None]
    np.fill_diagonal(A, 0.0)
    np.fill_diagonal(A, -A.sum(axis=1))
    return validate_generator(StateSpace(mu), A)


def read_edge_list(path) -> FiniteChainGenerator:
    """Parse the text edge-list format: lines ``i j w`` plus optional ``mu v1 ... vN``."""
    edges = []
    mu = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "mu":
                mu = np.array([float(x) for x in parts[1:]])
            elif len(parts) == 3:
                edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
            else:
                raise ValueError(f"{path}:{lineno}: expected 'i j w' or 'mu ...'")
    if not edges:
        raise ValueError(f"{path}: no edges found")
    return weighted_graph(edges, mu=mu, size=None if mu is None else mu.size)
