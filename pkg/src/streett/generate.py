"""Seeded random instances."""
from __future__ import annotations

import random

from .model import MDPModel, StreettSpec


def _geometric(rng: random.Random, p_continue: float = 0.5) -> int:
    size = 0
    while rng.random() < p_continue:
        size += 1
    return size


def random_instance(
    rng: random.Random,
    n: int,
    m: int,
    k: int,
    *,
    p_random: float = 0.0,
    l_size: int | None = None,
    u_size: int | None = None,
) -> tuple[MDPModel, StreettSpec]:
    """Random MDP with ``m`` distinct edges and ``k`` pairs.

    Each vertex is random with probability ``p_random``.  Random sinks are
    repaired by adding one out-edge, so the result may have a few more than
    ``m`` edges.  Pair sets have geometric sizes (mean 1) unless ``l_size`` /
    ``u_size`` fix them.
    """
    if n <= 0:
        raise ValueError("need at least one vertex")
    if m > n * n:
        raise ValueError(f"infeasible: {m} edges requested but only {n * n} exist on {n} vertices")
    owner = [rng.random() < p_random for _ in range(n)]
    codes = rng.sample(range(n * n), m)
    edges = [divmod(c, n) for c in codes]
    has_out = bytearray(n)
    for u, _ in edges:
        has_out[u] = 1
    for v in range(n):
        if owner[v] and not has_out[v]:
            edges.append((v, rng.randrange(n)))
    pairs = []
    for _ in range(k):
        sizes = []
        for fixed in (l_size, u_size):
            s = fixed if fixed is not None else _geometric(rng)
            sizes.append(min(n, s))
        pairs.append((rng.sample(range(n), sizes[0]), rng.sample(range(n), sizes[1])))
    return MDPModel(n, owner, edges), StreettSpec.from_sets(pairs, n)


def small_instance(rng: random.Random, max_n: int, *, mdp: bool, max_k: int = 4) -> tuple[MDPModel, StreettSpec]:
    """Instance for differential trials: ``n <= max_n``, up to ``4n`` edges."""
    n = rng.randint(1, max_n)
    m = rng.randint(0, min(n * n, 4 * n))
    k = rng.randint(0, max_k)
    return random_instance(rng, n, m, k, p_random=rng.choice((0.2, 0.5)) if mdp else 0.0)
