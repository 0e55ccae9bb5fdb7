"""Shared fixtures and a minimal independent oracle for expected values.

``brute_sectors`` deliberately repeats the colouring-count definition in
plain Python, without touching any package code, so test expectations are
derived independently of the implementation under test.
"""

from __future__ import annotations

import pytest

from sldgf import BUILTIN_FAMILIES, build_transfer_system, builtin


def brute_sectors(n: int, edges) -> tuple[int, ...]:
    """Sector lengths of the graph state on n vertices with the given edges,
    by direct enumeration of all 2^n colourings."""
    nbrs = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    counts = [0] * (n + 1)
    for mask in range(1 << n):
        admissible = 0
        for v in range(n):
            if (mask >> v) & 1:
                continue
            black = sum((mask >> u) & 1 for u in nbrs[v])
            if black % 2 == 0:
                admissible += 1
        counts[n - admissible] += 1
    return tuple(counts)


def wep_terms_from_sectors(sectors) -> dict:
    """{(e_x, e_y, 0): coefficient} form of a sector tuple's enumerator."""
    n = len(sectors) - 1
    return {(n - k, k, 0): a for k, a in enumerate(sectors) if a}


@pytest.fixture(scope="session")
def systems():
    return {name: build_transfer_system(builtin(name))
            for name in BUILTIN_FAMILIES}
