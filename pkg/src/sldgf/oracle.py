"""Two independent brute-force sector-length computations.

Both oracles sweep all 2^n bitmasks in plain binary order, with the inner
per-vertex work vectorised over mask blocks. They share no admissibility or
weight logic: the first counts colourings by their admissible-vertex count,
the second builds stabilizer-group elements symplectically and counts them
by Hamming weight. Agreement of the two is the ground truth every symbolic
result is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .family import SLD, Graph

DEFAULT_VERTEX_CAP = 24
_BLOCK_BITS = 20


class VertexCapExceeded(ValueError):
    """Graph too large for a 2^n sweep under the configured cap."""


@dataclass(frozen=True)
class PauliString:
    """Symplectic (x_bits, z_bits) representation of an n-qubit Pauli
    operator; phases are ignored, only supports matter."""

    n: int
    x_bits: int
    z_bits: int

    @property
    def weight(self) -> int:
        mask = (1 << self.n) - 1
        return bin((self.x_bits | self.z_bits) & mask).count("1")


def stabilizer_element(g: Graph, subset_mask: int) -> PauliString:
    """Product of the graph-state stabilizer generators picked out by
    subset_mask (generator v acts as X on v and Z on its neighbours)."""
    masks = g.neighbour_masks()
    z_bits = 0
    for v in range(g.vertex_count):
        if bin(subset_mask & masks[v]).count("1") % 2:
            z_bits |= 1 << v
    return PauliString(g.vertex_count, subset_mask, z_bits)


def _check_cap(g: Graph, cap: int) -> None:
    if g.vertex_count > cap:
        raise VertexCapExceeded(
            f"{g.vertex_count} vertices exceed the brute-force cap of {cap}")


def sld_bruteforce_colouring(g: Graph, cap: int = DEFAULT_VERTEX_CAP) -> SLD:
    """Sector lengths by enumerating black/white colourings.

    A vertex is admissible when it is white and has an even number of black
    neighbours; a colouring with w admissible vertices increments A_(n-w).
    """
    _check_cap(g, cap)
    n = g.vertex_count
    if n == 0:
        return SLD((1,))
    masks = np.zeros(n, dtype=np.uint64)
    for a, b in g.edges:
        masks[a] |= np.uint64(1 << b)
        masks[b] |= np.uint64(1 << a)
    counts = np.zeros(n + 1, dtype=np.int64)
    block = 1 << min(_BLOCK_BITS, n)
    for start in range(0, 1 << n, block):
        colouring = np.arange(start, start + block, dtype=np.uint64)
        admissible = np.zeros(block, dtype=np.int64)
        for v in range(n):
            white = (colouring >> np.uint64(v)) & np.uint64(1) == 0
            black_neighbours = np.bitwise_count(colouring & masks[v])
            admissible += (white & (black_neighbours % 2 == 0)).astype(np.int64)
        counts += np.bincount(admissible, minlength=n + 1)
    sectors = tuple(int(counts[n - k]) for k in range(n + 1))
    return SLD(sectors)


def sld_bruteforce_stabilizer(g: Graph, cap: int = DEFAULT_VERTEX_CAP) -> SLD:
    """Sector lengths by enumerating the stabilizer group.

    The generator for vertex i acts as X on i and Z on its neighbours; the
    product over a generator subset S has X-support S and Z-support given by
    neighbour-count parities. A_k counts elements of Hamming weight k
    (phases are irrelevant to the weight).
    """
    _check_cap(g, cap)
    n = g.vertex_count
    if n == 0:
        return SLD((1,))
    neighbour_bits = np.zeros(n, dtype=np.uint64)
    for a, b in g.edges:
        neighbour_bits[a] |= np.uint64(1 << b)
        neighbour_bits[b] |= np.uint64(1 << a)
    counts = np.zeros(n + 1, dtype=np.int64)
    block = 1 << min(_BLOCK_BITS, n)
    for start in range(0, 1 << n, block):
        subset = np.arange(start, start + block, dtype=np.uint64)
        support = np.zeros(block, dtype=np.int64)
        for q in range(n):
            x_bit = (subset >> np.uint64(q)) & np.uint64(1) == 1
            z_bit = np.bitwise_count(subset & neighbour_bits[q]) % 2 == 1
            support += (x_bit | z_bit).astype(np.int64)
        counts += np.bincount(support, minlength=n + 1)
    return SLD(tuple(int(c) for c in counts))
