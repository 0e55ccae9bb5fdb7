"""Transfer-matrix construction for graph-family weight enumerators.

Every boundary vertex carries a state out of four: its colour (white/black)
and its external parity, the parity of black neighbours already absorbed
into the removed part of the graph. States are indexed 2*colour + parity
(white-even 0, white-odd 1, black-even 2, black-odd 3); a k-vertex boundary
is indexed base 4 with position 0 most significant.

One cut-and-glue step is the product of an evolution matrix (boundary state
extends to a full replacement-graph state, fresh vertices start at external
parity zero) and a restriction matrix (drop everything outside the next
boundary, folding dropped black neighbours into the parities). The weight
enumerator of member r is the component sum of the step matrix iterated on
the base graph's state vector; the family generating function is the prefix
plus the geometric series of the step matrix, resolved by an exact
fraction-free linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (LaurentPoly3, PolyMatrix, RatFunc3, ratfunc_normalize,
                      solve_linear_raw)
from .family import FamilySpec, Graph

WHITE_EVEN, WHITE_ODD, BLACK_EVEN, BLACK_ODD = range(4)


@dataclass(frozen=True)
class VertexState:
    """Colour (0 white, 1 black) and external parity (0 even, 1 odd)."""

    colour: int
    parity: int

    @property
    def index(self) -> int:
        return 2 * self.colour + self.parity

    @staticmethod
    def from_index(index: int) -> "VertexState":
        return VertexState(index >> 1, index & 1)


def decode_states(index: int, size: int) -> list[tuple[int, int]]:
    """Split a base-4 composite index into (colour, parity) pairs,
    position 0 most significant."""
    out = []
    for pos in range(size):
        s = (index >> (2 * (size - 1 - pos))) & 3
        out.append((s >> 1, s & 1))
    return out


def encode_states(states: Sequence[tuple[int, int]]) -> int:
    index = 0
    for colour, parity in states:
        index = (index << 2) | (colour << 1) | parity
    return index


def colouring_weight(g: Graph, colours: Sequence[int],
                     parities: Sequence[int]) -> int:
    """Number of admissible vertices: white, with even total black parity.

    The total parity of a vertex is its external parity plus the number of
    its black neighbours inside g.
    """
    if len(colours) != g.vertex_count or len(parities) != g.vertex_count:
        raise ValueError("colour/parity vectors must cover every vertex")
    masks = g.neighbour_masks()
    colour_mask = 0
    for v, c in enumerate(colours):
        if c:
            colour_mask |= 1 << v
    weight = 0
    for v in range(g.vertex_count):
        if colours[v]:
            continue
        black = bin(masks[v] & colour_mask).count("1") + parities[v]
        if black % 2 == 0:
            weight += 1
    return weight


def evolution_matrix(h: Graph, j: Graph, phi: Sequence[int]) -> PolyMatrix:
    """Evolution from boundary subgraph h into replacement graph j.

    phi[v] is the j-vertex that inherits h-vertex v. The (j-state, h-state)
    entry is the monomial x^d y^(|j|-|h|-d) with d the admissible-count
    difference, for every j-state that agrees with the h-state on phi's
    image and gives all fresh vertices external parity zero; other entries
    are zero.
    """
    if len(phi) != h.vertex_count:
        raise ValueError("phi must map every boundary vertex")
    if len(set(phi)) != len(phi):
        raise ValueError("phi must be injective")
    image = set(phi)
    fresh = [v for v in range(j.vertex_count) if v not in image]
    growth = j.vertex_count - h.vertex_count
    out = PolyMatrix.zeros(4 ** j.vertex_count, 4 ** h.vertex_count)
    for state_h in range(4 ** h.vertex_count):
        pairs = decode_states(state_h, h.vertex_count)
        w_h = colouring_weight(h, [c for c, _ in pairs], [p for _, p in pairs])
        for fill in range(1 << len(fresh)):
            j_states: list[tuple[int, int]] = [(0, 0)] * j.vertex_count
            for hv, (c, p) in enumerate(pairs):
                j_states[phi[hv]] = (c, p)
            for t, v in enumerate(fresh):
                j_states[v] = ((fill >> t) & 1, 0)
            w_j = colouring_weight(j, [c for c, _ in j_states],
                                   [p for _, p in j_states])
            delta = w_j - w_h
            state_j = encode_states(j_states)
            out.data[state_j][state_h] = LaurentPoly3.monomial(
                delta, growth - delta, 0)
    return out


def restriction_matrix(j: Graph, retained: Sequence[int]) -> PolyMatrix:
    """Restriction of graph j to the ordered vertex list ``retained``.

    0/1 matrix: a retained vertex keeps its colour and adds the black count
    of its dropped neighbours to its parity.
    """
    if len(set(retained)) != len(retained):
        raise ValueError("retained vertices must be distinct")
    if any(not 0 <= v < j.vertex_count for v in retained):
        raise ValueError("retained vertex outside the graph")
    retained_set = set(retained)
    dropped_neighbours = {v: [u for u in j.neighbours(v) if u not in retained_set]
                          for v in retained}
    one = LaurentPoly3.const(1)
    out = PolyMatrix.zeros(4 ** len(retained), 4 ** j.vertex_count)
    for state_j in range(4 ** j.vertex_count):
        pairs = decode_states(state_j, j.vertex_count)
        new_states = []
        for v in retained:
            c, p = pairs[v]
            p = (p + sum(pairs[u][0] for u in dropped_neighbours[v])) % 2
            new_states.append((c, p))
        out.data[encode_states(new_states)][state_j] = one
    return out


def initial_state_column(g: Graph, boundary: Sequence[int]) -> PolyMatrix:
    """State vector of a fully built graph g, restricted to the boundary.

    Enumerates all colourings of g (with nothing outside the graph, every
    external parity is zero), weights each by x^(admissible) y^(rest), and
    folds the result through the restriction onto the boundary.
    """
    n = g.vertex_count
    column = PolyMatrix.zeros(4 ** n, 1)
    zeros = [0] * n
    for mask in range(1 << n):
        colours = [(mask >> v) & 1 for v in range(n)]
        w = colouring_weight(g, colours, zeros)
        state = encode_states([(c, 0) for c in colours])
        column.data[state][0] = column.data[state][0] + LaurentPoly3.monomial(
            w, n - w, 0)
    return restriction_matrix(g, boundary) @ column


@dataclass
class TransferSystem:
    """Step matrix, initial vector, and prefix data of one family."""

    t: PolyMatrix
    v: PolyMatrix
    prefix_weps: tuple[LaurentPoly3, ...]
    z_shift: int
    spec: FamilySpec
    _gf: RatFunc3 | None = field(default=None, repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return self.t.rows


def build_transfer_system(spec: FamilySpec) -> TransferSystem:
    """Assemble the transfer system of a validated family description."""
    spec.validate()
    h = spec.base_graph.induced(spec.boundary)
    phi = [spec.glue_map[v] for v in spec.boundary]
    next_boundary = [spec.next_boundary_map[v] for v in spec.boundary]
    t = restriction_matrix(spec.replacement, next_boundary) @ \
        evolution_matrix(h, spec.replacement, phi)
    v = initial_state_column(spec.base_graph, spec.boundary)
    return TransferSystem(t=t, v=v, prefix_weps=spec.prefix_weps,
                          z_shift=spec.recursion_start, spec=spec)


def wep_by_iteration(sys: TransferSystem, r: int) -> LaurentPoly3:
    """Exact weight enumerator of member r by iterating the step matrix."""
    if r < 0:
        raise ValueError("member index must be nonnegative")
    if r < sys.z_shift:
        return sys.prefix_weps[r]
    vec = sys.v.column(0)
    for _ in range(r - sys.z_shift):
        vec = _apply(sys.t, vec)
    total = LaurentPoly3.zero()
    for entry in vec:
        total = total + entry
    return total


def _apply(t: PolyMatrix, vec: list[LaurentPoly3]) -> list[LaurentPoly3]:
    out = []
    for i in range(t.rows):
        acc = LaurentPoly3.zero()
        row = t.data[i]
        for k, entry in enumerate(row):
            if entry.is_zero() or vec[k].is_zero():
                continue
            acc = acc + entry * vec[k]
        out.append(acc)
    return out


def iter_weps(sys: TransferSystem, r_max: int):
    """Yield the exact weight enumerators of members 0..r_max in order."""
    for r in range(min(sys.z_shift, r_max + 1)):
        yield sys.prefix_weps[r]
    if r_max < sys.z_shift:
        return
    vec = sys.v.column(0)
    for r in range(sys.z_shift, r_max + 1):
        if r > sys.z_shift:
            vec = _apply(sys.t, vec)
        total = LaurentPoly3.zero()
        for entry in vec:
            total = total + entry
        yield total


def wep_values_by_iteration(sys: TransferSystem, x0, y0,
                            r_max: int) -> list:
    """Exact values W_r(x0, y0) for r = 0..r_max by specialised iteration.

    Same recursion as wep_by_iteration with the step matrix evaluated at
    exact rational (x0, y0); much faster for long sweeps.
    """
    x0, y0 = Fraction(x0), Fraction(y0)
    values = [w.eval_xy(x0, y0) for w in sys.prefix_weps[:r_max + 1]]
    if r_max < sys.z_shift:
        return values
    n = sys.dimension
    t_num = [[e.eval_xy(x0, y0) for e in row] for row in sys.t.data]
    vec = [e.eval_xy(x0, y0) for e in sys.v.column(0)]
    values.append(sum(vec))
    for _ in range(sys.z_shift + 1, r_max + 1):
        vec = [sum(t_num[i][k] * vec[k] for k in range(n) if t_num[i][k])
               for i in range(n)]
        values.append(sum(vec))
    return values


def family_gf(sys: TransferSystem) -> RatFunc3:
    """Closed-form generating function of the family's weight enumerators.

    Prefix members contribute explicit powers of z; from the recursion start
    on, the geometric series of the step matrix is resolved exactly through
    a fraction-free solve of (I - z T) u = v, and the generating function is
    prefix + z^start * (component sum of u), canonicalised.
    """
    if sys._gf is not None:
        return sys._gf
    n = sys.dimension
    z = LaurentPoly3.var("z")
    m = PolyMatrix.identity(n) - sys.t.scale(z)
    nums, den = solve_linear_raw(m, sys.v.column(0))
    series_num = LaurentPoly3.zero()
    for num in nums:
        series_num = series_num + num
    prefix = LaurentPoly3.zero()
    for r, w in enumerate(sys.prefix_weps):
        prefix = prefix + w.shift((0, 0, r))
    total_num = prefix * den + series_num.shift((0, 0, sys.z_shift))
    gf = ratfunc_normalize(total_num, den)
    sys._gf = gf
    return gf
