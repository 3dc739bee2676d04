"""Brute-force distance oracles, independent of the constructive walks.

Three notions, three engines. Skeleton distance runs BFS on the vertex
graph (neighbors generated on demand by insertion pivots when the
instance is non-degenerate, by pairwise adjacency otherwise). The
maximal-step distance runs BFS over exact flow states. The unrestricted
circuit distance reduces to linear algebra: a difference vector is
reachable in k unrestricted steps iff it lies in the span of at most k
circuits, since orientations absorb signs and zero coefficients shrink
the set. The span search works in kernel coordinates, dimension
(m-1)(n-1), with a fraction-free integer echelon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .core import (
    Assignment,
    Instance,
    Matrix,
    ResourceLimitError,
    TransportError,
    UnreachableCaseError,
)
from .circuits import CircuitSet, apply_step, enumerate_circuits, max_step
from .polytope import (
    VertexSet,
    are_adjacent,
    enumerate_vertices,
    is_nondegenerate,
    vertex_neighbors,
)


@dataclass(frozen=True)
class DistanceTable:
    """Distances for vertex pairs of one instance under one kind.

    Rows are (source index, target index, distance) into the vertex set.
    """

    kind: str
    verts: VertexSet
    pairs: tuple[tuple[int, int, int], ...]
    _map: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._map.update({(a, b): d for a, b, d in self.pairs})

    @property
    def diameter(self) -> int:
        return max((d for _, _, d in self.pairs), default=0)

    def distance(self, a: int, b: int) -> int:
        if (a, b) in self._map:
            return self._map[(a, b)]
        return self._map[(b, a)]


def neighbor_graph(verts: VertexSet) -> list[list[int]]:
    """Adjacency lists over vertex indices.

    Non-degenerate: one pivot per absent edge gives all neighbors.
    Degenerate: fall back to pairwise unique-cycle tests.
    """
    if is_nondegenerate(verts.inst):
        out = []
        for a in verts:
            row = []
            for piv in vertex_neighbors(a):
                if len(piv.deleted) != 1:
                    raise UnreachableCaseError(
                        "non-degenerate pivot deleted several edges"
                    )
                row.append(verts.index_of(piv.result))
            out.append(sorted(set(row)))
        return out
    size = len(verts)
    out = [[] for _ in range(size)]
    for a in range(size):
        for b in range(a + 1, size):
            if are_adjacent(verts[a], verts[b]):
                out[a].append(b)
                out[b].append(a)
    return out


def _bfs(adj: list[list[int]], source: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = [source]
    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        for nxt in adj[node]:
            if dist[nxt] < 0:
                dist[nxt] = dist[node] + 1
                queue.append(nxt)
    return dist


def graph_distance(O: Assignment, F: Assignment, cap_trees: int = 10**7) -> int:
    """Minimum number of skeleton edges between two vertices."""
    if O.inst != F.inst:
        raise TransportError("graph distance needs a common instance")
    verts = enumerate_vertices(O.inst, cap_trees=cap_trees)
    adj = neighbor_graph(verts)
    dist = _bfs(adj, verts.index_of(O))
    d = dist[verts.index_of(F)]
    if d < 0:
        raise UnreachableCaseError("vertex graph is disconnected")
    return d


def graph_distance_table(inst: Instance, cap_trees: int = 10**7) -> DistanceTable:
    """All-pairs skeleton distances (a <= b only; the metric is symmetric)."""
    verts = enumerate_vertices(inst, cap_trees=cap_trees)
    adj = neighbor_graph(verts)
    rows = []
    for a in range(len(verts)):
        dist = _bfs(adj, a)
        if any(d < 0 for d in dist):
            raise UnreachableCaseError("vertex graph is disconnected")
        rows.extend((a, b, dist[b]) for b in range(a, len(verts)))
    return DistanceTable("CD_e", verts, tuple(rows))


def graph_diameter(inst: Instance, cap_trees: int = 10**7) -> int:
    return graph_distance_table(inst, cap_trees=cap_trees).diameter


def cdfm_distance(
    O: Assignment,
    F: Assignment,
    depth_cap: int | None = None,
    cap_states: int = 10**6,
    circuits: CircuitSet | None = None,
) -> int | None:
    """Minimum number of maximal feasible steps from O to F.

    BFS over flow matrices; each transition applies one applicable
    oriented circuit at its full step length. Returns None when no walk
    of length <= depth_cap (default m+n) exists.
    """
    if O.inst != F.inst:
        raise TransportError("distance needs a common instance")
    inst = O.inst
    if depth_cap is None:
        depth_cap = inst.m + inst.n
    cs = circuits if circuits is not None else enumerate_circuits(inst.m, inst.n)
    oriented = list(cs.oriented())
    goal = F.flows
    if O.flows == goal:
        return 0
    seen: set[Matrix] = {O.flows}
    frontier: list[Matrix] = [O.flows]
    for depth in range(1, depth_cap + 1):
        nxt: list[Matrix] = []
        for y in frontier:
            for g in oriented:
                a = max_step(y, g)
                if a is None:
                    continue
                z = apply_step(y, g, a)
                if z == goal:
                    return depth
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        if len(seen) > cap_states:
            raise ResourceLimitError(
                f"maximal-step state space exceeded {cap_states} states"
            )
        if not nxt:
            return None
        frontier = nxt
    return None


def _normalize_row(row: list[int]) -> tuple[int, ...] | None:
    g = 0
    for x in row:
        g = gcd(g, abs(x))
    if g == 0:
        return None
    lead = next(x for x in row if x != 0)
    if lead < 0:
        g = -g
    return tuple(x // g for x in row)


def _reduce(vec, basis) -> tuple[int, ...] | None:
    """Fraction-free elimination of vec against echelon rows."""
    cur = list(vec)
    for pivot, row in basis:
        c = cur[pivot]
        if c:
            f = row[pivot]
            cur = [f * a - c * b for a, b in zip(cur, row)]
    return _normalize_row(cur)


def cd_at_most(
    O: Assignment,
    F: Assignment,
    k: int,
    cap_solves: int = 10**7,
    circuits: CircuitSet | None = None,
) -> bool:
    """Can y^F - y^O be written as a positive combination of <= k circuits?

    Equivalent to span membership over <= k unoriented circuits (signs
    are a choice of orientation; a dependent set never beats its
    independent subsets). Searched by DFS over index-increasing subsets
    with an incremental echelon, skipping dependent additions, plus a
    support-coverage prune. Exact throughout.
    """
    if O.inst != F.inst:
        raise TransportError("distance needs a common instance")
    inst = O.inst
    m, n = inst.m, inst.n
    if k < 0:
        raise TransportError("k must be nonnegative")
    if k > m + n - 1:
        raise TransportError(f"k={k} above the hard bound {m + n - 1}")
    diff = [
        [F.flows[i][j] - O.flows[i][j] for j in range(n)] for i in range(m)
    ]
    if all(x == 0 for row in diff for x in row):
        return True
    if k == 0:
        return False

    cs = circuits if circuits is not None else enumerate_circuits(m, n)
    # Kernel coordinates: a margin-neutral vector is determined by its
    # entries on the first m-1 rows and n-1 columns.
    coords = [(i, j) for i in range(m - 1) for j in range(n - 1)]
    scale = 1
    for row in diff:
        for x in row:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    target = _normalize_row(
        [int(diff[i][j] * scale) for i, j in coords]
    )
    if target is None:
        raise UnreachableCaseError("nonzero difference projected to zero")
    target_mask = 0
    for i in range(m):
        for j in range(n):
            if diff[i][j] != 0:
                target_mask |= 1 << (i * n + j)

    circ_vecs = []
    circ_masks = []
    for g in cs:
        signs = g.signs()
        circ_vecs.append(tuple(signs.get(e, 0) for e in coords))
        mask = 0
        for i, j in signs:
            mask |= 1 << (i * n + j)
        circ_masks.append(mask)
    total = len(circ_vecs)
    max_support = 2 * min(m, n)
    solves = 0

    def dfs(start: int, basis, residual, cover: int, depth: int) -> bool:
        nonlocal solves
        for idx in range(start, total):
            solves += 1
            if solves > cap_solves:
                raise ResourceLimitError(
                    f"circuit-subset search exceeded {cap_solves} solves"
                )
            red = _reduce(circ_vecs[idx], basis)
            if red is None:
                continue  # dependent on the chosen set
            pivot = next(p for p, x in enumerate(red) if x)
            new_res = _reduce(residual, [(pivot, red)])
            if new_res is None:
                return True
            if depth + 1 == k:
                continue
            new_cover = cover | circ_masks[idx]
            missing = bin(target_mask & ~new_cover).count("1")
            if missing and depth + 1 + (missing + max_support - 1) // max_support > k:
                continue
            if dfs(idx + 1, basis + [(pivot, red)], new_res, new_cover, depth + 1):
                return True
        return False

    return dfs(0, [], target, 0, 0)


def cd_minimum(
    O: Assignment,
    F: Assignment,
    cap_solves: int = 10**7,
    circuits: CircuitSet | None = None,
) -> int:
    """Smallest k with cd_at_most(O, F, k)."""
    inst = O.inst
    cs = circuits if circuits is not None else enumerate_circuits(inst.m, inst.n)
    for k in range(inst.m + inst.n):
        if cd_at_most(O, F, k, cap_solves=cap_solves, circuits=cs):
            return k
    raise UnreachableCaseError("no k up to m+n-1 reached the target")
