"""Exact building blocks for flows on the complete bipartite graph K_{m,n}.

Margins, flow matrices, support graphs, circuits (signed even cycles) and
circuit walks, all over ``fractions.Fraction``. Nothing in this package
rounds, ever; equality checks downstream rely on that.

Indices are 0-based throughout the library and only converted to 1-based
at the serialization boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Edge = tuple[int, int]
Matrix = tuple[tuple[Fraction, ...], ...]

WALK_KINDS = ("CD", "CD_f", "CD_fm", "CD_e", "CD_s")


class TransportError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateError(TransportError):
    """The operation requires a non-degenerate instance."""


class ResourceLimitError(TransportError):
    """An enumeration or search exceeded its configured cap."""


class HypothesisError(TransportError):
    """A constructive step was invoked outside its proven precondition."""


class UnreachableCaseError(TransportError):
    """An internal invariant failed. This is a bug trap, not bad input."""


def parse_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" or "p" strings to Fraction.

    Floats are rejected on purpose: a float that survived this far is
    almost certainly a rounding bug upstream.
    """
    if isinstance(x, float):
        raise TransportError(f"refusing float {x!r}; pass a string or Fraction")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TransportError(f"cannot read a rational from {x!r}")


def format_rational(q: Fraction) -> str:
    """Render as "p/q", or plain "p" for integers."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_matrix(rows) -> Matrix:
    """Normalize a nested iterable of rational-likes to a tuple matrix."""
    mat = tuple(tuple(parse_rational(x) for x in row) for row in rows)
    if not mat or any(len(row) != len(mat[0]) for row in mat):
        raise TransportError("matrix rows must be nonempty and equal length")
    return mat


def zero_matrix(m: int, n: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(m))


@dataclass(frozen=True)
class Instance:
    """Margins of a transportation problem: supplies u, demands v.

    Entries must be strictly positive and balance exactly.
    """

    u: tuple[Fraction, ...]
    v: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(parse_rational(x) for x in self.u))
        object.__setattr__(self, "v", tuple(parse_rational(x) for x in self.v))
        if len(self.u) < 2 or len(self.v) < 2:
            raise TransportError("need at least 2 supplies and 2 demands")
        if any(x <= 0 for x in self.u + self.v):
            raise TransportError("margins must be strictly positive")
        if sum(self.u) != sum(self.v):
            raise TransportError(
                f"margins do not balance: {sum(self.u)} != {sum(self.v)}"
            )

    @property
    def m(self) -> int:
        return len(self.u)

    @property
    def n(self) -> int:
        return len(self.v)


def support_graph(flows: Matrix) -> frozenset[Edge]:
    """Edges carrying positive flow: {(i, j) : y_ij > 0}."""
    return frozenset(
        (i, j) for i, row in enumerate(flows) for j, y in enumerate(row) if y > 0
    )


def _has_cycle(edges, m: int) -> bool:
    # Union-find over supply nodes 0..m-1 and demand nodes m, m+1, ...
    parent: dict[int, int] = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        ra, rb = find(i), find(m + j)
        if ra == rb:
            return True
        parent[ra] = rb
    return False


@dataclass(frozen=True)
class Assignment:
    """A feasible point together with its instance.

    The support is always derived from the flows; it is never stored, so
    flows and support cannot drift apart.
    """

    inst: Instance
    flows: Matrix

    def __post_init__(self):
        object.__setattr__(self, "flows", as_matrix(self.flows))
        m, n = self.inst.m, self.inst.n
        if len(self.flows) != m or len(self.flows[0]) != n:
            raise TransportError(f"flow matrix is not {m}x{n}")
        for row in self.flows:
            for y in row:
                if y < 0:
                    raise TransportError(f"negative flow {y}")
        for i, row in enumerate(self.flows):
            if sum(row) != self.inst.u[i]:
                raise TransportError(f"row {i} sums to {sum(row)}, want {self.inst.u[i]}")
        for j in range(n):
            col = sum(self.flows[i][j] for i in range(m))
            if col != self.inst.v[j]:
                raise TransportError(f"column {j} sums to {col}, want {self.inst.v[j]}")

    @property
    def support(self) -> frozenset[Edge]:
        return support_graph(self.flows)

    def is_vertex(self) -> bool:
        """A feasible point is a vertex iff its support graph is a forest."""
        return not _has_cycle(self.support, self.inst.m)


@dataclass(frozen=True)
class Circuit:
    """An oriented even simple cycle s_0, d_0, s_1, d_1, ..., s_{k-1}, d_{k-1}.

    Edge (s_l, d_l) is increased (+1) and (s_{l+1}, d_l) is decreased (-1),
    indices cyclic. Stored in canonical rotation (lexicographically smallest
    pair sequence), so structural equality is orientation-true semantic
    equality. The reverse orientation is a distinct circuit; see __neg__.
    """

    supplies: tuple[int, ...]
    demands: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(x) for x in self.supplies)
        d = tuple(int(x) for x in self.demands)
        if len(s) != len(d) or len(s) < 2:
            raise TransportError("circuit needs k >= 2 supplies and demands")
        if len(set(s)) != len(s) or len(set(d)) != len(d):
            raise TransportError("circuit nodes must be pairwise distinct")
        if any(x < 0 for x in s + d):
            raise TransportError("negative node index")
        # Canonical rotation. The signed incidence vector is rotation
        # invariant, so this only fixes the stored representative.
        k = len(s)
        pairs = list(zip(s, d))
        best = min(range(k), key=lambda t: pairs[t:] + pairs[:t])
        object.__setattr__(self, "supplies", s[best:] + s[:best])
        object.__setattr__(self, "demands", d[best:] + d[:best])

    @property
    def k(self) -> int:
        return len(self.supplies)

    def increased(self) -> tuple[Edge, ...]:
        return tuple(zip(self.supplies, self.demands))

    def decreased(self) -> tuple[Edge, ...]:
        k = self.k
        return tuple(
            (self.supplies[(l + 1) % k], self.demands[l]) for l in range(k)
        )

    def edges(self) -> frozenset[Edge]:
        return frozenset(self.increased()) | frozenset(self.decreased())

    def signs(self) -> dict[Edge, int]:
        out = {e: 1 for e in self.increased()}
        out.update({e: -1 for e in self.decreased()})
        return out

    def vector(self, m: int, n: int) -> tuple[int, ...]:
        """Signed incidence vector, flattened row-major."""
        flat = [0] * (m * n)
        for (i, j), sg in self.signs().items():
            if i >= m or j >= n:
                raise TransportError(f"circuit node ({i},{j}) outside {m}x{n}")
            flat[i * n + j] = sg
        return tuple(flat)

    def canon(self) -> "Circuit":
        """Canonical representative; the constructor already applies it."""
        return Circuit(self.supplies, self.demands)

    def __neg__(self) -> "Circuit":
        # Reversing the cycle swaps increased and decreased edges.
        # Traversal order s_0, d_{k-1}, s_{k-1}, ..., d_0 gives exactly that.
        s = (self.supplies[0],) + tuple(reversed(self.supplies[1:]))
        d = tuple(reversed(self.demands))
        return Circuit(s, d)


def apply_circuit(flows: Matrix, g: Circuit, alpha: Fraction) -> Matrix:
    """flows + alpha * g, with no feasibility check."""
    grid = [list(row) for row in flows]
    for (i, j), sg in g.signs().items():
        grid[i][j] += sg * alpha
    return tuple(tuple(row) for row in grid)


@dataclass(frozen=True)
class Walk:
    """A circuit walk: points y^0 .. y^k and the steps connecting them.

    Construction checks the defining identity y^{i+1} - y^i = alpha_i g^i
    exactly. Kind-specific semantics (feasibility, maximality, adjacency,
    sign compatibility) are the validator's job, not the type's.
    """

    kind: str
    points: tuple[Matrix, ...]
    steps: tuple[tuple[Circuit, Fraction], ...]

    def __post_init__(self):
        if self.kind not in WALK_KINDS:
            raise TransportError(f"unknown walk kind {self.kind!r}")
        pts = tuple(as_matrix(p) for p in self.points)
        stp = tuple((g, parse_rational(a)) for g, a in self.steps)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "steps", stp)
        if len(pts) != len(stp) + 1:
            raise TransportError("need exactly one more point than steps")
        for idx, (g, a) in enumerate(stp):
            if a <= 0:
                raise TransportError(f"step {idx}: alpha {a} not positive")
            if apply_circuit(pts[idx], g, a) != pts[idx + 1]:
                raise TransportError(f"step {idx} does not connect its endpoints")

    @property
    def length(self) -> int:
        return len(self.steps)

    def replay(self) -> Matrix:
        """Re-apply all steps from the start; must reproduce the last point."""
        y = self.points[0]
        for g, a in self.steps:
            y = apply_circuit(y, g, a)
        return y


def edge_distance(O: Assignment, F: Assignment) -> int:
    """|support(O) \\ support(F)|, the number of edges to remove."""
    if O.inst != F.inst:
        raise TransportError("edge distance needs a common instance")
    return len(O.support - F.support)


def objective(s, y) -> Fraction:
    """Inner product sum s_ij * y_ij of a cost matrix with a flow matrix."""
    s, y = as_matrix(s), as_matrix(y)
    if len(s) != len(y) or len(s[0]) != len(y[0]):
        raise TransportError("shape mismatch")
    return sum(
        s[i][j] * y[i][j] for i in range(len(s)) for j in range(len(s[0]))
    )
