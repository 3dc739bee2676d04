"""Walk validation for each circuit-distance notion.

The kinds form a chain: CD allows any circuit steps, CD_f requires every
intermediate point feasible, CD_fm additionally requires each step to be
maximal, CD_e restricts to skeleton moves between adjacent vertices, and
CD_s (sign-compatible walks) sits between CD_f and CD_fm in strength but
is validated separately. A walk valid for a stronger kind is valid for
the weaker ones; tests lean on that implication chain.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Assignment,
    Instance,
    TransportError,
    Walk,
    apply_circuit,
    objective,
    support_graph,
    _has_cycle,
)
from .circuits import max_step
from .polytope import are_adjacent


@dataclass(frozen=True)
class WalkReport:
    valid: bool
    kind: str
    violation: tuple[int, str] | None = None

    def __post_init__(self):
        if self.valid and self.violation is not None:
            raise TransportError("a valid report cannot carry a violation")


def _margins_ok(inst: Instance, point) -> bool:
    rows = [sum(row) for row in point]
    cols = [sum(point[i][j] for i in range(inst.m)) for j in range(inst.n)]
    return rows == list(inst.u) and cols == list(inst.v)


def _is_vertex_point(inst: Instance, point) -> bool:
    if any(x < 0 for row in point for x in row):
        return False
    return not _has_cycle(support_graph(point), inst.m)


def validate_walk(w: Walk, inst: Instance) -> WalkReport:
    """Check w against the rules of its declared kind.

    Never raises for a rule violation; the first one found is reported
    with the step index it occurred at (point p is attributed to step
    p-1, the start point to step 0).
    """
    kind = w.kind

    def bad(idx: int, reason: str) -> WalkReport:
        return WalkReport(False, kind, (idx, reason))

    m, n = inst.m, inst.n
    for p, point in enumerate(w.points):
        step = max(p - 1, 0)
        if len(point) != m or any(len(row) != n for row in point):
            return bad(step, f"point {p} is not {m}x{n}")
        if not _margins_ok(inst, point):
            return bad(step, f"point {p} violates the margins")
    for idx, (g, a) in enumerate(w.steps):
        if max(g.supplies) >= m or max(g.demands) >= n:
            return bad(idx, f"step {idx} circuit leaves the {m}x{n} grid")
        if apply_circuit(w.points[idx], g, a) != w.points[idx + 1]:
            return bad(idx, f"step {idx} does not connect its endpoints")
    if not _is_vertex_point(inst, w.points[0]):
        return bad(0, "start point is not a vertex")
    if not _is_vertex_point(inst, w.points[-1]):
        return bad(max(len(w.steps) - 1, 0), "end point is not a vertex")

    if kind in ("CD_f", "CD_fm", "CD_e", "CD_s"):
        for p, point in enumerate(w.points):
            if any(x < 0 for row in point for x in row):
                return bad(max(p - 1, 0), f"point {p} is infeasible")

    if kind == "CD_fm":
        for idx, (g, a) in enumerate(w.steps):
            top = max_step(w.points[idx], g)
            if top is None:
                return bad(idx, f"step {idx} circuit not applicable at its point")
            if a != top:
                return bad(idx, f"step {idx} length {a} is not maximal ({top})")

    if kind == "CD_e":
        assigns = []
        for p, point in enumerate(w.points):
            if not _is_vertex_point(inst, point):
                return bad(max(p - 1, 0), f"point {p} is not a vertex")
            assigns.append(Assignment(inst, point))
        for idx in range(len(w.steps)):
            if not are_adjacent(assigns[idx], assigns[idx + 1]):
                return bad(idx, f"step {idx} jumps between non-adjacent vertices")

    if kind == "CD_s":
        diff = {
            (i, j): w.points[-1][i][j] - w.points[0][i][j]
            for i in range(m)
            for j in range(n)
        }
        sign_vectors = [g.signs() for g, _ in w.steps]
        for idx, gs in enumerate(sign_vectors):
            if any(s * diff[e] < 0 for e, s in gs.items()):
                return bad(idx, f"step {idx} opposes the endpoint difference")
            for prev in range(idx):
                other = sign_vectors[prev]
                if any(s * other.get(e, 0) < 0 for e, s in gs.items()):
                    return bad(idx, f"steps {prev} and {idx} are not sign-compatible")
        total = {}
        for gs, (_, a) in zip(sign_vectors, w.steps):
            for e, s in gs.items():
                total[e] = total.get(e, 0) + s * a
        if any(total.get(e, 0) != diff[e] for e in diff):
            return bad(
                max(len(w.steps) - 1, 0), "steps do not sum to the endpoint difference"
            )

    return WalkReport(True, kind)


def is_monotone(w: Walk, s) -> bool:
    """True iff the objective s never decreases along the walk's points."""
    values = [objective(s, p) for p in w.points]
    return all(a <= b for a, b in zip(values, values[1:]))
