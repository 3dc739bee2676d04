import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpwalk import (
    HirschData,
    Instance,
    ResourceLimitError,
    TransportError,
    are_adjacent,
    critical_edges,
    enumerate_vertices,
    gen_coincide,
    gen_example1,
    hirsch_data,
    insert_pivot,
    is_nondegenerate,
    northwest_corner,
    random_instance,
    tree_count,
    vertex_neighbors,
)


def test_nondegeneracy():
    assert is_nondegenerate(Instance((3, 3), (2, 2, 2)))
    assert not is_nondegenerate(Instance((2, 2), (2, 2)))
    assert not is_nondegenerate(Instance((3, 5), (3, 2, 3)))


def test_northwest_corner():
    case = gen_example1()
    assert northwest_corner(case.inst).flows == case.O.flows
    nw = northwest_corner(Instance((9, 7, 3), (8, 6, 5)))
    assert nw.flows == ((8, 1, 0), (0, 5, 2), (0, 0, 3))
    assert nw.is_vertex()


@pytest.mark.parametrize("m,n,want", [(2, 2, 4), (2, 3, 12), (3, 3, 81), (3, 4, 432)])
def test_tree_count(m, n, want):
    assert tree_count(m, n) == want


def test_enumerate_vertices_example():
    case = gen_example1()
    verts = enumerate_vertices(case.inst)
    assert len(verts) == 6
    assert all(v.is_vertex() for v in verts)
    assert all(len(v.support) == 4 for v in verts)
    assert len({v.flows for v in verts}) == 6


def test_enumerate_vertices_degenerate_dedup():
    verts = enumerate_vertices(Instance((2, 2), (2, 2)))
    assert sorted(v.flows for v in verts) == [
        ((0, 2), (2, 0)),
        ((2, 0), (0, 2)),
    ]
    assert are_adjacent(verts[0], verts[1])


def test_enumerate_vertices_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_vertices(gen_example1().inst, cap_trees=2)


def test_insert_pivot_pinned():
    case = gen_example1()
    piv = insert_pivot(case.O, (1, 0))
    assert (piv.circuit.supplies, piv.circuit.demands) == ((0, 1), (1, 0))
    assert piv.alpha == 1
    assert piv.deleted == frozenset({(1, 1)})
    assert piv.result.flows == ((1, 2, 0), (1, 0, 2))
    with pytest.raises(TransportError):
        insert_pivot(case.O, (0, 0))


def test_vertex_neighbors_regular():
    case = gen_example1()
    for v in enumerate_vertices(case.inst):
        pivs = vertex_neighbors(v)
        assert len(pivs) == 2
        results = {p.result.flows for p in pivs}
        assert len(results) == 2
        assert all(are_adjacent(v, p.result) for p in pivs)


def test_adjacency_is_not_transitive_closure():
    case = gen_example1()
    piv = insert_pivot(case.O, (1, 0))
    assert are_adjacent(case.O, piv.result)
    assert not are_adjacent(case.O, case.F)


def test_critical_edges_and_hirsch_data():
    assert critical_edges(gen_example1().inst) == frozenset()
    cc = gen_coincide(3)
    assert set(critical_edges(cc.inst)) == {(0, 0), (1, 0)}
    assert hirsch_data(cc.inst) == HirschData(k=2, bound=2)


@given(st.integers(0, 10**6))
@settings(deadline=None, max_examples=25)
def test_random_instances_are_nondegenerate(seed):
    rng = random.Random(f"poly:{seed}")
    m = rng.choice((2, 3))
    n = rng.choice((3, 4))
    inst = random_instance(rng, m, n)
    assert (inst.m, inst.n) == (m, n)
    assert is_nondegenerate(inst)
    nw = northwest_corner(inst)
    assert nw.is_vertex()
    assert len(nw.support) == m + n - 1


@given(st.integers(0, 10**6))
@settings(deadline=None, max_examples=15)
def test_pivot_walks_stay_on_vertices(seed):
    rng = random.Random(f"pivot:{seed}")
    inst = random_instance(rng, rng.choice((2, 3)), rng.choice((3, 4)))
    v = northwest_corner(inst)
    for _ in range(4):
        pivs = vertex_neighbors(v)
        assert len(pivs) == (inst.m - 1) * (inst.n - 1)
        piv = rng.choice(pivs)
        assert len(piv.deleted) == 1
        assert piv.result.is_vertex()
        v = piv.result
