import json

import pytest

from z2top.simplicial import (
    InvalidComplexError,
    InvalidMapError,
    SimplicialMap,
    SimplicialPair,
    barycentric_subdivision,
    build_pair,
    circle_pair,
    disjoint_union,
    interval_pair,
    mobius_pair,
    subdivided_chain,
    torus7_pair,
)



def test_build_pair_canonicalizes_vertex_order():
    p = build_pair(3, [(2, 1), (0, 1)])
    assert p.has_simplex((1, 2))
    assert not p.has_simplex((2, 1))


def test_build_pair_completes_face_closure():
    p = build_pair(3, [(0, 1, 2)])
    assert p.has_simplex((0, 1)) and p.has_simplex((2,))
    assert len(p.simplices_of_dim(1)) == 3


def test_duplicate_simplices_rejected():
    with pytest.raises(InvalidComplexError, match="duplicate"):
        build_pair(3, [(0, 1), (1, 0)])


def test_sub_outside_complex_rejected():
    with pytest.raises(InvalidComplexError, match="not contained"):
        build_pair(3, [(0, 1)], sub=[(1, 2)])


def test_repeated_vertex_rejected():
    with pytest.raises(InvalidComplexError, match="repeated"):
        build_pair(3, [(1, 1)])


def test_stock_pairs():
    c3 = circle_pair(3)
    assert [len(g) for g in c3.simplices] == [3, 3]
    ii = interval_pair(2)
    assert ii.sub == frozenset({(0,), (2,)})
    assert ii.relative_simplices(0) == [(1,)]
    t7 = torus7_pair()
    assert [len(g) for g in t7.simplices] == [7, 21, 14]
    mb = mobius_pair()
    assert len(mb.sub) == 10  # 5 boundary edges and 5 vertices


def test_json_roundtrip():
    p = mobius_pair()
    doc = json.loads(json.dumps(p.to_json_dict()))
    q = SimplicialPair.from_json_dict(doc)
    assert q == p


def test_disjoint_union_counts():
    du = disjoint_union(circle_pair(3), circle_pair(4))
    assert [len(g) for g in du.simplices] == [7, 7]


def test_simplicial_map_validation():
    c3 = circle_pair(3)
    # (0,1) would map onto (0,2), which is not an edge of the path
    with pytest.raises(InvalidMapError):
        SimplicialMap(c3, interval_pair(2).absolute(), [0, 2, 0])


def test_map_must_send_sub_into_sub():
    ii = interval_pair(2)
    with pytest.raises(InvalidMapError, match="sub"):
        SimplicialMap(ii, ii, [1, 0, 1])


def test_subdivision_top_counts():
    c3 = circle_pair(3)
    sd, _ = barycentric_subdivision(c3)
    assert [len(g) for g in sd.simplices] == [6, 6]  # each edge splits in two
    mb = mobius_pair()
    sd2, _ = barycentric_subdivision(mb)
    assert len(sd2.simplices_of_dim(2)) == 6 * len(mb.simplices_of_dim(2))
    # the subdivided subcomplex is the subdivision of the subcomplex
    assert len([s for s in sd2.sub if len(s) == 2]) == 2 * 5


def test_subdivided_chain_respects_boundary():
    from z2top.homology import boundary_of_chain

    c4 = circle_pair(4)
    chain = [(0, 1), (1, 2)]
    sd, _ = barycentric_subdivision(c4)
    fine = subdivided_chain(c4, chain)
    assert len(fine) == 4
    coarse_bd = boundary_of_chain(c4, chain)
    fine_bd = boundary_of_chain(sd, fine)
    # boundary vertices of the subdivided chain are the barycenters of the
    # boundary vertices of the original chain
    originals = c4.all_simplices()
    vid = {s: i for i, s in enumerate(originals)}
    assert fine_bd == frozenset({(vid[s],) for s in coarse_bd})
