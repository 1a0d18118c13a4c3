import pickle

import numpy as np
import pytest

from quditloops.errors import NoStabilizerError, ParameterError, ShapeError
from quditloops.lattice import (
    DUAL, DUMMY, HORIZONTAL, PRIMAL, VERTICAL, CodeShape, build, dual_counterpart,
    elementary_loops, incident_edges, lattice_summary, primal_counterpart,
)

SHAPES = [(a, b) for a in range(2, 13) for b in range(2, 13)]


def q_formula(n_h, n_v):
    return 2 * n_h * n_v - n_h - n_v + 1


@pytest.mark.parametrize("shape", SHAPES)
def test_counts_exhaustive(shape):
    n_h, n_v = shape
    lat = build(shape)
    Q = q_formula(n_h, n_v)
    assert lat.n_qudits == Q
    for side, (a, b) in ((PRIMAL, (n_h, n_v)), (DUAL, (n_v, n_h))):
        g = lat.side(side)
        assert np.count_nonzero(g.family == 0) == a * b
        assert np.count_nonzero(g.family == 1) == (a - 1) * (b - 1)
        assert g.n_real == (a - 1) * b
    loops_p = elementary_loops(lat, PRIMAL)
    loops_d = elementary_loops(lat, DUAL)
    assert sum(len(l.qudits) == 3 for l in loops_p) == 2 * (n_v - 1)
    assert sum(len(l.qudits) == 4 for l in loops_p) == (n_h - 2) * (n_v - 1)
    assert sum(len(l.qudits) == 3 for l in loops_d) == 2 * (n_h - 1)
    assert sum(len(l.qudits) == 4 for l in loops_d) == (n_h - 1) * (n_v - 2)


@pytest.mark.parametrize("shape", [(2, 2), (3, 2), (2, 3), (4, 5), (7, 4), (9, 9)])
def test_loops_in_cycle_space(shape):
    lat = build(shape)
    for side in (PRIMAL, DUAL):
        inc = lat.side(side).incidence
        for loop in elementary_loops(lat, side):
            v = np.zeros(lat.n_qudits)
            v[list(loop.qudits)] = loop.signs
            assert not np.any(inc @ v)


@pytest.mark.parametrize("shape", [(2, 2), (4, 5), (6, 3)])
def test_degrees(shape):
    lat = build(shape)
    for side in (PRIMAL, DUAL):
        g = lat.side(side)
        b = lat.shape.frame(side)[1]
        deg = np.bincount(np.concatenate([g.tail, g.head]), minlength=g.n_nodes)
        for u in range(g.n_real):
            x, y = g.node_label(u)
            assert deg[u] == (3 if y in (0, b - 1) else 4)
        assert deg[g.dummy] == 2 * lat.shape.frame(side)[1]


def test_build_examples():
    assert build((4, 5)).n_qudits == 32
    lat = build((2, 2))
    assert lat.n_qudits == 5
    assert lat.n_checks(PRIMAL) == 2 and lat.n_checks(DUAL) == 2
    with pytest.raises(ShapeError):
        build((2, 1))
    with pytest.raises(ShapeError):
        CodeShape(1, 5)


def test_indexing_row_major():
    lat = build((4, 5))
    n_h, n_v = 4, 5
    for y in range(n_v):
        for x in range(n_h):
            e = lat.edge(PRIMAL, y * n_h + x)
            assert (e.family, e.x, e.y) == (HORIZONTAL, x, y)
    for y in range(n_v - 1):
        for x in range(1, n_h):
            e = lat.edge(PRIMAL, n_h * n_v + y * (n_h - 1) + x - 1)
            assert (e.family, e.x, e.y) == (VERTICAL, x, y)
            assert e.tail == (x, y) and e.head == (x, y + 1)
    assert lat.edge(PRIMAL, 0).tail is DUMMY
    assert lat.edge(PRIMAL, n_h - 1).head is DUMMY


def test_dual_mapping_rules():
    lat = build((4, 5))
    n_h, n_v = 4, 5
    for q in range(lat.n_qudits):
        p, d = primal_counterpart(lat, q), dual_counterpart(lat, q)
        assert lat.qudit_of(DUAL, d.family, d.x, d.y) == q
        assert lat.qudit_of(PRIMAL, p.family, p.x, p.y) == q
        if p.family == HORIZONTAL:
            x, y = p.x, p.y
            ends = {d.tail, d.head}
            want = {(y, x) if 1 <= y <= n_v - 1 else DUMMY,
                    (y + 1, x) if 1 <= y + 1 <= n_v - 1 else DUMMY}
            assert ends == want
        else:
            x, y = p.x, p.y
            assert {d.tail, d.head} == {(y + 1, x - 1), (y + 1, x)}
    e = lat.edge(PRIMAL, lat.qudit_of(PRIMAL, VERTICAL, 1, 0))
    d = dual_counterpart(lat, e.qudit)
    assert {d.tail, d.head} == {(1, 0), (1, 1)}


def test_dangling_bookkeeping():
    lat = build((4, 5))
    p_dangling = {q for q in range(lat.n_qudits) if DUMMY in (lat.edge(PRIMAL, q).tail, lat.edge(PRIMAL, q).head)}
    d_dangling = {q for q in range(lat.n_qudits) if DUMMY in (lat.edge(DUAL, q).tail, lat.edge(DUAL, q).head)}
    assert len(d_dangling) == 2 * 4
    assert len(p_dangling) == 2 * 5
    # only the four corner edges dangle on both sides
    corners = {0, 3, 4 * 4, 4 * 4 + 3}
    assert p_dangling & d_dangling == corners


def test_incident_edges():
    lat = build((4, 5))
    assert len(incident_edges(lat, PRIMAL, (2, 2))) == 4
    inc = incident_edges(lat, PRIMAL, (1, 0))
    assert len(inc) == 3
    desc = sorted((e.family, e.x, e.y, s) for e, s in inc)
    assert desc == [(HORIZONTAL, 0, 0, 1), (HORIZONTAL, 1, 0, -1), (VERTICAL, 1, 0, -1)]
    with pytest.raises(NoStabilizerError, match="no stabilizer on contracted node"):
        incident_edges(lat, PRIMAL, DUMMY)
    with pytest.raises(ParameterError):
        lat.edge(PRIMAL, lat.n_qudits)


def test_elementary_examples_and_summary():
    lat = build((2, 2))
    loops = elementary_loops(lat, PRIMAL)
    assert [len(l.qudits) for l in loops] == [3, 3]
    s = lattice_summary(build((4, 5)))
    assert (s["qudits"], s["primal_loops3"], s["primal_loops4"], s["dual_loops3"], s["dual_loops4"]) == (32, 8, 8, 6, 9)


def test_pickle_roundtrip():
    lat = build((5, 4))
    lat2 = pickle.loads(pickle.dumps(lat))
    assert lat2.shape == lat.shape
    assert np.array_equal(lat2.primal.tail, lat.primal.tail)
    assert pickle.loads(pickle.dumps(DUMMY)) is DUMMY
