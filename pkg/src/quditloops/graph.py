"""Error-subgraph analysis: components, bridges, cycle bases and loop geometry.

Loop-edges are the non-bridge edges of an error subgraph. They are found in
linear time with Tarjan's low-link method; the cycle basis used for loop
sizes comes from Paton's stack-ordered spanning tree, run on the loop-edge
subgraph only since bridges lie on no cycle.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .errors import ParameterError
from .lattice import DUAL, PRIMAL, CodeLattice, SideGeometry
from .sampling import ErrorPattern


class _Adjacency(NamedTuple):
    table: np.ndarray      # (n_real, 4) qudit ids, padded with Q
    table_nbr: np.ndarray  # (n_real, 4) neighbour node ids
    dummy_q: np.ndarray
    dummy_nbr: np.ndarray


def adjacency(g: SideGeometry) -> _Adjacency:
    """Per-node incident qudits sorted by (neighbour id, qudit id)."""
    hit = g.__dict__.get("_adjacency")
    if hit is not None:
        return hit
    nq = g.tail.size
    q = np.arange(nq, dtype=np.int64)
    node = np.concatenate([g.tail, g.head])
    nbr = np.concatenate([g.head, g.tail])
    qq = np.concatenate([q, q])
    order = np.lexsort((qq, nbr, node))
    node, nbr, qq = node[order], nbr[order], qq[order]
    deg = np.bincount(node, minlength=g.n_nodes)
    start = np.concatenate([[0], np.cumsum(deg)])
    real = node != g.dummy
    slot = np.arange(node.size) - start[node]
    table = np.full((g.n_real, 4), nq, dtype=np.int32)
    table_nbr = np.full((g.n_real, 4), -1, dtype=np.int32)
    table[node[real], slot[real]] = qq[real]
    table_nbr[node[real], slot[real]] = nbr[real]
    adj = _Adjacency(table, table_nbr, qq[~real], nbr[~real])
    g.__dict__["_adjacency"] = adj  # geometry is frozen; cache beside it
    return adj


def masked_csr(g: SideGeometry, mask: np.ndarray):
    """CSR adjacency over all node ids of a side, restricted to masked qudits."""
    adj = adjacency(g)
    ext = np.append(mask, False)
    present = ext[adj.table]
    dpresent = mask[adj.dummy_q]
    counts = np.append(present.sum(axis=1), dpresent.sum())
    indptr = np.zeros(g.n_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    adj_edge = np.concatenate([adj.table[present], adj.dummy_q[dpresent]]).astype(np.int64)
    adj_node = np.concatenate([adj.table_nbr[present], adj.dummy_nbr[dpresent]]).astype(np.int64)
    return indptr, adj_node, adj_edge


@dataclass(eq=False)
class ErrorSubgraph:
    lattice: CodeLattice
    side: str
    mask: np.ndarray

    @property
    def geometry(self) -> SideGeometry:
        return self.lattice.side(self.side)

    @cached_property
    def edges(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @cached_property
    def csr(self):
        return masked_csr(self.geometry, self.mask)

    @cached_property
    def nodes(self) -> np.ndarray:
        """Touched node ids (the dummy id is the largest on its side)."""
        return np.flatnonzero(np.diff(self.csr[0]))

    @property
    def n_edges(self) -> int:
        return int(self.edges.size)

    @property
    def n_nodes(self) -> int:
        return int(self.nodes.size)

    @property
    def has_dummy(self) -> bool:
        g = self.geometry
        return bool(self.nodes.size and self.nodes[-1] == g.dummy)

    @cached_property
    def _bridge_result(self):
        g = self.geometry
        indptr, adj_node, adj_edge = self.csr
        flags, n_comp = kernels.bridge_flags(
            g.n_nodes, indptr, adj_node, adj_edge, g.tail.size
        )
        n_isolated = g.n_nodes - self.n_nodes
        return flags.view(bool), n_comp - n_isolated

    @property
    def n_components(self) -> int:
        return self._bridge_result[1]


def build_subgraph(lattice: CodeLattice, pattern: ErrorPattern, side: str) -> ErrorSubgraph:
    if pattern.lattice.shape != lattice.shape:
        raise ParameterError("pattern belongs to a different lattice")
    lattice.side(side)
    return ErrorSubgraph(lattice, side, pattern.mask)


def bridges(subgraph: ErrorSubgraph):
    """Return ``(bridge qudits, loop-edge qudits)`` as sorted arrays."""
    flags = subgraph._bridge_result[0]
    e = subgraph.edges
    on_cycle = ~flags[e]
    return e[~on_cycle], e[on_cycle]


def loop_edge_mask(subgraph: ErrorSubgraph) -> np.ndarray:
    return subgraph.mask & ~subgraph._bridge_result[0]


def betti(subgraph: ErrorSubgraph) -> int:
    return subgraph.n_edges - subgraph.n_nodes + subgraph.n_components


def _cycles_csr(subgraph: ErrorSubgraph):
    g = subgraph.geometry
    indptr, adj_node, adj_edge = subgraph.csr
    return kernels.paton_cycles(g.n_nodes, indptr, adj_node, adj_edge, g.tail.size)


def cycle_basis(subgraph: ErrorSubgraph) -> list:
    """Paton fundamental cycles; each is an array of qudits forming a closed walk."""
    ptr, out = _cycles_csr(subgraph)
    return [out[ptr[i]:ptr[i + 1]] for i in range(ptr.size - 1)]


def _edge_extents(g: SideGeometry):
    return (
        np.minimum(g.px0, g.px1),
        np.maximum(g.px0, g.px1),
        np.minimum(g.py0, g.py1),
        np.maximum(g.py0, g.py1),
    )


def _walk_is_closed(g: SideGeometry, cycle) -> bool:
    if len(cycle) < 2:
        return False
    e0 = cycle[0]
    for start in (int(g.tail[e0]), int(g.head[e0])):
        cur = start
        for e in cycle:
            t, h = int(g.tail[e]), int(g.head[e])
            if t == cur:
                cur = h
            elif h == cur:
                cur = t
            else:
                break
        else:
            if cur == start:
                return True
    return False


def loop_span(lattice: CodeLattice, side: str, cycle) -> int:
    """Longer side of the cycle's bounding rectangle.

    Dummy end points count at their boundary attachment (``x = 0`` or
    ``x = a`` in the side's own frame).
    """
    g = lattice.side(side)
    cycle = np.asarray(cycle, dtype=np.int64)
    if cycle.size and (cycle.min() < 0 or cycle.max() >= g.tail.size):
        raise ParameterError("cycle contains an out-of-range qudit")
    if not _walk_is_closed(g, cycle):
        raise ParameterError("cycle is not a closed walk")
    xs = np.concatenate([g.px0[cycle], g.px1[cycle]])
    ys = np.concatenate([g.py0[cycle], g.py1[cycle]])
    return int(max(xs.max() - xs.min(), ys.max() - ys.min()))


def cycle_spans(g: SideGeometry, ptr: np.ndarray, cyc: np.ndarray):
    """Span and node count of every cycle of a CSR cycle list."""
    if ptr.size <= 1:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    x0, x1, y0, y1 = _edge_extents(g)
    starts = ptr[:-1]
    dx = np.maximum.reduceat(x1[cyc], starts) - np.minimum.reduceat(x0[cyc], starts)
    dy = np.maximum.reduceat(y1[cyc], starts) - np.minimum.reduceat(y0[cyc], starts)
    return np.maximum(dx, dy).astype(np.int64), np.diff(ptr)


@dataclass(eq=False)
class SubgraphAnalysis:
    side: str
    n_edges: int
    n_nodes: int
    n_components: int
    bridges: np.ndarray
    loop_edges: np.ndarray
    cycle_ptr: np.ndarray
    cycle_qudits: np.ndarray
    spans: np.ndarray
    node_counts: np.ndarray
    component_spans: np.ndarray

    @property
    def b1(self) -> int:
        return self.n_edges - self.n_nodes + self.n_components

    @property
    def cycles(self) -> list:
        p = self.cycle_ptr
        return [self.cycle_qudits[p[i]:p[i + 1]] for i in range(p.size - 1)]


def _component_spans(g: SideGeometry, loop_mask, ptr, cyc):
    """Bounding-box span of the loop-edge component holding each cycle."""
    if ptr.size <= 1:
        return np.zeros(0, dtype=np.int64)
    e = np.flatnonzero(loop_mask)
    n = g.n_nodes
    graph = coo_matrix((np.ones(e.size), (g.tail[e], g.head[e])), shape=(n, n))
    _, label = connected_components(graph, directed=False)
    comp = label[g.tail[e]]
    x0, x1, y0, y1 = _edge_extents(g)
    m = label.max() + 1
    lo_x = np.full(m, np.iinfo(np.int64).max)
    lo_y = lo_x.copy()
    hi_x = np.full(m, np.iinfo(np.int64).min)
    hi_y = hi_x.copy()
    np.minimum.at(lo_x, comp, x0[e])
    np.minimum.at(lo_y, comp, y0[e])
    np.maximum.at(hi_x, comp, x1[e])
    np.maximum.at(hi_y, comp, y1[e])
    box = np.maximum(hi_x - lo_x, hi_y - lo_y)
    return box[label[g.tail[cyc[ptr[:-1]]]]]


def analyze(lattice: CodeLattice, pattern: ErrorPattern, side: str, boxes: bool = True):
    sub = build_subgraph(lattice, pattern, side)
    g = sub.geometry
    br, loop = bridges(sub)
    loop_mask = loop_edge_mask(sub)
    if loop.size:
        indptr, adj_node, adj_edge = masked_csr(g, loop_mask)
        ptr, cyc = kernels.paton_cycles(g.n_nodes, indptr, adj_node, adj_edge, g.tail.size)
    else:
        ptr, cyc = np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    spans, counts = cycle_spans(g, ptr, cyc)
    comp = _component_spans(g, loop_mask, ptr, cyc) if boxes else np.zeros(0, np.int64)
    return SubgraphAnalysis(
        side, sub.n_edges, sub.n_nodes, sub.n_components, br, loop,
        ptr, cyc, spans, counts, comp,
    )


class SampleRecord(NamedTuple):
    sample_index: int
    n_err: int
    n_loop_qudits: int
    has_loop: bool
    L_max: int
    N_max: int


CSV_COLUMNS = SampleRecord._fields


def _side_loops(g: SideGeometry, mask: np.ndarray):
    indptr, adj_node, adj_edge = masked_csr(g, mask)
    flags, _ = kernels.bridge_flags(g.n_nodes, indptr, adj_node, adj_edge, mask.size)
    loop_mask = mask & ~flags.view(bool)
    if not loop_mask.any():
        return loop_mask, 0, 0
    indptr, adj_node, adj_edge = masked_csr(g, loop_mask)
    ptr, cyc = kernels.paton_cycles(g.n_nodes, indptr, adj_node, adj_edge, mask.size)
    spans, counts = cycle_spans(g, ptr, cyc)
    return loop_mask, int(spans.max()), int(counts.max())


def loop_metrics(lattice: CodeLattice, pattern: ErrorPattern, sample_index: int = 0) -> SampleRecord:
    """Per-sample loop statistics over both lattices.

    A qudit counts once even if it lies on loops of both sides. ``N_max``
    counts the dummy as a node when a cycle passes through it.
    """
    if pattern.count == 0:
        return SampleRecord(sample_index, 0, 0, False, 0, 0)
    mp, lp, np_ = _side_loops(lattice.primal, pattern.mask)
    md, ld, nd = _side_loops(lattice.dual, pattern.mask)
    n_loop = int(np.count_nonzero(mp | md))
    return SampleRecord(sample_index, pattern.count, n_loop, n_loop > 0, max(lp, ld), max(np_, nd))
