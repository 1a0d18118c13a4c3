"""Contracted primal and dual lattices of the planar qudit surface code.

Both rough boundaries of a side are merged into a single dummy node that
carries no check. Qudit ``q`` sits on exactly one primal and one dual edge.

Layout on a side with ``a`` edges per row and ``b`` nodes per column (the
primal uses ``(a, b) = (n_h, n_v)``, the dual ``(n_v, n_h)``):

* real nodes ``(x, y)`` with ``1 <= x <= a-1`` and ``0 <= y <= b-1``;
* horizontal edges ``h(x, y)``, ``0 <= x <= a-1``, oriented rightward, whose
  tail (``x = 0``) or head (``x = a-1``) may be the dummy;
* vertical edges ``v(x, y)``, ``1 <= x <= a-1``, ``0 <= y <= b-2``, oriented
  upward.

Qudits are indexed by the primal edges: horizontal edges row-major, then
vertical edges row-major.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Union

import numpy as np
from scipy import sparse

from .errors import NoStabilizerError, ParameterError, ShapeError

PRIMAL = "primal"
DUAL = "dual"
SIDES = (PRIMAL, DUAL)
HORIZONTAL = "h"
VERTICAL = "v"


class _Dummy:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Dummy"

    def __reduce__(self):
        return (_Dummy, ())


DUMMY = _Dummy()
NodeId = Union[tuple, _Dummy]


@dataclass(frozen=True)
class CodeShape:
    n_h: int
    n_v: int

    def __post_init__(self):
        if int(self.n_h) != self.n_h or int(self.n_v) != self.n_v:
            raise ShapeError(f"shape entries must be integers, got {self!r}")
        if self.n_h < 2 or self.n_v < 2:
            raise ShapeError(
                f"n_h and n_v must both be >= 2, got ({self.n_h}, {self.n_v})"
            )

    @property
    def n_qudits(self) -> int:
        return 2 * self.n_h * self.n_v - self.n_h - self.n_v + 1

    def frame(self, side: str) -> tuple[int, int]:
        """(edges per row, nodes per column) in the side's own coordinates."""
        _check_side(side)
        return (self.n_h, self.n_v) if side == PRIMAL else (self.n_v, self.n_h)


@dataclass(frozen=True)
class EdgeRef:
    side: str
    family: str
    x: int
    y: int
    tail: NodeId
    head: NodeId
    qudit: int


class Loop(NamedTuple):
    side: str
    qudits: tuple
    signs: tuple


def _check_side(side):
    if side not in SIDES:
        raise ParameterError(f"side must be 'primal' or 'dual', got {side!r}")


@dataclass(frozen=True, eq=False)
class SideGeometry:
    """Per-side edge and node tables, all indexed by qudit or node id.

    Real node ``(x, y)`` has id ``y*(a-1) + (x-1)``; the dummy has id
    ``n_real``. ``px0, py0, px1, py1`` are the geometric end points of each
    edge (tail then head), with the dummy replaced by its boundary attachment
    point ``x = 0`` or ``x = a``.
    """

    side: str
    a: int
    b: int
    family: np.ndarray
    ex: np.ndarray
    ey: np.ndarray
    tail: np.ndarray
    head: np.ndarray
    px0: np.ndarray
    py0: np.ndarray
    px1: np.ndarray
    py1: np.ndarray
    node_x: np.ndarray
    node_y: np.ndarray

    @property
    def n_real(self) -> int:
        return (self.a - 1) * self.b

    @property
    def dummy(self) -> int:
        return self.n_real

    @property
    def n_nodes(self) -> int:
        return self.n_real + 1

    @cached_property
    def incidence(self) -> sparse.csr_matrix:
        """Signed node-by-qudit incidence over real nodes (+1 head, -1 tail)."""
        q = np.arange(self.tail.size)
        rows = np.concatenate([self.head, self.tail]).astype(np.int64)
        data = np.concatenate([np.ones(q.size, np.int64), -np.ones(q.size, np.int64)])
        keep = rows != self.n_real
        return sparse.csr_matrix(
            (data[keep], (rows[keep], np.concatenate([q, q])[keep])),
            shape=(self.n_real, q.size),
        )

    def node_index(self, node: NodeId) -> int:
        if node is DUMMY:
            return self.dummy
        x, y = node
        if not (1 <= x <= self.a - 1 and 0 <= y <= self.b - 1):
            raise ParameterError(f"node {node!r} is outside the {self.side} lattice")
        return y * (self.a - 1) + (x - 1)

    def node_label(self, idx: int) -> NodeId:
        if idx == self.dummy:
            return DUMMY
        return (int(self.node_x[idx]), int(self.node_y[idx]))


def _own_frame_edges(a, b):
    """Edges of one side in its own row-major order."""
    hy, hx = np.divmod(np.arange(a * b, dtype=np.int64), a)
    vy, vxm1 = np.divmod(np.arange((a - 1) * (b - 1), dtype=np.int64), a - 1)
    vx = vxm1 + 1
    dummy = (a - 1) * b

    def nid(x, y):
        return y * (a - 1) + (x - 1)

    h_tail = np.where(hx >= 1, nid(hx, hy), dummy)
    h_head = np.where(hx <= a - 2, nid(hx + 1, hy), dummy)
    family = np.concatenate([np.zeros(a * b, np.int8), np.ones(vx.size, np.int8)])
    ex = np.concatenate([hx, vx])
    ey = np.concatenate([hy, vy])
    tail = np.concatenate([h_tail, nid(vx, vy)])
    head = np.concatenate([h_head, nid(vx, vy + 1)])
    px1 = np.concatenate([hx + 1, vx])
    py1 = np.concatenate([hy, vy + 1])
    return family, ex, ey, tail, head, ex.copy(), ey.copy(), px1, py1


def _build_side(side, a, b, own_to_qudit):
    family, ex, ey, tail, head, px0, py0, px1, py1 = _own_frame_edges(a, b)
    order = np.empty_like(own_to_qudit)
    order[own_to_qudit] = np.arange(own_to_qudit.size)
    cols = [arr[order] for arr in (family, ex, ey, tail, head, px0, py0, px1, py1)]
    family, ex, ey, tail, head, px0, py0, px1, py1 = cols

    n_real = (a - 1) * b
    ny, nxm1 = np.divmod(np.arange(n_real, dtype=np.int32), a - 1)
    cols = [family] + [arr.astype(np.int32) for arr in cols[1:]]
    for arr in cols:
        arr.setflags(write=False)
    return SideGeometry(side, a, b, *cols, nxm1 + 1, ny)


class CodeLattice:
    """Immutable geometry of the contracted code; build with :func:`build`."""

    def __init__(self, shape: CodeShape):
        self.shape = shape
        n_h, n_v = shape.n_h, shape.n_v
        nq = shape.n_qudits
        n_hor = n_h * n_v

        primal = _build_side(PRIMAL, n_h, n_v, np.arange(nq, dtype=np.int64))

        # dual own-frame edge -> qudit: h'(x', y') is primal h(y', x'),
        # v'(x', y') is primal v(y'+1, x'-1)
        hy, hx = np.divmod(np.arange(n_v * n_h, dtype=np.int64), n_v)
        vy, vxm1 = np.divmod(np.arange((n_v - 1) * (n_h - 1), dtype=np.int64), n_v - 1)
        dual_map = np.concatenate(
            [hx * n_h + hy, n_hor + vxm1 * (n_h - 1) + vy]
        )
        dual = _build_side(DUAL, n_v, n_h, dual_map)
        self._sides = {PRIMAL: primal, DUAL: dual}

    def __repr__(self):
        return f"CodeLattice(n_h={self.shape.n_h}, n_v={self.shape.n_v})"

    def __reduce__(self):
        return (CodeLattice, (self.shape,))

    @property
    def n_qudits(self) -> int:
        return self.shape.n_qudits

    def side(self, side: str) -> SideGeometry:
        _check_side(side)
        return self._sides[side]

    @property
    def primal(self) -> SideGeometry:
        return self._sides[PRIMAL]

    @property
    def dual(self) -> SideGeometry:
        return self._sides[DUAL]

    def n_checks(self, side: str) -> int:
        return self.side(side).n_real

    def edge(self, side: str, qudit: int) -> EdgeRef:
        g = self.side(side)
        q = int(qudit)
        if not 0 <= q < self.n_qudits:
            raise ParameterError(f"qudit {qudit} out of range [0, {self.n_qudits})")
        return EdgeRef(
            side,
            HORIZONTAL if g.family[q] == 0 else VERTICAL,
            int(g.ex[q]),
            int(g.ey[q]),
            g.node_label(int(g.tail[q])),
            g.node_label(int(g.head[q])),
            q,
        )

    def qudit_of(self, side: str, family: str, x: int, y: int) -> int:
        """Inverse of :meth:`edge`: qudit index of a side's edge by coordinates."""
        a, b = self.shape.frame(side)
        if family == HORIZONTAL and 0 <= x <= a - 1 and 0 <= y <= b - 1:
            own = y * a + x
        elif family == VERTICAL and 1 <= x <= a - 1 and 0 <= y <= b - 2:
            own = a * b + y * (a - 1) + (x - 1)
        else:
            raise ParameterError(f"no {side} edge {family}({x},{y})")
        if side == PRIMAL:
            return own
        n_h = self.shape.n_h
        if family == HORIZONTAL:
            return x * n_h + y
        return self.shape.n_h * self.shape.n_v + (x - 1) * (n_h - 1) + y


def build(shape) -> CodeLattice:
    """Construct the contracted lattice; ``shape`` may be a tuple ``(n_h, n_v)``."""
    if not isinstance(shape, CodeShape):
        shape = CodeShape(*shape)
    return CodeLattice(shape)


def dual_counterpart(lattice: CodeLattice, qudit: int) -> EdgeRef:
    return lattice.edge(DUAL, qudit)


def primal_counterpart(lattice: CodeLattice, qudit: int) -> EdgeRef:
    return lattice.edge(PRIMAL, qudit)


def incident_edges(lattice: CodeLattice, side: str, node: NodeId) -> list:
    """Edges at a real node with sign +1 where the node is the head, -1 the tail."""
    g = lattice.side(side)
    if node is DUMMY:
        raise NoStabilizerError("no stabilizer on contracted node")
    idx = g.node_index(node)
    row = g.incidence.getrow(idx)
    return [
        (lattice.edge(side, int(q)), int(s))
        for q, s in sorted(zip(row.indices, row.data))
    ]


def elementary_loops(lattice: CodeLattice, side: str) -> list:
    """Three-edge boundary loops followed by four-edge bulk squares.

    Each loop is returned as qudits with traversal signs (+1 along the edge
    orientation), so the signed vector lies in the cycle space.
    """
    a, b = lattice.shape.frame(side)

    def q(fam, x, y):
        return lattice.qudit_of(side, fam, x, y)

    H, V = HORIZONTAL, VERTICAL
    loops = []
    for y in range(b - 1):
        loops.append(Loop(side, (q(H, 0, y), q(V, 1, y), q(H, 0, y + 1)), (1, 1, -1)))
    for y in range(b - 1):
        loops.append(
            Loop(side, (q(H, a - 1, y), q(H, a - 1, y + 1), q(V, a - 1, y)), (1, -1, -1))
        )
    for y in range(b - 1):
        for x in range(1, a - 1):
            loops.append(
                Loop(
                    side,
                    (q(H, x, y), q(V, x + 1, y), q(H, x, y + 1), q(V, x, y)),
                    (1, 1, -1, -1),
                )
            )
    return loops


def lattice_summary(lattice: CodeLattice) -> dict:
    loops_p = elementary_loops(lattice, PRIMAL)
    loops_d = elementary_loops(lattice, DUAL)
    return {
        "n_h": lattice.shape.n_h,
        "n_v": lattice.shape.n_v,
        "qudits": lattice.n_qudits,
        "primal_checks": lattice.n_checks(PRIMAL),
        "dual_checks": lattice.n_checks(DUAL),
        "primal_loops3": sum(len(l.qudits) == 3 for l in loops_p),
        "primal_loops4": sum(len(l.qudits) == 4 for l in loops_p),
        "dual_loops3": sum(len(l.qudits) == 3 for l in loops_d),
        "dual_loops4": sum(len(l.qudits) == 4 for l in loops_d),
    }
