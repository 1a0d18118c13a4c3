"""Syndrome linear algebra over Z_d on an error support.

Primal (X-type vertex) checks read the Z exponents ``j``: the check at real
node u gives ``sum_{head=u} j_e - sum_{tail=u} j_e``. Dual (Z-type) checks
read the X exponents ``i`` through the dual incidence, with qudits on primal
vertical edges entering with an extra sign -1. That sign makes every vertex
check commute with every plaquette check for all d; without it the two
orientation conventions overlap with weight -2 instead of 0.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from ..errors import InconsistentSyndromeError, PartialDiscretizationError
from ..lattice import DUAL, PRIMAL, CodeLattice
from .smith import kernel_mod


def dual_signs(lattice: CodeLattice) -> np.ndarray:
    """Per-qudit sign of the X exponent in plaquette checks."""
    return np.where(lattice.primal.family == 0, 1, -1).astype(np.int64)


def check_matrices(lattice: CodeLattice, reverse: bool = False):
    """Full integer check matrices ``(H_primal, H_dual)`` over all qudits.

    ``H_primal @ H_dual.T == 0`` exactly. ``reverse`` flips every edge
    orientation, which negates both matrices.
    """
    hp = lattice.primal.incidence.toarray().astype(np.int64)
    hd = lattice.dual.incidence.toarray().astype(np.int64) * dual_signs(lattice)
    if reverse:
        hp, hd = -hp, -hd
    return hp, hd


def left_dangling(lattice: CodeLattice, side: str) -> np.ndarray:
    g = lattice.side(side)
    return (g.family == 0) & (g.ex == 0)


@dataclass(eq=False)
class SyndromeMap:
    """Check matrices restricted to the erroneous qudits.

    Syndromes are full-length vectors: all primal checks (node id order)
    followed by all dual checks.
    """

    lattice: CodeLattice
    d: int
    qudits: np.ndarray
    hp: np.ndarray     # (n_primal_checks, m) acting on z exponents
    hd: np.ndarray     # (n_dual_checks, m) acting on x exponents
    wind_p: np.ndarray
    wind_d: np.ndarray

    @property
    def m(self) -> int:
        return self.qudits.size

    @property
    def n_primal(self) -> int:
        return self.hp.shape[0]

    @property
    def n_checks(self) -> int:
        return self.hp.shape[0] + self.hd.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Block matrix from ``(z, x)`` exponent vectors to syndromes."""
        m = self.m
        out = np.zeros((self.n_checks, 2 * m), dtype=np.int64)
        out[: self.n_primal, :m] = self.hp
        out[self.n_primal:, m:] = self.hd
        return out

    def syndrome(self, x, z) -> np.ndarray:
        """Syndromes of exponent rows (``x``, ``z`` of shape ``(..., m)``)."""
        x = np.asarray(x, dtype=np.int64)
        z = np.asarray(z, dtype=np.int64)
        return np.concatenate([z @ self.hp.T, x @ self.hd.T], axis=-1) % self.d

    def primal_winding(self, z) -> np.ndarray:
        return (np.asarray(z, dtype=np.int64) @ self.wind_p) % self.d

    def dual_winding(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=np.int64) @ self.wind_d) % self.d


def syndrome_map(lattice: CodeLattice, pattern, d: int, reverse: bool = False) -> SyndromeMap:
    qudits = np.asarray(pattern.qudits if hasattr(pattern, "qudits") else pattern, dtype=np.int64)
    hp, hd = check_matrices(lattice, reverse)
    sign = dual_signs(lattice)
    return SyndromeMap(
        lattice,
        d,
        qudits,
        hp[:, qudits],
        hd[:, qudits],
        left_dangling(lattice, PRIMAL)[qudits].astype(np.int64),
        (left_dangling(lattice, DUAL) * sign)[qudits].astype(np.int64),
    )


@dataclass(frozen=True)
class KernelInfo:
    primal: np.ndarray          # generators acting on z exponents
    dual: np.ndarray            # generators acting on x exponents
    primal_windings: np.ndarray
    dual_windings: np.ndarray
    size: int

    @property
    def stabilizer_class(self) -> np.ndarray:
        """True for generators with zero winding on both sides."""
        return np.concatenate([self.primal_windings == 0, self.dual_windings == 0])


def kernel_and_windings(smap: SyndromeMap) -> KernelInfo:
    """Cycle spaces of both error subgraphs over Z_d, with winding labels."""
    gp, sp = kernel_mod(smap.hp, smap.d)
    gd, sd = kernel_mod(smap.hd, smap.d)
    return KernelInfo(
        gp, gd,
        smap.primal_winding(gp) if gp.size else np.zeros(0, np.int64),
        smap.dual_winding(gd) if gd.size else np.zeros(0, np.int64),
        sp * sd,
    )


def schedule_measurements(subgraph) -> list:
    """Leaf-first peeling order of one side's error subgraph.

    Each step ``(node, qudit)`` measures a real node with exactly one
    unresolved incident error edge, which that measurement resolves. Ready
    nodes are taken lowest id first. The dummy is never scheduled.
    """
    g = subgraph.geometry
    edges = [int(e) for e in subgraph.edges]
    incident: dict = {}
    for e in edges:
        for v in (int(g.tail[e]), int(g.head[e])):
            if v != g.dummy:
                incident.setdefault(v, set()).add(e)
    ready = [v for v, es in incident.items() if len(es) == 1]
    heapq.heapify(ready)
    steps = []
    while ready:
        u = heapq.heappop(ready)
        if len(incident[u]) != 1:
            continue
        (e,) = incident[u]
        steps.append((g.node_label(u), e))
        for v in (int(g.tail[e]), int(g.head[e])):
            if v != g.dummy:
                incident[v].discard(e)
                if len(incident[v]) == 1:
                    heapq.heappush(ready, v)
    if len(steps) != len(edges):
        raise PartialDiscretizationError(
            f"{subgraph.side} error subgraph contains a loop: only "
            f"{len(steps)} of {len(edges)} edges can be discretized"
        )
    return steps


def _peel(h, steps, g, target, col_of, d):
    """Solve ``h @ v = target`` along a peeling schedule."""
    v = np.zeros(h.shape[1], dtype=np.int64)
    for node, e in steps:
        r = g.node_index(node)
        c = col_of[e]
        rest = int(h[r] @ v) - int(h[r, c]) * int(v[c])
        v[c] = (int(h[r, c]) * (int(target[r]) - rest)) % d  # entries are +-1
    return v


def invert_syndrome_on_forest(smap: SyndromeMap, syndrome):
    """Unique ``(x, z)`` exponents with the given syndrome on a forest support."""
    from ..graph import ErrorSubgraph

    s = np.asarray(syndrome, dtype=np.int64) % smap.d
    if s.shape != (smap.n_checks,):
        raise InconsistentSyndromeError(
            f"syndrome has length {s.shape}, expected {smap.n_checks}"
        )
    lat = smap.lattice
    mask = np.zeros(lat.n_qudits, dtype=bool)
    mask[smap.qudits] = True
    col_of = {int(q): k for k, q in enumerate(smap.qudits)}
    sp, sd = s[: smap.n_primal], s[smap.n_primal:]
    steps_p = schedule_measurements(ErrorSubgraph(lat, PRIMAL, mask))
    steps_d = schedule_measurements(ErrorSubgraph(lat, DUAL, mask))
    z = _peel(smap.hp, steps_p, lat.primal, sp, col_of, smap.d)
    x = _peel(smap.hd, steps_d, lat.dual, sd, col_of, smap.d)
    if not np.array_equal(smap.syndrome(x, z), s):
        raise InconsistentSyndromeError("syndrome is not in the image of the syndrome map")
    return x, z
