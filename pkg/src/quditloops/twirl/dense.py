"""Brute-force state-vector oracle for tiny codes.

The state is a tensor of shape ``(d,) * Q``. Vertex checks
``A_u = prod X^(H_p[u])`` are applied as axis rolls and plaquette checks
``B_w = prod Z^(H_d[w])`` are diagonal. Outcome label ``t`` means eigenvalue
``w^(-t)`` for a vertex check and ``w^t`` for a plaquette check, matching
:meth:`SyndromeMap.syndrome`.
"""
from __future__ import annotations

import numpy as np

from ..errors import ParameterError, ResourceError
from ..lattice import build
from .algebra import ErrorModel, hw_operator, omega
from .syndrome import check_matrices

ORACLE_SHAPES = ((2, 2), (3, 2), (2, 3))
MAX_DIMENSION = 1 << 20
_PRUNE = 1e-15


def _vertex_power(psi, row, k, d):
    shifts = tuple(int(k * c) % d for c in row if c)
    axes = tuple(int(a) for a in np.flatnonzero(row))
    return np.roll(psi, shifts, axis=axes) if axes else psi


def _labels(hrow, Q, d):
    """Per-basis-state value of ``sum_e hrow[e] * digit_e mod d``."""
    grids = np.indices((d,) * Q, sparse=True)
    out = np.zeros((1,) * Q, dtype=np.int64)
    for e in np.flatnonzero(hrow):
        out = out + int(hrow[e]) * grids[e]
    return np.broadcast_to(out % d, (d,) * Q)


def _vertex_split(psi, row, d):
    w = omega(d)
    powers = [_vertex_power(psi, row, k, d) for k in range(d)]
    return [sum(w ** (t * k % d) * powers[k] for k in range(d)) / d for t in range(d)]


def code_state(lattice, d: int, hp=None) -> np.ndarray:
    """+1 eigenstate of all checks and of the logical Z string."""
    if hp is None:
        hp, _ = check_matrices(lattice)
    Q = lattice.n_qudits
    psi = np.zeros((d,) * Q, dtype=complex)
    psi[(0,) * Q] = 1.0
    for row in hp:
        psi = _vertex_split(psi, row, d)[0]
    return psi / np.linalg.norm(psi)


def apply_single(psi, op, q):
    return np.moveaxis(np.tensordot(op, psi, axes=([1], [q])), 0, q)


def dense_oracle(shape, model: ErrorModel, pattern, max_dimension: int = MAX_DIMENSION) -> dict:
    """Exact syndrome probabilities by projective measurement of every check."""
    shape = tuple(shape)
    if shape not in ORACLE_SHAPES:
        raise ParameterError(f"dense oracle supports shapes {ORACLE_SHAPES}, got {shape}")
    lattice = build(shape)
    d, Q = model.d, lattice.n_qudits
    if d ** Q > max_dimension:
        raise ResourceError(f"state dimension {d}**{Q} exceeds {max_dimension}")
    hp, hd = check_matrices(lattice)
    psi = code_state(lattice, d, hp)
    F = model.matrix
    qudits = pattern.qudits if hasattr(pattern, "qudits") else pattern
    for q in qudits:
        psi = apply_single(psi, F, int(q))

    branches = [((), psi)]
    for row in hp:
        nxt = []
        for key, vec in branches:
            for t, part in enumerate(_vertex_split(vec, row, d)):
                if np.vdot(part, part).real > _PRUNE:
                    nxt.append((key + (t,), part))
        branches = nxt
    for row in hd:
        lab = _labels(row, Q, d)
        nxt = []
        for key, vec in branches:
            for t in range(d):
                part = np.where(lab == t, vec, 0)
                if np.vdot(part, part).real > _PRUNE:
                    nxt.append((key + (t,), part))
        branches = nxt
    return {key: float(np.vdot(vec, vec).real) for key, vec in branches}


def check_operator(row, d: int, kind: str) -> np.ndarray:
    """Dense matrix of a vertex (``'x'``) or plaquette (``'z'``) check."""
    out = np.ones((1, 1), dtype=complex)
    for c in row:
        c = int(c) % d
        op = hw_operator(c, 0, d) if kind == "x" else hw_operator(0, c, d)
        out = np.kron(out, op)
    return out


def stabilizer_projector(shape, d: int, max_dimension: int = 1 << 10) -> np.ndarray:
    """Product of all +1 check projectors as an explicit matrix."""
    lattice = build(shape)
    Q = lattice.n_qudits
    if d ** Q > max_dimension:
        raise ResourceError(f"matrix dimension {d}**{Q} exceeds {max_dimension}")
    hp, hd = check_matrices(lattice)
    proj = np.eye(d ** Q, dtype=complex)
    for rows, kind in ((hp, "x"), (hd, "z")):
        for row in rows:
            c = check_operator(row, d, kind)
            p = sum(np.linalg.matrix_power(c, k) for k in range(d)) / d
            proj = proj @ p
    return proj
