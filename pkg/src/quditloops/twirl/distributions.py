"""Coherent and Pauli-twirled syndrome distributions of an expanded error.

The code state is fixed as the +1 eigenstate of every check and of the
logical Z string. In that frame ``<psi| X^a Z^b |psi>`` equals 1 when ``b``
lies in the primal cycle space and ``a`` in the dual cycle space with zero
dual winding, and vanishes otherwise.
"""
from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from .algebra import Expansion, omega
from .syndrome import SyndromeMap

LOGICAL_Z_PLUS = "logical-z-plus"


def _classes(expansion: Expansion, smap: SyndromeMap):
    """Group terms by syndrome: ``(keys, order, bounds)``.

    Terms ``order[bounds[k]:bounds[k+1]]`` share the full syndrome ``keys[k]``.
    Only checks touched by the support can be nonzero, so those are packed
    into one integer per term when that fits in 63 bits.
    """
    d = smap.d
    tp = np.flatnonzero(np.any(smap.hp, axis=1))
    td = np.flatnonzero(np.any(smap.hd, axis=1))
    part = np.concatenate(
        [(expansion.zs @ smap.hp[tp].T) % d, (expansion.xs @ smap.hd[td].T) % d], axis=1
    )
    k = part.shape[1]
    if k * np.log2(d) < 62:
        code = part @ (d ** np.arange(k, dtype=np.int64))
        order = np.argsort(code, kind="stable")
        starts = np.flatnonzero(np.diff(code[order], prepend=-1))
    else:
        _, inverse = np.unique(part, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        order = np.argsort(inverse, kind="stable")
        starts = np.flatnonzero(np.diff(inverse[order], prepend=-1))
    bounds = np.append(starts, order.size)
    keys = np.zeros((starts.size, smap.n_checks), dtype=np.int64)
    reps = part[order[starts]]
    keys[:, tp] = reps[:, : tp.size]
    keys[:, smap.n_primal + td] = reps[:, tp.size:]
    return keys, order, bounds


def _as_dict(keys, values) -> dict:
    return {tuple(row): float(v) for row, v in zip(keys.tolist(), values)}


def pta_distribution(expansion: Expansion, smap: SyndromeMap) -> dict:
    """Diagonal (twirled) weights: sum of |c_P|^2 over each syndrome class."""
    keys, order, bounds = _classes(expansion, smap)
    w = np.abs(expansion.amps[order]) ** 2
    return _as_dict(keys, np.add.reduceat(w, bounds[:-1]) if w.size else w)


def coherent_distribution(expansion: Expansion, smap: SyndromeMap,
                          logical_frame: str = LOGICAL_Z_PLUS) -> dict:
    """Exact syndrome probabilities with interference inside each class.

    For ``P = X^x Z^z`` and ``P' = X^x' Z^z'`` in one class,
    ``P'^dagger P = w^(-z'.(x - x')) X^(x-x') Z^(z-z')``.
    """
    if logical_frame != LOGICAL_Z_PLUS:
        raise ParameterError(f"unsupported logical frame {logical_frame!r}")
    d = smap.d
    w = omega(d)
    keys, order, bounds = _classes(expansion, smap)
    amps = expansion.amps
    sizes = np.diff(bounds)
    out = np.abs(amps[order[bounds[:-1]]]) ** 2  # exact for singleton classes
    wind = smap.dual_winding(expansion.xs)
    for k in np.flatnonzero(sizes > 1):
        idx = order[bounds[k]:bounds[k + 1]]
        c = amps[idx]
        x, z = expansion.xs[idx], expansion.zs[idx]
        cross = (x @ z.T) % d                       # x_a . z_b
        own = np.diagonal(cross)                    # x_b . z_b
        phase = w ** ((own[None, :] - cross) % d)
        same = wind[idx][:, None] == wind[idx][None, :]
        out[k] = (c @ (np.where(same, phase, 0) @ np.conj(c))).real
    return _as_dict(keys, out)


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
