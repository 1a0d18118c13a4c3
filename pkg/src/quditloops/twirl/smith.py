"""Smith normal form over the integers and kernels modulo composite d."""
from __future__ import annotations

from math import gcd

import numpy as np


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(a):
    """Return ``(U, D, V)`` with ``U @ A @ V == D``, U and V unimodular.

    D is diagonal with non-negative entries, each dividing the next.
    Plain Python integers throughout, so there is no overflow.
    """
    D = [[int(v) for v in row] for row in np.asarray(a, dtype=object).tolist()]
    m = len(D)
    n = len(D[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        for M in (D, U):
            M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, k):
        for M in (D, V):
            for row in M:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
            rest = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
            rest += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
            if rest:
                _, i, j = min(rest)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            for M in (D, U):
                M[t] = [-x for x in M[t]]
    return U, D, V


def kernel_mod(a, d: int):
    """Generators and size of ``{x in Z_d^n : A x = 0 mod d}``.

    Returns ``(generators, size)`` with generators as rows of an int array.
    """
    a = np.asarray(a, dtype=np.int64)
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64), 1
    if m == 0:
        return np.eye(n, dtype=np.int64), d ** n
    _, D, V = smith_normal_form(a)
    Vm = np.array(V, dtype=object)
    gens = []
    size = 1
    for k in range(n):
        delta = D[k][k] if k < m else 0
        g = d if delta == 0 else gcd(delta, d)
        if g == 1:
            continue
        size *= g
        gens.append([int(v) * (d // g) % d for v in Vm[:, k]])
    return np.array(gens, dtype=np.int64).reshape(len(gens), n), size
