"""Heisenberg-Weyl operators, error amplitudes and multi-qudit Pauli terms.

Conventions: ``X|k> = |k+1 mod d>``, ``Z|k> = w^k |k>`` with
``w = exp(2 pi i / d)``, hence ``X^a Z^b = w^(-ab) Z^b X^a``. A Pauli term
is written in normal order ``phase * prod_q X_q^(x_q) Z_q^(z_q)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from ..errors import ParameterError, ResourceError, ValidationError

UNITARY_ATOL = 1e-10
MAX_EXPANSION_QUDITS = 8
MAX_EXPANSION_TERMS = 1 << 20


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def shift(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock(d: int) -> np.ndarray:
    return np.diag(omega(d) ** np.arange(d))


def hw_operator(i: int, j: int, d: int) -> np.ndarray:
    """X^i Z^j as a dense d x d matrix."""
    return np.linalg.matrix_power(shift(d), i % d) @ np.linalg.matrix_power(clock(d), j % d)


def _is_unitary(u: np.ndarray, atol=UNITARY_ATOL) -> bool:
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        u.conj().T @ u, np.eye(u.shape[0]), atol=atol, rtol=0
    )


def f_from_matrix(u) -> np.ndarray:
    """Amplitudes f[i, j] = Tr((X^i Z^j)^dagger U) / d of a unitary U."""
    u = np.asarray(u, dtype=complex)
    if not _is_unitary(u):
        raise ValidationError("matrix is not unitary within 1e-10")
    d = u.shape[0]
    f = np.empty((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            f[i, j] = np.trace(hw_operator(i, j, d).conj().T @ u) / d
    return f


def matrix_from_f(f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    d = f.shape[0]
    return sum(f[i, j] * hw_operator(i, j, d) for i in range(d) for j in range(d))


@dataclass(frozen=True, eq=False)
class ErrorModel:
    """Single-qudit unitary error ``F = sum f[i,j] X^i Z^j`` applied with probability p."""

    d: int
    f: np.ndarray
    p: float = 1.0

    def __post_init__(self):
        f = np.asarray(self.f, dtype=complex)
        if self.d < 2 or f.shape != (self.d, self.d):
            raise ValidationError(f"amplitude table must be {self.d}x{self.d}")
        if abs(np.sum(np.abs(f) ** 2) - 1.0) > UNITARY_ATOL:
            raise ValidationError("sum |f|^2 differs from 1")
        if not _is_unitary(matrix_from_f(f)):
            raise ValidationError("reconstructed F is not unitary")
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "f", f)

    @classmethod
    def from_matrix(cls, u, p: float = 1.0) -> "ErrorModel":
        u = np.asarray(u, dtype=complex)
        return cls(u.shape[0], f_from_matrix(u), p)

    @property
    def matrix(self) -> np.ndarray:
        return matrix_from_f(self.f)


def clock_rotation(d: int, theta: float) -> np.ndarray:
    """exp(i theta (Z + Z^dagger) / 2); equals exp(i theta Z) for qubits."""
    z = clock(d)
    return expm(0.5j * theta * (z + z.conj().T))


def random_unitary(d: int, seed: int) -> np.ndarray:
    return unitary_group.rvs(d, random_state=np.random.default_rng(seed))


def builtin_unitary(name: str, d: int, theta: float = np.pi / 4, seed: int = 0) -> np.ndarray:
    if name == "identity":
        return np.eye(d, dtype=complex)
    if name == "shift":
        return shift(d)
    if name == "phase":
        return clock(d)
    if name == "clock-rotation":
        return clock_rotation(d, theta)
    if name == "random":
        return random_unitary(d, seed)
    raise ParameterError(f"unknown built-in unitary {name!r}")


def read_matrix_file(path) -> np.ndarray:
    """Rows of comma-separated ``re,im`` pairs, one matrix row per line."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                vals = [float(t) for t in line.replace(";", ",").replace(" ", ",").split(",") if t]
            except ValueError as exc:
                raise ParameterError(f"malformed matrix row {line!r}") from exc
            if len(vals) % 2:
                raise ParameterError(f"odd number of real values in row {line!r}")
            rows.append([complex(re, im) for re, im in zip(vals[0::2], vals[1::2])])
    mat = np.array(rows, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ParameterError("matrix file must describe a square matrix")
    return mat


class PauliTerm(NamedTuple):
    qudits: tuple
    x: tuple
    z: tuple
    phase: complex
    amplitude: complex


class Expansion:
    """All ``d^(2m)`` Pauli terms of ``F_q1 ... F_qm`` in array form.

    Row ``t`` of ``xs``/``zs`` holds the per-qudit exponents of term ``t``;
    its amplitude is the product of the matching ``f`` entries.
    """

    def __init__(self, qudits, d, xs, zs, amps):
        self.qudits = tuple(int(q) for q in qudits)
        self.d = d
        self.xs = xs
        self.zs = zs
        self.amps = amps

    def __len__(self):
        return self.amps.size

    def __getitem__(self, t) -> PauliTerm:
        return PauliTerm(
            self.qudits, tuple(int(v) for v in self.xs[t]),
            tuple(int(v) for v in self.zs[t]), 1.0 + 0j, complex(self.amps[t]),
        )

    def __iter__(self):
        return (self[t] for t in range(len(self)))


def expand_error(pattern, model: ErrorModel, max_qudits=MAX_EXPANSION_QUDITS,
                 max_terms=MAX_EXPANSION_TERMS) -> Expansion:
    qudits = pattern.qudits if hasattr(pattern, "qudits") else np.asarray(pattern)
    m = len(qudits)
    d = model.d
    if m > max_qudits:
        raise ResourceError(f"{m} erroneous qudits exceed the expansion limit {max_qudits}")
    n_terms = d ** (2 * m)
    if n_terms > max_terms:
        raise ResourceError(f"{n_terms} expansion terms exceed the limit {max_terms}")
    digits = np.indices((d * d,) * m).reshape(m, -1).T if m else np.zeros((1, 0), int)
    xs, zs = np.divmod(digits, d)
    amps = np.ones(n_terms, dtype=complex)
    for k in range(m):
        amps *= model.f[xs[:, k], zs[:, k]]
    return Expansion(qudits, d, xs.astype(np.int64), zs.astype(np.int64), amps)


def multiply(a: PauliTerm, b: PauliTerm, d: int) -> PauliTerm:
    """Normal-ordered product ``a * b`` (amplitudes multiply too)."""
    xa, za, xb, zb = (np.asarray(v, dtype=np.int64) for v in (a.x, a.z, b.x, b.z))
    # X^xa Z^za X^xb Z^zb = w^(za.xb) X^(xa+xb) Z^(za+zb)
    ph = omega(d) ** (int(za @ xb) % d)
    return PauliTerm(
        a.qudits, tuple(int(v) for v in (xa + xb) % d), tuple(int(v) for v in (za + zb) % d),
        a.phase * b.phase * ph, a.amplitude * b.amplitude,
    )


def adjoint(a: PauliTerm, d: int) -> PauliTerm:
    x, z = np.asarray(a.x, dtype=np.int64), np.asarray(a.z, dtype=np.int64)
    # (X^x Z^z)^dagger = Z^-z X^-x = w^(xz) X^-x Z^-z
    ph = omega(d) ** (int(x @ z) % d)
    return PauliTerm(
        a.qudits, tuple(int(v) for v in (-x) % d), tuple(int(v) for v in (-z) % d),
        np.conj(a.phase) * ph, np.conj(a.amplitude),
    )


def term_matrix(term: PauliTerm, d: int) -> np.ndarray:
    """Dense ``phase * prod_q X^x Z^z`` over the term's qudits (no amplitude)."""
    out = np.ones((1, 1), dtype=complex)
    for x, z in zip(term.x, term.z):
        out = np.kron(out, hw_operator(x, z, d))
    return term.phase * out
