"""I.i.d. Bernoulli error patterns with per-sample counter-based seeding.

Each sample draws from a Philox generator whose 128-bit key is built from
``(master_seed, sample_index)``, so a pattern depends only on that pair and
never on how samples are distributed across workers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .lattice import CodeLattice

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    sample_index: int

    def __post_init__(self):
        for name in ("master_seed", "sample_index"):
            v = getattr(self, name)
            if not 0 <= int(v) <= _MASK64:
                raise ParameterError(f"{name} must be a 64-bit unsigned integer, got {v}")

    def generator(self) -> np.random.Generator:
        key = (int(self.master_seed) & _MASK64) | ((int(self.sample_index) & _MASK64) << 64)
        return np.random.Generator(np.random.Philox(key=key))


class ErrorPattern:
    """Set of erroneous qudits of one lattice, stored as a boolean mask."""

    __slots__ = ("lattice", "mask", "count")

    def __init__(self, lattice: CodeLattice, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (lattice.n_qudits,):
            raise ParameterError(
                f"mask length {mask.shape} does not match {lattice.n_qudits} qudits"
            )
        self.lattice = lattice
        self.mask = mask
        self.count = int(np.count_nonzero(mask))

    @property
    def qudits(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __len__(self):
        return self.count

    def __repr__(self):
        return f"ErrorPattern({self.lattice!r}, count={self.count})"

    def to_line(self) -> str:
        return ",".join(str(q) for q in self.qudits)


def sample_pattern(lattice: CodeLattice, p: float, seed: SeedSpec) -> ErrorPattern:
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    rng = seed.generator()
    return ErrorPattern(lattice, rng.random(lattice.n_qudits) < p)


def pattern_from_list(lattice: CodeLattice, qudits) -> ErrorPattern:
    idx = [int(q) for q in qudits]
    if len(set(idx)) != len(idx):
        raise ParameterError("duplicate qudit index in pattern")
    mask = np.zeros(lattice.n_qudits, dtype=bool)
    for q in idx:
        if not 0 <= q < lattice.n_qudits:
            raise ParameterError(f"qudit {q} out of range [0, {lattice.n_qudits})")
        mask[q] = True
    return ErrorPattern(lattice, mask)


def parse_pattern_line(lattice: CodeLattice, line: str) -> ErrorPattern:
    """Inverse of :meth:`ErrorPattern.to_line`; blank lines give the empty pattern."""
    items = [tok.strip() for tok in line.strip().split(",") if tok.strip()]
    try:
        qudits = [int(tok) for tok in items]
    except ValueError as exc:
        raise ParameterError(f"malformed pattern line {line!r}") from exc
    return pattern_from_list(lattice, qudits)


def read_pattern_file(lattice: CodeLattice, path) -> ErrorPattern:
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    return parse_pattern_line(lattice, lines[0] if lines else "")
