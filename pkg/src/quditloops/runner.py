"""Sample-parallel Monte-Carlo driver for one grid point.

Every sample draws from its own counter-based stream keyed by
``(master_seed, sample_index)``. Workers return records for contiguous index
chunks and the parent concatenates them in index order, so results do not
depend on the worker count.
"""
from __future__ import annotations

import multiprocessing as mp
import os
from typing import Callable, Optional

from .graph import SampleRecord, loop_metrics
from .lattice import CodeLattice, CodeShape, build
from .metrics import ExperimentRecord, aggregate
from .sampling import SeedSpec, sample_pattern

_WORKER_LATTICE: Optional[CodeLattice] = None


def sample_records(lattice: CodeLattice, p: float, seed: int, start: int, stop: int) -> list:
    out = []
    for k in range(start, stop):
        pattern = sample_pattern(lattice, p, SeedSpec(seed, k))
        out.append(loop_metrics(lattice, pattern, k))
    return out


def _init_worker(shape):
    global _WORKER_LATTICE
    # forked children inherit the parent's lattice; others rebuild it
    if _WORKER_LATTICE is None or _WORKER_LATTICE.shape != shape:
        _WORKER_LATTICE = build(shape)


def _run_chunk(args):
    p, seed, start, stop = args
    return sample_records(_WORKER_LATTICE, p, seed, start, stop)


def _chunks(n: int, workers: int):
    size = max(1, min(256, -(-n // (4 * workers))))
    return [(s, min(n, s + size)) for s in range(0, n, size)]


def default_workers() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


def run_samples(
    shape,
    p: float,
    n_samples: int,
    seed: int,
    workers: int = 1,
    lattice: Optional[CodeLattice] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> list:
    """Per-sample records for indices ``0 .. n_samples-1``, in index order."""
    shape = shape if isinstance(shape, CodeShape) else CodeShape(*shape)
    lattice = lattice if lattice is not None else build(shape)
    chunks = _chunks(n_samples, workers)
    records: list[SampleRecord] = []
    if workers <= 1 or len(chunks) <= 1:
        for start, stop in chunks:
            records.extend(sample_records(lattice, p, seed, start, stop))
            if progress:
                progress(len(records), n_samples)
        return records

    global _WORKER_LATTICE
    _WORKER_LATTICE = lattice
    methods = mp.get_all_start_methods()
    ctx = mp.get_context("fork" if "fork" in methods else "spawn")
    try:
        with ctx.Pool(workers, initializer=_init_worker, initargs=(shape,)) as pool:
            for part in pool.imap(_run_chunk, [(p, seed, a, b) for a, b in chunks]):
                records.extend(part)
                if progress:
                    progress(len(records), n_samples)
    finally:
        _WORKER_LATTICE = None
    return records


def run_point(
    shape,
    p: float,
    n_samples: int,
    seed: int,
    workers: int = 1,
    lattice: Optional[CodeLattice] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> ExperimentRecord:
    shape = shape if isinstance(shape, CodeShape) else CodeShape(*shape)
    records = run_samples(shape, p, n_samples, seed, workers, lattice, progress)
    return aggregate(records, shape.n_h, shape.n_v, p, seed)
