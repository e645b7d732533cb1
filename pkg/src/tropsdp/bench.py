"""Random instances, phase-transition sweeps, and timing tables.

The generator draws each modulus i.i.d. uniformly from the rational grid
{0, 1/d, ..., 1} (d = 2^31 by default), gives diagonal entries a positive
tropical sign and off-diagonal entries a negative one, and completes
symmetrically.  Those choices make every instance well formed as soon as
m >= 2, so the game translation never needs a preprocessing pass.

Sweeps and benchmarks bypass the object pipeline: a generated instance is
fully dense, so its dynamic-programming operator is two dense max/min
reductions (`DenseInstance.step`).  The grid moduli are dyadic with
denominator 2^31, hence exactly representable in float64 — the dense loop
computes the same iterates the exact loop would, up to the rounding of the
averages themselves.
"""

from __future__ import annotations

import os
import platform
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ValidationError
from .pencil import Pencil
from .tropical import SignedTrop

DEFAULT_GRID = 2**31


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one random draw: sizes, seed, and the denominator of
    the rational grid standing in for U[0,1]."""

    n: int
    m: int
    seed: int
    entry_grid: int = DEFAULT_GRID

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValidationError("sizes must be positive")
        if self.seed < 0:
            raise ValidationError("seed must be a nonnegative 64-bit integer")
        if self.entry_grid < 2:
            raise ValidationError("entry grid denominator must be >= 2")


def _upper_triangle(m: int):
    """(i, j) pairs with i <= j, row-major — the fixed drawing order."""
    return [(i, j) for i in range(m) for j in range(i, m)]


def _draw_moduli(spec: GenSpec) -> np.ndarray:
    """Integer numerators, shape (n, m(m+1)/2): matrix-major, then the
    upper triangle of each matrix in row-major order."""
    rng = np.random.default_rng(spec.seed)
    count = spec.m * (spec.m + 1) // 2
    return rng.integers(0, spec.entry_grid + 1, size=(spec.n, count),
                        dtype=np.int64)


def gen_random(spec: GenSpec) -> Pencil:
    """Draw an exact random pencil: positive diagonals, negative
    off-diagonals, moduli uniform on the grid, symmetric."""
    numerators = _draw_moduli(spec)
    pairs = _upper_triangle(spec.m)
    entries = []
    for k in range(spec.n):
        for (i, j), p in zip(pairs, numerators[k]):
            val = Fraction(int(p), spec.entry_grid)
            sign = SignedTrop.pos(val) if i == j else SignedTrop.neg(val)
            entries.append((k, i, j, sign))
    return Pencil.from_entries(spec.n, spec.m, entries)


class DenseInstance:
    """Dense dynamic-programming operator for a generated instance.

    Stores the diagonal moduli as an (m, n) array and the off-diagonal
    moduli as an (n, P) array over the P = m(m-1)/2 unordered row pairs;
    one step is y_i = max_k (diag[i,k] + x_k) followed by
    F_k = min_p ((y_i + y_j)/2 - off[k,p]).
    """

    def __init__(self, spec: GenSpec):
        if spec.m < 2:
            raise ValidationError("dense instances need m >= 2 so Min can move")
        self.spec = spec
        numerators = _draw_moduli(spec).astype(np.float64) / spec.entry_grid
        pairs = _upper_triangle(spec.m)
        diag_cols = [t for t, (i, j) in enumerate(pairs) if i == j]
        off_cols = [t for t, (i, j) in enumerate(pairs) if i < j]
        self.diag = numerators[:, diag_cols].T.copy()   # (m, n)
        self.off = numerators[:, off_cols].copy()       # (n, P)
        self.row_i = np.array([pairs[t][0] for t in off_cols])
        self.row_j = np.array([pairs[t][1] for t in off_cols])

    @property
    def n(self) -> int:
        return self.spec.n

    def step(self, x: np.ndarray) -> np.ndarray:
        y = (self.diag + x).max(axis=1)
        pair_avg = 0.5 * (y[self.row_i] + y[self.row_j])
        return (pair_avg[np.newaxis, :] - self.off).min(axis=1)


def _iterate_dense(inst: DenseInstance, epsilon: float, max_iters: int):
    """Fixed-precision feasibility loop on the dense operator; returns
    (verdict, iterations)."""
    u = np.zeros(inst.n)
    iters = 0
    while u.max() > -epsilon and u.min() < epsilon:
        if iters >= max_iters:
            return "Indeterminate", iters
        u = inst.step(u)
        iters += 1
    return ("Infeasible" if u.max() <= -epsilon else "Feasible"), iters


@dataclass(frozen=True)
class CellResult:
    """Aggregate of one (n, m) cell of a sweep or benchmark."""

    n: int
    m: int
    samples: int
    feasible: int
    indeterminate: int
    mean_iters: Fraction
    mean_time_s: Optional[float]

    @property
    def feasible_ratio(self) -> Fraction:
        return Fraction(self.feasible, self.samples)

    def csv_row(self) -> str:
        time_field = "" if self.mean_time_s is None else f"{self.mean_time_s:.6f}"
        return (f"{self.n},{self.m},{self.samples},"
                f"{float(self.feasible_ratio):.6g},{self.indeterminate},"
                f"{float(self.mean_iters):.6g},{time_field}")


CSV_HEADER = "n,m,samples,feasible_ratio,indeterminate,mean_iters,mean_time_s"


def _worker_count() -> int:
    env = os.environ.get("TROPSDP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _sample_seed(seed: int, n: int, m: int, s: int) -> int:
    """Deterministic per-sample 64-bit seed, independent of scheduling."""
    return int(np.random.SeedSequence((seed, n, m, s)).generate_state(1)[0])


def _run_sample(spec: GenSpec, epsilon: float, max_iters: int, reps: int):
    """Solve one instance `reps` times; returns (verdict, iters,
    median wall time or None)."""
    inst = DenseInstance(spec)
    if reps <= 0:
        verdict, iters = _iterate_dense(inst, epsilon, max_iters)
        return verdict, iters, None
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        verdict, iters = _iterate_dense(inst, epsilon, max_iters)
        times.append(time.perf_counter() - start)
    return verdict, iters, statistics.median(times)


def _run_cell(n: int, m: int, samples: int, epsilon: float, seed: int,
              max_iters: int, reps: int, pool: ThreadPoolExecutor) -> CellResult:
    specs = [GenSpec(n, m, _sample_seed(seed, n, m, s)) for s in range(samples)]
    results = list(pool.map(
        lambda sp: _run_sample(sp, epsilon, max_iters, reps), specs))
    feasible = sum(1 for v, _, _ in results if v == "Feasible")
    indeterminate = sum(1 for v, _, _ in results if v == "Indeterminate")
    mean_iters = Fraction(sum(it for _, it, _ in results), samples)
    if reps > 0:
        mean_time = sum(t for _, _, t in results) / samples
    else:
        mean_time = None
    return CellResult(n, m, samples, feasible, indeterminate, mean_iters,
                      mean_time)


def phase_diagram(n_list: Sequence[int], m_list: Sequence[int], samples: int = 10,
                  epsilon: float = 1e-8, seed: int = 0, max_iters: int = 10**5,
                  timing: bool = True) -> list:
    """Feasibility ratio of random instances over a grid of sizes.

    Runs `samples` seeded instances per (n, m) cell; with timing disabled
    the output is byte-identical across runs (wall clock is the only
    nondeterministic column).
    """
    if samples < 1:
        raise ValidationError("need at least one sample per cell")
    reps = 1 if timing else 0
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        return [_run_cell(n, m, samples, epsilon, seed, max_iters, reps, pool)
                for n in n_list for m in m_list]


def benchmark(size_list: Iterable, samples: int = 10, epsilon: float = 1e-8,
              seed: int = 0, max_iters: int = 10**5) -> list:
    """Timing table over explicit (n, m) sizes, median-of-3 per instance."""
    if samples < 1:
        raise ValidationError("need at least one sample per size")
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        return [_run_cell(n, m, samples, epsilon, seed, max_iters, 3, pool)
                for n, m in size_list]


def to_csv(cells: Iterable[CellResult], hardware_header: bool = False) -> str:
    """Render results as CSV; the optional header comment discloses the
    machine the numbers came from."""
    lines = []
    if hardware_header:
        lines.append(f"# host: {platform.platform()}")
        lines.append(f"# cpu: {platform.processor() or 'unknown'}"
                     f", python {platform.python_version()}")
    lines.append(CSV_HEADER)
    lines.extend(cell.csv_row() for cell in cells)
    return "\n".join(lines) + "\n"
