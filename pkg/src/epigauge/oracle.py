"""Brute-force lattice oracles: ground truth at desk scale.

Grid suprema reported here are *lower bounds* of the true suprema (a finite
scan can miss the maximizer); they are never presented as certificates.
That direction is exactly what makes them useful as independent checks of
certified bounds: oracle value <= certified bound must always hold.

Determinism: lattice iteration order is fixed (lexicographic), reductions
are order-independent (max / min of floats is exact), and tie lists are
assembled in iteration order regardless of the number of worker threads,
so serial and parallel runs produce bit-identical results.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .core import (
    TAU,
    ArgminSet,
    ClosedBall,
    FinitePointSet,
    Func,
    Point,
)
from .errors import DomainError, OracleCapError, PreconditionError

__all__ = [
    "LATTICE_CAP",
    "Grid",
    "LevelGrid",
    "ArgminResult",
    "grid_sup_abs_diff",
    "grid_gauge",
    "grid_argmin",
    "dist_to_set",
]

LATTICE_CAP: int = 10**8
"""Hard cap on scanned lattice size (cube count before ball filtering, and
on the base x level product for gauge scans).  Exceeding it is an error:
these oracles are exhaustive by design and must not silently subsample."""

_CHUNK = 4096  # fixed chunk size => identical work splits for any thread count


def _axis_kmax(radius: float, step: float) -> int:
    if not (step > 0) or not math.isfinite(step):
        raise PreconditionError(f"grid step must be finite and > 0, got {step!r}")
    if not (radius > 0) or not math.isfinite(radius):
        raise PreconditionError(f"grid radius must be finite and > 0, got {radius!r}")
    return int(math.floor((radius / step) * (1.0 + TAU) + TAU))


def _axis_values(radius: float, step: float, kmax: int) -> tuple[float, ...]:
    """Symmetric 1-d lattice ``k*step`` covering ``[-radius, radius]``.

    Includes the origin always, and ``+/-radius`` itself whenever
    ``radius/step`` is integral (up to float slack).  Values are generated
    as ``k * step`` with integer ``k`` so that halving the step yields a
    bit-identical superset lattice.
    """
    bound = radius * (1.0 + TAU) + TAU
    return tuple(k * step for k in range(-kmax, kmax + 1) if abs(k * step) <= bound)


@dataclass(frozen=True)
class Grid:
    """Axis-aligned lattice on the cube ``[-radius, radius]^dim`` filtered
    to the closed ball ``||x|| <= radius``.

    The size cap is checked on the unfiltered cube count (the scan upper
    bound).  Iteration is lexicographic in coordinates.
    """

    dim: int
    radius: float
    step: float
    axis: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise PreconditionError(f"grid dim must be an integer >= 1, got {self.dim!r}")
        kmax = _axis_kmax(self.radius, self.step)
        if (2 * kmax + 1) ** self.dim > LATTICE_CAP:
            raise OracleCapError(
                f"lattice of {2 * kmax + 1}^{self.dim} cube points exceeds cap {LATTICE_CAP}"
            )
        object.__setattr__(self, "axis", _axis_values(self.radius, self.step, kmax))

    def cube_size(self) -> int:
        return len(self.axis) ** self.dim

    def points(self) -> Iterator[Point]:
        if self.dim == 1:
            for v in self.axis:
                yield Point((v,))
            return
        bound = self.radius * (1.0 + TAU) + TAU
        for coords in itertools.product(self.axis, repeat=self.dim):
            if math.sqrt(sum(c * c for c in coords)) <= bound:
                yield Point(coords)

    def refine(self) -> "Grid":
        """Halve the step.  The refined lattice contains this one exactly
        (bit-identical coordinates), so scan suprema are monotone under
        refinement."""
        return Grid(self.dim, self.radius, self.step / 2.0)


@dataclass(frozen=True)
class LevelGrid:
    """Lattice ``k*step_t`` on the level band ``[-M, M]``, with both
    endpoints always included."""

    M: float
    step_t: float
    values: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (self.M > 0) or not math.isfinite(self.M):
            raise PreconditionError(f"level bound M must be finite and > 0, got {self.M!r}")
        kmax = _axis_kmax(self.M, self.step_t)
        if 2 * kmax + 3 > LATTICE_CAP:
            raise OracleCapError(
                f"level lattice of {2 * kmax + 3} points exceeds cap {LATTICE_CAP}")
        vals = set(_axis_values(self.M, self.step_t, kmax))
        vals.add(-self.M)
        vals.add(self.M)
        object.__setattr__(self, "values", tuple(sorted(vals)))

    def refine(self) -> "LevelGrid":
        return LevelGrid(self.M, self.step_t / 2.0)


@dataclass(frozen=True)
class ArgminResult:
    """Minimal lattice value and every lattice point attaining it within
    the tie tolerance, in lexicographic order."""

    points: tuple[Point, ...]
    value: float


# ---------------------------------------------------------------------------
# Scan machinery
# ---------------------------------------------------------------------------


def _check_domains(grid: Grid, *funcs: Func) -> None:
    for f in funcs:
        if f.dim != grid.dim:
            raise DomainError(
                f"grid dimension {grid.dim} does not match function "
                f"{f.label or '<unnamed>'} of dimension {f.dim}"
            )
        if grid.radius > f.domain_radius * (1.0 + TAU) + TAU:
            raise DomainError(
                f"grid radius {grid.radius!r} exceeds domain radius "
                f"{f.domain_radius!r} of function {f.label or '<unnamed>'}"
            )


def _chunks(grid: Grid) -> Iterator[list[Point]]:
    buf: list[Point] = []
    for p in grid.points():
        buf.append(p)
        if len(buf) >= _CHUNK:
            yield buf
            buf = []
    if buf:
        yield buf


def _map_chunks(worker, grid: Grid, threads: int):
    """Apply ``worker`` to every chunk, returning results in chunk order.

    Chunk boundaries are independent of ``threads``, and the downstream
    reductions are either exact (max/min) or performed in chunk order, so
    the thread count never changes any output bit."""
    if threads <= 1:
        return [worker(c) for c in _chunks(grid)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, _chunks(grid)))


def grid_sup_abs_diff(f: Func, g: Func, grid: Grid, threads: int = 1) -> float:
    """Max of ``|f - g|`` over the lattice: a lower bound on the true
    supremum over the ball."""
    _check_domains(grid, f, g)

    def worker(chunk: list[Point]) -> float:
        m = 0.0
        for p in chunk:
            d = abs(f(p) - g(p))
            if d > m:
                m = d
        return m

    results = _map_chunks(worker, grid, threads)
    return max(results, default=0.0)


def grid_gauge(f: Func, g: Func, grid: Grid, lgrid: LevelGrid, threads: int = 1) -> float:
    """Max of the pointwise vertical discrepancy over lattice x level
    lattice: a lower bound on the true cylinder gauge.

    Function values are computed once per base point; the level sweep is
    vectorized with the same case split as ``pointwise_discrepancy``, so
    the scan result is dominated by ``grid_sup_abs_diff`` on the same base
    lattice exactly (no tolerance needed).
    """
    _check_domains(grid, f, g)
    if grid.cube_size() * len(lgrid.values) > LATTICE_CAP:
        raise OracleCapError(
            f"gauge scan of {grid.cube_size()} x {len(lgrid.values)} points exceeds "
            f"cap {LATTICE_CAP}"
        )
    tvals = np.asarray(lgrid.values, dtype=np.float64)

    def worker(chunk: list[Point]) -> float:
        m = 0.0
        for p in chunk:
            fa = f(p)
            fb = g(p)
            hi = fa if fa > fb else fb
            lo = fb if fa > fb else fa
            d = hi - lo
            disc = np.where(tvals >= hi, 0.0, np.where(tvals <= lo, d, hi - tvals))
            dm = float(disc.max())
            if dm > m:
                m = dm
        return m

    results = _map_chunks(worker, grid, threads)
    return max(results, default=0.0)


def grid_argmin(f: Func, grid: Grid, threads: int = 1, tie_tol: float = TAU) -> ArgminResult:
    """All lattice minimizers of ``f`` (ties within ``tie_tol`` of the
    minimal value), lexicographically ordered.

    Ties are the expected case, not the edge case: plateau minima arise
    naturally from clipped constructions.
    """
    _check_domains(grid, f)

    def worker(chunk: list[Point]) -> tuple[float, list[tuple[Point, float]]]:
        best = math.inf
        vals = []
        for p in chunk:
            v = f(p)
            vals.append((p, v))
            if v < best:
                best = v
        cands = [(p, v) for (p, v) in vals if v <= best + tie_tol]
        return best, cands

    results = _map_chunks(worker, grid, threads)
    if not results:
        raise PreconditionError("grid has no points")
    global_min = min(r[0] for r in results)
    tied = tuple(p for _, cands in results for (p, v) in cands if v <= global_min + tie_tol)
    return ArgminResult(points=tied, value=global_min)


def dist_to_set(x: Point, argmin_set: ArgminSet) -> float:
    """Euclidean distance from ``x`` to a minimizer set.

    Exact (single rounded expression) for the two supported
    representations: finite point sets and closed balls.
    """
    if isinstance(argmin_set, FinitePointSet):
        if argmin_set.dim != x.dim:
            raise DomainError(f"dimension mismatch: point {x.dim}, set {argmin_set.dim}")
        return min(x.dist(p) for p in argmin_set.points)
    if isinstance(argmin_set, ClosedBall):
        if argmin_set.dim != x.dim:
            raise DomainError(f"dimension mismatch: point {x.dim}, set {argmin_set.dim}")
        d = x.dist(argmin_set.center)
        return d - argmin_set.radius if d > argmin_set.radius else 0.0
    raise PreconditionError(f"unsupported minimizer-set representation: {type(argmin_set).__name__}")
