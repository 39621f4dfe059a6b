"""Exact enumeration of self-avoiding walks on the d-dimensional cubic lattice.

Counts c(n) and the exact squared-displacement sums behind s(n), over the
infinite lattice (walks of length n never leave a box of side 2n+1 centered
at the origin).  The hot loop is a compiled depth-first backtracker; the
first step is pinned to one axis and the totals multiplied by 2d, which the
hypercubic symmetry makes exact for both c(n) and the displacement sums.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from .analysis import accelerated_limit
from .errors import check_budget
from .tables import EstimateReport, SeriesTable


@dataclass
class WalkCensus:
    dim: int
    max_len: int
    counts: SeriesTable
    sq_disp_sums: SeriesTable


@njit(cache=True, nogil=True)
def _saw_kernel(occ, start_pos, start_coords, start_sq, deltas, axes, signs,
                n_max, depth0, counts, sqsums):
    """DFS over all extensions of a marked prefix; tallies depths > depth0."""
    ndirs = deltas.shape[0]
    dirs = np.full(n_max + 1, -1, np.int64)
    pos_stack = np.zeros(n_max + 1, np.int64)
    sq_stack = np.zeros(n_max + 1, np.int64)
    coords = start_coords.copy()
    pos_stack[depth0] = start_pos
    sq_stack[depth0] = start_sq
    depth = depth0
    dirs[depth] = -1
    while True:
        dirs[depth] += 1
        if dirs[depth] == ndirs:
            if depth == depth0:
                break
            depth -= 1
            d = dirs[depth]
            occ[pos_stack[depth + 1]] = 0
            coords[axes[d]] -= signs[d]
            continue
        d = dirs[depth]
        npos = pos_stack[depth] + deltas[d]
        if occ[npos]:
            continue
        a = axes[d]
        s = signs[d]
        nsq = sq_stack[depth] + 2 * s * coords[a] + 1
        coords[a] += s
        depth += 1
        pos_stack[depth] = npos
        sq_stack[depth] = nsq
        occ[npos] = 1
        counts[depth] += 1
        sqsums[depth] += nsq
        if depth == n_max:
            occ[npos] = 0
            coords[a] -= s
            depth -= 1
            continue
        dirs[depth] = -1


def _directions(d):
    axes, signs = [], []
    for a in range(d):
        for s in (1, -1):
            axes.append(a)
            signs.append(s)
    return np.array(axes, np.int64), np.array(signs, np.int64)


def _prefixes(d, length):
    """All self-avoiding prefixes with first step +axis0, as coordinate paths."""
    origin = (0,) * d
    first = tuple(1 if i == 0 else 0 for i in range(d))
    paths = [[origin, first]]
    for _ in range(length - 1):
        grown = []
        for path in paths:
            tail = path[-1]
            body = set(path)
            for a in range(d):
                for s in (1, -1):
                    nxt = tuple(c + (s if i == a else 0)
                                for i, c in enumerate(tail))
                    if nxt not in body:
                        grown.append(path + [nxt])
        paths = grown
    return paths


def enumerate_saw(d: int, n_max: int, threads: int = 1, budget=None) -> WalkCensus:
    """Count all n-step self-avoiding walks from the origin for n <= n_max."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    # loose upper bound on DFS nodes: non-reversing walks
    projected = sum(2 * d * (2 * d - 1) ** (k - 1) for k in range(1, n_max + 1))
    check_budget(projected, budget, "SAW enumeration")
    side = 2 * n_max + 1
    if side**d > 1 << 28:
        check_budget(side**d, budget, "SAW occupancy box")

    counts = [0] * (n_max + 1)
    sqsums = [0] * (n_max + 1)
    counts[0] = 1
    prefix_len = min(n_max, 4 if d == 2 else 3)
    # short prefixes are also tallied here; kernel jobs continue full ones
    for length in range(1, prefix_len + 1):
        paths = _prefixes(d, length)
        for path in paths:
            counts[length] += 1
            sqsums[length] += sum(c * c for c in path[-1])
    jobs = _prefixes(d, prefix_len) if n_max > prefix_len else []

    if jobs:
        axes, signs = _directions(d)
        strides = np.array(
            [side ** (d - 1 - i) for i in range(d)], np.int64
        )
        deltas = np.array(
            [signs[k] * strides[axes[k]] for k in range(2 * d)], np.int64
        )
        center = int(sum((side // 2) * strides[i] for i in range(d)))

        def run_job(path):
            occ = np.zeros(side**d, np.uint8)
            for site in path:
                occ[center + int(np.dot(np.array(site, np.int64), strides))] = 1
            tail = path[-1]
            start_pos = center + int(np.dot(np.array(tail, np.int64), strides))
            ccounts = np.zeros(n_max + 1, np.int64)
            csqs = np.zeros(n_max + 1, np.int64)
            _saw_kernel(occ, start_pos, np.array(tail, np.int64),
                        sum(c * c for c in tail), deltas, axes, signs,
                        n_max, prefix_len, ccounts, csqs)
            return ccounts, csqs

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run_job, jobs))
        else:
            results = [run_job(p) for p in jobs]
        for ccounts, csqs in results:
            for k in range(prefix_len + 1, n_max + 1):
                counts[k] += int(ccounts[k])
                sqsums[k] += int(csqs[k])

    # restore the 2d-fold first-step symmetry
    for k in range(1, n_max + 1):
        counts[k] *= 2 * d
        sqsums[k] *= 2 * d

    meta = {"dim": d}
    return WalkCensus(
        dim=d,
        max_len=n_max,
        counts=SeriesTable("saw-counts", dict(enumerate(counts)),
                           lattice="infinite", params=meta),
        sq_disp_sums=SeriesTable("saw-sqdisp", dict(enumerate(sqsums)),
                                 lattice="infinite", params=meta),
    )


def mean_square_displacement(census: WalkCensus, n: int) -> Fraction:
    """Exact mean squared endpoint distance s(n) as a rational number."""
    if n < 0 or n > census.max_len:
        raise ValueError(f"n={n} outside enumerated range 0..{census.max_len}")
    return Fraction(census.sq_disp_sums[n], census.counts[n])


def mu_estimate(census: WalkCensus) -> EstimateReport:
    """Connective-constant estimate from accelerated count ratios."""
    ns = [n for n in census.counts.indices() if n >= 1]
    if len(ns) < 6:
        raise ValueError("need counts up to n >= 6")
    ratios = [
        census.counts[n + 1] / census.counts[n] for n in ns[:-1]
    ]
    value, proxy, _ = accelerated_limit(ratios, ns=ns[:-1],
                                        order=min(3, len(ratios) - 1))
    return EstimateReport(
        value=value, raw=ratios, method="ratio+richardson", error_proxy=proxy,
        indices=ns[:-1],
    )
