"""Sequence extrapolation, power-law fits, and the constants registry.

The registry maps every tabulated reference constant to its value at full
printed precision, tagged as an exact value, a numerical estimate, or a
rigorous bound pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


def aitken(seq) -> list[float]:
    """Aitken delta-squared transform.

    Output has length ``len(seq) - 2``.  Terms whose second difference is
    too close to zero to divide by are emitted as NaN (flagged, not fatal);
    exactly constant stretches pass through unchanged.
    """
    if len(seq) < 3:
        raise ValueError("aitken needs at least 3 terms")
    out = []
    for s0, s1, s2 in zip(seq, seq[1:], seq[2:]):
        numer = (s2 - s1) ** 2
        denom = s2 - 2.0 * s1 + s0
        scale = max(abs(s0), abs(s1), abs(s2), 1e-300)
        if abs(denom) <= 1e-13 * scale:
            out.append(s2 if numer == 0 else math.nan)
        else:
            out.append(s2 - numer / denom)
    return out


def richardson(seq, k: int, ns=None) -> list[float]:
    """Polynomial-in-1/n extrapolation of order ``k``.

    Each output term extrapolates a sliding window of ``k + 1`` consecutive
    points to 1/n -> 0 (Neville's scheme on nodes 1/n).  ``ns`` supplies the
    index of each term and defaults to 1, 2, 3, ...
    """
    m = len(seq)
    if k < 1:
        raise ValueError("order k must be >= 1")
    if m < k + 1:
        raise ValueError(f"need at least {k + 1} terms for order {k}")
    if ns is None:
        ns = list(range(1, m + 1))
    if len(ns) != m:
        raise ValueError("ns must match seq length")
    xs = [1.0 / n for n in ns]
    out = []
    for i in range(m - k):
        vals = list(seq[i : i + k + 1])
        node = xs[i : i + k + 1]
        # Neville tableau evaluated at x = 0
        for level in range(1, k + 1):
            for j in range(k - level + 1):
                x0, x1 = node[j], node[j + level]
                vals[j] = (x0 * vals[j + 1] - x1 * vals[j]) / (x0 - x1)
        out.append(vals[0])
    return out


def accelerated_limit(seq, ns=None, order: int = 2):
    """Best-effort limit of a convergent sequence plus an error proxy.

    Applies Richardson of the requested order (capped by data length) and
    returns ``(limit, error_proxy, accelerated_tail)`` where the proxy is
    the spread of the last few accelerated iterates.
    """
    k = min(order, len(seq) - 1)
    acc = richardson(seq, k, ns=ns)
    acc = [a for a in acc if not math.isnan(a)]
    if not acc:
        raise ValueError("acceleration produced no usable terms")
    tail = acc[-3:]
    proxy = max(tail) - min(tail) if len(tail) > 1 else abs(tail[0] - seq[-1])
    return acc[-1], proxy, acc


@dataclass
class FitResult:
    exponent: float
    amplitude: float
    residual: float
    window: tuple[int, int]


def fit_exponent(values, ns, mode: str, mu: float | None = None) -> FitResult:
    """Least-squares power-law exponent from the upper half of a series.

    mode="growth": values are counts c(n); fits ln(c/mu^n) vs ln n, whose
    slope is (exponent - 1).  Requires ``mu``.
    mode="displacement": values are mean-square displacements s(n); fits
    ln s vs ln n, whose slope is 2 * exponent.
    """
    if mode == "growth" and mu is None:
        raise ValueError("growth mode requires mu")
    if len(values) < 6:
        raise ValueError("need at least 6 data points")
    if any(v <= 0 for v in values) or any(n <= 0 for n in ns):
        raise ValueError("nonpositive inputs to logs")
    lo = len(ns) // 2
    window = (ns[lo], ns[-1])
    x = np.log(np.asarray(ns[lo:], dtype=float))
    if mode == "growth":
        y = np.array(
            [math.log(v) - n * math.log(mu) for v, n in zip(values[lo:], ns[lo:])]
        )
    elif mode == "displacement":
        y = np.log(np.asarray(values[lo:], dtype=float))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    if mode == "growth":
        return FitResult(float(slope) + 1.0, math.exp(intercept), resid, window)
    return FitResult(float(slope) / 2.0, math.exp(intercept), resid, window)


class Kind(Enum):
    EXACT = "exact"
    ESTIMATE = "estimate"
    BOUND_PAIR = "bounds"


@dataclass(frozen=True)
class RegistryEntry:
    key: str
    value: float | tuple[float, float]
    source: str
    kind: Kind

    def __post_init__(self):
        if self.kind is Kind.BOUND_PAIR:
            lo, hi = self.value
            if not lo < hi:
                raise ValueError(f"bound pair {self.key} needs lower < upper")


def _e(key, value, source):
    return RegistryEntry(key, value, source, Kind.EXACT)


def _est(key, value, source):
    return RegistryEntry(key, value, source, Kind.ESTIMATE)


def _b(key, lo, hi, source):
    return RegistryEntry(key, (lo, hi), source, Kind.BOUND_PAIR)


_ENTRIES = [
    # self-avoiding walks: connective constant per dimension
    _b("mu_d2_bounds", 2.62002, 2.6939, "rigorous bounds, square lattice"),
    _est("mu_d2", 2.6381585, "series estimate, square lattice"),
    _b("mu_d3_bounds", 4.572140, 4.7476, "rigorous bounds, cubic lattice"),
    _est("mu_d3", 4.683907, "series estimate, cubic lattice"),
    _b("mu_d4_bounds", 6.742945, 6.8179, "rigorous bounds, d=4"),
    _est("mu_d4", 6.7720, "series estimate, d=4"),
    _b("mu_d5_bounds", 8.828529, 8.8602, "rigorous bounds, d=5"),
    _est("mu_d5", 8.8386, "series estimate, d=5"),
    _b("mu_d6_bounds", 10.874038, 10.8886, "rigorous bounds, d=6"),
    _est("mu_d6", 10.8788, "series estimate, d=6"),
    _est("gamma_d2", 43.0 / 32.0, "conjectured exact value 43/32"),
    _est("gamma_d3", 1.1575, "conjectured value, d=3"),
    _est("nu_d2", 0.75, "conjectured exact value 3/4"),
    _est("nu_d3", 0.5877, "conjectured value, d=3"),
    # fixed site polyominoes
    _b("alpha_bounds", 3.791, 4.649551, "rigorous bounds, growth constant"),
    _est("alpha", 4.06265, "differential-approximant estimate"),
    _est("animal_amplitude", 0.316, "empirical amplitude in C*alpha^n/n"),
    # Ising high-temperature series: critical activity per dimension
    _e("zc_ising_d2", 0.414213562373095049, "exact: sqrt(2) - 1"),
    _est("zc_ising_d3", 0.218094, "series estimate"),
    _est("zc_ising_d4", 0.14855, "series estimate"),
    _est("zc_ising_d5", 0.1134, "series estimate"),
    _est("zc_ising_d6", 0.0920, "series estimate"),
    _est("zc_ising_d7", 0.0775, "series estimate"),
    _est(
        "susceptibility_amplitude_d2",
        0.9625817322,
        "exact via Painleve III, stored numerically",
    ),
    # monomers and dimers
    _est("kappa", 1.940215351, "transfer-matrix estimate, monomer-dimer"),
    _e("dimer2d_growth", 1.79162281206959342, "exact: exp(2G/pi), G Catalan"),
    _b("lambda_bounds", 0.44007584, 0.463107, "rigorous bounds, cubic dimers"),
    _est("lambda", 0.4466, "Monte Carlo estimate, cubic dimers"),
    # ice models
    _e("ice_entropy", 1.539600717839002039, "exact: (4/3)^(3/2)"),
    _b("ice_w_bounds", 1.5067, 1.5070, "series bounds, Ice-Ih/Ice-Ic lattices"),
    # hard squares / hexagons / kings
    _est("xi_hard_square", 1.50304808247533226, "transfer-matrix value"),
    _est("eta_hard_hexagon", 1.395485972479302735, "exact algebraic number"),
    _est("king_entropy", 1.342643951124, "transfer-matrix value"),
    _e("zc_hard_hexagon", 11.09016994374947424, "exact: (11 + 5*sqrt(5))/2"),
    _est("zc_hard_square", 3.7962, "series estimate"),
    # percolation
    _est("ks_half", 0.065770, "site cluster density at p = 1/2"),
    _b("pc_site_square_bounds", 0.556, 0.679492, "rigorous bounds"),
    _est("pc_site_square", 0.5927460, "simulation estimate"),
    _est("ks_pc", 0.0275981, "simulation estimate at threshold"),
    _e("kb_half", 0.09807621135331594, "exact: (3*sqrt(3) - 5)/2"),
    _e("pc_bond_square", 0.5, "exact bond threshold, square lattice"),
    _e(
        "pc_bond_triangular",
        0.347296355333860698,
        "exact: 2*sin(pi/18), triangular lattice",
    ),
    _e(
        "kb_triangular_pc",
        0.1118442752845497,
        "exact: 35/4 - (3/2)*csc(pi/18)",
    ),
]

REGISTRY: dict[str, RegistryEntry] = {e.key: e for e in _ENTRIES}


def registry_keys() -> list[str]:
    return sorted(REGISTRY)


def registry_entry(key: str) -> RegistryEntry:
    if key not in REGISTRY:
        raise KeyError(f"unknown registry key {key!r}")
    return REGISTRY[key]


@dataclass
class CompareLine:
    key: str
    computed: float
    kind: Kind
    target: float | tuple[float, float]
    rel_error: float | None
    inside: bool | None
    source: str

    def render(self) -> str:
        if self.kind is Kind.BOUND_PAIR:
            lo, hi = self.target
            verdict = "INSIDE" if self.inside else "OUTSIDE"
            return (
                f"{self.key}: computed {self.computed!r} {verdict} "
                f"({lo!r}, {hi!r})  [{self.source}]"
            )
        return (
            f"{self.key}: computed {self.computed!r} vs {self.target!r} "
            f"rel_err {self.rel_error:.3g}  [{self.source}]"
        )


def registry_compare(key: str, computed: float) -> CompareLine:
    """Relative error against exact/estimate entries, containment for bounds."""
    entry = registry_entry(key)
    if entry.kind is Kind.BOUND_PAIR:
        lo, hi = entry.value
        return CompareLine(
            key, computed, entry.kind, entry.value, None, lo < computed < hi,
            entry.source,
        )
    denom = abs(entry.value) if entry.value != 0 else 1.0
    rel = abs(computed - entry.value) / denom
    return CompareLine(key, computed, entry.kind, entry.value, rel, None, entry.source)
