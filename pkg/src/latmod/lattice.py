"""Lattice geometry: coordinates, adjacency, wraparound, bond indexing.

Sites are exposed as coordinate tuples but encoded internally as flat
row-major integers, which is what the enumeration hot loops index on.
Parallel bonds arising on tori with side <= 2 are collapsed to a single
bond (simple-graph convention) and self-loops are dropped; modules that
are sensitive to this document a minimum side per operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache


class Boundary(Enum):
    TORUS = "torus"
    FREE = "free"


class Adjacency(Enum):
    SQUARE_NN = "square"
    TRIANGULAR = "triangular"
    KING = "king"
    CUBIC_NN = "cubic"


# offsets are sorted lexicographically so neighbor order is deterministic
_OFFSETS_2D = {
    Adjacency.SQUARE_NN: ((-1, 0), (0, -1), (0, 1), (1, 0)),
    Adjacency.TRIANGULAR: ((-1, -1), (-1, 0), (0, -1), (0, 1), (1, 0), (1, 1)),
    Adjacency.KING: (
        (-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)
    ),
}


@dataclass(frozen=True)
class LatticeSpec:
    """Hypercubic lattice of side ``side`` in ``dim`` dimensions."""

    dim: int
    side: int
    boundary: Boundary = Boundary.TORUS
    adjacency: Adjacency = Adjacency.SQUARE_NN

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.side < 1:
            raise ValueError(f"side must be >= 1, got {self.side}")
        if self.adjacency is Adjacency.CUBIC_NN:
            pass  # any dimension
        elif self.dim != 2:
            raise ValueError(f"{self.adjacency.value} adjacency requires dim=2")

    @property
    def site_count(self) -> int:
        return self.side**self.dim

    def offsets(self) -> tuple[tuple[int, ...], ...]:
        if self.adjacency is Adjacency.CUBIC_NN:
            return _cubic_offsets(self.dim)
        return _OFFSETS_2D[self.adjacency]

    def in_range(self, site: tuple[int, ...]) -> bool:
        return len(site) == self.dim and all(0 <= c < self.side for c in site)

    def flat(self, site: tuple[int, ...]) -> int:
        """Row-major flat index of a site."""
        idx = 0
        for c in site:
            idx = idx * self.side + c
        return idx

    def unflat(self, idx: int) -> tuple[int, ...]:
        coords = []
        for _ in range(self.dim):
            idx, c = divmod(idx, self.side)
            coords.append(c)
        return tuple(reversed(coords))


@dataclass(frozen=True)
class Bond:
    """Unordered adjacent site pair with a stable integer id."""

    endpoints: tuple[tuple[int, ...], tuple[int, ...]]
    index: int


@lru_cache(maxsize=None)
def _cubic_offsets(dim: int) -> tuple[tuple[int, ...], ...]:
    offs = []
    for axis in range(dim):
        for sign in (-1, 1):
            off = [0] * dim
            off[axis] = sign
            offs.append(tuple(off))
    offs.sort()
    return tuple(offs)


def neighbors(spec: LatticeSpec, site: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Adjacent sites of ``site``, in lexicographic-offset order.

    Under a torus boundary coordinates wrap modulo the side; duplicate
    neighbors produced by wrapping (side <= 2) are collapsed and
    self-neighbors dropped.
    """
    site = tuple(site)
    if not spec.in_range(site):
        raise ValueError(f"site {site} out of range for side {spec.side}")
    n = spec.side
    result = []
    seen = set()
    for off in spec.offsets():
        t = tuple(c + o for c, o in zip(site, off))
        if spec.boundary is Boundary.TORUS:
            t = tuple(c % n for c in t)
            if t == site or t in seen:
                continue
        elif not spec.in_range(t):
            continue
        seen.add(t)
        result.append(t)
    return result


@lru_cache(maxsize=64)
def _bond_pairs(spec: LatticeSpec) -> tuple[tuple[int, int], ...]:
    """All bonds as flat-index pairs (lo, hi), sorted -- the index order."""
    pairs = set()
    for idx in range(spec.site_count):
        site = spec.unflat(idx)
        for t in neighbors(spec, site):
            j = spec.flat(t)
            pairs.add((idx, j) if idx < j else (j, idx))
    return tuple(sorted(pairs))


def bonds(spec: LatticeSpec) -> list[Bond]:
    """Every adjacency pair exactly once, indexed stably from 0."""
    return [
        Bond(endpoints=(spec.unflat(a), spec.unflat(b)), index=i)
        for i, (a, b) in enumerate(_bond_pairs(spec))
    ]


def bond_count(spec: LatticeSpec) -> int:
    return len(_bond_pairs(spec))


def bond_flat_arrays(spec: LatticeSpec):
    """Bond endpoints as two parallel lists of flat site ids, in index order."""
    pairs = _bond_pairs(spec)
    return [p[0] for p in pairs], [p[1] for p in pairs]


def neighbors_flat(spec: LatticeSpec, idx: int) -> list[int]:
    return [spec.flat(t) for t in neighbors(spec, spec.unflat(idx))]
