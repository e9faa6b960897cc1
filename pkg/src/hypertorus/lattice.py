"""Full-rank lattices in Q^n with canonical (HNF-derived) bases."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DimensionMismatch, MultiplierOrder, NotSublattice, RankDeficient
from .exactmath import Mat, denominator_lcm, hnf, vec

__all__ = [
    "Lattice",
    "add_generator",
    "contains",
    "equal",
    "index",
    "module_lattice",
]


@dataclass(frozen=True, eq=True)
class Lattice:
    """Integer span of the columns of ``basis``.

    Build instances with :meth:`standard` or :meth:`from_generators`; both
    canonicalize, so two lattices are equal iff their bases are identical.
    The canonical basis is the transpose of the row-style HNF of the
    generators (denominators cleared first), hence lower triangular.
    """

    basis: Mat

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls(Mat.identity(n))

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence], n: int) -> "Lattice":
        gens = [vec(g) for g in generators]
        for g in gens:
            if len(g) != n:
                raise DimensionMismatch(f"generator of length {len(g)} in rank {n}")
        if len(gens) < n:
            raise RankDeficient(f"{len(gens)} generators cannot span rank {n}")
        d = denominator_lcm(x for g in gens for x in g)
        scaled = Mat([[x * d for x in g] for g in gens], cols=n)
        H, _ = hnf(scaled)
        rows = [[x / d for x in H.row(i)] for i in range(n)]
        return cls(Mat(rows, cols=n).T)

    @property
    def rank(self) -> int:
        return self.basis.rows

    @cached_property
    def _inverse(self) -> Mat:
        return self.basis.inv()

    @cached_property
    def covolume(self) -> Fraction:
        return abs(self.basis.det())

    def coords(self, v: Sequence) -> tuple:
        """Coordinates of ``v`` with respect to the basis columns."""
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} in rank {self.rank}")
        return self._inverse @ vec(v)

    def from_coords(self, c: Sequence) -> tuple:
        return self.basis @ c

    def to_lattice_coords(self, M: Mat) -> Mat:
        """Matrix of the linear map ``M`` in the basis of this lattice."""
        return self._inverse @ M @ self.basis

    def ambient_functional(self, phi: Sequence) -> tuple:
        """Pull a functional on lattice coordinates back to ambient coordinates."""
        return self._inverse.T @ phi

    def contains(self, v: Sequence) -> bool:
        return all(x.denominator == 1 for x in self.coords(v))

    def preserved_by(self, M: Mat) -> bool:
        return self.to_lattice_coords(M).is_integral()

    def __repr__(self) -> str:
        cols = ["(" + ", ".join(str(x) for x in c) + ")" for c in self.basis.columns()]
        return f"Lattice[{', '.join(cols)}]"


def contains(L: Lattice, v: Sequence) -> bool:
    return L.contains(v)


def add_generator(L: Lattice, v: Sequence) -> Lattice:
    if len(v) != L.rank:
        raise DimensionMismatch(f"vector of length {len(v)} in rank {L.rank}")
    if L.contains(v):
        return L
    return Lattice.from_generators(L.basis.columns() + [vec(v)], L.rank)


def index(fine: Lattice, coarse: Lattice) -> int:
    """``[fine : coarse]`` for ``coarse`` a sublattice of ``fine``."""
    if fine.rank != coarse.rank:
        raise DimensionMismatch("lattices of different ambient rank")
    if not all(fine.contains(c) for c in coarse.basis.columns()):
        raise NotSublattice("second lattice is not contained in the first")
    ratio = coarse.covolume / fine.covolume
    assert ratio.denominator == 1
    return int(ratio)


def equal(L1: Lattice, L2: Lattice) -> bool:
    if L1.rank != L2.rank:
        raise DimensionMismatch("lattices of different ambient rank")
    return L1 == L2


def module_lattice(
    multiplier: Mat,
    generators: Sequence[Sequence],
    plain_generators: Sequence[Sequence] = (),
) -> Lattice:
    """Integer span of ``multiplier**k @ g`` (k = 0..3) and the plain generators.

    ``multiplier`` plays the role of ``x`` in Z[x]/(x^2 + 1), so it must have
    order dividing 4.
    """
    n = multiplier.rows
    if not multiplier.is_square():
        raise DimensionMismatch("multiplier must be square")
    if multiplier ** 4 != Mat.identity(n):
        raise MultiplierOrder("multiplier**4 is not the identity")
    gens = []
    for g in generators:
        g = vec(g)
        for _ in range(4):
            gens.append(g)
            g = multiplier @ g
    gens.extend(vec(p) for p in plain_generators)
    if any(len(g) != n for g in gens):
        raise DimensionMismatch(f"generator length differs from rank {n}")
    if not gens or Mat(gens, cols=n).rank() != n:
        raise RankDeficient("module generators do not span a full-rank lattice")
    return Lattice.from_generators(gens, n)
