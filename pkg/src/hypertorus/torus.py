"""Complex tori with formal periods and affine maps between them.

Real coordinates are interleaved per complex coordinate: a point of
``C^g / L`` is written ``(u1, v1, ..., ug, vg)`` where ``uj`` multiplies 1 and
``vj`` multiplies the period of coordinate ``j``.  A rational complex-linear
map never mixes ``u`` with ``v``, so its real form is block diagonal in that
sense and no period is ever multiplied by another.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import floor
from typing import Sequence

from .errors import (
    DimensionMismatch,
    NotLatticePreserving,
    NotSublattice,
    OrderExceedsBound,
    PeriodMixing,
    SpecMismatch,
)
from .exactmath import Mat, vec
from .lattice import Lattice

__all__ = [
    "AffineTorusMap",
    "TorusSpec",
    "compose",
    "descend",
    "from_complex",
    "identity",
    "inverse",
    "order_of",
    "power",
    "realify",
    "translation_map",
]


@dataclass(frozen=True)
class TorusSpec:
    complex_dim: int
    period_class: tuple[str, ...]
    lattice: Lattice

    def __post_init__(self):
        object.__setattr__(self, "period_class", tuple(self.period_class))
        if len(self.period_class) != self.complex_dim:
            raise DimensionMismatch(
                f"{len(self.period_class)} period names for complex dimension {self.complex_dim}"
            )
        if self.lattice.rank != 2 * self.complex_dim:
            raise DimensionMismatch(
                f"lattice rank {self.lattice.rank} does not match real dimension {2 * self.complex_dim}"
            )

    @classmethod
    def product(cls, period_class: Sequence[str]) -> "TorusSpec":
        """Product of elliptic curves with lattice Z^(2g)."""
        g = len(period_class)
        return cls(g, tuple(period_class), Lattice.standard(2 * g))

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    def with_lattice(self, lattice: Lattice) -> "TorusSpec":
        return TorusSpec(self.complex_dim, self.period_class, lattice)


def realify(C: Mat, spec: TorusSpec) -> Mat:
    """Real 2g x 2g form of a rational complex-linear map."""
    g = spec.complex_dim
    if C.shape != (g, g):
        raise DimensionMismatch(f"complex linear part must be {g}x{g}, got {C.shape}")
    if not C.is_real():
        raise PeriodMixing("complex linear parts must have rational entries")
    out = [[Fraction(0)] * (2 * g) for _ in range(2 * g)]
    for j in range(g):
        for k in range(g):
            c = C[j, k]
            if not c:
                continue
            if spec.period_class[j] != spec.period_class[k]:
                raise PeriodMixing(
                    f"entry ({j}, {k}) links periods {spec.period_class[k]!r} "
                    f"and {spec.period_class[j]!r}"
                )
            out[2 * j][2 * k] = c
            out[2 * j + 1][2 * k + 1] = c
    return Mat(out, cols=2 * g)


@dataclass(frozen=True)
class AffineTorusMap:
    """``z -> linear @ z + translation`` on ``R^(2g) / spec.lattice``.

    The translation is stored in canonical form: its lattice coordinates lie
    in ``[0, 1)``.  Equality is structural on (spec, linear, translation).
    """

    spec: TorusSpec
    linear: Mat
    translation: tuple
    linear_complex: Mat | None = field(default=None, compare=False)
    # filled in by __post_init__
    lattice_linear: Mat = field(init=False, repr=False, compare=False, default=None)
    lattice_translation: tuple = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        n = self.spec.real_dim
        if self.linear.shape != (n, n):
            raise DimensionMismatch(f"linear part must be {n}x{n}, got {self.linear.shape}")
        t = vec(self.translation)
        if len(t) != n:
            raise DimensionMismatch(f"translation must have length {n}")
        L = self.spec.lattice
        ML = L.to_lattice_coords(self.linear)
        if not ML.is_integral() or abs(ML.det()) != 1:
            raise NotLatticePreserving("linear part is not an automorphism of the lattice")
        if self.linear_complex is not None and realify(self.linear_complex, self.spec) != self.linear:
            raise ValueError("complex and real linear parts disagree")
        c = tuple(x - floor(x) for x in L.coords(t))
        object.__setattr__(self, "translation", L.from_coords(c))
        object.__setattr__(self, "lattice_linear", ML)
        object.__setattr__(self, "lattice_translation", vec(c))

    @cached_property
    def key(self) -> tuple:
        """Canonical encoding used for deterministic orderings."""
        return (tuple(int(x) for x in self.lattice_linear.entries), self.lattice_translation)

    def __call__(self, z: Sequence) -> tuple:
        z = vec(z)
        return vec(a + b for a, b in zip(self.linear @ z, self.translation))

    def is_identity(self) -> bool:
        return self.linear == Mat.identity(self.spec.real_dim) and not any(self.translation)

    def __repr__(self) -> str:
        t = ", ".join(str(x) for x in self.translation)
        return f"AffineTorusMap(linear={self.linear!r}, translation=({t}))"


def identity(spec: TorusSpec) -> AffineTorusMap:
    return AffineTorusMap(spec, Mat.identity(spec.real_dim), (0,) * spec.real_dim)


def translation_map(spec: TorusSpec, t: Sequence) -> AffineTorusMap:
    return AffineTorusMap(spec, Mat.identity(spec.real_dim), t)


def from_complex(spec: TorusSpec, C: Mat, t: Sequence) -> AffineTorusMap:
    return AffineTorusMap(spec, realify(C, spec), t, linear_complex=C)


def compose(f: AffineTorusMap, h: AffineTorusMap) -> AffineTorusMap:
    """``f o h``: apply ``h`` first."""
    if f.spec != h.spec:
        raise SpecMismatch("maps live on different tori")
    t = vec(a + b for a, b in zip(f.linear @ h.translation, f.translation))
    lc = None
    if f.linear_complex is not None and h.linear_complex is not None:
        lc = f.linear_complex @ h.linear_complex
    return AffineTorusMap(f.spec, f.linear @ h.linear, t, linear_complex=lc)


def inverse(f: AffineTorusMap) -> AffineTorusMap:
    Minv = f.linear.inv()
    t = vec(-x for x in Minv @ f.translation)
    lc = f.linear_complex.inv() if f.linear_complex is not None else None
    return AffineTorusMap(f.spec, Minv, t, linear_complex=lc)


def power(f: AffineTorusMap, k: int) -> AffineTorusMap:
    if k < 0:
        return power(inverse(f), -k)
    out = identity(f.spec)
    base = f
    while k:
        if k & 1:
            out = compose(out, base)
        base = compose(base, base)
        k >>= 1
    return out


def order_of(f: AffineTorusMap, bound: int = 1024) -> int:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    g = f
    for k in range(1, bound + 1):
        if g.is_identity():
            return k
        g = compose(f, g)
    raise OrderExceedsBound(f"order exceeds {bound}")


def descend(f: AffineTorusMap, L_ext: Lattice) -> AffineTorusMap:
    """Reinterpret ``f`` on the quotient by the overlattice ``L_ext``."""
    L = f.spec.lattice
    if L_ext.rank != L.rank:
        raise DimensionMismatch("overlattice has a different rank")
    if not all(L_ext.contains(c) for c in L.basis.columns()):
        raise NotSublattice("target lattice does not contain the torus lattice")
    if not L_ext.preserved_by(f.linear):
        raise NotLatticePreserving("linear part does not preserve the extended lattice")
    return AffineTorusMap(
        f.spec.with_lattice(L_ext), f.linear, f.translation, linear_complex=f.linear_complex
    )
