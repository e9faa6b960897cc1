"""Eigenspaces of the complexified lattice, invariant complex structures and
character-theoretic deformation counts.

All computations happen in Q(i).  A complex structure is described by its
holomorphic subspace ``U`` of ``V = L (x) C``; the associated real operator
``J`` acts as ``+i`` on ``U`` and ``-i`` on ``conj(U)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DegenerateChoice,
    NotFiniteOrder,
    NotInEigenspace,
    NotInvariantSubspace,
    NotSelfConjugate,
)
from .exactmath import I, GaussRat, Mat, conj, eigenspace_basis, rat, span_coordinates, vec
from .group import FiniteAffineGroup
from .torus import AffineTorusMap

__all__ = [
    "EIGENVALUES",
    "EigenDecomp",
    "FamilyStats",
    "HodgeCandidate",
    "build_hodge",
    "candidate_from_structure",
    "character_table",
    "eigen_decompose",
    "invariant_end_dim",
    "period_structure",
    "restrict_to_U",
    "sample_family",
    "swap_check",
]

ONE, MINUS_ONE, MINUS_I = Fraction(1), Fraction(-1), -I
EIGENVALUES = (I, MINUS_I, ONE, MINUS_ONE)
LABELS = {I: "i", MINUS_I: "-i", ONE: "1", MINUS_ONE: "-1"}


@dataclass(frozen=True)
class EigenDecomp:
    source: Mat
    entries: dict

    def basis(self, lam) -> list[tuple]:
        return self.entries[lam]

    def dim(self, lam) -> int:
        return len(self.entries[lam])

    def dims(self) -> dict[str, int]:
        """Eigenspace dimensions keyed ``"i", "-i", "1", "-1"``."""
        return {LABELS[lam]: self.dim(lam) for lam in EIGENVALUES}


def eigen_decompose(R_real: Mat, order: int = 4) -> EigenDecomp:
    if order not in (1, 2, 4):
        raise NotFiniteOrder(f"only orders dividing 4 are supported, got {order}")
    n = R_real.rows
    if R_real ** order != Mat.identity(n):
        raise NotFiniteOrder(f"matrix does not have order dividing {order}")
    entries = {lam: eigenspace_basis(R_real, lam) for lam in EIGENVALUES}
    assert sum(len(b) for b in entries.values()) == n
    return EigenDecomp(R_real, entries)


def _in_span(basis: Sequence[tuple], v: Sequence) -> bool:
    if not basis:
        return not any(v)
    return span_coordinates(basis, v) is not None


def preserves(M: Mat, basis: Sequence[tuple], target: Sequence[tuple] | None = None) -> bool:
    """Whether ``M`` maps span(basis) into span(target) (default: itself)."""
    target = basis if target is None else target
    return all(_in_span(target, M @ v) for v in basis)


def swap_check(S_real: Mat, decomp: EigenDecomp) -> bool:
    """``S V(i) = V(-i)`` and ``S V(-i) = V(i)``."""
    Vi, Vmi = decomp.basis(I), decomp.basis(MINUS_I)
    if len(Vi) != len(Vmi):
        return False
    return preserves(S_real, Vi, Vmi) and preserves(S_real, Vmi, Vi)


def _rank(vectors: Sequence[tuple], n: int) -> int:
    return Mat(vectors, cols=n).rank() if vectors else 0


@dataclass(frozen=True)
class HodgeCandidate:
    u1: tuple
    ui: tuple
    u_minus_i: tuple
    J: Mat

    @property
    def basis(self) -> tuple[tuple, tuple, tuple]:
        """Basis of U ordered (U(i), U(-i), U(1))."""
        return (self.ui, self.u_minus_i, self.u1)

    def full_basis(self) -> Mat:
        """Columns: basis of U followed by its conjugate; invertible for valid candidates."""
        cols = list(self.basis) + [conj(v) for v in self.basis]
        return Mat.from_columns(cols)


def build_hodge(decomp: EigenDecomp, S_real: Mat, u1: Sequence, ui: Sequence) -> HodgeCandidate:
    """Assemble ``U = U(i) + S U(i) + U(1)`` and its complex structure.

    Raises :class:`DegenerateChoice` when ``U(1) + conj U(1) != V(1)`` or
    ``U(i) + conj(S U(i)) != V(i)``.
    """
    n = decomp.source.rows
    u1, ui = vec(u1), vec(ui)
    V1, Vi = decomp.basis(ONE), decomp.basis(I)
    if not any(u1) or not _in_span(V1, u1):
        raise NotInEigenspace("u1 is not a nonzero vector of V(1)")
    if not any(ui) or not _in_span(Vi, ui):
        raise NotInEigenspace("ui is not a nonzero vector of V(i)")
    umi = S_real @ ui
    if _rank([u1, conj(u1)], n) != len(V1):
        raise DegenerateChoice("U(1) + conj(U(1)) does not fill V(1)")
    if _rank([ui, conj(umi)], n) != len(Vi):
        raise DegenerateChoice("U(i) + conj(S U(i)) does not fill V(i)")
    # J is real with J(Re u) = -Im u and J(Im u) = Re u for u in U; the real
    # and imaginary parts form a basis exactly when V = U + conj(U).
    cols = [ui, umi, u1]
    re = [tuple(_re(x) for x in u) for u in cols]
    im = [tuple(_im(x) for x in u) for u in cols]
    try:
        B_inv = Mat.from_columns(re + im).inv()
    except ZeroDivisionError:
        raise DegenerateChoice("U + conj(U) is not the whole space") from None
    J = Mat.from_columns([tuple(-x for x in v) for v in im] + re) @ B_inv
    Id = Mat.identity(n)
    assert J @ J == -Id
    R = decomp.source
    if J @ R != R @ J or J @ S_real != S_real @ J:
        raise DegenerateChoice("induced complex structure is not invariant")
    return HodgeCandidate(u1, ui, umi, J)


def _re(x) -> Fraction:
    return x.re if isinstance(x, GaussRat) else Fraction(x)


def _im(x) -> Fraction:
    return x.im if isinstance(x, GaussRat) else Fraction(0)


def period_structure(tau) -> Mat:
    """Real 2x2 operator of multiplication by i on ``C = R + R tau``.

    Coordinates ``(u, v)`` stand for ``u + v tau``; ``tau`` must be a Gaussian
    rational with positive imaginary part, e.g. ``tau = i`` gives
    ``[[0, -1], [1, 0]]``.
    """
    tau = tau if isinstance(tau, GaussRat) else GaussRat(rat(tau))
    a, b = tau.re, tau.im
    if b <= 0:
        raise ValueError("period must lie in the upper half plane")
    return Mat([[-a / b, -(a * a + b * b) / b], [1 / b, a / b]])


def candidate_from_structure(decomp: EigenDecomp, S_real: Mat, J: Mat) -> HodgeCandidate:
    """Recover ``(u1, ui)`` from an invariant complex structure ``J``.

    ``u1`` and ``ui`` span the ``+i`` eigenspace of ``J`` inside ``V(1)`` and
    ``V(i)``; the result is then rebuilt (and re-checked) by :func:`build_hodge`.
    """
    n = J.rows
    picks = []
    for lam in (ONE, I):
        B = decomp.basis(lam)
        if not B:
            raise DegenerateChoice(f"V({LABELS[lam]}) is empty")
        BM = Mat.from_columns(B)
        null = ((J - Mat.identity(n) * I) @ BM).nullspace()
        if len(null) != 1:
            raise DegenerateChoice(f"J does not cut a line out of V({LABELS[lam]})")
        picks.append(BM @ null[0])
    return build_hodge(decomp, S_real, picks[0], picks[1])


@dataclass(frozen=True)
class FamilyStats:
    param_dim: int
    trials: int
    nondegenerate: int

    @property
    def nondegenerate_fraction(self) -> Fraction:
        return Fraction(self.nondegenerate, self.trials)


def _random_gauss(rng: random.Random) -> GaussRat:
    re = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
    im = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
    return GaussRat(re, im)


def _random_vector(rng: random.Random, basis: Sequence[tuple]) -> tuple:
    while True:
        coeffs = [_random_gauss(rng) for _ in basis]
        if any(coeffs):
            n = len(basis[0])
            return vec(sum((c * b[j] for c, b in zip(coeffs, basis)), Fraction(0)) for j in range(n))


def sample_family(
    decomp: EigenDecomp,
    S_real: Mat,
    trials: int = 100,
    seed: int = 0,
    candidates: Sequence[tuple[Sequence, Sequence]] = (),
) -> FamilyStats:
    """Sample lines in V(1) and V(i) and count the nondegenerate ones.

    ``candidates`` are ``(u1, ui)`` pairs tried before the random draws; the
    total number of attempts is ``trials``.  The parameter count is
    ``dim P(V(i)) + dim P(V(1))``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    V1, Vi = decomp.basis(ONE), decomp.basis(I)
    param_dim = max(len(Vi) - 1, 0) + max(len(V1) - 1, 0)
    rng = random.Random(seed)
    good = 0
    for k in range(trials):
        if k < len(candidates):
            u1, ui = candidates[k]
        elif V1 and Vi:
            u1, ui = _random_vector(rng, V1), _random_vector(rng, Vi)
        else:
            continue
        try:
            build_hodge(decomp, S_real, u1, ui)
        except DegenerateChoice:
            continue
        good += 1
    return FamilyStats(param_dim, trials, good)


# --------------------------------------------------------------------------
# restriction to U and characters


def _linear_parts(G) -> list[Mat]:
    if isinstance(G, FiniteAffineGroup):
        return [e.linear for e in G.elements]
    return [g.linear if isinstance(g, AffineTorusMap) else g for g in G]


def restrict_to_U(G, candidate: HodgeCandidate) -> list[Mat]:
    """Matrices of every element's linear part on U in the basis (U(i), U(-i), U(1))."""
    basis = candidate.basis
    out = []
    for M in _linear_parts(G):
        cols = []
        for u in basis:
            c = span_coordinates(basis, M @ u)
            if c is None:
                raise NotInvariantSubspace("a linear part does not preserve U")
            cols.append(c)
        out.append(Mat.from_columns(cols))
    return out


def _trace(M: Mat):
    return sum((M[k, k] for k in range(M.rows)), Fraction(0))


def character_table(G: FiniteAffineGroup, candidate: HodgeCandidate) -> list:
    """Character of U, one value per group element."""
    return [vec([_trace(M)])[0] for M in restrict_to_U(G, candidate)]


def invariant_end_dim(G: FiniteAffineGroup, candidate: HodgeCandidate) -> int:
    """``dim End(U)^G`` as the character inner product of U with itself."""
    chi = character_table(G, candidate)
    n = G.order
    via_inverse = sum((chi[g] * chi[G.inv(g)] for g in range(n)), Fraction(0)) / n
    via_conj = sum((chi[g] * conj(chi[g]) for g in range(n)), Fraction(0)) / n
    via_inverse, via_conj = vec([via_inverse, via_conj])
    if via_inverse != via_conj:
        raise NotSelfConjugate(f"inverse sum {via_inverse} differs from conjugate sum {via_conj}")
    if not isinstance(via_inverse, Fraction) or via_inverse.denominator != 1 or via_inverse < 0:
        raise ArithmeticError(f"character inner product {via_inverse} is not a dimension")
    return int(via_inverse)
