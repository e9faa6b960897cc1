"""Finite groups of affine torus maps and certified freeness checks."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import GridTooLarge, GroupNotClosed, UnknownSymbol
from .exactmath import Mat, denominator_lcm, snf, vec
from .torus import AffineTorusMap, TorusSpec, compose, identity

__all__ = [
    "DEFAULT_GRID_CAP",
    "ElementVerdict",
    "FiniteAffineGroup",
    "FreeActionReport",
    "FreenessCertificate",
    "check_presentation",
    "conjugacy_classes",
    "default_grid_size",
    "evaluate_word",
    "find_fixed_point_on_grid",
    "fixed_point_bruteforce",
    "fixed_point_exists",
    "format_word",
    "functional_certifies",
    "generate",
    "is_translation",
    "parse_word",
    "verify_free_action",
]

DEFAULT_GRID_CAP = 1 << 24

Word = tuple[tuple[str, int], ...]  # letters (symbol, +1 | -1)


@dataclass(frozen=True, eq=False)
class FiniteAffineGroup:
    spec: TorusSpec
    elements: tuple[AffineTorusMap, ...]
    cayley: np.ndarray
    words: tuple[tuple[str, ...], ...]
    generator_names: tuple[str, ...]
    generator_indices: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return int(self.cayley[i, j])

    def inv(self, i: int) -> int:
        return int(np.flatnonzero(self.cayley[i] == 0)[0])

    def index_of(self, f: AffineTorusMap) -> int:
        for i, e in enumerate(self.elements):
            if e == f:
                return i
        raise KeyError("map is not an element of the group")

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.mul(x, i)
            k += 1
        return k

    def generator(self, name: str) -> int:
        try:
            return self.generator_indices[self.generator_names.index(name)]
        except ValueError:
            raise UnknownSymbol(f"unknown generator {name!r}") from None


def generate(
    gens: Mapping[str, AffineTorusMap] | Sequence[AffineTorusMap],
    max_order: int = 1024,
) -> FiniteAffineGroup:
    """Close ``gens`` under composition.

    Element 0 is the identity; the others are sorted by canonical encoding.
    Each element carries a shortest word in the generators (breadth first).
    """
    if isinstance(gens, Mapping):
        names, maps = tuple(gens.keys()), tuple(gens.values())
    else:
        maps = tuple(gens)
        names = tuple(f"g{k + 1}" for k in range(len(maps)))
    if not maps:
        raise ValueError("at least one generator is required")
    spec = maps[0].spec
    if any(m.spec != spec for m in maps):
        raise ValueError("generators live on different tori")

    e = identity(spec)
    found: dict[tuple, tuple[AffineTorusMap, tuple[str, ...]]] = {e.key: (e, ())}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        wx = found[x.key][1]
        for name, g in zip(names, maps):
            y = compose(x, g)
            if y.key not in found:
                found[y.key] = (y, wx + (name,))
                if len(found) > max_order:
                    raise GroupNotClosed(f"closure exceeds {max_order} elements")
                queue.append(y)

    keys = [e.key] + sorted(k for k in found if k != e.key)
    pos = {k: i for i, k in enumerate(keys)}
    elements = tuple(found[k][0] for k in keys)
    words = tuple(found[k][1] for k in keys)
    n = len(elements)
    cayley = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            cayley[i, j] = pos[compose(a, b).key]
    cayley.setflags(write=False)
    gen_idx = tuple(pos[g.key] for g in maps)
    G = FiniteAffineGroup(spec, elements, cayley, words, names, gen_idx, ())
    object.__setattr__(G, "classes", _classes(G))
    return G


def _classes(G: FiniteAffineGroup) -> tuple[tuple[int, ...], ...]:
    n = G.order
    inv = [G.inv(h) for h in range(n)]
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        cls = sorted({G.mul(G.mul(h, i), inv[h]) for h in range(n)})
        for c in cls:
            seen[c] = True
        out.append(tuple(cls))
    return tuple(out)


def conjugacy_classes(G: FiniteAffineGroup) -> tuple[tuple[int, ...], ...]:
    return G.classes


# --------------------------------------------------------------------------
# words

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<op>[()*^]))")


def parse_word(text: str) -> Word:
    """Parse ``"(r*s)^2"``-style words into letters ``(symbol, +-1)``.

    Grammar: ``word := factor ('*' factor)*``, ``factor := atom ('^' int)?``,
    ``atom := name | '(' word ')'``.  Negative exponents invert.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad character at offset {pos} in word {text!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take(kind, value=None):
        nonlocal i
        k, v, at = tokens[i]
        if k != kind or (value is not None and v != value):
            raise ValueError(f"expected {value or kind} at offset {at} in word {text!r}")
        i += 1
        return v

    def word():
        letters = list(factor())
        while peek()[:2] == ("op", "*"):
            take("op", "*")
            letters += factor()
        return letters

    def factor():
        k, v, at = peek()
        if k == "name":
            take("name")
            base = [(v, 1)]
        elif (k, v) == ("op", "("):
            take("op", "(")
            base = word()
            take("op", ")")
        else:
            raise ValueError(f"expected a generator at offset {at} in word {text!r}")
        if peek()[:2] == ("op", "^"):
            take("op", "^")
            e = int(take("int"))
            if e < 0:
                base = [(s, -x) for s, x in reversed(base)]
                e = -e
            return base * e
        return base

    letters = word()
    take("end")
    return tuple(letters)


def format_word(word: Sequence[str]) -> str:
    """Compact display of a generator word, e.g. ``('r','r','s') -> 'r^2*s'``."""
    if not word:
        return "1"
    parts = []
    prev, count = word[0], 0
    for w in list(word) + [None]:
        if w == prev:
            count += 1
            continue
        parts.append(prev if count == 1 else f"{prev}^{count}")
        prev, count = w, 1
    return "*".join(parts)


def evaluate_word(G: FiniteAffineGroup, word: str | Word) -> int:
    letters = parse_word(word) if isinstance(word, str) else word
    x = 0
    for sym, e in letters:
        if sym not in G.generator_names:
            raise UnknownSymbol(f"unknown generator {sym!r}")
        g = G.generator(sym)
        x = G.mul(x, g if e > 0 else G.inv(g))
    return x


def check_presentation(G: FiniteAffineGroup, relations: Sequence[str | Word]) -> list[bool]:
    return [evaluate_word(G, w) == 0 for w in relations]


def is_translation(f: AffineTorusMap) -> bool:
    return f.linear == Mat.identity(f.spec.real_dim) and any(f.translation)


# --------------------------------------------------------------------------
# freeness


@dataclass(frozen=True)
class FreenessCertificate:
    """Proof that an element does or does not have a fixed point.

    When ``free`` is False, ``witness`` (ambient coordinates) satisfies
    ``f(z) = z`` modulo the lattice.  When ``free`` is True, ``functional`` is
    an integer row vector in lattice coordinates that kills ``M - I`` but is
    not integral on the translation, so ``(M - I) z + t`` can never be a
    lattice vector.
    """

    free: bool
    witness: tuple | None = None
    functional: tuple[int, ...] | None = None
    functional_ambient: tuple | None = None
    element: int | None = None

    def verify(self, f: AffineTorusMap) -> bool:
        L = f.spec.lattice
        if not self.free:
            if self.witness is None:
                return False
            d = vec(a - b for a, b in zip(f(self.witness), self.witness))
            return L.contains(d)
        if self.functional is None:
            return False
        phi = self.functional
        if any(not isinstance(x, int) for x in phi):
            return False
        A = f.lattice_linear - Mat.identity(len(phi))
        if any(_row_dot(phi, A.col(j)) for j in range(A.cols)):
            return False
        return _row_dot(phi, f.lattice_translation).denominator != 1

    def value_on_translation(self, f: AffineTorusMap) -> Fraction:
        """``phi . t`` reduced into ``[0, 1)``."""
        v = _row_dot(self.functional, f.lattice_translation)
        return v - floor(v)


def _row_dot(phi: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(phi, v)), Fraction(0))


def functional_certifies(f: AffineTorusMap, phi: Sequence) -> bool:
    """Check an ambient-coordinate functional as a freeness certificate for ``f``.

    Requires ``phi (M - I) = 0``, ``phi`` integral on every lattice basis
    vector, and ``phi . t`` not an integer.
    """
    phi = vec(phi)
    n = f.spec.real_dim
    A = f.linear - Mat.identity(n)
    if any(_row_dot(phi, A.col(j)) for j in range(n)):
        return False
    if any(_row_dot(phi, b).denominator != 1 for b in f.spec.lattice.basis.columns()):
        return False
    return _row_dot(phi, f.translation).denominator != 1


def fixed_point_exists(f: AffineTorusMap, element: int | None = None) -> FreenessCertificate:
    """Decide whether ``f`` has a fixed point on its torus, with a certificate.

    In lattice coordinates the condition is ``(M - I) z + t in Z^n``.  With
    ``P (M - I) Q = D`` in Smith form and ``y = Q^-1 z`` this reads
    ``D y + P t in Z^n``: rows with a zero invariant force ``(P t)_i`` to be
    an integer, every other row can be solved for ``y_i``.
    """
    L = f.spec.lattice
    n = f.spec.real_dim
    A = f.lattice_linear - Mat.identity(n)
    t = f.lattice_translation
    D, P, Q = snf(A)
    Pt = P @ t
    y = []
    for i in range(n):
        d = D[i, i]
        if d == 0:
            if Pt[i].denominator != 1:
                phi = tuple(int(x) for x in P.row(i))
                amb = L.ambient_functional(phi)
                cert = FreenessCertificate(True, functional=phi, functional_ambient=amb, element=element)
                assert cert.verify(f), "freeness certificate failed to re-verify"
                return cert
            y.append(Fraction(0))
        else:
            y.append(-Pt[i] / d)
    z = L.from_coords(Q @ y)
    cert = FreenessCertificate(False, witness=z, element=element)
    assert cert.verify(f), "fixed-point witness failed to re-verify"
    return cert


def default_grid_size(f: AffineTorusMap) -> int:
    """Smallest grid resolution guaranteed to contain a fixed point if one exists.

    Every solution of the Smith system has denominators dividing
    ``den(t) * d_max``, where ``d_max`` is the largest invariant of ``M - I``
    (the others divide it).
    """
    A = f.lattice_linear - Mat.identity(f.spec.real_dim)
    D, _, _ = snf(A)
    invariants = [int(D[i, i]) for i in range(min(D.shape)) if D[i, i]]
    d_max = invariants[-1] if invariants else 1
    return denominator_lcm(f.lattice_translation) * d_max


def _grid_system(f: AffineTorusMap, K: int):
    n = f.spec.real_dim
    A = f.lattice_linear - Mat.identity(n)
    t = f.lattice_translation
    d = denominator_lcm(t)
    modulus = K * d
    A_int = np.array([[int(x) * d for x in A.row(i)] for i in range(n)], dtype=np.int64)
    c = np.array([int(x * modulus) for x in t], dtype=np.int64)
    return A_int, c, modulus


def find_fixed_point_on_grid(
    f: AffineTorusMap,
    K: int | None = None,
    cap: int = DEFAULT_GRID_CAP,
    backend: str | None = None,
) -> tuple | None:
    """Exhaustively search ``(1/K) L / L`` for a fixed point of ``f``.

    Returns the first fixed point (ambient coordinates) or ``None``.
    """
    if K is None:
        K = default_grid_size(f)
    if K < 1:
        raise ValueError("grid size must be positive")
    n = f.spec.real_dim
    if K**n > cap:
        raise GridTooLarge(f"{K}^{n} grid points exceed the cap of {cap}")
    A, c, modulus = _grid_system(f, K)
    idx = _kernels.grid_scan(A, c, modulus, K, backend=backend)
    if idx < 0:
        return None
    k = _kernels.decode_index(idx, n, K)
    return f.spec.lattice.from_coords([Fraction(x, K) for x in k])


def fixed_point_bruteforce(
    f: AffineTorusMap,
    K: int | None = None,
    cap: int = DEFAULT_GRID_CAP,
    backend: str | None = None,
) -> bool:
    return find_fixed_point_on_grid(f, K, cap=cap, backend=backend) is not None


@dataclass(frozen=True)
class ElementVerdict:
    index: int
    word: tuple[str, ...]
    order: int
    is_translation: bool
    free: bool | None  # None for the identity
    certificate: FreenessCertificate | None
    representative: int  # element whose certificate decided this verdict


@dataclass(frozen=True)
class FreeActionReport:
    elements: tuple[ElementVerdict, ...]
    checked: tuple[int, ...]
    use_classes: bool

    @property
    def translations(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.elements if e.is_translation)

    @property
    def non_free(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.elements if e.free is False)

    @property
    def all_free(self) -> bool:
        return not self.non_free

    @property
    def hyperelliptic_valid(self) -> bool:
        return self.all_free and not self.translations


def verify_free_action(G: FiniteAffineGroup, use_classes: bool = True) -> FreeActionReport:
    """Certify freeness of every non-identity element.

    With ``use_classes`` only one representative per conjugacy class is
    solved (freeness is a class function); the rest inherit its verdict.
    """
    rep_of = {}
    if use_classes:
        for cls in G.classes:
            for i in cls:
                rep_of[i] = cls[0]
    else:
        rep_of = {i: i for i in range(G.order)}
    certs: dict[int, FreenessCertificate] = {}
    for i in sorted(set(rep_of.values())):
        if i != 0:
            certs[i] = fixed_point_exists(G.elements[i], element=i)
    verdicts = []
    for i, f in enumerate(G.elements):
        rep = rep_of[i]
        if i == 0:
            verdicts.append(ElementVerdict(0, (), 1, False, None, None, 0))
            continue
        cert = certs[rep]
        verdicts.append(
            ElementVerdict(
                index=i,
                word=G.words[i],
                order=G.element_order(i),
                is_translation=is_translation(f),
                free=cert.free,
                certificate=cert if rep == i else None,
                representative=rep,
            )
        )
    return FreeActionReport(tuple(verdicts), tuple(sorted(certs)), use_classes)
