"""Exact scalars and matrices over Q and Q(i), plus integer normal forms.

Every value here is immutable.  Rational scalars are plain
:class:`fractions.Fraction`; Gaussian rationals use :class:`GaussRat`.  A
:class:`GaussRat` whose imaginary part vanishes is normalized back to a
``Fraction`` whenever it is stored in a :class:`Mat` or vector, so structural
equality never depends on which field an entry was computed in.

Normal form conventions (used everywhere in the package):

* ``hnf`` is row style: ``H = U @ M`` with ``U`` unimodular, ``H`` upper
  triangular, positive pivots, and entries above each pivot reduced into
  ``[0, pivot)``.  Zero rows (for tall inputs) sit at the bottom.
* ``snf`` returns ``D = P @ M @ Q`` with ``d1 | d2 | ...`` all nonnegative.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import DimensionMismatch, RankDeficient

__all__ = [
    "GaussRat",
    "I",
    "Mat",
    "Scalar",
    "conj",
    "eigenspace_basis",
    "hnf",
    "rat",
    "snf",
    "span_coordinates",
    "vec",
    "xgcd",
]


class GaussRat:
    """An element ``re + im*i`` of the Gaussian rationals Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x, 0)
        return None

    def __add__(self, other):
        o = GaussRat._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussRat._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GaussRat._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re * other, self.im * other)
        o = GaussRat._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussRat._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussRat(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        o = GaussRat._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussRat(1) / self ** (-k)
        out, base = GaussRat(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = GaussRat._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{_imag_str(abs(self.im))}"


def _imag_str(v: Fraction) -> str:
    if v == 1:
        return "i"
    if v == -1:
        return "-i"
    return f"{v}i"


I = GaussRat(0, 1)

Scalar = Union[Fraction, GaussRat]


def rat(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    if isinstance(x, GaussRat):
        if x.im != 0:
            raise ValueError(f"{x} is not rational")
        return x.re
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


def _scalar(x) -> Scalar:
    if type(x) is Fraction:
        return x
    if isinstance(x, GaussRat):
        return x.re if x.im == 0 else x
    return rat(x)


def conj(x):
    """Complex conjugate of a scalar, a vector (tuple) or a Mat."""
    if isinstance(x, GaussRat):
        return _scalar(x.conjugate())
    if isinstance(x, Mat):
        return x.conj()
    if isinstance(x, tuple):
        return tuple(conj(e) for e in x)
    return x


def vec(values: Iterable) -> tuple:
    """Exact vector: a tuple of normalized scalars."""
    return tuple(_scalar(v) for v in values)


def _is_zero(x) -> bool:
    return not x


# --------------------------------------------------------------------------
# Matrices


class Mat:
    """Immutable dense matrix over Q or Q(i)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(_scalar(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise DimensionMismatch("empty matrix needs an explicit column count")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, values: Sequence) -> "Mat":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Mat":
        columns = list(columns)
        if not columns:
            if nrows is None:
                raise DimensionMismatch("empty column list needs an explicit row count")
            return cls([[] for _ in range(nrows)], cols=0)
        n = len(columns[0])
        if any(len(c) != n for c in columns):
            raise DimensionMismatch("columns of unequal length")
        return cls([[c[i] for c in columns] for i in range(n)], cols=len(columns))

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple:
        """Row-major flat tuple of entries."""
        return tuple(x for row in self._data for x in row)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            i, j = key
            return self._data[i][j]
        return self._data[key]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    @property
    def T(self) -> "Mat":
        return Mat([self.col(j) for j in range(self.cols)], cols=self.rows)

    # arithmetic -----------------------------------------------------------
    def _check_same(self, other: "Mat") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        self._check_same(other)
        return Mat(
            ([a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)),
            cols=self.cols,
        )

    def __sub__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        self._check_same(other)
        return Mat(
            ([a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)),
            cols=self.cols,
        )

    def __neg__(self) -> "Mat":
        return Mat(([-a for a in r] for r in self._data), cols=self.cols)

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            return NotImplemented
        c = _scalar(c)
        return Mat(([c * a for a in r] for r in self._data), cols=self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            return Mat(
                ([_dot(r, c) for c in ocols] for r in self._data), cols=other.cols
            )
        v = tuple(other)
        if len(v) != self.cols:
            raise DimensionMismatch(f"cannot apply {self.shape} matrix to length-{len(v)} vector")
        return vec(_dot(r, v) for r in self._data)

    def __pow__(self, k: int) -> "Mat":
        if self.rows != self.cols:
            raise DimensionMismatch("power of a non-square matrix")
        if k < 0:
            return self.inv() ** (-k)
        out, base = Mat.identity(self.rows), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def conj(self) -> "Mat":
        return Mat(([conj(a) for a in r] for r in self._data), cols=self.cols)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._data)
        return f"Mat([{body}])"

    # predicates -------------------------------------------------------------
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(isinstance(x, Fraction) and x.denominator == 1 for x in self.entries)

    def is_real(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.entries)

    def to_ints(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return [[int(x) for x in r] for r in self._data]

    # elimination ------------------------------------------------------------
    def rref(self) -> tuple["Mat", tuple[int, ...]]:
        rows, pivots = _rref([list(r) for r in self._data], self.cols)
        return Mat(rows, cols=self.cols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[tuple]:
        """Basis of the right kernel, one vector per free column."""
        R, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for k, p in enumerate(pivots):
                v[p] = -R[k, f]
            basis.append(vec(v))
        return basis

    def det(self):
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        a = [list(r) for r in self._data]
        n = self.rows
        d = Fraction(1)
        for j in range(n):
            p = next((i for i in range(j, n) if not _is_zero(a[i][j])), None)
            if p is None:
                return Fraction(0)
            if p != j:
                a[j], a[p] = a[p], a[j]
                d = -d
            d = d * a[j][j]
            inv = Fraction(1) / a[j][j]
            for i in range(j + 1, n):
                if not _is_zero(a[i][j]):
                    c = a[i][j] * inv
                    a[i] = [x - c * y for x, y in zip(a[i], a[j])]
        return _scalar(d)

    def inv(self) -> "Mat":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._data)]
        rows, pivots = _rref(aug, 2 * n)
        if tuple(pivots[:n]) != tuple(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Mat((r[n:] for r in rows[:n]), cols=n)

    def solve(self, b: Sequence) -> tuple:
        """Unique solution of ``self @ x = b`` for square invertible ``self``."""
        n = self.rows
        if len(b) != n:
            raise DimensionMismatch("right-hand side length")
        aug = [list(r) + [b[i]] for i, r in enumerate(self._data)]
        rows, pivots = _rref(aug, self.cols + 1)
        if tuple(pivots) != tuple(range(self.cols)):
            raise ZeroDivisionError("system is singular or inconsistent")
        return vec(r[-1] for r in rows[: self.cols])

    @staticmethod
    def hstack(*mats: "Mat") -> "Mat":
        rows = mats[0].rows
        if any(m.rows != rows for m in mats):
            raise DimensionMismatch("hstack row counts differ")
        return Mat(
            (sum((list(m.row(i)) for m in mats), []) for i in range(rows)),
            cols=sum(m.cols for m in mats),
        )

    @staticmethod
    def vstack(*mats: "Mat") -> "Mat":
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise DimensionMismatch("vstack column counts differ")
        return Mat((r for m in mats for r in m._data), cols=cols)


def _dot(a: Sequence, b: Sequence):
    s = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            s = s + x * y
    return s


def _rref(a: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; pivots are normalized to 1."""
    a = [[_scalar(x) for x in row] for row in a]
    m = len(a)
    pivots: list[int] = []
    r = 0
    for j in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if not _is_zero(a[i][j])), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = Fraction(1) / a[r][j]
        a[r] = [_scalar(x * inv) if x else x for x in a[r]]
        for i in range(m):
            if i != r and not _is_zero(a[i][j]):
                c = a[i][j]
                a[i] = [_scalar(x - c * y) if y else x for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
    return a, pivots


def span_coordinates(basis: Sequence[Sequence], v: Sequence) -> tuple | None:
    """Coefficients expressing ``v`` in the (independent) vectors ``basis``.

    Returns ``None`` when ``v`` is outside their span.
    """
    k = len(basis)
    n = len(v)
    aug = [[basis[c][i] for c in range(k)] + [v[i]] for i in range(n)]
    rows, pivots = _rref(aug, k + 1)
    if k in pivots:
        return None
    if len(pivots) != k:
        raise RankDeficient("basis vectors are linearly dependent")
    return vec(rows[i][k] for i in range(k))


# --------------------------------------------------------------------------
# Integer normal forms


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _int_rows(M) -> list[list[int]]:
    if isinstance(M, Mat):
        return M.to_ints()
    rows = [[int(x) for x in r] for r in M]
    for r, src in zip(rows, M):
        if any(Fraction(x) != y for x, y in zip(src, r)):
            raise ValueError("matrix has non-integer entries")
    return rows


def hnf(M) -> tuple[Mat, Mat]:
    """Row-style Hermite normal form ``H = U @ M``.

    ``M`` must have full column rank.  ``H`` has the same shape as ``M``; its
    first ``cols`` rows are upper triangular with positive diagonal and the
    entries above each pivot lie in ``[0, pivot)``; remaining rows are zero.
    """
    a = _int_rows(M)
    m = len(a)
    n = len(a[0]) if a else (M.cols if isinstance(M, Mat) else 0)
    if Mat(a, cols=n).rank() != n:
        raise RankDeficient(f"matrix of shape ({m}, {n}) does not have full column rank")
    u = [[int(i == j) for j in range(m)] for i in range(m)]

    for j in range(n):
        r = j  # full column rank: pivot of column j sits in row j
        for i in range(r + 1, m):
            if a[i][j] == 0:
                continue
            p, q = a[r][j], a[i][j]
            g, x, y = xgcd(p, q)
            pg, qg = p // g, q // g
            for mat in (a, u):
                ri, rr = mat[i], mat[r]
                mat[r] = [x * s + y * t for s, t in zip(rr, ri)]
                mat[i] = [-qg * s + pg * t for s, t in zip(rr, ri)]
        if a[r][j] < 0:
            a[r] = [-s for s in a[r]]
            u[r] = [-s for s in u[r]]
        piv = a[r][j]
        for i in range(r):
            f = a[i][j] // piv
            if f:
                a[i] = [s - f * t for s, t in zip(a[i], a[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
    return Mat(a, cols=n), Mat(u, cols=m)


def snf(M) -> tuple[Mat, Mat, Mat]:
    """Smith normal form ``D = P @ M @ Q`` with a nonnegative divisibility chain."""
    a = _int_rows(M)
    m = len(a)
    n = len(a[0]) if a else (M.cols if isinstance(M, Mat) else 0)
    p = [[int(i == j) for j in range(m)] for i in range(m)]
    q = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        p[i], p[k] = p[k], p[i]

    def swap_cols(j, k):
        for mat in (a, q):
            for r in mat:
                r[j], r[k] = r[k], r[j]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [s + f * t for s, t in zip(a[dst], a[src])]
        p[dst] = [s + f * t for s, t in zip(p[dst], p[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for mat in (a, q):
            for r in mat:
                r[dst] += f * r[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not nz:
                break
            _, i0, j0 = min(nz)
            swap_rows(t, i0)
            swap_cols(t, j0)
            piv = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-s for s in a[t]]
            p[t] = [-s for s in p[t]]
    return Mat(a, cols=n), Mat(p, cols=m), Mat(q, cols=n)


# --------------------------------------------------------------------------
# Eigenspaces over Q(i)


def eigenspace_basis(M: Mat, lam) -> list[tuple]:
    """Canonical basis of ``ker(M - lam*I)`` over Q(i).

    The basis is the nonzero part of the reduced row echelon form of any
    spanning set, so it depends only on the eigenspace itself.
    """
    if not M.is_square():
        raise DimensionMismatch("eigenspace of a non-square matrix")
    kernel = (M - Mat.identity(M.rows) * _scalar(lam)).nullspace()
    if not kernel:
        return []
    R, pivots = Mat(kernel, cols=M.cols).rref()
    return [R.row(k) for k in range(len(pivots))]


def denominator_lcm(values: Iterable) -> int:
    d = 1
    for x in values:
        if isinstance(x, GaussRat):
            dens = (x.re.denominator, x.im.denominator)
        else:
            dens = (Fraction(x).denominator,)
        for e in dens:
            d = d * e // gcd(d, e)
    return d
