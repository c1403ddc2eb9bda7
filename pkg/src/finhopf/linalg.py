"""Exact dense linear algebra over the rationals.

Everything here is plain Gaussian elimination with the first nonzero entry
as pivot, so results are canonical: ``rref`` is the reduced row echelon form,
and ``nullspace`` returns the unique basis of the kernel that is itself in
reduced echelon form with pivot entries 1.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import DimensionMismatch
from .rationals import rat

Vector = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def vec(values) -> Vector:
    return tuple(rat(v) for v in values)


class QMatrix:
    """An immutable rational matrix, stored row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols=None):
        rows = tuple(tuple(rat(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionMismatch("ragged rows in matrix")
        else:
            width = 0 if cols is None else cols
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def identity(cls, n) -> "QMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols) -> "QMatrix":
        return cls([[_ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns, rows=None) -> "QMatrix":
        columns = [vec(c) for c in columns]
        if not columns:
            return cls([], cols=0) if rows is None else cls.zeros(rows, 0)
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise DimensionMismatch("ragged columns")
        return cls([[c[i] for c in columns] for i in range(height)])

    def entry(self, i, j) -> Fraction:
        return self.data[i][j]

    def row(self, i) -> Vector:
        return self.data[i]

    def column(self, j) -> Vector:
        return tuple(r[j] for r in self.data)

    def __eq__(self, other):
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"QMatrix[{self.rows}x{self.cols}: {body}]"

    def __add__(self, other):
        self._same_shape(other)
        return QMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            cols=self.cols,
        )

    def __sub__(self, other):
        self._same_shape(other)
        return QMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            cols=self.cols,
        )

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "QMatrix":
        c = rat(c)
        return QMatrix([[c * x for x in r] for r in self.data], cols=self.cols)

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __mul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = []
        for ra in self.data:
            row = []
            for j in range(other.cols):
                acc = _ZERO
                for k, a in enumerate(ra):
                    if a:
                        acc += a * other.data[k][j]
                row.append(acc)
            out.append(row)
        return QMatrix(out, cols=other.cols)

    def matvec(self, v) -> Vector:
        v = vec(v)
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} vs {self.cols} columns")
        return tuple(
            sum((a * x for a, x in zip(r, v) if a), _ZERO) for r in self.data
        )

    def transpose(self) -> "QMatrix":
        return QMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def rref(self):
        """Reduced row echelon form and the tuple of pivot columns."""
        m = [list(r) for r in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            pivot_row = next((i for i in range(r, self.rows) if m[i][c]), None)
            if pivot_row is None:
                continue
            m[r], m[pivot_row] = m[pivot_row], m[r]
            inv = _ONE / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return QMatrix(m, cols=self.cols), tuple(pivots)

    def rank(self) -> int:
        # Columns that never share a row with each other can be eliminated
        # independently; splitting into those components first keeps block
        # matrices (common downstream) far away from cubic cost in the
        # full dimension.
        components = self._column_components()
        if len(components) <= 1:
            return len(self.rref()[1])
        total = 0
        for cols in components:
            rows = sorted({i for j in cols for i in range(self.rows) if self.data[i][j]})
            sub = QMatrix([[self.data[i][j] for j in cols] for i in rows], cols=len(cols))
            total += len(sub.rref()[1])
        return total

    def _column_components(self):
        parent = list(range(self.cols))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for row in self.data:
            support = [j for j, x in enumerate(row) if x]
            for a, b in zip(support, support[1:]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        groups = {}
        for j in range(self.cols):
            groups.setdefault(find(j), []).append(j)
        return [sorted(g) for g in groups.values()]

    def nullspace(self):
        """Canonical kernel basis: echelonized rows with pivot entries 1."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        raw = []
        for f in free:
            v = [_ZERO] * self.cols
            v[f] = _ONE
            for r, p in enumerate(pivots):
                v[p] = -reduced.data[r][f]
            raw.append(v)
        if not raw:
            return []
        canonical, _ = QMatrix(raw, cols=self.cols).rref()
        return [canonical.row(i) for i in range(len(raw))]

    def solve(self, rhs):
        """Any exact solution of ``self @ x = rhs``, or None if inconsistent."""
        rhs = vec(rhs)
        if len(rhs) != self.rows:
            raise DimensionMismatch(f"rhs length {len(rhs)} vs {self.rows} rows")
        aug = QMatrix([list(r) + [b] for r, b in zip(self.data, rhs)], cols=self.cols + 1)
        reduced, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [_ZERO] * self.cols
        for r, p in enumerate(pivots):
            x[p] = reduced.data[r][self.cols]
        return tuple(x)

    def inverse(self):
        """Exact inverse, or None when the matrix is singular."""
        if self.rows != self.cols:
            return None
        n = self.rows
        aug = QMatrix(
            [list(r) + [(_ONE if i == j else _ZERO) for j in range(n)] for i, r in enumerate(self.data)],
            cols=2 * n,
        )
        reduced, pivots = aug.rref()
        if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) != n:
            return None
        return QMatrix([r[n:] for r in reduced.data], cols=n)

    def is_invertible(self) -> bool:
        return self.inverse() is not None

    def char_poly(self):
        """Characteristic polynomial coefficients, ascending: x^n + c[n-1]x^(n-1)+...

        Computed by the Faddeev-LeVerrier recursion, which stays in exact
        rationals throughout.
        """
        if self.rows != self.cols:
            raise DimensionMismatch("characteristic polynomial needs a square matrix")
        n = self.rows
        coeffs = [_ZERO] * n + [_ONE]
        m = QMatrix.zeros(n, n)
        ident = QMatrix.identity(n)
        c = _ONE
        for k in range(1, n + 1):
            m = self * m + ident.scale(c)
            am = self * m
            trace = sum((am.data[i][i] for i in range(n)), _ZERO)
            c = -trace / k
            coeffs[n - k] = c
        return coeffs


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(coeffs) -> list[Fraction]:
    """All rational roots of a rational-coefficient polynomial, ascending.

    Coefficients ascending; the zero polynomial is rejected.
    """
    coeffs = [rat(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial has every root")
    roots = []
    if coeffs[0] == 0:
        roots.append(_ZERO)
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
    if len(coeffs) <= 1:
        return roots
    scale = 1
    for c in coeffs:
        scale = scale * c.denominator // _gcd(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    lead, const = ints[-1], ints[0]
    seen = set(roots)
    for p in _divisors(const):
        for q in _divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in seen:
                    continue
                acc = _ZERO
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    seen.add(cand)
                    roots.append(cand)
    return sorted(roots)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def rational_eigenvalues(m: QMatrix) -> list[Fraction]:
    """The rational eigenvalues of a square rational matrix, ascending."""
    if m.rows == 0:
        return []
    return rational_roots(m.char_poly())
