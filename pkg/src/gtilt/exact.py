"""Exact scalars and dense matrices over prime fields and the rationals.

Everything else in the package reduces to the three solvers here:
:func:`rank`, :func:`nullspace` and :func:`solve`.  Elimination is plain
Gauss-Jordan with the first nonzero pivot in column order, so results are
reproducible for a given input.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@total_ordering
class FpElement:
    """Element of F_p.  Concrete subclasses carry the modulus ``p``."""

    __slots__ = ("v",)
    p: int = 0

    def __init__(self, v):
        if isinstance(v, Fraction):
            v = v.numerator * pow(v.denominator, -1, self.p)
        elif isinstance(v, FpElement):
            v = v.v
        self.v = int(v) % self.p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise TypeError("mixing elements of different prime fields")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return type(self)(other).v
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(self.v + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(self.v - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(o - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(self.v * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return type(self)(self.v * pow(o, -1, self.p))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return type(self)(o) / self

    def __neg__(self):
        return type(self)(-self.v)

    def __pow__(self, n: int):
        if n < 0:
            return type(self)(pow(pow(self.v, -1, self.p), -n, self.p))
        return type(self)(pow(self.v, n, self.p))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.v == o

    def __lt__(self, other):
        return self.v < self._coerce(other)

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v}"


class Field:
    """Descriptor for a ground field.  Call it to convert integers/fractions."""

    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        z = self.__dict__.get("_zero")
        if z is None:
            z = self.__dict__["_zero"] = self(0)
        return z

    @property
    def one(self):
        o = self.__dict__.get("_one")
        if o is None:
            o = self.__dict__["_one"] = self(1)
        return o

    def random(self, rng: random.Random, bound: int = 97):
        return self(rng.randint(-bound, bound))

    def to_int_pair(self, x) -> tuple[int, int]:
        """Numerator/denominator pair used by serialisers and sympy bridges."""
        raise NotImplementedError


class RationalField(Field):
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, FpElement):
            raise TypeError("cannot coerce an F_p element into Q")
        return Fraction(x)

    def to_int_pair(self, x):
        x = Fraction(x)
        return x.numerator, x.denominator

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    @property
    def descriptor(self) -> str:
        return "rational"


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.element = type(f"GF{p}", (FpElement,), {"p": p, "__slots__": ()})

    def __call__(self, x):
        if isinstance(x, FpElement) and x.p == self.characteristic:
            return x
        return self.element(x)

    def random(self, rng, bound=None):
        return self.element(rng.randrange(self.characteristic))

    def to_int_pair(self, x):
        return int(self(x)), 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})"

    @property
    def descriptor(self) -> str:
        return str(self.characteristic)


QQ = RationalField()
_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def field_from_descriptor(desc: str) -> Field:
    desc = desc.strip()
    if desc in ("rational", "QQ", "Q", "0"):
        return QQ
    return GF(int(desc))


class Matrix:
    """Dense row-major matrix of field elements."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: list[list] | None = None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            z = field.zero
            data = [[z] * cols for _ in range(rows)]
        elif len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("entry count does not match shape")
        self.data = data

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [[field(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, rows)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = list(columns)
        data = [[cols[j][i] for j in range(len(cols))] for i in range(rows)]
        return cls(field, rows, len(cols), data)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.data]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, [list(r) for r in self.data])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    T = property(transpose)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        z = self.field.zero
        ot = other.data
        out = []
        for row in self.data:
            acc = [z] * other.cols
            for k, a in enumerate(row):
                if a:
                    ok = ot[k]
                    for j in range(other.cols):
                        b = ok[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.field, self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> list:
        z = self.field.zero
        out = []
        for row in self.data:
            acc = z
            for a, b in zip(row, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.field, self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.field, self.rows, self.cols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix(self.field, self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def is_zero(self) -> bool:
        return not any(a for r in self.data for a in r)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return Matrix(self.field, self.rows, self.cols + other.cols,
                      [r + s for r, s in zip(self.data, other.data)])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return Matrix(self.field, self.rows + other.rows, self.cols,
                      [list(r) for r in self.data] + [list(r) for r in other.data])

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix(self.field, len(rows), len(cols),
                      [[self.data[i][j] for j in cols] for i in rows])

    def rank(self) -> int:
        return rank(self)

    def nullspace(self) -> "Matrix":
        return nullspace(self)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        x = solve(self, Matrix.identity(self.field, self.rows))
        if x is None:
            raise ZeroDivisionError("matrix is singular")
        return x

    def determinant(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self.data]
        n = self.rows
        det = self.field.one
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c]), None)
            if piv is None:
                return self.field.zero
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det = det * m[c][c]
            inv = 1 / m[c][c]
            for r in range(c + 1, n):
                f = m[r][c]
                if f:
                    f = f * inv
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return det

    def __repr__(self):
        return "Matrix(" + repr([[str(a) for a in r] for r in self.data]) + ")"


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (first pivot wins)."""
    m = [list(r) for r in A.data]
    pivots: list[int] = []
    r = 0
    for c in range(A.cols):
        if r == A.rows:
            break
        piv = next((i for i in range(r, A.rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [a * inv for a in m[r]]
        row = m[r]
        for i in range(A.rows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], row)]
        pivots.append(c)
        r += 1
    return Matrix(A.field, A.rows, A.cols, m), pivots


def rank(A: Matrix) -> int:
    if A.rows == 0 or A.cols == 0:
        return 0
    # Forward elimination only; cheaper than full rref.
    m = [list(r) for r in A.data if any(r)]
    r = 0
    for c in range(A.cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                f = f * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(A: Matrix) -> Matrix:
    """Columns form a basis of ker(A)."""
    R, pivots = rref(A)
    free = [c for c in range(A.cols) if c not in set(pivots)]
    f = A.field
    basis = []
    for fc in free:
        v = [f.zero] * A.cols
        v[fc] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = -R.data[i][fc]
        basis.append(v)
    return Matrix.from_columns(f, basis, A.cols)


def solve(A: Matrix, b: Matrix) -> Matrix | None:
    """Some x with A x = b, or ``None`` if the system is inconsistent."""
    if A.rows != b.rows:
        raise ValueError("solve: A and b have different row counts")
    aug = A.hstack(b)
    R, pivots = rref(aug)
    if any(p >= A.cols for p in pivots):
        return None
    f = A.field
    x = Matrix.zeros(f, A.cols, b.cols)
    for i, pc in enumerate(pivots):
        x.data[pc] = list(R.data[i][A.cols:])
    return x


def column_space_basis(A: Matrix) -> list[int]:
    """Indices of a maximal independent set of columns (first ones win)."""
    return rref(A)[1]


def row_basis(field: Field, vectors: Sequence[Sequence], dim: int) -> list[list]:
    """RREF basis of the span of ``vectors`` (each of length ``dim``)."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    R, piv = rref(Matrix(field, len(vecs), dim, vecs))
    return [R.data[i] for i in range(len(piv))]


def random_matrix(field: Field, rows: int, cols: int, rng: random.Random, bound: int = 5) -> Matrix:
    return Matrix(field, rows, cols,
                  [[field(rng.randint(-bound, bound)) for _ in range(cols)] for _ in range(rows)])
