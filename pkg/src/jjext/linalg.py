"""Exact scalars, dense linear algebra and finite enumeration.

Scalars are plain Python values: ``int`` residues in ``[0, p)`` for a prime
field and :class:`fractions.Fraction` for the rationals.  Vectors are tuples
of scalars.  Matrices follow the column convention: column ``j`` holds the
coordinates of the image of basis vector ``j``.
"""

from __future__ import annotations

import functools

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .errors import BudgetExceeded, DimensionMismatch

DEFAULT_BUDGET = 10**8

Vector = tuple


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def check_budget(stage: str, required: int, budget: int | None) -> None:
    limit = DEFAULT_BUDGET if budget is None else budget
    if required > limit:
        raise BudgetExceeded(stage, required, limit)


@dataclass(frozen=True)
class Field:
    """The rationals (``modulus == 0``) or the prime field of that order."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus != 0 and not _is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text in ("Q", "QQ"):
            return cls(0)
        if text[:1] in ("F", "f") and text[1:].isdigit():
            return cls(int(text[1:]))
        raise ValueError(f"unknown field descriptor {text!r}; expected 'Q' or 'F<p>'")

    def __str__(self):
        return "Q" if self.modulus == 0 else f"F{self.modulus}"

    @property
    def characteristic(self) -> int:
        return self.modulus

    @property
    def is_finite(self) -> bool:
        return self.modulus != 0

    @property
    def order(self) -> int | None:
        return self.modulus or None

    # -- scalars ---------------------------------------------------------

    @property
    def zero(self):
        return 0 if self.modulus else Fraction(0)

    @property
    def one(self):
        return 1 if self.modulus else Fraction(1)

    def __call__(self, value):
        """Coerce an int, Fraction or string such as ``"3/7"`` into the field."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if self.modulus:
            if isinstance(value, Fraction):
                if value.denominator % self.modulus == 0:
                    raise ZeroDivisionError(f"{value} has no image in {self}")
                return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
            return int(value) % self.modulus
        return Fraction(value)

    def reduce(self, x):
        if self.modulus:
            return x % self.modulus
        return x if isinstance(x, Fraction) else Fraction(x)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.modulus:
            return pow(x, -1, self.modulus)
        return 1 / Fraction(x)

    def elements(self) -> list:
        if not self.modulus:
            raise ValueError("the rationals cannot be enumerated")
        return list(range(self.modulus))

    def nonzero(self) -> list:
        return self.elements()[1:]

    def format(self, x) -> str:
        return str(x)

    # -- vectors ---------------------------------------------------------

    def zeros(self, n: int) -> Vector:
        return (self.zero,) * n

    def unit(self, n: int, i: int) -> Vector:
        return _unit(self.modulus, n, i)

    def vadd(self, u: Vector, v: Vector) -> Vector:
        if self.modulus:
            p = self.modulus
            return tuple((a + b) % p for a, b in zip(u, v))
        return tuple(a + b for a, b in zip(u, v))

    def vsub(self, u: Vector, v: Vector) -> Vector:
        if self.modulus:
            p = self.modulus
            return tuple((a - b) % p for a, b in zip(u, v))
        return tuple(a - b for a, b in zip(u, v))

    def vneg(self, u: Vector) -> Vector:
        return tuple(self.reduce(-a) for a in u)

    def vscale(self, c, u: Vector) -> Vector:
        return tuple(self.reduce(c * a) for a in u)

    def vsum(self, vectors: Iterable[Vector], n: int) -> Vector:
        acc = [0] * n
        for v in vectors:
            for k, a in enumerate(v):
                acc[k] += a
        return tuple(self.reduce(a) for a in acc)

    def combine(self, coeffs: Sequence, vectors: Sequence[Vector], n: int) -> Vector:
        """Return ``sum(c * v)`` over paired coefficients and vectors."""
        acc = [0] * n
        for c, v in zip(coeffs, vectors):
            if c:
                for k, a in enumerate(v):
                    if a:
                        acc[k] += c * a
        return tuple(self.reduce(a) for a in acc)

    def dot(self, u: Vector, v: Vector):
        return self.reduce(sum(a * b for a, b in zip(u, v)))

    def is_zero(self, u: Vector) -> bool:
        return not any(u)


QQ = Field(0)


@functools.lru_cache(maxsize=4096)
def _unit(modulus: int, n: int, i: int) -> Vector:
    one, zero = (1, 0) if modulus else (Fraction(1), Fraction(0))
    return tuple(one if k == i else zero for k in range(n))


def GF(p: int) -> Field:
    return Field(p)


# -- linear maps ---------------------------------------------------------


@dataclass(frozen=True)
class LinearMap:
    """A ``rows x cols`` matrix; maps ``k^cols -> k^rows``."""

    field: Field
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch(f"entries do not form a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "LinearMap":
        rows = [tuple(field(x) for x in r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(field, len(rows), ncols, tuple(rows))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int | None = None) -> "LinearMap":
        columns = [tuple(field(x) for x in c) for c in columns]
        nrows = rows if rows is not None else (len(columns[0]) if columns else 0)
        if any(len(c) != nrows for c in columns):
            raise DimensionMismatch("columns of unequal length")
        entries = tuple(tuple(c[i] for c in columns) for i in range(nrows))
        return cls(field, nrows, len(columns), entries)

    @classmethod
    def identity(cls, field: Field, n: int) -> "LinearMap":
        return cls(field, n, n, tuple(field.unit(n, i) for i in range(n)))

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> "LinearMap":
        return cls(field, rows, cols, tuple(field.zeros(cols) for _ in range(rows)))

    def __call__(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} applied to {self.rows}x{self.cols} map")
        F = self.field
        return tuple(F.dot(row, v) for row in self.entries)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        return LinearMap.from_columns(self.field, [self(c) for c in other.columns()], self.rows)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in sum")
        F = self.field
        return LinearMap(F, self.rows, self.cols, tuple(F.vadd(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + other.scale(-1)

    def scale(self, c) -> "LinearMap":
        F = self.field
        return LinearMap(F, self.rows, self.cols, tuple(F.vscale(c, r) for r in self.entries))

    @property
    def T(self) -> "LinearMap":
        return LinearMap(self.field, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                         tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def rank(self) -> int:
        return len(rref(self.field, self.entries, self.cols)[1])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "LinearMap":
        if self.rows != self.cols:
            raise DimensionMismatch("only square maps are invertible")
        n = self.rows
        F = self.field
        aug = [tuple(r) + F.unit(n, i) for i, r in enumerate(self.entries)]
        red, pivots = rref(F, aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ZeroDivisionError("singular map")
        return LinearMap(F, n, n, tuple(tuple(r[n:]) for r in red[:n]))

    def kernel(self) -> list[Vector]:
        return nullspace(self.field, self.entries, self.cols)

    def flat(self) -> tuple:
        """Entries column by column."""
        return tuple(x for c in self.columns() for x in c)


# -- bilinear maps -------------------------------------------------------


@dataclass(frozen=True)
class BilinearMap:
    """Coordinate tensor ``tensor[i][j]`` = image of the basis pair ``(i, j)``."""

    field: Field
    left_dim: int
    right_dim: int
    target_dim: int
    tensor: tuple

    def __post_init__(self):
        t = self.tensor
        if len(t) != self.left_dim or any(len(row) != self.right_dim for row in t) or \
                any(len(v) != self.target_dim for row in t for v in row):
            raise DimensionMismatch(
                f"tensor does not have shape {self.left_dim}x{self.right_dim}->{self.target_dim}")

    @classmethod
    def zero(cls, field: Field, left: int, right: int, target: int) -> "BilinearMap":
        z = field.zeros(target)
        return cls(field, left, right, target, tuple((z,) * right for _ in range(left)))

    @classmethod
    def from_entries(cls, field: Field, left: int, right: int, target: int,
                     entries: dict, symmetric: bool = False) -> "BilinearMap":
        """Build from ``{(i, j): vector}``; ``symmetric`` mirrors each entry."""
        t = [[field.zeros(target) for _ in range(right)] for _ in range(left)]
        for (i, j), v in entries.items():
            v = tuple(field(x) for x in v)
            if len(v) != target:
                raise DimensionMismatch(f"entry ({i}, {j}) has length {len(v)}, expected {target}")
            t[i][j] = v
            if symmetric:
                t[j][i] = v
        return cls(field, left, right, target, tuple(tuple(r) for r in t))

    @classmethod
    def from_function(cls, field: Field, left: int, right: int, target: int,
                      fn: Callable[[int, int], Vector]) -> "BilinearMap":
        return cls(field, left, right, target,
                   tuple(tuple(tuple(fn(i, j)) for j in range(right)) for i in range(left)))

    def basis(self, i: int, j: int) -> Vector:
        return self.tensor[i][j]

    def __call__(self, u: Vector, w: Vector) -> Vector:
        if len(u) != self.left_dim or len(w) != self.right_dim:
            raise DimensionMismatch(
                f"arguments of length ({len(u)}, {len(w)}) for a {self.left_dim}x{self.right_dim} map")
        acc = [0] * self.target_dim
        t = self.tensor
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = t[i]
            for j, wj in enumerate(w):
                if not wj:
                    continue
                c = ui * wj
                for k, a in enumerate(row[j]):
                    if a:
                        acc[k] += c * a
        return tuple(self.field.reduce(a) for a in acc)

    def entries(self) -> dict:
        """Nonzero basis images as ``{(i, j): vector}``."""
        return {(i, j): v for i, row in enumerate(self.tensor) for j, v in enumerate(row) if any(v)}

    def is_zero(self) -> bool:
        return not self.entries()

    @property
    def symmetric(self) -> bool:
        if self.left_dim != self.right_dim:
            return False
        t = self.tensor
        return all(t[i][j] == t[j][i] for i in range(self.left_dim) for j in range(i))

    def asymmetric_pairs(self) -> list[tuple[int, int]]:
        t = self.tensor
        return [(i, j) for i in range(self.left_dim) for j in range(i + 1, self.right_dim) if t[i][j] != t[j][i]]

    def flat(self) -> tuple:
        return tuple(x for row in self.tensor for v in row for x in v)


def apply_bilinear(m: BilinearMap, u: Vector, w: Vector) -> Vector:
    return m(u, w)


def circular_sum(field: Field, f: Callable, x, y, z) -> Vector:
    """``f(x, y, z) + f(y, z, x) + f(z, x, y)``."""
    a, b, c = f(x, y, z), f(y, z, x), f(z, x, y)
    return field.vadd(field.vadd(a, b), c)


# -- elimination ---------------------------------------------------------


def rref(field: Field, rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    F = field
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.reduce(x * inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.reduce(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(field: Field, rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    red, pivots = rref(field, rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.reduce(-red[r][fc])
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Solution:
    """Affine solution set ``particular + span(kernel)``."""

    particular: Vector
    kernel: tuple

    def points(self, field: Field) -> Iterator[Vector]:
        """Every solution; only for finite fields."""
        n = len(self.particular)
        for coeffs in itertools.product(field.elements(), repeat=len(self.kernel)):
            yield field.vadd(self.particular, field.combine(coeffs, self.kernel, n))

    def size(self, field: Field) -> int:
        return field.modulus ** len(self.kernel)


def solve_linear(field: Field, matrix: Sequence[Sequence], rhs: Sequence, ncols: int | None = None) -> Solution | None:
    """Solve ``matrix @ x = rhs`` exactly; ``None`` when inconsistent."""
    if len(matrix) != len(rhs):
        raise DimensionMismatch(f"{len(matrix)} equations but {len(rhs)} right-hand sides")
    n = ncols if ncols is not None else (len(matrix[0]) if matrix else 0)
    if any(len(r) != n for r in matrix):
        raise DimensionMismatch("ragged system")
    aug = [tuple(r) + (field(b),) for r, b in zip(matrix, rhs)]
    red, pivots = rref(field, aug, n + 1)
    if n in pivots:
        return None
    x = [field.zero] * n
    for r, pc in enumerate(pivots):
        x[pc] = red[r][n]
    kernel = nullspace(field, [r[:n] for r in red], n)
    return Solution(tuple(x), tuple(kernel))


def span_coordinates(field: Field, basis: Sequence[Vector], v: Vector) -> Vector | None:
    """Coordinates of ``v`` in ``basis`` (assumed independent), or ``None``."""
    n = len(v)
    if not basis:
        return () if not any(v) else None
    rows = [tuple(b[i] for b in basis) for i in range(n)]
    sol = solve_linear(field, rows, v, len(basis))
    return None if sol is None else sol.particular


def in_span(field: Field, basis: Sequence[Vector], v: Vector) -> bool:
    return span_coordinates(field, basis, v) is not None


def rank_of(field: Field, vectors: Sequence[Vector], n: int) -> int:
    return len(rref(field, vectors, n)[1]) if vectors else 0


def span_basis(field: Field, vectors: Sequence[Vector], n: int) -> list[Vector]:
    """Canonical (reduced echelon) basis of the span."""
    if not vectors:
        return []
    red, pivots = rref(field, vectors, n)
    return [tuple(red[i]) for i in range(len(pivots))]


def complete_basis(field: Field, basis: Sequence[Vector], n: int) -> list[Vector]:
    """Standard basis vectors, in index order, that extend ``basis`` to ``k^n``."""
    current = list(basis)
    extra = []
    for i in range(n):
        e = field.unit(n, i)
        if rank_of(field, current + [e], n) > len(current):
            current.append(e)
            extra.append(e)
    return extra


# -- enumeration ---------------------------------------------------------


def enumerate_vectors(field: Field, dim: int, budget: int | None = None) -> Iterator[Vector]:
    """All ``p**dim`` vectors in lexicographic order."""
    if not field.is_finite:
        raise ValueError("enumeration needs a finite field")
    check_budget("vectors", field.modulus ** dim, budget)
    return itertools.product(range(field.modulus), repeat=dim)


def enumerate_maps(field: Field, rows: int, cols: int, budget: int | None = None) -> Iterator[LinearMap]:
    """Every ``rows x cols`` matrix, ordered lexicographically by column list."""
    check_budget("linear maps", field.modulus ** (rows * cols), budget)
    cols_list = list(enumerate_vectors(field, rows))
    for choice in itertools.product(cols_list, repeat=cols):
        yield LinearMap(field, rows, cols, tuple(zip(*choice)) if cols else tuple(() for _ in range(rows)))


def gl_order(p: int, n: int) -> int:
    return math.prod(p**n - p**i for i in range(n))


def enumerate_invertible(field: Field, dim: int, budget: int | None = None) -> Iterator[LinearMap]:
    """Every element of GL_dim(F_p) exactly once.

    Columns are chosen left to right, each outside the span of the previous
    ones, so the output is the lexicographic order of the column lists.
    """
    if not field.is_finite:
        raise ValueError("enumeration needs a finite field")
    check_budget("invertible maps", field.modulus ** (dim * dim), budget)
    p = field.modulus
    vectors = list(itertools.product(range(p), repeat=dim))

    def span_set(cols):
        out = set()
        for coeffs in itertools.product(range(p), repeat=len(cols)):
            out.add(field.combine(coeffs, cols, dim))
        return out

    def extend(cols):
        if len(cols) == dim:
            yield LinearMap(field, dim, dim, tuple(zip(*cols)) if dim else ())
            return
        forbidden = span_set(cols)
        for v in vectors:
            if v not in forbidden:
                yield from extend(cols + [v])

    yield from extend([])
