"""Jacobi-Jordan algebras, their modules, morphisms and stock examples."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch
from .linalg import (BilinearMap, Field, LinearMap, Vector, in_span, rank_of,
                     span_basis, span_coordinates, nullspace, check_budget)
from .report import Report, run_checks


@dataclass(frozen=True)
class JJAlgebra:
    """A finite-dimensional algebra given by its structure constants.

    Construction does not validate the axioms; :func:`verify_jj` does.
    """

    bracket: BilinearMap
    labels: tuple = ()

    def __post_init__(self):
        b = self.bracket
        if not (b.left_dim == b.right_dim == b.target_dim):
            raise DimensionMismatch("bracket must be an n x n -> n tensor")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(b.left_dim)))
        elif len(self.labels) != b.left_dim:
            raise DimensionMismatch("one label per basis vector required")

    @classmethod
    def from_entries(cls, field: Field, dim: int, entries: dict, labels: Sequence[str] = ()) -> "JJAlgebra":
        """``entries`` maps basis pairs to their product; the mirror pair is filled in."""
        return cls(BilinearMap.from_entries(field, dim, dim, dim, entries, symmetric=True), tuple(labels))

    @property
    def field(self) -> Field:
        return self.bracket.field

    @property
    def dim(self) -> int:
        return self.bracket.left_dim

    def __call__(self, u: Vector, v: Vector) -> Vector:
        return self.bracket(u, v)

    def unit(self, i: int) -> Vector:
        return self.field.unit(self.dim, i)

    def basis(self) -> list[Vector]:
        return [self.unit(i) for i in range(self.dim)]

    def left_mult(self, i: int, v: Vector) -> Vector:
        """``[e_i, v]``."""
        return self.field.combine(v, self.bracket.tensor[i], self.dim)

    def ad(self, u: Vector) -> LinearMap:
        """Matrix of ``v -> [u, v]``."""
        return LinearMap.from_columns(self.field, [self(u, e) for e in self.basis()], self.dim)

    def is_abelian(self) -> bool:
        return self.bracket.is_zero()

    def change_basis(self, P: LinearMap) -> "JJAlgebra":
        """The same algebra in the basis given by the columns of ``P``.

        ``P`` is then an isomorphism from the returned algebra onto ``self``.
        """
        Pinv = P.inverse()
        cols = P.columns()
        return JJAlgebra(BilinearMap.from_function(
            self.field, self.dim, self.dim, self.dim, lambda i, j: Pinv(self(cols[i], cols[j]))))

    def subalgebra(self, basis: Sequence[Vector]) -> "JJAlgebra":
        """Induced bracket on ``span(basis)``, in the coordinates of ``basis``.

        Raises ``ValueError`` when the span is not closed under the bracket.
        """
        basis = [tuple(b) for b in basis]
        k = len(basis)

        def coords(i, j):
            c = span_coordinates(self.field, basis, self(basis[i], basis[j]))
            if c is None:
                raise ValueError(f"[b{i}, b{j}] leaves the span; not a subalgebra")
            return c

        return JJAlgebra(BilinearMap.from_function(self.field, k, k, k, coords))

    def __str__(self):
        terms = []
        for (i, j), v in sorted(self.bracket.entries().items()):
            if i <= j:
                rhs = " + ".join(f"{c}*{self.labels[k]}" if c != 1 else self.labels[k]
                                 for k, c in enumerate(v) if c)
                terms.append(f"[{self.labels[i]},{self.labels[j]}] = {rhs}")
        body = "; ".join(terms) if terms else "abelian"
        return f"JJ algebra over {self.field}, dim {self.dim}: {body}"


@dataclass(frozen=True)
class CommAssocAlgebra:
    mult: BilinearMap

    @property
    def field(self) -> Field:
        return self.mult.field

    @property
    def dim(self) -> int:
        return self.mult.left_dim

    @classmethod
    def ground(cls, field: Field) -> "CommAssocAlgebra":
        return cls(BilinearMap.from_entries(field, 1, 1, 1, {(0, 0): (1,)}))

    @classmethod
    def truncated_polynomial(cls, field: Field, n: int) -> "CommAssocAlgebra":
        """``k[x]/(x^n)`` with basis ``1, x, ..., x^(n-1)``."""
        entries = {(i, j): field.unit(n, i + j) for i in range(n) for j in range(n) if i + j < n}
        return cls(BilinearMap.from_entries(field, n, n, n, entries))

    def check(self) -> Report:
        m, n = self.mult, self.dim
        basis = [self.field.unit(n, i) for i in range(n)]

        def comm():
            return ((i, j) for i in range(n) for j in range(i + 1, n) if m.basis(i, j) != m.basis(j, i))

        def assoc():
            for i, j, k in itertools.product(range(n), repeat=3):
                if m(m.basis(i, j), basis[k]) != m(basis[i], m.basis(j, k)):
                    yield (i, j, k)

        return run_checks("commutative associative algebra", [("commutative", comm), ("associative", assoc)])


# -- axioms --------------------------------------------------------------


def _jacobi_triples(n: int, commutative: bool):
    if commutative:
        return itertools.combinations_with_replacement(range(n), 3)
    # one representative of every cyclic class of ordered triples
    return ((i, j, k) for i, j, k in itertools.product(range(n), repeat=3) if i <= j and i <= k)


def jacobi_residual(A: JJAlgebra, i: int, j: int, k: int) -> Vector:
    """``[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]``."""
    t = A.bracket.tensor
    F = A.field
    return F.vsum((A.left_mult(i, t[j][k]), A.left_mult(j, t[k][i]), A.left_mult(k, t[i][j])), A.dim)


def verify_jj(A: JJAlgebra, exhaustive: bool = True) -> Report:
    """Commutativity and the Jacobi identity on all basis pairs and triples."""
    n = A.dim
    commutative = A.bracket.symmetric

    def comm():
        return A.bracket.asymmetric_pairs()

    def jacobi():
        return (tr for tr in _jacobi_triples(n, commutative) if any(jacobi_residual(A, *tr)))

    return run_checks("JJ axioms", [("commutative", comm), ("jacobi", jacobi)], exhaustive)


def is_antiderivation(A: JJAlgebra, D: LinearMap, exhaustive: bool = True) -> Report:
    """``D([a,b]) = -[D a, b] - [a, D b]`` on basis pairs."""
    n = A.dim
    if (D.rows, D.cols) != (n, n):
        raise DimensionMismatch("D must be an endomorphism of A")
    F = A.field
    cols = D.columns()
    t = A.bracket.tensor

    def cond():
        for i, j in itertools.combinations_with_replacement(range(n), 2):
            lhs = D(t[i][j])
            # [D e_i, e_j] + [e_i, D e_j] expanded on the structure constants
            rhs = F.vadd(F.combine(cols[i], [t[k][j] for k in range(n)], n), F.combine(cols[j], t[i], n))
            if any(F.vadd(lhs, rhs)):
                yield (i, j)

    return run_checks("antiderivation", [("antiderivation", cond)], exhaustive)


def is_left_module(A: JJAlgebra, act: BilinearMap, exhaustive: bool = True) -> Report:
    """``[a,b] > x = -a > (b > x) - b > (a > x)`` for ``act: A x M -> M``."""
    n, m = A.dim, act.right_dim
    if act.left_dim != n or act.target_dim != m:
        raise DimensionMismatch("left action must have shape A x M -> M")
    F = A.field
    t = act.tensor

    def left(i, v):
        return F.combine(v, t[i], m)

    def cond():
        for i, j in itertools.combinations_with_replacement(range(n), 2):
            ab = A.bracket.tensor[i][j]
            for x in range(m):
                lhs = act(ab, F.unit(m, x))
                rhs = F.vadd(left(i, t[j][x]), left(j, t[i][x]))
                if any(F.vadd(lhs, rhs)):
                    yield (i, j, x)

    return run_checks("left module", [("left_module", cond)], exhaustive)


def is_right_module(A: JJAlgebra, act: BilinearMap, exhaustive: bool = True) -> Report:
    """``x < [a,b] = -(x < a) < b - (x < b) < a`` for ``act: M x A -> M``."""
    n, m = A.dim, act.left_dim
    if act.right_dim != n or act.target_dim != m:
        raise DimensionMismatch("right action must have shape M x A -> M")
    F = A.field
    t = act.tensor
    units = [F.unit(n, i) for i in range(n)]

    def cond():
        for i, j in itertools.combinations_with_replacement(range(n), 2):
            ab = A.bracket.tensor[i][j]
            for x in range(m):
                lhs = act(F.unit(m, x), ab)
                rhs = F.vadd(act(t[x][i], units[j]), act(t[x][j], units[i]))
                if any(F.vadd(lhs, rhs)):
                    yield (x, i, j)

    return run_checks("right module", [("right_module", cond)], exhaustive)


def adjoint_action(A: JJAlgebra) -> BilinearMap:
    """``a > x = [a, x]`` on A itself."""
    return A.bracket


def dual_action(A: JJAlgebra) -> BilinearMap:
    """``(a > f)(x) = f([a, x])`` on the dual space, in the dual basis."""
    n = A.dim
    t = A.bracket.tensor
    return BilinearMap.from_function(A.field, n, n, n, lambda i, j: tuple(t[i][k][j] for k in range(n)))


def current_algebra(A: JJAlgebra, B: CommAssocAlgebra) -> JJAlgebra:
    """``A (x) B`` with ``[a (x) b, a' (x) b'] = [a, a'] (x) bb'``; basis ``e_i (x) f_j`` at ``i*m + j``."""
    if A.field != B.field:
        raise ValueError(f"field mismatch: {A.field} vs {B.field}")
    n, m = A.dim, B.dim
    F = A.field
    N = n * m

    def prod(I, J):
        (i, j), (k, l) = divmod(I, m), divmod(J, m)
        ab, bb = A.bracket.tensor[i][k], B.mult.tensor[j][l]
        return tuple(F.reduce(ab[r] * bb[s]) for r in range(n) for s in range(m))

    labels = tuple(f"{A.labels[i]}*f{j + 1}" for i in range(n) for j in range(m))
    return JJAlgebra(BilinearMap.from_function(F, N, N, N, prod), labels)


def is_morphism(A: JJAlgebra, B: JJAlgebra, phi: LinearMap, exhaustive: bool = True) -> Report:
    """``phi([a, b]) = [phi a, phi b]`` on basis pairs."""
    if (phi.rows, phi.cols) != (B.dim, A.dim):
        raise DimensionMismatch("phi must map A to B")
    cols = phi.columns()

    def cond():
        for i, j in itertools.combinations_with_replacement(range(A.dim), 2):
            if phi(A.bracket.tensor[i][j]) != B(cols[i], cols[j]):
                yield (i, j)

    return run_checks("morphism", [("morphism", cond)], exhaustive)


def is_ideal(A: JJAlgebra, basis: Sequence[Vector]) -> Report:
    """``[A, W] ⊆ W``; witnesses are ``(basis index of A, index in W)``."""
    F = A.field

    def cond():
        for i in range(A.dim):
            for w, vec in enumerate(basis):
                if not in_span(F, basis, A.left_mult(i, vec)):
                    yield (i, w)

    return run_checks("ideal", [("ideal", cond)])


def is_subalgebra(A: JJAlgebra, basis: Sequence[Vector]) -> Report:
    F = A.field

    def cond():
        for u, w in itertools.combinations_with_replacement(range(len(basis)), 2):
            if not in_span(F, basis, A(basis[u], basis[w])):
                yield (u, w)

    return run_checks("subalgebra", [("subalgebra", cond)])


# -- derived data and invariants ------------------------------------------


def derived_subspace(A: JJAlgebra) -> list[Vector]:
    """Basis of ``[A, A]``."""
    vecs = [v for row in A.bracket.tensor for v in row]
    return span_basis(A.field, vecs, A.dim)


def annihilator(A: JJAlgebra) -> list[Vector]:
    """Basis of ``{z : [a, z] = 0 for all a}``."""
    n = A.dim
    rows = [tuple(A.bracket.tensor[i][j][k] for j in range(n)) for i in range(n) for k in range(n)]
    return nullspace(A.field, rows, n)


def _product_space(A: JJAlgebra, U: Sequence[Vector], W: Sequence[Vector]) -> list[Vector]:
    return span_basis(A.field, [A(u, w) for u in U for w in W], A.dim)


def structural_invariants(A: JJAlgebra) -> tuple:
    """Isomorphism invariants; equal for isomorphic algebras over a finite field.

    Subspace dimensions plus a histogram of per-vector profiles.
    """
    F, n = A.field, A.dim
    basis = A.basis()
    A2 = derived_subspace(A)
    A3 = _product_space(A, basis, A2)
    A22 = _product_space(A, A2, A2)
    Z = annihilator(A)
    dims = (n, len(A2), len(A3), len(A22), len(Z), rank_of(F, A2 + Z, n) if A2 or Z else 0)
    if not F.is_finite:
        return dims
    check_budget("vector profiles", F.modulus ** n, None)
    hist: dict = {}
    for v in itertools.product(range(F.modulus), repeat=n):
        key = vector_profile(A, v, Z, A2)
        hist[key] = hist.get(key, 0) + 1
    return dims + (tuple(sorted(hist.items())),)


def vector_profile(A: JJAlgebra, v: Vector, Z: Sequence[Vector], A2: Sequence[Vector]) -> tuple:
    """Data about a single vector that any isomorphism preserves."""
    F = A.field
    ad = A.ad(v)
    vv = A(v, v)
    return (
        not any(v),
        ad.rank(),
        (ad @ ad).rank(),
        not any(vv),
        in_span(F, [v], vv),
        in_span(F, Z, vv),
        in_span(F, Z, v),
        in_span(F, A2, v),
        not any(A(v, vv)),
    )


def is_isomorphic(A: JJAlgebra, B: JJAlgebra, budget: int | None = None, max_dim: int = 3) -> LinearMap | None:
    """An isomorphism ``A -> B`` if one exists, found by exhaustive search.

    Only for finite fields.  Invariants are compared first; the search then
    runs over images of the basis restricted to vectors with matching
    profiles.
    """
    from .brute import find_isomorphism

    if A.field != B.field:
        raise ValueError("algebras over different fields")
    if not A.field.is_finite:
        raise ValueError("isomorphism search needs a finite field")
    if A.dim != B.dim:
        return None
    if A.dim > max_dim:
        raise ValueError(f"dimension {A.dim} above the search cap {max_dim}")
    if A.bracket == B.bracket:
        return LinearMap.identity(A.field, A.dim)
    if structural_invariants(A) != structural_invariants(B):
        return None
    return find_isomorphism(A, B, budget)


# -- stock algebras -------------------------------------------------------


def abelian(field: Field, n: int) -> JJAlgebra:
    return JJAlgebra(BilinearMap.zero(field, n, n, n))


def heisenberg3(field: Field) -> JJAlgebra:
    """``[e1, e2] = [e2, e1] = e3``."""
    return JJAlgebra.from_entries(field, 3, {(0, 1): (0, 0, 1)})


def nilpotent_plane(field: Field) -> JJAlgebra:
    """Two-dimensional algebra with ``[e1, e1] = e2``."""
    return JJAlgebra.from_entries(field, 2, {(0, 0): (0, 1)})


def zero_algebra(field: Field) -> JJAlgebra:
    return abelian(field, 0)
