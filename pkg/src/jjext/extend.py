"""Extending data, unified products and their equivalence.

An extending datum of ``A`` through a space ``V`` consists of four bilinear
maps::

    left_act   x < a   : V x A -> V
    right_act  x > a   : V x A -> A
    cocycle    f(x, y) : V x V -> A
    brace      {x, y}  : V x V -> V

and the unified product is ``A x V`` with

    [(a, x), (b, y)] = ([a, b] + x > b + y > a + f(x, y), {x, y} + x < b + y < a).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebra import JJAlgebra, is_right_module, is_subalgebra
from .errors import ConditionFailed, DimensionMismatch
from .linalg import (BilinearMap, LinearMap, Vector, check_budget, complete_basis,
                     enumerate_invertible, enumerate_maps, gl_order, nullspace,
                     rank_of, span_coordinates)
from .report import Report, run_checks


@dataclass(frozen=True)
class ExtendingDatum:
    A: JJAlgebra
    vdim: int
    left_act: BilinearMap
    right_act: BilinearMap
    cocycle: BilinearMap
    brace: BilinearMap

    def __post_init__(self):
        n, m = self.A.dim, self.vdim
        shapes = {
            "left_act": (self.left_act, (m, n, m)),
            "right_act": (self.right_act, (m, n, n)),
            "cocycle": (self.cocycle, (m, m, n)),
            "brace": (self.brace, (m, m, m)),
        }
        for name, (bm, shape) in shapes.items():
            if (bm.left_dim, bm.right_dim, bm.target_dim) != shape:
                raise DimensionMismatch(f"{name} has shape {bm.left_dim}x{bm.right_dim}->{bm.target_dim}, "
                                        f"expected {shape[0]}x{shape[1]}->{shape[2]}")
            if bm.field != self.A.field:
                raise DimensionMismatch(f"{name} is over {bm.field}, A over {self.A.field}")

    @classmethod
    def build(cls, A: JJAlgebra, vdim: int, left_act=None, right_act=None, cocycle=None,
              brace=None) -> "ExtendingDatum":
        """Missing maps default to zero."""
        F, n, m = A.field, A.dim, vdim
        return cls(
            A, m,
            left_act or BilinearMap.zero(F, m, n, m),
            right_act or BilinearMap.zero(F, m, n, n),
            cocycle or BilinearMap.zero(F, m, m, n),
            brace or BilinearMap.zero(F, m, m, m),
        )

    @property
    def field(self):
        return self.A.field


def check_extending(datum: ExtendingDatum, exhaustive: bool = True) -> Report:
    """Evaluate the seven compatibilities that make the unified product JJ.

    Witnesses: E1 ``(map, x, y)``; E2 ``(x, a, b)``; E3 ``(x, a, b)``;
    E4/E5 ``(x, y, a)``; E6/E7 ``(x, y, z)``.
    """
    A, F = datum.A, datum.field
    n, m = A.dim, datum.vdim
    tl, tr, f, br = datum.left_act, datum.right_act, datum.cocycle, datum.brace
    ea = [F.unit(n, i) for i in range(n)]
    ex = [F.unit(m, i) for i in range(m)]
    add = F.vadd

    def e1():
        yield from (("cocycle", i, j) for i, j in f.asymmetric_pairs())
        yield from (("brace", i, j) for i, j in br.asymmetric_pairs())

    def e2():
        return is_right_module(A, tl).conditions["right_module"]

    def e3():
        for x in range(m):
            for i, j in itertools.combinations_with_replacement(range(n), 2):
                lhs = tr(ex[x], A.bracket.tensor[i][j])
                rhs = F.vsum((A(tr.tensor[x][i], ea[j]), A(ea[i], tr.tensor[x][j]),
                              tr(tl.tensor[x][i], ea[j]), tr(tl.tensor[x][j], ea[i])), n)
                if any(add(lhs, rhs)):
                    yield (x, i, j)

    def e4():
        for x, y in itertools.product(range(m), repeat=2):
            for a in range(n):
                lhs = tl(br.tensor[x][y], ea[a])
                rhs = F.vsum((br(ex[x], tl.tensor[y][a]), br(tl.tensor[x][a], ex[y]),
                              tl(ex[x], tr.tensor[y][a]), tl(ex[y], tr.tensor[x][a])), m)
                if any(add(lhs, rhs)):
                    yield (x, y, a)

    def e5():
        for x, y in itertools.product(range(m), repeat=2):
            for a in range(n):
                lhs = tr(br.tensor[x][y], ea[a])
                rhs = F.vsum((tr(ex[x], tr.tensor[y][a]), tr(ex[y], tr.tensor[x][a]),
                              A(ea[a], f.tensor[x][y]), f(ex[x], tl.tensor[y][a]),
                              f(tl.tensor[x][a], ex[y])), n)
                if any(add(lhs, rhs)):
                    yield (x, y, a)

    def e6():
        for x, y, z in itertools.product(range(m), repeat=3):
            terms = []
            for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
                terms.append(f(ex[p], br.tensor[q][r]))
                terms.append(tr(ex[p], f.tensor[q][r]))
            if any(F.vsum(terms, n)):
                yield (x, y, z)

    def e7():
        for x, y, z in itertools.product(range(m), repeat=3):
            terms = []
            for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
                terms.append(br(ex[p], br.tensor[q][r]))
                terms.append(tl(ex[p], f.tensor[q][r]))
            if any(F.vsum(terms, m)):
                yield (x, y, z)

    checks = [("E1", e1), ("E2", e2), ("E3", e3), ("E4", e4), ("E5", e5), ("E6", e6), ("E7", e7)]
    return run_checks("extending structure", checks, exhaustive)


def unified_product(datum: ExtendingDatum, labels: Sequence[str] = ()) -> JJAlgebra:
    """The algebra on ``A x V``; A-coordinates first, V-coordinates second.

    Raw data are accepted: the result is JJ exactly when
    :func:`check_extending` passes.
    """
    A = datum.A
    n, m = A.dim, datum.vdim
    tl, tr, f, br = datum.left_act, datum.right_act, datum.cocycle, datum.brace
    zm = datum.field.zeros(m)

    def prod(I, J):
        if I < n and J < n:
            return A.bracket.tensor[I][J] + zm
        if I < n:
            y = J - n
            return tr.tensor[y][I] + tl.tensor[y][I]
        if J < n:
            x = I - n
            return tr.tensor[x][J] + tl.tensor[x][J]
        x, y = I - n, J - n
        return f.tensor[x][y] + br.tensor[x][y]

    N = n + m
    if not labels:
        vlabels = ("x",) if m == 1 else tuple(f"x{i + 1}" for i in range(m))
        labels = tuple(A.labels) + vlabels
    return JJAlgebra(BilinearMap.from_function(datum.field, N, N, N, prod), tuple(labels))


# -- canonical datum from a retraction --------------------------------------


def coordinate_projection(E: JJAlgebra, A_basis: Sequence[Vector], complement: Sequence[Vector] | None = None) -> LinearMap:
    """Projection ``E -> A`` (in ``A_basis`` coordinates) along ``complement``.

    Without a complement the standard basis vectors that extend ``A_basis``
    are used.
    """
    F, n = E.field, E.dim
    A_basis = [tuple(F(x) for x in b) for b in A_basis]
    if complement is None:
        complement = complete_basis(F, A_basis, n)
    complement = [tuple(F(x) for x in c) for c in complement]
    P = LinearMap.from_columns(F, A_basis + complement, n)
    if not P.is_invertible():
        raise ConditionFailed("A_basis and complement do not form a basis of E")
    Pinv = P.inverse()
    k = len(A_basis)
    return LinearMap(F, k, n, Pinv.entries[:k])


@dataclass(frozen=True)
class CanonicalDatum:
    datum: ExtendingDatum
    phi: LinearMap          # (a, x) -> a + x, from the unified product onto E
    A_basis: tuple
    V_basis: tuple


def canonical_datum(E: JJAlgebra, A_basis: Sequence[Vector], p: LinearMap | None = None,
                    V_basis: Sequence[Vector] | None = None) -> CanonicalDatum:
    """The extending datum of the subalgebra ``span(A_basis)`` through ``V = ker p``.

    ``p: E -> A`` must restrict to the identity on ``A``.  ``V_basis`` fixes
    the basis of ``ker p`` (default: the reduced kernel basis).
    """
    F, N = E.field, E.dim
    A_basis = [tuple(F(x) for x in b) for b in A_basis]
    k = len(A_basis)
    if rank_of(F, A_basis, N) != k:
        raise ConditionFailed("A_basis is linearly dependent")
    sub = is_subalgebra(E, A_basis)
    if not sub.ok:
        raise ConditionFailed("span(A_basis) is not a subalgebra of E", sub)
    if p is None:
        p = coordinate_projection(E, A_basis, V_basis)
    if (p.rows, p.cols) != (k, N):
        raise DimensionMismatch(f"p must be a {k}x{N} map")
    retraction = Report("retraction")
    retraction.conditions["retraction"] = [(i,) for i, b in enumerate(A_basis) if p(b) != F.unit(k, i)]
    if not retraction.ok:
        raise ConditionFailed("p does not restrict to the identity on A", retraction)
    if V_basis is None:
        V_basis = nullspace(F, p.entries, N)
    else:
        V_basis = [tuple(F(x) for x in v) for v in V_basis]
        if len(V_basis) != N - k or rank_of(F, V_basis, N) != N - k or any(any(p(v)) for v in V_basis):
            raise ConditionFailed("V_basis is not a basis of ker p")
    m = len(V_basis)
    A = E.subalgebra(A_basis)

    def embed(a):
        return F.combine(a, A_basis, N)

    def split(w):
        """``(p(w), V-coordinates of w - p(w))``."""
        pa = p(w)
        c = span_coordinates(F, V_basis, F.vsub(w, embed(pa)))
        return pa, c

    prod_xa = [[split(E(V_basis[x], A_basis[a])) for a in range(k)] for x in range(m)]
    prod_xy = [[split(E(V_basis[x], V_basis[y])) for y in range(m)] for x in range(m)]
    datum = ExtendingDatum(
        A, m,
        BilinearMap.from_function(F, m, k, m, lambda x, a: prod_xa[x][a][1]),
        BilinearMap.from_function(F, m, k, k, lambda x, a: prod_xa[x][a][0]),
        BilinearMap.from_function(F, m, m, k, lambda x, y: prod_xy[x][y][0]),
        BilinearMap.from_function(F, m, m, m, lambda x, y: prod_xy[x][y][1]),
    )
    phi = LinearMap.from_columns(F, A_basis + list(V_basis), N)
    return CanonicalDatum(datum, phi, tuple(A_basis), tuple(V_basis))


# -- morphisms and equivalence ---------------------------------------------


def psi_map(n: int, m: int, r: LinearMap, v: LinearMap) -> LinearMap:
    """Block matrix of ``(a, x) -> (a + r(x), v(x))``."""
    F = r.field
    rows = [tuple(F.unit(n, i)) + r.entries[i] for i in range(n)]
    rows += [F.zeros(n) + v.entries[j] for j in range(m)]
    return LinearMap(F, n + m, n + m, tuple(rows))


def check_morphism_pair(omega: ExtendingDatum, omega2: ExtendingDatum, r: LinearMap, v: LinearMap,
                        exhaustive: bool = True) -> Report:
    """Whether ``(a, x) -> (a + r(x), v(x))`` is a morphism between the two unified products."""
    if omega.A != omega2.A or omega.vdim != omega2.vdim:
        raise DimensionMismatch("data over different algebras or spaces")
    A, F = omega.A, omega.field
    n, m = A.dim, omega.vdim
    if (r.rows, r.cols) != (n, m) or (v.rows, v.cols) != (m, m):
        raise DimensionMismatch("r must map V -> A and v must map V -> V")
    tl, tr, f, br = omega.left_act, omega.right_act, omega.cocycle, omega.brace
    tl2, tr2, f2, br2 = omega2.left_act, omega2.right_act, omega2.cocycle, omega2.brace
    ea = [F.unit(n, i) for i in range(n)]
    vx = v.columns()
    rx = r.columns()

    def m1():
        for x in range(m):
            for a in range(n):
                if tl2(vx[x], ea[a]) != v(tl.tensor[x][a]):
                    yield (x, a)

    def m2():
        for x in range(m):
            for a in range(n):
                rhs = F.vsub(F.vadd(r(tl.tensor[x][a]), tr.tensor[x][a]), A(ea[a], rx[x]))
                if tr2(vx[x], ea[a]) != rhs:
                    yield (x, a)

    def m3():
        for x, y in itertools.product(range(m), repeat=2):
            rhs = F.vsum((br2(vx[x], vx[y]), tl2(vx[x], rx[y]), tl2(vx[y], rx[x])), m)
            if v(br.tensor[x][y]) != rhs:
                yield (x, y)

    def m4():
        for x, y in itertools.product(range(m), repeat=2):
            rhs = F.vsub(F.vsum((A(rx[x], rx[y]), tr2(vx[x], rx[y]), tr2(vx[y], rx[x]),
                                 f2(vx[x], vx[y])), n), f.tensor[x][y])
            if r(br.tensor[x][y]) != rhs:
                yield (x, y)

    return run_checks("morphism pair", [("M1", m1), ("M2", m2), ("M3", m3), ("M4", m4)], exhaustive)


def transport_datum(omega: ExtendingDatum, r: LinearMap, v: LinearMap) -> ExtendingDatum:
    """The datum ``omega'`` for which ``(a, x) -> (a + r(x), v(x))`` is an
    isomorphism from the product of ``omega`` onto the product of ``omega'``.
    """
    A, F = omega.A, omega.field
    n, m = A.dim, omega.vdim
    if (r.rows, r.cols) != (n, m) or (v.rows, v.cols) != (m, m):
        raise DimensionMismatch("r must map V -> A and v must map V -> V")
    if not v.is_invertible():
        raise ConditionFailed("v is singular")
    vinv = v.inverse()
    tl, tr, f, br = omega.left_act, omega.right_act, omega.cocycle, omega.brace
    xs = vinv.columns()          # v^{-1}(x) for each basis vector x
    rs = [r(x) for x in xs]      # r(v^{-1}(x))
    ea = [F.unit(n, i) for i in range(n)]

    def new_tl(x, a):
        return v(tl(xs[x], ea[a]))

    def new_tr(x, a):
        xa = tl(xs[x], ea[a])
        return F.vsub(F.vadd(r(xa), tr(xs[x], ea[a])), A(ea[a], rs[x]))

    def new_f(x, y):
        plus = F.vsum((f(xs[x], xs[y]), r(br(xs[x], xs[y])), A(rs[x], rs[y])), n)
        minus = F.vsum((r(tl(xs[x], rs[y])), tr(xs[x], rs[y]), r(tl(xs[y], rs[x])), tr(xs[y], rs[x])), n)
        return F.vsub(plus, minus)

    def new_br(x, y):
        w = F.vsub(F.vsub(br(xs[x], xs[y]), tl(xs[x], rs[y])), tl(xs[y], rs[x]))
        return v(w)

    return ExtendingDatum(
        A, m,
        BilinearMap.from_function(F, m, n, m, new_tl),
        BilinearMap.from_function(F, m, n, n, new_tr),
        BilinearMap.from_function(F, m, m, n, new_f),
        BilinearMap.from_function(F, m, m, m, new_br),
    )


def compose_pairs(first: tuple[LinearMap, LinearMap], second: tuple[LinearMap, LinearMap]):
    """Pair of ``psi(first) o psi(second)``: ``(r1 o v2 + r2, v1 o v2)``."""
    (r1, v1), (r2, v2) = first, second
    return (r1 @ v2) + r2, v1 @ v2


def inverse_pair(pair: tuple[LinearMap, LinearMap]):
    r, v = pair
    vinv = v.inverse()
    return (r @ vinv).scale(-1), vinv


def are_equivalent(omega: ExtendingDatum, omega2: ExtendingDatum, budget: int | None = None):
    """A pair ``(r, v)`` with ``transport_datum(omega2, r, v) == omega``, or ``None``.

    Exhaustive over ``Hom(V, A) x GL(V)``; ``v`` is the outer loop.
    """
    if omega.A != omega2.A or omega.vdim != omega2.vdim:
        raise DimensionMismatch("data over different algebras or spaces")
    F = omega.field
    if not F.is_finite:
        raise ValueError("equivalence search needs a finite field")
    n, m = omega.A.dim, omega.vdim
    check_budget("equivalence candidates", gl_order(F.modulus, m) * F.modulus ** (n * m), budget)
    rs = list(enumerate_maps(F, n, m))
    for v in enumerate_invertible(F, m):
        for r in rs:
            if transport_datum(omega2, r, v) == omega:
                return r, v
    return None
