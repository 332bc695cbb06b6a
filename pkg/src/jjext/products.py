"""Matched pairs, crossed and skew crossed systems, and their products.

Every product here is the unified product of an induced extending datum,
so there is exactly one implementation of the bracket.
"""

from __future__ import annotations

import functools

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebra import (JJAlgebra, is_antiderivation, is_ideal, is_left_module,
                      is_right_module, is_subalgebra, verify_jj)
from .errors import ConditionFailed, DimensionMismatch
from .extend import (ExtendingDatum, canonical_datum, check_extending, coordinate_projection,
                     unified_product)
from .linalg import (BilinearMap, LinearMap, Vector, check_budget, enumerate_vectors,
                     in_span, rank_of, rref)
from .report import Report, run_checks


def _require(report: Report, what: str) -> None:
    if not report.ok:
        raise ConditionFailed(f"invalid {what}: failing {', '.join(report.failed() or report.skipped)}", report)


def _check_same_field(*algebras: JJAlgebra) -> None:
    if any(A.field != algebras[0].field for A in algebras[1:]):
        raise DimensionMismatch("algebras over different fields")


# -- matched pairs ----------------------------------------------------------


@dataclass(frozen=True)
class MatchedPair:
    """``left_act`` is ``x < a`` (V x A -> V), ``right_act`` is ``x > a`` (V x A -> A)."""

    A: JJAlgebra
    V: JJAlgebra
    left_act: BilinearMap
    right_act: BilinearMap

    @property
    def field(self):
        return self.A.field

    def datum(self) -> ExtendingDatum:
        return ExtendingDatum.build(self.A, self.V.dim, left_act=self.left_act,
                                    right_act=self.right_act, brace=self.V.bracket)

    @classmethod
    def trivial(cls, A: JJAlgebra, V: JJAlgebra) -> "MatchedPair":
        F, n, m = A.field, A.dim, V.dim
        return cls(A, V, BilinearMap.zero(F, m, n, m), BilinearMap.zero(F, m, n, n))


def check_matched_pair(mp: MatchedPair, exhaustive: bool = True) -> Report:
    """V JJ, both module axioms, MP1 and MP2."""
    _check_same_field(mp.A, mp.V)
    datum = mp.datum()
    # MP1 and MP2 are the third and fourth conditions of a JJ extending structure
    ext = check_extending(datum, exhaustive=True)
    checks = [
        ("V_jj", lambda: verify_jj(mp.V).failed()),
        ("right_module", lambda: is_right_module(mp.A, mp.left_act).conditions["right_module"]),
        ("left_module", lambda: is_left_module(mp.V, mp.right_act).conditions["left_module"]),
        ("MP1", lambda: ext.conditions["E3"]),
        ("MP2", lambda: ext.conditions["E4"]),
    ]
    return run_checks("matched pair", checks, exhaustive)


def bicrossed_product(mp: MatchedPair) -> JJAlgebra:
    _require(check_matched_pair(mp), "matched pair")
    return unified_product(mp.datum())


def semidirect_product(V: JJAlgebra, A: JJAlgebra, right_act: BilinearMap) -> JJAlgebra:
    """Bicrossed product with ``x < a = 0``; each ``x > -`` must be an antiderivation."""
    F = A.field
    mp = MatchedPair(A, V, BilinearMap.zero(F, V.dim, A.dim, V.dim), right_act)
    return bicrossed_product(mp)


@dataclass(frozen=True)
class Factorization:
    matched_pair: MatchedPair
    phi: LinearMap          # A x V -> E, (a, x) -> a + x


def factorize(E: JJAlgebra, A_basis: Sequence[Vector], V_basis: Sequence[Vector]) -> Factorization:
    """Write E as a bicrossed product of two complementary subalgebras."""
    F, N = E.field, E.dim
    A_basis = [tuple(F(c) for c in b) for b in A_basis]
    V_basis = [tuple(F(c) for c in b) for b in V_basis]
    if len(A_basis) + len(V_basis) != N or rank_of(F, A_basis + V_basis, N) != N:
        raise ConditionFailed("A_basis and V_basis are not complementary in E")
    for name, basis in (("A", A_basis), ("V", V_basis)):
        rep = is_subalgebra(E, basis)
        if not rep.ok:
            raise ConditionFailed(f"span({name}_basis) is not a subalgebra of E", rep)
    p = coordinate_projection(E, A_basis, V_basis)
    cd = canonical_datum(E, A_basis, p, V_basis)
    d = cd.datum
    if not d.cocycle.is_zero():
        raise ConditionFailed("cocycle does not vanish on complementary subalgebras")
    V = JJAlgebra(d.brace)
    return Factorization(MatchedPair(d.A, V, d.left_act, d.right_act), cd.phi)


# -- crossed systems -----------------------------------------------------------


@dataclass(frozen=True)
class CrossedSystem:
    """``right_act`` is ``x > a`` (V x A -> A), ``cocycle`` is ``f`` (V x V -> A)."""

    A: JJAlgebra
    V: JJAlgebra
    right_act: BilinearMap
    cocycle: BilinearMap

    def datum(self) -> ExtendingDatum:
        return ExtendingDatum.build(self.A, self.V.dim, right_act=self.right_act,
                                    cocycle=self.cocycle, brace=self.V.bracket)


def check_crossed_system(cs: CrossedSystem, exhaustive: bool = True) -> Report:
    """V JJ and CP1 to CP4."""
    _check_same_field(cs.A, cs.V)
    A, F = cs.A, cs.A.field
    n, m = A.dim, cs.V.dim
    tr, f, br = cs.right_act, cs.cocycle, cs.V.bracket

    def cp1():
        return f.asymmetric_pairs()

    def cp2():
        # each x > - must be an antiderivation of A
        t = A.bracket.tensor
        for x in range(m):
            cols = tr.tensor[x]
            for i, j in itertools.combinations_with_replacement(range(n), 2):
                lhs = F.combine(t[i][j], cols, n)
                rhs = F.vadd(F.combine(cols[i], [t[k][j] for k in range(n)], n), F.combine(cols[j], t[i], n))
                if any(F.vadd(lhs, rhs)):
                    yield (x, i, j)

    # both checks work on structure constants: x > a is tr.tensor[x][a], f(x, y) is f.tensor[x][y]
    T, R, C, B = A.bracket.tensor, tr.tensor, f.tensor, br.tensor

    def cp3():
        for x, y in itertools.product(range(m), repeat=2):
            for a in range(n):
                lhs = F.combine(B[x][y], [R[z][a] for z in range(m)], n)
                rhs = F.vsum((F.combine(R[y][a], R[x], n), F.combine(R[x][a], R[y], n),
                              F.combine(C[x][y], T[a], n)), n)
                if any(F.vadd(lhs, rhs)):
                    yield (x, y, a)

    def cp4():
        for x, y, z in itertools.product(range(m), repeat=3):
            terms = []
            for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
                terms.append(F.combine(B[q][r], C[p], n))
                terms.append(F.combine(C[q][r], R[p], n))
            if any(F.vsum(terms, n)):
                yield (x, y, z)

    checks = [("V_jj", lambda: _jj_failures(cs.V)),
              ("CP1", cp1), ("CP2", cp2), ("CP3", cp3), ("CP4", cp4)]
    return run_checks("crossed system", checks, exhaustive)


@functools.lru_cache(maxsize=512)
def _jj_failures(V: JJAlgebra) -> tuple:
    # V is frozen, so its verdict can be reused across the systems sharing it
    return tuple(verify_jj(V).failed())


def crossed_product(cs: CrossedSystem) -> JJAlgebra:
    _require(check_crossed_system(cs), "crossed system")
    return unified_product(cs.datum())


# -- supersolvable data ----------------------------------------------------------


@dataclass(frozen=True)
class SupersolvableDatum:
    A: JJAlgebra
    D: LinearMap
    a0: Vector

    def crossed_system(self) -> CrossedSystem:
        """``x > a = D(a)``, ``f(x, x) = a0``, ``{x, x} = 0``."""
        F, n = self.A.field, self.A.dim
        tr = BilinearMap.from_function(F, 1, n, n, lambda x, a: self.D.column(a))
        f = BilinearMap.from_function(F, 1, 1, n, lambda x, y: tuple(self.a0))
        V = JJAlgebra(BilinearMap.zero(F, 1, 1, 1), ("x",))
        return CrossedSystem(self.A, V, tr, f)


def _reject_char3(F) -> None:
    if F.characteristic == 3:
        raise ValueError("supersolvable data need characteristic different from 3")


def check_supersolvable_datum(A: JJAlgebra, D: LinearMap, a0: Vector, exhaustive: bool = True) -> Report:
    """S1 (split into the antiderivation part and ``3 D(a0) = 0``) and S2."""
    F, n = A.field, A.dim
    _reject_char3(F)
    if (D.rows, D.cols) != (n, n) or len(a0) != n:
        raise DimensionMismatch("D must be an endomorphism of A and a0 a vector of A")
    a0 = tuple(F(c) for c in a0)
    D2 = D @ D

    def s1_anti():
        return is_antiderivation(A, D).conditions["antiderivation"]

    def s1_da0():
        return [] if not any(F.vscale(3, D(a0))) else [("a0",)]

    def s2():
        for a in range(n):
            lhs = F.vscale(2, D2.column(a))
            if any(F.vadd(lhs, A(A.unit(a), a0))):
                yield (a,)

    return run_checks("supersolvable datum", [("S1_antiderivation", s1_anti), ("S1_D_a0", s1_da0), ("S2", s2)],
                      exhaustive)


def supersolvable_extension(A: JJAlgebra, D: LinearMap, a0: Vector) -> JJAlgebra:
    """``A x kx`` with ``[a, x] = D(a)`` and ``[x, x] = a0``."""
    _require(check_supersolvable_datum(A, D, a0), "supersolvable datum")
    return crossed_product(SupersolvableDatum(A, D, tuple(A.field(c) for c in a0)).crossed_system())


def _rref_key(F, vectors, n) -> tuple:
    rows, _ = rref(F, vectors, n)
    return tuple(tuple(r) for r in rows if any(r))


def is_supersolvable(E: JJAlgebra, reading: str = "ideal", budget: int | None = None) -> list[list[Vector]] | None:
    """A chain ``0 = I_0 < I_1 < ... < I_n = E`` with codimension-one steps.

    ``reading="ideal"`` asks every ``I_j`` to be an ideal of E;
    ``reading="successor"`` only asks ``I_j`` to be an ideal of ``I_{j+1}``.
    Returns the chain as bases (``I_0`` omitted) or ``None``.  The search is
    depth first, trying extension vectors in lexicographic order.
    """
    if reading not in ("ideal", "successor"):
        raise ValueError("reading must be 'ideal' or 'successor'")
    F, n = E.field, E.dim
    if not F.is_finite:
        raise ValueError("supersolvability search needs a finite field")
    if not verify_jj(E).ok:
        raise ConditionFailed("E is not a JJ algebra", verify_jj(E))
    check_budget("supersolvable chain search", n * F.modulus ** n, budget)
    vectors = list(enumerate_vectors(F, n))
    dead: set = set()

    def admissible(lower, upper) -> bool:
        if reading == "ideal":
            return is_ideal(E, upper).ok
        sub = E.subalgebra(upper)
        coords = [tuple(1 if i == j else 0 for i in range(len(upper))) for j in range(len(lower))]
        return is_ideal(sub, coords).ok

    def dfs(chain: list[list[Vector]]) -> list[list[Vector]] | None:
        current = chain[-1]
        if len(current) == n:
            return chain
        key = _rref_key(F, current, n) if current else ()
        if key in dead:
            return None
        tried: set = set()
        for v in vectors:
            if in_span(F, current, v):
                continue
            upper = current + [v]
            ukey = _rref_key(F, upper, n)
            if ukey in tried:
                continue
            tried.add(ukey)
            if admissible(current, upper):
                found = dfs(chain + [upper])
                if found:
                    return found
        dead.add(key)
        return None

    chain = dfs([[]])
    return None if chain is None else chain[1:]


# -- skew crossed systems ---------------------------------------------------------


@dataclass(frozen=True)
class SkewCrossedSystem:
    """``left_act`` is ``x < a`` (V x A -> V); ``cocycle`` and ``brace`` as in a datum."""

    A: JJAlgebra
    vdim: int
    left_act: BilinearMap
    cocycle: BilinearMap
    brace: BilinearMap

    def datum(self) -> ExtendingDatum:
        return ExtendingDatum.build(self.A, self.vdim, left_act=self.left_act,
                                    cocycle=self.cocycle, brace=self.brace)


def check_skew_crossed(scs: SkewCrossedSystem, exhaustive: bool = True) -> Report:
    """SC1 to SC6."""
    A, F = scs.A, scs.A.field
    n, m = A.dim, scs.vdim
    tl, f, br = scs.left_act, scs.cocycle, scs.brace
    ea = [F.unit(n, i) for i in range(n)]
    ex = [F.unit(m, i) for i in range(m)]

    def sc1():
        yield from (("cocycle", i, j) for i, j in f.asymmetric_pairs())
        yield from (("brace", i, j) for i, j in br.asymmetric_pairs())

    def sc2():
        return is_right_module(A, tl).conditions["right_module"]

    def sc3():
        for x, y in itertools.product(range(m), repeat=2):
            for a in range(n):
                lhs = tl(br.tensor[x][y], ea[a])
                rhs = F.vadd(br(ex[x], tl.tensor[y][a]), br(tl.tensor[x][a], ex[y]))
                if any(F.vadd(lhs, rhs)):
                    yield (x, y, a)

    def sc4():
        for x, y in itertools.product(range(m), repeat=2):
            for a in range(n):
                s = F.vsum((A(ea[a], f.tensor[x][y]), f(ex[x], tl.tensor[y][a]), f(tl.tensor[x][a], ex[y])), n)
                if any(s):
                    yield (x, y, a)

    def sc5():
        for x, y, z in itertools.product(range(m), repeat=3):
            s = F.vsum((f(ex[p], br.tensor[q][r]) for p, q, r in ((x, y, z), (y, z, x), (z, x, y))), n)
            if any(s):
                yield (x, y, z)

    def sc6():
        for x, y, z in itertools.product(range(m), repeat=3):
            terms = []
            for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
                terms.append(br(ex[p], br.tensor[q][r]))
                terms.append(tl(ex[p], f.tensor[q][r]))
            if any(F.vsum(terms, m)):
                yield (x, y, z)

    checks = [("SC1", sc1), ("SC2", sc2), ("SC3", sc3), ("SC4", sc4), ("SC5", sc5), ("SC6", sc6)]
    return run_checks("skew crossed system", checks, exhaustive)


def skew_crossed_product(scs: SkewCrossedSystem) -> JJAlgebra:
    _require(check_skew_crossed(scs), "skew crossed system")
    return unified_product(scs.datum())
