"""Galois groups of bicrossed products and reconstruction from invariants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import JJAlgebra, is_morphism
from .errors import ConditionFailed, DimensionMismatch
from .extend import canonical_datum, check_morphism_pair, psi_map, unified_product
from .linalg import (LinearMap, Vector, check_budget, enumerate_invertible, enumerate_maps,
                     gl_order, in_span, nullspace, span_basis, span_coordinates)
from .products import (MatchedPair, SkewCrossedSystem, check_matched_pair, check_skew_crossed,
                       skew_crossed_product)
from .report import Report


@dataclass(frozen=True)
class GaloisPair:
    sigma: LinearMap        # V -> V, invertible
    r: LinearMap            # V -> A

    def key(self) -> tuple:
        return self.sigma.flat() + self.r.flat()


def compose(p: GaloisPair, q: GaloisPair) -> GaloisPair:
    """``(s, r) . (s', r') = (s s', r s' + r')``."""
    return GaloisPair(p.sigma @ q.sigma, (p.r @ q.sigma) + q.r)


def check_galois_pair(mp: MatchedPair, pair: GaloisPair, exhaustive: bool = True) -> Report:
    """G1 to G4: the morphism-pair conditions of the bicrossed product against itself."""
    n, m = mp.A.dim, mp.V.dim
    if (pair.sigma.rows, pair.sigma.cols) != (m, m) or (pair.r.rows, pair.r.cols) != (n, m):
        raise DimensionMismatch("sigma must map V -> V and r must map V -> A")
    if not pair.sigma.is_invertible():
        raise ValueError("sigma is singular")
    d = mp.datum()
    rep = check_morphism_pair(d, d, pair.r, pair.sigma, exhaustive)
    out = Report("Galois pair", notes=rep.notes)
    out.conditions = {"G" + k[1:]: w for k, w in rep.conditions.items()}
    out.skipped = ["G" + k[1:] for k in rep.skipped]
    return out


def omega(mp: MatchedPair, pair: GaloisPair) -> LinearMap:
    """``(a, x) -> (a + r(x), sigma(x))`` on the bicrossed product."""
    return psi_map(mp.A.dim, mp.V.dim, pair.r, pair.sigma)


@dataclass
class GaloisGroup:
    matched_pair: MatchedPair
    elements: list[GaloisPair]
    table: list[list[int]]
    identity: int
    validation: Report = field(default_factory=lambda: Report("Galois group"))

    @property
    def order(self) -> int:
        return len(self.elements)


def _table_axioms(table: list[list[int]], identity: int) -> dict[str, list]:
    N = len(table)
    out = {
        "identity": [(i,) for i in range(N) if table[identity][i] != i or table[i][identity] != i],
        "inverses": [(i,) for i in range(N) if identity not in table[i] or
                     table[table[i].index(identity)][i] != identity],
        "associative": [],
    }
    for i, j, k in itertools.product(range(N), repeat=3):
        if table[table[i][j]][k] != table[i][table[j][k]]:
            out["associative"].append((i, j, k))
            if len(out["associative"]) >= 10:
                break
    return out


def enumerate_galois_group(mp: MatchedPair, budget: int | None = None) -> GaloisGroup:
    """All pairs satisfying G1 to G4, with the composition table and its checks.

    The validation report covers closure, the group axioms, that each
    ``omega(pair)`` is an automorphism of the bicrossed product fixing A
    pointwise, and that ``omega`` turns the pair law into composition.
    """
    F = mp.field
    if not F.is_finite:
        raise ValueError("Galois group enumeration needs a finite field")
    rep = check_matched_pair(mp)
    if not rep.ok:
        raise ConditionFailed("not a matched pair", rep)
    n, m = mp.A.dim, mp.V.dim
    check_budget("Galois candidates", gl_order(F.modulus, m) * F.modulus ** (n * m), budget)
    rs = list(enumerate_maps(F, n, m))
    elements = [GaloisPair(s, r) for s in enumerate_invertible(F, m) for r in rs
                if check_galois_pair(mp, GaloisPair(s, r), exhaustive=False).ok]
    index = {p.key(): i for i, p in enumerate(elements)}
    validation = Report("Galois group")
    closure, table = [], []
    for i, p in enumerate(elements):
        row = []
        for j, q in enumerate(elements):
            k = index.get(compose(p, q).key())
            if k is None:
                closure.append((i, j))
                k = -1
            row.append(k)
        table.append(row)
    validation.conditions["closure"] = closure
    ident = GaloisPair(LinearMap.identity(F, m), LinearMap.zero(F, n, m))
    identity = index.get(ident.key(), -1)
    validation.conditions["has_identity"] = [] if identity >= 0 else [("identity",)]
    if not closure and identity >= 0:
        validation.conditions.update(_table_axioms(table, identity))

    E = unified_product(mp.datum())
    omegas = [omega(mp, p) for p in elements]
    validation.conditions["automorphism"] = [
        (i,) for i, W in enumerate(omegas) if not (W.is_invertible() and is_morphism(E, E, W, False).ok)]
    validation.conditions["fixes_A"] = [
        (i,) for i, W in enumerate(omegas) if any(W.column(a) != F.unit(n + m, a) for a in range(n))]
    validation.conditions["homomorphism"] = [
        (i, j) for i, j in itertools.product(range(len(elements)), repeat=2)
        if table[i][j] >= 0 and omegas[i] @ omegas[j] != omegas[table[i][j]]]
    return GaloisGroup(mp, elements, table, identity, validation)


# -- group actions and the trace map --------------------------------------------


@dataclass
class GroupAction:
    """A finite group acting on ``A`` by the given automorphism matrices."""

    A: JJAlgebra
    elements: list[LinearMap]
    table: list[list[int]]
    identity: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def generate(cls, A: JJAlgebra, generators: Sequence[LinearMap], limit: int = 10**4) -> "GroupAction":
        """Close ``generators`` under composition."""
        F, n = A.field, A.dim
        I = LinearMap.identity(F, n)
        elements = [I]
        seen = {I.flat(): 0}
        frontier = [I]
        while frontier:
            nxt = []
            for g in frontier:
                for h in generators:
                    gh = g @ h
                    if gh.flat() not in seen:
                        if len(elements) >= limit:
                            raise ValueError("generated group exceeds the element limit")
                        seen[gh.flat()] = len(elements)
                        elements.append(gh)
                        nxt.append(gh)
            frontier = nxt
        table = [[seen.get((g @ h).flat(), -1) for h in elements] for g in elements]
        return cls(A, elements, table, 0)

    def validate(self) -> Report:
        F = self.A.field
        rep = Report("group action")
        rep.conditions["automorphism"] = [
            (i,) for i, g in enumerate(self.elements)
            if not (g.is_invertible() and is_morphism(self.A, self.A, g, False).ok)]
        index = {g.flat(): i for i, g in enumerate(self.elements)}
        rep.conditions["table"] = [
            (i, j) for i, j in itertools.product(range(self.order), repeat=2)
            if index.get((self.elements[i] @ self.elements[j]).flat()) != self.table[i][j]]
        ident = LinearMap.identity(F, self.A.dim)
        rep.conditions["identity"] = [] if self.elements[self.identity] == ident else [(self.identity,)]
        rep.conditions["order_invertible"] = [] if F.reduce(self.order) != 0 else [(self.order,)]
        return rep

    def generator(self) -> int | None:
        """Index of an element generating the whole group, if the group is cyclic."""
        for i, g in enumerate(self.elements):
            k, power = 1, i
            while power != self.identity and k <= self.order:
                power = self.table[power][i]
                k += 1
            if k == self.order:
                return i
        return None


@dataclass(frozen=True)
class TraceData:
    invariant_basis: list[Vector]     # basis of A^G in A-coordinates
    trace: LinearMap                  # t as an endomorphism of A
    retraction: LinearMap             # t: A -> A^G in invariant_basis coordinates
    kernel_basis: list[Vector]        # basis of V = ker t
    checks: Report


def invariants_and_trace(action: GroupAction) -> TraceData:
    rep = action.validate()
    if not rep.ok:
        raise ConditionFailed("invalid group action", rep)
    A, F = action.A, action.A.field
    n = A.dim
    I = LinearMap.identity(F, n)
    rows = [row for g in action.elements for row in (g - I).entries]
    inv = nullspace(F, rows, n)
    total = action.elements[0]
    for g in action.elements[1:]:
        total = total + g
    t = total.scale(F.inv(F(action.order)))
    ker = t.kernel()
    # coordinates of t(x) in the invariant basis
    cols = [span_coordinates(F, inv, t.column(x)) for x in range(n)]
    p = LinearMap.from_columns(F, [c if c is not None else F.zeros(len(inv)) for c in cols], len(inv))
    checks = Report("trace map")
    checks.conditions["lands_in_invariants"] = [(x,) for x, c in enumerate(cols) if c is None]
    checks.conditions["retraction"] = [(i,) for i, a in enumerate(inv) if t(a) != a]
    checks.conditions["bimodule"] = [
        (x, i) for x in range(n) for i, a in enumerate(inv)
        if t(A(A.unit(x), a)) != A(t.column(x), a)]
    return TraceData(inv, t, p, ker, checks)


def hilbert_kernel_check(action: GroupAction) -> Report:
    """For cyclic ``G = <g>``, ``ker t = {a - g.a}`` by double inclusion."""
    gen = action.generator()
    if gen is None:
        raise ValueError("group is not cyclic")
    td = invariants_and_trace(action)
    F, n = action.A.field, action.A.dim
    image = (LinearMap.identity(F, n) - action.elements[gen]).columns()
    image_basis = span_basis(F, image, n)
    rep = Report("Hilbert kernel")
    rep.conditions["image_in_kernel"] = [(j,) for j, v in enumerate(image) if any(td.trace(v))]
    rep.conditions["kernel_in_image"] = [(j,) for j, v in enumerate(td.kernel_basis)
                                         if not in_span(F, image_basis, v)]
    return rep


@dataclass(frozen=True)
class ArtinResult:
    trace: TraceData
    system: SkewCrossedSystem
    theta: LinearMap       # A^G x V -> A, (a, x) -> a + x
    checks: Report


def artin_reconstruct(action: GroupAction) -> ArtinResult:
    """Skew crossed system of ``A^G`` through ``ker t`` and the isomorphism onto A."""
    td = invariants_and_trace(action)
    if not td.checks.ok:
        raise ConditionFailed("trace map failed its checks", td.checks)
    A = action.A
    cd = canonical_datum(A, td.invariant_basis, td.retraction, td.kernel_basis)
    d = cd.datum
    checks = Report("Artin reconstruction")
    checks.conditions["trivial_right_action"] = [tuple(k) for k in d.right_act.entries()]
    system = SkewCrossedSystem(d.A, d.vdim, d.left_act, d.cocycle, d.brace)
    sc = check_skew_crossed(system)
    checks.extend(sc)
    if checks.ok:
        P = skew_crossed_product(system)
        checks.conditions["theta_invertible"] = [] if cd.phi.is_invertible() else [("theta",)]
        checks.extend(is_morphism(P, A, cd.phi), prefix="theta_")
    return ArtinResult(td, system, cd.phi, checks)
