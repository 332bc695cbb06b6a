"""Codimension-one extensions: flag data, their equivalence and orbit enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (JJAlgebra, abelian, heisenberg3, is_isomorphic, structural_invariants,
                      verify_jj, zero_algebra)
from .errors import ConditionFailed, DimensionMismatch
from .extend import ExtendingDatum, unified_product
from .linalg import (BilinearMap, Field, LinearMap, Vector, check_budget, enumerate_vectors,
                     nullspace, solve_linear)
from .report import Report, run_checks


@dataclass(frozen=True)
class FlagDatum:
    """``(D, lambda, a0, alpha0)``; ``lam`` holds the values of lambda on the basis."""

    A: JJAlgebra
    D: LinearMap
    lam: tuple
    a0: tuple
    alpha0: object

    def __post_init__(self):
        n, F = self.A.dim, self.A.field
        if (self.D.rows, self.D.cols) != (n, n) or len(self.lam) != n or len(self.a0) != n:
            raise DimensionMismatch(f"flag datum shapes do not match dim A = {n}")
        object.__setattr__(self, "lam", tuple(F(c) for c in self.lam))
        object.__setattr__(self, "a0", tuple(F(c) for c in self.a0))
        object.__setattr__(self, "alpha0", F(self.alpha0))

    @classmethod
    def zero(cls, A: JJAlgebra) -> "FlagDatum":
        F, n = A.field, A.dim
        return cls(A, LinearMap.zero(F, n, n), F.zeros(n), F.zeros(n), 0)

    @property
    def field(self) -> Field:
        return self.A.field

    def key(self) -> tuple:
        """Ordering key: D by columns, then lambda, a0, alpha0."""
        return (self.D.flat(), self.lam, self.a0, self.alpha0)

    def lam_of(self, v: Vector):
        return self.field.dot(self.lam, v)


@dataclass(frozen=True)
class FlagWitness:
    r: tuple
    u: object

    def __post_init__(self):
        if self.u == 0:
            raise ValueError("u must be nonzero")


def check_flag_datum(fd: FlagDatum, exhaustive: bool = True) -> Report:
    """F1 to F6 on basis vectors and pairs."""
    A, F = fd.A, fd.field
    n = A.dim
    D, lam, a0, al = fd.D, fd.lam, fd.a0, fd.alpha0
    T = A.bracket.tensor
    Dc = D.columns()
    D2c = (D @ D).columns()
    e = [F.unit(n, i) for i in range(n)]

    def f1():
        for i, j in itertools.combinations_with_replacement(range(n), 2):
            if F.reduce(fd.lam_of(T[i][j]) + 2 * lam[i] * lam[j]) != 0:
                yield (i, j)

    def f2():
        for i, j in itertools.combinations_with_replacement(range(n), 2):
            s = F.vsum((D(T[i][j]), A(Dc[i], e[j]), A(e[i], Dc[j]),
                        F.vscale(lam[i], Dc[j]), F.vscale(lam[j], Dc[i])), n)
            if any(s):
                yield (i, j)

    def f3():
        for a in range(n):
            s = F.vsum((A(e[a], a0), F.vscale(al, Dc[a]), F.vscale(2, D2c[a]), F.vscale(2 * lam[a], a0)), n)
            if any(s):
                yield (a,)

    def f4():
        for a in range(n):
            if F.reduce(3 * lam[a] * al + 2 * fd.lam_of(Dc[a])) != 0:
                yield (a,)

    def f5():
        if any(F.vadd(F.vscale(3, D(a0)), F.vscale(3 * al, a0))):
            yield ("a0",)

    def f6():
        if F.reduce(3 * fd.lam_of(a0) + 3 * al * al) != 0:
            yield ("a0",)

    checks = [("F1", f1), ("F2", f2), ("F3", f3), ("F4", f4), ("F5", f5), ("F6", f6)]
    return run_checks("flag datum", checks, exhaustive)


def flag_to_datum(fd: FlagDatum) -> ExtendingDatum:
    """``x < a = lambda(a) x``, ``x > a = D(a)``, ``f(x, x) = a0``, ``{x, x} = alpha0 x``."""
    F, n = fd.field, fd.A.dim
    return ExtendingDatum(
        fd.A, 1,
        BilinearMap.from_function(F, 1, n, 1, lambda x, a: (fd.lam[a],)),
        BilinearMap.from_function(F, 1, n, n, lambda x, a: fd.D.column(a)),
        BilinearMap.from_function(F, 1, 1, n, lambda x, y: fd.a0),
        BilinearMap.from_function(F, 1, 1, 1, lambda x, y: (fd.alpha0,)),
    )


def datum_to_flag(datum: ExtendingDatum) -> FlagDatum:
    if datum.vdim != 1:
        raise DimensionMismatch("flag data live on a one-dimensional V")
    n = datum.A.dim
    D = LinearMap.from_columns(datum.field, [datum.right_act.tensor[0][a] for a in range(n)], n)
    lam = tuple(datum.left_act.tensor[0][a][0] for a in range(n))
    return FlagDatum(datum.A, D, lam, datum.cocycle.tensor[0][0], datum.brace.tensor[0][0][0])


def flag_extension(fd: FlagDatum, printed_variant: bool = False) -> JJAlgebra:
    """``A x kx`` with ``[e_i, x] = D(e_i) + lambda(e_i) x`` and ``[x, x] = a0 + alpha0 x``.

    ``printed_variant=True`` adds ``a0`` to every ``[e_i, x]``.  That form
    does not come from the unified product and is kept only for comparison.
    """
    E = unified_product(flag_to_datum(fd))
    if not printed_variant:
        return E
    F, n = fd.field, fd.A.dim
    t = [list(row) for row in E.bracket.tensor]
    for i in range(n):
        col = F.vadd(t[i][n], fd.a0 + (F.zero,))
        t[i][n] = t[n][i] = col
    return JJAlgebra(BilinearMap(F, n + 1, n + 1, n + 1, tuple(tuple(r) for r in t)), E.labels)


# -- equivalence ------------------------------------------------------------------


def transport_flag(fd: FlagDatum, r: Sequence, u) -> FlagDatum:
    """The datum equivalent to ``fd`` through ``(r, u)``.

    With ``fd`` in the primed role the result has ``lambda`` unchanged and

        D(a)   = u D'(a) + [a, r] - lambda'(a) r
        alpha0 = u alpha0' + 2 lambda'(r)
        a0     = u^2 a0' + [r, r] + 2u D'(r) - u alpha0' r - 2 lambda'(r) r
    """
    A, F = fd.A, fd.field
    n = A.dim
    r = tuple(F(c) for c in r)
    u = F(u)
    if u == 0:
        raise ValueError("u must be nonzero")
    lr = fd.lam_of(r)
    cols = [F.vsub(F.vadd(F.vscale(u, fd.D.column(a)), A(A.unit(a), r)), F.vscale(fd.lam[a], r))
            for a in range(n)]
    D = LinearMap.from_columns(F, cols, n)
    alpha0 = F.reduce(u * fd.alpha0 + 2 * lr)
    a0 = F.vsum((F.vscale(u * u, fd.a0), A(r, r), F.vscale(2 * u, fd.D(r)),
                 F.vscale(-u * fd.alpha0, r), F.vscale(-2 * lr, r)), n)
    return FlagDatum(A, D, fd.lam, a0, alpha0)


def check_flag_equivalence(fd: FlagDatum, fd2: FlagDatum, w: FlagWitness) -> bool:
    """Whether ``(r, u)`` carries ``fd2`` (primed) to ``fd``."""
    if fd.A != fd2.A:
        raise DimensionMismatch("flag data over different algebras")
    return fd.lam == fd2.lam and transport_flag(fd2, w.r, w.u) == fd


def compose_witnesses(w1: FlagWitness, w2: FlagWitness, field_: Field) -> FlagWitness:
    """Witness of ``transport(transport(fd, w2), w1)``: ``(r1 + u1 r2, u1 u2)``."""
    r = field_.vadd(w1.r, field_.vscale(w1.u, w2.r))
    return FlagWitness(r, field_.reduce(w1.u * w2.u))


def invert_witness(w: FlagWitness, field_: Field) -> FlagWitness:
    uinv = field_.inv(w.u)
    return FlagWitness(field_.vscale(-uinv, w.r), uinv)


def find_flag_witness(fd: FlagDatum, fd2: FlagDatum, budget: int | None = None) -> FlagWitness | None:
    """Exhaustive search for ``(r, u)`` carrying ``fd2`` to ``fd``."""
    F, n = fd.field, fd.A.dim
    if not F.is_finite:
        raise ValueError("witness search needs a finite field")
    if fd.lam != fd2.lam:
        return None
    check_budget("flag witnesses", F.modulus ** n * (F.modulus - 1), budget)
    for u in F.nonzero():
        for r in enumerate_vectors(F, n):
            if transport_flag(fd2, r, u) == fd:
                return FlagWitness(r, u)
    return None


# -- staged enumeration ----------------------------------------------------------


def _f2_system(A: JJAlgebra, lam: Vector) -> list[list]:
    """Rows of F2 as a homogeneous system in ``d[c*n + k]`` (coefficient k of D e_c)."""
    F, n = A.field, A.dim
    T = A.bracket.tensor
    rows = []
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        for k in range(n):
            row = [0] * (n * n)
            for c in range(n):
                row[c * n + k] += T[i][j][c]          # D([e_i, e_j])
                row[i * n + c] += T[c][j][k]          # [D e_i, e_j]
                row[j * n + c] += T[i][c][k]          # [e_i, D e_j]
            row[j * n + k] += lam[i]
            row[i * n + k] += lam[j]
            rows.append([F.reduce(x) for x in row])
    return rows


def _f3_system(A: JJAlgebra, lam: Vector, D: LinearMap, alpha0) -> tuple[list[list], list]:
    """F3 as ``M a0 = rhs``."""
    F, n = A.field, A.dim
    T = A.bracket.tensor
    D2 = D @ D
    rows, rhs = [], []
    for a in range(n):
        target = F.vneg(F.vadd(F.vscale(alpha0, D.column(a)), F.vscale(2, D2.column(a))))
        for k in range(n):
            row = [F.reduce(T[a][c][k] + (2 * lam[a] if c == k else 0)) for c in range(n)]
            rows.append(row)
            rhs.append(target[k])
    return rows, rhs


@dataclass
class EnumerationStats:
    lambda_candidates: int = 0
    lambda_survivors: int = 0
    d_points: int = 0
    f4_survivors: int = 0
    a0_points: int = 0
    data: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def enumerate_flag_data(A: JJAlgebra, budget: int | None = None, stats: EnumerationStats | None = None) -> list[FlagDatum]:
    """All flag data of A over a prime field, sorted by :meth:`FlagDatum.key`.

    lambda is enumerated and filtered by F1; F2 is then a linear system in
    D; for each D and alpha0 the F4 filter runs before F3 is solved for a0;
    F5 and F6 filter the rest.
    """
    F, n = A.field, A.dim
    if not F.is_finite:
        raise ValueError("flag enumeration needs a finite field")
    p = F.modulus
    stats = stats if stats is not None else EnumerationStats()
    check_budget("lambda candidates", p ** n, budget)
    spent = 0
    out = []
    T = A.bracket.tensor
    for lam in enumerate_vectors(F, n):
        stats.lambda_candidates += 1
        if any(F.reduce(F.dot(lam, T[i][j]) + 2 * lam[i] * lam[j]) != 0
               for i, j in itertools.combinations_with_replacement(range(n), 2)):
            continue
        stats.lambda_survivors += 1
        kernel = nullspace(F, _f2_system(A, lam), n * n)
        spent += p ** len(kernel) * p
        check_budget("D points x alpha0", spent, budget)
        for d in enumerate_vectors(F, len(kernel)):
            flat = F.combine(d, kernel, n * n) if kernel else F.zeros(n * n)
            D = LinearMap.from_columns(F, [flat[c * n:(c + 1) * n] for c in range(n)], n)
            stats.d_points += 1
            lamD = [F.dot(lam, D.column(a)) for a in range(n)]
            for alpha0 in F.elements():
                if any(F.reduce(3 * lam[a] * alpha0 + 2 * lamD[a]) != 0 for a in range(n)):
                    continue
                stats.f4_survivors += 1
                sol = solve_linear(F, *_f3_system(A, lam, D, alpha0), ncols=n)
                if sol is None:
                    continue
                spent += sol.size(F)
                check_budget("a0 points", spent, budget)
                for a0 in sol.points(F):
                    stats.a0_points += 1
                    if any(F.vadd(F.vscale(3, D(a0)), F.vscale(3 * alpha0, a0))):
                        continue
                    if F.reduce(3 * F.dot(lam, a0) + 3 * alpha0 * alpha0) != 0:
                        continue
                    out.append(FlagDatum(A, D, lam, a0, alpha0))
    out.sort(key=FlagDatum.key)
    stats.data = len(out)
    return out


# -- orbits -------------------------------------------------------------------------


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # keep the smaller index (the lexicographically smaller datum) as root
            self.parent[max(ri, rj)] = min(ri, rj)


@dataclass
class H2Result:
    field: Field
    A: JJAlgebra
    data: list[FlagDatum]
    representatives: list[FlagDatum]
    orbit_sizes: list[int]
    orbit_of: list[int]                       # data index -> orbit index
    witnesses: dict[int, FlagWitness]         # data index -> witness from its representative
    certificates: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.data)

    @property
    def classes(self) -> int:
        return len(self.representatives)

    def orbit(self, i: int) -> list[FlagDatum]:
        return [d for d, o in zip(self.data, self.orbit_of) if o == i]


def classify_h2_codim1(A: JJAlgebra, budget: int | None = None, data: list[FlagDatum] | None = None,
                       certify: bool = True) -> H2Result:
    """Orbits of the ``(r, u)`` action on the flag data of A.

    Each datum is merged with all of its images; representatives are the
    least members by :meth:`FlagDatum.key`.  With ``certify`` every pair of
    representatives gets an exhausted witness search recorded as a
    certificate of inequivalence.
    """
    F, n = A.field, A.dim
    if not F.is_finite:
        raise ValueError("orbit enumeration needs a finite field")
    p = F.modulus
    stats = EnumerationStats()
    if data is None:
        data = enumerate_flag_data(A, budget, stats)
    else:
        data = sorted(data, key=FlagDatum.key)
    check_budget("orbit step", len(data) * p ** n * (p - 1), budget)
    index = {d.key(): i for i, d in enumerate(data)}
    uf = _UnionFind(len(data))
    problems = []
    images: dict[int, dict[int, FlagWitness]] = {}
    done = set()
    for i, d in enumerate(data):
        root = uf.find(i)
        if root in done:
            continue
        # everything reachable from the least member of a class is found in one sweep
        done.add(root)
        found = {}
        for u in F.nonzero():
            for r in enumerate_vectors(F, n):
                j = index.get(transport_flag(d, r, u).key())
                if j is None:
                    problems.append(("image outside the data", i, tuple(r), u))
                    continue
                uf.union(i, j)
                found.setdefault(j, FlagWitness(tuple(r), u))
        images[i] = found
    roots = sorted({uf.find(i) for i in range(len(data))})
    orbit_index = {r: k for k, r in enumerate(roots)}
    orbit_of = [orbit_index[uf.find(i)] for i in range(len(data))]
    sizes = [orbit_of.count(k) for k in range(len(roots))]
    witnesses = {}
    for j in range(len(data)):
        root = uf.find(j)
        w = images.get(root, {}).get(j)
        if w is None:
            problems.append(("no direct witness from representative", j))
        else:
            witnesses[j] = w
    reps = [data[r] for r in roots]
    certs = []
    if certify:
        for a, b in itertools.combinations(range(len(reps)), 2):
            w = find_flag_witness(reps[a], reps[b], budget)
            certs.append({"pair": (a, b), "candidates": p ** n * (p - 1), "equivalent": w is not None})
            if w is not None:
                problems.append(("representatives equivalent", a, b))
    return H2Result(F, A, data, reps, sizes, orbit_of, witnesses, certs, stats.as_dict(), problems)


# -- worked examples -----------------------------------------------------------------


def _require_char(F: Field, bad=(2, 3)) -> None:
    if F.characteristic in bad:
        raise ValueError(f"characteristic {F.characteristic} is excluded here")


def heisenberg_oracle(field_: Field, triple: Sequence) -> FlagDatum:
    """The datum assigned to ``(alpha, beta, gamma)`` with ``alpha gamma = 0`` in the worked example.

    ``lambda = 0``, ``alpha0 = 0``, ``a0 = alpha e2``, ``D e1 = beta e3``,
    ``D e2 = gamma e3``, ``D e3 = 0``.  When ``alpha != 0`` the emitted datum
    does not satisfy F3 (``[e1, a0] = alpha e3`` is left over); it is
    returned as stated so that callers can see the failure.
    """
    _require_char(field_)
    alpha, beta, gamma = (field_(c) for c in triple)
    if field_.reduce(alpha * gamma) != 0:
        raise ValueError("alpha * gamma must vanish")
    H = heisenberg3(field_)
    D = LinearMap.from_columns(field_, [(0, 0, beta), (0, 0, gamma), (0, 0, 0)], 3)
    return FlagDatum(H, D, (0, 0, 0), (0, alpha, 0), 0)


def heisenberg_flag_datum(field_: Field, beta, gamma, s) -> FlagDatum:
    """The flag data of h(3) in characteristic not 2 or 3.

    ``lambda = 0``, ``alpha0 = 0``, ``D e1 = beta e3``, ``D e2 = gamma e3``,
    ``D e3 = 0`` and ``a0 = s e3``.  Two of these are equivalent exactly when
    ``s - 2 beta gamma`` agree up to a nonzero square.
    """
    _require_char(field_)
    H = heisenberg3(field_)
    D = LinearMap.from_columns(field_, [(0, 0, beta), (0, 0, gamma), (0, 0, 0)], 3)
    return FlagDatum(H, D, (0, 0, 0), (0, 0, s), 0)


def abelian_oracle(field_: Field, D: LinearMap, a0: Sequence) -> FlagDatum:
    """``(D, 0, a0, 0)`` on ``k^n``; needs ``D^2 = 0`` and ``D(a0) = 0``."""
    _require_char(field_)
    n = D.rows
    a0 = tuple(field_(c) for c in a0)
    if not (D @ D).is_zero() or any(D(a0)):
        raise ValueError("abelian flag data need D^2 = 0 and D(a0) = 0")
    return FlagDatum(abelian(field_, n), D, field_.zeros(n), a0, 0)


# -- recursive classification ----------------------------------------------------------


@dataclass
class RecursiveResult:
    field: Field
    target_dim: int
    by_dim: dict[int, list[JJAlgebra]]
    certificates: dict[int, list[dict]]
    complete: bool
    banner: str


def _distinguish(A: JJAlgebra, B: JJAlgebra, budget: int | None) -> dict:
    """Certificate that A and B are not isomorphic, or raise if they are."""
    from .brute import find_isomorphism

    ia, ib = structural_invariants(A), structural_invariants(B)
    stats: dict = {}
    if find_isomorphism(A, B, budget, stats) is not None:
        raise AssertionError("certificate requested for isomorphic algebras")
    return {"invariants_differ": ia != ib, "search": "exhausted", "candidates": stats["candidates"]}


def _extensions(args):
    A, budget = args
    res = classify_h2_codim1(A, budget, certify=False)
    return [JJAlgebra(flag_extension(fd).bracket) for fd in res.representatives]


def recursive_classify(field_: Field, target_dim: int, budget: int | None = None, jobs: int = 1,
                       max_dim: int = 3) -> RecursiveResult:
    """Representatives of JJ algebras up to ``target_dim`` built one flag step at a time.

    Each dimension comes from the codimension-one classes over every
    representative of the previous dimension, deduplicated up to
    isomorphism.  The lists are complete only in characteristic other than
    2, 3 and 5, where every JJ algebra arises this way.
    """
    if not field_.is_finite:
        raise ValueError("recursive classification needs a finite field")
    if target_dim > max_dim:
        raise ValueError(f"target dimension {target_dim} above the cap {max_dim}")
    complete = field_.characteristic not in (2, 3, 5)
    banner = (f"complete list over {field_}: every JJ algebra is solvable in this characteristic"
              if complete else
              f"characteristic {field_.characteristic}: lists contain every flag extension of 0 "
              f"up to isomorphism, completeness is not claimed")
    by_dim = {0: [zero_algebra(field_)]}
    certs: dict[int, list[dict]] = {0: []}
    for d in range(target_dim):
        tasks = [(A, budget) for A in by_dim[d]]
        if jobs > 1 and len(tasks) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=jobs) as pool:
                batches = list(pool.map(_extensions, tasks))
        else:
            batches = [_extensions(t) for t in tasks]
        reps: list[JJAlgebra] = []
        for E in (E for batch in batches for E in batch):
            if not verify_jj(E).ok:
                raise ConditionFailed("flag extension failed the JJ axioms", verify_jj(E))
            if all(is_isomorphic(E, R, budget, max_dim) is None for R in reps):
                reps.append(E)
        by_dim[d + 1] = reps
        certs[d + 1] = [dict(pair=(i, j), **_distinguish(reps[i], reps[j], budget))
                        for i, j in itertools.combinations(range(len(reps)), 2)]
    return RecursiveResult(field_, target_dim, by_dim, certs, complete, banner)
