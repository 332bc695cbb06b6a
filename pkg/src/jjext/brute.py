"""Vectorised exhaustive searches over prime fields.

Everything here works on integer structure tensors ``T[i, j, k]`` (the
``e_k`` coefficient of ``[e_i, e_j]``) reduced modulo ``p``.  These routines
are used both for the isomorphism search and as independent brute-force
oracles that only ever evaluate the raw algebra axioms.
"""

from __future__ import annotations

import itertools

import numpy as np

from .linalg import Field, LinearMap, check_budget, gl_order

CHUNK = 1 << 16


def tensor_array(A) -> np.ndarray:
    """Structure tensor of a :class:`~jjext.algebra.JJAlgebra` as ``int64``."""
    n = A.dim
    return np.array(A.bracket.tensor, dtype=np.int64).reshape(n, n, n)


def jj_mask(T: np.ndarray, p: int) -> np.ndarray:
    """Which tensors in the batch ``T[N, i, j, k]`` are JJ algebras mod ``p``."""
    N = T.shape[0]
    if T.shape[1] == 0:
        return np.ones(N, dtype=bool)
    sym = (((T - T.transpose(0, 2, 1, 3)) % p) == 0).reshape(N, -1).all(axis=1)
    inner = np.einsum("Njkl,Nilm->Nijkm", T, T)
    jac = inner + inner.transpose(0, 2, 3, 1, 4) + inner.transpose(0, 3, 1, 2, 4)
    return sym & ((jac % p) == 0).reshape(N, -1).all(axis=1)


def _index_chunks(shape, chunk=CHUNK):
    total = int(np.prod(shape)) if len(shape) else 1
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        yield np.unravel_index(idx, shape) if len(shape) else ()


def find_isomorphism(A, B, budget: int | None = None, stats: dict | None = None) -> LinearMap | None:
    """First isomorphism ``A -> B`` in lexicographic order of column choices.

    Each basis vector of A may only go to a vector of B with the same
    profile (see :func:`jjext.algebra.vector_profile`); the remaining
    candidates are checked in vectorised batches.
    """
    from .algebra import annihilator, derived_subspace, vector_profile

    F = A.field
    p, n = F.modulus, A.dim
    if n == 0:
        return LinearMap.identity(F, 0)
    ZA, A2 = annihilator(A), derived_subspace(A)
    ZB, B2 = annihilator(B), derived_subspace(B)
    by_profile: dict = {}
    for w in itertools.product(range(p), repeat=n):
        by_profile.setdefault(vector_profile(B, w, ZB, B2), []).append(w)
    cands = [by_profile.get(vector_profile(A, A.unit(i), ZA, A2), []) for i in range(n)]
    shape = tuple(len(c) for c in cands)
    if stats is not None:
        stats["candidates"] = int(np.prod(shape))
    if 0 in shape:
        return None
    check_budget("isomorphism candidates", int(np.prod(shape)), budget)
    C = [np.array(c, dtype=np.int64) for c in cands]
    TA, TB = tensor_array(A), tensor_array(B)
    for idx in _index_chunks(shape):
        Phi = np.stack([C[i][idx[i]] for i in range(n)], axis=2)  # Phi[N, row, col]
        lhs = np.einsum("ijk,Nlk->Nijl", TA, Phi)
        rhs = np.einsum("Nai,Nbj,abl->Nijl", Phi, Phi, TB, optimize=True)
        ok = (((lhs - rhs) % p) == 0).reshape(len(Phi), -1).all(axis=1)
        for M in Phi[ok]:
            phi = LinearMap(F, n, n, tuple(tuple(int(x) for x in row) for row in M))
            if phi.is_invertible():
                return phi
    return None


def stabilizing_automorphisms(E, k: int) -> list[LinearMap]:
    """Automorphisms of ``E`` fixing the first ``k`` basis vectors.

    Brute force over all choices of the remaining columns, checked only
    against the bracket of ``E``.
    """
    F = E.field
    p, n = F.modulus, E.dim
    m = n - k
    check_budget("stabilizing maps", p ** (n * m), None)
    T = tensor_array(E)
    fixed = np.eye(n, dtype=np.int64)[:, :k]
    cols = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    found = []
    for idx in _index_chunks((len(cols),) * m):
        N = len(idx[0]) if m else 1
        free = [cols[idx[c]] for c in range(m)]
        Phi = np.concatenate([np.broadcast_to(fixed, (N, n, k))] + [f[:, :, None] for f in free], axis=2)
        lhs = np.einsum("ijk,Nlk->Nijl", T, Phi)
        rhs = np.einsum("Nai,Nbj,abl->Nijl", Phi, Phi, T, optimize=True)
        ok = (((lhs - rhs) % p) == 0).reshape(N, -1).all(axis=1)
        for M in Phi[ok]:
            phi = LinearMap(F, n, n, tuple(tuple(int(x) for x in row) for row in M))
            if phi.is_invertible():
                found.append(phi)
    return found


def flag_extension_tensors(TA: np.ndarray, D: np.ndarray, lam: np.ndarray, a0: np.ndarray,
                           alpha0: np.ndarray) -> np.ndarray:
    """Batch of ``(n+1)``-dim tensors ``[e_i, x] = D e_i + lam_i x``, ``[x, x] = a0 + alpha0 x``.

    ``D[N, row, col]`` uses the column convention.
    """
    N, n = D.shape[0], TA.shape[0]
    T = np.zeros((N, n + 1, n + 1, n + 1), dtype=np.int64)
    T[:, :n, :n, :n] = TA
    T[:, :n, n, :n] = D.transpose(0, 2, 1)
    T[:, n, :n, :n] = D.transpose(0, 2, 1)
    T[:, :n, n, n] = lam
    T[:, n, :n, n] = lam
    T[:, n, n, :n] = a0
    T[:, n, n, n] = alpha0
    return T


def naive_flag_data(A, budget: int | None = None) -> set[tuple]:
    """Every raw ``(D, lambda, a0, alpha0)`` whose one-dimensional extension is JJ.

    Keys are ``(D columns flattened, lambda, a0, alpha0)`` as in
    :meth:`jjext.classify.FlagDatum.key`.  The whole raw space is scanned.
    """
    F = A.field
    p, n = F.modulus, A.dim
    size = n * n + 2 * n + 1
    check_budget("naive flag data", p ** size, budget)
    TA = tensor_array(A)
    out = set()
    total = p ** size
    chunk = max(1, CHUNK // max(1, (n + 1) ** 2))
    powers = p ** np.arange(size - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % p
        Dflat = digits[:, : n * n]
        D = Dflat.reshape(-1, n, n).transpose(0, 2, 1)  # flattened by columns
        lam = digits[:, n * n: n * n + n]
        a0 = digits[:, n * n + n: n * n + 2 * n]
        al = digits[:, -1]
        ok = jj_mask(flag_extension_tensors(TA, D, lam, a0, al), p)
        for row in digits[ok]:
            r = tuple(int(x) for x in row)
            out.add((r[: n * n], r[n * n: n * n + n], r[n * n + n: n * n + 2 * n], r[-1]))
    return out


def _low_x_entries(n: int) -> np.ndarray:
    """Jacobi entries ``(i, j, k, m)`` with at most one of ``i, j, k`` equal to ``x = n``."""
    idx = [(i, j, k, m) for i, j, k in itertools.product(range(n + 1), repeat=3)
           if (i == n) + (j == n) + (k == n) <= 1 for m in range(n + 1)]
    return np.array(idx, dtype=np.int64).reshape(-1, 4)


def staged_flag_data(A, budget: int | None = None) -> set[tuple]:
    """Same output as :func:`naive_flag_data`, for algebras where the raw scan is too large.

    The Jacobi entries with at most one ``x`` do not involve ``a0`` or
    ``alpha0`` and are affine in ``D`` for fixed ``lambda``.  For each
    ``lambda`` that affine map is read off the raw tensor identity and
    checked on sample points.  Every ``D`` is then tested by splitting its
    coordinates in two halves and joining equal partial residuals, which
    covers all pairs of halves.  The surviving ``D`` are completed by all
    ``(a0, alpha0)`` and the full identity is evaluated on each candidate.
    """
    F = A.field
    p, n = F.modulus, A.dim
    nn = n * n
    h = nn // 2
    check_budget("staged flag data", p ** n * (p ** h + p ** (nn - h)), budget)
    TA = tensor_array(A)
    sel = _low_x_entries(n)
    rng = np.random.default_rng(0)

    def low_residual(D, lam):
        N = D.shape[0]
        T = flag_extension_tensors(TA, D, np.broadcast_to(lam, (N, n)), np.zeros((N, n), np.int64),
                                   np.zeros(N, np.int64))
        inner = np.einsum("Njkl,Nilm->Nijkm", T, T)
        jac = inner + inner.transpose(0, 2, 3, 1, 4) + inner.transpose(0, 3, 1, 2, 4)
        return jac[:, sel[:, 0], sel[:, 1], sel[:, 2], sel[:, 3]]

    def to_D(flat):
        # flat holds D by columns
        return flat.reshape(-1, n, n).transpose(0, 2, 1)

    left = np.array(list(itertools.product(range(p), repeat=h)), dtype=np.int64).reshape(p ** h, h)
    right = np.array(list(itertools.product(range(p), repeat=nn - h)), dtype=np.int64).reshape(p ** (nn - h), nn - h)
    tails = np.array(list(itertools.product(range(p), repeat=n + 1)), dtype=np.int64)
    unit_D = np.concatenate([np.zeros((1, nn), np.int64), np.eye(nn, dtype=np.int64)])
    out = set()
    for lam in itertools.product(range(p), repeat=n):
        lam = np.array(lam, dtype=np.int64)
        vals = low_residual(to_D(unit_D), lam)
        c, M = vals[0], (vals[1:] - vals[0]).T                 # residual(d) = c + M d
        sample = rng.integers(0, p, (8, nn))
        if not np.array_equal(low_residual(to_D(sample), lam) % p, (c + sample @ M.T) % p):
            raise AssertionError("low Jacobi entries are not affine in D")
        R1 = (left @ M[:, :h].T) % p
        R2 = (-(right @ M[:, h:].T) - c) % p
        index: dict = {}
        for k, row in enumerate(R2.astype(np.int8)):
            index.setdefault(row.tobytes(), []).append(k)
        survivors = [np.concatenate([left[i], right[k]])
                     for i, row in enumerate(R1.astype(np.int8)) for k in index.get(row.tobytes(), ())]
        if not survivors:
            continue
        S = np.array(survivors, dtype=np.int64)
        cand_d = np.repeat(S, len(tails), axis=0)
        cand_t = np.tile(tails, (len(S), 1))
        for s0 in range(0, len(cand_d), CHUNK // 4):
            d, t = cand_d[s0:s0 + CHUNK // 4], cand_t[s0:s0 + CHUNK // 4]
            T = flag_extension_tensors(TA, to_D(d), np.broadcast_to(lam, (len(d), n)), t[:, :n], t[:, n])
            ok = jj_mask(T, p)
            for dd, tt in zip(d[ok], t[ok]):
                out.add((tuple(int(x) for x in dd), tuple(int(x) for x in lam),
                         tuple(int(x) for x in tt[:n]), int(tt[n])))
    return out


def all_jj_tensors(field: Field, n: int, budget: int | None = None) -> np.ndarray:
    """Every JJ structure tensor on ``k^n`` (symmetric by construction)."""
    p = field.modulus
    pairs = list(itertools.combinations_with_replacement(range(n), 2))
    size = len(pairs) * n
    check_budget("raw structure tensors", p ** size, budget)
    keep = []
    powers = p ** np.arange(size - 1, -1, -1, dtype=np.int64)
    for start in range(0, p ** size, CHUNK):
        idx = np.arange(start, min(p ** size, start + CHUNK), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % p
        T = np.zeros((len(idx), n, n, n), dtype=np.int64)
        for q, (i, j) in enumerate(pairs):
            T[:, i, j, :] = digits[:, q * n:(q + 1) * n]
            T[:, j, i, :] = digits[:, q * n:(q + 1) * n]
        keep.append(T[jj_mask(T, p)])
    return np.concatenate(keep) if keep else np.zeros((0, n, n, n), dtype=np.int64)


def isomorphism_class_count(field: Field, n: int, budget: int | None = None) -> int:
    """Number of isomorphism classes of n-dimensional JJ algebras, by orbit enumeration.

    All JJ tensors are listed, then each is mapped to the least encoding in
    its ``GL_n`` orbit.
    """
    from .linalg import enumerate_invertible

    p = field.modulus
    Ts = all_jj_tensors(field, n, budget)
    check_budget("orbit sweep", gl_order(p, n) * len(Ts), budget)
    gs = [np.array(g.entries, dtype=np.int64) for g in enumerate_invertible(field, n)]
    G = np.stack(gs)
    Ginv = np.stack([np.array(g.inverse().entries, dtype=np.int64) for g in enumerate_invertible(field, n)])
    weights = p ** np.arange(n ** 3, dtype=np.int64)[::-1]
    canon = set()
    for T in Ts:
        # new[i,j,:] = g^{-1} T(g e_i, g e_j)
        U = np.einsum("gai,gbj,abl,gml->gijm", G, G, T, Ginv, optimize=True) % p
        codes = U.reshape(len(G), -1) @ weights
        canon.add(int(codes.min()))
    return len(canon)
