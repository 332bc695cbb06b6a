import time
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from jjext.algebra import abelian, heisenberg3, nilpotent_plane
from jjext.linalg import GF, QQ, BilinearMap, LinearMap

settings.register_profile("jjext", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("jjext")

ACCEPTANCE: list[tuple[str, bool, float, str]] = []


@contextmanager
def criterion(label: str, limit: float | None = None):
    """Record one acceptance line; failures inside the block still propagate."""
    info: dict = {"detail": ""}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        if ok and limit is not None and elapsed > limit:
            ok = False
            info["detail"] += f" (over the {limit:g}s limit)"
        ACCEPTANCE.append((label, ok, elapsed, info["detail"]))
    if limit is not None:
        assert elapsed <= limit, f"{label}: {elapsed:.1f}s exceeds {limit}s"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, elapsed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  [{elapsed:.1f}s]  {detail}".rstrip())


@pytest.fixture
def F5():
    return GF(5)


@pytest.fixture
def H5():
    return heisenberg3(GF(5))


STOCK = [
    ("abelian1", lambda F: abelian(F, 1)),
    ("abelian2", lambda F: abelian(F, 2)),
    ("abelian3", lambda F: abelian(F, 3)),
    ("nilpotent_plane", nilpotent_plane),
    ("heisenberg3", heisenberg3),
]


# -- hypothesis strategies ------------------------------------------------------------

fields = st.sampled_from([GF(2), GF(3), GF(5), GF(7), QQ])
prime_fields = st.sampled_from([GF(2), GF(3), GF(5), GF(7)])


def scalars(F):
    if F.is_finite:
        return st.integers(0, F.modulus - 1)
    return st.fractions(min_value=-5, max_value=5, max_denominator=4)


def vectors(F, n):
    return st.tuples(*[scalars(F)] * n) if n else st.just(())


def linear_maps(F, rows, cols):
    return st.lists(vectors(F, cols), min_size=rows, max_size=rows).map(
        lambda r: LinearMap(F, rows, cols, tuple(tuple(F(x) for x in row) for row in r)))


def invertible_maps(F, n):
    return linear_maps(F, n, n).filter(lambda m: m.is_invertible())


def bilinear_maps(F, left, right, target, symmetric=False):
    def build(vals):
        t = [[vals[i * right + j] for j in range(right)] for i in range(left)]
        if symmetric:
            for i in range(left):
                for j in range(i):
                    t[i][j] = t[j][i]
        return BilinearMap(F, left, right, target, tuple(tuple(tuple(F(c) for c in v) for v in row) for row in t))

    return st.lists(vectors(F, target), min_size=left * right, max_size=left * right).map(build)


def random_bilinear(rng, F, left, right, target, density, symmetric=False):
    t = [[F.zeros(target) for _ in range(right)] for _ in range(left)]
    for i in range(left):
        for j in range(right):
            if symmetric and j < i:
                t[i][j] = t[j][i]
            elif rng.random() < density:
                t[i][j] = tuple(rng.randrange(F.modulus) for _ in range(target))
    return BilinearMap(F, left, right, target, tuple(tuple(r) for r in t))


def random_datum(rng, A, m, symmetric_prob=0.85):
    """Raw extending datum; sparse and mostly symmetric so that some of them pass."""
    from jjext.extend import ExtendingDatum

    F, n = A.field, A.dim
    dens = [rng.choice((0.0, 0.0, 0.15, 0.3, 0.6)) for _ in range(4)]
    return ExtendingDatum(
        A, m,
        random_bilinear(rng, F, m, n, m, dens[0]),
        random_bilinear(rng, F, m, n, n, dens[1]),
        random_bilinear(rng, F, m, m, n, dens[2], rng.random() < symmetric_prob),
        random_bilinear(rng, F, m, m, m, dens[3], rng.random() < symmetric_prob),
    )


def data_over(A, m):
    """Hypothesis strategy for raw extending data over ``A`` through ``k^m``."""
    from jjext.extend import ExtendingDatum

    F, n = A.field, A.dim
    return st.builds(lambda l, r, f, b: ExtendingDatum(A, m, l, r, f, b),
                     bilinear_maps(F, m, n, m), bilinear_maps(F, m, n, n),
                     bilinear_maps(F, m, m, n, symmetric=True), bilinear_maps(F, m, m, m, symmetric=True))
