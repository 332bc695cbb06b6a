import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import linear_maps, vectors
from jjext.algebra import abelian, heisenberg3, is_isomorphic, nilpotent_plane, verify_jj, zero_algebra
from jjext.brute import naive_flag_data, staged_flag_data
from jjext.classify import (FlagDatum, FlagWitness, abelian_oracle, check_flag_datum,
                            check_flag_equivalence, classify_h2_codim1, compose_witnesses,
                            datum_to_flag, enumerate_flag_data, find_flag_witness, flag_extension,
                            flag_to_datum, heisenberg_flag_datum, heisenberg_oracle, invert_witness,
                            recursive_classify, transport_flag)
from jjext.errors import BudgetExceeded
from jjext.extend import check_extending, transport_datum, unified_product
from jjext.linalg import GF, LinearMap

F5 = GF(5)


def line_datum(a0):
    A = abelian(F5, 1)
    return FlagDatum(A, LinearMap.zero(F5, 1, 1), (0,), (a0,), 0)


def square_class(F, s):
    s = F(s)
    if s == 0:
        return 0
    return 1 if pow(s, (F.modulus - 1) // 2, F.modulus) == 1 else -1


def test_flag_datum_examples():
    H = heisenberg3(F5)
    assert check_flag_datum(FlagDatum.zero(H)).ok
    D = LinearMap.from_columns(F5, [(0, 0, 2), (0, 0, 3), (0, 0, 0)], 3)
    assert check_flag_datum(FlagDatum(H, D, (0, 0, 0), (0, 0, 4), 0)).ok
    rep = check_flag_datum(FlagDatum(H, D, (0, 0, 0), (0, 1, 0), 0))
    assert rep.witnesses("F3") == [(0,)]
    assert check_flag_datum(FlagDatum(abelian(F5, 1), LinearMap.zero(F5, 1, 1), (1,), (0,), 0)).witnesses("F1")


@given(st.data())
def test_abelian_flag_data_characterisation(data):
    F = data.draw(st.sampled_from([GF(5), GF(7)]))
    n = data.draw(st.integers(1, 2))
    D = data.draw(linear_maps(F, n, n))
    lam, a0 = data.draw(vectors(F, n)), data.draw(vectors(F, n))
    al = data.draw(st.integers(0, F.modulus - 1))
    fd = FlagDatum(abelian(F, n), D, lam, a0, al)
    expected = not any(lam) and al == 0 and (D @ D).is_zero() and not any(D(fd.a0))
    assert check_flag_datum(fd).ok == expected


def test_flag_extension_examples():
    E = flag_extension(FlagDatum.zero(abelian(F5, 1)))
    assert E.is_abelian() and E.dim == 2
    E = flag_extension(heisenberg_oracle(F5, (0, 1, 0)))
    assert verify_jj(E).ok and E(E.unit(0), E.unit(3)) == E.unit(2)
    E = flag_extension(heisenberg_oracle(F5, (2, 0, 0)))
    assert E(E.unit(1), E.unit(3)) == (0, 0, 0, 0) and E(E.unit(3), E.unit(3)) == (0, 2, 0, 0)
    assert not verify_jj(E).ok


def test_printed_variant_breaks_jacobi():
    for a0 in range(1, 5):
        fd = line_datum(a0)
        assert verify_jj(flag_extension(fd)).ok
        assert not verify_jj(flag_extension(fd, printed_variant=True)).ok
    assert flag_extension(line_datum(0), printed_variant=True) == flag_extension(line_datum(0))


def test_equivalence_examples():
    assert check_flag_equivalence(line_datum(1), line_datum(1), FlagWitness((0,), 1))
    assert check_flag_equivalence(line_datum(1), line_datum(4), FlagWitness((0,), 2))
    assert find_flag_witness(line_datum(1), line_datum(2)) is None
    with pytest.raises(ValueError):
        FlagWitness((0,), 0)


def test_abelian_line_classes():
    res = classify_h2_codim1(abelian(F5, 1))
    assert res.count == 5 and res.classes == 3
    assert sorted(sorted(d.a0[0] for d in res.orbit(k)) for k in range(3)) == [[0], [1, 4], [2, 3]]
    assert not res.problems
    assert all(not c["equivalent"] for c in res.certificates)


def test_abelian_plane_against_naive_and_staged():
    A = abelian(F5, 2)
    staged = enumerate_flag_data(A)
    keys = {d.key() for d in staged}
    assert len(staged) == 145
    expected = {(D.flat(), (0, 0), tuple(a0), 0)
                for D in _square_zero(F5) for a0 in itertools.product(range(5), repeat=2)
                if not any(D(a0))}
    assert keys == expected
    assert naive_flag_data(A) == keys
    assert staged_flag_data(A) == keys


def _square_zero(F):
    from jjext.linalg import enumerate_maps
    return [D for D in enumerate_maps(F, 2, 2) if (D @ D).is_zero()]


@pytest.mark.parametrize("make,p", [(nilpotent_plane, 5), (nilpotent_plane, 7), (heisenberg3, 3)])
def test_staged_enumeration_matches_oracle(make, p):
    A = make(GF(p))
    assert {d.key() for d in enumerate_flag_data(A)} == staged_flag_data(A)


def test_heisenberg_classification():
    res = classify_h2_codim1(heisenberg3(F5))
    assert res.count == 125
    assert res.classes == 3 and sorted(res.orbit_sizes) == [25, 50, 50]
    assert not res.problems
    assert {d.key() for d in res.data} == staged_flag_data(heisenberg3(F5))
    params = {}
    for b, g, s in itertools.product(range(5), repeat=3):
        params[heisenberg_flag_datum(F5, b, g, s).key()] = square_class(F5, s - 2 * b * g)
    assert set(params) == {d.key() for d in res.data}
    for k in range(res.classes):
        assert len({params[d.key()] for d in res.orbit(k)}) == 1


def test_heisenberg_oracle_alpha_family():
    for beta, gamma in itertools.product(range(5), repeat=2):
        assert check_flag_datum(heisenberg_oracle(F5, (0, beta, gamma))).ok
    for alpha in range(1, 5):
        for beta in range(5):
            assert check_flag_datum(heisenberg_oracle(F5, (alpha, beta, 0))).witnesses("F3")
    with pytest.raises(ValueError):
        heisenberg_oracle(F5, (1, 0, 1))
    with pytest.raises(ValueError):
        heisenberg_oracle(GF(3), (0, 0, 0))


def test_abelian_oracle():
    D = LinearMap.from_rows(F5, [[0, 1], [0, 0]])
    assert check_flag_datum(abelian_oracle(F5, D, (3, 0))).ok
    with pytest.raises(ValueError):
        abelian_oracle(F5, D, (0, 1))


def test_f2_orbits_come_from_r_alone():
    F = GF(2)
    res = classify_h2_codim1(abelian(F, 1))
    # u = 1 only, so each orbit is the set of images under r alone
    for k, rep in enumerate(res.representatives):
        images = {transport_flag(rep, (r,), 1).key() for r in range(2)}
        assert images == {d.key() for d in res.orbit(k)}
    assert sum(res.orbit_sizes) == res.count


def test_flag_and_datum_round_trip():
    for fd in enumerate_flag_data(nilpotent_plane(F5)):
        d = flag_to_datum(fd)
        assert datum_to_flag(d) == fd and check_extending(d).ok
        assert unified_product(d) == flag_extension(fd)


@given(st.data())
def test_transport_flag_matches_transport_datum(data):
    F = GF(5)
    A = data.draw(st.sampled_from([abelian(F, 2), nilpotent_plane(F), heisenberg3(F)]))
    n = A.dim
    fd = FlagDatum(A, data.draw(linear_maps(F, n, n)), data.draw(vectors(F, n)),
                   data.draw(vectors(F, n)), data.draw(st.integers(0, 4)))
    r = data.draw(vectors(F, n))
    u = data.draw(st.integers(1, 4))
    g = transport_flag(fd, r, u)
    # the flag formulas describe psi in the opposite direction
    R, U = LinearMap.from_columns(F, [r], n), LinearMap.from_rows(F, [[u]])
    assert transport_datum(flag_to_datum(g), R, U) == flag_to_datum(fd)
    assert check_flag_datum(fd).ok == check_flag_datum(g).ok


def test_witness_laws_on_heisenberg():
    rng = random.Random(11)
    F = F5
    data = enumerate_flag_data(heisenberg3(F))
    for _ in range(200):
        fd = rng.choice(data)
        w1 = FlagWitness(tuple(rng.randrange(5) for _ in range(3)), rng.randrange(1, 5))
        w2 = FlagWitness(tuple(rng.randrange(5) for _ in range(3)), rng.randrange(1, 5))
        g2 = transport_flag(fd, w2.r, w2.u)
        g12 = transport_flag(g2, w1.r, w1.u)
        assert check_flag_equivalence(g12, fd, compose_witnesses(w1, w2, F))
        assert check_flag_equivalence(fd, g2, invert_witness(w2, F))
        assert check_flag_equivalence(fd, fd, FlagWitness((0, 0, 0), 1))


def test_orbit_witnesses_recorded():
    res = classify_h2_codim1(nilpotent_plane(F5))
    assert sum(res.orbit_sizes) == res.count == 25
    for j, w in res.witnesses.items():
        rep = res.representatives[res.orbit_of[j]]
        assert check_flag_equivalence(res.data[j], rep, w)


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        enumerate_flag_data(heisenberg3(F5), budget=10)
    with pytest.raises(BudgetExceeded):
        classify_h2_codim1(heisenberg3(F5), budget=200)


def test_recursive_classification_small():
    res = recursive_classify(GF(7), 2)
    assert [len(res.by_dim[d]) for d in range(3)] == [1, 1, 2]
    assert res.complete and res.by_dim[1][0].is_abelian()
    assert is_isomorphic(res.by_dim[0][0], zero_algebra(GF(7))) is not None
    assert all(verify_jj(E).ok for E in res.by_dim[2])
    assert res.certificates[2] and all(c["search"] == "exhausted" for c in res.certificates[2])
    res5 = recursive_classify(F5, 1)
    assert not res5.complete and "not claimed" in res5.banner
    with pytest.raises(ValueError):
        recursive_classify(F5, 4)
