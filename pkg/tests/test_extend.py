import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import data_over, invertible_maps, linear_maps, random_datum
from jjext.algebra import abelian, heisenberg3, is_morphism, nilpotent_plane, verify_jj
from jjext.classify import FlagDatum, flag_to_datum, heisenberg_flag_datum, heisenberg_oracle
from jjext.errors import ConditionFailed, DimensionMismatch
from jjext.extend import (ExtendingDatum, are_equivalent, canonical_datum, check_extending,
                          check_morphism_pair, compose_pairs, coordinate_projection, inverse_pair,
                          psi_map, transport_datum, unified_product)
from jjext.linalg import GF, QQ, BilinearMap, LinearMap


def test_zero_datum_passes_and_gives_direct_product():
    for A in (abelian(GF(5), 1), heisenberg3(GF(5)), nilpotent_plane(QQ)):
        d = ExtendingDatum.build(A, 2)
        assert check_extending(d).ok
        E = unified_product(d)
        assert E.dim == A.dim + 2 and verify_jj(E).ok
        assert E.subalgebra(E.basis()[:A.dim]) == A
        assert all(not any(E(E.unit(A.dim + i), E.unit(j))) for i in range(2) for j in range(E.dim))
    assert unified_product(ExtendingDatum.build(abelian(GF(5), 1), 1)).is_abelian()


def test_asymmetric_cocycle_fails_e1():
    F = GF(5)
    A = abelian(F, 1)
    f = BilinearMap.from_entries(F, 2, 2, 1, {(0, 1): (1,)})
    rep = check_extending(ExtendingDatum.build(A, 2, cocycle=f))
    assert rep.witnesses("E1") == [("cocycle", 0, 1)]
    assert not verify_jj(unified_product(ExtendingDatum.build(A, 2, cocycle=f))).ok


def test_heisenberg_flag_datum_lifts():
    F = GF(5)
    for beta in range(5):
        for gamma in range(5):
            d = flag_to_datum(heisenberg_oracle(F, (0, beta, gamma)))
            assert check_extending(d).ok
    E = unified_product(flag_to_datum(heisenberg_oracle(F, (0, 1, 0))))
    assert E.dim == 4 and verify_jj(E).ok
    assert E(E.unit(0), E.unit(3)) == E.unit(2)


def test_shape_errors():
    F = GF(5)
    A = abelian(F, 2)
    with pytest.raises(DimensionMismatch):
        ExtendingDatum(A, 1, BilinearMap.zero(F, 1, 2, 1), BilinearMap.zero(F, 1, 2, 1),
                       BilinearMap.zero(F, 1, 1, 2), BilinearMap.zero(F, 1, 1, 1))


@given(st.data())
def test_biconditional_hypothesis(data):
    F = data.draw(st.sampled_from([GF(2), GF(3), GF(5)]))
    A = data.draw(st.sampled_from([abelian(F, 1), abelian(F, 2), nilpotent_plane(F)]))
    m = data.draw(st.integers(1, 2))
    d = data.draw(data_over(A, m))
    assert check_extending(d).ok == verify_jj(unified_product(d)).ok


def test_biconditional_seeded_sample():
    rng = random.Random(7)
    seen = [0, 0]
    for _ in range(600):
        F = GF(rng.choice((2, 5)))
        A = rng.choice([abelian(F, 1), abelian(F, 2), nilpotent_plane(F), heisenberg3(F)])
        d = random_datum(rng, A, rng.choice((1, 2)))
        ok = check_extending(d).ok
        assert ok == verify_jj(unified_product(d)).ok
        seen[ok] += 1
    assert min(seen) > 20


def test_canonical_datum_heisenberg_ideal():
    F = GF(5)
    H = heisenberg3(F)
    cd = canonical_datum(H, [(0, 0, 1)])
    d = cd.datum
    assert d.right_act.is_zero() and d.left_act.is_zero() and d.brace.is_zero()
    assert d.cocycle.entries() == {(0, 1): (1,), (1, 0): (1,)}
    assert check_extending(d).ok
    assert is_morphism(unified_product(d), H, cd.phi).ok and cd.phi.is_invertible()


def test_canonical_datum_heisenberg_non_ideal():
    F = GF(5)
    H = heisenberg3(F)
    cd = canonical_datum(H, [(1, 0, 0)])
    d = cd.datum
    # V = span{e2, e3}: [e2, e1] = e3 lands in V
    assert d.cocycle.is_zero()
    assert d.left_act.entries() == {(0, 0): (0, 1)}
    assert is_morphism(unified_product(d), H, cd.phi).ok


def test_canonical_datum_trivial_complement():
    F = GF(5)
    H = heisenberg3(F)
    cd = canonical_datum(H, H.basis())
    assert cd.datum.vdim == 0 and cd.phi == LinearMap.identity(F, 3)


def test_canonical_datum_errors():
    F = GF(5)
    H = heisenberg3(F)
    with pytest.raises(ConditionFailed):
        canonical_datum(H, [(1, 0, 0), (0, 1, 0)])
    with pytest.raises(ConditionFailed):
        canonical_datum(H, [(1, 0, 0), (2, 0, 0)])
    bad_p = LinearMap.from_rows(F, [[2, 0, 0]])
    with pytest.raises(ConditionFailed):
        canonical_datum(H, [(1, 0, 0)], bad_p)


def test_different_retractions_give_equivalent_data():
    F = GF(3)
    H = heisenberg3(F)
    A_basis = [(1, 0, 0)]
    d1 = canonical_datum(H, A_basis).datum
    p2 = coordinate_projection(H, A_basis, [(1, 1, 0), (0, 0, 1)])
    d2 = canonical_datum(H, A_basis, p2).datum
    w = are_equivalent(d1, d2)
    assert w is not None and transport_datum(d2, *w) == d1


def test_morphism_pair_examples():
    F = GF(5)
    A = abelian(F, 2)
    d = ExtendingDatum.build(A, 1)
    assert check_morphism_pair(d, d, LinearMap.zero(F, 2, 1), LinearMap.identity(F, 1)).ok
    for r in (LinearMap.from_rows(F, [[1], [3]]), LinearMap.from_rows(F, [[4], [0]])):
        for v in (LinearMap.from_rows(F, [[2]]), LinearMap.from_rows(F, [[0]])):
            assert check_morphism_pair(d, d, r, v).ok


@given(st.data())
def test_transport_gives_morphism_pair(data):
    F = data.draw(st.sampled_from([GF(3), GF(5)]))
    A = data.draw(st.sampled_from([abelian(F, 1), nilpotent_plane(F), heisenberg3(F)]))
    m = data.draw(st.integers(1, 2))
    d = data.draw(data_over(A, m))
    r = data.draw(linear_maps(F, A.dim, m))
    v = data.draw(invertible_maps(F, m))
    d2 = transport_datum(d, r, v)
    assert check_morphism_pair(d, d2, r, v).ok
    psi = psi_map(A.dim, m, r, v)
    assert is_morphism(unified_product(d), unified_product(d2), psi).ok
    assert check_extending(d).ok == check_extending(d2).ok
    back = transport_datum(d2, *inverse_pair((r, v)))
    assert back == d


@given(st.data())
def test_morphism_pair_matches_psi(data):
    # both directions of the (M1)-(M4) characterisation on arbitrary pairs
    F = GF(3)
    A = data.draw(st.sampled_from([abelian(F, 1), nilpotent_plane(F)]))
    d, d2 = data.draw(data_over(A, 1)), data.draw(data_over(A, 1))
    r = data.draw(linear_maps(F, A.dim, 1))
    v = data.draw(linear_maps(F, 1, 1))
    psi = psi_map(A.dim, 1, r, v)
    assert check_morphism_pair(d, d2, r, v).ok == is_morphism(unified_product(d), unified_product(d2), psi).ok


@given(st.data())
def test_transport_composes(data):
    F = GF(3)
    A = nilpotent_plane(F)
    d = data.draw(data_over(A, 1))
    w1 = (data.draw(linear_maps(F, 2, 1)), data.draw(invertible_maps(F, 1)))
    w2 = (data.draw(linear_maps(F, 2, 1)), data.draw(invertible_maps(F, 1)))
    # psi(w1) o psi(w2) is the pair composed by compose_pairs
    assert transport_datum(transport_datum(d, *w2), *w1) == transport_datum(d, *compose_pairs(w1, w2))
    assert transport_datum(d, LinearMap.zero(F, 2, 1), LinearMap.identity(F, 1)) == d


def test_transport_of_zero_datum_on_abelian():
    F = GF(5)
    A = abelian(F, 2)
    d = ExtendingDatum.build(A, 2)
    r = LinearMap.from_rows(F, [[1, 2], [3, 4]])
    v = LinearMap.from_rows(F, [[1, 1], [0, 1]])
    assert transport_datum(d, r, v) == d
    with pytest.raises(ConditionFailed):
        transport_datum(d, r, LinearMap.zero(F, 2, 2))


def test_are_equivalent_examples():
    F = GF(5)
    A = abelian(F, 1)
    one = flag_to_datum(FlagDatum(A, LinearMap.zero(F, 1, 1), (0,), (1,), 0))
    four = flag_to_datum(FlagDatum(A, LinearMap.zero(F, 1, 1), (0,), (4,), 0))
    two = flag_to_datum(FlagDatum(A, LinearMap.zero(F, 1, 1), (0,), (2,), 0))
    assert are_equivalent(one, one) == (LinearMap.zero(F, 1, 1), LinearMap.identity(F, 1))
    r, v = are_equivalent(four, one)
    assert transport_datum(one, r, v) == four and v.entries[0][0] in (2, 3)
    assert are_equivalent(two, one) is None


def test_heisenberg_alpha_classes_never_meet():
    F = GF(5)
    with_alpha = flag_to_datum(heisenberg_oracle(F, (1, 2, 0)))
    without = flag_to_datum(heisenberg_flag_datum(F, 2, 0, 0))
    assert are_equivalent(with_alpha, without) is None
    assert are_equivalent(without, with_alpha) is None
