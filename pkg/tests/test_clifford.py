import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isoparam.clifford import (
    Octonion,
    build_system,
    constructible_families,
    delta_of_m,
    drop_generator,
    dump_system,
    load_system,
    octonion_left_mult,
    system_from_matrices,
    trace_invariant,
    verify_clifford_relations,
)
from isoparam.errors import InvalidArgument, InvalidFamily, InvalidVariant

FAMILIES = list(constructible_families(9, 4))
octs = st.lists(st.floats(-3, 3, allow_nan=False), min_size=8, max_size=8).map(Octonion.from_array)


def test_delta_table_and_periodicity():
    assert [delta_of_m(m) for m in range(1, 10)] == [1, 2, 4, 4, 8, 8, 8, 8, 16]
    for m in range(1, 9):
        assert delta_of_m(m + 8) == 16 * delta_of_m(m)
    with pytest.raises(InvalidArgument):
        delta_of_m(0)


@given(octs, octs)
def test_octonion_norm_is_multiplicative(a, b):
    assert (a * b).norm() == pytest.approx(a.norm() * b.norm(), rel=1e-9, abs=1e-9)


@given(octs, octs)
def test_octonion_conjugation_reverses_products(a, b):
    np.testing.assert_allclose((a * b).conj().as_array(), (b.conj() * a.conj()).as_array(), atol=1e-9)


def test_octonions_are_not_associative():
    e = [Octonion.basis(i) for i in range(8)]
    assert not np.allclose(((e[1] * e[2]) * e[4]).as_array(), (e[1] * (e[2] * e[4])).as_array())


def test_left_mult_matrices_are_complex_structures():
    for i in range(1, 8):
        L = octonion_left_mult(i)
        np.testing.assert_array_equal(L.T, -L)
        np.testing.assert_array_equal(L @ L, -np.eye(8, dtype=L.dtype))


@pytest.mark.parametrize("m,k", FAMILIES)
def test_relations_hold_exactly(m, k):
    for signs in {(1,) * k, tuple((-1) ** i for i in range(k))} if m % 4 == 0 else {(1,) * k}:
        s = build_system(m, k, signs=signs)
        rep = verify_clifford_relations(s)
        assert rep.passed and rep.exact and rep.max_deviation == 0
        assert s.dim == 2 * k * delta_of_m(m)
        assert s.m2 == s.l - m - 1


@pytest.mark.parametrize("m,k", [f for f in FAMILIES if f[0] % 4 == 0])
def test_trace_invariant_equals_sign_sum(m, k):
    for plus in range(k + 1):
        signs = (1,) * plus + (-1,) * (k - plus)
        s = build_system(m, k, signs=signs)
        assert trace_invariant(s) == sum(signs) == s.q
        assert s.definite == (abs(s.q) == k)


def test_trace_of_product_matches_definition():
    s = build_system(4, 3, signs=(1, 1, -1))
    P = [p.astype(float) for p in s.P]
    prod = P[0]
    for p in P[1:]:
        prod = prod @ p
    assert np.trace(prod) == pytest.approx(2 * s.q * delta_of_m(4))


def test_literal_octonion_87_is_definite_with_negative_q():
    s = build_system(8, 2, variant="octonion_87_definite")
    assert verify_clifford_relations(s).passed
    assert s.q == -2 and s.definite and (s.m1, s.m2) == (8, 7)


def test_octonion_96_system():
    s = build_system(9, 1, variant="octonion_96")
    assert verify_clifford_relations(s).passed
    assert (s.m1, s.m2) == (9, 6)


def test_dropping_a_generator_from_96_gives_indefinite_87():
    s = drop_generator(build_system(9, 1, variant="octonion_96"), 1)
    assert verify_clifford_relations(s).passed
    assert (s.m1, s.m2, s.q) == (8, 7, 0)


def test_dropping_from_52_gives_indefinite_43():
    s = drop_generator(build_system(5, 1), 5)
    assert (s.m1, s.m2, s.q) == (4, 3, 0)


def test_invalid_inputs():
    with pytest.raises(InvalidFamily):
        build_system(2, 1)
    with pytest.raises(InvalidArgument):
        build_system(0, 1)
    with pytest.raises(InvalidArgument):
        build_system(3, 2, signs=(1,))
    with pytest.raises(InvalidVariant):
        build_system(3, 2, signs=(1, -1))
    with pytest.raises(InvalidVariant):
        build_system(4, 2, variant="nope")
    with pytest.raises(InvalidVariant):
        build_system(8, 2, variant="octonion_96")


def test_dump_load_round_trip():
    s = build_system(4, 2, signs=(1, -1))
    t = load_system(dump_system(s))
    assert (t.m, t.k, t.q) == (s.m, s.k, s.q)
    for a, b in zip(s.P, t.P):
        np.testing.assert_array_equal(a, b)


def test_fault_injection_is_detected():
    s = build_system(1, 4)
    P = [p.copy() for p in s.P]
    P[1] = P[0]
    rep = verify_clifford_relations(system_from_matrices(P))
    assert not rep.passed
    assert rep.worst_pair == (0, 1)
    assert rep.max_deviation == 2
