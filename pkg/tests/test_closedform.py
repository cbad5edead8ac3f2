from fractions import Fraction

import pytest

from momentlab.closedform import (
    UNKNOWN_PIECE,
    PiecewisePolynomial,
    QuasiPolynomial,
    RangeError,
    UnsupportedError,
    I_auto,
    I_orth_closed,
    I_sym_closed,
    barnes_g,
    claimed_bound,
    closed_form_quasipolynomial,
    gamma_piece,
    interpolate,
    orth_k2_display,
    orth_k2_floor_display,
    reflect,
    sym_k1_display,
    sym_k2_display,
    validity_boundary,
)
from momentlab.ssyt import I_moment


def test_barnes():
    assert [barnes_g(k) for k in (1, 2, 3, 4, 5)] == [1, 1, 2, 12, 288]


def test_sym_examples():
    assert I_sym_closed(1, 4, 5) == 3
    assert I_sym_closed(2, 0, 3) == 1
    assert I_sym_closed(2, 1, 3) == 4


def test_orth_examples():
    assert I_orth_closed(2, 0, 3) == 2
    assert I_orth_closed(2, 1, 3) == 8
    assert I_orth_closed(2, 5, 6) == 160


def test_range_guard():
    with pytest.raises(RangeError):
        I_sym_closed(1, 2, 1)
    with pytest.raises(UnsupportedError):
        I_orth_closed(1, 0, 3)


def test_k1_fails_just_above_n_equals_N():
    # the binomial sum gives 2 at (N=1, n=2) while the true value is 1
    assert I_sym_closed(1, 2) == 2
    assert I_moment("sym", 1, 2, 1).value == 1


@pytest.mark.parametrize("k", [2, 3])
def test_closed_forms_match_tableaux(k):
    for N in range(9 if k == 2 else 7):
        for n in range(N + 1):
            assert I_sym_closed(k, n, N) == I_moment("sym", k, n, N).value
            assert I_orth_closed(k, n, N) == I_moment("orth", k, n, N).value


def test_reflect_examples():
    assert reflect("sym", 1, 5, 3) == 1
    for N in range(1, 4):
        assert reflect("sym", 2, 4 * N, N) == 1
        assert reflect("orth", 2, 2 * (2 * N + 1), N) == 2


def test_auto_dispatch_is_total():
    for ens in ("sym", "orth"):
        for N in range(4):
            top = 2 * N * 2 if ens == "sym" else (2 * N + 1) * 2
            for n in range(top + 1):
                value, _route = I_auto(ens, 2, n, N)
                assert value == I_moment(ens, 2, n, N).value


def test_transcribed_k2_displays():
    for n in range(31):
        assert sym_k2_display(n) == I_sym_closed(2, n)
        assert orth_k2_display(n) == I_orth_closed(2, n) == orth_k2_floor_display(n)


def test_k1_two_branch_display():
    for N in range(7):
        for n in range(2 * N + 1):
            assert sym_k1_display(n, N) == I_moment("sym", 1, n, N).value


@pytest.mark.parametrize("k", [1, 2, 3])
def test_symplectic_boundary_is_n_equals_N(k):
    for N in range(5):
        assert validity_boundary("sym", k, N) == N
        assert claimed_bound("sym", k, N) > N


def test_orthogonal_boundary_reported():
    for N in range(4):
        assert validity_boundary("orth", 2, N) >= N


@pytest.mark.parametrize("ens,k,d", [("sym", 2, 8), ("sym", 3, 19), ("orth", 2, 4), ("orth", 3, 13)])
def test_quasipolynomial_degree_and_positive_lead(ens, k, d):
    qp = closed_form_quasipolynomial(ens, k)
    assert qp.degree == d
    leads = qp.leading_coefficients()
    assert leads[0] == leads[1] > 0


def test_interpolate_and_quasipolynomial():
    assert interpolate([(0, 1), (1, 3), (2, 7)]) == [1, 1, 1]
    qp = QuasiPolynomial(2, ((Fraction(1), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2))))
    assert [qp(n) for n in range(6)] == [(n + 2) // 2 for n in range(6)]


def test_gamma_examples():
    assert gamma_piece("sym", 1, Fraction(1, 4)) == Fraction(1, 8)
    assert gamma_piece("sym", 2, Fraction(1, 2)) == Fraction(1, 55050240)
    assert gamma_piece("orth", 2, Fraction(1, 3)) == Fraction(1, 1944)
    assert gamma_piece("sym", 1, Fraction(3, 4)) == Fraction(1, 8)
    assert gamma_piece("sym", 2, Fraction(7, 4)) == Fraction(1, 4**8 * 215040)
    assert gamma_piece("sym", 2, 1) == UNKNOWN_PIECE
    with pytest.raises(UnsupportedError):
        gamma_piece("sym", 3, Fraction(1, 2))


def test_pieces_must_not_overlap():
    with pytest.raises(ValueError):
        PiecewisePolynomial(((0, 1, (1,)), (Fraction(1, 2), 2, (1,))))
