from collections import Counter
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from momentlab.partitions import Partition, all_partitions_in_box
from momentlab.ssyt import (
    Ensemble,
    I_moment,
    J_moment,
    J_table,
    count_ssyt,
    enumerate_shapes,
    max_degree,
    vertical_strip_coeff,
    vertical_strip_coeff_bruteforce,
)


def brute_tableaux(shape, letters):
    """Depth-first fill of every SSYT of ``shape``; yields content vectors."""
    cells = list(shape.cells())
    grid = {}

    def rec(idx):
        if idx == len(cells):
            yield tuple(sum(1 for v in grid.values() if v == a) for a in range(1, letters + 1))
            return
        i, j = cells[idx]
        lo = 1
        if j > 0:
            lo = max(lo, grid[(i, j - 1)])
        if i > 0:
            lo = max(lo, grid[(i - 1, j)] + 1)
        for v in range(lo, letters + 1):
            grid[(i, j)] = v
            yield from rec(idx + 1)
        grid.pop((i, j), None)

    yield from rec(0)


def brute_split_counts(shape, k):
    counts = Counter()
    for content in brute_tableaux(shape, 2 * k):
        counts[(sum(content[:k]), sum(content[k:]))] += 1
    return counts


def brute_J(ensemble, k, N):
    D = max_degree(ensemble, k, N)
    table = Counter()
    w = 1 if Ensemble.parse(ensemble) is Ensemble.SYMPLECTIC else 2
    for weight in range(0, 2 * D + 1, 2):
        for lam in enumerate_shapes(ensemble, k, N, weight):
            for (m, n), c in brute_split_counts(lam, k).items():
                table[(m, n)] += w * c
    return table


def test_shape_examples():
    assert enumerate_shapes("sym", 1, 1, 2) == [Partition((2,))]
    assert enumerate_shapes("sym", 1, 1, 4) == [Partition((2, 2))]
    assert enumerate_shapes("orth", 1, 1, 2) == [Partition((1, 1))]
    assert enumerate_shapes("sym", 1, 1, 3) == []


def test_shapes_satisfy_model_constraints():
    for lam in enumerate_shapes("sym", 2, 3, 12):
        assert lam.is_even() and lam.largest <= 6 and len(lam) <= 4 and lam.size == 12
    for mu in enumerate_shapes("orth", 2, 2, 12):
        assert mu.has_even_conjugate() and mu.largest <= 5 and len(mu) <= 4
    # compare against filtering the whole box
    box = [p for p in all_partitions_in_box(4, 5) if p.size == 10 and p.has_even_conjugate()]
    assert sorted(box) == sorted(enumerate_shapes("orth", 2, 2, 10))


def test_count_examples():
    assert count_ssyt(Partition((2,)), 1, 1, 1) == 1
    assert count_ssyt(Partition((2, 2)), 1, 2, 2) == 1
    assert count_ssyt(Partition((2,)), 1, 2, 0) == 1


def test_count_rejects_bad_content():
    with pytest.raises(ValueError):
        count_ssyt(Partition((2,)), 1, 1, 2)
    with pytest.raises(ValueError):
        count_ssyt(Partition((1, 1, 1)), 1, 2, 1)


@pytest.mark.parametrize("shape", [(2,), (2, 2), (4, 2), (3, 3, 1), (2, 2, 2, 2), (4, 4, 2, 2), (5, 3, 2)])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_count_matches_dfs(shape, k):
    lam = Partition(shape)
    if len(lam) > 2 * k:
        return
    brute = brute_split_counts(lam, k)
    for m in range(lam.size + 1):
        assert count_ssyt(lam, k, m, lam.size - m) == brute.get((m, lam.size - m), 0)


def test_moment_examples():
    assert I_moment("sym", 1, 4, 5).value == 3
    assert I_moment("sym", 2, 0, 3).value == 1
    assert I_moment("orth", 2, 1, 3).value == 8
    assert I_moment("orth", 2, 0, 3).value == 2
    assert J_moment("sym", 1, 0, 0, 2) == 1
    assert J_moment("sym", 1, 1, 1, 2) == 1
    assert J_moment("sym", 1, 2, 0, 2) == 1


def test_k1_orthogonal_is_two_not_zero():
    # shape (n, n) contributes exactly one tableau for every n <= 2N+1
    for N in range(4):
        assert [I_moment("orth", 1, n, N).value for n in range(2 * N + 2)] == [2] * (2 * N + 2)


def test_vanishes_beyond_top_degree():
    assert I_moment("sym", 2, 2 * 2 * 2 + 1, 2).value == 0
    assert I_moment("orth", 2, 2 * 5 + 1, 2).value == 0


@pytest.mark.parametrize("ens,k,N", [(e, k, N) for e in ("sym", "orth") for k in (1, 2) for N in (0, 1, 2)]
                         + [("sym", 3, 1), ("orth", 3, 1)])
def test_table_matches_brute_schur(ens, k, N):
    table = J_table(ens, k, N)
    brute = brute_J(ens, k, N)
    D = max_degree(ens, k, N)
    for m in range(D + 1):
        for n in range(D + 1):
            assert table[m][n] == brute.get((m, n), 0), (m, n)


@pytest.mark.parametrize("ens", ["sym", "orth"])
def test_table_agrees_with_pointwise(ens):
    table = J_table(ens, 2, 2)
    for m in range(len(table)):
        for n in range(len(table)):
            assert table[m][n] == J_moment(ens, 2, m, n, 2)


@pytest.mark.parametrize("ens", ["sym", "orth"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_functional_equation_and_symmetry(ens, k):
    for N in range(0, 5 if k < 3 else 4):
        T = J_table(ens, k, N)
        D = len(T) - 1
        for n in range(D + 1):
            assert T[n][n] == T[D - n][D - n]
        for m in range(D + 1):
            for n in range(m):
                assert T[m][n] == T[n][m]


def test_k1_symplectic_floor_formula():
    for N in range(7):
        for n in range(2 * N + 1):
            expected = (n + 2) // 2 if n <= N else (2 * N - n + 2) // 2
            assert I_moment("sym", 1, n, N).value == expected


def test_k2_small_n_binomial_sum():
    # n <= N: C(l+3,3) summed over l = n mod 2 with squared weights C((n-l)/2+2, 2)
    for n in range(6):
        expected = sum(comb((n - l) // 2 + 2, 2) ** 2 * comb(l + 3, 3) for l in range(n % 2, n + 1, 2))
        assert I_moment("sym", 2, n, 6).value == expected


def test_vertical_strip_examples():
    assert vertical_strip_coeff(Partition((2, 2)), 2) == 1
    assert vertical_strip_coeff(Partition((1,)), 2) == 0
    assert vertical_strip_coeff(Partition(()), 0) == 1


def test_vertical_strip_paths_agree_exhaustively():
    for N in range(4):
        for size in range(11):
            for mu in all_partitions_in_box(size, size):
                if mu.size != size:
                    continue
                assert vertical_strip_coeff(mu, N) == vertical_strip_coeff_bruteforce(mu, N), (mu, N)


def test_vertical_strip_forced_row_sign():
    # a single odd-multiplicity row of length 2N+1 must shrink, so the sign flips
    assert vertical_strip_coeff_bruteforce(Partition((1,)), 0) == 1
    assert vertical_strip_coeff(Partition((1,)), 0) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=0, max_size=4).map(lambda xs: Partition(tuple(sorted(xs, reverse=True)))))
def test_conjugation_properties(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().size == lam.size
