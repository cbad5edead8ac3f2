import warnings
from fractions import Fraction

import numpy as np
import pytest

from momentlab.closedform import gamma_piece
from momentlab.ehrhart import (
    FitFailure,
    admissible,
    build_model,
    ehrhart_samples,
    fit_gamma,
    fit_quasi_polynomial,
    gamma_from_fit,
    gamma_mc_integral,
    lattice_count,
    lattice_moment,
    lattice_points,
    parse_rational,
)
from momentlab.ssyt import I_moment

HALF = Fraction(1, 2)


def test_count_examples():
    assert lattice_count(build_model("sym", 1, HALF), 8) == 3
    assert lattice_count(build_model("sym", 1, HALF), 2) == 1
    assert lattice_count(build_model("orth", 2, Fraction(1, 3)), 3) == 4


def test_divisibility_is_enforced():
    with pytest.raises(ValueError):
        lattice_count(build_model("sym", 1, Fraction(1, 4)), 6)
    with pytest.raises(ValueError):
        lattice_count(build_model("orth", 2, Fraction(1, 3)), 6)
    assert not admissible("sym", HALF, 3)
    assert admissible("orth", Fraction(1, 3), 9)


def test_model_dimension():
    for k in (1, 2, 3):
        assert build_model("sym", k, HALF).dimension == 2 * k * k + k - 2
    for k in (2, 3):
        assert build_model("orth", k, HALF).dimension == 2 * k * k - k - 2


@pytest.mark.parametrize("ens,k,c,dilate", [
    ("sym", 1, HALF, 6), ("sym", 2, HALF, 4), ("sym", 2, Fraction(1, 4), 4),
    ("orth", 2, Fraction(1, 3), 3), ("orth", 2, Fraction(2, 3), 3), ("orth", 3, Fraction(1, 1), 3),
])
def test_enumerated_points_satisfy_inequalities(ens, k, c, dilate):
    model = build_model(ens, k, c)
    points = list(lattice_points(model, dilate))
    assert len(points) == lattice_count(model, dilate)
    assert len({tuple(sorted(p.items())) for p in points}) == len(points)
    for p in points:
        assert model.contains(p, dilate)
        for u in model.even_coords:
            assert p[u] % 2 == 0
        full = model.resolve(p, dilate)
        assert all(0 <= v <= dilate for v in full.values())


def test_cube_contains_region():
    model = build_model("sym", 2, HALF)
    outside = {u: 0 for u in model.free}
    outside[model.free[0]] = 2
    assert not model.contains(outside, 1)


@pytest.mark.parametrize("ens", ["sym", "orth"])
@pytest.mark.parametrize("k", [1, 2])
def test_lattice_matches_tableaux(ens, k):
    # independent implementations: nested interlacing loops versus tableau counting
    for N in range(0, 12 if k == 1 else 6):
        top = 2 * N * k if ens == "sym" else (2 * N + 1) * k
        for n in range(top + 1):
            assert lattice_moment(ens, k, n, N) == I_moment(ens, k, n, N).value


def test_lattice_matches_tableaux_k3_small():
    for N in range(2):
        for n in range(2 * N * 3 + 1):
            assert lattice_moment("sym", 3, n, N) == I_moment("sym", 3, n, N).value
        for n in range((2 * N + 1) * 3 + 1):
            assert lattice_moment("orth", 3, n, N) == I_moment("orth", 3, n, N).value


def test_count_equals_moment_at_admissible_dilates():
    model = build_model("sym", 2, HALF)
    for N in range(1, 13):
        assert lattice_count(model, 2 * N) == I_moment("sym", 2, N, N).value
    model = build_model("orth", 2, Fraction(1, 3))
    for M in (3, 9, 15, 21):
        assert 2 * lattice_count(model, M) == I_moment("orth", 2, M // 3, (M - 1) // 2).value


def test_fit_examples():
    fit = fit_quasi_polynomial([(n, (n + 2) // 2) for n in range(8)], 1, 2)
    assert fit.classes[0] == (Fraction(1), HALF)
    assert fit.classes[1] == (Fraction(1, 2), HALF)
    const = fit_quasi_polynomial([(n, 2) for n in range(4)], 0, 1)
    assert const.classes == ((Fraction(2),),)


def test_fit_failure_reports_residual():
    with pytest.raises(FitFailure) as info:
        fit_quasi_polynomial([(n, n * n) for n in range(5)], 1, 1)
    assert info.value.residual == 2


def test_fit_needs_enough_samples():
    with pytest.raises(ValueError):
        fit_quasi_polynomial([(0, 1), (2, 1)], 1, 2)


def test_k2_symplectic_leading_coefficient_in_N():
    samples = ehrhart_samples("sym", 2, HALF, range(1, 21))
    fit = fit_quasi_polynomial(samples, 8, 2)
    assert fit.leading_coefficients() == [Fraction(1, 215040)] * 2


@pytest.mark.parametrize("ens,k,c,mult", [
    ("sym", 1, HALF, range(1, 9)),
    ("sym", 1, Fraction(1, 4), range(1, 9)),
    ("orth", 2, Fraction(1, 3), range(1, 19, 2)),
])
def test_gamma_recovery_small(ens, k, c, mult):
    gamma, _ = fit_gamma(ens, k, c, mult)
    assert gamma == gamma_piece(ens, k, c)


@pytest.mark.parametrize("ens,k,c,mult,d", [
    ("sym", 2, HALF, range(1, 21), 8),
    ("orth", 2, Fraction(1, 3), range(1, 19, 2), 4),
])
def test_degree_witness(ens, k, c, mult, d):
    samples = ehrhart_samples(ens, k, c, mult)
    fit_quasi_polynomial(samples, d, 2)
    with pytest.raises(FitFailure):
        fit_quasi_polynomial(samples, d - 1, 2)


def test_gamma_from_fit_rejects_wrong_degree():
    fit = fit_quasi_polynomial(ehrhart_samples("sym", 1, HALF, range(1, 9)), 1, 2)
    assert gamma_from_fit("sym", 1, HALF, fit) == Fraction(1, 4)
    with pytest.raises(ValueError):
        gamma_from_fit("sym", 2, HALF, fit)


def test_parse_rational():
    assert parse_rational("1/3") == Fraction(1, 3)
    with pytest.raises(ValueError):
        parse_rational("one third")


@pytest.mark.parametrize("ens,k,c,exact", [
    ("sym", 1, 0.25, 0.125),
    ("sym", 2, 0.5, 1 / 55050240),
    ("orth", 2, 1 / 3, 1 / 1944),
])
def test_gamma_mc_matches(ens, k, c, exact):
    est = gamma_mc_integral(ens, k, c, 20_000, seed=7)
    assert est.within(exact)


def test_gamma_mc_rejection_sampler_where_feasible():
    assert gamma_mc_integral("sym", 1, 0.25, 20_000, seed=3, method="rejection").within(0.125)
    assert gamma_mc_integral("orth", 2, 1 / 3, 50_000, seed=3, method="rejection").within(1 / 1944)


def test_gamma_mc_is_reproducible_and_stream_split():
    a = gamma_mc_integral("orth", 2, 1 / 3, 10_000, seed=11, streams=3)
    b = gamma_mc_integral("orth", 2, 1 / 3, 10_000, seed=11, streams=3)
    assert a == b
    c = gamma_mc_integral("orth", 2, 1 / 3, 10_000, seed=11, streams=1)
    assert c != a


@pytest.mark.parametrize("ens,k,c", [("sym", 1, 0.25), ("sym", 2, 0.5), ("orth", 2, 1 / 3), ("orth", 3, 0.8)])
def test_sequential_draws_lie_in_region(ens, k, c):
    from momentlab.ehrhart import _sequential_draw
    from momentlab.ssyt import Ensemble

    e = Ensemble.parse(ens)
    cols = {}
    vals = _sequential_draw(e, k, c, 2000, np.random.default_rng(0), cols)
    live = vals > 0
    assert live.mean() > 0.5
    top = max(cols)
    eps = 1e-12
    assert np.allclose(cols[k][live].sum(axis=1), c)
    if e is Ensemble.SYMPLECTIC:
        assert np.allclose(cols[top][live].sum(axis=1), 2 * c)
    else:
        assert np.allclose(cols[top][live][:, 0::2].sum(axis=1), c)
    for s in range(k, top + 1):
        block = cols[s][live]
        assert np.all(block >= -eps) and np.all(block <= 1 + eps)
    for s in range(k, top):
        a, b = cols[s][live], cols[s + 1][live]
        assert np.all(b[:, 1:] <= a + eps) and np.all(a <= b[:, :-1] + eps)


def test_gamma_mc_degenerate_region_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        est = gamma_mc_integral("sym", 2, 1.9999, 1000, seed=1, method="rejection")
    assert est.mean == 0.0
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)


def test_gamma_mc_rejects_bad_c():
    with pytest.raises(ValueError):
        gamma_mc_integral("sym", 1, 1.5, 1000, seed=1)
