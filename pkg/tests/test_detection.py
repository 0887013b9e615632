import numpy as np
import pytest
from hypothesis import given, strategies as st

from csi.detection import (
    SinglesRates, invert_rates, invert_table, sign_flipped_radicand, simulate_counts, singles_rates, table_rates,
)
from csi.errors import InconsistentRatesError


@pytest.mark.parametrize("a,rates", [(0, (1, 1)), (1, (2, 2)), (1j, (4, 0))])
def test_forward_examples(a, rates):
    r = singles_rates(a)
    assert (r.n_plus, r.n_minus) == pytest.approx(rates, abs=1e-15)


@pytest.mark.parametrize("rates,re,im", [((4, 0), 0, 1), ((2, 2), 1, 0), ((1, 1), 0, 0)])
def test_inverse_examples(rates, re, im):
    rec = invert_rates(SinglesRates(*rates))
    assert rec.re_magnitude == pytest.approx(re, abs=1e-15)
    assert rec.im == pytest.approx(im, abs=1e-15)
    assert rec.sign_ambiguous


def seeded_amplitudes(n=1000, seed=2024):
    rng = np.random.Generator(np.random.Philox(key=seed))
    rad = np.sqrt(rng.random(n))
    phi = rng.uniform(-np.pi / 2, np.pi / 2, n)
    return rad * np.exp(1j * phi)


def test_round_trip_thousand_seeded():
    for a in seeded_amplitudes():
        rec = invert_rates(singles_rates(a))
        assert rec.im == pytest.approx(a.imag, abs=1e-12)
        assert rec.re_magnitude == pytest.approx(a.real, abs=1e-12)


@given(re=st.floats(-1, 1), im=st.floats(-1, 1))
def test_imaginary_part_exact_for_any_sign(re, im):
    a = complex(re, im)
    r = singles_rates(a)
    rec = invert_rates(r)
    assert rec.im == pytest.approx(im, abs=1e-12)
    assert rec.re_magnitude == pytest.approx(abs(re), abs=1e-7)
    assert a in [pytest.approx(c, abs=1e-7) for c in rec.candidates()]
    assert r.n_plus - 2 * rec.im - 1 == pytest.approx(abs(a) ** 2, abs=1e-12)


def test_sign_flipped_radicand_does_not_round_trip():
    amps = seeded_amplitudes()
    bad = 0
    for a in amps:
        r = singles_rates(a)
        rad = sign_flipped_radicand(r.n_plus, r.n_minus)
        if rad < 0 or abs(np.sqrt(rad) - a.real) > 1e-6:
            bad += 1
    assert bad > 900


def test_infeasible_rates():
    with pytest.raises(InconsistentRatesError):
        invert_rates(SinglesRates(0.5, 0.5))
    with pytest.raises(ValueError):
        SinglesRates(-1.0, 1.0)


def test_vectorized_inversion():
    a = seeded_amplitudes(50)
    re, im = invert_table(np.abs(a + 1j) ** 2, np.abs(1j * a + 1) ** 2)
    np.testing.assert_allclose(re, a.real, atol=1e-12)
    np.testing.assert_allclose(im, a.imag, atol=1e-12)


def test_table_rates_shape(small_grid):
    from csi.amplitudes import compute_table
    from csi.scene import make_shape

    t = compute_table(make_shape("disc:0"), 2, 1, small_grid)
    n_plus, n_minus = table_rates(t)
    assert n_plus.shape == t.values.shape
    # identity entries: a = 1 on the diagonal, 0 elsewhere
    assert n_plus[2, 0, 2, 0] == pytest.approx(2.0, abs=1e-6)
    assert n_plus[2, 0, 3, 0] == pytest.approx(1.0, abs=1e-6)


def test_counts_zero_rate_and_determinism():
    for seed in range(5):
        assert simulate_counts(SinglesRates(0.0, 3.0), 10_000, seed)[0] == 0
    assert simulate_counts(SinglesRates(2, 2), 1000, 9) == simulate_counts(SinglesRates(2, 2), 1000, 9)
    with pytest.raises(ValueError):
        simulate_counts(SinglesRates(1, 1), 0, 0)


def test_counts_concentrate():
    plus, minus = simulate_counts(SinglesRates(2.0, 2.0), 10**8, seed=0)
    # each arm has mean 5e7, so the ratio has sigma ~2e-4; 3 sigma is 6e-4
    assert abs(plus / minus - 1) < 6e-4
    assert (plus, minus) == simulate_counts(SinglesRates(2.0, 2.0), 10**8, seed=0)
