import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sc3loop.errors import DomainError
from sc3loop.link import LinkBudget, PathLossParams, channel_gain, dbm_to_watts, path_loss_db, shannon_rate

REF_GAIN = 10 ** (-(32.4 + 20 * math.log10(2000)) / 10)
REF_N0 = 10 ** (-20.4)


@pytest.mark.parametrize(
    "fc, d, expected",
    [(2000, 1, 98.42059991327962), (1, 1, 32.4), (2000, 10, 118.42059991327962)],
)
def test_path_loss_db(fc, d, expected):
    assert path_loss_db(PathLossParams(fc, d)) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("fc, d", [(0, 1), (2000, 0), (-5, 1)])
def test_path_loss_rejects_nonpositive(fc, d):
    with pytest.raises(DomainError):
        PathLossParams(fc, d)


def test_channel_gain():
    assert channel_gain(0) == 1.0
    assert channel_gain(10) == pytest.approx(0.1)
    assert channel_gain(98.4206) == pytest.approx(1.4385e-10, rel=1e-4)


def test_noise_density_unit_conversion():
    # -174 dBm/Hz = 10^-17.4 mW/Hz = 10^-20.4 W/Hz
    assert dbm_to_watts(-174) == pytest.approx(10 ** (-20.4), rel=1e-14)


def test_from_path_loss_matches_manual_chain():
    link = LinkBudget.from_path_loss(0.1, 2000, 1, -174)
    assert link.channel_gain == pytest.approx(REF_GAIN, rel=1e-14)
    assert link.n0 == pytest.approx(REF_N0, rel=1e-14)


def test_rate_zero_power_or_bandwidth():
    assert shannon_rate(0, REF_GAIN, REF_N0, 5e5) == 0
    assert shannon_rate(0.1, REF_GAIN, REF_N0, 0) == 0


def test_rate_reference_uplink_half_band():
    snr = 0.1 * REF_GAIN / (5e5 * REF_N0)
    assert snr == pytest.approx(7224, rel=1e-3)
    expected = 5e5 * math.log2(1 + snr)
    got = shannon_rate(0.1, REF_GAIN, REF_N0, 5e5)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got == pytest.approx(6.41e6, rel=1e-3)


def test_rate_vectorized():
    bws = np.array([0.0, 2.5e5, 5e5])
    rates = shannon_rate(0.1, REF_GAIN, REF_N0, bws)
    assert rates.shape == (3,)
    assert rates[0] == 0
    assert rates[2] == pytest.approx(shannon_rate(0.1, REF_GAIN, REF_N0, 5e5))


def test_rate_errors():
    with pytest.raises(DomainError):
        shannon_rate(1.0, 1.0, 0.0, 1e6)
    with pytest.raises(DomainError):
        shannon_rate(-1.0, 1.0, 1e-20, 1e6)


def test_doubling_bandwidth_increases_rate():
    assert shannon_rate(0.1, REF_GAIN, REF_N0, 1e6) > shannon_rate(0.1, REF_GAIN, REF_N0, 5e5)


def test_wideband_limit():
    s = 0.1 * REF_GAIN / REF_N0
    limit = s / math.log(2)
    assert shannon_rate(0.1, REF_GAIN, REF_N0, 1e6 * s) == pytest.approx(limit, rel=0.01)


def test_link_budget_validation():
    with pytest.raises(DomainError):
        LinkBudget(0, 1, 1)
    with pytest.raises(DomainError):
        LinkBudget(1, -1, 1)


snr_scale = st.floats(1e2, 1e10)
bandwidths = st.floats(1e2, 1e8)


@settings(max_examples=200, deadline=None)
@given(signal=snr_scale, a=bandwidths, b=bandwidths)
def test_rate_midpoint_concave_in_bandwidth(signal, a, b):
    # signal = p * gain / n0 in Hz
    r = lambda bw: shannon_rate(signal, 1.0, 1.0, bw)
    assert r((a + b) / 2) >= (r(a) + r(b)) / 2 * (1 - 1e-12)


@settings(max_examples=200, deadline=None)
@given(signal=snr_scale, a=bandwidths, b=bandwidths)
def test_rate_increasing_in_bandwidth(signal, a, b):
    lo, hi = sorted((a, b))
    if hi > lo * (1 + 1e-9):
        assert shannon_rate(signal, 1.0, 1.0, hi) > shannon_rate(signal, 1.0, 1.0, lo)


@settings(max_examples=200, deadline=None)
@given(p1=st.floats(1e-3, 1e2), p2=st.floats(1e-3, 1e2), bw=bandwidths)
def test_rate_increasing_in_power(p1, p2, bw):
    lo, hi = sorted((p1, p2))
    if hi > lo * (1 + 1e-9):
        assert shannon_rate(hi, REF_GAIN, REF_N0, bw) > shannon_rate(lo, REF_GAIN, REF_N0, bw)


def test_rate_vectorized_gain():
    gains = np.array([REF_GAIN, 2 * REF_GAIN])
    rates = shannon_rate(0.1, gains, REF_N0, 5e5)
    assert rates[1] > rates[0]
    assert rates[0] == pytest.approx(shannon_rate(0.1, REF_GAIN, REF_N0, 5e5))
