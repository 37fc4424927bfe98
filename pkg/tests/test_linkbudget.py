import numpy as np
import pytest

from mmwphy.errors import ConfigError, LinkBudgetError
from mmwphy.harness.config import preset_path
from mmwphy.linkbudget import (
    ArrayEnd,
    LinkBudgetScenario,
    eirp_dbm,
    eirp_limited,
    evaluate_scenarios,
    link_margin_db,
    load_required_snr_table,
    load_scenarios,
    max_link_distance,
    noise_floor_dbm,
    path_loss_db,
    rx_array_gain_db,
)


def scenario(**kw):
    base = dict(
        carrier_hz=60e9,
        bandwidth_hz=2.0736e9,
        tx=ArrayEnd(n_elements=256, pa_sat_dbm=15.4, backoff_db=4.5),
        rx=ArrayEnd(n_elements=32, nf0_db=7.0),
        required_snr_db=15.64,
    )
    base.update(kw)
    return LinkBudgetScenario(**base)


# ---------------------------------------------------------------------------
# EIRP
# ---------------------------------------------------------------------------

def test_per_element_power_values():
    dfts = scenario(tx=ArrayEnd(n_elements=1, element_gain_dbi=0.0,
                                pa_sat_dbm=15.4, backoff_db=4.5))
    ofdm = scenario(tx=ArrayEnd(n_elements=1, element_gain_dbi=0.0,
                                pa_sat_dbm=15.4, backoff_db=6.5))
    assert eirp_dbm(dfts) == pytest.approx(10.9, abs=1e-9)
    assert eirp_dbm(ofdm) == pytest.approx(8.9, abs=1e-9)


def test_eirp_coherent_array_model():
    s = scenario(tx=ArrayEnd(n_elements=256, element_gain_dbi=5.0,
                             pa_sat_dbm=15.4, backoff_db=4.5))
    assert eirp_dbm(s) == pytest.approx(10.9 + 20 * np.log10(256) + 5.0, abs=1e-9)


def test_eirp_cap():
    s = scenario(eirp_limit_dbm=40.0)
    assert eirp_dbm(s) == 40.0
    assert eirp_limited(s)
    low = scenario(tx=ArrayEnd(n_elements=8, pa_sat_dbm=15.4, backoff_db=4.5),
                   eirp_limit_dbm=40.0)
    assert not eirp_limited(low)
    assert eirp_dbm(low) == pytest.approx(10.9 + 20 * np.log10(8) + 5.0)


# ---------------------------------------------------------------------------
# Noise floor
# ---------------------------------------------------------------------------

def test_noise_floor_thermal_reference():
    s = scenario(bandwidth_hz=1.0,
                 rx=ArrayEnd(n_elements=1, nf0_db=0.0, nf_slope_db_per_ghz=0.0))
    assert noise_floor_dbm(s) == pytest.approx(-174.0, abs=1e-9)


def test_noise_floor_400mhz():
    s = scenario(bandwidth_hz=400e6,
                 rx=ArrayEnd(n_elements=1, nf0_db=0.0, nf_slope_db_per_ghz=0.0))
    assert noise_floor_dbm(s) == pytest.approx(-88.0, abs=0.1)


def test_noise_figure_slope_linear_in_bandwidth():
    nf = lambda bw: noise_floor_dbm(
        scenario(bandwidth_hz=bw,
                 rx=ArrayEnd(n_elements=1, nf0_db=0.0, nf_slope_db_per_ghz=2.0))
    ) - noise_floor_dbm(
        scenario(bandwidth_hz=bw,
                 rx=ArrayEnd(n_elements=1, nf0_db=0.0, nf_slope_db_per_ghz=0.0))
    )
    assert nf(1e9) == pytest.approx(2.0)
    assert nf(2e9) == pytest.approx(4.0)


# ---------------------------------------------------------------------------
# Path loss
# ---------------------------------------------------------------------------

def test_los_distance_exponent():
    d = 200.0
    delta = path_loss_db("umi_los", 2 * d, 60e9) - path_loss_db("umi_los", d, 60e9)
    assert delta == pytest.approx(21 * np.log10(2), abs=1e-9)


def test_los_reference_value_at_1m():
    assert path_loss_db("umi_los", 1.0, 60e9) == pytest.approx(
        32.4 + 20 * np.log10(60.0), abs=0.01
    )


def test_nlos_never_below_los():
    d = np.logspace(0, 4, 200)
    for f in (28e9, 60e9, 100e9):
        assert np.all(path_loss_db("umi_nlos", d, f) >= path_loss_db("umi_los", d, f))


def test_pathloss_clamps_below_1m():
    assert path_loss_db("umi_los", 0.2, 60e9) == path_loss_db("umi_los", 1.0, 60e9)


def test_unknown_model_rejected():
    with pytest.raises(ConfigError):
        path_loss_db("rural", 10.0, 60e9)


# ---------------------------------------------------------------------------
# Max link distance
# ---------------------------------------------------------------------------

def test_distance_matches_closed_form_inversion():
    s = scenario(gas_atten_db_per_km=0.0)
    d = max_link_distance(s)
    budget = (
        eirp_dbm(s) + rx_array_gain_db(s) - s.margins_db
        - noise_floor_dbm(s) - s.required_snr_db
    )
    oracle = 10 ** ((budget - 32.4 - 20 * np.log10(60.0)) / 21.0)
    assert d == pytest.approx(oracle, abs=0.2)


def test_margin_strictly_shrinks_distance():
    a = max_link_distance(scenario(margins_db=3.0))
    b = max_link_distance(scenario(margins_db=6.0))
    assert b < a


def test_distance_monotone_in_required_snr_and_nf():
    d0 = max_link_distance(scenario(required_snr_db=10.0))
    d1 = max_link_distance(scenario(required_snr_db=13.0))
    assert d1 < d0
    d2 = max_link_distance(scenario(rx=ArrayEnd(n_elements=32, nf0_db=10.0)))
    assert d2 < max_link_distance(scenario(rx=ArrayEnd(n_elements=32, nf0_db=7.0)))


def test_link_failing_at_1m_raises_with_deficit():
    s = scenario(required_snr_db=200.0)
    with pytest.raises(LinkBudgetError) as exc:
        max_link_distance(s)
    assert "dB" in str(exc.value)


# ---------------------------------------------------------------------------
# Scenario orderings
# ---------------------------------------------------------------------------

def _fig4_rows():
    cases = load_scenarios(preset_path("fig4"))
    rows = evaluate_scenarios(cases)
    return {(r["scenario"], r["direction"], r["waveform"]): r for r in rows}


def test_pa_limited_orderings():
    rows = _fig4_rows()
    dl_ofdm = rows[("pa-limited-16qam", "dl", "ofdm")]["distance_m"]
    dl_dfts = rows[("pa-limited-16qam", "dl", "dfts")]["distance_m"]
    ul_ofdm = rows[("pa-limited-16qam", "ul", "ofdm")]["distance_m"]
    ul_dfts = rows[("pa-limited-16qam", "ul", "dfts")]["distance_m"]
    assert dl_ofdm > ul_ofdm and dl_dfts > ul_dfts
    assert 1.05 <= dl_dfts / dl_ofdm <= 1.30
    assert 1.05 <= ul_dfts / ul_ofdm <= 1.30


def test_eirp_limited_orderings():
    rows = _fig4_rows()
    dl_ofdm = rows[("eirp-limited-16qam", "dl", "ofdm")]["distance_m"]
    dl_dfts = rows[("eirp-limited-16qam", "dl", "dfts")]["distance_m"]
    ul_dfts = rows[("eirp-limited-16qam", "ul", "dfts")]["distance_m"]
    assert abs(dl_ofdm - dl_dfts) <= 0.1
    assert ul_dfts > dl_dfts
    assert rows[("eirp-limited-16qam", "dl", "ofdm")]["limiting_factor"] == "eirp"


def test_ul_unchanged_by_cap_when_ue_stays_below_it():
    # 8-element terminal: EIRP ~34 dBm < 40 dBm cap, so the cap is inert.
    ue = ArrayEnd(n_elements=8, pa_sat_dbm=15.4, backoff_db=4.5)
    bs_rx = ArrayEnd(n_elements=256, nf0_db=5.0)
    capped = scenario(tx=ue, rx=bs_rx, eirp_limit_dbm=40.0)
    uncapped = scenario(tx=ue, rx=bs_rx, eirp_limit_dbm=None)
    assert max_link_distance(capped) == pytest.approx(
        max_link_distance(uncapped), abs=1e-6
    )


def test_required_snr_table_consistency():
    table = load_required_snr_table()
    assert table[(4, "ofdm")] == pytest.approx(15.64, abs=0.01)
    assert set(q for q, _ in table) == {2, 4, 6, 8}
