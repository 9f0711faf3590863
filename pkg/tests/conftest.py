import pytest

from crrelay import LinkTable, SystemParams, derive, table1_params
from crrelay.system import DerivedParams, one_slot_threshold, two_slot_threshold


def synth_derived(rate_p=0.4, rate_s=0.2, snr_p=100.0, snr_s=100.0,
                  snr_r=10.0, **gains) -> DerivedParams:
    """Derived-parameter table with hand-picked mean gains, for formula-level
    tests that do not need the admission chain."""
    table = {name: 1.0 for name in
             ("pp", "sp", "ps", "ss", "pr", "sr", "rp", "rs")}
    table.update(gains)
    params = SystemParams(rate_p=rate_p, rate_s=rate_s, snr_p=snr_p,
                          snr_r=snr_r, epsilon=0.05,
                          link_vars=LinkTable.uniform(1.0))
    return DerivedParams(
        theta_p=one_slot_threshold(rate_p),
        theta_s=one_slot_threshold(rate_s),
        lambda_p=two_slot_threshold(rate_p),
        lambda_s=two_slot_threshold(rate_s),
        snr_s=snr_s,
        gain=LinkTable.from_dict(table),
        params=params,
    )


@pytest.fixture
def table1():
    return table1_params(0.04)


@pytest.fixture
def table1_derived(table1):
    return derive(table1)
