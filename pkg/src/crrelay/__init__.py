"""Outage analysis, event-level simulation and power allocation for a
relay-aided underlay cognitive-radio link."""

from .allocation import (
    AllocationResult,
    RegionMap,
    allocate,
    alpha_for_primary_bound,
    common_alpha_band,
    feasibility_region,
    min_snr_r_for_epsilon,
    with_relay_snr,
)
from .analytic import (
    ConditionalOutage,
    NoSecondaryAccessError,
    OutageSummary,
    cond_outage_d1_exact,
    cond_pri_outage_d0,
    cond_sec_outage_d0,
    conditional_outages,
    noncoop_primary_outage,
    noncoop_secondary_outage,
    prob_decode_order,
    prob_relay_active,
    total_secondary_outage,
    upper_bound_d1,
)
from .harness import (
    Report,
    ResultTable,
    SweepSpec,
    compare_analytic_mc,
    default_params,
    load_config,
    reproduce,
    run_sweep,
    table1_params,
)
from .montecarlo import (
    ChannelDraw,
    OutageEstimate,
    SchemeEstimates,
    SlotOutcome,
    estimate,
    relay_decision,
    sample_channels,
    simulate_slot,
    trial_stream,
)
from .quadrature import (
    QuadratureError,
    QuadratureSpec,
    gamma_integral,
    integrate_exp_over_x,
)
from .system import (
    DerivedParams,
    LinkTable,
    SystemParams,
    db_to_linear,
    derive,
    linear_to_db,
    secondary_cutoff_snr,
)

__version__ = "0.1.0"
