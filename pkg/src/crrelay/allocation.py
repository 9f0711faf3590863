"""Relay power allocation: pick the split alpha and relay SNR that minimize
the secondary outage bound subject to the primary outage staying within the
admission threshold.

The primary bound is invertible in closed form on its split-dependent branch,
which seeds a small grid search; the grid only refines around feasibility
edges and keeps the runtime trivial.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .analytic import (
    cond_sec_outage_d0,
    primary_split_floor,
    prob_relay_active,
    secondary_split_ceiling,
    upper_bound_d1,
    _ratio_outage,
)
from .system import DerivedParams, SystemParams, db_to_linear, derive, two_slot_threshold


@dataclass(frozen=True)
class AllocationResult:
    """Chosen operating point.  On infeasible scenarios alpha/snr_r/u_p are
    NaN and the secondary outage is reported as 1."""

    alpha: float
    snr_r: float
    u_p: float
    u_s_total: float
    feasible: bool


@dataclass(frozen=True)
class RegionMap:
    """Feasibility structure of the two outage bounds over rates and splits.

    region1[i, k]: split alpha_grid[k] can still improve the primary bound at
    rate_p_grid[i] (split at or above its floor).  region2[j, k]: the split
    can still improve the secondary bound at rate_s_grid[j] (at or below its
    ceiling).  common[i, j]: the two branches overlap for the rate pair, i.e.
    a split exists that leaves both bounds improvable.
    """

    rate_p_grid: tuple
    rate_s_grid: tuple
    alpha_grid: tuple
    region1: np.ndarray
    region2: np.ndarray
    common: np.ndarray


def rate_p_at_split_floor(alpha: float) -> float:
    """Primary rate whose split floor sits exactly at the given alpha."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    return 0.5 * math.log2(1.0 / (1.0 - alpha))


def rate_s_at_split_ceiling(alpha: float) -> float:
    """Secondary rate whose split ceiling sits exactly at the given alpha."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    return 0.5 * math.log2(1.0 / alpha)


def common_alpha_band(rate_p: float, rate_s: float):
    """Split interval on which both bounds remain improvable, or None.

    Nonempty exactly when the product of the two-sub-slot thresholds is at
    most 1, which is what confines good operating points to rates below about
    half a bit/s/Hz each.
    """
    lo = primary_split_floor(two_slot_threshold(rate_p))
    hi = secondary_split_ceiling(two_slot_threshold(rate_s))
    if lo > hi:
        return None
    return (lo, hi)


def with_relay_snr(derived: DerivedParams, snr_r: float) -> DerivedParams:
    """Re-point the derived table at a different relay SNR (cheap: only the
    relay-side gains change; the admitted secondary SNR does not involve the
    relay)."""
    if snr_r < 0.0:
        raise ValueError("snr_r must be nonnegative")
    v = derived.params.link_vars
    return replace(
        derived,
        gain=replace(derived.gain, rp=snr_r * v.rp, rs=snr_r * v.rs),
        params=derived.params.with_snr_r(snr_r),
    )


def alpha_for_primary_bound(derived: DerivedParams, epsilon: float,
                            snr_r: float | None = None):
    """Smallest split meeting the primary bound at the given relay SNR.

    Inverts the split-dependent branch of the primary bound exactly.  If the
    bound already holds with no relay help (epsilon >= direct-copy bound X),
    returns the split floor; if even full relay power cannot reach epsilon,
    returns None.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if snr_r is None:
        snr_r = derived.params.snr_r
    g_rp = snr_r * derived.params.link_vars.rp
    lam = derived.lambda_p
    x = _ratio_outage(derived.gain.pp, derived.gain.sp, lam)
    floor = primary_split_floor(lam)
    if epsilon >= x:
        return floor
    if g_rp == 0.0:
        return None
    log_gap = -math.log1p(-epsilon / x)
    alpha = (lam + lam / (g_rp * log_gap)) / (1.0 + lam)
    if alpha > 1.0:
        return None
    return alpha


def min_snr_r_for_epsilon(derived: DerivedParams, alpha: float,
                          epsilon: float) -> float:
    """Smallest relay SNR meeting the primary bound at the given split.

    Only defined strictly above the split floor, where the bound actually
    responds to relay power; returns 0 when the bound holds without it.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    lam = derived.lambda_p
    floor = primary_split_floor(lam)
    if not floor < alpha <= 1.0:
        raise ValueError("alpha must lie strictly above the split floor and at most 1")
    x = _ratio_outage(derived.gain.pp, derived.gain.sp, lam)
    if epsilon >= x:
        return 0.0
    log_gap = -math.log1p(-epsilon / x)
    t = alpha * (1.0 + lam) - lam
    if t <= 0.0:       # alpha rounded onto the branch switch
        raise ValueError("alpha must lie strictly above the split floor")
    g_rp = lam / (t * log_gap)
    return g_rp / derived.params.link_vars.rp


def default_snr_r_grid(lo_db: float = -10.0, hi_db: float = 30.0,
                       step_db: float = 0.25) -> tuple:
    """Logarithmic relay-SNR grid (linear values)."""
    n = int(round((hi_db - lo_db) / step_db))
    return tuple(db_to_linear(lo_db + k * step_db) for k in range(n + 1))


def default_alpha_grid(lambda_p: float, step: float = 0.005) -> tuple:
    """Split grid from the primary split floor up to 1."""
    floor = primary_split_floor(lambda_p)
    pts = [floor]
    k = 1
    while floor + k * step < 1.0:
        pts.append(floor + k * step)
        k += 1
    pts.append(1.0)
    return tuple(pts)


def allocate(params: SystemParams, epsilon: float | None = None,
             snr_r_grid=None, alpha_grid=None) -> AllocationResult:
    """Minimize the total secondary outage bound subject to the primary bound.

    Evaluates the activation-weighted secondary bound over the feasible grid
    points, seeding each relay SNR with the exact closed-form split; ties go
    to the smaller relay SNR, then the smaller split.  Feasibility of the
    winner is re-checked against the primary bound, never assumed.
    """
    if epsilon is None:
        epsilon = params.epsilon
    else:
        params = params.with_epsilon(epsilon)
    derived = derive(params)
    if derived.snr_s == 0.0:
        return AllocationResult(alpha=math.nan, snr_r=math.nan, u_p=math.nan,
                                u_s_total=1.0, feasible=False)
    if snr_r_grid is None:
        snr_r_grid = default_snr_r_grid()
    if alpha_grid is None:
        alpha_grid = default_alpha_grid(derived.lambda_p)
    if len(snr_r_grid) == 0 or len(alpha_grid) == 0:
        raise ValueError("grids must be nonempty")

    w = prob_relay_active(derived)     # independent of the relay SNR
    sec_d0 = cond_sec_outage_d0(derived)

    grid = sorted(a for a in alpha_grid if 0.0 <= a <= 1.0)
    if not grid:
        raise ValueError("alpha grid has no points in [0, 1]")
    lo, hi = grid[0], grid[-1]

    best = None   # (u_s_total, snr_r, alpha, u_p)
    for snr_r in sorted(snr_r_grid):
        d_r = with_relay_snr(derived, snr_r)
        seed_alpha = alpha_for_primary_bound(d_r, epsilon)
        candidates = list(grid)
        if seed_alpha is not None:
            # refine within the caller's grid hull; the exact inverse can
            # overshoot epsilon by an ulp, so keep a nudged twin too
            extra = {seed_alpha, min(1.0, seed_alpha + 1e-9)}
            candidates = sorted(set(grid) | {a for a in extra if lo <= a <= hi})
        for alpha in candidates:
            u_p = upper_bound_d1(d_r, "primary", alpha)
            if u_p > epsilon:
                continue
            u_s = (1.0 - w) * sec_d0 + w * upper_bound_d1(d_r, "secondary", alpha)
            if best is None or u_s < best[0]:
                best = (u_s, snr_r, alpha, u_p)

    if best is None:
        return AllocationResult(alpha=math.nan, snr_r=math.nan, u_p=math.nan,
                                u_s_total=1.0, feasible=False)
    u_s, snr_r, alpha, u_p = best
    return AllocationResult(alpha=alpha, snr_r=snr_r, u_p=u_p,
                            u_s_total=u_s, feasible=u_p <= epsilon)


def feasibility_region(params_template: SystemParams, rate_p_grid,
                       rate_s_grid, alpha_grid=None) -> RegionMap:
    """Region map over rate grids and splits.

    The structure depends only on the rates (the bounds' branch points);
    params_template is accepted for interface symmetry with the sweep runner.
    """
    del params_template
    if len(rate_p_grid) == 0 or len(rate_s_grid) == 0:
        raise ValueError("rate grids must be nonempty")
    if alpha_grid is None:
        alpha_grid = tuple(np.linspace(0.0, 1.0, 201))
    floors = np.array([primary_split_floor(two_slot_threshold(r))
                       for r in rate_p_grid])
    ceilings = np.array([secondary_split_ceiling(two_slot_threshold(r))
                         for r in rate_s_grid])
    alphas = np.asarray(alpha_grid, dtype=float)
    return RegionMap(
        rate_p_grid=tuple(rate_p_grid),
        rate_s_grid=tuple(rate_s_grid),
        alpha_grid=tuple(alphas),
        region1=alphas[None, :] >= floors[:, None],
        region2=alphas[None, :] <= ceilings[:, None],
        common=floors[:, None] <= ceilings[None, :],
    )
