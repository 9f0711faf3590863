"""Closed-form outage probabilities and upper bounds for the relay-aided
two-sub-slot protocol.

Conventions: gain_ab is the mean SNR of link a->b (transmit SNR times channel
variance), lambda_* the two-sub-slot SINR thresholds, theta_* the one-slot
thresholds.  Conditional quantities are taken given the relay activation
indicator D.  Exact forms exist for D=0 and for the relay spending all of its
power on one user (power split alpha at 0 or 1); interior splits only admit
upper bounds.
"""

import math
from dataclasses import dataclass

from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_exp_over_x
from .system import DerivedParams


class NoSecondaryAccessError(ValueError):
    """Scenario admits no secondary transmission (secondary SNR is zero)."""


@dataclass(frozen=True)
class ConditionalOutage:
    """The four conditional outage probabilities at one power split.

    d1_exact marks whether the D=1 entries are exact closed forms (power split
    exactly 0 or 1) or upper bounds (interior split).  The D=0 entries are
    always exact.
    """

    pri_d1: float
    sec_d1: float
    sec_d0: float
    pri_d0: float
    d1_exact: bool


@dataclass(frozen=True)
class OutageSummary:
    """Activation-weighted total outage probabilities.

    bound=True means total_sec is the upper-bound mixture (interior power
    split); at a split of exactly 0 or 1 both totals mix exact conditionals.
    total_pri is the symmetric primary mixture; it is a derived quantity, not
    a published closed form.
    """

    p_d1: float
    total_sec: float
    total_pri: float
    bound: bool


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


def _ratio_outage(g_sig: float, g_cross: float, threshold: float) -> float:
    """P(g_sig*E1 / (g_cross*E2 + 1) < threshold) for unit exponentials E1, E2.

    Averaging the exponential tail over the interfering gain gives
    1 - g_sig*exp(-threshold/g_sig) / (g_sig + threshold*g_cross).
    """
    if threshold == 0.0:
        return 0.0
    return _clamp01(
        1.0 - g_sig * math.exp(-threshold / g_sig) / (g_sig + threshold * g_cross)
    )


def prob_decode_order(derived: DerivedParams, first: str) -> float:
    """Probability the relay's SIC decodes the given user's signal first.

    The stronger received signal is taken first; for exponential received
    powers that order wins with probability gain_ir/(gain_ir + gain_jr).
    """
    g = derived.gain
    if not (g.pr > 0.0 and g.sr > 0.0):
        raise ValueError("decode order needs positive mean gains toward the relay")
    if first == "p":
        return g.pr / (g.pr + g.sr)
    if first == "s":
        return g.sr / (g.sr + g.pr)
    raise ValueError("first must be 'p' or 's'")


def prob_relay_active(derived: DerivedParams) -> float:
    """Probability the relay decodes both signals in either SIC order.

    Two-branch closed form: each order contributes its order probability times
    the tail probabilities of the first signal clearing
    max(lambda_first*(1+lambda_second), lambda_second) and the second clearing
    its own threshold.  Note this factorization treats the order event as
    independent of the threshold events, so it approximates the literal
    per-draw decision; the simulator is the arbiter of the exact value.
    """
    if derived.snr_s == 0.0:
        raise NoSecondaryAccessError(
            "relay activation model assumes an admitted secondary transmitter"
        )
    g = derived.gain
    if not (g.pr > 0.0 and g.sr > 0.0):
        raise ValueError("relay activation needs positive mean gains toward the relay")
    lp, ls = derived.lambda_p, derived.lambda_s
    m_p = max(lp * (1.0 + ls), ls)
    m_s = max(ls * (1.0 + lp), lp)
    p_first = (g.pr / (g.pr + g.sr)) * math.exp(-m_p / g.pr - ls / g.sr)
    s_first = (g.sr / (g.sr + g.pr)) * math.exp(-m_s / g.sr - lp / g.pr)
    return _clamp01(p_first + s_first)


def cond_sec_outage_d0(derived: DerivedParams) -> float:
    """Secondary outage when both transmitters repeat (relay silent).

    Combining the two identical copies doubles the effective signal gain, so
    this is the ratio outage at 2*gain_ss against the two-sub-slot threshold.
    """
    g = derived.gain
    if g.ss <= 0.0:
        raise ValueError("needs a positive secondary direct-link gain")
    return _ratio_outage(2.0 * g.ss, g.ps, derived.lambda_s)


def cond_pri_outage_d0(derived: DerivedParams) -> float:
    """Primary outage when both transmitters repeat; mirror of the secondary."""
    g = derived.gain
    if g.pp <= 0.0:
        raise ValueError("needs a positive primary direct-link gain")
    return _ratio_outage(2.0 * g.pp, g.sp, derived.lambda_p)


def _full_power_outage(g_sig, g_cross, g_relay, threshold,
                       spec: QuadratureSpec) -> float:
    """Outage of direct copy plus a full-power relay copy.

    P(g_sig*E1/(g_cross*E2+1) + g_relay*E3 < threshold).  Conditioning on the
    relay term and integrating the ratio tail yields a single integral of
    exp(c*x)/x over [g_sig, g_sig + threshold*g_cross]; the exponent is kept
    shifted so nothing overflows when g_relay is small.
    """
    if g_relay == 0.0:
        return _ratio_outage(g_sig, g_cross, threshold)
    c = (1.0 / g_relay - 1.0 / g_sig) / g_cross
    a = g_sig
    b = g_sig + threshold * g_cross
    shifted = integrate_exp_over_x(
        c, a, b, spec, exp_shift=-c * a - threshold / g_relay
    )
    return _clamp01(
        1.0
        - math.exp(-threshold / g_relay)
        - (g_sig / (g_cross * g_relay)) * shifted
    )


def cond_outage_d1_exact(derived: DerivedParams, user: str, alpha: float,
                         quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Exact conditional outage given an active relay, at an extreme split.

    alpha is the relay power fraction given to the primary signal and must be
    exactly 0 or 1: the user holding no relay power sees a direct-copy-only
    outage, the user holding all of it gets the direct-plus-relay form.
    """
    if alpha not in (0.0, 1.0):
        raise ValueError("exact conditional forms exist only at alpha 0 or 1")
    g = derived.gain
    if user == "primary":
        if g.pp <= 0.0 or g.sp < 0.0:
            raise ValueError("primary gains must be positive")
        if alpha == 0.0:
            return _ratio_outage(g.pp, g.sp, derived.lambda_p)
        if g.sp == 0.0:
            raise ValueError("full-power form needs a positive cross gain")
        return _full_power_outage(g.pp, g.sp, g.rp, derived.lambda_p, quad)
    if user == "secondary":
        if g.ss <= 0.0:
            raise ValueError("secondary gains must be positive")
        if alpha == 1.0:
            return _ratio_outage(g.ss, g.ps, derived.lambda_s)
        if g.ps == 0.0:
            raise ValueError("full-power form needs a positive cross gain")
        return _full_power_outage(g.ss, g.ps, g.rs, derived.lambda_s, quad)
    raise ValueError("user must be 'primary' or 'secondary'")


def primary_split_floor(lambda_p: float) -> float:
    """Smallest primary power fraction at which relay power can still help the
    primary bound: below lambda_p/(1+lambda_p) the relayed SINR term saturates
    under the threshold and the bound is split-independent."""
    return lambda_p / (1.0 + lambda_p)


def secondary_split_ceiling(lambda_s: float) -> float:
    """Largest primary power fraction at which relay power still helps the
    secondary bound; above 1/(1+lambda_s) the bound is split-independent."""
    return 1.0 / (1.0 + lambda_s)


def upper_bound_d1(derived: DerivedParams, user: str, alpha: float) -> float:
    """Upper bound on the conditional outage given an active relay.

    Valid for any split in [0, 1]; on the split-independent branch it equals
    the corresponding exact extreme-split form, on the other branch it is the
    saturating-relay-term bound.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    g = derived.gain
    if user == "primary":
        if g.pp <= 0.0:
            raise ValueError("primary direct gain must be positive")
        x = _ratio_outage(g.pp, g.sp, derived.lambda_p)
        if alpha <= primary_split_floor(derived.lambda_p) or g.rp == 0.0:
            return x
        t = alpha * (1.0 + derived.lambda_p) - derived.lambda_p
        if t <= 0.0:       # rounding right at the branch switch
            return x
        return _clamp01(x * (1.0 - math.exp(-derived.lambda_p / (g.rp * t))))
    if user == "secondary":
        if g.ss <= 0.0:
            raise ValueError("secondary direct gain must be positive")
        y = _ratio_outage(g.ss, g.ps, derived.lambda_s)
        if alpha >= secondary_split_ceiling(derived.lambda_s) or g.rs == 0.0:
            return y
        t = 1.0 - alpha * (1.0 + derived.lambda_s)
        if t <= 0.0:
            return y
        return _clamp01(y * (1.0 - math.exp(-derived.lambda_s / (g.rs * t))))
    raise ValueError("user must be 'primary' or 'secondary'")


def conditional_outages(derived: DerivedParams, alpha: float,
                        quad: QuadratureSpec = DEFAULT_QUADRATURE,
                        ) -> ConditionalOutage:
    """All four conditional outages at one split; exact where possible."""
    exact = alpha in (0.0, 1.0)
    if exact:
        pri_d1 = cond_outage_d1_exact(derived, "primary", alpha, quad)
        sec_d1 = cond_outage_d1_exact(derived, "secondary", alpha, quad)
    else:
        pri_d1 = upper_bound_d1(derived, "primary", alpha)
        sec_d1 = upper_bound_d1(derived, "secondary", alpha)
    return ConditionalOutage(
        pri_d1=pri_d1,
        sec_d1=sec_d1,
        sec_d0=cond_sec_outage_d0(derived),
        pri_d0=cond_pri_outage_d0(derived),
        d1_exact=exact,
    )


def total_secondary_outage(derived: DerivedParams, alpha: float,
                           quad: QuadratureSpec = DEFAULT_QUADRATURE,
                           ) -> OutageSummary:
    """Activation-weighted totals for both users at the given split.

    With no admitted secondary (snr_s = 0) the secondary outage is 1 by
    definition and the primary reverts to its interference-free repeat form.
    At interior splits the D=1 pieces are upper bounds, so the totals are
    upper bounds too (flagged); at splits of exactly 0 or 1 they are exact.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    g = derived.gain
    if derived.snr_s == 0.0:
        pri = 1.0 - math.exp(-derived.lambda_p / (2.0 * g.pp))
        return OutageSummary(p_d1=0.0, total_sec=1.0, total_pri=pri, bound=False)
    w = prob_relay_active(derived)
    cond = conditional_outages(derived, alpha, quad)
    return OutageSummary(
        p_d1=w,
        total_sec=_clamp01((1.0 - w) * cond.sec_d0 + w * cond.sec_d1),
        total_pri=_clamp01((1.0 - w) * cond.pri_d0 + w * cond.pri_d1),
        bound=not cond.d1_exact,
    )


def noncoop_secondary_outage(derived: DerivedParams) -> float:
    """Secondary outage of the single-slot baseline without any relay."""
    g = derived.gain
    if g.ss <= 0.0:
        raise ValueError("needs a positive secondary direct-link gain")
    return _ratio_outage(g.ss, g.ps, derived.theta_s)


def noncoop_primary_outage(derived: DerivedParams) -> float:
    """Primary outage of the single-slot baseline.

    Equals the admission threshold epsilon by construction whenever the
    secondary is admitted with a positive SNR.
    """
    g = derived.gain
    if g.pp <= 0.0:
        raise ValueError("needs a positive primary direct-link gain")
    return _ratio_outage(g.pp, g.sp, derived.theta_p)
