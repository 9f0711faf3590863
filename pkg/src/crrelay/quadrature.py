"""Tolerance-controlled integration of exp(c*x)/x over a positive interval.

The closed-form outage expressions for full relay power contain an integral of
this family whose value is a difference of exponential integrals.  Rather than
pulling in a special-function dependency, the integrand (smooth on the strictly
positive intervals that ever occur) is handled by adaptive Simpson refinement
with a log fast path at c = 0.
"""

import math
from dataclasses import dataclass

from .system import DerivedParams


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and a refinement cap for the adaptive rule."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 60

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadratureError(RuntimeError):
    """Raised when the refinement cap is hit before meeting the tolerance."""


def integrate_exp_over_x(c: float, a: float, b: float,
                         spec: QuadratureSpec = DEFAULT_QUADRATURE,
                         exp_shift: float = 0.0) -> float:
    """Integrate exp(c*x + exp_shift)/x over [a, b].

    Requires 0 < a <= b so the 1/x singularity is never inside the interval.
    exp_shift folds a constant into the exponent, which keeps the outage
    formulas finite when exp(c*b) alone would overflow; the default computes
    the plain integral of exp(c*x)/x.
    """
    if not (math.isfinite(c) and math.isfinite(a) and math.isfinite(b)):
        raise ValueError("c, a, b must be finite")
    if not 0.0 < a <= b:
        raise ValueError("need 0 < a <= b")
    if a == b:
        return 0.0
    if c == 0.0:
        return math.exp(exp_shift) * math.log(b / a)

    def f(x):
        return math.exp(c * x + exp_shift) / x

    return _adaptive_simpson(f, a, b, spec)


def gamma_integral(kind: str, derived: DerivedParams,
                   spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """The interference-averaging integral of the full-relay-power outage form.

    kind="primary" integrates over [gain_pp, gain_pp + lambda_p*gain_sp] with
    exponent coefficient (1/gain_rp - 1/gain_pp)/gain_sp; kind="secondary" is
    the role-swapped twin.
    """
    g = derived.gain
    if kind == "primary":
        sig, cross, relay, thr = g.pp, g.sp, g.rp, derived.lambda_p
    elif kind == "secondary":
        sig, cross, relay, thr = g.ss, g.ps, g.rs, derived.lambda_s
    else:
        raise ValueError("kind must be 'primary' or 'secondary'")
    if not (sig > 0.0 and cross > 0.0 and relay > 0.0):
        raise ValueError("referenced mean gains must be positive")
    c = (1.0 / relay - 1.0 / sig) / cross
    a = sig
    b = sig + thr * cross
    return integrate_exp_over_x(c, a, b, spec)


_MIN_DEPTH = 6   # splits forced before acceptance; guards peaked integrands


def _refine(f, a, b, fa, fm, fb, whole, tol0, spec: QuadratureSpec) -> float:
    """One adaptive pass: split until the two-panel vs one-panel difference is
    within 15x of the local budget, then apply the Richardson correction.
    The budget halves per split; acceptance also waits out a minimum depth so
    a narrow peak cannot slip through a crude first estimate."""
    min_depth = min(_MIN_DEPTH, spec.max_depth)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol0, 0)]
    while stack:
        a0, b0, f0, f1, f2, s, tol, depth = stack.pop()
        m0 = 0.5 * (a0 + b0)
        lm = 0.5 * (a0 + m0)
        rm = 0.5 * (m0 + b0)
        flm, frm = f(lm), f(rm)
        left = (m0 - a0) / 6.0 * (f0 + 4.0 * flm + f1)
        right = (b0 - m0) / 6.0 * (f1 + 4.0 * frm + f2)
        err = left + right - s
        if depth >= min_depth and abs(err) <= 15.0 * tol:
            total += left + right + err / 15.0
        elif depth >= spec.max_depth:
            raise QuadratureError(
                f"no convergence on [{a0}, {b0}] at depth {depth}"
            )
        else:
            half = 0.5 * tol
            stack.append((a0, m0, f0, flm, f1, left, half, depth + 1))
            stack.append((m0, b0, f1, frm, f2, right, half, depth + 1))
    return total


def _adaptive_simpson(f, a, b, spec: QuadratureSpec) -> float:
    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol0 = max(spec.abs_tol, spec.rel_tol * abs(whole))
    total = _refine(f, a, b, fa, fm, fb, whole, tol0, spec)
    # the crude whole-interval estimate can badly misjudge the magnitude;
    # re-anchor the relative tolerance on the refined value when it does
    tol1 = max(spec.abs_tol, spec.rel_tol * abs(total))
    if tol0 > 4.0 * tol1:
        total = _refine(f, a, b, fa, fm, fb, whole, tol1, spec)
    return total
