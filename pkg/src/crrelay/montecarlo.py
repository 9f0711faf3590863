"""Event-level simulator for the two-sub-slot protocol and its baselines.

This is the independent oracle for every closed form in the analytic module:
it draws the eight squared channel magnitudes, applies the relay's SIC
decision rule and the printed SINR expressions literally, and counts outage
events.

Stream contract
---------------
Channel draws come from a Philox counter-based generator keyed by the master
seed.  Trial i consumes exactly the eight uniform doubles at stream positions
[8*i, 8*i + 8), in the fixed link order pp, sp, ps, ss, pr, sr, rp, rs, each
mapped to an exponential by inversion (-var * log1p(-u)).  Philox counters
move in blocks of four doubles, so trial i starts at counter offset 2*i and
any partition of a trial range generates identical draws.  Outage tallies are
integers summed over chunks, which makes every estimate bit-identical for any
worker count or chunking.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .system import LINKS, DerivedParams, SystemParams, derive

SCHEMES = ("proposed", "noncooperative", "relay_assisted_secondary")

_DOUBLES_PER_TRIAL = 8
_BLOCKS_PER_TRIAL = 2       # Philox counter blocks (4 doubles each) per trial
_CHUNK_TRIALS = 1 << 17     # generation block size; bounds memory, not results


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the eight squared channel magnitudes."""

    pp: float
    sp: float
    ps: float
    ss: float
    pr: float
    sr: float
    rp: float
    rs: float


@dataclass(frozen=True)
class SlotOutcome:
    relay_active: bool
    pri_outage: bool
    sec_outage: bool


@dataclass(frozen=True)
class OutageEstimate:
    """Binomial probability estimate with its normal-approximation error."""

    p_hat: float
    std_err: float
    trials: int
    seed: int

    @classmethod
    def from_counts(cls, successes: int, trials: int, seed: int) -> "OutageEstimate":
        p = successes / trials
        return cls(p_hat=p, std_err=math.sqrt(p * (1.0 - p) / trials),
                   trials=trials, seed=seed)

    def wilson(self, z: float = 3.0) -> tuple:
        """Wilson score interval; preferred over +-z*std_err for rare events."""
        n, p = self.trials, self.p_hat
        denom = 1.0 + z * z / n
        center = (p + z * z / (2.0 * n)) / denom
        half = (z / denom) * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))
        return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class SchemeEstimates:
    """Per-scheme Monte Carlo estimates.

    pri/sec are total outage estimates.  p_d1 is the relay-activation
    frequency (the surrogate activation event for the relay-assisted
    baseline); None for the non-cooperative scheme.  order_p is the frequency
    of the primary-first SIC order (proposed scheme only).  Conditional
    estimates are None when their conditioning event never occurred.
    """

    scheme: str
    alpha: float
    trials: int
    seed: int
    pri: OutageEstimate
    sec: OutageEstimate
    p_d1: OutageEstimate | None = None
    order_p: OutageEstimate | None = None
    pri_d0: OutageEstimate | None = None
    pri_d1: OutageEstimate | None = None
    sec_d0: OutageEstimate | None = None
    sec_d1: OutageEstimate | None = None


def trial_stream(seed: int, index: int) -> np.random.Generator:
    """Generator positioned at trial `index` of the master-seed stream."""
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    bit = np.random.Philox(key=seed)
    bit.advance(_BLOCKS_PER_TRIAL * index)
    return np.random.Generator(bit)


def _uniform_block(seed: int, start: int, n: int) -> np.ndarray:
    """Uniform doubles for trials [start, start+n), shape (n, 8)."""
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    bit = np.random.Philox(key=seed)
    bit.advance(_BLOCKS_PER_TRIAL * start)
    u = np.random.Generator(bit).random(n * _DOUBLES_PER_TRIAL)
    return u.reshape(n, _DOUBLES_PER_TRIAL)


def _draw_block(params: SystemParams, seed: int, start: int, n: int) -> dict:
    """Exponential channel draws per link for trials [start, start+n)."""
    u = _uniform_block(seed, start, n)
    link_vars = params.link_vars.as_dict()
    return {
        name: -link_vars[name] * np.log1p(-u[:, k])
        for k, name in enumerate(LINKS)
    }


def sample_channels(stream: np.random.Generator, params: SystemParams) -> ChannelDraw:
    """Draw the eight squared magnitudes for one slot from a trial stream."""
    u = stream.random(_DOUBLES_PER_TRIAL)
    link_vars = params.link_vars.as_dict()
    vals = {name: -link_vars[name] * math.log1p(-u[k])
            for k, name in enumerate(LINKS)}
    return ChannelDraw(**vals)


def relay_decision(draw: ChannelDraw, derived: DerivedParams):
    """Apply the SIC decision rule to one draw.

    The relay decodes the stronger received signal first, treating the other
    as noise, then the weaker one cleanly; it activates only if both stages
    clear their two-sub-slot thresholds in the chosen order.  Returns
    (active, first_decoded) with first_decoded in {"p", "s", None}.
    """
    x = derived.params.snr_p * draw.pr
    y = derived.snr_s * draw.sr
    lp, ls = derived.lambda_p, derived.lambda_s
    if x > y:
        if x >= lp * (1.0 + y) and y >= ls:
            return True, "p"
    elif y > x:
        if y >= ls * (1.0 + x) and x >= lp:
            return True, "s"
    return False, None


def simulate_slot(draw: ChannelDraw, derived: DerivedParams,
                  alpha: float) -> SlotOutcome:
    """Outage events of one slot of the proposed scheme at a given split."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    p = derived.params
    active, _ = relay_decision(draw, derived)
    v = p.snr_p * draw.pp / (derived.snr_s * draw.sp + 1.0)
    u = derived.snr_s * draw.ss / (p.snr_p * draw.ps + 1.0)
    if active:
        w_p = alpha * p.snr_r * draw.rp / ((1.0 - alpha) * p.snr_r * draw.rp + 1.0)
        w_s = (1.0 - alpha) * p.snr_r * draw.rs / (alpha * p.snr_r * draw.rs + 1.0)
        pri = v + w_p < derived.lambda_p
        sec = u + w_s < derived.lambda_s
    else:
        pri = 2.0 * v < derived.lambda_p
        sec = 2.0 * u < derived.lambda_s
    return SlotOutcome(relay_active=active, pri_outage=bool(pri),
                       sec_outage=bool(sec))


def _count_chunk(derived: DerivedParams, alpha: float, scheme: str,
                 seed: int, start: int, n: int) -> dict:
    """Integer event counts over trials [start, start+n)."""
    p = derived.params
    g = _draw_block(p, seed, start, n)
    snr_p, snr_s, snr_r = p.snr_p, derived.snr_s, p.snr_r
    lp, ls = derived.lambda_p, derived.lambda_s

    v = snr_p * g["pp"] / (snr_s * g["sp"] + 1.0)
    u = snr_s * g["ss"] / (snr_p * g["ps"] + 1.0)

    if scheme == "noncooperative":
        return {
            "pri": int(np.count_nonzero(v < derived.theta_p)),
            "sec": int(np.count_nonzero(u < derived.theta_s)),
        }

    if scheme == "proposed":
        x = snr_p * g["pr"]
        y = snr_s * g["sr"]
        c_p = x > y
        d1 = np.where(
            c_p,
            (x >= lp * (1.0 + y)) & (y >= ls),
            (y > x) & (y >= ls * (1.0 + x)) & (x >= lp),
        )
        w_p = alpha * snr_r * g["rp"] / ((1.0 - alpha) * snr_r * g["rp"] + 1.0)
        w_s = (1.0 - alpha) * snr_r * g["rs"] / (alpha * snr_r * g["rs"] + 1.0)
        pri_out = np.where(d1, v + w_p < lp, 2.0 * v < lp)
        sec_out = np.where(d1, u + w_s < ls, 2.0 * u < ls)
    elif scheme == "relay_assisted_secondary":
        # Surrogate baseline: the relay activates when it decodes the
        # secondary signal through the primary interference; it then forwards
        # it at full power while the primary transmitter repeats, so the
        # primary's second copy sees the relay as interference.
        x = snr_p * g["pr"]
        y = snr_s * g["sr"]
        d1 = y >= ls * (1.0 + x)
        sec_mrc = (snr_s * g["ss"] + snr_r * g["rs"]) / (snr_p * g["ps"] + 1.0)
        pri_mrc = v + snr_p * g["pp"] / (snr_r * g["rp"] + 1.0)
        pri_out = np.where(d1, pri_mrc < lp, 2.0 * v < lp)
        sec_out = np.where(d1, sec_mrc < ls, 2.0 * u < ls)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    counts = {
        "d1": int(np.count_nonzero(d1)),
        "pri_d1": int(np.count_nonzero(d1 & pri_out)),
        "sec_d1": int(np.count_nonzero(d1 & sec_out)),
        "pri_d0": int(np.count_nonzero(~d1 & pri_out)),
        "sec_d0": int(np.count_nonzero(~d1 & sec_out)),
    }
    if scheme == "proposed":
        counts["order_p"] = int(np.count_nonzero(c_p))
    return counts


def estimate(params: SystemParams, alpha: float, trials: int, seed: int,
             scheme: str = "proposed", workers: int = 1) -> SchemeEstimates:
    """Monte Carlo outage estimates over independent per-trial streams.

    Deterministic for fixed (seed, trials, scenario, alpha, scheme) regardless
    of worker count: chunks draw from disjoint trial-index ranges of the same
    counter-based stream and only integer counts are reduced.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if workers < 1:
        raise ValueError("workers must be at least 1")

    derived = derive(params)
    chunks = [(start, min(_CHUNK_TRIALS, trials - start))
              for start in range(0, trials, _CHUNK_TRIALS)]

    def run(chunk):
        start, n = chunk
        return _count_chunk(derived, alpha, scheme, seed, start, n)

    if workers == 1 or len(chunks) == 1:
        partials = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run, chunks))

    totals: dict = {}
    for part in partials:
        for key, val in part.items():
            totals[key] = totals.get(key, 0) + val

    def co(successes, n):
        if n == 0:
            return None
        return OutageEstimate.from_counts(successes, n, seed)

    if scheme == "noncooperative":
        return SchemeEstimates(
            scheme=scheme, alpha=alpha, trials=trials, seed=seed,
            pri=co(totals["pri"], trials), sec=co(totals["sec"], trials),
        )

    n_d1 = totals["d1"]
    n_d0 = trials - n_d1
    return SchemeEstimates(
        scheme=scheme, alpha=alpha, trials=trials, seed=seed,
        pri=co(totals["pri_d0"] + totals["pri_d1"], trials),
        sec=co(totals["sec_d0"] + totals["sec_d1"], trials),
        p_d1=co(n_d1, trials),
        order_p=co(totals["order_p"], trials) if scheme == "proposed" else None,
        pri_d0=co(totals["pri_d0"], n_d0),
        pri_d1=co(totals["pri_d1"], n_d1),
        sec_d0=co(totals["sec_d0"], n_d0),
        sec_d1=co(totals["sec_d1"], n_d1),
    )
