"""Error channel, syndrome extraction, and correction round trips.

The modeled channel is a rigid rotation-plus-kick

    E(eps, e) = V^e . e^{i eps L}

(drift the angle by eps, then shift every momentum by e).  Both syndromes
are read without disturbing the encoded content:

* angular residue: the phase of <V^m>, divided by -m, lands in the sector
  (-pi/m, pi/m] (the boundary +pi/m is kept in the sector);
* momentum residue: the tooth residue class mod r, either from a sampled
  momentum (with the projective collapse onto that residue class) or from
  the phase of the diagonal stabilizer expectation <S_L>.

Correction applies V^{-q} e^{-i theta L}.  A kick beyond the protected
range |e| <= delta_L aliases onto the wrong residue representative and the
correction walks the state onto another codeword: a logical error.

run_round_trip also models what a projective angular measurement would do
to the approximant's own spread: each trial draws a latent deviation u from
the angle density and classifies the wrap of eps + u out of the sector as a
logical phase error.  For the fixed channel the state-level pass is fully
deterministic, so it is evaluated once per call and its fidelity is shared
by all trial records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import weyl_algebra as wa
from .analysis import angle_deviation_sampler
from .errors import NumericalError
from .code_space import Approximant, CodeParams, logical_encode
from .rotor_state import RotorState, fidelity, pad_state

EXPECTATION_TOL = 1e-12
RESIDUE_MASS_TOL = 1e-15


@dataclass(frozen=True)
class ErrorEvent:
    """One rigid channel use: angle drift epsilon, momentum kick e."""

    epsilon: float
    e: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")
        object.__setattr__(self, "e", int(self.e))


@dataclass(frozen=True)
class Syndrome:
    """Angular residue in (-pi/m, pi/m] and centered momentum residue."""

    theta_residue: float
    q: int


def centered_angle(x: float, period: float) -> tuple[float, int]:
    """Reduce x into (-period/2, period/2]; return (residue, wrap count).

    The boundary is tied upward: x = -period/2 maps to +period/2.
    """
    w = math.ceil(x / period - 0.5)
    return x - w * period, w


def centered_residue(value: int, r: int) -> int:
    """Reduce an integer into [-(r-1)/2, (r-1)/2] for odd r."""
    half = (r - 1) // 2
    return (value + half) % r - half


def apply_error(s: RotorState, event: ErrorEvent) -> RotorState:
    """Apply V^e e^{i eps L} exactly (the window is pre-padded as needed)."""
    op = wa.compose(wa.momentum_shift(event.e), wa.angle_shift(event.epsilon))
    padded = pad_state(s, abs(event.e)) if event.e else s
    return wa.apply(op, padded)


def _vm_expectation(s: RotorState, m: int) -> complex:
    amps = s.amplitudes
    if amps.shape[0] <= m:
        raise ValueError(
            f"window spans fewer than m+1 = {m + 1} momenta; angular syndrome undefined"
        )
    return complex(np.vdot(amps[m:], amps[:-m]))


def _theta_residue_from_state(s: RotorState, m: int) -> float:
    ev = _vm_expectation(s, m)
    if abs(ev) < EXPECTATION_TOL:
        raise NumericalError(
            "angular stabilizer expectation is numerically zero; "
            "the angular residue is undefined on this state"
        )
    theta = -np.angle(ev) / m
    res, _ = centered_angle(theta, 2.0 * math.pi / m)
    return res


def measure_syndrome_expected(s: RotorState, params: CodeParams) -> Syndrome:
    """Non-collapsing syndrome read-off from stabilizer expectation values."""
    theta = _theta_residue_from_state(s, params.m)
    r = params.r
    if r == 1:
        return Syndrome(theta_residue=theta, q=0)
    ls = s.ls
    weights = np.abs(s.amplitudes) ** 2
    phases = np.exp(2j * math.pi * (ls % r) / r)
    ev = complex(np.sum(weights * phases))
    if abs(ev) < EXPECTATION_TOL:
        raise NumericalError(
            "momentum stabilizer expectation is numerically zero; "
            "the residue is undefined on this state"
        )
    q = round(r * float(np.angle(ev)) / (2.0 * math.pi))
    return Syndrome(theta_residue=theta, q=centered_residue(q, r))


def measure_syndrome_sampled(
    s: RotorState, params: CodeParams, rng: np.random.Generator
) -> tuple[Syndrome, RotorState]:
    """Sample one momentum, collapse onto its residue class mod r, read theta.

    Returns the syndrome and the post-measurement state.  The angular part
    is read from <V^m> on the collapsed state, which commutes with the
    residue projection, so the encoded angle information is untouched.
    """
    r = params.r
    if not s.normalized:
        raise ValueError("syndrome sampling needs a normalized state")
    probs = np.abs(s.amplitudes) ** 2
    total = float(probs.sum())
    probs = probs / total
    idx = int(rng.choice(probs.shape[0], p=probs))
    l_sample = int(s.l_min + idx)
    residue = l_sample % r

    mask = (s.ls % r) == residue
    mass = float(np.sum(np.abs(s.amplitudes[mask]) ** 2))
    if mass < RESIDUE_MASS_TOL:
        raise NumericalError(
            f"sampled residue class {residue} (mod {r}) carries mass "
            f"{mass:.3e} < {RESIDUE_MASS_TOL:.0e}"
        )
    collapsed_amps = np.where(mask, s.amplitudes, 0.0) / math.sqrt(mass)
    collapsed = RotorState(s.l_min, s.l_max, collapsed_amps, True)

    theta = _theta_residue_from_state(collapsed, params.m)
    return Syndrome(theta_residue=theta, q=centered_residue(residue, r)), collapsed


def correct(s: RotorState, syndrome: Syndrome, params: CodeParams) -> RotorState:
    """Undo the diagnosed drift and kick: V^{-q} e^{-i theta L}."""
    op = wa.compose(
        wa.momentum_shift(-syndrome.q), wa.angle_shift(-syndrome.theta_residue)
    )
    padded = pad_state(s, abs(syndrome.q)) if syndrome.q else s
    return wa.apply(op, padded)


@dataclass(frozen=True)
class RoundTripRecord:
    """One modeled decode attempt."""

    trial: int
    u: float
    theta_outcome: float
    q_outcome: int
    wrap: int
    digit_shift: int
    angle_error: bool
    momentum_error: bool
    fidelity: float


@dataclass(frozen=True)
class RoundTripSummary:
    """Aggregate of a round-trip run; records hold the per-trial rows."""

    params: CodeParams
    k: int
    epsilon: float
    e: int
    trials: int
    angle_errors: int
    momentum_errors: int
    errors: int
    error_rate: float
    standard_error: float
    state_fidelity: float
    records: tuple[RoundTripRecord, ...] = field(repr=False)


def run_round_trip(
    params: CodeParams,
    k: int,
    event: ErrorEvent,
    trials: int,
    rng: np.random.Generator,
    approx: Approximant | None = None,
    l_lo: int | None = None,
    l_hi: int | None = None,
    syndrome_mode: str = "sampled",
) -> RoundTripSummary:
    """Encode, corrupt, diagnose, correct; classify the logical outcome.

    Per trial, a latent angular deviation u is drawn from the approximant's
    angle density (u = 0 for the ideal comb) and the total displacement
    epsilon + u is reduced into the sector (-pi/m, pi/m]: a nonzero wrap is
    a logical phase error.  The kick residue determines the digit shift
    (e - q)/r, nonzero mod n being a logical momentum error.  The
    state-level encode/corrupt/correct pass is deterministic for the fixed
    channel, so its fidelity against the original codeword is computed once.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if syndrome_mode not in ("sampled", "expected"):
        raise ValueError(f"unknown syndrome_mode {syndrome_mode!r}")

    m, r, n = params.m, params.r, params.n
    sector = 2.0 * math.pi / m

    # state-level pass (deterministic for the fixed event)
    codeword = logical_encode(params, k, approx, l_lo, l_hi)
    corrupted = apply_error(codeword, event)
    if syndrome_mode == "sampled":
        syndrome, post = measure_syndrome_sampled(corrupted, params, rng)
    else:
        syndrome, post = measure_syndrome_expected(corrupted, params), corrupted
    corrected = correct(post, syndrome, params)
    state_fid = fidelity(corrected, codeword)

    # measurement-statistics pass
    if approx is None:
        us = np.zeros(trials)
    else:
        us = angle_deviation_sampler(approx)(rng, trials)

    q_out = centered_residue(event.e % r, r)
    digit_shift = ((event.e - q_out) // r) % n
    momentum_error = digit_shift != 0

    records = []
    angle_errors = 0
    for t in range(trials):
        u = float(us[t])
        theta_out, wrap = centered_angle(event.epsilon + u, sector)
        a_err = wrap != 0
        angle_errors += a_err
        records.append(
            RoundTripRecord(
                trial=t,
                u=u,
                theta_outcome=theta_out,
                q_outcome=q_out,
                wrap=wrap,
                digit_shift=digit_shift,
                angle_error=a_err,
                momentum_error=momentum_error,
                fidelity=state_fid,
            )
        )

    momentum_errors = trials if momentum_error else 0
    errors = sum(1 for rec in records if rec.angle_error or rec.momentum_error)
    rate = errors / trials
    se = math.sqrt(max(rate * (1.0 - rate), 1.0 / trials) / trials)
    return RoundTripSummary(
        params=params,
        k=k,
        epsilon=event.epsilon,
        e=event.e,
        trials=trials,
        angle_errors=angle_errors,
        momentum_errors=momentum_errors,
        errors=errors,
        error_rate=rate,
        standard_error=se,
        state_fidelity=state_fid,
        records=tuple(records),
    )


ROUND_TRIP_COLUMNS = (
    "trial",
    "u",
    "theta_outcome",
    "q_outcome",
    "wrap",
    "digit_shift",
    "angle_error",
    "momentum_error",
    "fidelity",
)


__all__ = [
    "ErrorEvent",
    "Syndrome",
    "RoundTripRecord",
    "RoundTripSummary",
    "ROUND_TRIP_COLUMNS",
    "centered_angle",
    "centered_residue",
    "apply_error",
    "measure_syndrome_expected",
    "measure_syndrome_sampled",
    "correct",
    "run_round_trip",
]
