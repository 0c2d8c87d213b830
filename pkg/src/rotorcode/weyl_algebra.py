"""Shift-diagonal operator algebra for the rotor.

Every operator used by the encoding is a finite sum of terms

    (shift k, diagonal f):   a_l |l>  ->  f(l) a_l |l + k>,

kept symbolic (never materialized as a matrix), so application is exact on
any momentum window and costs O(terms x dim).  The constructors cover the
rotor Weyl pair (V, e^{i alpha L}), the encoded qubit/qudit Weyl pairs, the
entangling phase gate, and the stabilizer pair.

Floor convention: floor(l / k) rounds toward -infinity for negative l
(python integer division), which is what makes the digit patterns periodic
over the whole lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import SimpleNamespace
from typing import Callable, Sequence

import numpy as np

from .errors import NumericalError
from .rotor_state import RotorState

DiagonalFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ShiftDiagonalOperator:
    """Sum of (momentum shift, momentum-diagonal function) terms.

    Diagonal functions must be pure and accept an int64 array of momenta,
    returning complex values; the operator's action is the sum over terms.
    """

    terms: tuple[tuple[int, DiagonalFn], ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("operator needs at least one term")
        object.__setattr__(
            self, "terms", tuple((int(k), f) for k, f in self.terms)
        )

    @property
    def max_abs_shift(self) -> int:
        return max(abs(k) for k, _ in self.terms)

    def shifts(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.terms)


@dataclass(frozen=True)
class SupportPolicy:
    """How to treat the truncation boundary when applying an operator.

    strict: demand a zero-amplitude safety margin at the window boundary and
    widen the output window so no amplitude is ever lost.
    clip: keep the input window, discard shifted-out amplitude, renormalize.
    """

    mode: str = "strict"
    safe_margin: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("strict", "clip"):
            raise ValueError(f"unknown support mode {self.mode!r}")
        if self.safe_margin < 0:
            raise ValueError("safe_margin must be >= 0")


def _raw_apply(op: ShiftDiagonalOperator, s: RotorState) -> tuple[int, np.ndarray]:
    """Term-sum action on the widened window; returns (new l_min, amplitudes)."""
    shifts = op.shifts()
    lo = s.l_min + min(0, min(shifts))
    hi = s.l_max + max(0, max(shifts))
    out = np.zeros(hi - lo + 1, dtype=np.complex128)
    ls = s.ls
    for k, f in op.terms:
        vals = np.asarray(f(ls), dtype=np.complex128)
        start = s.l_min + k - lo
        out[start : start + ls.shape[0]] += vals * s.amplitudes
    return lo, out


def apply(
    op: ShiftDiagonalOperator,
    s: RotorState,
    policy: SupportPolicy | None = None,
) -> RotorState:
    """Apply the operator under the given support policy (default strict).

    When policy is omitted, strict mode with safe_margin equal to the
    operator's largest |shift| is used.
    """
    state, _ = apply_with_leakage(op, s, policy)
    return state


def apply_with_leakage(
    op: ShiftDiagonalOperator,
    s: RotorState,
    policy: SupportPolicy | None = None,
) -> tuple[RotorState, float]:
    """As apply, also returning the squared-norm leakage (clip mode only)."""
    if policy is None:
        policy = SupportPolicy("strict", op.max_abs_shift)

    if policy.mode == "strict":
        margin = policy.safe_margin
        if margin < op.max_abs_shift:
            raise ValueError(
                f"safe_margin {margin} < operator max shift {op.max_abs_shift}"
            )
        if margin > 0:
            amps = s.amplitudes
            near = np.nonzero(np.abs(amps) > 0.0)[0]
            bad = near[
                (near < margin) | (near >= amps.shape[0] - margin)
            ]
            if bad.size:
                l_bad = int(s.l_min + bad[0])
                raise ValueError(
                    f"strict support violation: nonzero amplitude at l={l_bad} "
                    f"within safe margin {margin} of window "
                    f"[{s.l_min}, {s.l_max}]"
                )
        lo, out = _raw_apply(op, s)
        nrm = np.linalg.norm(out)
        return (
            RotorState(lo, lo + out.shape[0] - 1, out, abs(nrm - 1.0) <= 1e-12),
            0.0,
        )

    # clip mode: project back onto the original window, renormalize
    lo, out = _raw_apply(op, s)
    i0 = s.l_min - lo
    kept = out[i0 : i0 + (s.l_max - s.l_min + 1)].copy()
    total = float(np.sum(np.abs(out) ** 2))
    kept_mass = float(np.sum(np.abs(kept) ** 2))
    leakage = total - kept_mass
    if kept_mass <= 0.0:
        raise NumericalError("clip mode discarded the whole state")
    kept /= math.sqrt(kept_mass)
    return RotorState(s.l_min, s.l_max, kept, True), leakage


def identity() -> ShiftDiagonalOperator:
    return ShiftDiagonalOperator(((0, lambda ls: np.ones(ls.shape[0])),), "1")


def angle_shift(alpha: float) -> ShiftDiagonalOperator:
    """e^{i alpha L}: shifts |theta> -> |theta - alpha>; diagonal e^{i alpha l}."""
    a = float(alpha)

    def diag(ls: np.ndarray) -> np.ndarray:
        return np.exp(1j * a * ls)

    return ShiftDiagonalOperator(((0, diag),), f"exp(i {a} L)")


def momentum_shift(k: int) -> ShiftDiagonalOperator:
    """V^k: |l> -> |l + k>."""
    return ShiftDiagonalOperator(
        ((int(k), lambda ls: np.ones(ls.shape[0])),), f"V^{k}"
    )


def _parity_diag(step: int) -> DiagonalFn:
    def diag(ls: np.ndarray) -> np.ndarray:
        return np.where((ls // step) % 2 == 0, 1.0, -1.0).astype(np.complex128)

    return diag


def qubit_Z(j: int, r: int = 1) -> ShiftDiagonalOperator:
    """Z_j = (-1)^floor(l / (2^{j-1} r)): parity of the j-th digit."""
    if j < 1 or r < 1:
        raise ValueError("need j >= 1 and r >= 1")
    return ShiftDiagonalOperator(((0, _parity_diag(2 ** (j - 1) * r)),), f"Z_{j}")


def qubit_X(j: int, r: int = 1) -> ShiftDiagonalOperator:
    """X_j = ((1+Z_j) V^{-s} + V^{s} (1+Z_j)) / 2 with s = 2^{j-1} r.

    Expanded literally into four shift-diagonal terms with shifts +-s.
    """
    if j < 1 or r < 1:
        raise ValueError("need j >= 1 and r >= 1")
    s = 2 ** (j - 1) * r

    def half(ls: np.ndarray) -> np.ndarray:
        return np.full(ls.shape[0], 0.5, dtype=np.complex128)

    def half_parity(ls: np.ndarray) -> np.ndarray:
        return 0.5 * np.where((ls // s) % 2 == 0, 1.0, -1.0).astype(np.complex128)

    def half_parity_shifted(ls: np.ndarray) -> np.ndarray:
        # Z_j evaluated after the V^{-s} shift: (1/2) (-1)^{floor((l-s)/s)}
        return 0.5 * np.where(((ls - s) // s) % 2 == 0, 1.0, -1.0).astype(
            np.complex128
        )

    return ShiftDiagonalOperator(
        (
            (-s, half),
            (-s, half_parity_shifted),
            (s, half),
            (s, half_parity),
        ),
        f"X_{j}",
    )


def qudit_pair(
    j: int, d: int, r: int = 1
) -> tuple[ShiftDiagonalOperator, ShiftDiagonalOperator]:
    """Weyl pair (Z_j, X_j) of the j-th encoded qudit of dimension d.

    Z_j = omega^{floor(l / s)}, omega = e^{2 i pi / d}, s = d^{j-1} r.
    X_j = V^s - (1 - V^{-ds}) P_1 V^s, where P_1 projects onto digit 0
    (floor(l/s) = 0 mod d): the cyclic digit raise, sending digit d-1 back
    to 0 by the -ds shift.
    """
    if d < 2:
        raise ValueError("qudit dimension d must be >= 2")
    if j < 1 or r < 1:
        raise ValueError("need j >= 1 and r >= 1")
    s = d ** (j - 1) * r

    def z_diag(ls: np.ndarray) -> np.ndarray:
        return np.exp(2j * np.pi * ((ls // s) % d) / d)

    def digit_top_after_shift(ls: np.ndarray) -> np.ndarray:
        # indicator of digit d-1, evaluated where P_1 acts (after V^s)
        return ((ls // s) % d == d - 1).astype(np.complex128)

    def one_minus_top(ls: np.ndarray) -> np.ndarray:
        return ((ls // s) % d != d - 1).astype(np.complex128)

    Z = ShiftDiagonalOperator(((0, z_diag),), f"Z_{j}^({d})")
    X = ShiftDiagonalOperator(
        (
            (s, one_minus_top),
            (s - d * s, digit_top_after_shift),
        ),
        f"X_{j}^({d})",
    )
    return Z, X


def phase_gate(j: int, k: int, r: int = 1) -> ShiftDiagonalOperator:
    """R_jk: diagonal two-qubit controlled-Z on digits j and k.

    Value (1 + (-1)^{l_j})/2 + (1 - (-1)^{l_j})/2 * (-1)^{l_k} with
    l_j = floor(l / (2^{j-1} r)): -1 exactly when both digits are odd.
    """
    if j == k:
        raise ValueError("phase gate needs two distinct qubit indices")
    if j < 1 or k < 1 or r < 1:
        raise ValueError("need j, k >= 1 and r >= 1")
    sj = 2 ** (j - 1) * r
    sk = 2 ** (k - 1) * r

    def diag(ls: np.ndarray) -> np.ndarray:
        pj = (ls // sj) % 2
        pk = (ls // sk) % 2
        return np.where((pj == 1) & (pk == 1), -1.0, 1.0).astype(np.complex128)

    return ShiftDiagonalOperator(((0, diag),), f"R_{j}{k}")


def stabilizer_ops(params) -> tuple[ShiftDiagonalOperator, ShiftDiagonalOperator]:
    """(S_theta, S_L) = (V^m, diag e^{2 i pi l / r}) for the given code."""
    m, r = params.m, params.r

    def sl_diag(ls: np.ndarray) -> np.ndarray:
        return np.exp(2j * np.pi * (ls % r) / r)

    s_theta = ShiftDiagonalOperator(
        ((m, lambda ls: np.ones(ls.shape[0])),), "S_theta"
    )
    s_l = ShiftDiagonalOperator(((0, sl_diag),), "S_L")
    return s_theta, s_l


def residual_rotor_phase(alpha: float, m: int) -> ShiftDiagonalOperator:
    """e^{i alpha floor(L/m)}: the residual rotor's angle shift."""
    a = float(alpha)

    def diag(ls: np.ndarray) -> np.ndarray:
        return np.exp(1j * a * (ls // m))

    return ShiftDiagonalOperator(((0, diag),), f"exp(i {a} floor(L/{m}))")


def compose(
    a: ShiftDiagonalOperator, b: ShiftDiagonalOperator
) -> ShiftDiagonalOperator:
    """Operator product a.b: applying the composite equals b then a.

    Term rule: (s_a, f_a)(s_b, f_b) = (s_a + s_b, l -> f_a(l + s_b) f_b(l)).
    """

    def product(fa: DiagonalFn, fb: DiagonalFn, sb: int) -> DiagonalFn:
        def diag(ls: np.ndarray) -> np.ndarray:
            return np.asarray(fa(ls + sb)) * np.asarray(fb(ls))

        return diag

    terms = tuple(
        (sa + sb, product(fa, fb, sb)) for sa, fa in a.terms for sb, fb in b.terms
    )
    return ShiftDiagonalOperator(terms, f"{a.label}.{b.label}")


def _aligned_difference(x: RotorState, y: RotorState) -> float:
    lo = min(x.l_min, y.l_min)
    hi = max(x.l_max, y.l_max)
    buf = np.zeros(hi - lo + 1, dtype=np.complex128)
    buf[x.l_min - lo : x.l_max - lo + 1] += x.amplitudes
    buf[y.l_min - lo : y.l_max - lo + 1] -= y.amplitudes
    return float(np.linalg.norm(buf))


def commutator_norm(
    a: ShiftDiagonalOperator,
    b: ShiftDiagonalOperator,
    probes: Sequence[RotorState],
) -> float:
    """max over probes of || (ab - ba) |probe> ||."""
    worst = 0.0
    for p in probes:
        ab = apply(a, apply(b, p))
        ba = apply(b, apply(a, p))
        worst = max(worst, _aligned_difference(ab, ba))
    return worst


def operator_difference_norm(
    a: ShiftDiagonalOperator,
    b: ShiftDiagonalOperator,
    probes: Sequence[RotorState],
) -> float:
    """max over probes of || (a - b) |probe> ||: action-level operator equality."""
    worst = 0.0
    for p in probes:
        worst = max(worst, _aligned_difference(apply(a, p), apply(b, p)))
    return worst


def scaled(op: ShiftDiagonalOperator, factor: complex) -> ShiftDiagonalOperator:
    """The operator multiplied by a scalar."""

    def scale(f: DiagonalFn) -> DiagonalFn:
        def diag(ls: np.ndarray) -> np.ndarray:
            return factor * np.asarray(f(ls))

        return diag

    return ShiftDiagonalOperator(
        tuple((k, scale(f)) for k, f in op.terms), f"({factor})*{op.label}"
    )


def random_probes(
    rng: np.random.Generator,
    count: int = 20,
    window_half: int = 256,
    support: int = 8,
    margin: int = 64,
) -> list[RotorState]:
    """Random sparse normalized states with a zero margin at the window edge.

    Support momenta are drawn inside [-window_half + margin,
    window_half - margin], so sequences of shift operators stay inside the
    strict support policy.
    """
    if margin >= window_half:
        raise ValueError("margin must be smaller than window_half")
    probes = []
    for _ in range(count):
        ls = rng.integers(
            -window_half + margin, window_half - margin + 1, size=support
        )
        amps = rng.normal(size=support) + 1j * rng.normal(size=support)
        buf = np.zeros(2 * window_half + 1, dtype=np.complex128)
        for l, a in zip(ls, amps):
            buf[int(l) + window_half] += a
        buf /= np.linalg.norm(buf)
        probes.append(RotorState(-window_half, window_half, buf, True))
    return probes


def invariant_residuals(
    r: int,
    rng: np.random.Generator,
    probes: int = 20,
    corrupt: bool = False,
) -> list[tuple[str, float]]:
    """Action residuals of the defining operator identities, one per check.

    All residuals are exact zeros of the algebra (up to float rounding) for
    a correct implementation.  With corrupt=True one term of X_1 is scaled
    by (1 + 1e-6), which every X_1-involving identity must then flag.
    """
    ps = random_probes(rng, count=probes)
    one = identity()
    X1, Z1 = qubit_X(1, r), qubit_Z(1, r)
    if corrupt:
        k0, f0 = X1.terms[0]
        X1 = ShiftDiagonalOperator(
            ((k0, (lambda f: (lambda ls: (1.0 + 1e-6) * np.asarray(f(ls))))(f0)),)
            + X1.terms[1:],
            "X_1(corrupted)",
        )
    X2, Z2 = qubit_X(2, r), qubit_Z(2, r)
    Zq2, Xq2 = qudit_pair(1, 2, r)
    Zq3, Xq3 = qudit_pair(1, 3, r)
    omega = complex(np.exp(2j * np.pi / 3.0))
    R12, R21 = phase_gate(1, 2, r), phase_gate(2, 1, r)
    S_theta, S_L = stabilizer_ops(SimpleNamespace(m=4 * r, r=r))
    T = residual_rotor_phase(0.7, 4 * r)
    V, Vdag = momentum_shift(1), momentum_shift(-1)

    checks: list[tuple[str, float]] = [
        ("X1.X1 = 1", operator_difference_norm(compose(X1, X1), one, ps)),
        ("Z1.Z1 = 1", operator_difference_norm(compose(Z1, Z1), one, ps)),
        (
            "X1.Z1 = -Z1.X1",
            operator_difference_norm(
                compose(X1, Z1), scaled(compose(Z1, X1), -1.0), ps
            ),
        ),
        ("[X1, Z2] = 0", commutator_norm(X1, Z2, ps)),
        ("[X1, X2] = 0", commutator_norm(X1, X2, ps)),
        ("[Z1, Z2] = 0", commutator_norm(Z1, Z2, ps)),
        ("qudit d=2 X matches qubit X", operator_difference_norm(Xq2, X1, ps)),
        ("qudit d=2 Z matches qubit Z", operator_difference_norm(Zq2, Z1, ps)),
        (
            "d=3: X.X.X = 1",
            operator_difference_norm(compose(Xq3, compose(Xq3, Xq3)), one, ps),
        ),
        (
            "d=3: Z.Z.Z = 1",
            operator_difference_norm(compose(Zq3, compose(Zq3, Zq3)), one, ps),
        ),
        (
            "d=3: Z.X = omega X.Z",
            operator_difference_norm(
                compose(Zq3, Xq3), scaled(compose(Xq3, Zq3), omega), ps
            ),
        ),
        ("R12.R12 = 1", operator_difference_norm(compose(R12, R12), one, ps)),
        ("R12 = R21", operator_difference_norm(R12, R21, ps)),
        (
            "R12.X1.R12 = X1.Z2",
            operator_difference_norm(
                compose(R12, compose(X1, R12)), compose(X1, Z2), ps
            ),
        ),
        ("[R12, Z1] = 0", commutator_norm(R12, Z1, ps)),
        ("[S_theta, S_L] = 0", commutator_norm(S_theta, S_L, ps)),
        ("[S_theta, X1] = 0", commutator_norm(S_theta, X1, ps)),
        ("[S_theta, Z1] = 0", commutator_norm(S_theta, Z1, ps)),
        ("[S_L, X1] = 0", commutator_norm(S_L, X1, ps)),
        ("[S_L, Z1] = 0", commutator_norm(S_L, Z1, ps)),
        (
            "residual rotor: T.S_theta = e^{ia} S_theta.T",
            operator_difference_norm(
                compose(T, S_theta),
                scaled(compose(S_theta, T), complex(np.exp(0.7j))),
                ps,
            ),
        ),
        ("residual rotor: [T, X1] = 0", commutator_norm(T, X1, ps)),
        ("residual rotor: [T, Z1] = 0", commutator_norm(T, Z1, ps)),
        ("residual rotor: [T, S_L] = 0", commutator_norm(T, S_L, ps)),
        ("V.V† = 1", operator_difference_norm(compose(V, Vdag), one, ps)),
        (
            "e^{iaL}.e^{-iaL} = 1",
            operator_difference_norm(
                compose(angle_shift(0.7), angle_shift(-0.7)), one, ps
            ),
        ),
        (
            "e^{iaL}.V = e^{ia} V.e^{iaL}",
            operator_difference_norm(
                compose(angle_shift(0.7), V),
                scaled(compose(V, angle_shift(0.7)), complex(np.exp(0.7j))),
                ps,
            ),
        ),
    ]
    return checks


__all__ = [
    "ShiftDiagonalOperator",
    "SupportPolicy",
    "apply",
    "apply_with_leakage",
    "identity",
    "angle_shift",
    "momentum_shift",
    "qubit_Z",
    "qubit_X",
    "qudit_pair",
    "phase_gate",
    "stabilizer_ops",
    "residual_rotor_phase",
    "compose",
    "commutator_norm",
    "operator_difference_norm",
    "scaled",
    "random_probes",
    "invariant_residuals",
]
