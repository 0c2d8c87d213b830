"""Shift-diagonal operators: exact actions, support policies, invariants."""

import math

import numpy as np
import pytest

from rotorcode import (
    CodeParams,
    NumericalError,
    ShiftDiagonalOperator,
    SupportPolicy,
    angle_shift,
    apply,
    apply_with_leakage,
    commutator_norm,
    compose,
    identity,
    invariant_residuals,
    make_state,
    momentum_shift,
    operator_difference_norm,
    phase_gate,
    qubit_X,
    qubit_Z,
    qudit_pair,
    random_probes,
    residual_rotor_phase,
    scaled,
    stabilizer_ops,
)


def basis(l, pad=4):
    return make_state([(l, 1.0)], pad=pad)


def test_operator_requires_terms():
    with pytest.raises(ValueError, match="at least one term"):
        ShiftDiagonalOperator((), "empty")


def test_support_policy_validation():
    with pytest.raises(ValueError, match="unknown support mode"):
        SupportPolicy("sloppy", 0)
    with pytest.raises(ValueError, match="safe_margin"):
        SupportPolicy("strict", -1)


def test_identity_and_momentum_shift_actions():
    s = basis(2)
    assert apply(identity(), s).amplitude_at(2) == pytest.approx(1.0)
    shifted = apply(momentum_shift(3), s)
    assert shifted.amplitude_at(5) == pytest.approx(1.0)
    assert shifted.amplitude_at(2) == 0.0
    back = apply(momentum_shift(-3), shifted)
    assert back.amplitude_at(2) == pytest.approx(1.0)


def test_angle_shift_is_a_momentum_diagonal_phase():
    s = make_state([(-1, 1.0), (2, 1.0)], pad=1)
    out = apply(angle_shift(0.3), s)
    assert out.amplitude_at(-1) == pytest.approx(np.exp(-0.3j) / math.sqrt(2))
    assert out.amplitude_at(2) == pytest.approx(np.exp(0.6j) / math.sqrt(2))


def test_strict_apply_rejects_margin_violation_with_location():
    s = make_state([(0, 1.0)])  # tight window [0, 0], no safety margin
    with pytest.raises(ValueError, match=r"l=0 within safe margin 1 of window \[0, 0\]"):
        apply(momentum_shift(1), s)


def test_strict_apply_rejects_too_small_margin():
    s = basis(0, pad=8)
    with pytest.raises(ValueError, match="safe_margin 1 < operator max shift 2"):
        apply(momentum_shift(2), s, SupportPolicy("strict", 1))


def test_strict_apply_widens_window_by_shift_hull():
    s = basis(0, pad=2)  # window [-2, 2]
    out = apply(momentum_shift(2), s)
    assert (out.l_min, out.l_max) == (-2, 4)
    assert out.normalized


def test_clip_apply_reports_leakage_and_renormalizes():
    s = make_state([(0, 1.0), (1, 1.0)])  # window [0, 1]
    out, leak = apply_with_leakage(momentum_shift(1), s, SupportPolicy("clip"))
    assert (out.l_min, out.l_max) == (0, 1)
    assert leak == pytest.approx(0.5)
    assert out.amplitude_at(1) == pytest.approx(1.0)
    assert out.norm() == pytest.approx(1.0)


def test_clip_apply_raises_when_everything_leaks():
    s = make_state([(0, 1.0)])
    with pytest.raises(NumericalError, match="discarded the whole state"):
        apply(momentum_shift(1), s, SupportPolicy("clip"))


@pytest.mark.parametrize("r", [1, 3])
def test_qubit_Z_sign_pattern(r):
    Z = qubit_Z(1, r)
    for l in range(-3 * r, 3 * r + 1):
        out = apply(Z, basis(l))
        assert out.amplitude_at(l) == pytest.approx((-1.0) ** (l // r))


@pytest.mark.parametrize("r", [1, 3])
@pytest.mark.parametrize("j", [1, 2])
def test_qubit_X_flips_digit_j(j, r):
    s_step = 2 ** (j - 1) * r
    X = qubit_X(j, r)
    for base in (-4 * s_step, 0, 2 * s_step):
        lo = base  # digit j even here
        hi = base + s_step  # digit j odd here
        up = apply(X, basis(lo, pad=2 * s_step))
        assert up.amplitude_at(hi) == pytest.approx(1.0)
        assert sum(abs(up.amplitudes) ** 2) == pytest.approx(1.0)
        down = apply(X, basis(hi, pad=2 * s_step))
        assert down.amplitude_at(lo) == pytest.approx(1.0)


def test_qubit_X_squares_to_identity_on_random_states():
    rng = np.random.default_rng(23)
    X = qubit_X(1, 3)
    for p in random_probes(rng, count=5):
        twice = apply(X, apply(X, p))
        assert operator_difference_norm(identity(), identity(), [p]) == 0.0
        overlap = sum(
            np.conj(twice.amplitude_at(int(l))) * p.amplitude_at(int(l))
            for l in p.ls
        )
        assert abs(overlap - 1.0) < 1e-12


def test_qudit_cyclic_raise_and_clock():
    d, r = 3, 2
    Z, X = qudit_pair(1, d, r)
    s = d ** 0 * r
    # digit 0 -> 1 -> 2 -> 0 (the top digit wraps by the -ds shift)
    state = basis(0, pad=3 * d * s)
    seen = []
    for _ in range(d):
        state = apply(X, state)
        hull = state.support_hull(cutoff=1e-9)
        assert hull[0] == hull[1]
        seen.append(hull[0])
    assert seen == [s, 2 * s, 0]
    omega = np.exp(2j * np.pi / d)
    for l in range(-2 * d * s, 2 * d * s + 1):
        out = apply(Z, basis(l))
        assert out.amplitude_at(l) == pytest.approx(omega ** ((l // s) % d))


def test_qudit_validation():
    with pytest.raises(ValueError, match="d must be >= 2"):
        qudit_pair(1, 1)
    with pytest.raises(ValueError, match="j >= 1"):
        qudit_pair(0, 3)


def test_phase_gate_sign_table():
    r = 1
    R = phase_gate(1, 2, r)
    # digits (p1, p2) at l = p1 + 2 p2 within the fundamental block
    expected = {0: 1.0, 1: 1.0, 2: 1.0, 3: -1.0}
    for l, sign in expected.items():
        out = apply(R, basis(l))
        assert out.amplitude_at(l) == pytest.approx(sign)


def test_phase_gate_rejects_equal_indices():
    with pytest.raises(ValueError, match="distinct"):
        phase_gate(2, 2)


def test_stabilizer_ops_match_code_parameters():
    params = CodeParams(d=2, N=2, delta_L=1)  # r=3, m=12
    S_theta, S_L = stabilizer_ops(params)
    assert S_theta.shifts() == (12,)
    out = apply(S_L, basis(5))
    assert out.amplitude_at(5) == pytest.approx(np.exp(2j * np.pi * 2 / 3))


def test_residual_rotor_phase_uses_floor_toward_minus_infinity():
    T = residual_rotor_phase(0.5, 12)
    assert apply(T, basis(-1)).amplitude_at(-1) == pytest.approx(np.exp(-0.5j))
    assert apply(T, basis(11)).amplitude_at(11) == pytest.approx(1.0)
    assert apply(T, basis(12)).amplitude_at(12) == pytest.approx(np.exp(0.5j))


def test_compose_applies_right_factor_first():
    a = 0.7
    s = basis(2)
    left = apply(compose(angle_shift(a), momentum_shift(1)), s)
    # V first, then the diagonal phase sees l = 3
    assert left.amplitude_at(3) == pytest.approx(np.exp(1j * a * 3))
    right = apply(compose(momentum_shift(1), angle_shift(a)), s)
    assert right.amplitude_at(3) == pytest.approx(np.exp(1j * a * 2))


def test_scaled_multiplies_the_action():
    s = basis(1)
    out = apply(scaled(momentum_shift(2), 0.5j), s, SupportPolicy("strict", 2))
    assert out.amplitude_at(3) == pytest.approx(0.5j)


def test_commutator_and_difference_norms():
    rng = np.random.default_rng(31)
    probes = random_probes(rng, count=6)
    assert commutator_norm(qubit_Z(1), qubit_Z(2), probes) == 0.0
    # {X1, Z1} = 0 means the commutator norm is 2 ||X1 Z1 probe||-ish, > 0
    assert commutator_norm(qubit_X(1), qubit_Z(1), probes) > 0.5
    assert operator_difference_norm(qubit_Z(1), qubit_Z(1), probes) == 0.0
    assert operator_difference_norm(qubit_Z(1), qubit_Z(2), probes) > 0.5


def test_random_probes_respect_margin():
    rng = np.random.default_rng(7)
    probes = random_probes(rng, count=10, window_half=64, support=5, margin=16)
    for p in probes:
        lo, hi = p.support_hull()
        assert lo >= -64 + 16 and hi <= 64 - 16
        assert p.normalized
    with pytest.raises(ValueError, match="margin"):
        random_probes(rng, margin=300, window_half=100)


@pytest.mark.parametrize("r", [1, 3])
def test_invariant_suite_is_numerically_exact(r):
    rng = np.random.default_rng(101)
    checks = invariant_residuals(r, rng, probes=20)
    assert len(checks) == 27
    worst = max(res for _, res in checks)
    assert worst < 1e-12, f"worst residual {worst}"
    names = [name for name, _ in checks]
    assert any("residual rotor" in n for n in names)
    assert any("omega" in n for n in names)


def test_invariant_suite_flags_a_corrupted_operator():
    rng = np.random.default_rng(101)
    checks = invariant_residuals(3, rng, probes=20, corrupt=True)
    bad = [name for name, res in checks if res > 1e-12]
    assert bad, "corruption must be detected"
    assert any("X1" in name for name in bad)
