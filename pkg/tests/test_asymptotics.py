import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dftuncertainty.asymptotics import (
    commutator_spectrum,
    dispersion_vs_variance,
    dual_membership_epsilon,
    dual_projector_p_delta,
    expansion_residual,
    lemma_a1_check,
    lemma_a2_check,
    lemma_a2_recenter,
    localization_mask,
    make_gaussian,
    membership_epsilon,
    normalized_uv_commutator,
    projector_p_delta,
    v_translation_set_property,
)
from dftuncertainty.linalg import haar_state, haar_states, make_rng
from dftuncertainty.operators import (
    basis_state,
    build_generators,
    build_operator_set,
    dft_matrix,
    dual_basis_state,
    translate,
)

deltas = st.floats(0.01, math.pi / 2)


def test_mask_full_at_pi_over_2():
    assert localization_mask(9, math.pi / 2).all()
    assert localization_mask(8, math.pi / 2).all()


def test_mask_boundary_index_included():
    # radius (2/pi) * 4 * delta = 2 exactly
    assert np.count_nonzero(localization_mask(8, math.pi / 4)) == 5


@given(st.integers(2, 60), deltas)
@settings(max_examples=60, deadline=None)
def test_projector_properties(d, delta):
    P = projector_p_delta(d, delta)
    assert np.array_equal(P @ P, P) and np.array_equal(P.conj().T, P)
    U = build_operator_set(d).U
    assert np.max(np.abs(U.conj().T @ P @ U - P)) < 1e-14
    if d % 2:
        assert np.count_nonzero(np.diag(P)) % 2 == 1


def test_dual_projector_is_projector():
    Q = dual_projector_p_delta(12, 0.7)
    assert np.max(np.abs(Q @ Q - Q)) < 1e-13


def test_membership_examples():
    d = 32
    assert membership_epsilon(basis_state(0, d), 0.2) == 0.0
    rank = np.count_nonzero(localization_mask(d, 0.4))
    assert membership_epsilon(dual_basis_state(3, d), 0.4) == pytest.approx(1 - rank / d, abs=1e-14)
    g = make_gaussian(256, 1.0)
    assert membership_epsilon(g.state, 0.5) < 0.01
    assert dual_membership_epsilon(g.state, 0.5) < 0.01


def test_dual_membership_matches_projector():
    d = 20
    psi = haar_state(d, make_rng(3))
    Q = dual_projector_p_delta(d, 0.6)
    direct = 1 - np.vdot(psi, Q @ psi).real
    assert dual_membership_epsilon(psi, 0.6) == pytest.approx(direct, abs=1e-13)


@given(st.integers(2, 40), st.integers(0, 2**32 - 1), deltas, deltas)
@settings(max_examples=60, deadline=None)
def test_epsilon_monotone(d, seed, d1, d2):
    psi = haar_state(d, make_rng(seed))
    lo, hi = sorted((d1, d2))
    assert membership_epsilon(psi, hi) <= membership_epsilon(psi, lo) + 1e-15


def test_delta_rejected():
    with pytest.raises(ValueError):
        localization_mask(8, 0.0)
    with pytest.raises(ValueError):
        localization_mask(8, 2.0)


def test_dispersion_bound_examples():
    ops = build_operator_set(128)
    assert lemma_a1_check(basis_state(0, 128), ops, 0.3).holds()
    assert lemma_a1_check(make_gaussian(128, 1.0).state, ops, 0.6).slack > 0
    ops16 = build_operator_set(16)
    assert lemma_a1_check(haar_state(16, make_rng(1)), ops16, 0.3).holds()


def corrected_dispersion_bound(psi, delta):
    # on I_{0,delta} the phases 2 pi j / d reach 2 delta, so Re<U> >= cos(2 delta) - 2 eps
    eps = membership_epsilon(psi, delta)
    return 1 - max(0.0, math.cos(2 * delta) - 2 * eps) ** 2


@given(st.integers(4, 64), st.integers(0, 2**32 - 1), deltas)
@settings(max_examples=100, deadline=None)
def test_corrected_dispersion_bound(d, seed, delta):
    ops = build_operator_set(d)
    psi = haar_state(d, make_rng(seed))
    rep = lemma_a1_check(psi, ops, delta)
    assert rep.value <= corrected_dispersion_bound(psi, delta) + 1e-12


def test_corrected_dispersion_bound_gaussians():
    for d in (64, 128, 256, 512):
        ops = build_operator_set(d)
        for sigma in (0.5, 1.0, 2.0):
            g = make_gaussian(d, sigma).state
            for delta in (0.3, 0.5):
                du2 = lemma_a1_check(g, ops, delta).value
                assert du2 <= corrected_dispersion_bound(g, delta) + 1e-12


def test_dispersion_bound_counterexamples():
    # the delta^2 / 2 + 2 eps estimate charges cos(delta) for a set that allows
    # phases up to 2 delta; these states violate it
    rep = lemma_a1_check(make_gaussian(64, 2.0).state, build_operator_set(64), 0.5)
    assert rep.slack < -0.01
    rep = lemma_a1_check(haar_state(4, make_rng(0)), build_operator_set(4), 1.0)
    assert rep.slack < -1e-3


def test_recenter():
    d = 256
    ops = build_operator_set(d)
    g = make_gaussian(d, 1.0).state
    assert lemma_a2_recenter(g, ops).k == 0
    rec = lemma_a2_recenter(translate(g, 0, 3, ops), ops)
    assert rec.k == 3
    assert abs(rec.alpha_after) <= math.pi / d + 1e-14
    assert lemma_a2_check(g, ops, 0.5).holds()


@given(st.integers(0, 2**32 - 1), st.integers(0, 255))
@settings(max_examples=30, deadline=None)
def test_recenter_phase_bound(seed, b):
    d = 64
    ops = build_operator_set(d)
    psi = translate(make_gaussian(d, 0.7).state, int(seed % 5), b, ops)
    rec = lemma_a2_recenter(psi, ops)
    assert abs(rec.alpha_after) <= math.pi / d + 1e-14


def test_expansion_residual():
    d = 256
    ops = build_operator_set(d)
    assert expansion_residual(basis_state(0, d), ops, 0.5).value == 0.0
    rep = expansion_residual(make_gaussian(d, 1.0).state, ops, 0.5)
    assert rep.slack > 0.5
    assert expansion_residual(dual_basis_state(2, d), ops, 0.3).holds()


def test_dispersion_proxy():
    d = 512
    ops = build_operator_set(d)
    assert dispersion_vs_variance(make_gaussian(d, 1.0).state, ops).relative_gap < 0.05
    zero = dispersion_vs_variance(basis_state(0, d), ops)
    assert zero.dU2 == 0.0 and zero.proxy == 0.0


def test_commutator_matrix_sign():
    # -i[u, v] is Hermitian and equals -i times the direct commutator
    d = 9
    u, v = build_generators(d)
    m = normalized_uv_commutator(d)
    assert np.max(np.abs(m - (-1j) * (u @ v - v @ u))) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 10, 51])
def test_commutator_spectrum_small(d):
    rep = commutator_spectrum(d)
    assert rep.trace_residual <= 1e-6 * d
    assert 0.0 <= rep.near_one_fraction <= 1.0
    ref = np.linalg.eigvalsh(normalized_uv_commutator(d))
    assert np.max(np.abs(rep.eigenvalues - ref)) < 1e-9 * max(1, np.abs(ref).max())
    h = rep.histogram()
    assert sum(h["counts"]) == d


def test_translation_set_property():
    d = 256
    ops = build_operator_set(d)
    g = make_gaussian(d, 1.0).state
    for n in range(0, 5):
        rep = v_translation_set_property(g, n, 0.4, ops)
        assert rep.holds
        if n == 0:
            assert rep.eps_after == rep.eps_before
    assert v_translation_set_property(basis_state(0, d), 1, 0.1, ops).holds


@given(st.integers(4, 32).map(lambda h: 2 * h), st.integers(-3, 3), st.floats(0.05, 1.0),
       st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_translation_set_property_even_d(d, n, delta, seed):
    if delta + math.pi * abs(n) / d > math.pi / 2:
        return
    ops = build_operator_set(d)
    assert v_translation_set_property(haar_state(d, make_rng(seed)), n, delta, ops).holds


def test_translation_set_property_odd_d_counterexample():
    # for odd d the radius grows by |n| (d - 1) / d < |n|, so an index can drop out
    d = 55
    ops = build_operator_set(d)
    rep = v_translation_set_property(haar_state(d, make_rng(0)), -2, 0.466796875, ops)
    assert rep.eps_after > rep.eps_before + 1e-4


def test_gaussian_family():
    g = make_gaussian(256, 1.0)
    assert g.norm_squared == pytest.approx(g.predicted_norm_squared, rel=1e-9)
    f = dft_matrix(256)
    assert abs(np.vdot(g.state, f @ g.state)) ** 2 > 0.99
    flat = make_gaussian(16, 1e4).state
    assert np.allclose(np.abs(flat), 0.25, atol=1e-4)
    with pytest.raises(ValueError):
        make_gaussian(16, 0.0)


@pytest.mark.parametrize("d", [64, 128, 256])
def test_gaussian_self_dual(d):
    g = make_gaussian(d, 1.0).state
    for f in (dft_matrix(d), dft_matrix(d).conj().T):
        assert abs(np.vdot(g, f @ g)) ** 2 > 0.99
